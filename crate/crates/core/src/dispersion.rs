//! Exciton band structure on the square lattice.

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::units::{LatticeConfig, PhysicalConstants};

/// In-plane wavevector (Å⁻¹).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct WaveVector2D {
    pub k_x: f64,
    pub k_y: f64,
}

impl WaveVector2D {
    pub const ZERO: Self = Self { k_x: 0.0, k_y: 0.0 };

    pub fn new(k_x: f64, k_y: f64) -> Self {
        Self { k_x, k_y }
    }

    /// Wavevector of magnitude `k` at angle `direction` from the lattice x axis.
    pub fn from_polar(k: f64, direction: f64) -> Self {
        Self::new(k * direction.cos(), k * direction.sin())
    }

    pub fn magnitude(&self) -> f64 {
        self.k_x.hypot(self.k_y)
    }

    pub fn direction(&self) -> f64 {
        self.k_y.atan2(self.k_x)
    }

    pub fn is_finite(&self) -> bool {
        self.k_x.is_finite() && self.k_y.is_finite()
    }

    /// First-Brillouin-zone representative, each component in (−π/a, π/a].
    pub fn fold(&self, a: f64) -> Self {
        Self::new(fold_component(self.k_x, a), fold_component(self.k_y, a))
    }
}

impl std::ops::Neg for WaveVector2D {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.k_x, -self.k_y)
    }
}

fn fold_component(k: f64, a: f64) -> f64 {
    let g = TAU / a;
    // shift into (−g/2, g/2]
    let r = (k + PI / a).rem_euclid(g);
    if r == 0.0 {
        PI / a
    } else {
        r - PI / a
    }
}

/// A point on the exciton band with the matching free-photon energy ħc|k|.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandPoint {
    pub k: WaveVector2D,
    pub energy: f64,
    pub photon_energy: f64,
}

impl BandPoint {
    pub fn new(consts: &PhysicalConstants, cfg: &LatticeConfig, k: WaveVector2D) -> Self {
        Self {
            k,
            energy: exciton_energy(cfg, k),
            photon_energy: consts.photon_energy(k.magnitude()),
        }
    }

    /// Inside the light cone the exciton can couple to a free photon.
    pub fn is_radiative(&self) -> bool {
        self.photon_energy < self.energy
    }
}

/// Nearest-neighbour band E_A − 2J[cos(k_x a) + cos(k_y a)] in eV.
pub fn exciton_energy(cfg: &LatticeConfig, k: WaveVector2D) -> f64 {
    cfg.e_a - 2.0 * cfg.j * ((k.k_x * cfg.a).cos() + (k.k_y * cfg.a).cos())
}

/// Hopping amplitude `j` (eV) to the site displaced by `r` (Å).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coupling {
    pub r: [f64; 2],
    pub j: f64,
}

impl Coupling {
    pub fn new(rx: f64, ry: f64, j: f64) -> Self {
        Self { r: [rx, ry], j }
    }
}

/// The four nearest-neighbour couplings reproducing [`exciton_energy`]:
/// J(±a x̂) = J(±a ŷ) = −J.
pub fn nearest_neighbor_couplings(cfg: &LatticeConfig) -> Vec<Coupling> {
    let (a, j) = (cfg.a, -cfg.j);
    vec![
        Coupling::new(a, 0.0, j),
        Coupling::new(-a, 0.0, j),
        Coupling::new(0.0, a, j),
        Coupling::new(0.0, -a, j),
    ]
}

/// Lattice Fourier sum E_A + Σ_R J(R) e^{ik·R} in eV.
///
/// The coupling list must be closed under R → −R with J(−R) = J(R), which makes
/// the sum real.
pub fn general_dispersion(cfg: &LatticeConfig, couplings: &[Coupling], k: WaveVector2D) -> Result<f64> {
    check_symmetric(couplings)?;
    Ok(fourier_sum(cfg, couplings, k).0)
}

/// Real and imaginary parts of E_A + Σ_R J(R) e^{ik·R}.
pub fn fourier_sum(cfg: &LatticeConfig, couplings: &[Coupling], k: WaveVector2D) -> (f64, f64) {
    couplings.iter().fold((cfg.e_a, 0.0), |(re, im), c| {
        let phase = k.k_x * c.r[0] + k.k_y * c.r[1];
        let (s, co) = phase.sin_cos();
        (re + c.j * co, im + c.j * s)
    })
}

fn check_symmetric(couplings: &[Coupling]) -> Result<()> {
    let close = |x: f64, y: f64| (x - y).abs() <= 1e-12 * x.abs().max(y.abs()).max(1.0);
    for c in couplings {
        let partner = couplings
            .iter()
            .any(|d| close(d.r[0], -c.r[0]) && close(d.r[1], -c.r[1]) && close(d.j, c.j));
        if !partner {
            return Err(Error::AsymmetricCoupling {
                rx: c.r[0],
                ry: c.r[1],
            });
        }
    }
    Ok(())
}

/// Allowed wavenumbers along one axis of N sites: 2πm/(Na) with the zone-edge
/// value π/a counted once, ascending.
pub fn axis_wavenumbers(n: usize, a: f64) -> Vec<f64> {
    let n_i = n as i64;
    let lo = -((n_i + 1) / 2) + 1;
    let hi = n_i / 2;
    (lo..=hi)
        .map(|m| TAU * m as f64 / (n as f64 * a))
        .collect()
}

/// All N_x·N_y allowed wavevectors, row-major with k_x outer and k_y inner.
pub fn bz_grid(cfg: &LatticeConfig) -> Vec<WaveVector2D> {
    let xs = axis_wavenumbers(cfg.n_x, cfg.a);
    let ys = axis_wavenumbers(cfg.n_y, cfg.a);
    xs.iter()
        .flat_map(|&kx| ys.iter().map(move |&ky| WaveVector2D::new(kx, ky)))
        .collect()
}
