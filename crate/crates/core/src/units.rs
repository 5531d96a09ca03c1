//! Physical constants and the shared configuration types.
//!
//! Everything in this crate works in an eV/Å system: energies in eV, lengths
//! in Å, dipoles in e·Å, and rates reported as energies (ħΓ in eV). The only
//! SI quantity is time, which appears in the emission envelope in seconds.
//!
//! Terms of the form μ²/ε₀ are resolved through the Coulomb factor
//! e²/(4πε₀) = 14.399645 eV·Å, so that μ²/ε₀ = 4π·c_f·μ² in eV·Å³ for μ in e·Å.

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result, Violation};

/// CODATA values in the eV/Å system. Immutable; use [`PhysicalConstants::CODATA`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    hbar_c: f64,
    coulomb_factor: f64,
    hbar: f64,
}

impl PhysicalConstants {
    pub const CODATA: Self = Self {
        hbar_c: 1973.269804,
        coulomb_factor: 14.399645,
        hbar: 6.582119569e-16,
    };

    /// ħc in eV·Å.
    pub fn hbar_c(&self) -> f64 {
        self.hbar_c
    }

    /// e²/(4πε₀) in eV·Å.
    pub fn coulomb_factor(&self) -> f64 {
        self.coulomb_factor
    }

    /// ħ in eV·s.
    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    /// e²/ε₀ in eV·Å, i.e. 4π·c_f.
    pub fn inverse_epsilon0(&self) -> f64 {
        4.0 * PI * self.coulomb_factor
    }

    /// Speed of light in Å/s, derived as ħc/ħ.
    pub fn speed_of_light(&self) -> f64 {
        self.hbar_c / self.hbar
    }

    /// Convert a rate expressed as an energy ħΓ (eV) to Γ in s⁻¹.
    pub fn rate_ev_to_per_second(&self, gamma_ev: f64) -> f64 {
        gamma_ev / self.hbar
    }

    pub fn rate_per_second_to_ev(&self, gamma_per_s: f64) -> f64 {
        gamma_per_s * self.hbar
    }

    /// Photon energy ħck for an in-plane wavenumber `k` (Å⁻¹).
    pub fn photon_energy(&self, k: f64) -> f64 {
        self.hbar_c * k
    }

    pub fn wavenumber(&self, photon_energy: f64) -> f64 {
        photon_energy / self.hbar_c
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::CODATA
    }
}

/// Square lattice of two-level atoms with nearest-neighbour hopping `j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeConfig {
    /// Lattice constant (Å).
    pub a: f64,
    pub n_x: usize,
    pub n_y: usize,
    /// Atomic transition energy (eV).
    pub e_a: f64,
    /// Nearest-neighbour hopping (eV).
    pub j: f64,
}

impl LatticeConfig {
    pub fn site_count(&self) -> usize {
        self.n_x * self.n_y
    }

    /// Photon energy at the Brillouin-zone edge, ħcπ/a.
    pub fn zone_edge_energy(&self, consts: &PhysicalConstants) -> f64 {
        consts.hbar_c() * PI / self.a
    }
}

impl Default for LatticeConfig {
    /// Typical optical-lattice numbers: a = 1000 Å, E_A = 1 eV, flat band.
    fn default() -> Self {
        Self {
            a: 1000.0,
            n_x: 100,
            n_y: 100,
            e_a: 1.0,
            j: 0.0,
        }
    }
}

/// Transition dipole of magnitude `mu` (e·Å), tilted by `theta` from the lattice
/// normal, with in-plane component at angle `phi` to the exciton wavevector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DipoleOrientation {
    pub mu: f64,
    pub theta: f64,
    pub phi: f64,
}

impl DipoleOrientation {
    pub fn new(mu: f64, theta: f64, phi: f64) -> Self {
        Self { mu, theta, phi }
    }

    /// Same magnitude, angles replaced. `phi` is wrapped into [0, 2π).
    pub fn with_angles(&self, theta: f64, phi: f64) -> Self {
        Self {
            mu: self.mu,
            theta,
            phi: wrap_angle(phi),
        }
    }

    pub fn mu_parallel(&self) -> f64 {
        self.mu * self.theta.sin()
    }

    pub fn mu_z(&self) -> f64 {
        self.mu * self.theta.cos()
    }
}

impl Default for DipoleOrientation {
    fn default() -> Self {
        Self::new(1.0, 0.0, 0.0)
    }
}

/// Wrap an angle into [0, 2π).
pub fn wrap_angle(phi: f64) -> f64 {
    let w = phi.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if w >= TAU {
        0.0
    } else {
        w
    }
}

/// Check every invariant of the lattice and dipole; on success both are returned
/// unchanged, otherwise every violation is reported.
pub fn validate_config(
    cfg: LatticeConfig,
    dip: DipoleOrientation,
) -> Result<(LatticeConfig, DipoleOrientation)> {
    let mut v = Vec::new();
    let mut check = |ok: bool, field, value, reason| {
        if !ok {
            v.push(Violation {
                field,
                value,
                reason,
            });
        }
    };

    check(cfg.a.is_finite() && cfg.a > 0.0, "a_angstrom", cfg.a, "must be positive and finite");
    check(cfg.n_x >= 1, "n_x", cfg.n_x as f64, "must be at least 1");
    check(cfg.n_y >= 1, "n_y", cfg.n_y as f64, "must be at least 1");
    check(cfg.e_a.is_finite() && cfg.e_a > 0.0, "e_a_ev", cfg.e_a, "must be positive and finite");
    check(cfg.j.is_finite(), "j_ev", cfg.j, "must be finite");
    if cfg.e_a.is_finite() && cfg.j.is_finite() {
        check(
            cfg.e_a - 4.0 * cfg.j.abs() > 0.0,
            "j_ev",
            cfg.j,
            "band touches zero: E_A - 4|J| must be positive",
        );
    }
    check(dip.mu.is_finite() && dip.mu > 0.0, "mu_e_angstrom", dip.mu, "must be positive and finite");
    check(
        (0.0..=PI).contains(&dip.theta),
        "theta_rad",
        dip.theta,
        "must lie in [0, pi]",
    );
    check((0.0..TAU).contains(&dip.phi), "phi_rad", dip.phi, "must lie in [0, 2pi)");

    if v.is_empty() {
        Ok((cfg, dip))
    } else {
        Err(Error::InvalidConfig(v))
    }
}
