//! Closed-form radiative damping of a lattice exciton.
//!
//! For an exciton of energy E_ex at in-plane wavenumber k, with photon-line
//! energy E_0 = ħck and x = E_0/E_ex, the rate (as an energy) is
//!
//! ```text
//! ħΓ_ex = μ²/(2ε₀a²ħc) · E_ex²/√(E_ex² − E_0²) · B(θ, φ, x)
//! B     = sin²θ(1 − cos²φ x²) + cos²θ x² − 2 sinθ cosθ cosφ x √(1 − x²)
//! ```
//!
//! and vanishes identically once E_0 ≥ E_ex: no free photon then matches both
//! the energy and the in-plane momentum of the exciton. The orientation bracket
//! B is a sum of squares,
//!
//! ```text
//! B = (sinθ cosφ √(1 − x²) − cosθ x)² + sin²θ (1 − cos²φ),
//! ```
//!
//! which is the form used for evaluation since it is non-negative by
//! construction. The signed first term is what changes sign at a dark point.

use std::f64::consts::PI;
use std::fmt;

use crate::dispersion::{exciton_energy, WaveVector2D};
use crate::error::{Error, Result};
use crate::roots::bisect;
use crate::units::{DipoleOrientation, LatticeConfig, PhysicalConstants};

/// Width of the band below E_ex, relative to E_ex, where the rate is reported
/// as divergent.
pub const SINGULAR_BAND: f64 = 1e-9;

const CRITICAL_K_TOL_EV: f64 = 1e-12;
const CRITICAL_K_MAX_ITER: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    Superradiant,
    Subradiant,
    Metastable,
}

impl Regime {
    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::Superradiant => "superradiant",
            Regime::Subradiant => "subradiant",
            Regime::Metastable => "metastable",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A rate or rate ratio that is either finite or sits on the light-cone
/// divergence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Rate {
    Finite(f64),
    Divergent,
}

impl Rate {
    pub fn value(&self) -> Option<f64> {
        match *self {
            Rate::Finite(v) => Some(v),
            Rate::Divergent => None,
        }
    }

    pub fn is_divergent(&self) -> bool {
        matches!(self, Rate::Divergent)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayResult {
    /// ħΓ_ex in eV.
    pub gamma: Rate,
    /// ħΓ_at in eV, evaluated at the exciton energy.
    pub gamma_at: f64,
    /// Γ_ex/Γ_at.
    pub ratio: Rate,
    pub regime: Regime,
}

/// Free-space rate of a single atom, ħΓ_at = μ²E_A³/(3πε₀(ħc)³), in eV.
pub fn gamma_atom(consts: &PhysicalConstants, e_a: f64, mu: f64) -> f64 {
    consts.inverse_epsilon0() * mu * mu * e_a.powi(3) / (3.0 * PI * consts.hbar_c().powi(3))
}

/// Dimensionless μ²/(2ε₀a²ħc) that multiplies E_ex²/√(E_ex² − E_0²)·B.
pub fn rate_prefactor(consts: &PhysicalConstants, cfg: &LatticeConfig, dip: &DipoleOrientation) -> f64 {
    consts.inverse_epsilon0() * dip.mu * dip.mu / (2.0 * cfg.a * cfg.a * consts.hbar_c())
}

/// Orientation bracket B(θ, φ, x) in its expanded form.
///
/// The terms cancel strongly near the zero set, so the sum is carried in
/// double-double arithmetic and rounded once at the end.
pub fn orientation_bracket(dip: &DipoleOrientation, x: f64) -> f64 {
    let (s, c) = dip.theta.sin_cos();
    let cp = dip.phi.cos();
    let x2 = Dd::prod(x, x);
    let root = Dd::ONE.sub(x2).sqrt();
    let s2 = Dd::prod(s, s);
    let in_plane = s2.mul(Dd::ONE.sub(Dd::prod(cp, cp).mul(x2)));
    let normal = Dd::prod(c, c).mul(x2);
    let cross = Dd::prod(2.0 * s, c).mul(Dd::prod(cp, x)).mul(root);
    in_plane.add(normal).sub(cross).hi
}

/// Unevaluated sum hi + lo with |lo| ≤ ulp(hi)/2.
#[derive(Debug, Clone, Copy)]
struct Dd {
    hi: f64,
    lo: f64,
}

impl Dd {
    const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    fn two_sum(a: f64, b: f64) -> Dd {
        let hi = a + b;
        let v = hi - a;
        Dd {
            hi,
            lo: (a - (hi - v)) + (b - v),
        }
    }

    fn prod(a: f64, b: f64) -> Dd {
        let hi = a * b;
        Dd {
            hi,
            lo: a.mul_add(b, -hi),
        }
    }

    fn add(self, o: Dd) -> Dd {
        let s = Dd::two_sum(self.hi, o.hi);
        let t = Dd::two_sum(self.lo, o.lo);
        let u = Dd::two_sum(s.hi, s.lo + t.hi);
        Dd::two_sum(u.hi, u.lo + t.lo)
    }

    fn sub(self, o: Dd) -> Dd {
        self.add(Dd { hi: -o.hi, lo: -o.lo })
    }

    fn mul(self, o: Dd) -> Dd {
        let p = Dd::prod(self.hi, o.hi);
        Dd::two_sum(p.hi, p.lo + (self.hi * o.lo + self.lo * o.hi))
    }

    fn sqrt(self) -> Dd {
        if self.hi <= 0.0 {
            return Dd { hi: 0.0, lo: 0.0 };
        }
        // one Newton step from the f64 root
        let r = self.hi.sqrt();
        let resid = self.sub(Dd::prod(r, r));
        Dd::two_sum(r, (resid.hi + resid.lo) / (2.0 * r))
    }
}

/// The two non-negative pieces of B written as a sum of squares.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BracketCertificate {
    /// sinθ cosφ √(1 − x²) − cosθ x; B contains its square.
    pub amplitude: f64,
    /// sin²θ (1 − cos²φ).
    pub transverse: f64,
}

impl BracketCertificate {
    pub fn new(dip: &DipoleOrientation, x: f64) -> Self {
        let (s, c) = dip.theta.sin_cos();
        let cp = dip.phi.cos();
        let root = Dd::ONE.sub(Dd::prod(x, x)).sqrt();
        Self {
            amplitude: Dd::prod(s, cp).mul(root).sub(Dd::prod(c, x)).hi,
            transverse: s * s * ((1.0 - cp) * (1.0 + cp)),
        }
    }

    pub fn value(&self) -> f64 {
        self.amplitude * self.amplitude + self.transverse
    }
}

/// Radiative damping of an exciton with energy `e_ex` and photon-line energy
/// `e_0` (both eV).
///
/// Returns exactly zero (metastable) for `e_0 >= e_ex` and a divergent rate
/// within [`SINGULAR_BAND`] below the crossing.
pub fn gamma_exciton(
    consts: &PhysicalConstants,
    cfg: &LatticeConfig,
    dip: &DipoleOrientation,
    e_ex: f64,
    e_0: f64,
) -> Result<DecayResult> {
    if !(e_ex.is_finite() && e_ex > 0.0) {
        return Err(Error::InvalidArgument {
            name: "e_ex",
            value: e_ex,
            reason: "exciton energy must be positive",
        });
    }
    if !(e_0.is_finite() && e_0 >= 0.0) {
        return Err(Error::InvalidArgument {
            name: "e_0",
            value: e_0,
            reason: "photon-line energy must be non-negative",
        });
    }
    let gamma_at = gamma_atom(consts, e_ex, dip.mu);

    let gamma = if e_0 >= e_ex {
        Rate::Finite(0.0)
    } else if e_ex - e_0 < SINGULAR_BAND * e_ex {
        Rate::Divergent
    } else {
        let x = e_0 / e_ex;
        let density = e_ex * e_ex / ((e_ex - e_0) * (e_ex + e_0)).sqrt();
        let b = BracketCertificate::new(dip, x).value();
        Rate::Finite(rate_prefactor(consts, cfg, dip) * density * b)
    };
    let ratio = match gamma {
        Rate::Finite(g) => Rate::Finite(g / gamma_at),
        Rate::Divergent => Rate::Divergent,
    };

    let mut result = DecayResult {
        gamma,
        gamma_at,
        ratio,
        regime: Regime::Metastable,
    };
    result.regime = classify_regime(&result);
    Ok(result)
}

/// Divergent or ratio > 1 is superradiant, a zero rate is metastable, and
/// everything else (including ratio exactly 1) is subradiant.
pub fn classify_regime(result: &DecayResult) -> Regime {
    match (result.gamma, result.ratio) {
        (Rate::Divergent, _) | (_, Rate::Divergent) => Regime::Superradiant,
        (Rate::Finite(g), _) if g == 0.0 => Regime::Metastable,
        (_, Rate::Finite(r)) if r > 1.0 => Regime::Superradiant,
        _ => Regime::Subradiant,
    }
}

/// Light-cone crossing ħck_c = E_ex(k_c·d̂) along an in-plane direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalPoint {
    /// Å⁻¹.
    pub k_c: f64,
    /// ħck_c in eV.
    pub e_0_c: f64,
    pub direction: [f64; 2],
}

pub fn critical_k(consts: &PhysicalConstants, cfg: &LatticeConfig, direction: [f64; 2]) -> Result<CriticalPoint> {
    let norm = direction[0].hypot(direction[1]);
    if !(norm.is_finite() && norm > 0.0) {
        return Err(Error::InvalidArgument {
            name: "direction",
            value: norm,
            reason: "direction must be a non-zero finite vector",
        });
    }
    let d = [direction[0] / norm, direction[1] / norm];
    let band_bottom = cfg.e_a - 4.0 * cfg.j.abs();
    let band_top = cfg.e_a + 4.0 * cfg.j.abs();
    let edge = cfg.zone_edge_energy(consts);
    if !(band_bottom > 0.0) {
        return Err(Error::NoCrossing(format!("band bottom {band_bottom} eV is not positive")));
    }
    if !(edge > band_top) {
        return Err(Error::NoCrossing(format!(
            "zone-edge photon energy {edge} eV does not exceed band top {band_top} eV"
        )));
    }

    let residual = |k: f64| consts.photon_energy(k) - exciton_energy(cfg, WaveVector2D::new(k * d[0], k * d[1]));
    let k_c = bisect(residual, 0.0, PI / cfg.a, CRITICAL_K_TOL_EV, CRITICAL_K_MAX_ITER)?;
    Ok(CriticalPoint {
        k_c,
        e_0_c: consts.photon_energy(k_c),
        direction: d,
    })
}

/// Photon-line fraction x = E_0/E_ex in (0, 1) at which the rate vanishes
/// inside the light cone, if the orientation has one.
///
/// A dark point needs the transverse part sin²θ sin²φ to vanish and the signed
/// amplitude to change sign on (0, 1).
pub fn dark_point(dip: &DipoleOrientation) -> Option<f64> {
    if BracketCertificate::new(dip, 0.0).transverse > 1e-24 {
        return None;
    }
    let amp = |x: f64| BracketCertificate::new(dip, x).amplitude;
    bisect(amp, 0.0, 1.0, 0.0, 200).ok().filter(|x| *x > 0.0 && *x < 1.0)
}
