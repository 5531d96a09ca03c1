//! Far-field emission of a long-wavelength exciton (ka ≪ 1).
//!
//! The retarded field is written in the right-handed frame (k̂, p̂, ẑ) with
//! p̂ = ẑ × k̂. Decomposing the in-plane dipole as μ_∥(cosφ k̂ + sinφ p̂), the
//! polarization vector of the emitted field is
//!
//! ```text
//! V_k = (E_ex/E_0 − E_0/E_ex) μ_∥ cosφ − μ_z
//! V_p = (E_ex/E_0) μ_∥ sinφ
//! V_z = −μ_∥ cosφ
//! ```
//!
//! scaled by E_0/(2ε₀ħca²√N) and carried by the retarded exciton amplitude
//! B_k(t − z/c). Field amplitudes are in V/Å and intensities in (V/Å)².

use crate::error::{Error, Result};
use crate::units::{DipoleOrientation, LatticeConfig, PhysicalConstants};

/// Above this value of ka the long-wavelength field expressions are flagged.
pub const LONG_WAVELENGTH_LIMIT: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LongWavelengthWarning {
    pub ka: f64,
}

impl std::fmt::Display for LongWavelengthWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "ka = {:.4} exceeds {LONG_WAVELENGTH_LIMIT}; long-wavelength emission formulas are approximate",
            self.ka
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldEnvelope {
    /// (V_k, V_p, V_z) in e·Å.
    pub components: [f64; 3],
    /// E_0/(2ε₀ħca²√N), V/Å per e·Å of dipole.
    pub prefactor: f64,
    /// In-plane wavenumber carried by the phase e^{ik·ρ}, Å⁻¹.
    pub phase_wavevector: f64,
    pub warning: Option<LongWavelengthWarning>,
}

impl FieldEnvelope {
    pub fn modulus_sq(&self) -> f64 {
        self.components.iter().map(|v| v * v).sum()
    }

    /// Field amplitude (V/Å) for unit exciton amplitude.
    pub fn field(&self) -> [f64; 3] {
        self.components.map(|v| self.prefactor * v)
    }
}

fn check_energies(e_ex: f64, e_0: f64) -> Result<()> {
    if !(e_ex.is_finite() && e_ex > 0.0) {
        return Err(Error::InvalidArgument {
            name: "e_ex",
            value: e_ex,
            reason: "exciton energy must be positive",
        });
    }
    if !(e_0.is_finite() && e_0 > 0.0) {
        return Err(Error::InvalidArgument {
            name: "e_0",
            value: e_0,
            reason: "emission frame is undefined at k = 0; photon-line energy must be positive",
        });
    }
    Ok(())
}

fn envelope_with_sites(
    consts: &PhysicalConstants,
    cfg: &LatticeConfig,
    dip: &DipoleOrientation,
    e_ex: f64,
    e_0: f64,
    sites: usize,
) -> Result<FieldEnvelope> {
    check_energies(e_ex, e_0)?;
    if sites == 0 {
        return Err(Error::InvalidArgument {
            name: "n",
            value: 0.0,
            reason: "site count must be at least 1",
        });
    }
    let (mu_par, mu_z) = (dip.mu_parallel(), dip.mu_z());
    let (sp, cp) = dip.phi.sin_cos();
    let r = e_ex / e_0;
    let components = [(r - 1.0 / r) * mu_par * cp - mu_z, r * mu_par * sp, -mu_par * cp];

    let k = consts.wavenumber(e_0);
    let ka = k * cfg.a;
    let prefactor =
        e_0 * consts.inverse_epsilon0() / (2.0 * consts.hbar_c() * cfg.a * cfg.a * (sites as f64).sqrt());

    Ok(FieldEnvelope {
        components,
        prefactor,
        phase_wavevector: k,
        warning: (ka > LONG_WAVELENGTH_LIMIT).then_some(LongWavelengthWarning { ka }),
    })
}

/// Retarded field envelope for the lattice's own site count N = N_x·N_y.
pub fn field_envelope(
    consts: &PhysicalConstants,
    cfg: &LatticeConfig,
    dip: &DipoleOrientation,
    e_ex: f64,
    e_0: f64,
) -> Result<FieldEnvelope> {
    envelope_with_sites(consts, cfg, dip, e_ex, e_0, cfg.site_count())
}

/// Angular factor of the emitted intensity per unit μ², written out directly:
/// cos²θ + sin²θ[E_ex²/E_0² + cos²φ(E_0² − E_ex²)/E_ex²]
///       + 2 sinθ cosθ cosφ (E_0² − E_ex²)/(E_ex E_0).
pub fn emission_brace(dip: &DipoleOrientation, e_ex: f64, e_0: f64) -> f64 {
    let (s, c) = dip.theta.sin_cos();
    let cp = dip.phi.cos();
    let d = e_0 * e_0 - e_ex * e_ex;
    c * c + s * s * (e_ex * e_ex / (e_0 * e_0) + cp * cp * d / (e_ex * e_ex)) + 2.0 * s * c * cp * d / (e_ex * e_0)
}

/// Population of the exciton seen at height `z` (Å) at time `t` (s), for a
/// rate `gamma` given as ħΓ in eV. Before the retarded onset t = z/c the
/// initial population is returned.
pub fn exciton_population(consts: &PhysicalConstants, initial: f64, gamma: f64, t: f64, z: f64) -> f64 {
    let tau = t - z.abs() / consts.speed_of_light();
    if tau < 0.0 {
        initial
    } else {
        initial * (-consts.rate_ev_to_per_second(gamma) * tau).exp()
    }
}

/// Observation point: in-plane position ρ and height z above the lattice (Å).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Position {
    pub rho: [f64; 2],
    pub z: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmissionSample {
    pub position: Position,
    /// Seconds.
    pub time: f64,
    /// (V/Å)²; zero before the retarded onset.
    pub intensity: f64,
    pub population: f64,
    pub retarded: bool,
    pub warning: Option<LongWavelengthWarning>,
}

/// Emitted intensity of a single exciton (unit initial population) over a
/// lattice of `n` sites with damping `gamma` (ħΓ, eV).
#[allow(clippy::too_many_arguments)]
pub fn emission_intensity(
    consts: &PhysicalConstants,
    cfg: &LatticeConfig,
    dip: &DipoleOrientation,
    e_ex: f64,
    e_0: f64,
    gamma: f64,
    n: usize,
    t: f64,
    position: Position,
) -> Result<EmissionSample> {
    if !(gamma.is_finite() && gamma >= 0.0) {
        return Err(Error::InvalidArgument {
            name: "gamma",
            value: gamma,
            reason: "damping rate must be finite and non-negative",
        });
    }
    let env = envelope_with_sites(consts, cfg, dip, e_ex, e_0, n)?;
    let retarded = t >= position.z.abs() / consts.speed_of_light();
    let population = exciton_population(consts, 1.0, gamma, t, position.z);
    let intensity = if retarded {
        let brace = emission_brace(dip, e_ex, e_0).max(0.0);
        env.prefactor * env.prefactor * dip.mu * dip.mu * brace * population
    } else {
        0.0
    };
    Ok(EmissionSample {
        position,
        time: t,
        intensity,
        population,
        retarded,
        warning: env.warning,
    })
}
