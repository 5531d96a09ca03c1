//! Golden-rule mode sum evaluated by brute force.
//!
//! The exciton at in-plane wavevector k couples to photons q = (k, q_z). With
//! the mode sum over q_z turned into an integral, the quantization length
//! cancels between |g_q|² and the measure, leaving
//!
//! ```text
//! ħΓ = 2π · (1/2π) ∫₀^∞ dq_z  ħcq/(2ε₀a²) · Σ_λ|μ·e_qλ|² · δ(E_ex − ħcq)
//! ```
//!
//! The δ-function is replaced by a normalized Lorentzian of half-width η, the
//! integral is done by composite Simpson on a uniform q_z grid, and the result
//! is extrapolated to η → 0 by a polynomial fit over a decreasing sequence of
//! widths. Nothing here reuses the closed-form rate; it serves as an
//! independent check on it.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::damping::{gamma_exciton, Rate};
use crate::error::{Error, Result};
use crate::units::{DipoleOrientation, LatticeConfig, PhysicalConstants};

/// Half-width of the excluded band around the light-cone crossing, relative
/// to E_ex.
pub const SINGULAR_EXCLUSION: f64 = 0.02;

const CONVERGENCE_TOL: f64 = 1e-3;
const EXTRAPOLATION_TOL: f64 = 1e-3;

/// Dipole and lattice seen by a photon with in-plane wavenumber `k` (Å⁻¹).
/// The in-plane direction of k relative to μ_∥ is the dipole's φ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingModel {
    pub dipole: DipoleOrientation,
    pub lattice: LatticeConfig,
    /// eV.
    pub e_ex: f64,
    pub k: f64,
}

impl CouplingModel {
    pub fn from_photon_energy(
        consts: &PhysicalConstants,
        lattice: LatticeConfig,
        dipole: DipoleOrientation,
        e_ex: f64,
        e_0: f64,
    ) -> Self {
        Self {
            dipole,
            lattice,
            e_ex,
            k: consts.wavenumber(e_0),
        }
    }

    /// Dipole vector in the (k̂, p̂, ẑ) frame, e·Å.
    pub fn dipole_vector(&self) -> [f64; 3] {
        let d = &self.dipole;
        let (st, ct) = d.theta.sin_cos();
        let (sp, cp) = d.phi.sin_cos();
        [d.mu * st * cp, d.mu * st * sp, d.mu * ct]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleSettings {
    /// Width (eV) for single-width evaluations via [`broadened_rate`].
    pub eta: f64,
    /// Upper limit of the q_z integral, Å⁻¹.
    pub q_z_max: f64,
    /// Simpson intervals on the coarse grid; the check grid uses twice as many.
    pub n_points: usize,
    /// Widths (eV) used for the η → 0 extrapolation, strictly decreasing.
    pub eta_sequence: Vec<f64>,
}

impl OracleSettings {
    /// Defaults for an exciton of energy `e_ex`: ħc·q_z_max = 10·E_ex, 2·10⁵
    /// intervals, widths {1e-3, 5e-4, 2.5e-4} eV.
    pub fn for_exciton_energy(consts: &PhysicalConstants, e_ex: f64) -> Self {
        Self {
            eta: 1e-3,
            q_z_max: 10.0 * e_ex / consts.hbar_c(),
            n_points: 200_000,
            eta_sequence: vec![1e-3, 5e-4, 2.5e-4],
        }
    }

    pub fn validate(&self, consts: &PhysicalConstants, e_ex: f64) -> Result<()> {
        let bad = |name, value, reason| Err(Error::InvalidArgument { name, value, reason });
        if !(self.eta > 0.0) {
            return bad("eta", self.eta, "Lorentzian width must be positive");
        }
        if !(consts.photon_energy(self.q_z_max) >= 5.0 * e_ex) {
            return bad("q_z_max", self.q_z_max, "hbar*c*q_z_max must be at least 5 E_ex");
        }
        if self.n_points < 2 {
            return bad("n_points", self.n_points as f64, "need at least 2 intervals");
        }
        if self.eta_sequence.len() < 2 {
            return bad("eta_sequence", self.eta_sequence.len() as f64, "need at least two widths");
        }
        if self.eta_sequence.iter().any(|e| !(*e > 0.0)) {
            return bad("eta_sequence", 0.0, "widths must be positive");
        }
        if self.eta_sequence.windows(2).any(|w| w[1] >= w[0]) {
            return bad("eta_sequence", self.eta_sequence[0], "widths must be strictly decreasing");
        }
        Ok(())
    }
}

/// Σ_λ |μ·e_qλ|² = |μ|² − (q·μ)²/q² for transverse polarizations.
pub fn polarization_sum(mu: [f64; 3], q: [f64; 3]) -> Result<f64> {
    let q2: f64 = q.iter().map(|x| x * x).sum();
    if q2 == 0.0 {
        return Err(Error::ZeroWavevector);
    }
    let mu2: f64 = mu.iter().map(|x| x * x).sum();
    let dot: f64 = mu.iter().zip(&q).map(|(a, b)| a * b).sum();
    Ok((mu2 - dot * dot / q2).clamp(0.0, mu2))
}

/// Normalized Lorentzian (η/π)/(Δ² + η²).
pub fn lorentzian(delta: f64, eta: f64) -> f64 {
    eta / PI / (delta * delta + eta * eta)
}

/// Composite Simpson over every `stride`-th entry of `values`, sampled at
/// spacing `h`. The strided sample count must be odd.
fn simpson_strided(values: &[f64], h: f64, stride: usize) -> f64 {
    let pts: Vec<f64> = values.iter().step_by(stride).copied().collect();
    let n = pts.len() - 1;
    debug_assert!(n.is_multiple_of(2));
    let interior: f64 = pts[1..n]
        .iter()
        .enumerate()
        .map(|(i, v)| if i % 2 == 0 { 4.0 * v } else { 2.0 * v })
        .sum();
    h * stride as f64 / 3.0 * (pts[0] + interior + pts[n])
}

/// Composite Simpson rule on [a, b] with `n` intervals (rounded up to even).
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let n = n.max(2).next_multiple_of(2);
    let h = (b - a) / n as f64;
    let values: Vec<f64> = (0..=n).map(|i| f(a + h * i as f64)).collect();
    simpson_strided(&values, h, 1)
}

/// Rate integrand (eV·Å) at q_z for Lorentzian width `eta`.
fn integrand(consts: &PhysicalConstants, model: &CouplingModel, mu: [f64; 3], eta: f64, q_z: f64) -> f64 {
    let q_vec = [model.k, 0.0, q_z];
    let q = model.k.hypot(q_z);
    if q == 0.0 {
        // ħcq vanishes
        return 0.0;
    }
    let photon = consts.photon_energy(q);
    let coupling = photon * consts.inverse_epsilon0() / (2.0 * model.lattice.a * model.lattice.a);
    let pol = polarization_sum(mu, q_vec).unwrap_or(0.0);
    // the golden-rule 2π cancels the 1/2π of the q_z measure
    coupling * pol * lorentzian(model.e_ex - photon, eta)
}

fn rate_pair(consts: &PhysicalConstants, model: &CouplingModel, eta: f64, q_z_max: f64, n: usize) -> (f64, f64) {
    let n = n.max(2).next_multiple_of(2);
    let fine_n = 2 * n;
    let h = q_z_max / fine_n as f64;
    let mu = model.dipole_vector();
    let values: Vec<f64> = (0..=fine_n)
        .map(|i| integrand(consts, model, mu, eta, h * i as f64))
        .collect();
    (simpson_strided(&values, h, 2), simpson_strided(&values, h, 1))
}

/// Broadened rate ħΓ(η) in eV for a single Lorentzian width.
pub fn broadened_rate(consts: &PhysicalConstants, model: &CouplingModel, eta: f64, q_z_max: f64, n_points: usize) -> f64 {
    let mu = model.dipole_vector();
    simpson(|q_z| integrand(consts, model, mu, eta, q_z), 0.0, q_z_max, n_points)
}

/// Value at x = 0 of the least-squares polynomial of `degree` through `points`.
pub fn extrapolate_to_zero(points: &[(f64, f64)], degree: usize) -> f64 {
    let m = degree + 1;
    assert!(points.len() >= m, "need at least {m} points for degree {degree}");
    let scale = points.iter().map(|p| p.0.abs()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);

    // normal equations in the scaled abscissa
    let mut a = vec![vec![0.0; m + 1]; m];
    for &(x, y) in points {
        let t = x / scale;
        let powers: Vec<f64> = (0..m).map(|p| t.powi(p as i32)).collect();
        for r in 0..m {
            for c in 0..m {
                a[r][c] += powers[r] * powers[c];
            }
            a[r][m] += powers[r] * y;
        }
    }
    for col in 0..m {
        let pivot = (col..m)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        a.swap(col, pivot);
        for row in 0..m {
            if row != col {
                let factor = a[row][col] / a[col][col];
                for c in col..=m {
                    a[row][c] -= factor * a[col][c];
                }
            }
        }
    }
    a[0][m] / a[0][0]
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleEstimate {
    /// Extrapolated ħΓ at η → 0, eV.
    pub rate: f64,
    /// (η, ħΓ(η)) on the refined grid.
    pub raw: Vec<(f64, f64)>,
    /// Largest coarse/refined Simpson difference over the widths, eV.
    pub quadrature_error: f64,
    /// |quadratic − linear| η → 0 limits, eV.
    pub extrapolation_error: f64,
}

/// Full oracle evaluation with convergence diagnostics.
pub fn golden_rule_estimate(
    consts: &PhysicalConstants,
    model: &CouplingModel,
    settings: &OracleSettings,
) -> Result<OracleEstimate> {
    settings.validate(consts, model.e_ex)?;
    let e_0 = consts.photon_energy(model.k);
    if (e_0 - model.e_ex).abs() < SINGULAR_EXCLUSION * model.e_ex {
        return Err(Error::SingularBand { e_0, e_ex: model.e_ex });
    }

    let mut raw = Vec::with_capacity(settings.eta_sequence.len());
    let mut quadrature_error: f64 = 0.0;
    for &eta in &settings.eta_sequence {
        let (coarse, fine) = rate_pair(consts, model, eta, settings.q_z_max, settings.n_points);
        let diff = (fine - coarse).abs();
        let change = diff / fine.abs().max(f64::MIN_POSITIVE);
        if change > CONVERGENCE_TOL {
            return Err(Error::QuadratureNotConverged { eta, change });
        }
        quadrature_error = quadrature_error.max(diff);
        raw.push((eta, fine));
    }

    let degree = (raw.len() - 1).min(2);
    let rate = extrapolate_to_zero(&raw, degree);
    let tail = &raw[raw.len() - 2..];
    let linear = extrapolate_to_zero(tail, 1);
    let extrapolation_error = (rate - linear).abs();
    let scale = raw.iter().map(|r| r.1.abs()).fold(rate.abs(), f64::max);
    let tolerance = EXTRAPOLATION_TOL * scale;
    if extrapolation_error > tolerance {
        return Err(Error::Extrapolation {
            estimate: extrapolation_error,
            tolerance,
        });
    }

    Ok(OracleEstimate {
        rate,
        raw,
        quadrature_error,
        extrapolation_error,
    })
}

/// Extrapolated golden-rule rate ħΓ in eV.
pub fn golden_rule_rate(consts: &PhysicalConstants, model: &CouplingModel, settings: &OracleSettings) -> Result<f64> {
    golden_rule_estimate(consts, model, settings).map(|e| e.rate)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OraclePoint {
    pub theta: f64,
    pub phi: f64,
    /// eV.
    pub e_0: f64,
}

impl OraclePoint {
    /// Cartesian product, θ outermost and E_0 innermost.
    pub fn grid(thetas: &[f64], phis: &[f64], e_0s: &[f64]) -> Vec<Self> {
        let mut out = Vec::with_capacity(thetas.len() * phis.len() * e_0s.len());
        for &theta in thetas {
            for &phi in phis {
                for &e_0 in e_0s {
                    out.push(Self { theta, phi, e_0 });
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum OracleOutcome {
    Compared {
        closed_form: f64,
        oracle: f64,
        rel_err: f64,
    },
    /// Screened out or failed; carries the reason.
    Flagged(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleRow {
    pub point: OraclePoint,
    pub outcome: OracleOutcome,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct OracleTable {
    pub rows: Vec<OracleRow>,
}

impl OracleTable {
    /// Largest relative error over compared rows, `None` if nothing compared.
    pub fn max_rel_err(&self) -> Option<f64> {
        self.rows
            .iter()
            .filter_map(|r| match r.outcome {
                OracleOutcome::Compared { rel_err, .. } => Some(rel_err),
                OracleOutcome::Flagged(_) => None,
            })
            .reduce(f64::max)
    }

    pub fn flagged(&self) -> usize {
        self.rows
            .iter()
            .filter(|r| matches!(r.outcome, OracleOutcome::Flagged(_)))
            .count()
    }
}

/// Relative difference |a − b|/|b|, zero when both vanish.
pub fn relative_error(value: f64, reference: f64) -> f64 {
    let d = (value - reference).abs();
    if d == 0.0 {
        0.0
    } else {
        d / reference.abs()
    }
}

/// Compare the closed-form rate against the oracle over a grid of
/// orientations and photon-line energies at fixed exciton energy `e_ex`.
/// Rows are evaluated in parallel and returned in grid order.
pub fn oracle_sweep(
    consts: &PhysicalConstants,
    cfg: &LatticeConfig,
    mu: f64,
    e_ex: f64,
    grid: &[OraclePoint],
    settings: &OracleSettings,
) -> OracleTable {
    let rows = grid
        .par_iter()
        .map(|&point| OracleRow {
            point,
            outcome: compare_point(consts, cfg, mu, e_ex, point, settings),
        })
        .collect();
    OracleTable { rows }
}

fn compare_point(
    consts: &PhysicalConstants,
    cfg: &LatticeConfig,
    mu: f64,
    e_ex: f64,
    point: OraclePoint,
    settings: &OracleSettings,
) -> OracleOutcome {
    let dip = DipoleOrientation::new(mu, point.theta, point.phi);
    let closed = match gamma_exciton(consts, cfg, &dip, e_ex, point.e_0) {
        Ok(r) => match r.gamma {
            Rate::Finite(g) => g,
            Rate::Divergent => return OracleOutcome::Flagged("closed form divergent".into()),
        },
        Err(e) => return OracleOutcome::Flagged(e.to_string()),
    };
    let model = CouplingModel::from_photon_energy(consts, *cfg, dip, e_ex, point.e_0);
    match golden_rule_rate(consts, &model, settings) {
        Ok(oracle) => OracleOutcome::Compared {
            closed_form: closed,
            oracle,
            rel_err: relative_error(oracle, closed),
        },
        Err(e) => OracleOutcome::Flagged(e.to_string()),
    }
}
