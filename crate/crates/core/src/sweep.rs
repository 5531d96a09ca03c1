//! Parameter sweeps of the scaled damping rate, including the built-in
//! figure presets.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::damping::{gamma_exciton, Rate, Regime, SINGULAR_BAND};
use crate::dispersion::{exciton_energy, WaveVector2D};
use crate::error::{Error, Result};
use crate::grid::linspace;
use crate::oracle::{golden_rule_rate, CouplingModel, OracleSettings};
use crate::units::{DipoleOrientation, LatticeConfig, PhysicalConstants};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FigureId {
    Fig2,
    Fig3a,
    Fig3b,
    Fig4,
    Fig5a,
    Fig5b,
    Fig6a,
    Fig6b,
    Fig7a,
    Fig7b,
}

impl FigureId {
    pub const ALL: [FigureId; 10] = [
        FigureId::Fig2,
        FigureId::Fig3a,
        FigureId::Fig3b,
        FigureId::Fig4,
        FigureId::Fig5a,
        FigureId::Fig5b,
        FigureId::Fig6a,
        FigureId::Fig6b,
        FigureId::Fig7a,
        FigureId::Fig7b,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            FigureId::Fig2 => "2",
            FigureId::Fig3a => "3a",
            FigureId::Fig3b => "3b",
            FigureId::Fig4 => "4",
            FigureId::Fig5a => "5a",
            FigureId::Fig5b => "5b",
            FigureId::Fig6a => "6a",
            FigureId::Fig6b => "6b",
            FigureId::Fig7a => "7a",
            FigureId::Fig7b => "7b",
        }
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FigureId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().trim_start_matches("fig").to_ascii_lowercase();
        FigureId::ALL
            .into_iter()
            .find(|f| f.as_str() == key)
            .ok_or_else(|| Error::InvalidSweep(format!("unknown figure `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweptVariable {
    /// Photon-line energy E_0 = ħck in eV.
    PhotonEnergy,
    Phi,
    Theta,
}

impl SweptVariable {
    pub fn as_str(&self) -> &'static str {
        match self {
            SweptVariable::PhotonEnergy => "E_0",
            SweptVariable::Phi => "phi",
            SweptVariable::Theta => "theta",
        }
    }

    /// Range used by the figure presets.
    pub fn default_range(&self) -> SweepRange {
        match self {
            SweptVariable::PhotonEnergy => SweepRange::new(0.0, 1.5, 301),
            SweptVariable::Phi => SweepRange::new(0.0, TAU, 361),
            SweptVariable::Theta => SweepRange::new(0.0, PI, 181),
        }
    }
}

impl fmt::Display for SweptVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SweptVariable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "e_0" | "e0" | "energy" => Ok(SweptVariable::PhotonEnergy),
            "phi" => Ok(SweptVariable::Phi),
            "theta" => Ok(SweptVariable::Theta),
            _ => Err(Error::InvalidSweep(format!("unknown swept variable `{s}`"))),
        }
    }
}

/// Inclusive sample range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRange {
    pub start: f64,
    pub stop: f64,
    pub n_samples: usize,
}

impl SweepRange {
    pub fn new(start: f64, stop: f64, n_samples: usize) -> Self {
        Self {
            start,
            stop,
            n_samples,
        }
    }

    pub fn samples(&self) -> Vec<f64> {
        linspace(self.start, self.stop, self.n_samples)
    }

    pub fn step(&self) -> f64 {
        (self.stop - self.start) / (self.n_samples.max(2) - 1) as f64
    }
}

/// Values held fixed during a sweep. Missing angles fall back to the
/// dipole passed to [`run_sweep`].
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FixedParams {
    pub theta: Option<f64>,
    pub phi: Option<f64>,
    /// eV.
    pub e_0: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    /// `None` for a custom sweep.
    pub figure: Option<FigureId>,
    pub swept: SweptVariable,
    pub range: SweepRange,
    pub fixed: FixedParams,
}

impl SweepSpec {
    pub fn figure(id: FigureId) -> Self {
        use FigureId::*;
        use SweptVariable::*;
        let fixed = |theta, phi, e_0| FixedParams { theta, phi, e_0 };
        let (swept, fixed) = match id {
            Fig2 => (PhotonEnergy, fixed(Some(0.0), Some(0.0), None)),
            Fig3a => (PhotonEnergy, fixed(Some(FRAC_PI_4), Some(0.0), None)),
            Fig3b => (PhotonEnergy, fixed(Some(FRAC_PI_4), Some(FRAC_PI_2), None)),
            Fig4 => (PhotonEnergy, fixed(Some(FRAC_PI_2), Some(0.0), None)),
            Fig5a => (Phi, fixed(Some(FRAC_PI_4), None, Some(0.1))),
            Fig5b => (Phi, fixed(Some(FRAC_PI_4), None, Some(0.9))),
            Fig6a => (Phi, fixed(Some(FRAC_PI_2), None, Some(0.1))),
            Fig6b => (Phi, fixed(Some(FRAC_PI_2), None, Some(0.9))),
            Fig7a => (Theta, fixed(None, Some(FRAC_PI_2), Some(0.1))),
            Fig7b => (Theta, fixed(None, Some(FRAC_PI_2), Some(0.9))),
        };
        Self {
            figure: Some(id),
            swept,
            range: swept.default_range(),
            fixed,
        }
    }

    pub fn custom(swept: SweptVariable, range: SweepRange, fixed: FixedParams) -> Self {
        Self {
            figure: None,
            swept,
            range,
            fixed,
        }
    }

    pub fn with_range(mut self, range: SweepRange) -> Self {
        self.range = range;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let r = &self.range;
        if !(r.start.is_finite() && r.stop.is_finite() && r.start < r.stop) {
            return Err(Error::InvalidSweep(format!(
                "range start {} must be below stop {}",
                r.start, r.stop
            )));
        }
        if r.n_samples < 2 {
            return Err(Error::InvalidSweep("need at least 2 samples".into()));
        }
        let swept_fixed = match self.swept {
            SweptVariable::PhotonEnergy => self.fixed.e_0.is_some(),
            SweptVariable::Phi => self.fixed.phi.is_some(),
            SweptVariable::Theta => self.fixed.theta.is_some(),
        };
        if swept_fixed {
            return Err(Error::InvalidSweep(format!("{} is both swept and fixed", self.swept)));
        }
        if self.swept != SweptVariable::PhotonEnergy && self.fixed.e_0.is_none() {
            return Err(Error::InvalidSweep("E_0 must be fixed when not swept".into()));
        }
        if self.swept == SweptVariable::PhotonEnergy && r.start < 0.0 {
            return Err(Error::InvalidSweep("E_0 range must be non-negative".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum OracleCell {
    Value { oracle_ev: f64, rel_err: f64 },
    /// Screened out (singular band) or failed; carries the reason.
    Flagged(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub swept: SweptVariable,
    pub value: f64,
    /// ħΓ_ex in eV.
    pub gamma: Rate,
    pub ratio: Rate,
    pub regime: Regime,
    pub oracle: Option<OracleCell>,
}

/// Evaluate a sweep with rows distributed over the rayon pool. Output order
/// follows the sample order and does not depend on scheduling.
pub fn run_sweep(
    consts: &PhysicalConstants,
    spec: &SweepSpec,
    cfg: &LatticeConfig,
    dip: &DipoleOrientation,
    oracle: Option<&OracleSettings>,
) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    spec.range
        .samples()
        .into_par_iter()
        .map(|v| evaluate_row(consts, spec, cfg, dip, oracle, v))
        .collect()
}

/// Same as [`run_sweep`] on the calling thread.
pub fn run_sweep_serial(
    consts: &PhysicalConstants,
    spec: &SweepSpec,
    cfg: &LatticeConfig,
    dip: &DipoleOrientation,
    oracle: Option<&OracleSettings>,
) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    spec.range
        .samples()
        .into_iter()
        .map(|v| evaluate_row(consts, spec, cfg, dip, oracle, v))
        .collect()
}

fn evaluate_row(
    consts: &PhysicalConstants,
    spec: &SweepSpec,
    cfg: &LatticeConfig,
    dip: &DipoleOrientation,
    oracle: Option<&OracleSettings>,
    value: f64,
) -> Result<SweepRow> {
    let f = &spec.fixed;
    let (theta, phi, e_0) = match spec.swept {
        SweptVariable::PhotonEnergy => (f.theta.unwrap_or(dip.theta), f.phi.unwrap_or(dip.phi), value),
        SweptVariable::Phi => (f.theta.unwrap_or(dip.theta), value, f.e_0.unwrap_or_default()),
        SweptVariable::Theta => (value, f.phi.unwrap_or(dip.phi), f.e_0.unwrap_or_default()),
    };
    let d = dip.with_angles(theta, phi);
    // k along the lattice x axis
    let e_ex = exciton_energy(cfg, WaveVector2D::new(consts.wavenumber(e_0), 0.0));

    // a sample on the crossing itself is plotted as the divergent left limit
    let at_crossing = (e_0 - e_ex).abs() <= SINGULAR_BAND * e_ex;
    let e_eval = if at_crossing {
        e_ex * (1.0 - 0.5 * SINGULAR_BAND)
    } else {
        e_0
    };
    let decay = gamma_exciton(consts, cfg, &d, e_ex, e_eval)?;

    let oracle = oracle.map(|settings| {
        let model = CouplingModel::from_photon_energy(consts, *cfg, d, e_ex, e_0);
        match (golden_rule_rate(consts, &model, settings), decay.gamma) {
            (Ok(o), Rate::Finite(g)) => {
                // rows with a vanishing closed form are compared on the Γ_at scale
                let scale = if g > 0.0 { g } else { decay.gamma_at };
                OracleCell::Value {
                    oracle_ev: o,
                    rel_err: (o - g).abs() / scale,
                }
            }
            (Ok(_), Rate::Divergent) => OracleCell::Flagged("closed form divergent".into()),
            (Err(e), _) => OracleCell::Flagged(e.to_string()),
        }
    });

    Ok(SweepRow {
        swept: spec.swept,
        value,
        gamma: decay.gamma,
        ratio: decay.ratio,
        regime: decay.regime,
        oracle,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const C: PhysicalConstants = PhysicalConstants::CODATA;

    fn run(spec: &SweepSpec) -> Vec<SweepRow> {
        run_sweep(&C, spec, &LatticeConfig::default(), &DipoleOrientation::default(), None).unwrap()
    }

    #[test]
    fn figure_presets_match_captions() {
        use SweptVariable::*;
        let q = FRAC_PI_4;
        let h = FRAC_PI_2;
        #[rustfmt::skip]
        let table = [
            ("2",  PhotonEnergy, Some(0.0), Some(0.0), None),
            ("3a", PhotonEnergy, Some(q),   Some(0.0), None),
            ("3b", PhotonEnergy, Some(q),   Some(h),   None),
            ("4",  PhotonEnergy, Some(h),   Some(0.0), None),
            ("5a", Phi,          Some(q),   None,      Some(0.1)),
            ("5b", Phi,          Some(q),   None,      Some(0.9)),
            ("6a", Phi,          Some(h),   None,      Some(0.1)),
            ("6b", Phi,          Some(h),   None,      Some(0.9)),
            ("7a", Theta,        None,      Some(h),   Some(0.1)),
            ("7b", Theta,        None,      Some(h),   Some(0.9)),
        ];
        for (id, swept, theta, phi, e_0) in table {
            let fig: FigureId = id.parse().unwrap();
            let spec = SweepSpec::figure(fig);
            assert_eq!(spec.figure, Some(fig));
            assert_eq!(spec.swept, swept, "{id}");
            assert_eq!(spec.fixed, FixedParams { theta, phi, e_0 }, "{id}");
            spec.validate().unwrap();
        }
        assert_eq!("fig7B".parse::<FigureId>().unwrap(), FigureId::Fig7b);
        assert!("8".parse::<FigureId>().is_err());
    }

    #[test]
    fn fig3a_crosses_zero_at_dark_point() {
        let spec = SweepSpec::figure(FigureId::Fig3a).with_range(SweepRange::new(0.01, 0.99, 200));
        let rows = run(&spec);
        assert_eq!(rows.len(), 200);
        let min = rows
            .iter()
            .min_by(|a, b| a.ratio.value().unwrap().total_cmp(&b.ratio.value().unwrap()))
            .unwrap();
        assert!((min.value - std::f64::consts::FRAC_1_SQRT_2).abs() <= spec.range.step());
    }

    #[test]
    fn fig2_beyond_light_cone_is_metastable() {
        let rows = run(&SweepSpec::figure(FigureId::Fig2));
        let beyond: Vec<_> = rows.iter().filter(|r| r.value > 1.0).collect();
        assert!(!beyond.is_empty());
        for r in beyond {
            assert_eq!(r.gamma, Rate::Finite(0.0));
            assert_eq!(r.regime, Regime::Metastable);
        }
        let at_one: Vec<_> = rows.iter().filter(|r| (r.value - 1.0).abs() < 1e-12).collect();
        assert_eq!(at_one.len(), 1);
        assert_eq!(at_one[0].gamma, Rate::Divergent);
    }

    #[test]
    fn fig7b_peaks_in_plane() {
        let spec = SweepSpec::figure(FigureId::Fig7b);
        let rows = run(&spec);
        let peak = rows
            .iter()
            .max_by(|a, b| a.ratio.value().unwrap().total_cmp(&b.ratio.value().unwrap()))
            .unwrap();
        assert!((peak.value - FRAC_PI_2).abs() <= spec.range.step());
    }

    #[test]
    fn rows_ascend() {
        let rows = run(&SweepSpec::figure(FigureId::Fig6a));
        assert!(rows.windows(2).all(|w| w[0].value < w[1].value));
    }

    #[test]
    fn invalid_specs() {
        let mut s = SweepSpec::figure(FigureId::Fig2);
        s.range = SweepRange::new(1.0, 0.5, 10);
        assert!(s.validate().is_err());
        s.range = SweepRange::new(0.0, 1.0, 1);
        assert!(s.validate().is_err());
        let s = SweepSpec::custom(SweptVariable::Phi, SweepRange::new(0.0, 1.0, 3), FixedParams::default());
        assert!(s.validate().is_err());
        let s = SweepSpec::custom(
            SweptVariable::Theta,
            SweepRange::new(0.0, 1.0, 3),
            FixedParams {
                theta: Some(0.1),
                e_0: Some(0.1),
                ..Default::default()
            },
        );
        assert!(s.validate().is_err());
    }

    #[test]
    fn parallel_equals_serial() {
        let cfg = LatticeConfig {
            j: 0.01,
            ..Default::default()
        };
        let dip = DipoleOrientation::new(1.0, 0.3, 1.2);
        for fig in FigureId::ALL {
            let spec = SweepSpec::figure(fig);
            let a = run_sweep(&C, &spec, &cfg, &dip, None).unwrap();
            let b = run_sweep_serial(&C, &spec, &cfg, &dip, None).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn oracle_rows_flag_singular_band() {
        let spec = SweepSpec::custom(
            SweptVariable::PhotonEnergy,
            SweepRange::new(0.5, 0.995, 3),
            FixedParams {
                theta: Some(0.0),
                phi: Some(0.0),
                e_0: None,
            },
        );
        let settings = OracleSettings::for_exciton_energy(&C, 1.0);
        let rows = run_sweep(&C, &spec, &LatticeConfig::default(), &DipoleOrientation::default(), Some(&settings)).unwrap();
        assert!(matches!(rows[0].oracle, Some(OracleCell::Value { rel_err, .. }) if rel_err < 1e-2));
        assert!(matches!(rows[2].oracle, Some(OracleCell::Flagged(_))));
    }
}
