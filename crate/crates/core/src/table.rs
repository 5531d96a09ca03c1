//! CSV output for sweeps, oracle comparisons and emission traces.
//!
//! Floats are written in shortest round-trip form, lines end in LF, and
//! divergent samples carry the literal `DIVERGENT`.

use std::io::Write;

use crate::damping::{gamma_exciton, Rate};
use crate::emission::{emission_intensity, LongWavelengthWarning, Position};
use crate::error::{Error, Result};
use crate::oracle::{OracleOutcome, OracleTable};
use crate::sweep::{OracleCell, SweepRow};
use crate::units::{DipoleOrientation, LatticeConfig, PhysicalConstants};

pub const DIVERGENT: &str = "DIVERGENT";
pub const FLAGGED: &str = "FLAGGED";

fn float(x: f64) -> String {
    format!("{x:?}")
}

fn rate(r: Rate) -> String {
    match r {
        Rate::Finite(v) => float(v),
        Rate::Divergent => DIVERGENT.to_string(),
    }
}

/// Counts bytes passed through to the inner writer.
struct Counting<W> {
    inner: W,
    bytes: usize,
}

impl<W: Write> Counting<W> {
    fn line(&mut self, s: &str) -> std::io::Result<()> {
        self.inner.write_all(s.as_bytes())?;
        self.inner.write_all(b"\n")?;
        self.bytes += s.len() + 1;
        Ok(())
    }
}

/// Write sweep rows as CSV; oracle columns are included when any row carries
/// an oracle value. Returns the number of bytes written.
pub fn write_table<W: Write>(rows: &[SweepRow], destination: W) -> Result<usize> {
    let with_oracle = rows.iter().any(|r| r.oracle.is_some());
    let mut out = Counting {
        inner: destination,
        bytes: 0,
    };
    let mut header = String::from("swept_var,value,gamma_ev,ratio,regime");
    if with_oracle {
        header.push_str(",oracle_ev,rel_err");
    }
    out.line(&header)?;

    for r in rows {
        let mut line = format!(
            "{},{},{},{},{}",
            r.swept,
            float(r.value),
            rate(r.gamma),
            rate(r.ratio),
            r.regime
        );
        if with_oracle {
            match &r.oracle {
                Some(OracleCell::Value { oracle_ev, rel_err }) => {
                    line.push_str(&format!(",{},{}", float(*oracle_ev), float(*rel_err)));
                }
                Some(OracleCell::Flagged(_)) | None => line.push_str(&format!(",{FLAGGED},{FLAGGED}")),
            }
        }
        out.line(&line)?;
    }
    out.inner.flush()?;
    Ok(out.bytes)
}

/// Oracle cross-check table with one row per grid point.
pub fn write_oracle_table<W: Write>(table: &OracleTable, destination: W) -> Result<usize> {
    let mut out = Counting {
        inner: destination,
        bytes: 0,
    };
    out.line("theta,phi,e_0_ev,closed_form_ev,oracle_ev,rel_err")?;
    for row in &table.rows {
        let p = row.point;
        let tail = match &row.outcome {
            OracleOutcome::Compared {
                closed_form,
                oracle,
                rel_err,
            } => format!("{},{},{}", float(*closed_form), float(*oracle), float(*rel_err)),
            OracleOutcome::Flagged(_) => format!("{FLAGGED},{FLAGGED},{FLAGGED}"),
        };
        out.line(&format!("{},{},{},{tail}", float(p.theta), float(p.phi), float(p.e_0)))?;
    }
    out.inner.flush()?;
    Ok(out.bytes)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmissionRow {
    /// Seconds.
    pub t: f64,
    pub population: f64,
    /// (V/Å)².
    pub intensity: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmissionReport {
    /// ħΓ used for the decay, eV.
    pub gamma: f64,
    /// Retarded onset z/c, seconds.
    pub onset: f64,
    pub rows: Vec<EmissionRow>,
    pub warning: Option<LongWavelengthWarning>,
}

/// Time trace of population and intensity for a single exciton observed at
/// height `z` (Å), with Γ from the closed-form rate.
#[allow(clippy::too_many_arguments)]
pub fn emission_report(
    consts: &PhysicalConstants,
    cfg: &LatticeConfig,
    dip: &DipoleOrientation,
    e_ex: f64,
    e_0: f64,
    n: usize,
    times: &[f64],
    z: f64,
) -> Result<EmissionReport> {
    let gamma = match gamma_exciton(consts, cfg, dip, e_ex, e_0)?.gamma {
        Rate::Finite(g) => g,
        Rate::Divergent => return Err(Error::Divergent { e_0 }),
    };
    let position = Position { rho: [0.0, 0.0], z };
    let mut warning = None;
    let rows = times
        .iter()
        .map(|&t| {
            let s = emission_intensity(consts, cfg, dip, e_ex, e_0, gamma, n, t, position)?;
            warning = s.warning;
            Ok(EmissionRow {
                t,
                population: s.population,
                intensity: s.intensity,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EmissionReport {
        gamma,
        onset: z.abs() / consts.speed_of_light(),
        rows,
        warning,
    })
}

pub fn write_emission_table<W: Write>(report: &EmissionReport, destination: W) -> Result<usize> {
    let mut out = Counting {
        inner: destination,
        bytes: 0,
    };
    out.line("t_s,population,intensity")?;
    for r in &report.rows {
        out.line(&format!("{},{},{}", float(r.t), float(r.population), float(r.intensity)))?;
    }
    out.inner.flush()?;
    Ok(out.bytes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::damping::Regime;
    use crate::grid::linspace;
    use crate::sweep::SweptVariable;
    use std::f64::consts::LN_2;

    const C: PhysicalConstants = PhysicalConstants::CODATA;

    fn row(value: f64, gamma: Rate) -> SweepRow {
        SweepRow {
            swept: SweptVariable::PhotonEnergy,
            value,
            gamma,
            ratio: gamma,
            regime: Regime::Subradiant,
            oracle: None,
        }
    }

    #[test]
    fn header_plus_rows() {
        let rows = [row(0.1, Rate::Finite(0.5)), row(0.2, Rate::Finite(0.25)), row(0.3, Rate::Divergent)];
        let mut buf = Vec::new();
        let n = write_table(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(n, text.len());
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[0], "swept_var,value,gamma_ev,ratio,regime");
        assert_eq!(lines[1], "E_0,0.1,0.5,0.5,subradiant");
        assert_eq!(lines[3], "E_0,0.3,DIVERGENT,DIVERGENT,subradiant");
        assert!(!text.contains('\r'));
        assert!(text.ends_with('\n'));
    }

    #[test]
    fn oracle_columns() {
        let mut a = row(0.1, Rate::Finite(1e-9));
        a.oracle = Some(OracleCell::Value {
            oracle_ev: 1.0000001e-9,
            rel_err: 1e-7,
        });
        let mut b = row(0.99, Rate::Finite(2e-8));
        b.oracle = Some(OracleCell::Flagged("singular".into()));
        let mut buf = Vec::new();
        write_table(&[a, b], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], "swept_var,value,gamma_ev,ratio,regime,oracle_ev,rel_err");
        assert_eq!(lines[1], "E_0,0.1,1e-9,1e-9,subradiant,1.0000001e-9,1e-7");
        assert!(lines[2].ends_with(",FLAGGED,FLAGGED"));
    }

    #[test]
    fn floats_round_trip() {
        for x in [0.1, 1.0 / 3.0, 2.498797780923765e-9, 18.349070615088938, 1e300, 0.0] {
            assert_eq!(float(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn emission_half_life() {
        let dip = DipoleOrientation::new(1.0, 0.0, 0.0);
        let cfg = LatticeConfig::default();
        let z = 1.0e5;
        let probe = emission_report(&C, &cfg, &dip, 1.0, 0.05, 100, &[0.0], z).unwrap();
        let half = probe.onset + C.hbar() * LN_2 / probe.gamma;
        let times = [0.0, probe.onset, half];
        let rep = emission_report(&C, &cfg, &dip, 1.0, 0.05, 100, &times, z).unwrap();
        assert_eq!(rep.rows[0].population, 1.0);
        assert_eq!(rep.rows[0].intensity, 0.0);
        assert_eq!(rep.rows[1].population, 1.0);
        assert!((rep.rows[2].population - 0.5).abs() < 1e-12);
        let r1 = rep.rows[1].intensity / rep.rows[1].population;
        let r2 = rep.rows[2].intensity / rep.rows[2].population;
        assert!((r1 / r2 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn emission_metastable_is_constant() {
        // beyond the light cone Γ = 0
        let dip = DipoleOrientation::new(1.0, 0.7, 0.2);
        let times = linspace(0.0, 1e-3, 11);
        let rep = emission_report(&C, &LatticeConfig::default(), &dip, 1.0, 1.2, 100, &times, 0.0).unwrap();
        assert_eq!(rep.gamma, 0.0);
        assert!(rep.warning.is_some());
        assert!(rep.rows.iter().all(|r| r.population == 1.0 && r.intensity == rep.rows[0].intensity));
    }

    #[test]
    fn emission_report_csv() {
        let rep = EmissionReport {
            gamma: 0.0,
            onset: 0.0,
            rows: vec![EmissionRow {
                t: 0.0,
                population: 1.0,
                intensity: 2.5,
            }],
            warning: None,
        };
        let mut buf = Vec::new();
        write_emission_table(&rep, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "t_s,population,intensity\n0.0,1.0,2.5\n");
    }
}
