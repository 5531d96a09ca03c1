use std::f64::consts::PI;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use lattice_exciton::config::parse_config;
use lattice_exciton::damping::{critical_k, gamma_exciton};
use lattice_exciton::dispersion::{exciton_energy, WaveVector2D};
use lattice_exciton::grid::linspace;
use lattice_exciton::oracle::{oracle_sweep, OraclePoint, OracleSettings};
use lattice_exciton::sweep::{run_sweep, FigureId, FixedParams, SweepRange, SweepRow, SweepSpec, SweptVariable};
use lattice_exciton::table::{emission_report, write_emission_table, write_oracle_table, write_table};
use lattice_exciton::{DipoleOrientation, Error, LatticeConfig, PhysicalConstants};

#[derive(Parser)]
#[command(name = "lattice-exciton", version, about = "Exciton damping and emission in 2D optical lattices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// `key = value` configuration file; omitted keys use the defaults
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file (default: stdout)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Damping rate at a single photon-line energy
    Gamma {
        /// E_0 = ħck in eV
        #[arg(long)]
        e0: f64,
        /// Exciton energy in eV (default: band energy at k along x)
        #[arg(long)]
        e_ex: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Critical wavevector of the light-cone crossing
    Kc {
        /// In-plane direction, degrees from the lattice x axis
        #[arg(long, default_value_t = 0.0)]
        direction_deg: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Scaled damping rate over a figure preset or a custom range
    Sweep(SweepArgs),
    /// Population and intensity trace of a single exciton
    Emission {
        #[arg(long)]
        e0: f64,
        #[arg(long)]
        e_ex: Option<f64>,
        /// Number of lattice sites (default: n_x * n_y)
        #[arg(long)]
        n: Option<usize>,
        /// Observation height above the lattice, Å
        #[arg(long, default_value_t = 0.0)]
        z: f64,
        #[arg(long, default_value_t = 0.0)]
        t_start: f64,
        /// End time in seconds (default: five lifetimes after onset)
        #[arg(long)]
        t_stop: Option<f64>,
        #[arg(long, default_value_t = 101)]
        samples: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Closed form vs golden-rule quadrature over an orientation/energy grid
    OracleCheck {
        #[arg(long, default_value_t = 5)]
        n_theta: usize,
        #[arg(long, default_value_t = 5)]
        n_phi: usize,
        #[arg(long, default_value_t = 9)]
        n_e0: usize,
        #[arg(long, default_value_t = 0.05)]
        e0_min: f64,
        #[arg(long, default_value_t = 0.85)]
        e0_max: f64,
        /// Fail when the largest relative error exceeds this
        #[arg(long, default_value_t = 0.01)]
        tolerance: f64,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct SweepArgs {
    /// Figure preset: 2, 3a, 3b, 4, 5a, 5b, 6a, 6b, 7a, 7b
    #[arg(long, conflicts_with = "custom")]
    figure: Option<String>,
    /// Custom sweep; requires --var and the non-swept parameters
    #[arg(long)]
    custom: bool,
    /// Swept variable for --custom: E_0, phi or theta
    #[arg(long)]
    var: Option<String>,
    #[arg(long)]
    start: Option<f64>,
    #[arg(long)]
    stop: Option<f64>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    theta: Option<f64>,
    #[arg(long)]
    phi: Option<f64>,
    #[arg(long)]
    e0: Option<f64>,
    /// Add golden-rule oracle columns
    #[arg(long)]
    oracle: bool,
    #[command(flatten)]
    common: Common,
}

fn load(common: &Common) -> Result<(LatticeConfig, DipoleOrientation), Error> {
    match &common.config {
        Some(path) => parse_config(path),
        None => Ok((LatticeConfig::default(), DipoleOrientation::default())),
    }
}

fn output(common: &Common) -> Result<Box<dyn Write>, Error> {
    Ok(match &common.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn band_energy(consts: &PhysicalConstants, cfg: &LatticeConfig, e_0: f64) -> f64 {
    exciton_energy(cfg, WaveVector2D::new(consts.wavenumber(e_0), 0.0))
}

fn sweep_spec(args: &SweepArgs) -> Result<SweepSpec, Error> {
    let mut spec = if let Some(id) = &args.figure {
        let mut spec = SweepSpec::figure(id.parse::<FigureId>()?);
        if args.theta.is_some() || args.phi.is_some() || args.e0.is_some() {
            return Err(Error::InvalidSweep("figure presets fix their own parameters".into()));
        }
        if args.var.is_some() {
            return Err(Error::InvalidSweep("--var only applies to --custom".into()));
        }
        spec.range = spec.swept.default_range();
        spec
    } else if args.custom {
        let var = args
            .var
            .as_deref()
            .ok_or_else(|| Error::InvalidSweep("--custom needs --var".into()))?;
        let swept: SweptVariable = var.parse()?;
        let fixed = FixedParams {
            theta: args.theta,
            phi: args.phi,
            e_0: args.e0,
        };
        SweepSpec::custom(swept, swept.default_range(), fixed)
    } else {
        return Err(Error::InvalidSweep("pass --figure <id> or --custom".into()));
    };
    let r = spec.range;
    spec.range = SweepRange::new(
        args.start.unwrap_or(r.start),
        args.stop.unwrap_or(r.stop),
        args.samples.unwrap_or(r.n_samples),
    );
    spec.validate()?;
    Ok(spec)
}

fn run(cli: Cli) -> Result<(), Error> {
    let consts = PhysicalConstants::CODATA;
    match cli.command {
        Command::Gamma { e0, e_ex, common } => {
            let (cfg, dip) = load(&common)?;
            let e_ex = e_ex.unwrap_or_else(|| band_energy(&consts, &cfg, e0));
            let r = gamma_exciton(&consts, &cfg, &dip, e_ex, e0)?;
            let row = SweepRow {
                swept: SweptVariable::PhotonEnergy,
                value: e0,
                gamma: r.gamma,
                ratio: r.ratio,
                regime: r.regime,
                oracle: None,
            };
            write_table(&[row], output(&common)?)?;
        }
        Command::Kc { direction_deg, common } => {
            let (cfg, _) = load(&common)?;
            let angle = direction_deg * PI / 180.0;
            let cp = critical_k(&consts, &cfg, [angle.cos(), angle.sin()])?;
            let mut out = output(&common)?;
            writeln!(out, "direction_x,direction_y,k_c_inv_angstrom,e_0_c_ev")?;
            writeln!(
                out,
                "{:?},{:?},{:?},{:?}",
                cp.direction[0], cp.direction[1], cp.k_c, cp.e_0_c
            )?;
            out.flush()?;
        }
        Command::Sweep(args) => {
            let (cfg, dip) = load(&args.common)?;
            let spec = sweep_spec(&args)?;
            let settings = args
                .oracle
                .then(|| OracleSettings::for_exciton_energy(&consts, cfg.e_a + 4.0 * cfg.j.abs()));
            let rows = run_sweep(&consts, &spec, &cfg, &dip, settings.as_ref())?;
            write_table(&rows, output(&args.common)?)?;
        }
        Command::Emission {
            e0,
            e_ex,
            n,
            z,
            t_start,
            t_stop,
            samples,
            common,
        } => {
            let (cfg, dip) = load(&common)?;
            let e_ex = e_ex.unwrap_or_else(|| band_energy(&consts, &cfg, e0));
            let n = n.unwrap_or_else(|| cfg.site_count());
            let probe = emission_report(&consts, &cfg, &dip, e_ex, e0, n, &[], z)?;
            let t_stop = match t_stop {
                Some(t) => t,
                None if probe.gamma > 0.0 => probe.onset + 5.0 * consts.hbar() / probe.gamma,
                None => probe.onset + 1e-6,
            };
            let times = linspace(t_start, t_stop, samples);
            let report = emission_report(&consts, &cfg, &dip, e_ex, e0, n, &times, z)?;
            if let Some(w) = report.warning {
                eprintln!("warning: {w}");
            }
            write_emission_table(&report, output(&common)?)?;
        }
        Command::OracleCheck {
            n_theta,
            n_phi,
            n_e0,
            e0_min,
            e0_max,
            tolerance,
            common,
        } => {
            let (cfg, dip) = load(&common)?;
            let e_ex = cfg.e_a;
            let grid = OraclePoint::grid(
                &linspace(0.0, PI / 2.0, n_theta),
                &linspace(0.0, PI, n_phi),
                &linspace(e0_min, e0_max, n_e0),
            );
            let settings = OracleSettings::for_exciton_energy(&consts, e_ex);
            let table = oracle_sweep(&consts, &cfg, dip.mu, e_ex, &grid, &settings);
            write_oracle_table(&table, output(&common)?)?;
            let max = table.max_rel_err().unwrap_or(0.0);
            eprintln!(
                "compared {} rows ({} flagged), max relative error {max:e}",
                table.rows.len() - table.flagged(),
                table.flagged()
            );
            if max > tolerance {
                return Err(Error::InvalidArgument {
                    name: "tolerance",
                    value: max,
                    reason: "oracle disagreement exceeds tolerance",
                });
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
