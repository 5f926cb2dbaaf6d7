use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use chiralwg::config_file::ConfigSpec;
use chiralwg::regime::optimal_nonreciprocity_gamma;
use chiralwg::sweep::{run_sweep, threads_from_env, write_csv, Axis, Observable};
use chiralwg::verify::{run_verification, Fault};
use chiralwg::windows::{find_reflection_windows, find_router_windows};
use chiralwg::{classify_regime, Error};
use clap::{Args, Parser, Subcommand, ValueEnum};

/// Single-photon scattering spectra of a chiral giant atom.
#[derive(Parser)]
#[command(name = "chiralwg", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Observables along a detuning grid.
    Spectrum {
        #[command(flatten)]
        common: Common,
        /// Detuning grid START:STOP:COUNT.
        #[arg(long, default_value = "-50:50:1001", allow_hyphen_values = true)]
        delta: String,
        /// Comma-separated observables.
        #[arg(long, default_value = "T_left,R_left,T_right,R_right")]
        obs: String,
    },
    /// Observables on a two-dimensional grid.
    Map2d {
        #[command(flatten)]
        common: Common,
        /// First axis as START:STOP:COUNT over the detuning.
        #[arg(long, allow_hyphen_values = true, conflicts_with = "axis1")]
        delta: Option<String>,
        /// First axis as KEY=START:STOP:COUNT, instead of --delta.
        #[arg(long, allow_hyphen_values = true)]
        axis1: Option<String>,
        /// Second axis KEY=START:STOP:COUNT.
        #[arg(long, allow_hyphen_values = true)]
        axis2: String,
        #[arg(long, default_value = "T_left")]
        obs: String,
    },
    /// Total-reflection windows of the left-incidence transmission.
    Windows {
        #[command(flatten)]
        common: Common,
        /// Scan range START:STOP:COUNT; COUNT is the grid resolution.
        #[arg(long, default_value = "-60:60:20001", allow_hyphen_values = true)]
        delta: String,
        /// Transmission below which a sample belongs to a window.
        #[arg(long, default_value_t = 0.1)]
        threshold: f64,
        /// Scan every router phase 2 m' pi / N instead of the configured phi12.
        #[arg(long)]
        router: bool,
    },
    /// Loss rate and operating point of perfect nonreciprocity.
    Nonreciprocity {
        #[command(flatten)]
        common: Common,
    },
    /// Compare closed forms against the linear-system oracle.
    Verify {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Negative control: flip the sign of Gamma_xy in the closed forms.
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
}

#[derive(Args)]
struct Common {
    /// Configuration file with key = value lines.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override a configuration key (repeatable).
    #[arg(long = "set", value_name = "KEY=VAL", allow_hyphen_values = true)]
    set: Vec<String>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Output file (default stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Table,
}

enum Failure {
    Usage(String),
    Verification,
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

fn open_out(path: &Option<PathBuf>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => {
            Box::new(BufWriter::new(File::create(p).map_err(|e| {
                Failure::Runtime(format!("{}: {e}", p.display()))
            })?))
        }
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn load_spec(common: &Common) -> Result<ConfigSpec, Failure> {
    let mut spec = match &common.config {
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?;
            ConfigSpec::parse_str(&text)?
        }
        None => ConfigSpec::default(),
    };
    for s in &common.set {
        spec.set_assignment(s)?;
    }
    Ok(spec)
}

fn emit_grid(grid: &chiralwg::sweep::SweepGrid, common: &Common) -> CmdResult {
    let mut out = open_out(&common.out)?;
    match common.format {
        Format::Csv => grid.write_csv(&mut out)?,
        Format::Table => grid.write_table(&mut out)?,
    }
    out.flush()?;
    Ok(())
}

fn cmd_spectrum(common: &Common, delta: &str, obs: &str) -> CmdResult {
    let spec = load_spec(common)?;
    let axis = Axis::parse_range("delta", delta)?;
    let obs = Observable::parse_list(obs)?;
    let grid = run_sweep(&spec, &axis, None, &obs, threads_from_env())?;
    emit_grid(&grid, common)
}

fn cmd_map2d(
    common: &Common,
    delta: Option<&str>,
    axis1: Option<&str>,
    axis2: &str,
    obs: &str,
) -> CmdResult {
    let spec = load_spec(common)?;
    let a1 = match (delta, axis1) {
        (Some(d), _) => Axis::parse_range("delta", d)?,
        (None, Some(a)) => a.parse()?,
        (None, None) => return Err(Failure::Usage("map2d needs --delta or --axis1".into())),
    };
    let a2: Axis = axis2.parse()?;
    let obs = Observable::parse_list(obs)?;
    let grid = run_sweep(&spec, &a1, Some(&a2), &obs, threads_from_env())?;
    emit_grid(&grid, common)
}

fn cmd_windows(common: &Common, delta: &str, threshold: f64, router: bool) -> CmdResult {
    let config = load_spec(common)?.build()?;
    let axis = Axis::parse_range("delta", delta)?;
    let range = (axis.start, axis.stop);
    let windows = if router {
        find_router_windows(&config, range, threshold, axis.count)?
    } else {
        find_reflection_windows(&config, range, threshold, axis.count)?
    };
    let columns: Vec<String> = ["phi12", "center", "width", "min_T"]
        .map(String::from)
        .to_vec();
    let rows: Vec<Vec<f64>> = windows
        .iter()
        .map(|w| vec![w.phase, w.center, w.width, w.min_t])
        .collect();
    let mut out = open_out(&common.out)?;
    match common.format {
        Format::Csv => write_csv(&columns, &rows, &mut out)?,
        Format::Table => {
            writeln!(out, "{} window(s)", windows.len())?;
            writeln!(
                out,
                "{:>22} {:>24} {:>24} {:>24}",
                "phi12", "center", "width", "min_T"
            )?;
            for w in &windows {
                writeln!(
                    out,
                    "{:>22.15} {:>24.15e} {:>24.15e} {:>24.15e}",
                    w.phase, w.center, w.width, w.min_t
                )?;
            }
        }
    }
    out.flush()?;
    Ok(())
}

fn cmd_nonreciprocity(common: &Common) -> CmdResult {
    let config = load_spec(common)?.build()?;
    let mut out = open_out(&common.out)?;
    match optimal_nonreciprocity_gamma(&config) {
        Err(Error::NoNonreciprocity(_)) => {
            let regime = classify_regime(&config, chiralwg::model::DEFAULT_REGIME_EPS);
            writeln!(
                out,
                "no nonreciprocity possible: Gamma_x = Gamma_y for this configuration (regime {regime})"
            )?;
        }
        Err(e) => return Err(e.into()),
        Ok(o) => {
            let columns: Vec<String> = [
                "gamma_opt",
                "delta",
                "gamma_x",
                "gamma_y",
                "T_left",
                "T_right",
                "contrast",
            ]
            .map(String::from)
            .to_vec();
            let row = vec![
                o.gamma,
                o.delta,
                o.gamma_x,
                o.gamma_y,
                o.trans_left,
                o.trans_right,
                o.contrast,
            ];
            match common.format {
                Format::Csv => write_csv(&columns, &[row], &mut out)?,
                Format::Table => {
                    for (name, v) in columns.iter().zip(row) {
                        writeln!(out, "{name:>10} = {v:.16e}")?;
                    }
                }
            }
        }
    }
    out.flush()?;
    Ok(())
}

fn cmd_verify(
    seed: u64,
    trials: usize,
    format: Format,
    out: &Option<PathBuf>,
    fault: bool,
) -> CmdResult {
    if trials == 0 {
        return Err(Failure::Usage("--trials must be at least 1".into()));
    }
    let fault = if fault {
        Fault::FlipCrossRate
    } else {
        Fault::None
    };
    let report = run_verification(seed, trials, fault);
    let mut w = open_out(out)?;
    match format {
        Format::Table => writeln!(w, "{report}")?,
        Format::Csv => {
            writeln!(w, "suite,checks,failures,max_deviation,tolerance")?;
            for s in &report.suites {
                writeln!(
                    w,
                    "{},{},{},{:.16e},{:.16e}",
                    s.name, s.checks, s.failures, s.max_deviation, s.tolerance
                )?;
            }
        }
    }
    w.flush()?;
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Spectrum { common, delta, obs } => cmd_spectrum(common, delta, obs),
        Command::Map2d {
            common,
            delta,
            axis1,
            axis2,
            obs,
        } => cmd_map2d(common, delta.as_deref(), axis1.as_deref(), axis2, obs),
        Command::Windows {
            common,
            delta,
            threshold,
            router,
        } => cmd_windows(common, delta, *threshold, *router),
        Command::Nonreciprocity { common } => cmd_nonreciprocity(common),
        Command::Verify {
            seed,
            trials,
            format,
            out,
            inject_fault,
        } => cmd_verify(*seed, *trials, *format, out, *inject_fault),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
