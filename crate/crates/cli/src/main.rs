//! Command-line driver: single runs, convergence studies, mode stability maps,
//! dispersion roots and manufactured-solution checks.
//!
//! Exit codes: 0 success, 1 check failed or output error, 2 blow-up,
//! 3 solver failure, 4 configuration or argument error.

use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use ampfsi::exact::{find_omega, find_omega_from, mp_i1_dispersion};
use ampfsi::harness::{self, DEFAULT_GRIDS};
use ampfsi::modes::{self, MapRow};
use ampfsi::params::{make_preset, ModelProblem, RunConfig, Scheme};
use ampfsi::{Error, Exec};

const EXIT_CHECK: u8 = 1;
const EXIT_BLOWUP: u8 = 2;
const EXIT_SOLVER: u8 = 3;
const EXIT_CONFIG: u8 = 4;

#[derive(Parser, Debug)]
#[command(name = "ampfsi", version, about = "Added-mass partitioned FSI solver")]
struct Cli {
    /// Run everything on the calling thread.
    #[arg(long, global = true)]
    sequential: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Advance one configuration to its final time and report errors.
    Solve {
        config: PathBuf,
        /// Run directory (overrides [output] dir).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Convergence study over a grid sequence.
    Converge {
        config: PathBuf,
        #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_GRIDS.to_vec())]
        grids: Vec<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Mode stability map of the inviscid problem as CSV rows.
    Modes {
        #[arg(long, value_delimiter = ',', required = true)]
        delta: Vec<f64>,
        #[arg(long, value_delimiter = ',', required = true)]
        kx: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_values_t = vec![0.01, 0.1, 0.3])]
        dt: Vec<f64>,
        #[arg(long, value_enum, default_value_t = SchemeArg::Both)]
        scheme: SchemeArg,
        /// Also write modes.csv into this directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Traveling-wave frequency as CSV rows.
    Dispersion {
        #[arg(long)]
        problem: String,
        #[arg(long, value_delimiter = ',', required = true)]
        delta: Vec<f64>,
        /// Viscosity (ignored for MP-I1).
        #[arg(long, default_value_t = ampfsi::params::DEFAULT_VISCOSITY)]
        mu: f64,
        #[arg(long, default_value_t = 2.0 * PI)]
        k: f64,
        /// Initial guess "re,im" for the root search.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        guess: Option<Vec<f64>>,
    },
    /// Manufactured-solution convergence check of rates and ratios.
    MmsCheck {
        config: PathBuf,
        #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_GRIDS.to_vec())]
        grids: Vec<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SchemeArg {
    Amp,
    Traditional,
    Both,
}

impl SchemeArg {
    fn schemes(self) -> Vec<Scheme> {
        match self {
            SchemeArg::Amp => vec![Scheme::Amp],
            SchemeArg::Traditional => vec![Scheme::Traditional],
            SchemeArg::Both => vec![Scheme::Amp, Scheme::Traditional],
        }
    }
}

/// Error with the process exit code it maps to.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidArgument(_)
            | Error::InvalidConfig(_)
            | Error::ConfigParse(_)
            | Error::DivergentMode
            | Error::OutsideHypotheses(_) => EXIT_CONFIG,
            Error::SolverSingular(_)
            | Error::SolverFailure { .. }
            | Error::RootFailure { .. }
            | Error::DegenerateRoot(_)
            | Error::ShellResonance(_)
            | Error::StartupRequired(_) => EXIT_SOLVER,
            Error::Io(_) => EXIT_CHECK,
        };
        Failure::new(code, e.to_string())
    }
}

type CliResult = Result<u8, Failure>;

fn load(path: &Path) -> Result<RunConfig, Failure> {
    RunConfig::from_path(path).map_err(|e| Failure::new(EXIT_CONFIG, format!("{}: {e}", path.display())))
}

fn run_dir(config: &RunConfig, out: Option<PathBuf>) -> PathBuf {
    out.or_else(|| config.output.dir.clone()).unwrap_or_else(|| PathBuf::from("run"))
}

fn blowup_code(any: bool) -> u8 {
    if any {
        EXIT_BLOWUP
    } else {
        0
    }
}

fn solve(config: PathBuf, out: Option<PathBuf>, exec: Exec) -> CliResult {
    let config = load(&config)?;
    let outcome = harness::run(&config, exec)?;
    let report = harness::single_report(&config, &outcome);
    let dir = run_dir(&config, out);
    harness::write_run_directory(&dir, &config, &report, std::slice::from_ref(&outcome))?;
    print!("{}", report.to_table());
    if let Some(step) = outcome.blowup_step {
        eprintln!("blow-up at step {step} (t = {:.6})", outcome.stepper.time());
    }
    println!("wrote {}", dir.display());
    Ok(blowup_code(outcome.blew_up()))
}

fn converge(config: PathBuf, grids: Vec<usize>, out: Option<PathBuf>, exec: Exec) -> CliResult {
    let config = load(&config)?;
    let (report, outcomes) = harness::converge_runs(&config, &grids, exec)?;
    let dir = run_dir(&config, out);
    harness::write_run_directory(&dir, &config, &report, &outcomes)?;
    print!("{}", report.to_table());
    println!("wrote {}", dir.display());
    Ok(blowup_code(report.any_blowup()))
}

fn modes_map(delta: Vec<f64>, kx: Vec<f64>, dt: Vec<f64>, scheme: SchemeArg, out: Option<PathBuf>, exec: Exec) -> CliResult {
    let rows = modes::stability_map(&delta, &kx, &dt, &scheme.schemes(), exec)?;
    let mut text = String::from(MapRow::CSV_HEADER);
    text.push('\n');
    for r in &rows {
        text.push_str(&r.to_csv());
        text.push('\n');
    }
    print!("{text}");
    if let Some(dir) = out {
        fs::create_dir_all(&dir).map_err(Error::from)?;
        fs::write(dir.join("modes.csv"), &text).map_err(Error::from)?;
    }
    Ok(0)
}

fn dispersion(problem: String, deltas: Vec<f64>, mu: f64, k: f64, guess: Option<Vec<f64>>) -> CliResult {
    let problem: ModelProblem = problem.parse()?;
    println!("delta,problem,mu,k,re_omega,im_omega");
    for delta in deltas {
        let mut params = make_preset(delta, problem)?;
        let omega = if problem.is_viscous() {
            if !(mu > 0.0) {
                return Err(Failure::new(EXIT_CONFIG, format!("{problem} needs mu > 0")));
            }
            params.mu = mu;
            match &guess {
                Some(g) if g.len() != 2 => {
                    return Err(Failure::new(EXIT_CONFIG, "--guess takes two values: re,im"))
                }
                Some(g) => find_omega_from(k, &params, problem.theta(), Complex64::new(g[0], g[1]))?,
                None => find_omega(k, &params, problem.theta(), None)?,
            }
        } else {
            Complex64::new(mp_i1_dispersion(k, &params)?.0, 0.0)
        };
        println!(
            "{delta:e},{problem},{:e},{k:.10},{:.10},{:.10e}",
            params.mu, omega.re, omega.im
        );
    }
    Ok(0)
}

fn mms_check(config: PathBuf, grids: Vec<usize>, out: Option<PathBuf>, exec: Exec) -> CliResult {
    let config = load(&config)?;
    harness::require_mms(&config)?;
    let (report, outcomes) = harness::converge_runs(&config, &grids, exec)?;
    let check = harness::mms_check_report(&config, report)?;
    let dir = run_dir(&config, out);
    harness::write_run_directory(&dir, &config, &check.report, &outcomes)?;
    print!("{}", check.report.to_table());
    if check.report.any_blowup() {
        println!("FAIL: blow-up");
        return Ok(EXIT_BLOWUP);
    }
    if check.passed() {
        println!(
            "PASS: rates in [{}, {}], ratios in [{}, {}]",
            harness::RATE_WINDOW.0,
            harness::RATE_WINDOW.1,
            harness::RATIO_WINDOW.0,
            harness::RATIO_WINDOW.1
        );
        Ok(0)
    } else {
        println!("FAIL: {}", check.failures.join(", "));
        Ok(EXIT_CHECK)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let exec = if cli.sequential { Exec::Sequential } else { Exec::Parallel };
    let result = match cli.command {
        Command::Solve { config, out } => solve(config, out, exec),
        Command::Converge { config, grids, out } => converge(config, grids, out, exec),
        Command::Modes {
            delta,
            kx,
            dt,
            scheme,
            out,
        } => modes_map(delta, kx, dt, scheme, out, exec),
        Command::Dispersion {
            problem,
            delta,
            mu,
            k,
            guess,
        } => dispersion(problem, delta, mu, k, guess),
        Command::MmsCheck { config, grids, out } => mms_check(config, grids, out, exec),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
