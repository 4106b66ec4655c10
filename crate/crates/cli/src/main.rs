use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use secrecy_lab_cli::config::parse;
use secrecy_lab_cli::sweep::{evaluate, Mode};
use secrecy_lab_cli::validation::Numerics;

#[derive(Parser)]
#[command(
    name = "secrecy-lab",
    version,
    about = "Secrecy metrics of alpha-F fading links with pointing errors"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluates the configured metrics and writes CSV.
    Run(RunArgs),
    /// Monte Carlo estimates only.
    Mc(RunArgs),
    /// Runs the invariant suites; exits 1 on any failure.
    Selftest {
        /// Full sample sizes instead of the quick budget.
        #[arg(long)]
        full: bool,
        /// Forces the contour crossing point, for fault injection.
        #[arg(long, value_name = "C", allow_hyphen_values = true)]
        contour_crossing: Option<f64>,
    },
}

#[derive(clap::Args)]
struct RunArgs {
    config: PathBuf,
    /// Output file; defaults to `output.path`, then stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides `mc.seed`.
    #[arg(long)]
    seed: Option<u64>,
}

const EXIT_SELFTEST: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;

fn run(args: &RunArgs, mode: Mode) -> ExitCode {
    let text = match std::fs::read_to_string(&args.config) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", args.config.display());
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    let mut cfg = match parse(&text) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {}: {e}", args.config.display());
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    if let Some(seed) = args.seed {
        cfg.mc.seed = seed;
    }
    let csv = match evaluate(&cfg, mode) {
        Ok(csv) => csv,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_NUMERICAL);
        }
    };
    let out = args.out.clone().or_else(|| cfg.output_path.as_ref().map(PathBuf::from));
    match out {
        Some(path) => write(&path, &csv),
        None => {
            print!("{csv}");
            ExitCode::SUCCESS
        }
    }
}

fn write(path: &Path, csv: &str) -> ExitCode {
    match std::fs::write(path, csv) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: cannot write {}: {e}", path.display());
            ExitCode::from(EXIT_CONFIG)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match &cli.command {
        Command::Run(a) => run(a, Mode::Run),
        Command::Mc(a) => run(a, Mode::MonteCarlo),
        Command::Selftest { full, contour_crossing } => {
            let num = contour_crossing.map_or_else(Numerics::default, Numerics::with_crossing);
            let (report, passed) = secrecy_lab_cli::selftest(*full, &num);
            print!("{report}");
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_SELFTEST)
            }
        }
    }
}
