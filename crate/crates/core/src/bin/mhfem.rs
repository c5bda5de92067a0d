use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use mhfem::config::{parse_levels, DEFAULT_LEVELS};
use mhfem::fourier::ProblemSpec;
use mhfem::majorant::MajorantReport;
use mhfem::report::{render, OutputFormat};
use mhfem::{solve_level, Error, RunConfig};

const EXIT_CONFIG: u8 = 2;
const EXIT_SOLVER: u8 = 3;

/// Multiharmonic finite elements with guaranteed error bounds for
/// time-periodic heat problems on the unit square.
#[derive(Parser)]
#[command(name = "mhfem", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Time-harmonic bubble solution, one mode.
    Example1(Common),
    /// Non-harmonic solution e^t sin^3 t sin(pi x) sin(pi y), modes 0..=8.
    Example2(Common),
    /// Problem read from a key = value file.
    Custom {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    /// Cells per side, comma separated and ascending, e.g. 9,27,81.
    #[arg(long)]
    levels: Option<String>,
    /// Relative residual reduction of the iterative solvers.
    #[arg(long)]
    tol: Option<f64>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_parser = ["csv", "table"])]
    format: Option<String>,
    /// Add per-mode solve times to the table.
    #[arg(long)]
    timings: bool,
}

fn build_config(command: &Command) -> Result<(RunConfig, bool), Error> {
    let (mut cfg, common) = match command {
        Command::Example1(c) => (
            RunConfig::new(ProblemSpec::example1(), DEFAULT_LEVELS.to_vec())?,
            c,
        ),
        Command::Example2(c) => (
            RunConfig::new(ProblemSpec::example2(), DEFAULT_LEVELS.to_vec())?,
            c,
        ),
        Command::Custom { config, common } => {
            let text = std::fs::read_to_string(config)
                .map_err(|e| Error::config("config", format!("{}: {e}", config.display())))?;
            (text.parse::<RunConfig>()?, common)
        }
    };
    if let Some(l) = &common.levels {
        cfg.levels = parse_levels(l)?;
    }
    if let Some(t) = common.tol {
        cfg.options.solver.rel_tol = t;
    }
    if let Some(f) = &common.format {
        cfg.format = f.parse()?;
    }
    if let Some(o) = &common.out {
        cfg.output = Some(o.clone());
    }
    cfg.validate()?;
    Ok((cfg, common.timings))
}

fn emit(cfg: &RunConfig, reports: &[MajorantReport], timings: bool) -> Result<(), String> {
    let text = render(reports, cfg.format, timings);
    match &cfg.output {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (cfg, timings) = match build_config(&cli.command) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    let mut reports = Vec::new();
    let mut failure = None;
    for &level in &cfg.levels {
        match solve_level(&cfg.problem, level, &cfg.options) {
            Ok(r) => reports.push(r),
            Err(e) => {
                failure = Some((level, e));
                break;
            }
        }
    }
    if let Err(e) = emit(&cfg, &reports, timings) {
        eprintln!("error: {e}");
        return ExitCode::FAILURE;
    }
    match failure {
        None => ExitCode::SUCCESS,
        Some((level, e)) => {
            eprintln!("error: level {level} aborted: {e}");
            if cfg.format == OutputFormat::Table && cfg.output.is_none() {
                println!("level {level}: aborted ({e})");
            }
            if e.is_solver_failure() {
                ExitCode::from(EXIT_SOLVER)
            } else {
                ExitCode::from(EXIT_CONFIG)
            }
        }
    }
}
