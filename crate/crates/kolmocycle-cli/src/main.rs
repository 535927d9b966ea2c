use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use kolmocycle_cli::commands::{self, to_sorted_json};
use kolmocycle_cli::config::SweepSpec;
use kolmocycle_cli::{verify, CliError, RunConfig};

#[derive(Parser)]
#[command(name = "kolmocycle", version, about = "Cyclicity of the boundary polycycle of planar Kolmogorov systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(clap::Args)]
struct Common {
    /// JSON run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    smin: Option<f64>,
    /// Lower window end as a power of ten, for windows below the smallest double.
    #[arg(long = "log10-smin", global = true, allow_negative_numbers = true)]
    log10_smin: Option<f64>,
    #[arg(long, global = true)]
    smax: Option<f64>,
    /// Number of grid points.
    #[arg(long, global = true)]
    n: Option<usize>,
    #[arg(long, global = true)]
    param: Option<String>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    from: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    to: Option<f64>,
    #[arg(long, global = true)]
    steps: Option<usize>,
    /// Include wall time in the analysis report.
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Hypotheses, test functions, stability, verdict and the interior equilibrium.
    Analyze,
    /// CSV of the displacement map on a log-spaced grid.
    Displacement,
    /// Limit cycles near the polycycle.
    Cycles,
    /// CSV of test functions and cycle counts along one parameter.
    Sweep,
    /// Run the acceptance suite.
    Verify,
}

fn load(common: &Common) -> Result<RunConfig, CliError> {
    let path = common.config.as_ref().ok_or_else(|| CliError::Parse("--config <path> is required".into()))?;
    let mut cfg = RunConfig::load(path)?;
    let a = &mut cfg.analysis;
    if common.smin.is_some() || common.log10_smin.is_some() {
        a.s_min = common.smin;
        a.log10_s_min = common.log10_smin;
    }
    a.s_max = common.smax.or(a.s_max);
    a.grid_n = common.n.or(a.grid_n);
    let flags = (common.param.clone(), common.from, common.to, common.steps);
    match flags {
        (None, None, None, None) => {}
        (Some(param), Some(from), Some(to), Some(steps)) => a.sweep = Some(SweepSpec { param, from, to, steps }),
        _ => return Err(CliError::Parse("--param, --from, --to and --steps go together".into())),
    }
    Ok(cfg)
}

fn run(command: Command, common: &Common) -> Result<String, CliError> {
    match command {
        Command::Analyze => commands::analyze(&load(common)?, common.timing),
        Command::Displacement => commands::displacement(&load(common)?),
        Command::Cycles => commands::cycles(&load(common)?),
        Command::Sweep => commands::sweep(&load(common)?),
        Command::Verify => Ok(to_sorted_json(&verify::run_all())),
    }
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Io(e.to_string());
    match out {
        Some(path) => std::fs::write(path, text).map_err(io),
        None => std::io::stdout().lock().write_all(text.as_bytes()).map_err(io),
    }
}

fn fail(e: CliError) -> ExitCode {
    eprintln!("{}", e.body());
    ExitCode::from(e.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => return fail(CliError::Parse(e.to_string())),
        Err(e) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    match run(cli.command, &cli.common).and_then(|text| emit(&text, cli.common.out.as_ref())) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(e),
    }
}
