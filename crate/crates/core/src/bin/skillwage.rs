use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::Parser;

use skillwage::report::{run, Command, RunOptions, DEFAULT_FIGURE_RANGE, DEFAULT_FIGURE_SAMPLES, DEFAULT_PRECISION};
use skillwage::ModelError;

/// Lognormal skill-wage economy: calibration, investment, welfare and
/// reproduction tables.
#[derive(Debug, Parser)]
#[command(name = "skillwage", version)]
struct Cli {
    /// One of: calibrate, moments, invest, utility, plateau, cutoff,
    /// bellcurve, simulate, table1, figure1, extrapolate
    subcommand: String,
    /// Scenario file (TOML); repeatable
    #[arg(long)]
    scenario: Vec<PathBuf>,
    /// Built-in scenario: paper-1975, paper-2024, paper-2073, chatbot; repeatable
    #[arg(long)]
    preset: Vec<String>,
    /// Write the CSV artifact here
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Number of simulated agents
    #[arg(long)]
    n: Option<usize>,
    /// Relative risk aversion
    #[arg(long)]
    phi: Option<f64>,
    /// Productivity share of income
    #[arg(long)]
    alpha: Option<f64>,
    /// Significant digits in reports and CSV
    #[arg(long, default_value_t = DEFAULT_PRECISION)]
    precision: usize,
    /// Use unrounded calibrated coefficients for the year presets
    #[arg(long)]
    recalibrate: bool,
    /// Income CSV (label,median,mean[,mu,sigma]) for `calibrate`
    #[arg(long)]
    data: Option<PathBuf>,
    /// Periods to extrapolate (1 = one base-to-reference span)
    #[arg(long, default_value_t = 1.0)]
    periods: f64,
    /// Wage threshold for `simulate`
    #[arg(long)]
    threshold: Option<f64>,
    /// Skill levels for `table1`; repeatable
    #[arg(long)]
    iq: Vec<f64>,
    #[arg(long, default_value_t = DEFAULT_FIGURE_RANGE.0)]
    iq_min: f64,
    #[arg(long, default_value_t = DEFAULT_FIGURE_RANGE.1)]
    iq_max: f64,
    /// Points per figure series
    #[arg(long, default_value_t = DEFAULT_FIGURE_SAMPLES)]
    samples: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                ModelError::Usage(_) => ExitCode::from(2),
                _ => ExitCode::FAILURE,
            }
        }
    }
}

fn execute(cli: Cli) -> Result<(), ModelError> {
    let command = Command::from_str(&cli.subcommand)?;
    let opts = RunOptions {
        scenarios: cli.scenario,
        presets: cli.preset,
        seed: cli.seed,
        n: cli.n,
        phi: cli.phi,
        alpha: cli.alpha,
        precision: cli.precision,
        recalibrate: cli.recalibrate,
        data: cli.data,
        periods: cli.periods,
        threshold: cli.threshold,
        iq: cli.iq,
        iq_range: (cli.iq_min, cli.iq_max),
        samples: cli.samples,
    };
    let report = run(command, &opts)?;
    print!("{}", report.text);
    if let (Some(path), Some(csv)) = (cli.out, report.csv) {
        std::fs::write(&path, csv).map_err(|e| ModelError::Io {
            path: path.clone(),
            message: e.to_string(),
        })?;
    }
    Ok(())
}
