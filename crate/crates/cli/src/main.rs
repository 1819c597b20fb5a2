use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use disagree_cli::commands::{self, SimulateOptions};
use disagree_cli::{Result, Scenario, Units};

#[derive(Parser)]
#[command(name = "disagree", version, about = "Growth rates from disagreeing with the market")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Scenario JSON file.
    #[arg(long)]
    scenario: PathBuf,
    /// Investor to analyse; may be omitted when the scenario has only one.
    #[arg(long)]
    investor: Option<String>,
    /// Output file (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Rényi divergence of belief from market over an alpha grid (CSV).
    Profile {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',')]
        alphas: Option<Vec<f64>>,
    },
    /// Expected rate and rate drop over a risk-aversion grid (CSV).
    RateCurve {
        #[command(flatten)]
        common: Common,
        #[arg(long = "r-grid", value_delimiter = ',')]
        r_grid: Option<Vec<f64>>,
    },
    /// Monte Carlo repeated game checked against the predicted rate (JSON).
    Simulate {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        seed: Option<u64>,
        /// Shift added to the predicted rate, in nats.
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        prediction_offset: f64,
        /// Per-path CSV output.
        #[arg(long)]
        paths_out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Units::Nats)]
        units: Units,
    },
    /// Market formed by the scenario's Kelly investors (JSON).
    Market {
        #[command(flatten)]
        common: Common,
    },
    /// Optimal payoff and its price (JSON).
    Payoff {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Units::Nats)]
        units: Units,
    },
    /// Risk aversion that matches a target growth rate (JSON).
    SolveR {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_negative_numbers = true)]
        target: f64,
        #[arg(long, value_enum, default_value_t = Units::Nats)]
        units: Units,
    },
    /// Evidence accumulation and threshold decision (JSON).
    Neuro {
        /// JSON array of per-shape log-likelihood ratios, or @path to a file holding one.
        #[arg(long, allow_hyphen_values = true)]
        evidence: String,
        #[arg(long)]
        theta: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn open_out(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn run(cli: Cli) -> Result<()> {
    let (out_path, result) = match cli.command {
        Command::Neuro { evidence, theta, out } => {
            let text = match evidence.strip_prefix('@') {
                Some(path) => fs::read_to_string(path)?,
                None => evidence,
            };
            let evidence = commands::parse_evidence(&text)?;
            let mut w = open_out(out.as_deref())?;
            commands::cmd_neuro(&evidence, theta, &mut w)?;
            return Ok(w.flush()?);
        }
        Command::Profile { common, alphas } => (common.out.clone(), {
            let s = Scenario::load(&common.scenario)?;
            let mut w = open_out(common.out.as_deref())?;
            commands::cmd_profile(&s, common.investor.as_deref(), alphas.as_deref(), &mut w)
                .map(|_| w)
        }),
        Command::RateCurve { common, r_grid } => (common.out.clone(), {
            let s = Scenario::load(&common.scenario)?;
            let mut w = open_out(common.out.as_deref())?;
            commands::cmd_rate_curve(&s, common.investor.as_deref(), r_grid.as_deref(), &mut w)
                .map(|_| w)
        }),
        Command::Simulate { common, seed, prediction_offset, paths_out, units } => {
            (common.out.clone(), {
                let s = Scenario::load(&common.scenario)?;
                let options = SimulateOptions { seed, prediction_offset, units };
                let mut w = open_out(common.out.as_deref())?;
                let mut paths = paths_out.as_deref().map(|p| File::create(p).map(BufWriter::new)).transpose()?;
                let res = commands::cmd_simulate(
                    &s,
                    common.investor.as_deref(),
                    &options,
                    &mut w,
                    paths.as_mut().map(|p| p as &mut dyn Write),
                );
                if let Some(p) = paths.as_mut() {
                    p.flush()?;
                }
                res.map(|_| w)
            })
        }
        Command::Market { common } => (common.out.clone(), {
            let s = Scenario::load(&common.scenario)?;
            let mut w = open_out(common.out.as_deref())?;
            commands::cmd_market(&s, &mut w).map(|_| w)
        }),
        Command::Payoff { common, units } => (common.out.clone(), {
            let s = Scenario::load(&common.scenario)?;
            let mut w = open_out(common.out.as_deref())?;
            commands::cmd_payoff(&s, common.investor.as_deref(), units, &mut w).map(|_| w)
        }),
        Command::SolveR { common, target, units } => (common.out.clone(), {
            let s = Scenario::load(&common.scenario)?;
            let mut w = open_out(common.out.as_deref())?;
            commands::cmd_solve_r(&s, common.investor.as_deref(), target, units, &mut w).map(|_| w)
        }),
    };
    match result {
        Ok(mut w) => Ok(w.flush()?),
        Err(e) => {
            // Don't leave a half-written report behind.
            if let Some(p) = out_path {
                let _ = fs::remove_file(p);
            }
            Err(e)
        }
    }
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
