use clap::{Parser, Subcommand};
use lpv_realize::builtin::ExampleId;
use lpv_realize::cli::{self, CliConfig};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "lpv-realize", version, about = "Direct state-space realization and structural analysis of discrete-time LPV input-output models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze a model: reachability, observability, reconstructability,
    /// frozen-scheduling decompositions. Exit status reflects tool failures
    /// only; verdicts live in the report.
    Check {
        /// Model file (JSON)
        model: PathBuf,
        /// Grid as lo:hi:count, comma-separated per scheduling dimension
        /// (defaults to the model domain when it is bounded)
        #[arg(long)]
        grid: Option<String>,
        /// Grid points per dimension when --grid gives no count
        #[arg(long, default_value_t = 101)]
        grid_points: usize,
        /// Rank epsilon as a multiple of machine precision
        #[arg(long, default_value_t = 1e3)]
        rank_epsilon_scale: f64,
        /// Observability horizon (defaults to n_x)
        #[arg(long)]
        horizon: Option<usize>,
        /// Number of random scheduling trials
        #[arg(long, default_value_t = 10)]
        trials: usize,
        /// Seed for the random trials
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Report path (stdout when omitted)
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Evaluate the realization matrices at one scheduling point.
    Realize {
        /// Model file (JSON)
        model: PathBuf,
        /// Scheduling point, comma-separated components
        #[arg(long, value_delimiter = ',', required = true)]
        at: Vec<f64>,
        /// Output path (stdout when omitted)
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Simulate the IO difference equation from rest over trajectory files.
    Simulate {
        /// Model file (JSON)
        model: PathBuf,
        /// Input trajectory file (CSV with header)
        #[arg(long, short = 'u')]
        input: PathBuf,
        /// Scheduling trajectory file (CSV with header)
        #[arg(long, short = 'p')]
        scheduling: PathBuf,
        /// Output trajectory file
        #[arg(long, short = 'o')]
        output: PathBuf,
    },
    /// Built-in example systems.
    Examples {
        #[command(subcommand)]
        action: ExamplesAction,
    },
}

#[derive(Subcommand)]
enum ExamplesAction {
    /// Evaluate every expected fact; exit 0 iff all pass.
    RunAll {
        /// Restrict to one example (mech1..mech4)
        #[arg(long)]
        only: Option<String>,
        /// Emit the table as JSON
        #[arg(long)]
        json: bool,
    },
}

fn run() -> Result<ExitCode, lpv_realize::Error> {
    let cli = Cli::parse();
    match cli.command {
        Command::Check {
            model,
            grid,
            grid_points,
            rank_epsilon_scale,
            horizon,
            trials,
            seed,
            output,
        } => {
            let cfg = CliConfig {
                grid: grid.as_deref().map(cli::parse_grid_spec).transpose()?,
                grid_points_per_dim: grid_points,
                rank_epsilon_scale,
                horizon,
                trial_count: trials,
                seed,
                output,
            };
            cli::cmd_check(&model, &cfg)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Realize { model, at, output } => {
            cli::cmd_realize(&model, &at, output.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Simulate {
            model,
            input,
            scheduling,
            output,
        } => {
            cli::cmd_simulate(&model, &input, &scheduling, &output)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Examples { action } => match action {
            ExamplesAction::RunAll { only, json } => {
                let ids: Option<Vec<ExampleId>> = match only {
                    Some(name) => Some(vec![name.parse()?]),
                    None => None,
                };
                let (text, pass) = cli::cmd_examples(ids.as_deref(), json)?;
                println!("{text}");
                Ok(if pass {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::FAILURE
                })
            }
        },
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
