use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use telebell::telebell::OptimizerConfig;
use telebell_cli::report::{analyze, to_json};
use telebell_cli::scan::{parse_range, scan, to_csv};
use telebell_cli::verify::{run_suite, Suite};
use telebell_cli::{load_state, write_file, CliError};

#[derive(Parser)]
#[command(name = "telebell", version, about = "Bell-CHSH and Bell teleportation analysis of two-qubit channels")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OptimizerArgs {
    /// Quasi-random starts per assignment pair
    #[arg(long, default_value_t = 16)]
    starts: usize,
    /// Points per angle in the floor grid
    #[arg(long, default_value_t = 24)]
    grid_floor: usize,
    /// Compass-search sweeps per start
    #[arg(long, default_value_t = 400)]
    iterations: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl OptimizerArgs {
    fn config(&self) -> OptimizerConfig {
        OptimizerConfig {
            starts: self.starts,
            grid_floor: self.grid_floor,
            max_iterations: self.iterations,
            seed: self.seed,
            ..OptimizerConfig::default()
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Analyze one channel state and print a JSON report
    Analyze {
        /// `werner`, `mixed`, `bell Phi+`, `d_lambda_alpha L A`, or a file holding a spec or 16 `re im` lines
        #[arg(long)]
        state: String,
        #[command(flatten)]
        optimizer: OptimizerArgs,
        /// Also write the report here
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Scan the D_{lambda,alpha} family and write CSV
    Scan {
        /// start:stop:step
        #[arg(long)]
        lambda: String,
        /// start:stop:step
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        optimizer: OptimizerArgs,
    },
    /// Run a verification suite
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        trials: Option<usize>,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Analyze { state, optimizer, json } => {
            let loaded = load_state(&state)?;
            let text = to_json(&analyze(&loaded, &optimizer.config())?);
            if let Some(path) = json {
                write_file(&path, &text)?;
            }
            print!("{text}");
        }
        Command::Scan { lambda, alpha, out, optimizer } => {
            let (ls, als) = (parse_range(&lambda)?, parse_range(&alpha)?);
            // Fail on an unwritable path before doing any work.
            write_file(&out, "")?;
            let records = scan(&ls, &als, &optimizer.config())?;
            write_file(&out, &to_csv(&records))?;
            eprintln!("wrote {} records to {}", records.len(), out.display());
        }
        Command::Verify { suite, seed, trials } => {
            let lines = run_suite(suite, seed, trials);
            for l in &lines {
                println!("{l}");
            }
            let failed = lines.iter().filter(|l| !l.passed).count();
            println!("{}/{} passed", lines.len() - failed, lines.len());
            if failed > 0 {
                return Err(CliError::VerifyFailed { failed, total: lines.len() });
            }
        }
    }
    Ok(())
}

fn configure_threads() {
    let Ok(value) = std::env::var("TELEBELL_THREADS") else {
        return;
    };
    match value.parse::<usize>() {
        Ok(n) if n > 0 => {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
        _ => eprintln!("warning: ignoring TELEBELL_THREADS={value}"),
    }
}

fn main() -> ExitCode {
    configure_threads();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
