//! Command-line front end: `learn`, `distance` and `bignet`.

pub mod args;
pub mod bignet;
pub mod distance;
mod error;
pub mod learn;
pub mod manifest;

use clap::Parser;

pub use args::Cli;
pub use error::{CliError, EXIT_INPUT, EXIT_NUMERIC, EXIT_SHAPE};

use args::Command;

pub fn init_logging() {
    let env = env_logger::Env::new().filter_or("SRGG_LOG", "warn");
    let _ = env_logger::Builder::from_env(env).format_timestamp(None).try_init();
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Input(format!("thread pool: {e}")))?;
    }
    match &cli.command {
        Command::Learn(a) => {
            for p in learn::run(a)? {
                println!("{}", p.display());
            }
        }
        Command::Distance(a) => {
            let (out, _) = distance::run(a)?;
            println!("{}", serde_json::to_string_pretty(&out).map_err(srgg_core::io::IoError::from)?);
        }
        Command::Bignet(a) => {
            let (stats, outputs) = bignet::run(a)?;
            eprintln!(
                "{} nodes ({} connected), {} edges, average degree {:.3}",
                stats.nodes, stats.connected_nodes, stats.edges, stats.average_degree_connected
            );
            for p in outputs {
                println!("{}", p.display());
            }
        }
    }
    Ok(())
}

/// Parses `std::env::args`, runs, and returns the process exit code.
pub fn main_with_args() -> i32 {
    init_logging();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
