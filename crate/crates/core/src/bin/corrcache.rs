use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use corrcache::experiment::{self, RunArgs};
use corrcache::Error;

/// Compare correlation-aware cache replacement against LRU on a simulated
/// ad-hoc network.
#[derive(Parser)]
#[command(name = "corrcache", version, args_conflicts_with_subcommands = true)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Subcommand)]
enum Command {
    /// Aggregate final hit ratios across metrics CSVs.
    Summarize { files: Vec<PathBuf> },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Some(Command::Summarize { files }) => experiment::summarize(&files).map(|c| println!("{c}")),
        None => run(&cli.run),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("corrcache: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(args: &RunArgs) -> Result<(), Error> {
    let config = args.resolve()?;
    eprintln!("{config}");
    let rows = experiment::run_experiment(&config)?;
    print!("{}", experiment::format_summary(&rows));
    Ok(())
}
