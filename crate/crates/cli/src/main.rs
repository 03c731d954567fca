use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use curvecount_cli::config::Pipeline;
use curvecount_cli::{execute, Overrides, EXIT_OK, EXIT_USAGE};

#[derive(Parser)]
#[command(name = "curvecount", version, about = "Curve counting experiments on the punctured torus and genus 2")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Experiment config (flat `key = value` file).
    #[arg(long, value_name = "PATH")]
    config: PathBuf,
    /// Output directory, overriding the `out` key.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Worker threads, overriding the `threads` key.
    #[arg(long, value_name = "N")]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Write the points of the ball at the last L.
    Enumerate(Common),
    /// Count multicurves by type along the schedule.
    Count(Common),
    /// Count and fit the log-log growth exponent.
    Fit(Common),
    /// Ratio of counts under `norm` and `norm2`.
    Ratio(Common),
    /// Type frequencies at the last L.
    Freq(Common),
    /// Most frequent types covering 1 - epsilon at the last L.
    Tail(Common),
    /// Orbit counts of `seed` and `simple_seed` under hyperbolic length.
    Nonsimple(Common),
    /// Self-checks of the model, holonomy, generators and small balls.
    Validate(Common),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE as u8 } else { EXIT_OK as u8 });
        }
    };
    let (name, pipeline, common) = match cli.command {
        Command::Enumerate(c) => ("enumerate", Pipeline::Enumerate, c),
        Command::Count(c) => ("count", Pipeline::SimpleCount, c),
        Command::Fit(c) => ("fit", Pipeline::Fit, c),
        Command::Ratio(c) => ("ratio", Pipeline::Ratio, c),
        Command::Freq(c) => ("freq", Pipeline::Frequency, c),
        Command::Tail(c) => ("tail", Pipeline::Tail, c),
        Command::Nonsimple(c) => ("nonsimple", Pipeline::NonsimpleCount, c),
        Command::Validate(c) => ("validate", Pipeline::Validate, c),
    };
    let ov = Overrides { out: common.out, threads: common.threads };
    match execute(name, pipeline, &common.config, &ov) {
        Ok(a) => {
            if let Some(csv) = &a.csv {
                println!("{}", csv.display());
            }
            println!("{}", a.summary.display());
            ExitCode::from(EXIT_OK as u8)
        }
        Err(e) => {
            eprintln!("curvecount {name}: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
