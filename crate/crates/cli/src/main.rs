use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};
use lbkd::SplitMode;
use lbkd_cli::commands::{self, BenchArgs, BuildArgs, QueryKind, SelftestArgs};

/// Build and query left-balanced k-d trees.
#[derive(Parser)]
#[command(name = "lbkd", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a tree from a CSV point file and write it in level order.
    Build {
        #[arg(long)]
        input: PathBuf,
        #[arg(long = "dims")]
        dims: usize,
        #[arg(long, default_value = "round-robin")]
        mode: SplitMode,
        #[arg(long)]
        output: PathBuf,
        /// The input has an extra trailing integer payload column.
        #[arg(long)]
        payload: bool,
    },
    /// Query a tree file written by `build`.
    Query {
        #[arg(long)]
        tree: PathBuf,
        /// Query point as comma-separated coordinates.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[command(flatten)]
        kind: QueryArgs,
    },
    /// Time builds over uniform random points in [0,1)^k.
    Bench {
        #[arg(long)]
        n: usize,
        #[arg(long = "dims", default_value_t = 4)]
        dims: usize,
        #[arg(long, default_value = "round-robin")]
        mode: SplitMode,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        reps: u32,
        /// Also write the last built tree here.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Run the built-in oracle suites.
    Selftest {
        /// Walkthrough fixture JSON to check instead of the built-in one.
        #[arg(long)]
        fixtures: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        trials: Option<usize>,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct QueryArgs {
    /// Return the M nearest points.
    #[arg(long, value_name = "M")]
    knn: Option<usize>,
    /// Return all points within distance R.
    #[arg(long, value_name = "R")]
    radius: Option<f64>,
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Build {
            input,
            dims,
            mode,
            output,
            payload,
        } => {
            commands::build(&BuildArgs {
                input: &input,
                dims,
                mode,
                output: &output,
                with_payload: payload,
            })?;
        }
        Command::Query { tree, point, kind } => {
            let kind = match (kind.knn, kind.radius) {
                (Some(m), _) => QueryKind::Knn(m),
                (None, Some(r)) => QueryKind::Radius(r),
                (None, None) => unreachable!("clap requires one of --knn/--radius"),
            };
            print!("{}", commands::query(&tree, &point, kind)?);
        }
        Command::Bench {
            n,
            dims,
            mode,
            seed,
            reps,
            dump,
        } => {
            let record = commands::bench(&BenchArgs {
                n,
                dims,
                mode,
                seed,
                reps,
                dump: dump.as_deref(),
            })?;
            println!("{}", serde_json::to_string(&record)?);
        }
        Command::Selftest {
            fixtures,
            seed,
            trials,
        } => {
            let report = commands::selftest(&SelftestArgs {
                fixtures,
                seed,
                trials,
            })?;
            print!("{}", commands::render_selftest(&report));
            if let Some(failed) = report.first_failure() {
                eprintln!("selftest failed at `{}`: {}", failed.name, failed.detail);
                return Ok(ExitCode::FAILURE);
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}
