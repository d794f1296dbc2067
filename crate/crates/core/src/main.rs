//! Command-line front end. All logic lives in the library; this binary
//! only parses arguments, dispatches, prints, and maps errors to exit
//! codes (0 ok, 2 parse, 3 unphysical, 4 no feasible root,
//! 5 certification failure, 6 oracle mismatch).

use clap::{Parser, Subcommand};
use tmgs_eof::cm::DEFAULT_TOL;
use tmgs_eof::oracle::OracleConfig;
use tmgs_eof::report::{
    run_analyze, run_batch, run_oracle_check, run_random, PipelineOptions,
};

#[derive(Parser)]
#[command(
    name = "tmgs-eof",
    version,
    about = "Entanglement of formation for two-mode Gaussian states"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze one state file (JSON StateInput)
    Analyze {
        /// Path to the state file
        path: String,
        /// Emit the report as JSON (17 significant digits)
        #[arg(long)]
        json: bool,
        /// Emit the report as text (default)
        #[arg(long, conflicts_with = "json")]
        text: bool,
        /// Add the brute-force oracle cross-check to the report
        #[arg(long)]
        oracle: bool,
        /// Numerical tolerance for validation and classification
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        /// Bypass special-case dispatch and use the general quartic path
        #[arg(long)]
        force_general: bool,
    },
    /// Analyze a JSON-lines file; one JSON report per line, input order
    Batch {
        /// Path to the JSON-lines file
        path: String,
        /// Process lines in parallel (output order is still input order)
        #[arg(long)]
        parallel: bool,
        /// Numerical tolerance for validation and classification
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        /// Bypass special-case dispatch and use the general quartic path
        #[arg(long)]
        force_general: bool,
        /// Add the brute-force oracle cross-check to each report
        #[arg(long)]
        oracle: bool,
    },
    /// Generate reproducible random states as JSON-lines of StateInput
    Random {
        /// Number of states to generate
        #[arg(long)]
        count: usize,
        /// RNG seed; a fixed seed gives byte-identical output
        #[arg(long)]
        seed: u64,
        /// Keep only entangled states
        #[arg(long)]
        entangled_only: bool,
    },
    /// Compare solver and brute-force oracle over a JSON-lines file
    OracleCheck {
        /// Path to the JSON-lines file
        path: String,
        /// Largest tolerated |EF_solver - EF_oracle| in nats
        #[arg(long, default_value_t = 1e-4)]
        max_delta: f64,
        /// Numerical tolerance for validation and classification
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
}

fn main() {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Analyze {
            path,
            json,
            text: _,
            oracle,
            tol,
            force_general,
        } => {
            let opts = PipelineOptions {
                tol,
                force_general,
                with_oracle: oracle,
                oracle: OracleConfig::default(),
            };
            match run_analyze(&path, &opts, json) {
                Ok(out) => {
                    if json {
                        println!("{out}");
                    } else {
                        print!("{out}");
                    }
                    0
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    e.exit_code()
                }
            }
        }
        Command::Batch {
            path,
            parallel,
            tol,
            force_general,
            oracle,
        } => {
            let opts = PipelineOptions {
                tol,
                force_general,
                with_oracle: oracle,
                oracle: OracleConfig::default(),
            };
            match run_batch(&path, &opts, parallel) {
                Ok(out) => {
                    print!("{out}");
                    0
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    e.exit_code()
                }
            }
        }
        Command::Random {
            count,
            seed,
            entangled_only,
        } => match run_random(count, seed, entangled_only) {
            Ok(out) => {
                print!("{out}");
                0
            }
            Err(e) => {
                eprintln!("error: {e}");
                e.exit_code()
            }
        },
        Command::OracleCheck {
            path,
            max_delta,
            tol,
        } => {
            let opts = PipelineOptions {
                tol,
                ..PipelineOptions::default()
            };
            match run_oracle_check(&path, &opts, max_delta) {
                Ok((table, _, within)) => {
                    print!("{table}");
                    if within {
                        0
                    } else {
                        6
                    }
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    e.exit_code()
                }
            }
        }
    };
    std::process::exit(code);
}
