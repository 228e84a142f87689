//! `cohiggs` — batch front end for the exact co-Higgs engines.
//!
//! Reads a JSON task document, dispatches to the library, and prints a
//! text, JSON, or CSV report. Exit codes: 0 success, 1 usage or malformed
//! document, 2 mathematically invalid input, 3 internal inconsistency.

mod doc;
mod emit;
mod run;

use clap::Parser;
use cohiggs_core::DEFAULT_SEED;
use emit::Format;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(
    name = "cohiggs",
    version,
    about = "Existence verdicts, twisted endomorphism spaces, and degree tables for filtered bundles on curves",
    after_help = "The task file is a JSON document; see README.md for the grammar.\n\
                  COHIGGS_SEED provides the seed when --seed is absent."
)]
struct Args {
    /// Task document (JSON)
    task_file: PathBuf,
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Cross-check closed forms against brute-force enumeration
    #[arg(long)]
    oracle: bool,
    /// Seed for randomized internals (overrides COHIGGS_SEED)
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads for sweep evaluation
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

fn main() -> ExitCode {
    let code = real_main();
    ExitCode::from(u8::try_from(code).expect("exit codes are 0..=3"))
}

fn real_main() -> i32 {
    let args = match Args::try_parse() {
        Ok(args) => args,
        Err(e) => {
            // help/version requests are success, not usage errors
            use clap::error::ErrorKind;
            let kind = e.kind();
            let _ = e.print();
            return if matches!(kind, ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                0
            } else {
                1
            };
        }
    };

    if args.jobs == 0 {
        eprintln!("error: --jobs must be at least 1");
        return 1;
    }

    let seed = match args.seed {
        Some(seed) => seed,
        None => match std::env::var("COHIGGS_SEED") {
            Ok(raw) => match raw.parse::<u64>() {
                Ok(seed) => seed,
                Err(_) => {
                    eprintln!("error: COHIGGS_SEED must be an unsigned integer, got {raw:?}");
                    return 1;
                }
            },
            Err(_) => DEFAULT_SEED,
        },
    };

    let text = match std::fs::read_to_string(&args.task_file) {
        Ok(text) => text,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", args.task_file.display());
            return 1;
        }
    };

    let document = match doc::parse(&text) {
        Ok(document) => document,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };

    let options = run::Options {
        oracle: args.oracle,
        seed,
        jobs: args.jobs,
    };
    let report = match run::run(&document, &options) {
        Ok(report) => report,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };

    // sweep rejections also go to stderr so CSV consumers see them
    if let run::Report::Sweep(sweep) = &report {
        for warning in &sweep.warnings {
            eprintln!("warning: {warning}");
        }
    }

    print!("{}", emit::emit(&report, args.format));
    0
}
