//! Command-line front end: surrogate data, feature fitting, cross-validated
//! classification and the consolidated JSON report.

// Negated comparisons are how NaN inputs get rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod args;
pub mod commands;
pub mod error;
pub mod io;
pub mod report;

use std::path::Path;

pub use args::{Cli, Command};
pub use commands::{cmd_classify, cmd_fit, cmd_pipeline, cmd_synth, cmd_synth_features, Outcome};
pub use error::{CliError, ErrorEntry, ErrorKind};
pub use report::ReportBundle;

pub fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Synth(a) => cmd_synth(a),
        Command::SynthFeatures(a) => cmd_synth_features(a),
        Command::Fit(a) => cmd_fit(a),
        Command::Classify(a) => cmd_classify(a),
        Command::Pipeline(a) => cmd_pipeline(a),
    }
}

#[derive(serde::Serialize)]
struct ErrorList<'a> {
    command: &'a str,
    exit_code: i32,
    errors: &'a [ErrorEntry],
}

/// Runs a parsed command line, prints its output and returns the exit code.
///
/// Failures are printed to stderr as JSON and also written to
/// `errors.json` in the output directory when that is possible; a
/// successful run removes a stale `errors.json`.
pub fn run(cli: &Cli) -> i32 {
    let (code, errors) = match execute(cli) {
        Ok(out) => {
            print!("{}", out.stdout);
            (error::exit_code(&out.errors), out.errors)
        }
        Err(e) => (e.exit_code(), e.0),
    };
    let path = cli.command.out_dir().join("errors.json");
    if errors.is_empty() {
        let _ = std::fs::remove_file(&path);
        return code;
    }
    let list = ErrorList {
        command: cli.command.name(),
        exit_code: code,
        errors: &errors,
    };
    let json = serde_json::to_string_pretty(&list).expect("error list serializes") + "\n";
    eprint!("{json}");
    let dir = cli.command.out_dir();
    if Path::new(dir).is_dir() || std::fs::create_dir_all(dir).is_ok() {
        let _ = io::write_atomic(&path, json.as_bytes());
    }
    code
}
