use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use learnsys::io::{run, Command, LearnerKind, Options};
use learnsys::learning::DataMode;
use learnsys::strata::Concern;

/// Validate, decompose, classify and analyze finite learning systems.
#[derive(Parser, Debug)]
#[command(name = "learnsys", version)]
struct Cli {
    /// verify, decompose, classify, analyze or learn
    command: Command,
    /// System document (JSON)
    document: PathBuf,
    /// Concern to analyze, e.g. capacity or convergence
    #[arg(long)]
    concern: Option<Concern>,
    /// Exit 1 when the headline verdict of an analysis is negative
    #[arg(long)]
    strict: bool,
    /// Largest subset size tried by the VC search
    #[arg(long, default_value_t = 12)]
    max_subset: usize,
    /// Step budget for convergence traces and the perceptron learner
    #[arg(long, default_value_t = 50)]
    max_steps: usize,
    /// Override the document's data mode
    #[arg(long)]
    mode: Option<DataMode>,
    /// Accuracy for the sample-complexity bound
    #[arg(long, default_value_t = 0.1)]
    epsilon: f64,
    /// Confidence for the sample-complexity bound
    #[arg(long, default_value_t = 0.05)]
    delta: f64,
    /// Learner for `learn`: erm, nn1 or perceptron
    #[arg(long)]
    learner: Option<LearnerKind>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let text = match std::fs::read_to_string(&cli.document) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", cli.document.display());
            return ExitCode::from(2);
        }
    };
    let opts = Options {
        concern: cli.concern,
        strict: cli.strict,
        max_subset: cli.max_subset,
        max_steps: cli.max_steps,
        mode: cli.mode,
        epsilon: cli.epsilon,
        delta: cli.delta,
        learner: cli.learner,
        ..Options::default()
    };
    let out = run(cli.command, &text, &opts);
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    ExitCode::from(out.code as u8)
}
