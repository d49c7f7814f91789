use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

mod eval;
mod fit;
mod store;
mod verify;

/// Tree cut models over a thesaurus: fit association models, evaluate
/// attachment decisions, and check the estimators against exhaustive search.
///
/// Log verbosity is read from TREECUT_LOG (e.g. `info`, `debug`).
#[derive(Parser, Debug)]
#[command(name = "treecut", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Fit a marginal per slot and an association model per head.
    Fit(FitArgs),
    /// Score test quadruples with every method and write report tables.
    Eval(EvalArgs),
    /// Run the oracle equivalence suite.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
struct FitArgs {
    /// Thesaurus tree, s-expression or JSON.
    #[arg(long)]
    taxonomy: PathBuf,
    /// head<TAB>slot<TAB>value[<TAB>count] lines.
    #[arg(long)]
    triples: PathBuf,
    /// Only fit this slot.
    #[arg(long)]
    slot: Option<String>,
    /// Floor marginal probabilities at this value when dividing.
    #[arg(long)]
    epsilon: Option<f64>,
    /// Output directory for model files.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct EvalArgs {
    #[arg(long)]
    taxonomy: PathBuf,
    /// verb<TAB>noun1<TAB>prep<TAB>noun2<TAB>V|N lines.
    #[arg(long)]
    quads: PathBuf,
    /// Training triples; enables the selectional association baseline.
    #[arg(long)]
    triples: Option<PathBuf>,
    /// Only evaluate quadruples with this preposition.
    #[arg(long)]
    slot: Option<String>,
    /// Confidence thresholds for the curves, descending.
    #[arg(long, value_delimiter = ',', default_value = "inf,8,4,2,1,0.5,0.25,0")]
    thresholds: Vec<f64>,
    /// Seed for the fold shuffle.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 10)]
    folds: usize,
    /// Directory written by `fit`; reports go to its `eval` subdirectory.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Largest tree, in leaves, for exhaustive enumeration.
    #[arg(long, default_value_t = treecut::oracle::DEFAULT_CAP)]
    cap: usize,
    #[arg(long, default_value_t = 200)]
    instances: usize,
    /// Charge one extra parameter per class in the fast searches; the suite
    /// is expected to fail.
    #[arg(long)]
    mutate_penalty: bool,
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Fit(a) => {
            if let Some(e) = a.epsilon {
                if !(e > 0.0 && e.is_finite()) {
                    bail!("--epsilon must be positive, got {e}");
                }
            }
            fit::run(&a).map(|()| true)
        }
        Command::Eval(a) => eval::run(&a).map(|()| true),
        Command::Verify(a) => Ok(verify::run(&a)),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("TREECUT_LOG", "warn")).init();
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
