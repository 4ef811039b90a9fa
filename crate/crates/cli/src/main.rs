//! `qridge`: verification sweeps, training runs and explanation reports.
//!
//! Exit codes: 0 when every check passes, 1 when checks ran and failed, 2 on
//! input errors.

mod commands;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qridge::ModelKind;

#[derive(Parser)]
#[command(
    name = "qridge",
    version,
    about = "Ridge-function view of variational quantum circuits"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Debug)]
pub struct Common {
    /// RNG seed for random inputs and initializations.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Pass/fail tolerance of the command's numeric checks.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Output file; reports go to stdout when omitted.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Compare direct simulation with the ridge sum on random parameters and inputs.
    Verify {
        /// Circuit JSON file.
        circuit: PathBuf,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
    /// Train a model by full-batch gradient descent.
    Train {
        #[arg(long)]
        kind: ModelKind,
        /// Model JSON file (a bare circuit is accepted for `--kind circuit`).
        model: PathBuf,
        /// Dataset CSV with header `x0,...,x(d-1),y`.
        #[arg(long)]
        data: PathBuf,
        /// Training config JSON; every field is optional.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Loss history CSV [default: --out with extension .history.csv].
        #[arg(long)]
        history: Option<PathBuf>,
        /// Train circuit and block models on the raw targets.
        #[arg(long)]
        no_rescale: bool,
    },
    /// Per-term contributions and parameter sensitivities for one input.
    Explain {
        #[arg(long)]
        kind: ModelKind,
        /// Model JSON file.
        model: PathBuf,
        /// Comma-separated input values.
        #[arg(long, conflicts_with_all = ["data", "row"], allow_hyphen_values = true)]
        input: Option<String>,
        /// Dataset CSV to take the input row from.
        #[arg(long, requires = "row")]
        data: Option<PathBuf>,
        #[arg(long, requires = "data")]
        row: Option<usize>,
        /// Step of the central differences.
        #[arg(long, default_value_t = 1e-5)]
        fd_step: f64,
    },
    /// Perturb one block (or every block) of a block model and check that only its term moves.
    Locality {
        /// Block model JSON file.
        model: PathBuf,
        #[arg(long, conflicts_with = "sweep")]
        block: Option<usize>,
        /// Check every block (the default when --block is absent).
        #[arg(long)]
        sweep: bool,
        /// Shift added to every parameter of the perturbed block.
        #[arg(long, default_value_t = 0.1, allow_negative_numbers = true)]
        delta: f64,
    },
}

/// Outcome of a command whose inputs were valid.
pub enum Status {
    Pass,
    Fail,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let common = cli.common;
    let result = match cli.command {
        Command::Verify { circuit, trials } => commands::verify::run(&common, &circuit, trials),
        Command::Train {
            kind,
            model,
            data,
            config,
            history,
            no_rescale,
        } => commands::train::run(
            &common,
            commands::train::TrainArgs {
                kind,
                model,
                data,
                config,
                history,
                rescale: !no_rescale,
            },
        ),
        Command::Explain {
            kind,
            model,
            input,
            data,
            row,
            fd_step,
        } => {
            let source = match (input, data, row) {
                (Some(values), _, _) => commands::explain::InputSource::Values(values),
                (None, Some(path), Some(row)) => commands::explain::InputSource::Row(path, row),
                _ => {
                    eprintln!("error: explain needs --input or --data with --row");
                    return ExitCode::from(2);
                }
            };
            commands::explain::run(&common, kind, &model, source, fd_step)
        }
        Command::Locality {
            model,
            block,
            sweep: _,
            delta,
        } => commands::locality::run(&common, &model, block, delta),
    };
    match result {
        Ok(Status::Pass) => ExitCode::SUCCESS,
        Ok(Status::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
