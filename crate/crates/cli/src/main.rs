use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use negprob_cli::{run_text, Command, Flags, EXIT_INPUT};

/// Exact feasibility, minimal-negative-mass and Bayesian pooling analyses
/// for moment judgments over ±1-valued variables.
#[derive(Parser)]
#[command(name = "negprob", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args)]
struct Common {
    /// Problem file.
    file: PathBuf,
    /// Emit the machine-readable JSON report.
    #[arg(long)]
    json: bool,
    /// Accept decimals such as 0.25 as exact ratios.
    #[arg(long)]
    decimal: bool,
}

#[derive(Args)]
struct BayesArgs {
    /// Expert names in update order, comma separated.
    #[arg(long)]
    order: Option<String>,
    /// `quadratic` or `table:<file>`.
    #[arg(long)]
    likelihood: Option<String>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Does a proper joint distribution exist?
    Check(Common),
    /// Minimal-negative-mass signed distribution and its upper measure.
    Solve(Common),
    /// Range of an unconstrained moment under a negative-mass budget.
    Bounds {
        #[command(flatten)]
        common: Common,
        /// Variables of the target moment, comma separated (default: all).
        #[arg(long)]
        target: Option<String>,
        /// `minimal` or a rational mass bound.
        #[arg(long)]
        budget: Option<String>,
    },
    /// Sequential Bayesian pooling of the expert judgments.
    Bayes {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        bayes: BayesArgs,
    },
    /// Recompute every result with the independent oracles.
    Oracle {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        bayes: BayesArgs,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut flags = Flags::default();
    let (command, common) = match cli.command {
        Cmd::Check(c) => (Command::Check, c),
        Cmd::Solve(c) => (Command::Solve, c),
        Cmd::Bounds { common, target, budget } => {
            flags.target = target;
            flags.budget = budget;
            (Command::Bounds, common)
        }
        Cmd::Bayes { common, bayes } => {
            flags.order = bayes.order;
            flags.likelihood = bayes.likelihood;
            (Command::Bayes, common)
        }
        Cmd::Oracle { common, bayes } => {
            flags.order = bayes.order;
            flags.likelihood = bayes.likelihood;
            (Command::Oracle, common)
        }
    };
    flags.json = common.json;
    flags.decimal = common.decimal;

    let text = match std::fs::read_to_string(&common.file) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {}: {e}", common.file.display());
            return ExitCode::from(EXIT_INPUT as u8);
        }
    };
    let outcome = run_text(command, &text, &flags);
    if outcome.exit_code == EXIT_INPUT {
        eprint!("{}", outcome.output);
    } else {
        print!("{}", outcome.output);
    }
    ExitCode::from(outcome.exit_code as u8)
}
