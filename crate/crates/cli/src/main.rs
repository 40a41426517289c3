use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use ghz_cli::commands::{self, TypicalityParams};
use ghz_cli::{CliError, Format, Output};
use ghz_core::branch::MeasureKind;

#[derive(Parser)]
#[command(
    name = "ghz",
    version,
    about = "GHZ state checks, ontological model audits and branch bookkeeping"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum MeasureArg {
    Born,
    BranchCount,
}

#[derive(Subcommand)]
enum Command {
    /// Check the GHZ eigen-identities and the Born/closed-form agreement.
    VerifyGhz,
    /// Enumerate all 64 value assignments against the parity constraints.
    Enumerate,
    /// Run the audit battery on a model: bb, superdet, localdet:<signs> or file:<path>.
    Audit { model: String },
    /// Joint distribution predicted by a model.
    Predict {
        model: String,
        /// `xyy` or three radian values such as `0,pi/2,pi/2`.
        #[arg(long)]
        settings: String,
    },
    /// Branch terms at a stage, optionally grouped by one observer.
    Branches {
        #[arg(long)]
        settings: String,
        /// t0, t1 or t2.
        #[arg(long)]
        stage: String,
        /// A, B or C.
        #[arg(long)]
        observer: Option<String>,
    },
    /// Measure of the deviation set, exact or by seeded Monte Carlo.
    Typicality {
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        eps: f64,
        /// Exact binomial computation (requires --p).
        #[arg(long)]
        exact: bool,
        #[arg(long)]
        settings: Option<String>,
        /// Tracked outcome triple, e.g. `++-`.
        #[arg(long)]
        outcome: Option<String>,
        #[arg(long, value_enum, default_value_t = MeasureArg::Born)]
        measure: MeasureArg,
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn require<T>(v: Option<T>, flag: &str, mode: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Usage(format!("{flag} is required for {mode}")))
}

fn run(command: Command) -> Result<Output, CliError> {
    match command {
        Command::VerifyGhz => commands::verify_ghz(),
        Command::Enumerate => commands::enumerate(),
        Command::Audit { model } => commands::audit(&model),
        Command::Predict { model, settings } => commands::predict(&model, &settings),
        Command::Branches {
            settings,
            stage,
            observer,
        } => commands::branches(&settings, &stage, observer.as_deref()),
        Command::Typicality {
            p,
            n,
            eps,
            exact,
            settings,
            outcome,
            measure,
            seed,
        } => {
            let params = if exact {
                if settings.is_some() || outcome.is_some() || seed.is_some() {
                    return Err(CliError::Usage("--exact takes only --p, --n and --eps".into()));
                }
                TypicalityParams::Exact {
                    p: require(p, "--p", "--exact")?,
                    n,
                    eps,
                }
            } else {
                let mode = "Monte Carlo runs";
                if p.is_some() {
                    return Err(CliError::Usage("--p applies only with --exact".into()));
                }
                TypicalityParams::MonteCarlo {
                    settings: require(settings, "--settings", mode)?,
                    outcome: require(outcome, "--outcome", mode)?,
                    n,
                    eps,
                    measure: match measure {
                        MeasureArg::Born => MeasureKind::Born,
                        MeasureArg::BranchCount => MeasureKind::BranchCount,
                    },
                    seed: require(seed, "--seed", mode)?,
                }
            };
            commands::typicality(&params)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = match cli.format {
        FormatArg::Json => Format::Json,
        FormatArg::Csv => Format::Csv,
        FormatArg::Text => Format::Text,
    };
    let result = run(cli.command).and_then(|out| Ok((out.render(format)?, out.exit_code())));
    match result {
        Ok((text, code)) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(2);
            }
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
