use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use qortho_cli::config::{exit_code_for, RunConfig, EXIT_ASSERTION_FAILED, EXIT_BAD_INPUT};
use qortho_cli::run::{cmd_recurrence, cmd_rhp_series, cmd_verify, Claim, Format, RunError};

#[derive(Parser)]
#[command(name = "qortho")]
#[command(about = "q-orthogonal polynomial tables, model series and asymptotic verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonOpts {
    /// Lattice ratio q as an exact rational, e.g. 1/2
    #[arg(long)]
    q: String,

    /// Exponent of the |x|^alpha factor (rational or decimal literal)
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    alpha: String,

    /// Weight id: unit | qhermite1 | littleqjacobi:b=R | polyperturbation:c=R
    #[arg(long, default_value = "unit")]
    weight: String,

    /// Working precision in bits, or "auto"
    #[arg(long, default_value = "auto")]
    precision_bits: String,

    /// Absolute truncation tolerance for series/product tails
    #[arg(long, default_value = "1e-40")]
    tail_eps: String,

    /// Output path; prints to stdout if omitted
    #[arg(long)]
    output: Option<PathBuf>,

    /// Artifact format
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Embed wall-clock blocks (off by default so artifacts are byte-stable)
    #[arg(long)]
    timings: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the three-term recurrence table a_n, b_n, gamma_n
    Recurrence {
        #[command(flatten)]
        common: CommonOpts,

        /// Largest polynomial degree
        #[arg(long, default_value_t = 12)]
        n_max: usize,
    },
    /// Build the model series solutions with C0 and connection scales
    RhpSeries {
        #[command(flatten)]
        common: CommonOpts,

        /// Series truncation order
        #[arg(long, default_value_t = 60)]
        j_max: usize,

        /// Also report the max determinant residual over the check grid
        #[arg(long)]
        det_check: bool,
    },
    /// Run a verification claim; exit 0 iff its assertion passed
    Verify {
        /// Claim to check
        #[arg(value_enum)]
        claim: Claim,

        #[command(flatten)]
        common: CommonOpts,

        /// Largest polynomial degree used by the claim
        #[arg(long, default_value_t = 16)]
        n_max: usize,
    },
}

fn emit_error(kind: &str, message: &str) {
    let payload = json!({ "error": { "kind": kind, "message": message } });
    eprintln!("{payload}");
}

fn resolve(common: &CommonOpts, n_max: usize, min_auto_bits: usize) -> Result<RunConfig, ExitCode> {
    RunConfig::resolve(
        &common.q,
        &common.alpha,
        &common.weight,
        n_max,
        &common.precision_bits,
        &common.tail_eps,
        min_auto_bits,
        common.timings,
    )
    .map_err(|e| {
        emit_error("bad-input", &e.to_string());
        ExitCode::from(EXIT_BAD_INPUT as u8)
    })
}

fn finish(result: Result<qortho_cli::run::Rendered, RunError>, output: &Option<PathBuf>) -> ExitCode {
    match result {
        Ok(rendered) => {
            if let Some(path) = output {
                if let Err(e) = fs::write(path, &rendered.body) {
                    emit_error("io", &e.to_string());
                    return ExitCode::from(EXIT_BAD_INPUT as u8);
                }
            } else {
                print!("{}", rendered.body);
            }
            if rendered.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_ASSERTION_FAILED as u8)
            }
        }
        Err(RunError::Core(e)) => {
            emit_error("numeric", &e.to_string());
            ExitCode::from(exit_code_for(&e) as u8)
        }
        Err(RunError::Input(m)) => {
            emit_error("bad-input", &m);
            ExitCode::from(EXIT_BAD_INPUT as u8)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Recurrence { common, n_max } => {
            let cfg = match resolve(&common, n_max, 256) {
                Ok(c) => c,
                Err(code) => return code,
            };
            finish(cmd_recurrence(&cfg, common.format), &common.output)
        }
        Command::RhpSeries {
            common,
            j_max,
            det_check,
        } => {
            let cfg = match resolve(&common, 0, 512) {
                Ok(c) => c,
                Err(code) => return code,
            };
            finish(
                cmd_rhp_series(&cfg, j_max, det_check, common.format),
                &common.output,
            )
        }
        Command::Verify {
            claim,
            common,
            n_max,
        } => {
            let cfg = match resolve(&common, n_max, 512) {
                Ok(c) => c,
                Err(code) => return code,
            };
            finish(cmd_verify(&cfg, claim, common.format), &common.output)
        }
    }
}
