use std::path::PathBuf;
use std::process::ExitCode;

use alphaflow_cli::{cmd_export, cmd_run, cmd_verify, CliError, ExportFormat};
use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};

/// Simulator for the α-power Gauss curvature flow of convex bodies.
#[derive(Parser)]
#[command(name = "alphaflow", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a configuration file and write its artifacts.
    Run { config: PathBuf },
    /// Embed a snapshot as a polyline (circle) or OBJ surface (sphere).
    Export {
        snapshot: PathBuf,
        #[arg(long, value_enum)]
        format: Format,
        /// Defaults to the snapshot path with the format's extension.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run an acceptance suite (`all` for every criterion).
    Verify { suite: String },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    PolylineCsv,
    Obj,
}

/// Exit code when a verification suite reports a failing criterion.
const VERIFY_FAILED: u8 = 5;

fn report(err: &anyhow::Error) -> ExitCode {
    eprintln!("error: {err:#}");
    let code = err.downcast_ref::<CliError>().map_or(1, CliError::exit_code);
    ExitCode::from(code as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result: anyhow::Result<ExitCode> = match cli.command {
        Command::Run { config } => cmd_run(&config)
            .map_err(anyhow::Error::from)
            .map(|outcome| {
                if let Some(t) = outcome.t_star_estimate {
                    println!("T* estimate {t:.6}");
                }
                println!("artifacts in {}", outcome.output_dir.display());
                if outcome.step_failure {
                    eprintln!("error: physical run stopped on step failure");
                }
                ExitCode::from(outcome.exit_code() as u8)
            })
            .with_context(|| format!("run {}", config.display())),
        Command::Export {
            snapshot,
            format,
            output,
        } => {
            let format = match format {
                Format::PolylineCsv => ExportFormat::PolylineCsv,
                Format::Obj => ExportFormat::Obj,
            };
            cmd_export(&snapshot, format, output.as_deref())
                .map(|path| {
                    println!("{}", path.display());
                    ExitCode::SUCCESS
                })
                .map_err(anyhow::Error::from)
        }
        Command::Verify { suite } => cmd_verify(&suite, std::io::stdout().lock())
            .map(|verdicts| {
                if verdicts.iter().all(|v| v.pass) {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::from(VERIFY_FAILED)
                }
            })
            .map_err(anyhow::Error::from),
    };
    result.unwrap_or_else(|err| report(&err))
}
