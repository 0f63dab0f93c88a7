use std::path::PathBuf;
use std::process::ExitCode;

use borcherds_cli::{commands, config, CliError, Command, Format};
use clap::Parser;

#[derive(Parser)]
#[command(name = "borcherds-fj", version, about = "Exact Fourier-Jacobi expansions of Borcherds products")]
struct Args {
    #[arg(value_enum)]
    command: Command,
    #[arg(long)]
    config: PathBuf,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Highest q2-grade K, overriding the config.
    #[arg(long)]
    grades: Option<usize>,
    /// q1 truncation as "num/den", overriding the config.
    #[arg(long = "q1-order")]
    q1_order: Option<String>,
}

fn execute(args: &Args) -> Result<borcherds_cli::report::Report, CliError> {
    let cfg = config::load(&args.config)?;
    let base = args.config.parent().map(PathBuf::from).unwrap_or_default();
    let job = cfg.job(&base, args.grades, args.q1_order.as_deref())?;
    commands::run(args.command, &job)
}

fn main() -> ExitCode {
    let args = Args::parse();
    match execute(&args) {
        Ok(report) => {
            match args.format {
                Format::Json => println!("{}", report.to_json()),
                Format::Text => print!("{}", report.to_text()),
            }
            if report.ok() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("borcherds-fj: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
