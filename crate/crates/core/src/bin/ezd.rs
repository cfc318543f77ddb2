use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ezd::job::{self, ExampleOptions, Report};

#[derive(Parser)]
#[command(name = "ezd", version, about = "Operators over quotients by exact zero divisors")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run every command in a job file.
    Run { file: PathBuf },
    /// Reproduce the built-in worked example.
    ReproduceExample {
        #[arg(long, default_value_t = 10)]
        dmax: i64,
        /// Replace the first element of the pair.
        #[arg(long)]
        f: Option<String>,
    },
    /// Replay every certificate in a JSON report.
    Verify { report: PathBuf },
}

fn emit(report: &Report) -> ExitCode {
    println!("{}", report.to_json());
    eprint!("{}", report.summary());
    ExitCode::from(report.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Cmd::Run { file } => {
            let text = match std::fs::read_to_string(&file) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("{}: {e}", file.display());
                    return ExitCode::from(2);
                }
            };
            match job::parse_jobfile(&text) {
                Ok(j) => emit(&job::run(&j)),
                Err(e) => {
                    eprintln!("{}:{e}", file.display());
                    ExitCode::from(2)
                }
            }
        }
        Cmd::ReproduceExample { dmax, f } => {
            let mut opts = ExampleOptions { dmax, ..Default::default() };
            if let Some(f) = f {
                opts.f = f;
            }
            emit(&job::reproduce_example(&opts))
        }
        Cmd::Verify { report } => {
            let parsed: Result<Report, String> = std::fs::read_to_string(&report)
                .map_err(|e| e.to_string())
                .and_then(|t| serde_json::from_str(&t).map_err(|e| e.to_string()));
            let r = match parsed {
                Ok(r) => r,
                Err(e) => {
                    eprintln!("{}: {e}", report.display());
                    return ExitCode::from(2);
                }
            };
            let mut ok = true;
            for c in r.commands.iter().flat_map(|c| &c.certificates) {
                let good = job::verify_certificate(c).unwrap_or(false);
                eprintln!("{} {}", if good { "ok  " } else { "FAIL" }, c.label());
                ok &= good;
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
    }
}
