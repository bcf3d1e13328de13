use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use dfol_cli::{analyze, check, parse_field_file, AnalysisConfig, Phase};

// A closed stdout (e.g. piping into `head`) is not an error.
macro_rules! out {
    ($($t:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout(), $($t)*);
    }};
}

#[derive(Parser)]
#[command(name = "dfol", version, about = "Invariants of polynomial foliations and their D-modules")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the analyses and write a JSON report.
    Analyze {
        #[arg(long)]
        input: PathBuf,
        /// Highest Bernstein level for truncated cohomology.
        #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u32).range(1..))]
        truncation: u32,
        /// Extra levels for boundaries (default: twice the largest generator degree).
        #[arg(long)]
        lookahead: Option<u32>,
        #[arg(long, default_value_t = 4)]
        koszul_cap: u32,
        #[arg(long, default_value_t = 3)]
        fi_cap: u32,
        #[arg(long, default_value_t = 3)]
        window: usize,
        /// Comma-separated subset of phases.
        #[arg(long, value_enum, value_delimiter = ',')]
        only: Vec<Phase>,
        /// Report path; the report goes to stdout when omitted.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Check Lie closure and the commutation and regularity hypotheses.
    Check {
        #[arg(long)]
        input: PathBuf,
    },
}

fn code(c: i32) -> ExitCode {
    ExitCode::from(c as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Analyze { input, truncation, lookahead, koszul_cap, fi_cap, window, only, output } => {
            let (file, f) = match parse_field_file(&input) {
                Ok(v) => v,
                Err(e) => {
                    eprintln!("error: {e}");
                    return code(e.exit_code());
                }
            };
            let config = AnalysisConfig { truncation, lookahead, koszul_cap, fi_cap, window, only };
            let (report, status) = analyze(Some(&file), &f, &config);
            let json = report.to_json();
            match output {
                Some(path) => {
                    if let Err(e) = std::fs::write(&path, json + "\n") {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return code(1);
                    }
                    out!("{}", report.summary());
                }
                None => out!("{json}"),
            }
            for failure in &report.failures {
                eprintln!("error: {}: {}", failure.phase, failure.message);
            }
            code(status)
        }
        Command::Check { input } => {
            let (_, f) = match parse_field_file(&input) {
                Ok(v) => v,
                Err(e) => {
                    eprintln!("error: {e}");
                    return code(e.exit_code());
                }
            };
            match check(&f) {
                Ok(outcome) => {
                    for m in &outcome.messages {
                        out!("{m}");
                    }
                    if outcome.exit_code() == 0 {
                        out!("ok: Lie closed, generators commute, symbols form a regular sequence");
                    }
                    code(outcome.exit_code())
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    code(4)
                }
            }
        }
    }
}
