use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use twomatch::generate::{random_metric, worst_case_family};
use twomatch::instance::parse_instance;
use twomatch::pipeline::Pipeline;
use twomatch::rat::{parse_rat, Rat};
use twomatch::report::run_report;
use twomatch::verify::{run_suite, Suite, SuiteConfig};
use twomatch::Error;

#[derive(Parser)]
#[command(name = "twomatch", version, about = "Exact 2-matching constructions and their cost certificates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Random,
    Worstcase,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Write an instance as JSON.
    Gen {
        #[arg(value_enum)]
        kind: Kind,
        #[arg(long, value_parser = clap::value_parser!(u64).range(3..=500), default_value_t = 8)]
        n: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=50), default_value_t = 1)]
        ell: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a pipeline on an instance and print its report.
    Run {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, default_value = "all")]
        pipeline: String,
        #[arg(long, default_value = "1/9", value_parser = parse_alpha)]
        alpha: Rat,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a randomized verification suite.
    Verify {
        /// oracles, polytopes or ratios
        suite: String,
        #[arg(long, default_value_t = 6)]
        n: usize,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "1/9", value_parser = parse_alpha)]
        alpha: Rat,
        /// Also tabulate the worst-case family up to this length (ratios only).
        #[arg(long)]
        ell: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_alpha(s: &str) -> Result<Rat, String> {
    let a = parse_rat(s).ok_or_else(|| format!("not a rational: {s}"))?;
    let zero = Rat::from_integer(0.into());
    let half = Rat::new(1.into(), 2.into());
    if a < zero || a > half {
        return Err(format!("alpha must lie in [0, 1/2], got {s}"));
    }
    Ok(a)
}

enum Failure {
    Usage(String),
    Failed(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. } | Error::Validation(_) | Error::Precondition(_) | Error::Io(_) | Error::Json(_) => {
                Failure::Usage(e.to_string())
            }
            other => Failure::Failed(other.to_string()),
        }
    }
}

fn emit(out: Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(&path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main_inner(cli: Cli) -> Result<bool, Failure> {
    match cli.command {
        Command::Gen { kind, n, seed, ell, out } => {
            let inst = match kind {
                Kind::Random => random_metric(n as usize, seed)?,
                Kind::Worstcase => worst_case_family(ell as usize)?.0,
            };
            emit(out, &(inst.to_json() + "\n"))?;
            Ok(true)
        }
        Command::Run { instance, pipeline, alpha, format, out } => {
            let pipeline: Pipeline = pipeline.parse().map_err(|e: Error| Failure::Usage(e.to_string()))?;
            let text = std::fs::read_to_string(&instance)
                .map_err(|e| Failure::Usage(format!("{}: {e}", instance.display())))?;
            let report = run_report(&parse_instance(&text)?, pipeline, &alpha)?;
            let body = match format {
                Format::Json => report.to_json() + "\n",
                Format::Csv => report.to_csv(),
            };
            emit(out, &body)?;
            Ok(report.passed)
        }
        Command::Verify { suite, n, trials, seed, alpha, ell, format, out } => {
            let suite: Suite = suite.parse().map_err(|e: Error| Failure::Usage(e.to_string()))?;
            let summary = run_suite(suite, &SuiteConfig { n, trials, seed, alpha, ell })?;
            let body = match format {
                Format::Json => summary.to_json() + "\n",
                Format::Csv => summary.to_csv(),
            };
            emit(out, &body)?;
            for line in &summary.lines {
                eprintln!("{} {}/{}", line.check, line.passed, line.total);
            }
            Ok(summary.passed)
        }
    }
}

fn main() -> ExitCode {
    match main_inner(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Failed(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
