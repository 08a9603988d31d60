use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use threeweight::report::{parse_suite_config, CaseStatus};
use threeweight::{analyze, verify_suite, Budget, Error, Options};

#[derive(Parser)]
#[command(
    name = "threeweight",
    version,
    about = "Weight distributions of three-weight p-ary cyclic codes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze the code for one parameter triple and print a JSON report.
    Analyze {
        p: u32,
        m: u32,
        k: u32,
        #[command(flatten)]
        flags: Flags,
        /// Write the enumerated weight distribution as CSV.
        #[arg(long, value_name = "PATH")]
        csv: Option<PathBuf>,
    },
    /// Analyze every "p m k" line of a configuration file.
    VerifySuite {
        config: PathBuf,
        #[command(flatten)]
        flags: Flags,
        /// Treat unsupported parameter triples as failures.
        #[arg(long)]
        strict: bool,
    },
}

#[derive(Args)]
struct Flags {
    /// Maximum number of (a, b) pairs to enumerate.
    #[arg(long, value_name = "N")]
    budget: Option<u64>,
    /// Count codeword weights entry by entry instead of using the sum formulas.
    #[arg(long)]
    brute_force_only: bool,
    /// Skip the dual minimum-distance certification.
    #[arg(long)]
    skip_dual: bool,
    /// Add per-stage wall-clock timings to the report.
    #[arg(long)]
    timing: bool,
}

impl Flags {
    fn options(&self) -> Options {
        let mut budget = Budget::default();
        if let Some(pairs) = self.budget {
            budget.pairs = pairs;
        }
        Options {
            budget,
            brute_force_only: self.brute_force_only,
            skip_dual: self.skip_dual,
            timing: self.timing,
        }
    }
}

const EXIT_USAGE: u8 = 1;
const EXIT_MISMATCH: u8 = 2;
const EXIT_BUDGET: u8 = 3;

fn exit_code_for(error: &Error) -> u8 {
    match error {
        Error::InvalidParams(_) | Error::UnsupportedRegime { .. } | Error::DomainError(_) => {
            EXIT_USAGE
        }
        Error::BudgetExceeded { .. } => EXIT_BUDGET,
        _ => EXIT_MISMATCH,
    }
}

fn print_json(value: &serde_json::Value) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("json serializes")
    );
}

fn run_analyze(p: u32, m: u32, k: u32, flags: &Flags, csv: Option<&PathBuf>) -> ExitCode {
    match analyze(p, m, k, &flags.options()) {
        Ok(report) => {
            if let (Some(path), Some(dist)) = (csv, &report.distribution) {
                let written = fs::File::create(path)
                    .map_err(|e| Error::DomainError(format!("{}: {e}", path.display())))
                    .and_then(|f| dist.write_csv(f));
                if let Err(e) = written {
                    eprintln!("error: {e}");
                    return ExitCode::from(EXIT_USAGE);
                }
            }
            println!("{}", report.to_json());
            if report.consistent() {
                ExitCode::SUCCESS
            } else {
                eprintln!("error: enumeration disagrees with the closed forms");
                ExitCode::from(EXIT_MISMATCH)
            }
        }
        Err(failure) => {
            eprintln!("error: {}", failure.error);
            let mut obj = json!({
                "error": {
                    "kind": failure.error.kind(),
                    "message": failure.error.to_string(),
                }
            });
            if let Error::InvalidParams(v) = &failure.error {
                obj["error"]["violation"] = json!(v.tag());
            }
            if let Some(partial) = failure.partial {
                obj["partial"] = serde_json::to_value(&*partial).expect("report serializes");
            }
            print_json(&obj);
            ExitCode::from(exit_code_for(&failure.error))
        }
    }
}

fn run_suite(config: &PathBuf, flags: &Flags, strict: bool) -> ExitCode {
    let parsed = fs::read_to_string(config)
        .map_err(|e| format!("{}: {e}", config.display()))
        .and_then(|text| parse_suite_config(&text));
    let triples = match parsed {
        Ok(t) => t,
        Err(message) => {
            eprintln!("error: {message}");
            print_json(&json!({"error": {"kind": "UsageError", "message": message}}));
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let summary = verify_suite(&triples, &flags.options(), strict);
    for case in &summary.cases {
        let label = match case.status {
            CaseStatus::Pass => "PASS",
            CaseStatus::Skipped => "SKIP",
            _ => "FAIL",
        };
        eprintln!("{label} {} {} {}  {}", case.p, case.m, case.k, case.detail);
    }
    eprintln!(
        "{} passed, {} skipped, {} failed",
        summary.passed, summary.skipped, summary.failed
    );
    print_json(&serde_json::to_value(&summary).expect("summary serializes"));
    ExitCode::from(summary.exit_code as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match &cli.command {
        Command::Analyze {
            p,
            m,
            k,
            flags,
            csv,
        } => run_analyze(*p, *m, *k, flags, csv.as_ref()),
        Command::VerifySuite {
            config,
            flags,
            strict,
        } => run_suite(config, flags, *strict),
    }
}
