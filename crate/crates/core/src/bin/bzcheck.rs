//! Thin command-line front end over `bergzyg::harness`.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use bergzyg::config::ConfigFile;
use bergzyg::harness::{catalog, exit_code, run_path, run_scenario, scale_check, weight_check, CATALOG};
use bergzyg::stats::Membership;

/// Thread budget; unset or 0 leaves the choice to rayon.
const THREADS_ENV: &str = "BZCHECK_THREADS";

/// Exit status for usage, parse and I/O errors.
const USAGE: u8 = 3;

#[derive(Parser)]
#[command(name = "bzcheck", version, about = "Scenario runner for weighted Bergman-Zygmund checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every scenario of a config file; writes CSVs and summary.txt.
    Run {
        config: PathBuf,
        /// Output directory, overriding the file's output_dir.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the built-in scenario files whose name contains FILTER.
    Catalog {
        filter: Option<String>,
        /// Print the scenario file of the single matching entry.
        #[arg(long)]
        show: bool,
    },
    /// Doubling-class diagnostics for a weight, e.g. "power alpha=1".
    WeightCheck { spec: String },
    /// Class-L diagnostics for a scale function, e.g. "logpow beta=-1".
    ScaleCheck { spec: String },
    /// Run one scenario; the CSV goes to stdout, the summary line to stderr.
    Sweep {
        config: PathBuf,
        /// Scenario name; required when the file holds more than one.
        #[arg(long)]
        scenario: Option<String>,
    },
}

fn usage_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("bzcheck: {msg}");
    ExitCode::from(USAGE)
}

fn membership_code(m: Membership) -> ExitCode {
    ExitCode::from(match m {
        Membership::Member => 0,
        Membership::NonMember => 1,
        Membership::Inconclusive => 2,
    })
}

fn print_report(verdict: Membership, numbers: &[(String, String)]) {
    println!("verdict={verdict}");
    for (k, v) in numbers {
        println!("{k}={v}");
    }
}

fn configure_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().map_err(|_| format!("{THREADS_ENV} must be a nonnegative integer, got '{raw}'"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| format!("cannot configure thread pool: {e}"))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(USAGE);
        }
    };
    if let Err(msg) = configure_threads() {
        return usage_error(msg);
    }
    match cli.command {
        Command::Run { config, out } => match run_path(&config, out.as_deref()) {
            Ok((summaries, dir)) => {
                for s in &summaries {
                    println!("{}", s.to_line());
                }
                eprintln!("wrote {}", dir.join("summary.txt").display());
                ExitCode::from(exit_code(&summaries) as u8)
            }
            Err(e) => usage_error(format!("{}: {e}", config.display())),
        },
        Command::Catalog { filter, show } => {
            let entries = catalog(filter.as_deref());
            if show {
                return match entries.as_slice() {
                    [one] => {
                        print!("{}", one.config);
                        ExitCode::SUCCESS
                    }
                    _ => usage_error(format!("--show needs exactly one match among {} entries", CATALOG.len())),
                };
            }
            for e in entries {
                println!("{:<18} {}", e.name, e.description);
            }
            ExitCode::SUCCESS
        }
        Command::WeightCheck { spec } => match weight_check(&spec) {
            Ok((v, numbers)) => {
                print_report(v, &numbers);
                membership_code(v)
            }
            Err(e) => usage_error(e),
        },
        Command::ScaleCheck { spec } => match scale_check(&spec) {
            Ok((v, numbers)) => {
                print_report(v, &numbers);
                membership_code(v)
            }
            Err(e) => usage_error(e),
        },
        Command::Sweep { config, scenario } => {
            let cfg = match ConfigFile::load(&config) {
                Ok(c) => c,
                Err(e) => return usage_error(format!("{}: {e}", config.display())),
            };
            let chosen = match (&scenario, cfg.scenarios.as_slice()) {
                (Some(name), all) => all.iter().find(|s| &s.name == name),
                (None, [one]) => Some(one),
                (None, _) => return usage_error("the file holds several scenarios; pass --scenario"),
            };
            let Some(s) = chosen else {
                return usage_error(format!("no scenario named '{}'", scenario.unwrap_or_default()));
            };
            let out = run_scenario(s);
            if let Some(csv) = &out.csv {
                let mut stdout = std::io::stdout().lock();
                match stdout.write_all(csv.as_bytes()) {
                    Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => return usage_error(format!("cannot write to stdout: {e}")),
                    _ => {}
                }
            }
            eprintln!("{}", out.summary.to_line());
            ExitCode::from(exit_code(&[out.summary]) as u8)
        }
    }
}
