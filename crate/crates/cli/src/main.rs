//! `tracelab`: run verification suites, query the function-space calculus
//! and export test banks.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use tracelab::config::{default_config, GridConfig, SuiteConfig};
use tracelab::report::ReportFormat;
use tracelab::suites::{run_suite, SUITE_NAMES};

#[derive(Parser)]
#[command(name = "tracelab", version, about = "Weighted function-space verification suites and calculus queries")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Run a named suite; exits 0 iff every gated case passes.
    Suite {
        /// Suite name (see `tracelab suite --help` for the list).
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(SUITE_NAMES))]
        name: String,
        /// JSON file patching the suite's default configuration.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Where to write the report.
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Evaluate a calculus query and print the JSON result.
    Query {
        /// The query, e.g. `trace m=0 W[k=2,p=2,gamma=1/2]`.
        #[arg(required = true, num_args = 1..)]
        expr: Vec<String>,
    },
    /// Export a deterministic test bank as binary grid-function files.
    Bank {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Number of members (default: the suite's bank size).
        #[arg(long)]
        size: Option<usize>,
        /// Suite whose grid and bank size are used.
        #[arg(long, default_value = "partition", value_parser = clap::builder::PossibleValuesParser::new(SUITE_NAMES))]
        suite: String,
        /// Weight exponent recorded in the files.
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        gamma: f64,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

/// Writes a line to stdout; a closed pipe (e.g. `| head`) is not an error.
fn say(line: &str) -> std::io::Result<()> {
    match writeln!(std::io::stdout().lock(), "{line}") {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        r => r,
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Suite { name, config, report, format } => {
            let cfg = match &config {
                Some(path) => SuiteConfig::from_file(&name, path)?,
                None => default_config(&name)?,
            };
            let rep = run_suite(&name, &cfg)?;
            for (arm, agg) in &rep.aggregates {
                let range = match (agg.min, agg.max) {
                    (Some(lo), Some(hi)) => format!("[{lo:.4e}, {hi:.4e}]"),
                    _ => "—".into(),
                };
                say(&format!(
                    "{name:>18} {arm:<24} cases {:>5}  gated {:>5}  passed {:>5}  rejected {:>4}  range {range}",
                    agg.cases, agg.gated, agg.passed, agg.rejected
                ))?;
            }
            say(&format!("{name}: {} in {:.2} s", if rep.passed { "PASS" } else { "FAIL" }, rep.wall_time_s))?;
            if let Some(path) = report {
                let fmt = match format {
                    Format::Json => ReportFormat::Json,
                    Format::Csv => ReportFormat::Csv,
                };
                rep.emit(&path, fmt).with_context(|| format!("writing {}", path.display()))?;
            }
            Ok(if rep.passed { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
        Command::Query { expr } => {
            let input = expr.join(" ");
            match tracelab_calculus::run_query(&input) {
                Ok(res) => {
                    let doc = json!({ "query": input, "outcome": res.outcome.to_string(), "result": res });
                    say(&serde_json::to_string_pretty(&doc)?)?;
                    Ok(ExitCode::SUCCESS)
                }
                Err(e) => {
                    eprintln!("parse error at column {}:\n{}", e.column, e.annotate(&input));
                    Ok(ExitCode::from(2))
                }
            }
        }
        Command::Bank { seed, out, size, suite, gamma } => {
            let cfg = default_config(&suite)?;
            let bank = tracelab::config::BankConfig { size: size.unwrap_or(cfg.bank.size), seed };
            let grid: &GridConfig = &cfg.grid;
            let members = tracelab::generate_bank(&bank, grid)?;
            std::fs::create_dir_all(&out).with_context(|| format!("creating {}", out.display()))?;
            for (i, f) in members.iter().enumerate() {
                let path = out.join(format!("member_{i:03}.wtlb"));
                tracelab_core::io::save(&path, f, gamma).with_context(|| format!("writing {}", path.display()))?;
            }
            let manifest = json!({ "seed": seed, "size": bank.size, "suite": suite, "grid": grid, "gamma": gamma });
            std::fs::write(out.join("manifest.json"), serde_json::to_string_pretty(&manifest)? + "\n")?;
            say(&format!("wrote {} members to {}", members.len(), out.display()))?;
            Ok(ExitCode::SUCCESS)
        }
    }
}
