//! Scenario runner, built-in examples, property fuzzing and reports.

pub mod expr;
pub mod fuzz;
pub mod report;
pub mod run;
pub mod scenario;

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::tower::PrecisionConfig;
use fuzz::Profile;
use report::Report;
use scenario::{Overrides, Scenario};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "valext", version, about = "Pairs of definition, distinguished chains and defect checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Seed for randomized checks.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Truncation depth of search families.
    #[arg(long)]
    pub depth: Option<usize>,
    /// Precision refinements before a computation gives up.
    #[arg(long)]
    pub retries: Option<u32>,
    /// Also write the JSON report to this path.
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run scenarios (builtin names or TOML files).
    Run {
        #[arg(required = true)]
        scenarios: Vec<String>,
        #[command(flatten)]
        common: Common,
        /// Treat family-checked claims as failures.
        #[arg(long)]
        strict: bool,
    },
    /// Run a property suite on seeded random instances.
    Fuzz {
        #[arg(value_enum)]
        profile: Profile,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[command(flatten)]
        common: Common,
        /// Directory for reproducing scenarios of violations.
        #[arg(long, default_value = "valext-artifacts")]
        artifacts: PathBuf,
    },
    /// List builtin scenarios.
    List,
}

fn write_file(path: &Path, body: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Error::Validation(format!("{}: {e}", dir.display())))?;
    }
    std::fs::write(path, body).map_err(|e| Error::Validation(format!("{}: {e}", path.display())))
}

/// Runs scenarios in parallel; the report keeps the command-line order.
pub fn run_scenarios(selectors: &[String], o: &Overrides) -> Result<Report> {
    let scenarios: Vec<Scenario> = selectors.iter().map(|s| Scenario::load(s)).collect::<Result<_>>()?;
    let reports = scenarios
        .par_iter()
        .map(|sc| run::run_scenario(sc, o))
        .collect::<Vec<_>>()
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    Ok(Report::new(reports))
}

/// Writes one reproducing scenario per violation and records its path.
pub fn dump_artifacts(summary: &mut fuzz::FuzzSummary, dir: &Path) -> Result<()> {
    for v in &mut summary.violations {
        let path = dir.join(format!(
            "{}-seed{}-instance{}.toml",
            summary.profile.name(),
            summary.seed,
            v.instance
        ));
        write_file(&path, &v.scenario)?;
        v.artifact = Some(path.display().to_string());
    }
    Ok(())
}

/// Entry point of the binary; returns the process exit code.
pub fn main_with(cli: Cli) -> i32 {
    let outcome = match cli.command {
        Command::List => {
            for (name, src) in scenario::BUILTINS {
                let desc = Scenario::parse(src).ok().and_then(|s| s.description).unwrap_or_default();
                println!("{name}\t{desc}");
            }
            Ok(EXIT_OK)
        }
        Command::Run {
            scenarios,
            common,
            strict,
        } => {
            let o = Overrides {
                seed: common.seed,
                depth: common.depth,
                retries: common.retries,
                strict,
            };
            run_scenarios(&scenarios, &o).and_then(|report| {
                print!("{}", report.to_text());
                if let Some(p) = &common.json {
                    write_file(p, &report.to_json())?;
                }
                if report.ok {
                    return Ok(EXIT_OK);
                }
                let failed: usize = report.reports.iter().map(|r| r.failed).sum();
                eprintln!("{}", Error::CheckFailed(format!("{failed} claim(s) failed")));
                Ok(EXIT_CHECK_FAILED)
            })
        }
        Command::Fuzz {
            profile,
            count,
            common,
            artifacts,
        } => {
            let d = PrecisionConfig::default();
            let cfg = PrecisionConfig {
                depth: common.depth.unwrap_or(d.depth),
                retries: common.retries.unwrap_or(d.retries),
            };
            let mut summary = fuzz::fuzz(common.seed.unwrap_or(1), count, profile, cfg);
            dump_artifacts(&mut summary, &artifacts).and_then(|()| {
                print!("{}", summary.to_text());
                if let Some(p) = &common.json {
                    write_file(p, &summary.to_json())?;
                }
                if summary.ok() {
                    Ok(EXIT_OK)
                } else {
                    let paths: Vec<&str> = summary.violations.iter().filter_map(|v| v.artifact.as_deref()).collect();
                    eprintln!("{}", Error::PropertyViolated(format!("see {}", paths.join(", "))));
                    Ok(EXIT_CHECK_FAILED)
                }
            })
        }
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("valext: {e}");
            EXIT_INPUT
        }
    }
}
