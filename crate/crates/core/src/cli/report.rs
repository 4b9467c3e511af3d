//! Report types and their text rendering. JSON is the serde form of the
//! same structs.

use std::fmt::Write as _;

use serde::Serialize;

use super::fuzz::FuzzSummary;
use super::scenario::BaseKind;
use crate::pairval::Status;

pub const REPORT_SCHEMA: &str = "valext-report/1";
pub const FUZZ_SCHEMA: &str = "valext-fuzz/1";

/// One computed quantity with its certificate tag.
#[derive(Debug, Clone, Serialize)]
pub struct Claim {
    /// Index of the check in the scenario.
    pub check: usize,
    pub kind: &'static str,
    pub quantity: String,
    pub value: String,
    pub expected: Option<String>,
    /// `None` only when the computation itself failed.
    pub status: Option<Status>,
    pub pass: bool,
    pub note: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PrimeRun {
    pub p: u32,
    pub claims: Vec<Claim>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub depth: usize,
    pub retries: u32,
    pub seed: u64,
    pub strict: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScenarioReport {
    pub scenario: String,
    pub description: Option<String>,
    pub base: BaseKind,
    pub config: RunConfig,
    pub runs: Vec<PrimeRun>,
    pub passed: usize,
    pub failed: usize,
}

impl ScenarioReport {
    pub fn ok(&self) -> bool {
        self.failed == 0
    }

    pub fn claims(&self) -> impl Iterator<Item = (u32, &Claim)> {
        self.runs.iter().flat_map(|r| r.claims.iter().map(move |c| (r.p, c)))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub ok: bool,
    pub reports: Vec<ScenarioReport>,
}

impl Report {
    pub fn new(reports: Vec<ScenarioReport>) -> Report {
        Report {
            schema: REPORT_SCHEMA,
            ok: reports.iter().all(ScenarioReport::ok),
            reports,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for r in &self.reports {
            let c = &r.config;
            let _ = writeln!(
                s,
                "scenario {} ({} base; depth {}, retries {}, seed {}{})",
                r.scenario,
                r.base.name(),
                c.depth,
                c.retries,
                c.seed,
                if c.strict { ", strict" } else { "" }
            );
            if let Some(d) = &r.description {
                let _ = writeln!(s, "  {d}");
            }
            for run in &r.runs {
                let _ = writeln!(s, "  p = {}", run.p);
                for cl in &run.claims {
                    let tag = cl.status.map_or("error".to_string(), |st| st.to_string());
                    let _ = write!(
                        s,
                        "    {} {}#{} {} = {} [{}]",
                        if cl.pass { "PASS" } else { "FAIL" },
                        cl.kind,
                        cl.check,
                        cl.quantity,
                        cl.value,
                        tag
                    );
                    if let Some(e) = &cl.expected {
                        if !cl.pass || e != &cl.value {
                            let _ = write!(s, " expected {e}");
                        }
                    }
                    s.push('\n');
                    if let Some(n) = &cl.note {
                        let _ = writeln!(s, "        {n}");
                    }
                }
            }
            let _ = writeln!(s, "  {} passed, {} failed", r.passed, r.failed);
        }
        s
    }
}

impl FuzzSummary {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("summary serializes")
    }

    pub fn to_text(&self) -> String {
        let mut s = format!(
            "fuzz {} seed {}: {} instances, {} violations\n",
            self.profile.name(),
            self.seed,
            self.checked,
            self.violations.len()
        );
        for (k, v) in &self.stats {
            let _ = writeln!(s, "  {k}: {v}");
        }
        for v in &self.violations {
            let _ = writeln!(s, "  instance {}: {}", v.instance, v.detail);
            if let Some(a) = &v.artifact {
                let _ = writeln!(s, "    reproducer: {a}");
            }
        }
        s
    }
}
