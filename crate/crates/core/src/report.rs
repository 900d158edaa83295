//! Machine-readable run report.

use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::certsuite::{Params, RunResult};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub status: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunTiming {
    pub id: String,
    pub params: Params,
    pub us: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Timing {
    pub total_us: u64,
    pub runs: Vec<RunTiming>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    pub tool: String,
    pub version: String,
    pub invocation: Vec<String>,
    pub results: Vec<RunResult>,
    pub summary: Summary,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

fn micros(d: Duration) -> u64 {
    u64::try_from(d.as_micros()).unwrap_or(u64::MAX)
}

impl Report {
    pub fn new(invocation: Vec<String>, runs: Vec<(RunResult, Duration)>, total: Duration) -> Report {
        let timing = Timing {
            total_us: micros(total),
            runs: runs
                .iter()
                .map(|(r, d)| RunTiming { id: r.id.clone(), params: r.params.clone(), us: micros(*d) })
                .collect(),
        };
        let results: Vec<RunResult> = runs.into_iter().map(|(r, _)| r).collect();
        let passed = results.iter().filter(|r| r.pass).count();
        let failed = results.len() - passed;
        Report {
            schema: SCHEMA_VERSION,
            tool: "acceptcert".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            invocation,
            summary: Summary {
                total: results.len(),
                passed,
                failed,
                status: if failed == 0 { "pass".into() } else { "fail".into() },
            },
            results,
            timing: Some(timing),
        }
    }

    pub fn passed(&self) -> bool {
        self.summary.failed == 0
    }

    /// The report with wall times removed; identical across reruns.
    pub fn without_timing(&self) -> Report {
        Report { timing: None, ..self.clone() }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for r in &self.results {
            let ps: Vec<String> = r.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            s.push_str(&format!(
                "{:4} {} [{}] ({})\n",
                if r.pass { "ok" } else { "FAIL" },
                r.id,
                ps.join(" "),
                r.anchor
            ));
            for m in &r.mismatches {
                s.push_str(&format!("       mismatch: {m}\n"));
            }
        }
        s.push_str(&format!(
            "{} passed, {} failed of {}\n",
            self.summary.passed, self.summary.failed, self.summary.total
        ));
        s
    }
}
