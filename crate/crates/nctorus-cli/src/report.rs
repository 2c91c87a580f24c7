//! Report file schema.
//!
//! A report is one JSON document with two top-level objects: `meta`
//! (generator version, timestamp, verbatim config echo) and `body`
//! (records plus summary). The body is a pure function of
//! (config, master seed): records are canonically ordered by check
//! ordinal, then config position, then sample index, and map keys are
//! sorted. Repeating a run with the same seed reproduces the body
//! byte-for-byte; only `meta.timestamp_unix` varies.

use std::collections::BTreeMap;

use nctorus::verify::GnReport;
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportMeta {
    pub schema_version: u32,
    pub generator: String,
    pub timestamp_unix: u64,
    pub seed: u64,
    /// Verbatim text of the run configuration.
    pub config_echo: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportSummary {
    pub total: usize,
    pub passed: usize,
    /// Converged records that failed their inequality.
    pub violations: usize,
    /// Records whose spectral estimates did not converge (reported, not
    /// failed).
    pub flagged: usize,
    pub worst_ratio_by_check: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportBody {
    pub records: Vec<GnReport>,
    pub summary: ReportSummary,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportFile {
    pub meta: ReportMeta,
    pub body: ReportBody,
}

impl ReportBody {
    pub fn from_records(records: Vec<GnReport>) -> Self {
        let total = records.len();
        let passed = records.iter().filter(|r| r.passed).count();
        let violations = records.iter().filter(|r| !r.passed && r.converged).count();
        let flagged = records.iter().filter(|r| !r.converged).count();
        let mut worst: BTreeMap<String, f64> = BTreeMap::new();
        for r in &records {
            let slot = worst.entry(r.check_id.to_string()).or_insert(f64::MIN);
            if r.ratio > *slot {
                *slot = r.ratio;
            }
        }
        Self {
            records,
            summary: ReportSummary {
                total,
                passed,
                violations,
                flagged,
                worst_ratio_by_check: worst,
            },
        }
    }

    /// Exit-code contract: 0 all pass, 1 at least one inequality
    /// violation, 2 convergence/diagnostic failures only.
    pub fn exit_code(&self) -> i32 {
        if self.summary.violations > 0 {
            1
        } else if self.summary.flagged > 0 {
            2
        } else {
            0
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report body serializes")
    }
}

impl ReportFile {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
