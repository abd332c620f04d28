use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use specht_endo::staircase::FamilyReport;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// One scanned family, as stored in the cache and printed by `scan`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultRecord {
    /// The partition `lambda`, comma separated.
    pub key: String,
    pub a: u32,
    pub m: u32,
    pub b: u32,
    pub r: u32,
    pub parity: bool,
    pub num_tables: usize,
    pub rel_dim: usize,
    pub end_dim: Option<usize>,
    pub rel_end_gap: bool,
    pub failed_checks: Vec<String>,
    pub support_digest: String,
    pub tool_version: String,
    pub timestamp: u64,
}

/// SHA-256 of the compact JSON serialization of the support list.
pub fn support_digest(support: &[Vec<Vec<u32>>]) -> String {
    let canonical = serde_json::to_vec(support).expect("integers always serialize");
    Sha256::digest(&canonical).iter().map(|b| format!("{b:02x}")).collect()
}

impl ResultRecord {
    pub fn from_report(key: String, report: &FamilyReport) -> Self {
        let timestamp = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        ResultRecord {
            key,
            a: report.a,
            m: report.m,
            b: report.b,
            r: report.r,
            parity: report.parity,
            num_tables: report.num_tables,
            rel_dim: report.rel_dim,
            end_dim: report.end_dim,
            rel_end_gap: report.end_dim.is_some_and(|e| e != report.rel_dim),
            failed_checks: report.failures().iter().map(|s| s.to_string()).collect(),
            support_digest: support_digest(&report.support),
            tool_version: TOOL_VERSION.to_string(),
            timestamp,
        }
    }

    pub const CSV_HEADER: &'static str =
        "key,a,m,b,r,parity,num_tables,rel_dim,end_dim,rel_end_gap,failed_checks,support_digest,tool_version,timestamp";

    pub fn csv_line(&self) -> String {
        format!(
            "\"{}\",{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.key,
            self.a,
            self.m,
            self.b,
            self.r,
            self.parity,
            self.num_tables,
            self.rel_dim,
            self.end_dim.map(|d| d.to_string()).unwrap_or_default(),
            self.rel_end_gap,
            self.failed_checks.join(";"),
            self.support_digest,
            self.tool_version,
            self.timestamp
        )
    }

    pub fn text_line(&self) -> String {
        let end = self.end_dim.map(|d| d.to_string()).unwrap_or_else(|| "-".into());
        let mut line = format!(
            "r={:<3} ({},{},{}) lambda=({}) parity={} tables={} rel={} end={}",
            self.r, self.a, self.m, self.b, self.key, self.parity, self.num_tables, self.rel_dim, end
        );
        if self.rel_end_gap {
            line.push_str(" rel_end_gap");
        }
        if !self.failed_checks.is_empty() {
            line.push_str(&format!(" FAILED: {}", self.failed_checks.join(", ")));
        }
        line
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_is_stable() {
        let support = vec![vec![vec![1, 3], vec![2, 0]]];
        assert_eq!(support_digest(&support), support_digest(&support.clone()));
        assert_ne!(support_digest(&support), support_digest(&[]));
        assert_eq!(support_digest(&support).len(), 64);
    }
}
