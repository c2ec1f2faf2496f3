//! Report records and JSON/CSV serialization.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "CONFIRMED")]
    Confirmed,
    #[serde(rename = "REFUTED")]
    Refuted,
    #[serde(rename = "INCONCLUSIVE")]
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Confirmed => write!(f, "CONFIRMED"),
            Verdict::Refuted => write!(f, "REFUTED"),
            Verdict::Inconclusive => write!(f, "INCONCLUSIVE"),
        }
    }
}

/// One parameter draw of one identity form.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DrawRecord {
    pub params: BTreeMap<String, f64>,
    pub interval: [f64; 2],
    pub max_residual: f64,
    pub quad_mismatch: f64,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub excluded: bool,
}

/// A registered variant's sweep outcome.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FormReport {
    pub name: String,
    pub verdict: Verdict,
    pub draws: Vec<DrawRecord>,
}

/// Per-identity outcome: the printed form's verdict, plus variants, plus the
/// effective verdict used for exit codes (CONFIRMED when the printed form or
/// any registered variant is confirmed).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IdentityReport {
    pub identity: String,
    pub anchor: String,
    pub status_note: String,
    pub verdict: Verdict,
    pub effective_verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub confirmed_variant: Option<String>,
    pub draws: Vec<DrawRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub variants: Vec<FormReport>,
}

/// Non-deterministic run metadata, isolated so reports can be compared
/// byte-for-byte on `results` alone.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunHeader {
    pub timestamp_ms: u128,
    pub wall_time_ms: u128,
    pub seed: u64,
    pub tool: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunReport {
    pub header: RunHeader,
    pub results: Vec<IdentityReport>,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    /// The deterministic part of the report (everything but the header).
    pub fn results_json(&self) -> String {
        serde_json::to_string_pretty(&self.results).expect("report serialization cannot fail")
    }

    /// One CSV row per draw (variant rows carry the variant name).
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "identity,variant,draw,verdict,max_residual,quad_mismatch,lo,hi,params\n",
        );
        let mut push_rows = |identity: &str, variant: &str, draws: &[DrawRecord]| {
            for (i, d) in draws.iter().enumerate() {
                let params = d
                    .params
                    .iter()
                    .map(|(k, v)| format!("{k}={v}"))
                    .collect::<Vec<_>>()
                    .join(";");
                out.push_str(&format!(
                    "{identity},{variant},{i},{},{},{},{},{},{params}\n",
                    d.verdict, d.max_residual, d.quad_mismatch, d.interval[0], d.interval[1]
                ));
            }
        };
        for r in &self.results {
            push_rows(&r.identity, "", &r.draws);
            for v in &r.variants {
                push_rows(&r.identity, &v.name, &v.draws);
            }
        }
        out
    }
}
