//! Tabular diagnostics and their CSV/JSON forms.

use serde::{Deserialize, Serialize};

/// Round-trip formatting with 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub n: usize,
    #[serde(rename = "G")]
    pub g: Option<f64>,
    #[serde(rename = "T")]
    pub t: Option<f64>,
    pub ratio: Option<f64>,
    #[serde(rename = "S")]
    pub s: Option<f64>,
    pub cauchy_gap: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ReportMetadata {
    pub system: String,
    pub function: Option<String>,
    pub sequence: Option<String>,
    pub multiplier: Option<String>,
    pub weight_mode: Option<String>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsReport {
    pub rows: Vec<ReportRow>,
    pub metadata: ReportMetadata,
    pub warnings: Vec<String>,
    /// Trend flag from a convergence probe; never a verdict.
    pub consistent_with_convergence: Option<bool>,
}

pub const REPORT_HEADER: &str = "n,G,T,ratio,S,cauchy_gap";

/// Ratios are reported only above this `T_n`.
pub const RATIO_T_FLOOR: f64 = 1e-14;

impl DiagnosticsReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(REPORT_HEADER);
        out.push('\n');
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                r.n,
                fmt_opt(r.g),
                fmt_opt(r.t),
                fmt_opt(r.ratio),
                fmt_opt(r.s),
                fmt_opt(r.cauchy_gap)
            ));
        }
        out
    }

    pub fn max_ratio(&self) -> Option<f64> {
        self.rows.iter().filter_map(|r| r.ratio).reduce(f64::max)
    }

    pub fn gaps(&self) -> Vec<f64> {
        self.rows.iter().filter_map(|r| r.cauchy_gap).collect()
    }
}
