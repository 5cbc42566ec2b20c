//! Machine-readable deformation reports.

use std::collections::BTreeMap;

use pva_core::deform::PipelineReport;
use serde::Serialize;

/// Keys serialize in sorted order; `timings` is the only field that varies
/// between identical runs.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Report {
    pub free_symbols: Vec<String>,
    pub miura_witness: Option<String>,
    pub order: u32,
    pub raw_param_count: usize,
    pub skew_param_count: usize,
    pub solution_dim: usize,
    pub timings: BTreeMap<String, f64>,
    pub verdict: String,
}

impl From<&PipelineReport> for Report {
    fn from(r: &PipelineReport) -> Self {
        Report {
            free_symbols: r.free_symbols.clone(),
            miura_witness: if r.miura_witness.is_empty() {
                None
            } else {
                Some(r.miura_witness.join("; "))
            },
            order: r.order,
            raw_param_count: r.raw_param_count,
            skew_param_count: r.skew_param_count,
            solution_dim: r.solution_dim,
            timings: r
                .timings
                .iter()
                .map(|t| (t.stage.to_string(), (t.millis * 1000.0).round() / 1000.0))
                .collect(),
            verdict: r.verdict.as_str().to_string(),
        }
    }
}

impl Report {
    /// Pretty JSON with sorted keys and a trailing newline.
    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("report serializes");
        let mut s = serde_json::to_string_pretty(&value).expect("report serializes");
        s.push('\n');
        s
    }
}
