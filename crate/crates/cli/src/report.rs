//! The JSON report envelope. Field order is fixed by the struct layout and
//! all maps are sorted, so serialization is deterministic and golden tests
//! can compare bytes.

use std::collections::BTreeMap;

use serde::Serialize;

#[derive(Serialize)]
pub struct Report {
    pub version: &'static str,
    pub command: &'static str,
    /// The raw command-line inputs, echoed for reproducibility.
    pub inputs: serde_json::Value,
    /// The weight system in force, when the command uses one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weights: Option<WeightsOut>,
    pub results: serde_json::Value,
    pub diagnostics: Diagnostics,
}

#[derive(Serialize)]
pub struct WeightsOut {
    pub weights: Vec<i64>,
    pub degree: i64,
    /// "explicit" (from --weights) or "inferred" (from the support of s).
    pub source: &'static str,
}

#[derive(Serialize, Default)]
pub struct Diagnostics {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
    /// Every tolerance with observable effect on this command's output.
    pub tolerances: BTreeMap<&'static str, f64>,
    pub warnings: Vec<String>,
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(command: &'static str, inputs: serde_json::Value) -> Self {
        Report {
            version: env!("CARGO_PKG_VERSION"),
            command,
            inputs,
            weights: None,
            results: serde_json::Value::Null,
            diagnostics: Diagnostics::default(),
        }
    }
}
