//! Experiment configuration and result-row wire formats.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Ec,
    InterfaceEnc,
    InterfaceDec,
}

/// {"experiment": "ec"|"interface-enc"|"interface-dec", "p": [...],
///  "trials": int, "seed": int}
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub p: Vec<f64>,
    pub trials: u64,
    pub seed: u64,
}

/// One CSV row of results.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResultRow {
    pub p: f64,
    pub rate: f64,
    pub stderr: f64,
    pub trials: u64,
    pub locations: usize,
}
