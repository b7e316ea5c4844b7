//! One row of an experiment's output.

use serde::{Deserialize, Serialize};

/// Where a number came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Analytic,
    Recursion,
    Simulation,
}

/// A single estimate with its parameters.
///
/// Simulation records always carry a standard error; analytic ones never do.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub params: Vec<(String, f64)>,
    pub observable: String,
    pub value: f64,
    pub std_error: Option<f64>,
    pub censored_fraction: Option<f64>,
    pub provenance: Provenance,
}

impl ExperimentRecord {
    fn with(observable: &str, value: f64, params: &[(&str, f64)], provenance: Provenance) -> Self {
        Self {
            params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            observable: observable.to_string(),
            value,
            std_error: None,
            censored_fraction: None,
            provenance,
        }
    }

    pub fn analytic(observable: &str, value: f64, params: &[(&str, f64)]) -> Self {
        Self::with(observable, value, params, Provenance::Analytic)
    }

    pub fn recursion(observable: &str, value: f64, params: &[(&str, f64)]) -> Self {
        Self::with(observable, value, params, Provenance::Recursion)
    }

    pub fn simulation(
        observable: &str,
        value: f64,
        std_error: f64,
        censored_fraction: Option<f64>,
        params: &[(&str, f64)],
    ) -> Self {
        Self {
            std_error: Some(std_error),
            censored_fraction,
            ..Self::with(observable, value, params, Provenance::Simulation)
        }
    }

    pub fn param(&self, name: &str) -> Option<f64> {
        self.params.iter().find(|(k, _)| k == name).map(|(_, v)| *v)
    }
}
