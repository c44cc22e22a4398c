//! Reproducible numerical experiments, each producing an [`ExperimentRecord`].

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

mod approx_table;
mod circle;
mod conics;
mod monotone;

pub use approx_table::{approximation_table, ApproxRow, F1_INTERVAL, F2_INTERVAL};
pub use approx_table::{f1, f2};
pub use circle::{circle_outcome, circle_points, circle_reproduction, CircleOutcome};
pub use conics::{conic_reproduction, default_arcs, ConicArc, ConicError};
pub use monotone::{monotone_data1, monotone_data2, monotone_experiment};

/// Name of the generator behind every seeded run.
pub const RNG_NAME: &str = "rand_chacha::ChaCha8Rng (rand 0.8)";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub name: String,
    pub parameters: BTreeMap<String, Value>,
    pub outputs: BTreeMap<String, Value>,
    pub seed: u64,
    pub version: String,
}

impl ExperimentRecord {
    pub fn new(name: impl Into<String>, seed: u64) -> Self {
        Self {
            name: name.into(),
            parameters: BTreeMap::new(),
            outputs: BTreeMap::new(),
            seed,
            version: format!("subdiv {}; {RNG_NAME}", env!("CARGO_PKG_VERSION")),
        }
    }

    pub fn param(mut self, key: &str, value: impl Serialize) -> Self {
        self.parameters.insert(key.into(), to_value(value));
        self
    }

    pub fn output(&mut self, key: &str, value: impl Serialize) {
        self.outputs.insert(key.into(), to_value(value));
    }
}

fn to_value(value: impl Serialize) -> Value {
    serde_json::to_value(value).unwrap_or(Value::Null)
}
