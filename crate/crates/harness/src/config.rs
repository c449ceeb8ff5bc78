//! Simulation configuration, read from JSON.

use std::path::{Path, PathBuf};

use harmonic_entropy_core::{DistributionSpec, EstimatorKind, Pmf};
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};

/// One Monte Carlo experiment: a distribution, a grid of sample sizes, a
/// replicate count, a base seed and the estimators to run on every sample.
///
/// ```json
/// {
///   "distribution": {"family": "geometric", "p": 0.1},
///   "n_grid": [200, 400, 600],
///   "replicates": 100,
///   "base_seed": 42,
///   "estimators": ["harmonic", "plugin"],
///   "output_path": "out/geometric"
/// }
/// ```
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationConfig {
    pub distribution: DistributionSpec,
    pub n_grid: Vec<u64>,
    pub replicates: u64,
    pub base_seed: u64,
    pub estimators: Vec<EstimatorKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_path: Option<PathBuf>,
}

impl SimulationConfig {
    pub fn from_json_str(text: &str) -> Result<Self> {
        let config: SimulationConfig =
            serde_json::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        Self::from_json_str(&text).map_err(|e| match e {
            HarnessError::Config(msg) => HarnessError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    /// Checks the invariants and builds the distribution.
    pub fn validate(&self) -> Result<Pmf> {
        let pmf =
            Pmf::from_spec(&self.distribution).map_err(|e| HarnessError::Config(e.to_string()))?;
        if self.n_grid.is_empty() {
            return Err(HarnessError::Config("n_grid is empty".into()));
        }
        if self.n_grid[0] == 0 {
            return Err(HarnessError::Config(
                "n_grid entries must be positive".into(),
            ));
        }
        if let Some(w) = self.n_grid.windows(2).find(|w| w[0] >= w[1]) {
            return Err(HarnessError::Config(format!(
                "n_grid must be strictly increasing ({} is followed by {})",
                w[0], w[1]
            )));
        }
        if self.replicates == 0 {
            return Err(HarnessError::Config("replicates must be at least 1".into()));
        }
        for (i, e) in self.estimators.iter().enumerate() {
            if self.estimators[..i].contains(e) {
                return Err(HarnessError::Config(format!(
                    "estimator `{e}` listed twice"
                )));
            }
            if self.n_grid[0] < e.min_n() {
                return Err(HarnessError::Config(format!(
                    "estimator `{e}` needs n >= {}, n_grid starts at {}",
                    e.min_n(),
                    self.n_grid[0]
                )));
            }
        }
        Ok(pmf)
    }
}
