//! Writing simulation results as CSV and JSON.
//!
//! CSV values use 17 significant digits. JSON uses the shortest
//! representation that parses back to the same `f64`.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use harmonic_entropy_core::EstimatorKind;
use serde::{Deserialize, Serialize};

use crate::config::SimulationConfig;
use crate::error::{HarnessError, Result};
use crate::simulation::SimulationResult;

pub const DETAIL_FILE: &str = "detail.csv";
pub const AGGREGATE_FILE: &str = "aggregate.csv";
pub const JSON_FILE: &str = "results.json";

pub const DETAIL_HEADER: &str = "estimator,n,replicate,estimate,true_entropy";
pub const AGGREGATE_HEADER: &str = "estimator,n,mse,mean_bias,variance";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExportFormat {
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DetailRow {
    pub estimator: EstimatorKind,
    pub n: u64,
    pub replicate: u64,
    pub estimate: f64,
    pub true_entropy: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AggregateRow {
    pub estimator: EstimatorKind,
    pub n: u64,
    pub mse: f64,
    pub mean_bias: f64,
    pub variance: f64,
}

/// Content of `results.json`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultsDocument {
    pub config: SimulationConfig,
    pub true_entropy: f64,
    pub detail: Vec<DetailRow>,
    pub aggregate: Vec<AggregateRow>,
}

pub fn detail_rows(result: &SimulationResult) -> Vec<DetailRow> {
    result
        .cells
        .iter()
        .flat_map(|cell| {
            cell.estimates
                .iter()
                .enumerate()
                .map(move |(r, &estimate)| DetailRow {
                    estimator: cell.estimator,
                    n: cell.n,
                    replicate: r as u64,
                    estimate,
                    true_entropy: result.true_entropy,
                })
        })
        .collect()
}

pub fn aggregate_rows(result: &SimulationResult) -> Vec<AggregateRow> {
    result
        .cells
        .iter()
        .map(|c| AggregateRow {
            estimator: c.estimator,
            n: c.n,
            mse: c.mse,
            mean_bias: c.mean_bias,
            variance: c.empirical_variance,
        })
        .collect()
}

pub fn detail_csv(result: &SimulationResult) -> String {
    let mut out = String::from(DETAIL_HEADER);
    out.push('\n');
    for row in detail_rows(result) {
        let _ = writeln!(
            out,
            "{},{},{},{:.16e},{:.16e}",
            row.estimator, row.n, row.replicate, row.estimate, row.true_entropy
        );
    }
    out
}

pub fn aggregate_csv(result: &SimulationResult) -> String {
    let mut out = String::from(AGGREGATE_HEADER);
    out.push('\n');
    for row in aggregate_rows(result) {
        let _ = writeln!(
            out,
            "{},{},{:.16e},{:.16e},{:.16e}",
            row.estimator, row.n, row.mse, row.mean_bias, row.variance
        );
    }
    out
}

pub fn results_document(result: &SimulationResult) -> ResultsDocument {
    ResultsDocument {
        config: result.config.clone(),
        true_entropy: result.true_entropy,
        detail: detail_rows(result),
        aggregate: aggregate_rows(result),
    }
}

pub fn results_json(result: &SimulationResult) -> String {
    let mut text =
        serde_json::to_string_pretty(&results_document(result)).expect("results serialize");
    text.push('\n');
    text
}

/// Writes the files of `format` into `dir` (created if missing) and returns
/// their paths.
pub fn export_results(
    result: &SimulationResult,
    dir: &Path,
    format: ExportFormat,
) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
    let files: Vec<(&str, String)> = match format {
        ExportFormat::Csv => vec![
            (DETAIL_FILE, detail_csv(result)),
            (AGGREGATE_FILE, aggregate_csv(result)),
        ],
        ExportFormat::Json => vec![(JSON_FILE, results_json(result))],
    };
    files
        .into_iter()
        .map(|(name, body)| {
            let path = dir.join(name);
            fs::write(&path, body).map_err(|e| HarnessError::io(&path, e))?;
            Ok(path)
        })
        .collect()
}

/// Reads back a `results.json` file.
pub fn read_results_json(path: &Path) -> Result<ResultsDocument> {
    let text = fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
    serde_json::from_str(&text).map_err(|source| HarnessError::Json {
        path: path.to_path_buf(),
        source,
    })
}
