//! Seeded Monte Carlo sweeps over sample sizes, with per-cell error
//! aggregation, log-log rate fits and a normality diagnostic.

use harmonic_entropy_core::estimators::normal_cdf;
use harmonic_entropy_core::{CountsHistogram, EstimatorKind, Pmf};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::SimulationConfig;
use crate::error::{HarnessError, Result};

/// Aggregates of one estimator at one sample size.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellResult {
    pub estimator: EstimatorKind,
    pub n: u64,
    /// Mean of `(estimate − H)²`.
    pub mse: f64,
    /// Mean of `estimate − H`.
    pub mean_bias: f64,
    /// Population variance of the estimates (divide by the replicate count).
    pub empirical_variance: f64,
    /// One estimate per replicate, in replicate order.
    pub estimates: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulationResult {
    pub config: SimulationConfig,
    pub true_entropy: f64,
    /// Estimator-major, then increasing `n`.
    pub cells: Vec<CellResult>,
}

impl SimulationResult {
    pub fn cell(&self, estimator: EstimatorKind, n: u64) -> Option<&CellResult> {
        self.cells
            .iter()
            .find(|c| c.estimator == estimator && c.n == n)
    }
}

const fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of replicate `replicate` at sample size `n`.
pub fn replicate_seed(base_seed: u64, n: u64, replicate: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(base_seed) ^ n) ^ replicate)
}

/// Runs the experiment on rayon's global pool.
pub fn run_simulation(config: &SimulationConfig) -> Result<SimulationResult> {
    let pmf = config.validate()?;
    run_cells(config, &pmf)
}

/// Runs the experiment on a dedicated pool of `workers` threads. The result
/// does not depend on `workers`.
pub fn run_simulation_with_workers(
    config: &SimulationConfig,
    workers: usize,
) -> Result<SimulationResult> {
    let pmf = config.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| HarnessError::Config(format!("cannot start worker pool: {e}")))?;
    pool.install(|| run_cells(config, &pmf))
}

fn run_cells(config: &SimulationConfig, pmf: &Pmf) -> Result<SimulationResult> {
    let h = pmf.entropy();
    let reps = config.replicates;
    let work: Vec<(u64, u64)> = config
        .n_grid
        .iter()
        .flat_map(|&n| (0..reps).map(move |r| (n, r)))
        .collect();

    // Row i holds every estimator's value on work item i's sample.
    let rows: Vec<Vec<f64>> = work
        .par_iter()
        .map(|&(n, r)| -> Result<Vec<f64>> {
            if config.estimators.is_empty() {
                return Ok(Vec::new());
            }
            let draw = pmf.sample(n, replicate_seed(config.base_seed, n, r));
            let hist = CountsHistogram::from_draw(&draw);
            config
                .estimators
                .iter()
                .map(|e| Ok(e.evaluate(&draw, &hist, pmf)?))
                .collect()
        })
        .collect::<Result<_>>()?;

    let mut cells = Vec::with_capacity(config.estimators.len() * config.n_grid.len());
    for (ei, &estimator) in config.estimators.iter().enumerate() {
        for (ni, &n) in config.n_grid.iter().enumerate() {
            let start = ni * reps as usize;
            let estimates: Vec<f64> = rows[start..start + reps as usize]
                .iter()
                .map(|row| row[ei])
                .collect();
            cells.push(aggregate(estimator, n, estimates, h));
        }
    }
    Ok(SimulationResult {
        config: config.clone(),
        true_entropy: h,
        cells,
    })
}

/// Neumaier-compensated sum.
fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for v in values {
        let t = sum + v;
        comp += if sum.abs() >= v.abs() {
            (sum - t) + v
        } else {
            (v - t) + sum
        };
        sum = t;
    }
    sum + comp
}

fn aggregate(estimator: EstimatorKind, n: u64, estimates: Vec<f64>, h: f64) -> CellResult {
    let r = estimates.len() as f64;
    let mean = compensated_sum(estimates.iter().copied()) / r;
    let empirical_variance = compensated_sum(estimates.iter().map(|x| (x - mean) * (x - mean))) / r;
    let mse = compensated_sum(estimates.iter().map(|x| (x - h) * (x - h))) / r;
    CellResult {
        estimator,
        n,
        mse,
        mean_bias: mean - h,
        empirical_variance,
        estimates,
    }
}

/// Least-squares slope of `ln(value)` against `ln(n)`.
pub fn rate_slope(points: &[(f64, f64)]) -> Result<f64> {
    if points.len() < 3 {
        return Err(HarnessError::Config(format!(
            "rate_slope needs at least 3 points, got {}",
            points.len()
        )));
    }
    if let Some(&(n, v)) = points.iter().find(|&&(n, v)| !(v > 0.0 && n > 0.0)) {
        return Err(HarnessError::Config(format!(
            "rate_slope needs positive n and values, got ({n}, {v})"
        )));
    }
    let k = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = compensated_sum(xs.iter().copied()) / k;
    let my = compensated_sum(ys.iter().copied()) / k;
    let sxy = compensated_sum(xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)));
    let sxx = compensated_sum(xs.iter().map(|x| (x - mx) * (x - mx)));
    if sxx == 0.0 {
        return Err(HarnessError::Config(
            "rate_slope needs at least two distinct n".into(),
        ));
    }
    Ok(sxy / sxx)
}

/// One-sample Kolmogorov–Smirnov test of standardized values against the
/// standard normal.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormalityReport {
    pub ks_statistic: f64,
    /// `(x − mean)/sd` with the `n − 1` sample standard deviation, input order.
    pub standardized: Vec<f64>,
}

/// Minimum sample length accepted by [`normality_check`].
pub const MIN_NORMALITY_LEN: usize = 50;

/// Approximate 1% critical value of the KS statistic for `len` values.
pub fn ks_critical_1pct(len: usize) -> f64 {
    1.63 / (len as f64).sqrt()
}

pub fn normality_check(values: &[f64]) -> Result<NormalityReport> {
    if values.len() < MIN_NORMALITY_LEN {
        return Err(HarnessError::Config(format!(
            "normality_check needs at least {MIN_NORMALITY_LEN} values, got {}",
            values.len()
        )));
    }
    let k = values.len() as f64;
    let mean = compensated_sum(values.iter().copied()) / k;
    let var = compensated_sum(values.iter().map(|x| (x - mean) * (x - mean))) / (k - 1.0);
    let sd = var.sqrt();
    if !(sd > 0.0) || !sd.is_finite() {
        return Err(HarnessError::Config(
            "normality_check input has zero variance".into(),
        ));
    }
    let standardized: Vec<f64> = values.iter().map(|x| (x - mean) / sd).collect();
    let mut sorted = standardized.clone();
    sorted.sort_by(f64::total_cmp);
    let ks_statistic = sorted
        .iter()
        .enumerate()
        .map(|(i, &z)| {
            let f = normal_cdf(z);
            (((i + 1) as f64 / k) - f).max(f - i as f64 / k)
        })
        .fold(0.0, f64::max);
    Ok(NormalityReport {
        ks_statistic,
        standardized,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use harmonic_entropy_core::estimators::normal_quantile;
    use harmonic_entropy_core::DistributionSpec;

    fn config(spec: DistributionSpec, n_grid: Vec<u64>, replicates: u64) -> SimulationConfig {
        SimulationConfig {
            distribution: spec,
            n_grid,
            replicates,
            base_seed: 7,
            estimators: vec![EstimatorKind::Harmonic, EstimatorKind::Plugin],
            output_path: None,
        }
    }

    #[test]
    fn degenerate_distribution_gives_zero() {
        let c = config(
            DistributionSpec::Finite { probs: vec![1.0] },
            vec![2, 5, 9],
            4,
        );
        let res = run_simulation(&c).unwrap();
        assert_eq!(res.true_entropy, 0.0);
        for cell in &res.cells {
            assert!(cell.estimates.iter().all(|&x| x == 0.0));
            assert_eq!(cell.mse, 0.0);
        }
    }

    #[test]
    fn fair_coin_mean_matches_enumeration() {
        let mut c = config(
            DistributionSpec::Finite {
                probs: vec![0.5, 0.5],
            },
            vec![2],
            1_000_000,
        );
        c.estimators = vec![EstimatorKind::Harmonic];
        let res = run_simulation(&c).unwrap();
        let cell = &res.cells[0];
        let mean = cell.mean_bias + res.true_entropy;
        assert!((mean - 0.5).abs() < 0.002, "mean = {mean}");
    }

    #[test]
    fn cell_layout_and_decomposition() {
        let c = config(DistributionSpec::Geometric { p: 0.3 }, vec![5, 10, 20], 17);
        let res = run_simulation(&c).unwrap();
        assert_eq!(res.cells.len(), 6);
        let order: Vec<(EstimatorKind, u64)> =
            res.cells.iter().map(|c| (c.estimator, c.n)).collect();
        assert_eq!(order[0], (EstimatorKind::Harmonic, 5));
        assert_eq!(order[3], (EstimatorKind::Plugin, 5));
        for cell in &res.cells {
            assert_eq!(cell.estimates.len(), 17);
            let rhs = cell.mean_bias * cell.mean_bias + cell.empirical_variance;
            assert!((cell.mse - rhs).abs() <= 1e-12, "{cell:?}");
        }
    }

    #[test]
    fn workers_do_not_change_results() {
        let c = config(DistributionSpec::Zeta { gamma: 2.0 }, vec![10, 40], 25);
        let a = run_simulation_with_workers(&c, 1).unwrap();
        let b = run_simulation_with_workers(&c, 4).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn seeds_differ_across_cells() {
        let mut seen = std::collections::HashSet::new();
        for n in [1u64, 2, 3, 200] {
            for r in 0..100 {
                assert!(seen.insert(replicate_seed(42, n, r)));
            }
        }
        assert_ne!(replicate_seed(1, 2, 3), replicate_seed(1, 3, 2));
    }

    #[test]
    fn rate_slope_examples() {
        let ns = [100.0, 200.0, 400.0, 800.0, 1600.0];
        let inv: Vec<_> = ns.iter().map(|&n| (n, 3.0 / n)).collect();
        assert!((rate_slope(&inv).unwrap() + 1.0).abs() < 1e-9);
        let half: Vec<_> = ns.iter().map(|&n| (n, 0.2 * f64::powf(n, -0.5))).collect();
        assert!((rate_slope(&half).unwrap() + 0.5).abs() < 1e-9);
        assert!(rate_slope(&inv[..2]).is_err());
        assert!(rate_slope(&[(1.0, 1.0), (2.0, 0.0), (3.0, 1.0)]).is_err());
    }

    #[test]
    fn normality_examples() {
        let grid: Vec<f64> = (1..=1000)
            .map(|i| normal_quantile((i as f64 - 0.5) / 1000.0))
            .collect();
        let report = normality_check(&grid).unwrap();
        assert!(report.ks_statistic < 0.01, "{}", report.ks_statistic);
        assert_eq!(report.standardized.len(), 1000);
        assert!(normality_check(&[1.5; 100]).is_err());
        assert!(normality_check(&grid[..49]).is_err());
        assert!((ks_critical_1pct(500) - 0.0729).abs() < 1e-4);
    }
}
