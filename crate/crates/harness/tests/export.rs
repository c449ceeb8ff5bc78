//! Result export: JSON round trip, CSV layout and determinism across
//! worker counts.

use harmonic_entropy_core::{DistributionSpec, EstimatorKind};
use harmonic_entropy_harness::export::{
    aggregate_csv, aggregate_rows, detail_csv, export_results, read_results_json, ExportFormat,
    JSON_FILE,
};
use harmonic_entropy_harness::{run_simulation_with_workers, SimulationConfig};

fn config() -> SimulationConfig {
    SimulationConfig {
        distribution: DistributionSpec::Zeta { gamma: 2.0 },
        n_grid: vec![20, 60, 180],
        replicates: 100,
        base_seed: 2024,
        estimators: vec![EstimatorKind::Harmonic, EstimatorKind::Oracle],
        output_path: None,
    }
}

#[test]
fn json_round_trip_is_bit_exact() {
    let res = run_simulation_with_workers(&config(), 3).unwrap();
    let dir = tempfile::tempdir().unwrap();
    export_results(&res, dir.path(), ExportFormat::Json).unwrap();
    let doc = read_results_json(&dir.path().join(JSON_FILE)).unwrap();
    let original = aggregate_rows(&res);
    assert_eq!(doc.aggregate.len(), original.len());
    for (a, b) in doc.aggregate.iter().zip(&original) {
        assert_eq!(a.mse.to_bits(), b.mse.to_bits());
        assert_eq!(a.mean_bias.to_bits(), b.mean_bias.to_bits());
        assert_eq!(a.variance.to_bits(), b.variance.to_bits());
    }
    assert_eq!(doc.detail.len(), 600);
    assert_eq!(doc.config, config());
    assert_eq!(doc.true_entropy.to_bits(), res.true_entropy.to_bits());
}

#[test]
fn csv_is_identical_across_worker_counts() {
    let a = run_simulation_with_workers(&config(), 1).unwrap();
    let b = run_simulation_with_workers(&config(), 8).unwrap();
    assert_eq!(detail_csv(&a), detail_csv(&b));
    assert_eq!(aggregate_csv(&a), aggregate_csv(&b));
    assert_eq!(detail_csv(&a).lines().count(), 601);
    assert_eq!(aggregate_csv(&a).lines().count(), 7);
}

#[test]
fn monte_carlo_mean_tracks_exact_bias() {
    let cfg = SimulationConfig {
        distribution: DistributionSpec::Geometric { p: 0.1 },
        n_grid: vec![10, 50, 200],
        replicates: 2000,
        base_seed: 77,
        estimators: vec![EstimatorKind::Harmonic],
        output_path: None,
    };
    let pmf = cfg.validate().unwrap();
    let res = run_simulation_with_workers(&cfg, 4).unwrap();
    for cell in &res.cells {
        let sd = cell.empirical_variance.sqrt();
        let expected = pmf.exact_bias(cell.n).unwrap();
        assert!(
            (cell.mean_bias - expected).abs() <= 4.0 * sd / (cfg.replicates as f64).sqrt(),
            "n = {}: {} vs {}",
            cell.n,
            cell.mean_bias,
            expected
        );
    }
}
