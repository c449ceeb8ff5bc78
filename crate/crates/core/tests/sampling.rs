//! Frequency checks of the samplers against the model masses.

use harmonic_entropy_core::estimators::oracle_estimate;
use harmonic_entropy_core::Pmf;

const DRAWS: u64 = 400_000;

/// Asserts that the empirical frequency of each symbol in `1..=k` and of
/// the rest lies within five binomial standard deviations of its mass.
fn check_frequencies(pmf: &Pmf, k: u64, seed: u64) {
    let draw = pmf.sample(DRAWS, seed);
    let mut counts = vec![0u64; k as usize + 1];
    for &s in &draw.symbols {
        assert!(s >= 1);
        counts[(s.min(k + 1) - 1) as usize] += 1;
    }
    let head: f64 = (1..=k).map(|j| pmf.mass(j)).sum();
    for (i, &c) in counts.iter().enumerate() {
        let p = if i as u64 == k {
            1.0 - head
        } else {
            pmf.mass(i as u64 + 1)
        };
        let f = c as f64 / DRAWS as f64;
        let sd = (p * (1.0 - p) / DRAWS as f64).sqrt().max(1e-9);
        assert!(
            (f - p).abs() <= 5.0 * sd,
            "{} bin {i}: frequency {f} vs mass {p}",
            pmf.family_name()
        );
    }
}

#[test]
fn finite_frequencies() {
    check_frequencies(&Pmf::finite([0.1, 0.2, 0.3, 0.25, 0.15]).unwrap(), 4, 11);
    check_frequencies(&Pmf::uniform(20).unwrap(), 19, 12);
}

#[test]
fn geometric_frequencies() {
    check_frequencies(&Pmf::geometric(0.1).unwrap(), 40, 13);
    check_frequencies(&Pmf::geometric(0.9).unwrap(), 3, 14);
}

#[test]
fn zeta_frequencies() {
    check_frequencies(&Pmf::zeta(2.0).unwrap(), 30, 15);
    check_frequencies(&Pmf::zeta(1.3).unwrap(), 30, 16);
    check_frequencies(&Pmf::zeta(4.0).unwrap(), 5, 17);
}

#[test]
fn oracle_estimate_concentrates_on_entropy() {
    for pmf in [
        Pmf::geometric(0.1).unwrap(),
        Pmf::zeta(2.0).unwrap(),
        Pmf::uniform(500).unwrap(),
    ] {
        let draw = pmf.sample(DRAWS, 99);
        let est = oracle_estimate(&draw, &pmf).unwrap();
        let sd = (pmf.var_log_p() / DRAWS as f64).sqrt();
        assert!(
            (est - pmf.entropy()).abs() <= 5.0 * sd + 1e-12,
            "{}: {est} vs {}",
            pmf.family_name(),
            pmf.entropy()
        );
    }
}

#[test]
fn streams_differ_across_seeds() {
    let pmf = Pmf::geometric(0.2).unwrap();
    assert_ne!(pmf.sample(100, 1).symbols, pmf.sample(100, 2).symbols);
    assert_eq!(pmf.sample(100, 1).seed, 1);
}
