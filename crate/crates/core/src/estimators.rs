//! Entropy estimators over count histograms.
//!
//! All estimators are functions of the multiset of counts only: they are
//! evaluated on the count profile (count value → number of symbols with that
//! count) in ascending count order, so relabelling symbols cannot change a
//! single bit of the output.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;

use crate::dist::{Pmf, SampleDraw};
use crate::error::{domain, Error, Result};
use crate::math::{self, CompensatedSum};
use crate::special::{harmonic_table, HarmonicTable};

/// Observed counts of a sample: symbol → number of occurrences.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CountsHistogram {
    counts: BTreeMap<u64, u64>,
    n: u64,
}

impl CountsHistogram {
    /// Validates that every symbol is positive and every count is at least one.
    pub fn new(counts: BTreeMap<u64, u64>) -> Result<Self> {
        if counts.contains_key(&0) {
            return Err(Error::InvalidSample(
                "symbol 0 is not a positive integer".into(),
            ));
        }
        if let Some((s, _)) = counts.iter().find(|(_, &c)| c == 0) {
            return Err(Error::InvalidSample(format!("symbol {s} has count 0")));
        }
        let n = counts.values().sum();
        Ok(CountsHistogram { counts, n })
    }

    /// Histogram of `(symbol, count)` pairs; a repeated symbol is an error.
    pub fn from_pairs<I: IntoIterator<Item = (u64, u64)>>(pairs: I) -> Result<Self> {
        let mut counts = BTreeMap::new();
        for (s, c) in pairs {
            if counts.insert(s, c).is_some() {
                return Err(Error::InvalidSample(format!("symbol {s} listed twice")));
            }
        }
        Self::new(counts)
    }

    pub fn from_symbols<I: IntoIterator<Item = u64>>(symbols: I) -> Result<Self> {
        let mut counts = BTreeMap::new();
        for s in symbols {
            *counts.entry(s).or_insert(0u64) += 1;
        }
        Self::new(counts)
    }

    pub fn from_draw(draw: &SampleDraw) -> Self {
        Self::from_symbols(draw.symbols.iter().copied()).expect("sampled symbols are positive")
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn counts(&self) -> &BTreeMap<u64, u64> {
        &self.counts
    }

    /// Number of distinct observed symbols.
    pub fn observed_symbols(&self) -> usize {
        self.counts.len()
    }

    /// Count value → number of symbols observed exactly that many times.
    pub fn count_profile(&self) -> BTreeMap<u64, u64> {
        let mut profile = BTreeMap::new();
        for &c in self.counts.values() {
            *profile.entry(c).or_insert(0u64) += 1;
        }
        profile
    }
}

/// Which estimator produced a value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(
    feature = "serde",
    derive(serde::Serialize, serde::Deserialize),
    serde(rename_all = "lowercase")
)]
pub enum EstimatorKind {
    Harmonic,
    Plugin,
    Miller,
    Oracle,
}

impl EstimatorKind {
    pub const ALL: [EstimatorKind; 4] = [
        EstimatorKind::Harmonic,
        EstimatorKind::Plugin,
        EstimatorKind::Miller,
        EstimatorKind::Oracle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EstimatorKind::Harmonic => "harmonic",
            EstimatorKind::Plugin => "plugin",
            EstimatorKind::Miller => "miller",
            EstimatorKind::Oracle => "oracle",
        }
    }

    /// Smallest sample size the estimator accepts.
    pub fn min_n(self) -> u64 {
        match self {
            EstimatorKind::Harmonic => 2,
            _ => 1,
        }
    }

    /// Evaluates this estimator on a drawn sample. `pmf` is only consulted by
    /// the oracle estimator.
    pub fn evaluate(self, draw: &SampleDraw, hist: &CountsHistogram, pmf: &Pmf) -> Result<f64> {
        match self {
            EstimatorKind::Harmonic => harmonic_estimate(hist),
            EstimatorKind::Plugin => Ok(plugin_estimate(hist)),
            EstimatorKind::Miller => Ok(miller_estimate(hist)),
            EstimatorKind::Oracle => oracle_estimate(draw, pmf),
        }
    }
}

impl core::fmt::Display for EstimatorKind {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.name())
    }
}

impl core::str::FromStr for EstimatorKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        EstimatorKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| domain("estimator", format!("unknown estimator `{s}`")))
    }
}

/// A point estimate with optional variance and confidence interval.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EstimateReport {
    pub estimator_name: String,
    pub n: u64,
    pub point: f64,
    pub variance_hat: Option<f64>,
    pub ci_low: Option<f64>,
    pub ci_high: Option<f64>,
    /// Whether the lower interval end was raised to zero.
    pub ci_clamped: Option<bool>,
    pub level: Option<f64>,
    pub seed: Option<u64>,
}

fn require_n(hist: &CountsHistogram, estimator: &'static str, required: u64) -> Result<()> {
    if hist.n < required {
        return Err(Error::SampleTooSmall {
            estimator,
            required,
            n: hist.n,
        });
    }
    Ok(())
}

/// Per-point transformed value `J(n−1) − J(c−1)` for a symbol seen `c` times.
#[inline]
fn transformed(table: &HarmonicTable, n: u64, count: u64) -> f64 {
    table.get(n - 1) - table.get(count - 1)
}

/// Harmonic estimator from an arbitrary harmonic table.
pub(crate) fn harmonic_estimate_with(
    table: &HarmonicTable,
    profile: &BTreeMap<u64, u64>,
    n: u64,
) -> f64 {
    let mut acc = CompensatedSum::new();
    for (&count, &mult) in profile {
        acc.add((mult * count) as f64 * transformed(table, n, count));
    }
    acc.value() / n as f64
}

/// Harmonic estimator `(1/n) Σ_j m_j [J(n−1) − J(m_j−1)]`, in nats.
///
/// Needs `n ≥ 2`. The result lies in `[0, J(n−1)]`: zero when a single
/// symbol is observed, `J(n−1)` when all points are distinct.
pub fn harmonic_estimate(hist: &CountsHistogram) -> Result<f64> {
    require_n(hist, "harmonic estimator", 2)?;
    Ok(harmonic_estimate_with(
        harmonic_table(),
        &hist.count_profile(),
        hist.n,
    ))
}

/// Plug-in (maximum likelihood) entropy of the empirical frequencies.
pub fn plugin_estimate(hist: &CountsHistogram) -> f64 {
    if hist.n == 0 {
        return 0.0;
    }
    let n = hist.n as f64;
    let mut acc = CompensatedSum::new();
    for (&count, &mult) in &hist.count_profile() {
        let f = count as f64 / n;
        acc.add(-(mult as f64) * f * math::ln(f));
    }
    acc.value()
}

/// Plug-in estimate plus the Miller correction `(s_obs − 1)/(2n)`.
pub fn miller_estimate(hist: &CountsHistogram) -> f64 {
    if hist.n == 0 {
        return 0.0;
    }
    plugin_estimate(hist) + miller_correction(hist)
}

/// `(s_obs − 1)/(2n)`.
pub fn miller_correction(hist: &CountsHistogram) -> f64 {
    (hist.observed_symbols() as f64 - 1.0) / (2.0 * hist.n as f64)
}

/// Oracle estimator `−(1/n) Σ_i log p(X⁽ⁱ⁾)` using the true model.
pub fn oracle_estimate(draw: &SampleDraw, pmf: &Pmf) -> Result<f64> {
    if draw.symbols.is_empty() {
        return Err(Error::SampleTooSmall {
            estimator: "oracle estimator",
            required: 1,
            n: 0,
        });
    }
    let mut acc = CompensatedSum::new();
    for &s in &draw.symbols {
        let lm = pmf.log_mass(s);
        if lm == f64::NEG_INFINITY {
            return Err(Error::ModelMismatch { symbol: s });
        }
        acc.add(-lm);
    }
    Ok(acc.value() / draw.symbols.len() as f64)
}

/// Sample variance of the per-point transformed values
/// `J(n−1) − J(m⁽ⁱ⁾−1)` (divide-by-n convention). Needs `n ≥ 2`.
pub fn variance_estimate(hist: &CountsHistogram) -> Result<f64> {
    require_n(hist, "variance estimate", 2)?;
    let table = harmonic_table();
    let profile = hist.count_profile();
    let mean = harmonic_estimate_with(table, &profile, hist.n);
    let mut acc = CompensatedSum::new();
    for (&count, &mult) in &profile {
        let d = transformed(table, hist.n, count) - mean;
        acc.add((mult * count) as f64 * d * d);
    }
    Ok((acc.value() / hist.n as f64).max(0.0))
}

/// Variance of `−log p̂(X)` under the empirical distribution; the delta-method
/// variance used for plug-in style intervals.
pub fn plugin_variance_estimate(hist: &CountsHistogram) -> f64 {
    if hist.n == 0 {
        return 0.0;
    }
    let n = hist.n as f64;
    let profile = hist.count_profile();
    let h = plugin_estimate(hist);
    let mut acc = CompensatedSum::new();
    for (&count, &mult) in &profile {
        let f = count as f64 / n;
        let d = -math::ln(f) - h;
        acc.add(mult as f64 * f * d * d);
    }
    acc.value().max(0.0)
}

/// Two-sided Wald interval.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct WaldInterval {
    pub low: f64,
    pub high: f64,
    /// The lower end was raised to zero.
    pub clamped: bool,
}

/// `point ± z_{(1+level)/2} · sqrt(variance_hat / n)`, lower end clamped at 0.
pub fn wald_ci(point: f64, variance_hat: f64, n: u64, level: f64) -> Result<WaldInterval> {
    if !(level > 0.0 && level < 1.0) {
        return Err(domain("wald_ci", format!("level = {level} not in (0, 1)")));
    }
    if !(variance_hat >= 0.0) {
        return Err(domain(
            "wald_ci",
            format!("variance_hat = {variance_hat} is negative"),
        ));
    }
    if n < 2 {
        return Err(domain("wald_ci", format!("n = {n}, need n >= 2")));
    }
    let z = normal_quantile((1.0 + level) / 2.0);
    let half = z * math::sqrt(variance_hat / n as f64);
    let raw_low = point - half;
    Ok(WaldInterval {
        low: raw_low.max(0.0),
        high: point + half,
        clamped: raw_low < 0.0,
    })
}

/// Standard normal CDF.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * math::erfc(-x / core::f64::consts::SQRT_2)
}

/// Standard normal quantile for `0 < p < 1`: Acklam's rational
/// approximation refined by one Halley step.
pub fn normal_quantile(p: f64) -> f64 {
    if p <= 0.0 {
        return f64::NEG_INFINITY;
    }
    if p >= 1.0 {
        return f64::INFINITY;
    }
    const A: [f64; 6] = [
        -3.969_683_028_665_376e1,
        2.209_460_984_245_205e2,
        -2.759_285_104_469_687e2,
        1.383_577_518_672_69e2,
        -3.066_479_806_614_716e1,
        2.506_628_277_459_239,
    ];
    const B: [f64; 5] = [
        -5.447_609_879_822_406e1,
        1.615_858_368_580_409e2,
        -1.556_989_798_598_866e2,
        6.680_131_188_771_972e1,
        -1.328_068_155_288_572e1,
    ];
    const C: [f64; 6] = [
        -7.784_894_002_430_293e-3,
        -3.223_964_580_411_365e-1,
        -2.400_758_277_161_838,
        -2.549_732_539_343_734,
        4.374_664_141_464_968,
        2.938_163_982_698_783,
    ];
    const D: [f64; 4] = [
        7.784_695_709_041_462e-3,
        3.224_671_290_700_398e-1,
        2.445_134_137_142_996,
        3.754_408_661_907_416,
    ];
    const LOW: f64 = 0.024_25;
    let x = if p < LOW {
        let q = math::sqrt(-2.0 * math::ln(p));
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p <= 1.0 - LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        let q = math::sqrt(-2.0 * math::ln(1.0 - p));
        -(((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    };
    let e = normal_cdf(x) - p;
    let u = e * math::sqrt(2.0 * core::f64::consts::PI) * math::exp(x * x / 2.0);
    x - u / (1.0 + x * u / 2.0)
}
