//! Exact enumeration oracles for the moment identities of harmonic-transformed
//! binomial and multinomial counts.
//!
//! Each `verify_*` method computes the left-hand side by brute-force
//! enumeration over the outcome space (binomial or multinomial weights from
//! log-gamma, exponentiated at the end) and the right-hand side from the
//! closed-form sums, and returns an [`IdentityReport`]. The grids in
//! [`Grid`] drive the `verify` command.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::dist::Pmf;
use crate::error::{domain, Error, Result};
use crate::math::{self, CompensatedSum};
use crate::special::{dilog, harmonic_table, log_tail_series, HarmonicTable, ZETA_2};

/// Tolerance for exact finite identities.
pub const EXACT_TOL: f64 = 1e-10;
/// Base tolerance for the infinite double series, before the tail bound.
pub const SERIES_TOL: f64 = 1e-8;

/// Largest `n` for binomial enumeration.
pub const MAX_BINOMIAL_N: u64 = 60;
/// Largest `n` for the real-parameter binomial sums.
pub const MAX_REAL_BINOMIAL_N: u64 = 40;
/// Largest `n` for the multinomial lattice.
pub const MAX_MULTINOMIAL_N: u64 = 30;
/// Cap on the number of count compositions in [`MomentOracle::exhaustive_bias`].
pub const MAX_COMPOSITIONS: f64 = 1e7;

/// Outcome of checking one instance of an identity.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct IdentityReport {
    pub identity_name: String,
    pub parameters: BTreeMap<String, f64>,
    pub lhs: f64,
    pub rhs: f64,
    pub gap: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// Extra exact quantities computed along the way (e.g. a covariance).
    #[cfg_attr(
        feature = "serde",
        serde(default, skip_serializing_if = "BTreeMap::is_empty")
    )]
    pub derived: BTreeMap<String, f64>,
}

impl IdentityReport {
    pub fn new(name: &str, parameters: &[(&str, f64)], lhs: f64, rhs: f64, tolerance: f64) -> Self {
        let gap = (lhs - rhs).abs();
        IdentityReport {
            identity_name: name.to_string(),
            parameters: parameters
                .iter()
                .map(|&(k, v)| (k.to_string(), v))
                .collect(),
            lhs,
            rhs,
            gap,
            tolerance,
            pass: gap <= tolerance,
            derived: BTreeMap::new(),
        }
    }

    fn with_derived(mut self, key: &str, value: f64) -> Self {
        self.derived.insert(key.to_string(), value);
        self
    }
}

/// Le Cam two-point computation for `p = (1/3, 2/3)` against
/// `q = ((1+ε)/3, (2−ε)/3)`.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LeCamReport {
    pub identity_name: String,
    pub epsilon: f64,
    pub n: u64,
    /// `KL(p, q)`.
    pub kl: f64,
    /// `ε²`, an upper bound for `kl`.
    pub kl_bound: f64,
    /// `H(q) − H(p)`.
    pub entropy_gap: f64,
    /// `ε ln 2 / 3 − ε²`, a lower bound for `entropy_gap`.
    pub entropy_gap_bound: f64,
    /// `(1/4) (H(p) − H(q))² e^{−n KL}`.
    pub risk_lower_bound: f64,
    pub pass: bool,
}

/// Two-point minimax lower-bound arithmetic at `ε ∈ (0,1)`, `n ≥ 1`.
pub fn lecam_two_point(epsilon: f64, n: u64) -> Result<LeCamReport> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(domain(
            "lecam_two_point",
            format!("epsilon = {epsilon} not in (0, 1)"),
        ));
    }
    if n == 0 {
        return Err(domain("lecam_two_point", "n must be >= 1"));
    }
    let p = [1.0 / 3.0, 2.0 / 3.0];
    let q = [(1.0 + epsilon) / 3.0, (2.0 - epsilon) / 3.0];
    let kl: f64 = p.iter().zip(&q).map(|(a, b)| a * math::ln(a / b)).sum();
    let entropy = |v: &[f64; 2]| -> f64 { v.iter().map(|x| -x * math::ln(*x)).sum() };
    let entropy_gap = entropy(&q) - entropy(&p);
    let kl_bound = epsilon * epsilon;
    let entropy_gap_bound = epsilon * core::f64::consts::LN_2 / 3.0 - epsilon * epsilon;
    let risk_lower_bound = 0.25 * entropy_gap * entropy_gap * math::exp(-(n as f64) * kl);
    Ok(LeCamReport {
        identity_name: "lecam_two_point".to_string(),
        epsilon,
        n,
        kl,
        kl_bound,
        entropy_gap,
        entropy_gap_bound,
        risk_lower_bound,
        pass: kl <= kl_bound && entropy_gap >= entropy_gap_bound && risk_lower_bound > 0.0,
    })
}

/// `e · ln x` with the conventions `0 · ln 0 = 0` and `ln 0 = −∞`.
fn ln_pow(x: f64, e: u64) -> f64 {
    if e == 0 {
        0.0
    } else if x == 0.0 {
        f64::NEG_INFINITY
    } else {
        e as f64 * math::ln(x)
    }
}

/// Binomial(n, p) probabilities for `m = 0..=n`, via log-gamma.
fn binomial_weights(n: u64, p: f64) -> Vec<f64> {
    (0..=n)
        .map(|m| math::exp(math::ln_binomial(n, m) + ln_pow(p, m) + ln_pow(1.0 - p, n - m)))
        .collect()
}

/// Enumeration oracle parameterised by the harmonic table it evaluates `J` with.
#[derive(Clone, Copy, Debug)]
pub struct MomentOracle<'a> {
    table: &'a HarmonicTable,
}

impl Default for MomentOracle<'static> {
    fn default() -> Self {
        MomentOracle::new()
    }
}

impl MomentOracle<'static> {
    /// Oracle over the shared default table.
    pub fn new() -> Self {
        MomentOracle {
            table: harmonic_table(),
        }
    }
}

fn check_binomial(func: &'static str, n: u64, p: f64) -> Result<()> {
    if n == 0 || n > MAX_BINOMIAL_N {
        return Err(domain(
            func,
            format!("n = {n} outside enumeration bound [1, {MAX_BINOMIAL_N}]"),
        ));
    }
    if !(p > 0.0 && p <= 1.0) {
        return Err(domain(func, format!("p = {p} not in (0, 1]")));
    }
    Ok(())
}

fn check_real_binomial(func: &'static str, n: u64, p: f64, q: f64) -> Result<()> {
    if n == 0 || n > MAX_REAL_BINOMIAL_N {
        return Err(domain(
            func,
            format!("n = {n} outside [1, {MAX_REAL_BINOMIAL_N}]"),
        ));
    }
    if !(p.is_finite() && q.is_finite()) {
        return Err(domain(func, "p and q must be finite"));
    }
    Ok(())
}

/// Tolerance `1e-10`, relative once `|lhs| > 1`.
fn scaled_tol(lhs: f64) -> f64 {
    EXACT_TOL * lhs.abs().max(1.0)
}

impl<'a> MomentOracle<'a> {
    pub fn with_table(table: &'a HarmonicTable) -> Self {
        MomentOracle { table }
    }

    fn j(&self, m: u64) -> f64 {
        self.table.get(m)
    }

    /// `E[J(M)]` for `M ~ Binomial(n, p)`, by enumeration.
    pub fn binom_expect_j(&self, n: u64, p: f64) -> Result<f64> {
        check_binomial("binom_expect_j", n, p)?;
        Ok(binomial_weights(n, p)
            .iter()
            .enumerate()
            .map(|(m, w)| w * self.j(m as u64))
            .collect::<CompensatedSum>()
            .value())
    }

    /// `E[J(n) − J(M)] = Σ_{m=1}^n (1−p)^m/m`.
    pub fn verify_prop_mathind(&self, n: u64, p: f64) -> Result<IdentityReport> {
        let lhs = self.j(n) - self.binom_expect_j(n, p)?;
        let rhs = (1..=n)
            .map(|m| math::powi(1.0 - p, m) / m as f64)
            .collect::<CompensatedSum>()
            .value();
        Ok(IdentityReport::new(
            "binomial_first_moment",
            &[("n", n as f64), ("p", p)],
            lhs,
            rhs,
            EXACT_TOL,
        ))
    }

    /// `E[(J(n) − J(M))²]` against the two double sums.
    pub fn verify_second_moment(&self, n: u64, p: f64) -> Result<IdentityReport> {
        check_binomial("verify_second_moment", n, p)?;
        let jn = self.j(n);
        let lhs = binomial_weights(n, p)
            .iter()
            .enumerate()
            .map(|(m, w)| {
                let d = jn - self.j(m as u64);
                w * d * d
            })
            .collect::<CompensatedSum>()
            .value();
        let mut rhs = CompensatedSum::new();
        for m in 2..=n {
            let pw = math::powi(1.0 - p, m);
            for k in 1..m {
                rhs.add(pw / (k * (m - k)) as f64);
            }
        }
        for m in 1..=n {
            let pw = math::powi(1.0 - p, m);
            for k in (n - m + 1)..=n {
                rhs.add(pw / (m * k) as f64);
            }
        }
        Ok(IdentityReport::new(
            "binomial_second_moment",
            &[("n", n as f64), ("p", p)],
            lhs,
            rhs.value(),
            EXACT_TOL,
        ))
    }

    /// `Σ_k J(k) C(n,k) p^k q^{n−k} = Σ_{k=1}^n [(p+q)^n − q^k (p+q)^{n−k}]/k`
    /// for arbitrary reals `p, q`.
    pub fn verify_harmonic_binomial(&self, n: u64, p: f64, q: f64) -> Result<IdentityReport> {
        check_real_binomial("verify_harmonic_binomial", n, p, q)?;
        let lhs = (0..=n)
            .map(|k| self.j(k) * math::binomial(n, k) * math::powi(p, k) * math::powi(q, n - k))
            .collect::<CompensatedSum>()
            .value();
        let s = p + q;
        let rhs = (1..=n)
            .map(|k| (math::powi(s, n) - math::powi(q, k) * math::powi(s, n - k)) / k as f64)
            .collect::<CompensatedSum>()
            .value();
        let params = [("n", n as f64), ("p", p), ("q", q)];
        Ok(IdentityReport::new(
            "harmonic_binomial_sum",
            &params,
            lhs,
            rhs,
            scaled_tol(lhs),
        ))
    }

    /// `Σ_{k=1}^n C(n,k) p^k q^{n−k}/k = Σ_{k=1}^n [(p+q)^k q^{n−k} − q^n]/k`.
    pub fn verify_reciprocal_binomial(&self, n: u64, p: f64, q: f64) -> Result<IdentityReport> {
        check_real_binomial("verify_reciprocal_binomial", n, p, q)?;
        let lhs = (1..=n)
            .map(|k| math::binomial(n, k) * math::powi(p, k) * math::powi(q, n - k) / k as f64)
            .collect::<CompensatedSum>()
            .value();
        let s = p + q;
        let qn = math::powi(q, n);
        let rhs = (1..=n)
            .map(|k| (math::powi(s, k) * math::powi(q, n - k) - qn) / k as f64)
            .collect::<CompensatedSum>()
            .value();
        let params = [("n", n as f64), ("p", p), ("q", q)];
        Ok(IdentityReport::new(
            "reciprocal_binomial_sum",
            &params,
            lhs,
            rhs,
            scaled_tol(lhs),
        ))
    }

    /// Joint moment `E[(J(n) − J(M))(J(n) − J(K))]` for
    /// `(M, K, n−M−K) ~ Multinomial(n; p, q, 1−p−q)`.
    ///
    /// The report's `derived` map carries the exact covariance and both
    /// marginal means.
    pub fn verify_multinomial_product(&self, n: u64, p: f64, q: f64) -> Result<IdentityReport> {
        const FUNC: &str = "verify_multinomial_product";
        if n == 0 || n > MAX_MULTINOMIAL_N {
            return Err(domain(
                FUNC,
                format!("n = {n} outside [1, {MAX_MULTINOMIAL_N}]"),
            ));
        }
        if !(p > 0.0 && q > 0.0) {
            return Err(domain(FUNC, "p and q must be positive"));
        }
        if p + q > 1.0 + 1e-12 {
            return Err(domain(FUNC, format!("p + q = {} exceeds 1", p + q)));
        }
        let r = (1.0 - p - q).max(0.0);
        let jn = self.j(n);
        let ln_fact = |k: u64| math::ln_gamma(k as f64 + 1.0);
        let mut joint = CompensatedSum::new();
        let mut mean_m = CompensatedSum::new();
        let mut mean_k = CompensatedSum::new();
        for m in 0..=n {
            for k in 0..=(n - m) {
                let rest = n - m - k;
                let lw = ln_fact(n) - ln_fact(m) - ln_fact(k) - ln_fact(rest)
                    + ln_pow(p, m)
                    + ln_pow(q, k)
                    + ln_pow(r, rest);
                let w = math::exp(lw);
                let dm = jn - self.j(m);
                let dk = jn - self.j(k);
                joint.add(w * dm * dk);
                mean_m.add(w * dm);
                mean_k.add(w * dk);
            }
        }
        let lhs = joint.value();

        let a = 1.0 - p / (1.0 - q);
        let b = 1.0 - q / (1.0 - p);
        let mut rhs = CompensatedSum::new();
        for m in 1..=n {
            let qm = math::powi(1.0 - q, m);
            let pm = math::powi(1.0 - p, m);
            for k in 1..=m {
                rhs.add((qm * math::powi(a, k) + pm * math::powi(b, k)) / (m * k) as f64);
            }
            rhs.add((1.0 - pm - qm) / (m * m) as f64);
        }
        let covariance = lhs - mean_m.value() * mean_k.value();
        Ok(IdentityReport::new(
            "multinomial_joint_moment",
            &[("n", n as f64), ("p", p), ("q", q)],
            lhs,
            rhs.value(),
            EXACT_TOL,
        )
        .with_derived("covariance", covariance)
        .with_derived("mean_m", mean_m.value())
        .with_derived("mean_k", mean_k.value()))
    }

    /// Harmonic-estimator bias by exact enumeration of all count compositions
    /// of a finite pmf: `E[Ĥ_n] − H`.
    pub fn exhaustive_bias(&self, pmf: &Pmf, n: u64) -> Result<f64> {
        Ok(self.exhaustive_mean(pmf, n)? - pmf.entropy())
    }

    /// `E[Ĥ_n]` by exact enumeration.
    pub fn exhaustive_mean(&self, pmf: &Pmf, n: u64) -> Result<f64> {
        const FUNC: &str = "exhaustive_bias";
        let probs = pmf
            .probs()
            .ok_or_else(|| domain(FUNC, "exhaustive enumeration needs a finite pmf"))?;
        if n < 2 {
            return Err(domain(FUNC, format!("n = {n}, need n >= 2")));
        }
        let s = probs.len() as u64;
        let compositions = math::exp(math::ln_binomial(n + s - 1, s - 1));
        if compositions > MAX_COMPOSITIONS {
            return Err(Error::EnumerationTooLarge(format!(
                "{compositions:.3e} count compositions (support {s}, n = {n})"
            )));
        }
        let ln_p: Vec<f64> = probs.iter().map(|&p| math::ln(p)).collect();
        let mut walker = CompositionWalk {
            table: self.table,
            ln_p: &ln_p,
            n,
            jn1: self.j(n - 1),
            ln_n_fact: math::ln_gamma(n as f64 + 1.0),
            acc: CompensatedSum::new(),
        };
        walker.walk(0, n, 0.0, 0.0);
        Ok(walker.acc.value())
    }

    /// Compares [`exhaustive_bias`](Self::exhaustive_bias) with [`Pmf::exact_bias`].
    pub fn verify_exact_bias(&self, pmf: &Pmf, n: u64) -> Result<IdentityReport> {
        let lhs = self.exhaustive_bias(pmf, n)?;
        let rhs = pmf.exact_bias(n)?;
        let probs = pmf.probs().expect("checked by exhaustive_bias");
        let mut params: Vec<(String, f64)> = vec![
            ("n".into(), n as f64),
            ("support".into(), probs.len() as f64),
        ];
        params.extend(
            probs
                .iter()
                .enumerate()
                .map(|(i, &p)| (format!("p{}", i + 1), p)),
        );
        let mut report = IdentityReport::new("exact_bias_enumeration", &[], lhs, rhs, EXACT_TOL);
        report.parameters = params.into_iter().collect();
        Ok(report)
    }
}

/// `Σ_{m≥1} Σ_{k>m} [(1−p)^m (1−q/(1−p))^k + (1−q)^m (1−p/(1−q))^k]/(mk)`
/// against its dilogarithm closed form, for `p, q ∈ (0,1)`, `p + q < 1`.
///
/// The outer sum stops at `truncation`; the inner sums are evaluated exactly
/// as logarithm-series tails. The analytic bound on the dropped outer terms
/// is added to the tolerance and reported as `derived.tail_bound`.
pub fn verify_sumtoint(p: f64, q: f64, truncation: u64) -> Result<IdentityReport> {
    const FUNC: &str = "verify_sumtoint";
    if !(p > 0.0 && p < 1.0 && q > 0.0 && q < 1.0 && p + q < 1.0) {
        return Err(domain(
            FUNC,
            format!("need p, q in (0,1) with p + q < 1, got p = {p}, q = {q}"),
        ));
    }
    if truncation < 1000 {
        return Err(domain(
            FUNC,
            format!("truncation = {truncation}, need >= 1000"),
        ));
    }
    let a = 1.0 - q / (1.0 - p);
    let b = 1.0 - p / (1.0 - q);
    let mut lhs = CompensatedSum::new();
    let mut pm = 1.0;
    let mut qm = 1.0;
    for m in 1..=truncation {
        pm *= 1.0 - p;
        qm *= 1.0 - q;
        let inner = pm * log_tail_series(a, m + 1)? + qm * log_tail_series(b, m + 1)?;
        lhs.add(inner / m as f64);
    }
    // Σ_{m>T} x^m/m · Σ_{k>m} y^k/k ≤ (xy)^{T+1} / ((T+1)² (1−y)(1−xy)), xy = 1−p−q
    let xy = 1.0 - p - q;
    let t1 = (truncation + 1) as f64;
    let lead = math::powi(xy, truncation + 1) / (t1 * t1 * (1.0 - xy));
    let tail_bound = lead / (1.0 - a) + lead / (1.0 - b);

    let (lp, lq) = (math::ln(p), math::ln(q));
    let rhs = lp * lq - lq * math::ln_1p(-q) - lp * math::ln_1p(-p) + ZETA_2
        - dilog(1.0 - p)?
        - dilog(1.0 - q)?;
    Ok(IdentityReport::new(
        "dilog_double_series",
        &[("p", p), ("q", q), ("truncation", truncation as f64)],
        lhs.value(),
        rhs,
        SERIES_TOL + tail_bound,
    )
    .with_derived("tail_bound", tail_bound))
}

struct CompositionWalk<'t> {
    table: &'t HarmonicTable,
    ln_p: &'t [f64],
    n: u64,
    jn1: f64,
    ln_n_fact: f64,
    acc: CompensatedSum,
}

impl CompositionWalk<'_> {
    /// Assigns counts to symbols `idx..` with `remaining` points left.
    /// `ln_w` accumulates `Σ (m_i ln p_i − ln m_i!)`, `est` accumulates
    /// `Σ m_i [J(n−1) − J(m_i−1)]`.
    fn walk(&mut self, idx: usize, remaining: u64, ln_w: f64, est: f64) {
        if idx + 1 == self.ln_p.len() {
            let m = remaining;
            let (lw, e) = self.extend(idx, m, ln_w, est);
            let weight = math::exp(self.ln_n_fact + lw);
            self.acc.add(weight * e / self.n as f64);
            return;
        }
        for m in 0..=remaining {
            let (lw, e) = self.extend(idx, m, ln_w, est);
            self.walk(idx + 1, remaining - m, lw, e);
        }
    }

    fn extend(&self, idx: usize, m: u64, ln_w: f64, est: f64) -> (f64, f64) {
        if m == 0 {
            return (ln_w, est);
        }
        let lw = ln_w + m as f64 * self.ln_p[idx] - math::ln_gamma(m as f64 + 1.0);
        let e = est + m as f64 * (self.jn1 - self.table.get(m - 1));
        (lw, e)
    }
}

/// One entry of the verification suite.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(
    feature = "serde",
    derive(serde::Serialize, serde::Deserialize),
    serde(untagged)
)]
pub enum SuiteReport {
    Identity(IdentityReport),
    LeCam(LeCamReport),
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        match self {
            SuiteReport::Identity(r) => r.pass,
            SuiteReport::LeCam(r) => r.pass,
        }
    }

    pub fn name(&self) -> &str {
        match self {
            SuiteReport::Identity(r) => &r.identity_name,
            SuiteReport::LeCam(r) => &r.identity_name,
        }
    }

    fn params(&self) -> Vec<(&str, f64)> {
        match self {
            SuiteReport::Identity(r) => {
                r.parameters.iter().map(|(k, v)| (k.as_str(), *v)).collect()
            }
            SuiteReport::LeCam(r) => vec![("epsilon", r.epsilon), ("n", r.n as f64)],
        }
    }

    /// Order by name, then parameters.
    pub fn sort_cmp(&self, other: &Self) -> Ordering {
        self.name().cmp(other.name()).then_with(|| {
            let (a, b) = (self.params(), other.params());
            for ((ka, va), (kb, vb)) in a.iter().zip(&b) {
                let o = ka.cmp(kb).then_with(|| va.total_cmp(vb));
                if o != Ordering::Equal {
                    return o;
                }
            }
            a.len().cmp(&b.len())
        })
    }
}

/// A single identity instance to check.
#[derive(Clone, Debug, PartialEq)]
pub enum Check {
    BinomialFirstMoment { n: u64, p: f64 },
    BinomialSecondMoment { n: u64, p: f64 },
    HarmonicBinomial { n: u64, p: f64, q: f64 },
    ReciprocalBinomial { n: u64, p: f64, q: f64 },
    MultinomialProduct { n: u64, p: f64, q: f64 },
    SumToInt { p: f64, q: f64, truncation: u64 },
    ExactBias { probs: Vec<f64>, n: u64 },
    LeCam { epsilon: f64, n: u64 },
}

impl Check {
    pub fn run(&self, oracle: &MomentOracle<'_>) -> Result<SuiteReport> {
        use SuiteReport::Identity;
        Ok(match self {
            Check::BinomialFirstMoment { n, p } => Identity(oracle.verify_prop_mathind(*n, *p)?),
            Check::BinomialSecondMoment { n, p } => Identity(oracle.verify_second_moment(*n, *p)?),
            Check::HarmonicBinomial { n, p, q } => {
                Identity(oracle.verify_harmonic_binomial(*n, *p, *q)?)
            }
            Check::ReciprocalBinomial { n, p, q } => {
                Identity(oracle.verify_reciprocal_binomial(*n, *p, *q)?)
            }
            Check::MultinomialProduct { n, p, q } => {
                Identity(oracle.verify_multinomial_product(*n, *p, *q)?)
            }
            Check::SumToInt { p, q, truncation } => Identity(verify_sumtoint(*p, *q, *truncation)?),
            Check::ExactBias { probs, n } => {
                Identity(oracle.verify_exact_bias(&Pmf::finite(probs.clone())?, *n)?)
            }
            Check::LeCam { epsilon, n } => SuiteReport::LeCam(lecam_two_point(*epsilon, *n)?),
        })
    }
}

/// Named verification grids.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(
    feature = "serde",
    derive(serde::Serialize, serde::Deserialize),
    serde(rename_all = "lowercase")
)]
pub enum Grid {
    Default,
    Extended,
}

/// Success probabilities for the binomial identities.
pub const DEFAULT_PROBS: [f64; 8] = [0.01, 0.05, 0.1, 0.25, 0.5, 0.75, 0.9, 0.99];
/// `(p, q)` pairs for the multinomial identity.
pub const DEFAULT_MULTINOMIAL_PAIRS: [(f64, f64); 4] =
    [(0.1, 0.1), (0.2, 0.3), (0.05, 0.6), (0.45, 0.45)];
/// `(p, q)` pairs for the real-parameter binomial sums: three probability
/// pairs and three that are not probabilities.
pub const DEFAULT_REAL_PAIRS: [(f64, f64); 6] = [
    (0.3, 0.7),
    (0.5, 0.5),
    (0.9, 0.05),
    (1.2, -0.3),
    (-0.7, 2.5),
    (3.0, 1.5),
];
/// `(p, q, truncation)` points for the dilogarithm double series.
pub const DEFAULT_SUMTOINT: [(f64, f64, u64); 3] =
    [(0.25, 0.25, 5000), (0.4, 0.5, 5000), (0.05, 0.05, 20000)];
/// Finite pmfs with support at most three for the bias oracle.
pub const SMALL_PMFS: [&[f64]; 9] = [
    &[1.0],
    &[0.5, 0.5],
    &[0.7, 0.3],
    &[0.9, 0.1],
    &[0.99, 0.01],
    &[1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0],
    &[0.5, 0.3, 0.2],
    &[0.6, 0.3, 0.1],
    &[0.8, 0.15, 0.05],
];

impl Grid {
    pub fn checks(self) -> Vec<Check> {
        let mut out = Vec::new();
        let (bin_n, probs): (u64, Vec<f64>) = match self {
            Grid::Default => (25, DEFAULT_PROBS.to_vec()),
            Grid::Extended => (
                MAX_BINOMIAL_N,
                [
                    0.001, 0.01, 0.03, 0.05, 0.1, 0.2, 0.25, 0.4, 0.5, 0.6, 0.75, 0.9, 0.99, 1.0,
                ]
                .to_vec(),
            ),
        };
        for n in 1..=bin_n {
            for &p in &probs {
                out.push(Check::BinomialFirstMoment { n, p });
                out.push(Check::BinomialSecondMoment { n, p });
            }
        }

        let real_pairs: Vec<(f64, f64, u64)> = match self {
            Grid::Default => DEFAULT_REAL_PAIRS
                .iter()
                .map(|&(p, q)| (p, q, 12))
                .collect(),
            // Alternating-sign parameters lose digits to cancellation as n
            // grows, so they stop earlier than the same-sign ones.
            Grid::Extended => DEFAULT_REAL_PAIRS
                .iter()
                .map(|&(p, q)| {
                    (
                        p,
                        q,
                        if p < 0.0 || q < 0.0 {
                            16
                        } else {
                            MAX_REAL_BINOMIAL_N
                        },
                    )
                })
                .chain([
                    (2.0, 0.25, MAX_REAL_BINOMIAL_N),
                    (0.01, 0.02, MAX_REAL_BINOMIAL_N),
                    (-0.2, 0.6, 20),
                ])
                .collect(),
        };
        for &(p, q, max_n) in &real_pairs {
            for n in 1..=max_n {
                out.push(Check::HarmonicBinomial { n, p, q });
                out.push(Check::ReciprocalBinomial { n, p, q });
            }
        }

        let (multi_n, pairs): (u64, Vec<(f64, f64)>) = match self {
            Grid::Default => (12, DEFAULT_MULTINOMIAL_PAIRS.to_vec()),
            Grid::Extended => (
                MAX_MULTINOMIAL_N,
                DEFAULT_MULTINOMIAL_PAIRS
                    .iter()
                    .copied()
                    .chain([(0.01, 0.02), (0.3, 0.7), (0.6, 0.05), (0.25, 0.25)])
                    .collect(),
            ),
        };
        for n in 1..=multi_n {
            for &(p, q) in &pairs {
                out.push(Check::MultinomialProduct { n, p, q });
            }
        }

        let sumtoint: Vec<(f64, f64, u64)> = match self {
            Grid::Default => DEFAULT_SUMTOINT.to_vec(),
            Grid::Extended => DEFAULT_SUMTOINT
                .iter()
                .copied()
                .chain([
                    (0.1, 0.2, 5000),
                    (0.01, 0.3, 50_000),
                    (0.7, 0.2, 2000),
                    (0.02, 0.02, 50_000),
                    (0.33, 0.33, 5000),
                ])
                .collect(),
        };
        for (p, q, truncation) in sumtoint {
            out.push(Check::SumToInt { p, q, truncation });
        }

        let (max_bias_n, pmfs): (u64, Vec<Vec<f64>>) = match self {
            Grid::Default => (6, SMALL_PMFS.iter().map(|p| p.to_vec()).collect()),
            Grid::Extended => (
                9,
                SMALL_PMFS
                    .iter()
                    .map(|p| p.to_vec())
                    .chain([
                        vec![0.4, 0.3, 0.2, 0.1],
                        vec![0.25; 4],
                        vec![0.5, 0.2, 0.15, 0.1, 0.05],
                    ])
                    .collect(),
            ),
        };
        for probs in &pmfs {
            for n in 2..=max_bias_n {
                out.push(Check::ExactBias {
                    probs: probs.clone(),
                    n,
                });
            }
        }

        let lecam_eps: &[f64] = match self {
            Grid::Default => &[0.05, 0.1, 0.25, 0.5, 0.9],
            Grid::Extended => &[0.001, 0.01, 0.05, 0.1, 0.2, 0.25, 0.4, 0.5, 0.75, 0.9, 0.99],
        };
        for &epsilon in lecam_eps {
            out.push(Check::LeCam { epsilon, n: 100 });
        }
        for n in [4u64, 100, 400, 10_000] {
            out.push(Check::LeCam {
                epsilon: 1.0 / math::sqrt(n as f64),
                n,
            });
        }
        out
    }
}

/// Runs every check of `grid` in order, returning the reports sorted by
/// identity name and parameters.
pub fn run_grid(grid: Grid, oracle: &MomentOracle<'_>) -> Result<Vec<SuiteReport>> {
    let mut reports = grid
        .checks()
        .iter()
        .map(|c| c.run(oracle))
        .collect::<Result<Vec<_>>>()?;
    reports.sort_by(SuiteReport::sort_cmp);
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn oracle() -> MomentOracle<'static> {
        MomentOracle::new()
    }

    #[test]
    fn binom_expect_examples() {
        let o = oracle();
        for p in [0.1, 0.37, 1.0] {
            assert_abs_diff_eq!(o.binom_expect_j(1, p).unwrap(), p, epsilon = 1e-15);
        }
        assert_abs_diff_eq!(o.binom_expect_j(2, 0.5).unwrap(), 0.875, epsilon = 1e-15);
        assert_abs_diff_eq!(o.binom_expect_j(2, 1.0).unwrap(), 1.5, epsilon = 1e-15);
        assert!(o.binom_expect_j(61, 0.5).is_err());
        assert!(o.binom_expect_j(0, 0.5).is_err());
        assert!(o.binom_expect_j(5, 0.0).is_err());
    }

    #[test]
    fn first_moment_examples() {
        let o = oracle();
        let r = o.verify_prop_mathind(2, 0.5).unwrap();
        assert_abs_diff_eq!(r.lhs, 0.625, epsilon = 1e-15);
        assert_abs_diff_eq!(r.rhs, 0.625, epsilon = 1e-15);
        assert!(r.pass);
        let r = o.verify_prop_mathind(5, 1.0).unwrap();
        assert_eq!((r.lhs, r.rhs, r.pass), (0.0, 0.0, true));
        assert!(o.verify_prop_mathind(25, 0.03).unwrap().pass);
    }

    #[test]
    fn second_moment_examples() {
        let o = oracle();
        let r = o.verify_second_moment(1, 0.5).unwrap();
        assert_abs_diff_eq!(r.lhs, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(r.rhs, 0.5, epsilon = 1e-15);
        let r = o.verify_second_moment(1, 1.0).unwrap();
        assert_eq!((r.lhs, r.rhs, r.pass), (0.0, 0.0, true));
        assert!(o.verify_second_moment(20, 0.1).unwrap().pass);
    }

    #[test]
    fn real_binomial_examples() {
        let o = oracle();
        let r = o.verify_harmonic_binomial(1, 0.3, 0.7).unwrap();
        assert_abs_diff_eq!(r.lhs, 0.3, epsilon = 1e-15);
        assert_abs_diff_eq!(r.rhs, 0.3, epsilon = 1e-15);
        assert!(o.verify_harmonic_binomial(3, 0.5, 0.5).unwrap().pass);
        assert!(o.verify_harmonic_binomial(4, 1.2, -0.3).unwrap().pass);

        let r = o.verify_reciprocal_binomial(1, 0.4, 0.6).unwrap();
        assert_abs_diff_eq!(r.lhs, 0.4, epsilon = 1e-15);
        assert_abs_diff_eq!(r.rhs, 0.4, epsilon = 1e-15);
        let r = o.verify_reciprocal_binomial(2, 0.5, 0.5).unwrap();
        assert_abs_diff_eq!(r.lhs, 0.625, epsilon = 1e-15);
        assert!(r.pass);
        assert!(o.verify_reciprocal_binomial(5, 0.9, 0.05).unwrap().pass);
        assert!(o.verify_reciprocal_binomial(41, 0.9, 0.05).is_err());
    }

    #[test]
    fn multinomial_examples() {
        let o = oracle();
        let r = o.verify_multinomial_product(1, 0.3, 0.2).unwrap();
        assert_abs_diff_eq!(r.lhs, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(r.rhs, 0.5, epsilon = 1e-15);
        // n = 1: cov = (1−p−q) − (1−p)(1−q) = −pq
        assert_abs_diff_eq!(r.derived["covariance"], -0.06, epsilon = 1e-15);
        let r = o.verify_multinomial_product(1, 0.5, 0.5).unwrap();
        assert_abs_diff_eq!(r.lhs, 0.0, epsilon = 1e-15);
        assert!(r.pass);
        assert!(o.verify_multinomial_product(12, 0.2, 0.3).unwrap().pass);
        assert!(o.verify_multinomial_product(3, 0.7, 0.5).is_err());
        assert!(o.verify_multinomial_product(31, 0.1, 0.1).is_err());
    }

    #[test]
    fn sumtoint_examples() {
        for &(p, q, t) in &DEFAULT_SUMTOINT {
            let r = verify_sumtoint(p, q, t).unwrap();
            assert!(r.pass, "{r:?}");
        }
        // closed form against high-precision reference values
        assert_abs_diff_eq!(
            verify_sumtoint(0.25, 0.25, 5000).unwrap().rhs,
            0.812_183_266_990_044_5,
            epsilon = 1e-13
        );
        assert_abs_diff_eq!(
            verify_sumtoint(0.05, 0.05, 20000).unwrap().rhs,
            7.430_756_372_893_729,
            epsilon = 1e-12
        );
        assert!(verify_sumtoint(0.6, 0.5, 5000).is_err());
        assert!(verify_sumtoint(0.2, 0.2, 10).is_err());
    }

    #[test]
    fn lecam_examples() {
        let r = lecam_two_point(0.5, 100).unwrap();
        assert_abs_diff_eq!(r.kl, 0.056_633, epsilon = 1e-6);
        assert!(r.kl <= 0.25 && r.pass);
        let r = lecam_two_point(1e-9, 1).unwrap();
        assert!(r.entropy_gap.abs() < 1e-8);
        // ε = 1/√n, n = 100: the bound implied by the two inequalities is
        // (1/4)(ln 2/(3·10) − 1/100)² e^{−1}.
        let r = lecam_two_point(0.1, 100).unwrap();
        let implied = 0.25 * (core::f64::consts::LN_2 / 30.0 - 0.01).powi(2) * (-1.0f64).exp();
        assert!(r.risk_lower_bound > 0.0);
        assert!(r.risk_lower_bound >= implied * (1.0 - 1e-12));
        assert_abs_diff_eq!(
            r.risk_lower_bound,
            8.359_374_549_595_757e-5,
            epsilon = 1e-15
        );
        assert!(lecam_two_point(0.0, 10).is_err());
        assert!(lecam_two_point(1.0, 10).is_err());
        assert!(lecam_two_point(0.5, 0).is_err());
    }

    #[test]
    fn exhaustive_bias_examples() {
        let o = oracle();
        assert_abs_diff_eq!(
            o.exhaustive_bias(&Pmf::finite([1.0]).unwrap(), 4).unwrap(),
            0.0,
            epsilon = 1e-15
        );
        let half = Pmf::finite([0.5, 0.5]).unwrap();
        assert_abs_diff_eq!(o.exhaustive_mean(&half, 2).unwrap(), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(
            o.exhaustive_bias(&half, 2).unwrap(),
            -0.193_147_180_6,
            epsilon = 1e-10
        );
        let three = Pmf::finite([0.5, 0.3, 0.2]).unwrap();
        assert_abs_diff_eq!(
            o.exhaustive_bias(&three, 5).unwrap(),
            three.exact_bias(5).unwrap(),
            epsilon = 1e-10
        );
        assert!(o.exhaustive_bias(&Pmf::geometric(0.5).unwrap(), 3).is_err());
        assert!(matches!(
            o.exhaustive_bias(&Pmf::uniform(50).unwrap(), 40),
            Err(Error::EnumerationTooLarge(_))
        ));
    }

    #[test]
    fn perturbed_table_breaks_identities() {
        let table = harmonic_table().perturbed(1.0 + 1e-6);
        let o = MomentOracle::with_table(&table);
        assert!(!o.verify_prop_mathind(10, 0.3).unwrap().pass);
        assert!(!o.verify_second_moment(10, 0.3).unwrap().pass);
    }

    #[test]
    fn default_grid_shape() {
        let checks = Grid::Default.checks();
        let count = |f: fn(&Check) -> bool| checks.iter().filter(|c| f(c)).count();
        assert_eq!(
            count(|c| matches!(c, Check::BinomialFirstMoment { .. })),
            200
        );
        assert_eq!(
            count(|c| matches!(c, Check::BinomialSecondMoment { .. })),
            200
        );
        assert_eq!(count(|c| matches!(c, Check::HarmonicBinomial { .. })), 72);
        assert_eq!(count(|c| matches!(c, Check::MultinomialProduct { .. })), 48);
        assert_eq!(count(|c| matches!(c, Check::SumToInt { .. })), 3);
        assert_eq!(count(|c| matches!(c, Check::ExactBias { .. })), 45);
    }
}
