//! Distribution models on the positive integers.
//!
//! Three families are supported: an explicit finite probability vector, the
//! geometric law `p(1−p)^{j−1}` and the zeta law `j^{−γ}/ζ(γ)`. Each model
//! knows its exact entropy, `Var[log p(X)]`, the tail moments
//! `Σ_j p_j^m (1−p_j)^k`, and the exact bias of the harmonic estimator
//!
//! ```text
//! Bias(n) = Σ_j p_j [ log p_j + Σ_{k=1}^{n−1} (1−p_j)^k / k ].
//! ```
//!
//! Series over the infinite families are truncated with an analytic bound on
//! the remainder (geometric), or split into an explicit head plus a tail
//! expanded in powers of `p_j` and summed with Hurwitz zeta values (zeta).

use alloc::format;
use alloc::vec::Vec;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{domain, Error, Result};
use crate::math::{self, CompensatedSum};
use crate::special::{harmonic, hurwitz_zeta_jet, log_tail_complement};

/// Absolute truncation target for tail bounds of moment series.
const BOUND_TOL: f64 = 1e-12;

/// Serializable description of a distribution, as found in config files:
/// `{"family":"finite","probs":[...]}`, `{"family":"geometric","p":0.1}` or
/// `{"family":"zeta","gamma":2.0}`.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(
    feature = "serde",
    derive(serde::Serialize, serde::Deserialize),
    serde(tag = "family", rename_all = "lowercase", deny_unknown_fields)
)]
pub enum DistributionSpec {
    Finite { probs: Vec<f64> },
    Geometric { p: f64 },
    Zeta { gamma: f64 },
}

#[derive(Clone, Debug, PartialEq)]
enum Family {
    /// Masses sorted in nonincreasing order, with their running sums.
    Finite {
        probs: Vec<f64>,
        cdf: Vec<f64>,
    },
    Geometric {
        p: f64,
    },
    /// `norm = ζ(γ)`.
    Zeta {
        gamma: f64,
        norm: f64,
    },
}

/// A probability mass function over `{1, 2, 3, …}` with nonincreasing masses.
#[derive(Clone, Debug, PartialEq)]
pub struct Pmf {
    family: Family,
    declared_alpha: f64,
}

/// An i.i.d. sample drawn from a [`Pmf`] with a fixed seed.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SampleDraw {
    pub symbols: Vec<u64>,
    pub n: u64,
    pub seed: u64,
}

impl Pmf {
    /// Finite distribution from an explicit probability vector.
    ///
    /// Entries must be positive and finite. A total within 1e-9 of one is
    /// renormalized; anything further off is rejected. The masses are stored
    /// sorted in nonincreasing order, so symbol 1 is the most likely one.
    pub fn finite(probs: impl Into<Vec<f64>>) -> Result<Self> {
        let mut probs: Vec<f64> = probs.into();
        if probs.is_empty() {
            return Err(Error::InvalidDistribution(
                "empty probability vector".into(),
            ));
        }
        if let Some(bad) = probs.iter().find(|p| !(p.is_finite() && **p > 0.0)) {
            return Err(Error::InvalidDistribution(format!(
                "probabilities must be positive and finite, found {bad}"
            )));
        }
        let total = probs.iter().copied().collect::<CompensatedSum>().value();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidDistribution(format!(
                "probabilities sum to {total}, expected 1"
            )));
        }
        for p in probs.iter_mut() {
            *p /= total;
        }
        probs.sort_by(|a, b| b.total_cmp(a));
        let mut running = CompensatedSum::new();
        let mut cdf: Vec<f64> = probs
            .iter()
            .map(|&p| {
                running.add(p);
                running.value()
            })
            .collect();
        *cdf.last_mut().expect("nonempty") = 1.0;
        Ok(Pmf {
            family: Family::Finite { probs, cdf },
            declared_alpha: 0.0,
        })
    }

    /// Uniform distribution over `support` symbols.
    pub fn uniform(support: usize) -> Result<Self> {
        if support == 0 {
            return Err(Error::InvalidDistribution(
                "uniform support must be positive".into(),
            ));
        }
        Pmf::finite(alloc::vec![1.0 / support as f64; support])
    }

    /// Geometric distribution `p(1−p)^{j−1}`, `0 < p < 1`.
    pub fn geometric(p: f64) -> Result<Self> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::InvalidDistribution(format!(
                "geometric p = {p} not in (0, 1)"
            )));
        }
        Ok(Pmf {
            family: Family::Geometric { p },
            declared_alpha: 0.0,
        })
    }

    /// Zeta distribution `j^{−γ}/ζ(γ)`, `γ > 1`.
    pub fn zeta(gamma: f64) -> Result<Self> {
        if !(gamma > 1.0) || !gamma.is_finite() {
            return Err(Error::InvalidDistribution(format!(
                "zeta gamma = {gamma} must exceed 1"
            )));
        }
        let norm = hurwitz_zeta_jet(gamma, 1.0).v;
        Ok(Pmf {
            family: Family::Zeta { gamma, norm },
            declared_alpha: 1.0 / gamma,
        })
    }

    pub fn from_spec(spec: &DistributionSpec) -> Result<Self> {
        match spec {
            DistributionSpec::Finite { probs } => Pmf::finite(probs.clone()),
            DistributionSpec::Geometric { p } => Pmf::geometric(*p),
            DistributionSpec::Zeta { gamma } => Pmf::zeta(*gamma),
        }
    }

    pub fn spec(&self) -> DistributionSpec {
        match &self.family {
            Family::Finite { probs, .. } => DistributionSpec::Finite {
                probs: probs.clone(),
            },
            Family::Geometric { p } => DistributionSpec::Geometric { p: *p },
            Family::Zeta { gamma, .. } => DistributionSpec::Zeta { gamma: *gamma },
        }
    }

    pub fn family_name(&self) -> &'static str {
        match self.family {
            Family::Finite { .. } => "finite",
            Family::Geometric { .. } => "geometric",
            Family::Zeta { .. } => "zeta",
        }
    }

    /// Tail exponent `α` with `p_j ≲ j^{−1/α}`: 0 for finite and geometric
    /// laws, `1/γ` for zeta. Reported alongside results only.
    pub fn declared_alpha(&self) -> f64 {
        self.declared_alpha
    }

    /// Sorted masses of a finite distribution.
    pub fn probs(&self) -> Option<&[f64]> {
        match &self.family {
            Family::Finite { probs, .. } => Some(probs),
            _ => None,
        }
    }

    /// Support size, `None` for infinite families.
    pub fn support_len(&self) -> Option<usize> {
        self.probs().map(<[f64]>::len)
    }

    /// True for a point mass.
    pub fn is_degenerate(&self) -> bool {
        self.support_len() == Some(1)
    }

    /// `p(j)`; zero for `j = 0` and beyond a finite support.
    pub fn mass(&self, j: u64) -> f64 {
        if j == 0 {
            return 0.0;
        }
        match &self.family {
            Family::Finite { probs, .. } => probs.get((j - 1) as usize).copied().unwrap_or(0.0),
            Family::Geometric { p } => p * math::exp((j - 1) as f64 * math::ln_1p(-p)),
            Family::Zeta { gamma, norm } => math::exp(-gamma * math::ln(j as f64)) / norm,
        }
    }

    /// `log p(j)`, `−∞` where the mass is zero.
    pub fn log_mass(&self, j: u64) -> f64 {
        if j == 0 {
            return f64::NEG_INFINITY;
        }
        match &self.family {
            Family::Finite { probs, .. } => probs
                .get((j - 1) as usize)
                .map_or(f64::NEG_INFINITY, |&p| math::ln(p)),
            Family::Geometric { p } => math::ln(*p) + (j - 1) as f64 * math::ln_1p(-p),
            Family::Zeta { gamma, norm } => -gamma * math::ln(j as f64) - math::ln(*norm),
        }
    }

    /// Shannon entropy in nats.
    pub fn entropy(&self) -> f64 {
        match &self.family {
            Family::Finite { probs, .. } => probs
                .iter()
                .map(|&p| -p * math::ln(p))
                .collect::<CompensatedSum>()
                .value(),
            Family::Geometric { p } => {
                let q = 1.0 - p;
                (-q * math::ln_1p(-p) - p * math::ln(*p)) / p
            }
            Family::Zeta { gamma, .. } => {
                // H = ln ζ(γ) − γ ζ'(γ)/ζ(γ)
                let z = hurwitz_zeta_jet(*gamma, 1.0);
                math::ln(z.v) - gamma * z.d1 / z.v
            }
        }
    }

    /// `Var[log p(X)]`, the efficiency bound for entropy estimation.
    pub fn var_log_p(&self) -> f64 {
        match &self.family {
            Family::Finite { probs, .. } => {
                let h = self.entropy();
                probs
                    .iter()
                    .map(|&p| {
                        let d = math::ln(p) + h;
                        p * d * d
                    })
                    .collect::<CompensatedSum>()
                    .value()
            }
            Family::Geometric { p } => {
                let l = math::ln_1p(-p);
                l * l * (1.0 - p) / (p * p)
            }
            Family::Zeta { gamma, .. } => {
                let z = hurwitz_zeta_jet(*gamma, 1.0);
                let r1 = z.d1 / z.v;
                gamma * gamma * (z.d2 / z.v - r1 * r1)
            }
        }
    }

    /// `Σ_j p_j^m (1−p_j)^k` for `m, k ≥ 1`.
    pub fn tail_moment(&self, m: u64, k: u64) -> Result<f64> {
        if m == 0 || k == 0 {
            return Err(domain("tail_moment", "m and k must be >= 1"));
        }
        let term = |p: f64| math::powi(p, m) * math::exp(k as f64 * math::ln_1p(-p));
        Ok(match &self.family {
            Family::Finite { probs, .. } => probs
                .iter()
                .map(|&p| term(p))
                .collect::<CompensatedSum>()
                .value(),
            Family::Geometric { p } => {
                let q = 1.0 - p;
                let qm = math::powi(q, m);
                let pm = math::powi(*p, m);
                let mut acc = CompensatedSum::new();
                let mut j = 1u64;
                loop {
                    acc.add(term(self.mass(j)));
                    // Σ_{i>j} p_i^m ≤ p^m q^{mj}/(1 − q^m)
                    let bound = pm * math::exp(j as f64 * m as f64 * math::ln_1p(-p)) / (1.0 - qm);
                    if bound == 0.0 || (bound < BOUND_TOL && bound <= 1e-15 * acc.value()) {
                        break;
                    }
                    j += 1;
                }
                acc.value()
            }
            Family::Zeta { gamma, norm } => {
                let c = 1.0 / norm;
                let head = zeta_head_len(*gamma, c, k);
                let mut acc = CompensatedSum::new();
                for j in 1..=head {
                    acc.add(term(self.mass(j)));
                }
                // Σ_{j>J} p_j^m (1−p_j)^k = Σ_r (−1)^r C(k,r) S_{m+r}
                let mut coeff = 1.0;
                let mut r = 0u64;
                loop {
                    let s = zeta_power_tail(*gamma, c, head, m + r);
                    let t = coeff * s;
                    acc.add(if r % 2 == 0 { t } else { -t });
                    if t.abs() < 1e-18 * acc.value().abs() || r >= k {
                        break;
                    }
                    coeff *= (k - r) as f64 / (r + 1) as f64;
                    r += 1;
                }
                acc.value()
            }
        })
    }

    /// Exact bias `E[Ĥ_n] − H` of the harmonic estimator at sample size `n ≥ 2`.
    ///
    /// Computed per symbol as `−p_j · Σ_{k≥n} (1−p_j)^k/k`.
    pub fn exact_bias(&self, n: u64) -> Result<f64> {
        if n < 2 {
            return Err(domain("exact_bias", format!("n = {n}, need n >= 2")));
        }
        let term = |p: f64| -p * log_tail_complement(p, n);
        Ok(match &self.family {
            Family::Finite { probs, .. } => probs
                .iter()
                .map(|&p| term(p))
                .collect::<CompensatedSum>()
                .value(),
            Family::Geometric { p } => {
                let q = 1.0 - p;
                let a = -math::ln(*p);
                let b = -math::ln_1p(-p);
                let mut acc = CompensatedSum::new();
                let mut j = 1u64;
                loop {
                    acc.add(term(self.mass(j)));
                    // Σ_{i>j} p_i (−ln p_i) = q^j [a + b (j + q/(1−q))]
                    let qj = math::exp(j as f64 * math::ln_1p(-p));
                    let bound = qj * (a + b * (j as f64 + q / p));
                    if bound == 0.0 || (bound < BOUND_TOL && bound <= 1e-15 * acc.value().abs()) {
                        break;
                    }
                    j += 1;
                }
                acc.value()
            }
            Family::Zeta { gamma, norm } => {
                let c = 1.0 / norm;
                let big_n = n - 1;
                let head = zeta_head_len(*gamma, c, big_n);
                let mut acc = CompensatedSum::new();
                for j in 1..=head {
                    acc.add(term(self.mass(j)));
                }
                // Tail: Σ_{j>J} p_j ln p_j + Σ_{j>J} p_j Σ_{k=1}^{N} (1−p_j)^k/k, the
                // partial sum expanded as J(N) + Σ_{r≥1} (−1)^r C(N,r) p^r / r.
                let z = hurwitz_zeta_jet(*gamma, head as f64 + 1.0);
                acc.add(c * math::ln(c) * z.v);
                acc.add(c * gamma * z.d1);
                acc.add(harmonic(big_n) * c * z.v);
                let mut binom = 1.0;
                for r in 1..=big_n {
                    binom *= (big_n - r + 1) as f64 / r as f64;
                    let t = binom / r as f64 * zeta_power_tail(*gamma, c, head, r + 1);
                    acc.add(if r % 2 == 0 { t } else { -t });
                    if t.abs() < 1e-18 * acc.value().abs() {
                        break;
                    }
                }
                acc.value()
            }
        })
    }

    /// One draw using `rng`.
    pub fn draw<R: RngCore + ?Sized>(&self, rng: &mut R) -> u64 {
        match &self.family {
            Family::Finite { cdf, .. } => {
                let u: f64 = rng.random();
                let idx = cdf.partition_point(|&c| c <= u);
                idx.min(cdf.len() - 1) as u64 + 1
            }
            Family::Geometric { p } => {
                // smallest j with 1 − (1−p)^j ≥ U
                let tail: f64 = 1.0 - rng.random::<f64>();
                let j = math::ceil(math::ln(tail) / math::ln_1p(-p));
                (j as u64).max(1)
            }
            Family::Zeta { gamma, .. } => sample_zeta(*gamma, rng),
        }
    }

    /// `n` i.i.d. draws from a ChaCha8 stream seeded with `seed`.
    pub fn sample(&self, n: u64, seed: u64) -> SampleDraw {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let symbols = (0..n).map(|_| self.draw(&mut rng)).collect();
        SampleDraw { symbols, n, seed }
    }
}

impl TryFrom<&DistributionSpec> for Pmf {
    type Error = Error;
    fn try_from(spec: &DistributionSpec) -> Result<Self> {
        Pmf::from_spec(spec)
    }
}

/// Exact rejection sampler for the zeta law (Devroye's algorithm). Draws that
/// would not fit in a `u64` are rejected as well.
fn sample_zeta<R: RngCore + ?Sized>(gamma: f64, rng: &mut R) -> u64 {
    let am1 = gamma - 1.0;
    let b = math::powf(2.0, am1);
    loop {
        let u: f64 = 1.0 - rng.random::<f64>();
        let v: f64 = rng.random();
        let x = math::floor(math::powf(u, -1.0 / am1));
        if !(x < 18_446_744_073_709_551_616.0) {
            continue;
        }
        let t = math::powf(1.0 + 1.0 / x, am1);
        if v * x * (t - 1.0) / (b - 1.0) <= t / b {
            return x as u64;
        }
    }
}

/// Number of explicitly summed zeta terms, chosen so `scale · p_{J+1} ≤ 0.05`.
fn zeta_head_len(gamma: f64, c: f64, scale: u64) -> u64 {
    let j = math::ceil(math::powf(20.0 * c * scale.max(1) as f64, 1.0 / gamma));
    (j as u64).max(16)
}

/// `Σ_{j>J} p_j^t = c^t ζ(γt, J+1)`.
fn zeta_power_tail(gamma: f64, c: f64, head: u64, t: u64) -> f64 {
    let ct = math::powi(c, t);
    if ct == 0.0 {
        return 0.0;
    }
    ct * hurwitz_zeta_jet(gamma * t as f64, head as f64 + 1.0).v
}
