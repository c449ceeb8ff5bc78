//! Numeric kernel: harmonic numbers, the tail of the logarithm series,
//! the dilogarithm and the Hurwitz zeta function.
//!
//! Harmonic numbers below [`HarmonicTable::DEFAULT_CAPACITY`] come from a
//! prefix-sum table built once with compensated summation; above it the
//! asymptotic expansion
//!
//! ```text
//! J(m) ≈ ln m + γ + 1/(2m) − 1/(12m²) + 1/(120m⁴)
//! ```
//!
//! is used. At the crossover the neglected term is below 1e-37.

use alloc::boxed::Box;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Sub};

use once_cell::race::OnceBox;

use crate::error::{domain, Result};
use crate::math::{self, CompensatedSum};

/// Euler–Mascheroni constant to 20 significant digits.
#[allow(clippy::excessive_precision)]
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_61;

/// ζ(2) = π²/6.
pub const ZETA_2: f64 = core::f64::consts::PI * core::f64::consts::PI / 6.0;

/// Prefix table of harmonic numbers, `values[m] = J(m)` with `J(0) = 0`.
#[derive(Clone, Debug)]
pub struct HarmonicTable {
    values: Vec<f64>,
}

impl HarmonicTable {
    /// Table size used by the process-wide table behind [`harmonic`].
    pub const DEFAULT_CAPACITY: usize = 1 << 20;

    pub fn with_capacity(capacity: usize) -> Self {
        let capacity = capacity.max(1);
        let mut values = Vec::with_capacity(capacity + 1);
        values.push(0.0);
        let mut acc = CompensatedSum::new();
        for m in 1..=capacity {
            acc.add(1.0 / m as f64);
            values.push(acc.value());
        }
        HarmonicTable { values }
    }

    /// Largest `m` served from the table.
    pub fn capacity(&self) -> usize {
        self.values.len() - 1
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `J(m)`, from the table when `m <= capacity`, asymptotically otherwise.
    #[inline]
    pub fn get(&self, m: u64) -> f64 {
        match self.values.get(m as usize) {
            Some(&v) if m <= self.capacity() as u64 => v,
            _ => harmonic_asymptotic(m),
        }
    }

    /// Copy of the table with every entry scaled by `factor`.
    ///
    /// Only meant for mutation tests of the verification suite.
    #[doc(hidden)]
    pub fn perturbed(&self, factor: f64) -> Self {
        HarmonicTable {
            values: self.values.iter().map(|v| v * factor).collect(),
        }
    }
}

static TABLE: OnceBox<HarmonicTable> = OnceBox::new();

/// The shared default-capacity table, built on first use.
pub fn harmonic_table() -> &'static HarmonicTable {
    TABLE.get_or_init(|| {
        Box::new(HarmonicTable::with_capacity(
            HarmonicTable::DEFAULT_CAPACITY,
        ))
    })
}

/// The `m`-th harmonic number `J(m) = Σ_{k=1}^m 1/k`, `J(0) = 0`.
#[inline]
pub fn harmonic(m: u64) -> f64 {
    harmonic_table().get(m)
}

/// Four-term asymptotic expansion of `J(m)`; `J(0) = 0`.
pub fn harmonic_asymptotic(m: u64) -> f64 {
    if m == 0 {
        return 0.0;
    }
    let x = m as f64;
    let inv2 = 1.0 / (x * x);
    math::ln(x) + EULER_GAMMA + 0.5 / x - inv2 / 12.0 + inv2 * inv2 / 120.0
}

/// Tail of the logarithm series, `Σ_{k≥n} x^k / k`, for `0 ≤ x < 1`, `n ≥ 1`.
///
/// Equal to `−ln(1−x) − Σ_{k=1}^{n−1} x^k/k`. The evaluation switches
/// between that closed form, a direct tail sum and a series in `1 − x` so the
/// result keeps relative accuracy even when it underflows the closed form.
pub fn log_tail_series(x: f64, n: u64) -> Result<f64> {
    if !(0.0..1.0).contains(&x) {
        return Err(domain(
            "log_tail_series",
            alloc::format!("x = {x} not in [0, 1)"),
        ));
    }
    if n == 0 {
        return Err(domain("log_tail_series", "n must be >= 1"));
    }
    if x <= 0.5 {
        Ok(tail_direct(x, math::ln(x), n))
    } else {
        Ok(log_tail_complement(1.0 - x, n))
    }
}

/// `Σ_{k≥n} (1−u)^k / k` parameterised by `u = 1 − x ∈ (0, 1]`.
///
/// Taking `u` directly keeps full precision for tiny success probabilities.
pub(crate) fn log_tail_complement(u: f64, n: u64) -> f64 {
    debug_assert!(u > 0.0 && u <= 1.0 && n >= 1);
    if u >= 0.5 {
        let x = 1.0 - u;
        return tail_direct(x, math::ln(x), n);
    }
    let x = 1.0 - u;
    let partial_terms = n - 1;
    let nu = partial_terms as f64 * u;
    if nu <= 0.05 {
        // −ln u − Σ_{k=1}^{N} (1−u)^k/k with the partial sum expanded in u:
        // Σ_{k=1}^{N} (1−u)^k/k = J(N) + Σ_{r≥1} (−1)^r C(N,r) u^r / r.
        let mut acc = CompensatedSum::new();
        acc.add(-math::ln(u));
        acc.add(-harmonic(partial_terms));
        let mut t = 1.0;
        let mut r = 1u64;
        while r <= partial_terms {
            t *= (partial_terms - r + 1) as f64 / r as f64 * u;
            let term = t / r as f64;
            // sign of −(−1)^r
            if r % 2 == 1 {
                acc.add(term);
            } else {
                acc.add(-term);
            }
            if term < 1e-18 * acc.value().abs() {
                break;
            }
            r += 1;
        }
        acc.value()
    } else if n as f64 * u >= 1.0 {
        tail_direct(x, math::ln_1p(-u), n)
    } else {
        let mut acc = CompensatedSum::new();
        acc.add(-math::ln(u));
        let mut pw = 1.0;
        for k in 1..n {
            pw *= x;
            acc.add(-pw / k as f64);
        }
        acc.value()
    }
}

/// `x^n Σ_{k≥0} x^k/(n+k)`, summed until the geometric remainder is negligible.
fn tail_direct(x: f64, ln_x: f64, n: u64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let lead = math::exp(n as f64 * ln_x);
    if lead == 0.0 {
        return 0.0;
    }
    let inv_one_minus = 1.0 / (1.0 - x);
    let mut acc = CompensatedSum::new();
    let mut pw = 1.0;
    let mut k = 0u64;
    loop {
        let term = pw / (n + k) as f64;
        acc.add(term);
        if term * inv_one_minus < 1e-18 * acc.value() {
            break;
        }
        pw *= x;
        k += 1;
    }
    lead * acc.value()
}

/// Dilogarithm `Li₂(x) = Σ_{m≥1} x^m/m²` on `[0, 1]`.
///
/// Direct series for `x ≤ 1/2`; above that the reflection
/// `Li₂(x) + Li₂(1−x) = ζ(2) − ln x · ln(1−x)`.
pub fn dilog(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(domain("dilog", alloc::format!("x = {x} not in [0, 1]")));
    }
    if x == 1.0 {
        return Ok(ZETA_2);
    }
    if x <= 0.5 {
        Ok(dilog_series(x))
    } else {
        let y = 1.0 - x;
        Ok(ZETA_2 - math::ln(x) * math::ln(y) - dilog_series(y))
    }
}

fn dilog_series(x: f64) -> f64 {
    let mut acc = CompensatedSum::new();
    let mut pw = 1.0;
    let mut m = 1u64;
    loop {
        pw *= x;
        let term = pw / (m * m) as f64;
        acc.add(term);
        if term < 1e-18 * acc.value() || pw == 0.0 {
            break;
        }
        m += 1;
    }
    acc.value()
}

/// Value with first and second derivative with respect to one parameter.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Jet {
    pub v: f64,
    pub d1: f64,
    pub d2: f64,
}

impl Jet {
    pub fn constant(v: f64) -> Self {
        Jet {
            v,
            d1: 0.0,
            d2: 0.0,
        }
    }

    pub fn variable(v: f64) -> Self {
        Jet {
            v,
            d1: 1.0,
            d2: 0.0,
        }
    }

    /// `b^(−s)` for a constant base `b > 0`, with `self` playing `s`.
    pub fn neg_pow_of(self, base: f64) -> Self {
        let l = math::ln(base);
        let v = math::exp(-self.v * l);
        // d/ds e^{−s l} = −l s' e^{−s l}
        let d1 = -l * self.d1 * v;
        let d2 = (l * l * self.d1 * self.d1 - l * self.d2) * v;
        Jet { v, d1, d2 }
    }

    pub fn recip(self) -> Self {
        let inv = 1.0 / self.v;
        Jet {
            v: inv,
            d1: -self.d1 * inv * inv,
            d2: (2.0 * self.d1 * self.d1 * inv - self.d2) * inv * inv,
        }
    }

    pub fn scale(self, c: f64) -> Self {
        Jet {
            v: self.v * c,
            d1: self.d1 * c,
            d2: self.d2 * c,
        }
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        Jet {
            v: self.v + o.v,
            d1: self.d1 + o.d1,
            d2: self.d2 + o.d2,
        }
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        Jet {
            v: self.v - o.v,
            d1: self.d1 - o.d1,
            d2: self.d2 - o.d2,
        }
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        Jet {
            v: self.v * o.v,
            d1: self.d1 * o.v + self.v * o.d1,
            d2: self.d2 * o.v + 2.0 * self.d1 * o.d1 + self.v * o.d2,
        }
    }
}

/// B₂, B₄, …, B₂₄.
const BERNOULLI_EVEN: [f64; 12] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174_611.0 / 330.0,
    854_513.0 / 138.0,
    -236_364_091.0 / 2730.0,
];

/// Hurwitz zeta `ζ(s, a) = Σ_{k≥0} (a+k)^{−s}` together with its first two
/// `s`-derivatives, by Euler–Maclaurin summation.
pub(crate) fn hurwitz_zeta_jet(s: f64, a: f64) -> Jet {
    debug_assert!(s > 1.0 && a > 0.0);
    let sj = Jet::variable(s);
    let head_terms = math::ceil(s + 15.0 - a).max(0.0) as u64;

    let mut v = CompensatedSum::new();
    let mut d1 = CompensatedSum::new();
    let mut d2 = CompensatedSum::new();
    for k in 0..head_terms {
        let t = sj.neg_pow_of(a + k as f64);
        v.add(t.v);
        d1.add(t.d1);
        d2.add(t.d2);
    }

    let b = a + head_terms as f64;
    // b^{1−s}/(s−1)
    let mut tail = sj.neg_pow_of(b).scale(b) * (sj - Jet::constant(1.0)).recip();
    // b^{−s}/2
    let b_pow = sj.neg_pow_of(b);
    tail = tail + b_pow.scale(0.5);
    // Σ B_{2i}/(2i)! · s(s+1)…(s+2i−2) · b^{−s−2i+1}
    let mut rising = sj; // s(s+1)…(s+2i−2)
    let mut fact = 2.0; // (2i)!
    let mut b_shift = b_pow.scale(1.0 / b); // b^{−s−1}
    for (i, &bern) in BERNOULLI_EVEN.iter().enumerate() {
        let i = i as u64 + 1;
        tail = tail + (rising * b_shift).scale(bern / fact);
        let next = 2 * i;
        rising =
            rising * (sj + Jet::constant(next as f64 - 1.0)) * (sj + Jet::constant(next as f64));
        fact *= ((next + 1) * (next + 2)) as f64;
        b_shift = b_shift.scale(1.0 / (b * b));
    }

    Jet {
        v: v.value() + tail.v,
        d1: d1.value() + tail.d1,
        d2: d2.value() + tail.d2,
    }
}

/// Hurwitz zeta function `ζ(s, a)` for `s > 1`, `a > 0`.
pub fn hurwitz_zeta(s: f64, a: f64) -> Result<f64> {
    if !(s > 1.0) || !(a > 0.0) {
        return Err(domain(
            "hurwitz_zeta",
            alloc::format!("need s > 1 and a > 0, got s = {s}, a = {a}"),
        ));
    }
    Ok(hurwitz_zeta_jet(s, a).v)
}

/// Riemann zeta function `ζ(s)` for `s > 1`.
pub fn zeta(s: f64) -> Result<f64> {
    hurwitz_zeta(s, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn harmonic_small_values() {
        assert_eq!(harmonic(0), 0.0);
        assert_eq!(harmonic(1), 1.0);
        assert_abs_diff_eq!(harmonic(3), 11.0 / 6.0, epsilon = 1e-15);
        let direct: f64 = (1..=10).map(|k| 1.0 / k as f64).sum();
        assert_abs_diff_eq!(harmonic(10), direct, epsilon = 1e-15);
        assert_abs_diff_eq!(harmonic(10), 2.928_968_253_968_254, epsilon = 1e-15);
    }

    #[test]
    fn table_and_asymptotic_agree_at_crossover() {
        let table = harmonic_table();
        let cap = table.capacity() as u64;
        assert_eq!(cap, 1 << 20);
        for m in [cap - 2, cap - 1, cap] {
            assert_abs_diff_eq!(table.get(m), harmonic_asymptotic(m), epsilon = 1e-12);
        }
        assert_abs_diff_eq!(
            harmonic(cap + 1) - harmonic(cap),
            1.0 / (cap + 1) as f64,
            epsilon = 1e-14
        );
    }

    #[test]
    fn table_invariants() {
        let t = HarmonicTable::with_capacity(5000);
        let v = t.values();
        assert_eq!(v[0], 0.0);
        for m in 1..v.len() {
            assert!(v[m] > v[m - 1]);
            assert!((v[m] - v[m - 1] - 1.0 / m as f64).abs() <= 1e-15 * v[m]);
        }
    }

    #[test]
    fn perturbed_table_scales_entries() {
        let t = HarmonicTable::with_capacity(10).perturbed(1.0 + 1e-6);
        assert_abs_diff_eq!(t.get(1), 1.0 + 1e-6, epsilon = 1e-15);
        assert_eq!(t.get(0), 0.0);
    }

    #[test]
    fn log_tail_examples() {
        assert_eq!(log_tail_series(0.0, 7).unwrap(), 0.0);
        assert_abs_diff_eq!(
            log_tail_series(0.5, 1).unwrap(),
            core::f64::consts::LN_2,
            epsilon = 1e-15
        );
        let brute: f64 = (2..=60).map(|k| 0.5f64.powi(k) / k as f64).sum();
        assert_abs_diff_eq!(log_tail_series(0.5, 2).unwrap(), brute, epsilon = 1e-15);
        assert_abs_diff_eq!(
            log_tail_series(0.5, 2).unwrap(),
            0.193_147_180_559_945_3,
            epsilon = 1e-15
        );
    }

    #[test]
    fn log_tail_domain_errors() {
        assert!(log_tail_series(1.0, 1).is_err());
        assert!(log_tail_series(-0.1, 1).is_err());
        assert!(log_tail_series(0.5, 0).is_err());
        assert!(log_tail_series(f64::NAN, 1).is_err());
    }

    #[test]
    fn log_tail_regimes_match_brute_force() {
        // Brute force in each regime of log_tail_complement.
        for &(u, n) in &[
            (1e-3, 20u64),
            (1e-3, 400),
            (1e-3, 5000),
            (0.2, 3),
            (0.2, 40),
            (0.01, 150),
        ] {
            let x = 1.0f64 - u;
            let mut brute = 0.0;
            let mut k = n;
            loop {
                let t = x.powi(k as i32) / k as f64;
                brute += t;
                if t < 1e-20 {
                    break;
                }
                k += 1;
            }
            let got = log_tail_complement(u, n);
            assert!(
                (got - brute).abs() <= 1e-12 * brute.max(1e-300),
                "u={u} n={n}: {got} vs {brute}"
            );
        }
    }

    #[test]
    fn dilog_examples() {
        assert_eq!(dilog(0.0).unwrap(), 0.0);
        assert_abs_diff_eq!(
            dilog(1.0).unwrap(),
            1.644_934_066_848_226_4,
            epsilon = 1e-15
        );
        let series: f64 = (1..=200).map(|m| 0.5f64.powi(m) / (m * m) as f64).sum();
        assert_abs_diff_eq!(dilog(0.5).unwrap(), series, epsilon = 1e-14);
        let reflected = ZETA_2 / 2.0 - core::f64::consts::LN_2 * core::f64::consts::LN_2 / 2.0;
        assert_abs_diff_eq!(dilog(0.5).unwrap(), reflected, epsilon = 1e-14);
        assert_abs_diff_eq!(dilog(0.5).unwrap(), 0.582_240_526_5, epsilon = 1e-10);
        assert!(dilog(1.5).is_err());
        assert!(dilog(-0.01).is_err());
    }

    #[test]
    fn dilog_matches_slow_series_near_one() {
        // Li2(0.9) via 20000 direct terms plus the geometric remainder bound.
        let x: f64 = 0.9;
        let series: f64 = (1..=2000).map(|m| x.powi(m) / (m as f64 * m as f64)).sum();
        assert_abs_diff_eq!(dilog(0.9).unwrap(), series, epsilon = 1e-12);
    }

    #[test]
    fn zeta_values() {
        assert_abs_diff_eq!(zeta(2.0).unwrap(), ZETA_2, epsilon = 1e-15);
        assert_abs_diff_eq!(
            zeta(4.0).unwrap(),
            core::f64::consts::PI.powi(4) / 90.0,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(zeta(3.0).unwrap(), 1.202_056_903_159_594_3, epsilon = 1e-15);
        // ζ(2, 11) = ζ(2) − Σ_{k≤10} k^{−2}
        let head: f64 = (1..=10).map(|k| 1.0 / (k * k) as f64).sum();
        assert_abs_diff_eq!(
            hurwitz_zeta(2.0, 11.0).unwrap(),
            ZETA_2 - head,
            epsilon = 1e-15
        );
        assert!(zeta(1.0).is_err());
    }

    #[test]
    fn zeta_derivatives() {
        // ζ'(2) and ζ''(2) reference values.
        let j = hurwitz_zeta_jet(2.0, 1.0);
        assert_abs_diff_eq!(j.d1, -0.937_548_254_315_843_8, epsilon = 1e-13);
        assert_abs_diff_eq!(j.d2, 1.989_280_234_298_901, epsilon = 1e-12);
        // finite differences at a non-integer point
        let h = 1e-4;
        let s = 2.7;
        let fd1 =
            (hurwitz_zeta(s + h, 3.5).unwrap() - hurwitz_zeta(s - h, 3.5).unwrap()) / (2.0 * h);
        assert_abs_diff_eq!(hurwitz_zeta_jet(s, 3.5).d1, fd1, epsilon = 1e-8);
    }
}
