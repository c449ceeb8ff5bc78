//! Shannon entropy estimation for discrete distributions on the positive
//! integers, built around the harmonic-number estimator
//!
//! ```text
//! Ĥ = (1/n) Σ_i [ J(n−1) − J(m⁽ⁱ⁾ − 1) ]
//! ```
//!
//! where `J` is the harmonic number and `m⁽ⁱ⁾` the number of sample points
//! equal to the `i`-th one.
//!
//! The crate is `no_std` (it needs `alloc`). It carries:
//!
//! - [`special`]: harmonic numbers, the tail of the logarithm series, the
//!   dilogarithm and Hurwitz zeta values used by the other modules.
//! - [`dist`]: finite, geometric and zeta distribution models with exact
//!   entropy, sampling, tail moments and the exact bias of the estimator.
//! - [`estimators`]: the harmonic, plug-in, Miller-corrected and oracle
//!   estimators, the plug-in variance estimate and Wald intervals.
//! - [`oracle`]: brute-force enumeration over binomial and multinomial
//!   outcome spaces that checks the moment identities behind the estimator.
//!
//! IO, the Monte Carlo harness and the command-line tool live in the
//! companion `harmonic-entropy-harness` crate.

#![no_std]
#![warn(missing_debug_implementations)]
// Guards are written as `!(x > bound)` so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod dist;
mod error;
pub mod estimators;
mod math;
pub mod oracle;
pub mod special;

pub use dist::{DistributionSpec, Pmf, SampleDraw};
pub use error::{Error, Result};
pub use estimators::{CountsHistogram, EstimateReport, EstimatorKind, WaldInterval};
pub use oracle::{IdentityReport, LeCamReport, MomentOracle};
pub use special::{harmonic, HarmonicTable};
