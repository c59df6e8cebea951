//! Exact discrete fractional operators on ℤ and a verification harness for
//! their weighted endpoint inequalities.
//!
//! The crate is organised bottom-up:
//!
//! - [`lattice`]: sequences, intervals, weights and compensated window sums.
//! - [`operators`]: the centered and noncentral fractional maximal operators
//!   and the discrete Riesz potential, evaluated exactly on finitely
//!   supported sequences.
//! - [`weights`]: scanned Muckenhoupt `A_p`, `A(p,q)` and reverse-Hölder
//!   constants.
//! - [`covering`]: the one-dimensional bounded-overlap covering selection.
//! - [`functionals`]: weighted norms, weak quasinorms, oscillations and the
//!   `L log⁺ L` and exponential functionals.
//! - [`harness`]: theorem-by-theorem checks, input families, certified
//!   `ℓ^q` tails, regression baselines and the acceptance battery.
//!
//! ```
//! use zharm::lattice::FiniteSequence;
//! use zharm::operators::{maximal_centered, riesz};
//!
//! let delta = FiniteSequence::delta(0);
//! assert_eq!(maximal_centered(&delta, 0.5, 0).unwrap(), 1.0);
//! assert!((riesz(&delta, 0.5, 4).unwrap() - 0.5).abs() < 1e-15);
//! ```

#![forbid(unsafe_code)]
// `!(x > 0.0)` style guards are how NaN gets rejected here.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod covering;
pub mod error;
pub mod functionals;
pub mod harness;
pub mod lattice;
pub mod operators;
pub mod weights;

pub use error::{Error, Result};
pub use lattice::{
    dilate, weight_eval, weight_sum, Exponent, Exponents, FiniteSequence, IntegerInterval, Profile,
    Samples, SymmetricInterval, WeightSpec,
};
pub use operators::{Kind, OperatorResult};
pub use weights::{ConstantEstimate, ScanRange};

/// Relative slack applied to every strict pass/fail inequality check.
pub const STRICT_SLACK: f64 = 1e-12;
