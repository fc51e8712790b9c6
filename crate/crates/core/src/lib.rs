//! Walk-measure evaluation of function graphs.
//!
//! A graph `y = f(x)` on `[0, a]` is scored against the one-parameter family
//! of walk measures `mu_x(., p)` through
//! `V(p) = int_0^a dx int dy (y - f(x))^n mu_x(y, p)`. The minimizing drift
//! `p_*` then yields two linear extrapolations of the graph at `b > a`.
//!
//! The numeric core is generic over [`scalar::Real`] (`f32`, `f64`); the
//! combinatorial weights are exact rationals ([`scalar::Exact`]). The aliases
//! below fix the scalar to `f64`.

// negated comparisons are deliberate: they also reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod evaluation;
pub mod extrapolate;
pub mod inner_products;
pub mod measures;
pub mod optimize;
pub mod oracle_sim;
pub mod quadrature;
pub mod scalar;
pub mod special;
pub mod wpoly;

pub use error::{Error, Result};
pub use scalar::{Exact, Real};

pub type WalkKind64 = measures::WalkKind<f64>;
pub type FunctionSpec64 = inner_products::FunctionSpec<f64>;
pub type EvalSpec64 = evaluation::EvalSpec<f64>;
pub type WPolynomial64 = wpoly::WPolynomial<f64>;
pub type MinimaReport64 = optimize::MinimaReport<f64>;
pub type ExtrapolationResult64 = extrapolate::ExtrapolationResult<f64>;
pub type Distribution64 = oracle_sim::DistributionOnZ<f64>;
