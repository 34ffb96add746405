//! Exact statistical decision theory at desk scale.
//!
//! The crate has two halves. [`lc`] is a truncated Levi-Civita field: formal
//! power series in a positive infinitesimal `eps` with rational coefficients
//! and rational exponents, used as a computable stand-in for the hyperreals.
//! The remaining modules work with finite decision problems over any
//! [`Scalar`] (exact rationals or [`LcNumber`]s) and decide admissibility,
//! extended admissibility and Bayes optimality with an exact-rational simplex
//! solver whose every answer carries a checkable certificate.
//!
//! Everything here is `no_std` + `alloc`; file formats and the command line
//! live in the companion `lcbayes-cli` crate.

#![no_std]

extern crate alloc;

pub mod admissibility;
pub mod decision;
mod error;
pub mod lc;
pub mod lp;
pub mod parametric;
pub mod scalar;
pub mod synthesis;

pub use error::Error;
pub use lc::{LcNumber, Valuation};
pub use scalar::{Rational, Scalar};

pub type Result<T, E = Error> = core::result::Result<T, E>;
