pub mod arith;
pub mod chartab;
pub mod cli;
pub mod config;
pub mod error;
pub mod finstruct;
pub mod kazhdan;
pub mod oligo;
pub mod permgrp;

pub use error::{Error, Result};

/// Exact scalar used for weights, displacements and the points of the order truncation.
pub type Rational = num_rational::Ratio<i128>;
/// Floating-point scalar for the tolerant ℓ² path.
pub type Real = f64;
