//! Exact arithmetic: cyclotomic integers and prime-field linear algebra.

mod cyclotomic;
pub mod modp;

pub use cyclotomic::{cyclotomic_polynomial, CycCoeff, Cyclotomic};

/// Cyclotomic integers with machine-word coefficients.
pub type CycInt = Cyclotomic<i64>;
