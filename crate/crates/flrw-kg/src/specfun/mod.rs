//! Complex-parameter special functions: Gauss hypergeometric `2F1`,
//! (log-)gamma, digamma, and Bessel functions J/Y of real order.
//!
//! All routines are pure and reentrant.

mod bessel;
mod gamma;
mod hyp2f1;

pub use bessel::{bessel_jy, bessel_jy_with_derivatives};
pub use gamma::{digamma_c, gamma_c, ln_gamma_c, ln_gamma_real};
pub use hyp2f1::{gauss_sum, hyp2f1, HypArgs};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecFunError {
    #[error("series failed to converge within {max_terms} terms (|z| = {z_abs})")]
    NonConvergence { max_terms: usize, z_abs: f64 },
    #[error("invalid arguments: {0}")]
    InvalidArgs(String),
    #[error("domain error: {0}")]
    DomainError(String),
}

pub type Result<T> = std::result::Result<T, SpecFunError>;
