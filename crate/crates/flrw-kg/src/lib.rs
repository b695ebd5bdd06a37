//! Solvers for the semilinear Klein-Gordon equation in the contracting
//! FLRW spacetime, built around the hypergeometric-kernel integral transform.
//!
//! The crate is organized along the pipeline:
//!
//! * [`specfun`] — Gauss hypergeometric `2F1`, complex gamma, Bessel J/Y;
//! * [`kernels`] — the transform kernels `E`, `K0`, `K1` and `phi(t) = e^t - 1`;
//! * [`waveprop`] — spectral free-wave propagation on a periodic grid;
//! * [`transform`] — the integral transform, the resolving operator
//!   `G = K ∘ EE`, and the full linear representation;
//! * [`oracle`] — independent per-mode ODE solvers and a method-of-lines
//!   time stepper used as ground truth;
//! * [`semilinear`] — the Picard fixed-point solver with weighted-norm
//!   monitoring;
//! * [`analysis`] — parameter classification, lifespan machinery, kernel
//!   bound certification and growth-exponent fits.

pub mod analysis;
pub mod kernels;
pub mod oracle;
pub mod semilinear;
pub mod specfun;
pub mod transform;
pub mod util;
pub mod waveprop;

pub use num_complex::Complex64;
