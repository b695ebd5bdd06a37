//! Independent ground-truth solvers: per-mode ODE integration (closed-form
//! Bessel for real curved mass, adaptive Runge–Kutta otherwise) and a
//! method-of-lines stepper for the semilinear equation.

pub mod dopri5;
mod mode;
mod mol;

pub use dopri5::{Dopri5Options, Halt, Integration, IntegrationStatus};
pub use mode::{mode_solve_linear, mode_solve_rk, ModeProblem, SourceFn};
pub use mol::{mol_fields_at, mol_solve_semilinear, BlowUp, MolOutcome, MolProblem, StepperConfig};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("stiffness failure: step fell below {min_step} at t = {t}")]
    StiffnessFailure { t: f64, min_step: f64 },
    #[error("oracle internal error: {0}")]
    Internal(String),
}
