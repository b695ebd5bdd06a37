//! Per-Fourier-mode ground truth for the linear equation
//! `Φ'' - n Φ' + (m² + e^{2t} ξ²) Φ = f(t)`.
//!
//! After the substitution `u = e^{-nt/2} Φ` each mode satisfies a Bessel
//! equation in `e^t |ξ|`, giving a closed form for real curved mass; complex
//! mass or a source falls back to the adaptive Runge–Kutta path.

use super::dopri5::{self, Dopri5Options, IntegrationStatus};
use super::OracleError;
use crate::kernels::CurvedMass;
use crate::specfun::bessel_jy_with_derivatives;
use num_complex::Complex64;
use std::sync::Arc;

pub type SourceFn = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;

/// One Fourier mode of the linear Cauchy problem.
#[derive(Clone)]
pub struct ModeProblem {
    pub xi_abs: f64,
    pub mass: CurvedMass,
    /// initial `(Φ, Φ_t)` at `t = 0`
    pub data: (Complex64, Complex64),
    pub source: Option<SourceFn>,
}

impl ModeProblem {
    pub fn homogeneous(xi_abs: f64, mass: CurvedMass, data: (Complex64, Complex64)) -> Self {
        Self {
            xi_abs,
            mass,
            data,
            source: None,
        }
    }
}

/// Solve one mode on an ascending `t_grid` (entries `>= 0`).
pub fn mode_solve_linear(p: &ModeProblem, t_grid: &[f64]) -> Result<Vec<Complex64>, OracleError> {
    if p.source.is_none() && p.mass.is_real() {
        Ok(bessel_path(p, t_grid))
    } else {
        rk_path(p, t_grid, 1e-10, 1e-13)
    }
}

/// RK path with explicit tolerances (also used for cross-checks).
pub fn mode_solve_rk(
    p: &ModeProblem,
    t_grid: &[f64],
    rtol: f64,
    atol: f64,
) -> Result<Vec<Complex64>, OracleError> {
    rk_path(p, t_grid, rtol, atol)
}

fn bessel_path(p: &ModeProblem, t_grid: &[f64]) -> Vec<Complex64> {
    let n = p.mass.n as f64;
    let m = p.mass.m.re;
    let (u0, v0) = p.data;
    let xi = p.xi_abs;

    if xi == 0.0 {
        // constant coefficients, roots n/2 ± M
        if m.abs() < 1e-8 {
            // degenerate double root n/2
            let half_n = n / 2.0;
            return t_grid
                .iter()
                .map(|&t| (half_n * t).exp() * (u0 + (v0 - half_n * u0) * t))
                .collect();
        }
        let rp = n / 2.0 + m;
        let rm = n / 2.0 - m;
        let a = (v0 - rm * u0) / (2.0 * m);
        let b = (rp * u0 - v0) / (2.0 * m);
        return t_grid
            .iter()
            .map(|&t| a * (rp * t).exp() + b * (rm * t).exp())
            .collect();
    }

    // u(t) = c1 J_M(e^t ξ) + c2 Y_M(e^t ξ), fixed by (u, u_t) at t = 0
    let tau0 = xi;
    let (j0, y0, jp0, yp0) = bessel_jy_with_derivatives(m, tau0).expect("bessel at tau0");
    let up0 = v0 - n / 2.0 * u0; // u_t(0) = tau0 * du/dtau(tau0)
    let slope = up0 / tau0;
    let det = j0 * yp0 - jp0 * y0; // 2/(π tau0)
    let c1 = (u0 * y0.mul_add(0.0, yp0) - slope * y0) / det;
    let c2 = (slope * j0 - u0 * jp0) / det;
    t_grid
        .iter()
        .map(|&t| {
            let tau = t.exp() * xi;
            let (j, y, _, _) = bessel_jy_with_derivatives(m, tau).expect("bessel at tau");
            (n / 2.0 * t).exp() * (c1 * j + c2 * y)
        })
        .collect()
}

fn rk_path(
    p: &ModeProblem,
    t_grid: &[f64],
    rtol: f64,
    atol: f64,
) -> Result<Vec<Complex64>, OracleError> {
    let n = p.mass.n as f64;
    let m_sq = p.mass.m_sq;
    let xi2 = p.xi_abs * p.xi_abs;
    let src = p.source.clone();
    let opts = Dopri5Options {
        rtol,
        atol,
        ..Default::default()
    };
    let mut out = Vec::with_capacity(t_grid.len());
    let run = dopri5::integrate_path(
        move |t, y, dy| {
            dy[0] = y[1];
            let mut f = Complex64::default();
            if let Some(s) = &src {
                f = s(t);
            }
            dy[1] = n * y[1] - (m_sq + (2.0 * t).exp() * xi2) * y[0] + f;
        },
        0.0,
        t_grid,
        vec![p.data.0, p.data.1],
        &opts,
        |t, y| out.push((t, y[0])),
    );
    match run.status {
        IntegrationStatus::Reached => Ok(out.into_iter().map(|(_, v)| v).collect()),
        IntegrationStatus::StepUnderflow => Err(OracleError::StiffnessFailure {
            t: run.t,
            min_step: opts.min_step,
        }),
        s => Err(OracleError::Internal(format!(
            "mode RK terminated with {s:?} at t = {}",
            run.t
        ))),
    }
}
