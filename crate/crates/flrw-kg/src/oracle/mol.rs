//! Method-of-lines stepper for
//! `Φ_tt - n Φ_t - e^{2t} ΔΦ + m² Φ = e^{-Γt} F(Φ)`
//! with spectral Laplacian and physical-space nonlinearity.
//!
//! Blow-up (sup-norm beyond a threshold, or step underflow while the norm
//! grows) is a data-carrying outcome, not a failure. The weighted-norm
//! escape time out of a given ball radius is recorded separately.

use super::dopri5::{self, Dopri5Options, Halt, IntegrationStatus};
use super::OracleError;
use crate::kernels::CurvedMass;
use crate::semilinear::{NonlinearitySpec, SolutionTrace};
use crate::waveprop::{mode_xi_abs, spectral_transform_inplace, GridField, Space};
use num_complex::Complex64;

#[derive(Debug, Clone, Copy)]
pub struct StepperConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_step: f64,
    pub min_step: f64,
    pub blowup_threshold: f64,
}

impl Default for StepperConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-8,
            abs_tol: 1e-10,
            max_step: 0.05,
            min_step: 1e-12,
            blowup_threshold: 1e8,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlowUp {
    /// last accepted time before the detection triggered
    pub t_last: f64,
    /// bracketing interval around the blow-up detection
    pub bracket: (f64, f64),
}

#[derive(Debug)]
pub struct MolOutcome {
    pub trace: SolutionTrace,
    pub blowup: Option<BlowUp>,
    /// first sampled time with `e^{γt} ||Φ||_{H_s} >= escape_radius`
    pub escape_time: Option<f64>,
    pub reached_t: f64,
    pub steps_accepted: usize,
}

pub struct MolProblem<'a> {
    pub mass: CurvedMass,
    pub nonlinearity: Option<NonlinearitySpec>,
    pub phi0: &'a GridField,
    pub phi1: &'a GridField,
    pub t_end: f64,
    pub sobolev_s: f64,
    pub weight_gamma: f64,
    /// weighted-norm radius whose first crossing is reported as escape
    pub escape_radius: Option<f64>,
    /// minimum spacing of trace samples (norm evaluations)
    pub sample_dt: f64,
}

pub fn mol_solve_semilinear(
    prob: &MolProblem,
    cfg: &StepperConfig,
) -> Result<MolOutcome, OracleError> {
    assert!(
        cfg.blowup_threshold >= 1e6,
        "blowup_threshold below 1e6 would flag ordinary growth"
    );
    let grid = prob.phi0;
    assert!(grid.same_grid(prob.phi1), "data grids must match");
    assert_eq!(grid.space(), Space::Physical);
    let n_pts = grid.values().len();
    let dims = grid.dims();
    let ppa = grid.points_per_axis();
    let l = grid.box_length();
    let n_dim = prob.mass.n as f64;
    let m_sq = prob.mass.m_sq;
    let spec = prob.nonlinearity;

    // y = [Φ, Π]
    let mut y0 = vec![Complex64::default(); 2 * n_pts];
    y0[..n_pts].copy_from_slice(prob.phi0.values());
    y0[n_pts..].copy_from_slice(prob.phi1.values());

    let xi_sq: Vec<f64> = (0..n_pts)
        .map(|i| {
            let xi = mode_xi_abs(i, dims, ppa, l);
            xi * xi
        })
        .collect();

    let mut lap = vec![Complex64::default(); n_pts];
    let rhs = move |t: f64, y: &[Complex64], dy: &mut [Complex64]| {
        let (phi, pi) = y.split_at(n_pts);
        // Laplacian of Φ: spectral multiply by -|ξ|²
        lap.copy_from_slice(phi);
        spectral_transform_inplace(&mut lap, ppa, dims, false);
        let scale = 1.0 / n_pts as f64;
        for (v, &x2) in lap.iter_mut().zip(&xi_sq) {
            *v *= -x2 * scale;
        }
        spectral_transform_inplace(&mut lap, ppa, dims, true);

        let e2t = (2.0 * t).exp();
        let damp = spec.map_or(0.0, |s| (-s.gamma_damp * t).exp());
        for i in 0..n_pts {
            dy[i] = pi[i];
            let mut acc = n_dim * pi[i] - m_sq * phi[i] + e2t * lap[i];
            if let Some(s) = &spec {
                acc += damp * s.eval(phi[i]);
            }
            dy[n_pts + i] = acc;
        }
    };

    let opts = Dopri5Options {
        rtol: cfg.rel_tol,
        atol: cfg.abs_tol,
        max_step: cfg.max_step,
        min_step: cfg.min_step,
        max_steps: 100_000_000,
    };

    // observer state
    let mut samples_t: Vec<f64> = Vec::new();
    let mut samples_fields: Vec<GridField> = Vec::new();
    let mut last_sample_t = f64::NEG_INFINITY;
    let mut last_t = 0.0_f64;
    let mut prev_sup = 0.0_f64;
    let mut blowup: Option<BlowUp> = None;
    let mut escape_time: Option<f64> = None;
    let threshold = cfg.blowup_threshold;

    let run = dopri5::integrate(
        rhs,
        0.0,
        prob.t_end,
        y0,
        &opts,
        |t, y| {
            let sup = y[..n_pts].iter().map(|v| v.norm()).fold(0.0, f64::max);
            if sup > threshold {
                blowup = Some(BlowUp {
                    t_last: last_t,
                    bracket: (last_t, t),
                });
                return Halt::Stop;
            }
            if t - last_sample_t >= prob.sample_dt || t >= prob.t_end {
                let mut f = GridField::zeros(dims, ppa, l);
                f.values_mut().copy_from_slice(&y[..n_pts]);
                if escape_time.is_none() {
                    if let Some(radius) = prob.escape_radius {
                        let h = crate::waveprop::sobolev_norm(&f, prob.sobolev_s);
                        if (prob.weight_gamma * t).exp() * h >= radius {
                            escape_time = Some(t);
                            samples_t.push(t);
                            samples_fields.push(f);
                            return Halt::Stop;
                        }
                    }
                }
                samples_t.push(t);
                samples_fields.push(f);
                last_sample_t = t;
            }
            prev_sup = sup;
            last_t = t;
            Halt::Continue
        },
    );

    match run.status {
        IntegrationStatus::StepUnderflow => {
            // treat as blow-up only when the norm is still increasing
            let sup = run.y[..n_pts].iter().map(|v| v.norm()).fold(0.0, f64::max);
            if sup > prev_sup {
                blowup = Some(BlowUp {
                    t_last: run.t,
                    bracket: (last_t, run.t),
                });
            } else {
                return Err(OracleError::StiffnessFailure {
                    t: run.t,
                    min_step: cfg.min_step,
                });
            }
        }
        IntegrationStatus::StepBudgetExhausted => {
            return Err(OracleError::Internal(format!(
                "step budget exhausted at t = {}",
                run.t
            )));
        }
        _ => {}
    }

    let trace = SolutionTrace::record(
        &samples_fields,
        &samples_t,
        prob.sobolev_s,
        prob.weight_gamma,
        false,
    );
    // keep only the norms alive; fields are dropped with samples_fields
    Ok(MolOutcome {
        trace,
        blowup,
        escape_time,
        reached_t: run.t,
        steps_accepted: run.steps_accepted,
    })
}

/// Convenience: fields at specific times via an exact-landing integration,
/// used for solver-vs-solver comparisons.
pub fn mol_fields_at(
    prob: &MolProblem,
    cfg: &StepperConfig,
    t_points: &[f64],
) -> Result<Vec<GridField>, OracleError> {
    let grid = prob.phi0;
    let n_pts = grid.values().len();
    let dims = grid.dims();
    let ppa = grid.points_per_axis();
    let l = grid.box_length();
    let n_dim = prob.mass.n as f64;
    let m_sq = prob.mass.m_sq;
    let spec = prob.nonlinearity;

    let mut y0 = vec![Complex64::default(); 2 * n_pts];
    y0[..n_pts].copy_from_slice(prob.phi0.values());
    y0[n_pts..].copy_from_slice(prob.phi1.values());

    let xi_sq: Vec<f64> = (0..n_pts)
        .map(|i| {
            let xi = mode_xi_abs(i, dims, ppa, l);
            xi * xi
        })
        .collect();
    let mut lap = vec![Complex64::default(); n_pts];
    let rhs = move |t: f64, y: &[Complex64], dy: &mut [Complex64]| {
        let (phi, pi) = y.split_at(n_pts);
        lap.copy_from_slice(phi);
        spectral_transform_inplace(&mut lap, ppa, dims, false);
        let scale = 1.0 / n_pts as f64;
        for (v, &x2) in lap.iter_mut().zip(&xi_sq) {
            *v *= -x2 * scale;
        }
        spectral_transform_inplace(&mut lap, ppa, dims, true);
        let e2t = (2.0 * t).exp();
        let damp = spec.map_or(0.0, |s| (-s.gamma_damp * t).exp());
        for i in 0..n_pts {
            dy[i] = pi[i];
            let mut acc = n_dim * pi[i] - m_sq * phi[i] + e2t * lap[i];
            if let Some(s) = &spec {
                acc += damp * s.eval(phi[i]);
            }
            dy[n_pts + i] = acc;
        }
    };

    let opts = Dopri5Options {
        rtol: cfg.rel_tol,
        atol: cfg.abs_tol,
        max_step: cfg.max_step,
        min_step: cfg.min_step,
        max_steps: 100_000_000,
    };
    let mut out = Vec::with_capacity(t_points.len());
    let run = dopri5::integrate_path(rhs, 0.0, t_points, y0, &opts, |_t, y| {
        let mut f = GridField::zeros(dims, ppa, l);
        f.values_mut().copy_from_slice(&y[..n_pts]);
        out.push(f);
    });
    match run.status {
        IntegrationStatus::Reached => Ok(out),
        IntegrationStatus::StepUnderflow => Err(OracleError::StiffnessFailure {
            t: run.t,
            min_step: cfg.min_step,
        }),
        s => Err(OracleError::Internal(format!("mol_fields_at: {s:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::mode::{mode_solve_linear, ModeProblem};

    #[test]
    fn zero_data_stays_zero() {
        let mass = CurvedMass::from_real(1, 1.0);
        let z = GridField::zeros(1, 32, 2.0 * std::f64::consts::PI);
        let prob = MolProblem {
            mass,
            nonlinearity: Some(NonlinearitySpec::higgs_cubic(1.0, 0.0)),
            phi0: &z,
            phi1: &z,
            t_end: 1.0,
            sobolev_s: 1.0,
            weight_gamma: 0.0,
            escape_radius: None,
            sample_dt: 0.1,
        };
        let out = mol_solve_semilinear(&prob, &StepperConfig::default()).unwrap();
        assert!(out.blowup.is_none());
        assert!(out.trace.l2.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn linear_mol_matches_mode_oracle() {
        let l = 2.0 * std::f64::consts::PI;
        let mass = CurvedMass::from_real(1, 1.0);
        let k = 2.0;
        let phi0 = GridField::from_fn(1, 32, l, |x| Complex64::new((k * x[0]).cos(), 0.0));
        let phi1 = GridField::zeros(1, 32, l);
        let prob = MolProblem {
            mass,
            nonlinearity: None,
            phi0: &phi0,
            phi1: &phi1,
            t_end: 1.5,
            sobolev_s: 1.0,
            weight_gamma: 0.0,
            escape_radius: None,
            sample_dt: 0.5,
        };
        let cfg = StepperConfig {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            ..Default::default()
        };
        let fields = mol_fields_at(&prob, &cfg, &[1.5]).unwrap();
        let hat = fields[0].to_spectral();
        // cos(kx) splits into modes ±k with coefficient 1/2
        let mode = ModeProblem::homogeneous(
            k,
            mass,
            (Complex64::new(0.5, 0.0), Complex64::default()),
        );
        let oracle = mode_solve_linear(&mode, &[1.5]).unwrap()[0];
        let got = hat.values()[2];
        assert!(
            (got - oracle).norm() < 1e-6 * oracle.norm(),
            "{got} vs {oracle}"
        );
    }

    #[test]
    fn repulsive_cubic_blows_up() {
        // constant-in-x field, focusing sign: finite-time blow-up
        let l = 2.0 * std::f64::consts::PI;
        let phi0 = GridField::from_fn(1, 16, l, |_| Complex64::new(3.0, 0.0));
        let phi1 = GridField::zeros(1, 16, l);
        let mass = CurvedMass::from_real(1, 0.5);
        let spec = NonlinearitySpec::power_signed(2.0, 1.0, 0.0);
        let prob = MolProblem {
            mass,
            nonlinearity: Some(spec),
            phi0: &phi0,
            phi1: &phi1,
            t_end: 10.0,
            sobolev_s: 0.0,
            weight_gamma: 0.0,
            escape_radius: None,
            sample_dt: 0.05,
        };
        let out = mol_solve_semilinear(&prob, &StepperConfig::default()).unwrap();
        let bl = out.blowup.expect("expected blow-up");
        assert!(bl.t_last < 2.0, "blow-up too late: {:?}", bl);
        assert!(bl.bracket.0 <= bl.t_last && bl.t_last <= bl.bracket.1);
    }

    #[test]
    fn escape_radius_detection() {
        // the mean mode grows like e^{(n/2+M)t} and escapes the ball
        let l = 2.0 * std::f64::consts::PI;
        let phi0 = GridField::from_fn(1, 16, l, |_| Complex64::new(0.01, 0.0));
        let phi1 = GridField::zeros(1, 16, l);
        let mass = CurvedMass::from_real(1, 1.0);
        let prob = MolProblem {
            mass,
            nonlinearity: None,
            phi0: &phi0,
            phi1: &phi1,
            t_end: 6.0,
            sobolev_s: 1.0,
            weight_gamma: 0.0,
            escape_radius: Some(0.1),
            sample_dt: 0.01,
        };
        let out = mol_solve_semilinear(&prob, &StepperConfig::default()).unwrap();
        assert!(out.escape_time.is_some());
    }
}
