//! The integral transform `K`, the resolving operator `G = K ∘ EE`, and the
//! full linear representation assembling source, `φ0` and `φ1` terms.
//!
//! `K[v](x,t) = 2 e^{nt/2} ∫_0^t db ∫_0^{e^t-e^b} dr e^{-nb/2} v(x,r;b) E(r,t;0,b;M)`.
//!
//! Quadrature: Gauss–Legendre in `b` over `[0,t]` and in the scaled inner
//! variable `r = (e^t - e^b) u`, `u ∈ [0,1]`. The integrand is analytic on
//! the closed wedge (the kernel's hypergeometric argument stays in [0,1)
//! and the power-law factor is bounded away from its branch point), so no
//! endpoint weighting is needed. Convergence is monitored by doubling both
//! node counts until the result stabilizes.

pub mod quadrature;

use crate::kernels::{kernel_e_raw, kernel_k0, kernel_k1, CurvedMass, KernelError};
use crate::semilinear::SolutionTrace;
use crate::waveprop::{ee_propagate, GridField};
use num_complex::Complex64;
use quadrature::gl_rule_01;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TransformError {
    #[error(
        "quadrature failed to stabilize after {doublings} doublings (last relative change {last_change:.3e}, tol {tol:.3e})"
    )]
    QuadratureDivergence {
        doublings: usize,
        last_change: f64,
        tol: f64,
    },
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error("invalid problem: {0}")]
    InvalidProblem(String),
}

pub type Result<T> = std::result::Result<T, TransformError>;

/// Node counts and stabilization policy for the transform quadratures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    /// outer Gauss–Legendre count in the source time `b`
    pub nodes_b: usize,
    /// inner count in the scaled propagation radius
    pub nodes_r: usize,
    /// count for the `s`-integrals over [0, 1]
    pub nodes_s: usize,
    /// relative stabilization tolerance under node doubling
    pub tol: f64,
    pub max_doublings: usize,
    /// when false, evaluate once at the given counts (fixed discrete map)
    pub stabilize: bool,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            nodes_b: 48,
            nodes_r: 48,
            nodes_s: 64,
            tol: 1e-6,
            max_doublings: 6,
            stabilize: true,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.nodes_b < 4 || self.nodes_r < 4 || self.nodes_s < 4 {
            return Err(TransformError::InvalidProblem(
                "quadrature node counts must be >= 4".into(),
            ));
        }
        if !(self.tol > 0.0) {
            return Err(TransformError::InvalidProblem("tol must be > 0".into()));
        }
        Ok(())
    }
}

/// Linear Cauchy problem
/// `Φ_tt - nΦ_t - e^{2t}ΔΦ + m²Φ = f`, `Φ(0) = φ0`, `Φ_t(0) = φ1`.
pub struct LinearProblem<'a> {
    pub mass: CurvedMass,
    pub phi0: &'a GridField,
    pub phi1: &'a GridField,
    /// source sampled exactly at outer quadrature nodes (physical space)
    pub source: Option<&'a dyn Fn(f64) -> GridField>,
    pub t_grid: &'a [f64],
    /// Sobolev index for trace norms
    pub sobolev_s: f64,
    /// weight exponent for trace norms
    pub weight_gamma: f64,
}

/// One evaluation of the double quadrature at fixed node counts.
fn apply_k_once(
    v: &mut dyn FnMut(f64, f64) -> GridField,
    t: f64,
    mass: &CurvedMass,
    nodes_b: usize,
    nodes_r: usize,
) -> Result<GridField> {
    let n = mass.n as f64;
    let et = t.exp();
    let rule_b = gl_rule_01(nodes_b);
    let rule_r = gl_rule_01(nodes_r);

    let mut acc: Option<GridField> = None;
    for &(ub, wb) in rule_b.iter() {
        let b = t * ub;
        let edge = et - b.exp();
        if edge <= 0.0 {
            continue;
        }
        let damp = wb * t * (-0.5 * n * b).exp() * edge;
        // kernel row shared across the inner nodes
        for &(ur, wr) in rule_r.iter() {
            let r = edge * ur;
            let e = kernel_e_raw(r, t, b, mass.m)?;
            let field = v(r, b);
            let coef = Complex64::new(damp * wr, 0.0) * e;
            match &mut acc {
                None => {
                    let mut f = field;
                    f.scale(coef);
                    acc = Some(f);
                }
                Some(a) => a.add_scaled(coef, &field),
            }
        }
    }
    let mut out = match acc {
        Some(a) => a,
        None => v(0.0, 0.0), // probe for grid metadata; then zero it
    };
    if t <= 0.0 {
        out.scale(Complex64::default());
        return Ok(out);
    }
    out.scale(Complex64::new(2.0 * (0.5 * n * t).exp(), 0.0));
    Ok(out)
}

fn rel_change(a: &GridField, b: &GridField) -> f64 {
    let mut d = a.clone();
    d.add_scaled(Complex64::new(-1.0, 0.0), b);
    let nb = b.l2_norm();
    if nb == 0.0 {
        d.l2_norm()
    } else {
        d.l2_norm() / nb
    }
}

/// The integral transform `K` applied to a provider `v(x, r; b)`.
///
/// With `stabilize` set, node counts double until the result moves by less
/// than `tol` in relative L²; otherwise a single fixed-count evaluation.
pub fn apply_k(
    v: &mut dyn FnMut(f64, f64) -> GridField,
    t: f64,
    mass: &CurvedMass,
    q: &QuadratureSpec,
) -> Result<GridField> {
    q.validate()?;
    if t <= 0.0 {
        let mut probe = v(0.0, 0.0);
        probe.scale(Complex64::default());
        return Ok(probe);
    }
    let mut prev = apply_k_once(v, t, mass, q.nodes_b, q.nodes_r)?;
    if !q.stabilize {
        return Ok(prev);
    }
    let mut last_change = f64::INFINITY;
    for d in 1..=q.max_doublings {
        let cur = apply_k_once(v, t, mass, q.nodes_b << d, q.nodes_r << d)?;
        last_change = rel_change(&cur, &prev);
        prev = cur;
        if last_change <= q.tol {
            return Ok(prev);
        }
    }
    Err(TransformError::QuadratureDivergence {
        doublings: q.max_doublings,
        last_change,
        tol: q.tol,
    })
}

/// Resolving operator `G[f] = K[EE[f]]`: propagate the source slice
/// spectrally to radius `r`, then run the transform quadrature.
pub fn apply_g(
    f: &dyn Fn(f64) -> GridField,
    t: f64,
    mass: &CurvedMass,
    q: &QuadratureSpec,
) -> Result<GridField> {
    // per-b spectral cache; r sweeps reuse one forward transform
    let mut cached: Option<(f64, GridField)> = None;
    let mut provider = |r: f64, b: f64| -> GridField {
        let fresh = match &cached {
            Some((cb, _)) => (*cb - b).abs() > 0.0,
            None => true,
        };
        if fresh {
            cached = Some((b, f(b).to_spectral()));
        }
        ee_propagate(&cached.as_ref().unwrap().1, r)
    };
    let out = apply_k(&mut provider, t, mass, q)?;
    Ok(out.to_physical())
}

/// `s`-integral helper: `Σ_j w_j v(φ(t) s_j) k(φ(t) s_j) φ(t)` with the
/// propagations evaluated from a cached spectral transform of the datum.
fn s_integral(
    datum_hat: &GridField,
    t: f64,
    nodes_s: usize,
    kernel: &mut dyn FnMut(f64) -> Result<Complex64>,
) -> Result<GridField> {
    let phi_t = crate::kernels::phi(t);
    let rule = gl_rule_01(nodes_s);
    let mut acc = datum_hat.clone();
    acc.scale(Complex64::default());
    for &(s, w) in rule.iter() {
        let z = phi_t * s;
        let k = kernel(z)?;
        let v = ee_propagate(datum_hat, z);
        acc.add_scaled(Complex64::new(w * phi_t, 0.0) * k, &v);
    }
    Ok(acc)
}

/// Full linear representation at a single positive time.
fn linear_field_at(
    prob: &LinearProblem,
    t: f64,
    nodes_s: usize,
    q: &QuadratureSpec,
    phi0_hat: &GridField,
    phi1_hat: &GridField,
) -> Result<GridField> {
    let mass = &prob.mass;
    let n = mass.n as f64;
    let phi_t = crate::kernels::phi(t);

    // boundary term e^{(n-1)t/2} v_{φ0}(x, φ(t))
    let mut total = ee_propagate(phi0_hat, phi_t);
    total.scale(Complex64::new(((n - 1.0) / 2.0 * t).exp(), 0.0));

    // φ0 s-integral: e^{nt/2} ∫ v_{φ0}(φ(t)s) (2K0 - nK1) φ(t) ds
    let mut k0_k1 = |z: f64| -> Result<Complex64> {
        let k0 = kernel_k0(z, t, mass)?;
        let k1 = kernel_k1(z, t, mass)?;
        Ok(2.0 * k0 - n * k1)
    };
    let term0 = s_integral(phi0_hat, t, nodes_s, &mut k0_k1)?;
    total.add_scaled(Complex64::new((0.5 * n * t).exp(), 0.0), &term0);

    // φ1 s-integral: 2 e^{nt/2} ∫ v_{φ1}(φ(t)s) K1 φ(t) ds
    let mut k1_only = |z: f64| -> Result<Complex64> { Ok(kernel_k1(z, t, mass)?) };
    let term1 = s_integral(phi1_hat, t, nodes_s, &mut k1_only)?;
    total.add_scaled(Complex64::new(2.0 * (0.5 * n * t).exp(), 0.0), &term1);

    // source term through the resolving operator
    if let Some(src) = prob.source {
        let g = apply_g(src, t, mass, q)?;
        total.add_scaled(Complex64::new(1.0, 0.0), &g.to_spectral());
    }
    Ok(total)
}

/// Solve the linear Cauchy problem on the requested time grid.
///
/// Entries with `t = 0` report the initial datum directly; the `s`-integrals
/// stabilize under node doubling like the transform quadrature.
pub fn solve_linear(prob: &LinearProblem, q: &QuadratureSpec) -> Result<SolutionTrace> {
    q.validate()?;
    if !prob.phi0.same_grid(prob.phi1) {
        return Err(TransformError::InvalidProblem(
            "phi0/phi1 grids differ".into(),
        ));
    }
    let phi0_hat = prob.phi0.to_spectral();
    let phi1_hat = prob.phi1.to_spectral();

    let mut fields = Vec::with_capacity(prob.t_grid.len());
    for &t in prob.t_grid {
        if t < 0.0 {
            return Err(TransformError::InvalidProblem(format!(
                "negative time {t} in t_grid"
            )));
        }
        if t == 0.0 {
            fields.push(prob.phi0.clone());
            continue;
        }
        let mut prev = linear_field_at(prob, t, q.nodes_s, q, &phi0_hat, &phi1_hat)?;
        if q.stabilize {
            let mut stabilized = false;
            let mut last_change = f64::INFINITY;
            for d in 1..=q.max_doublings {
                let cur = linear_field_at(prob, t, q.nodes_s << d, q, &phi0_hat, &phi1_hat)?;
                last_change = rel_change(&cur, &prev);
                prev = cur;
                if last_change <= q.tol {
                    stabilized = true;
                    break;
                }
            }
            if !stabilized {
                return Err(TransformError::QuadratureDivergence {
                    doublings: q.max_doublings,
                    last_change,
                    tol: q.tol,
                });
            }
        }
        fields.push(prev.to_physical());
    }
    Ok(SolutionTrace::record(
        &fields,
        prob.t_grid,
        prob.sobolev_s,
        prob.weight_gamma,
        true,
    ))
}
