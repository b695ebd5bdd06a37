//! Parameter classification (global existence vs finite lifespan), the
//! lifespan growth function `I(t)` and its inverse, kernel bound
//! certification, and decay-exponent fitting.

use crate::kernels::{kernel_k0, kernel_k1, phi, CurvedMass, KernelError};
use crate::semilinear::{NonlinearitySpec, SolutionTrace};
use crate::transform::quadrature::gl_rule_01;
use crate::util::{lsq_slope, pairwise_sum};
use num_complex::Complex64;
use rand_core::{RngCore, SeedableRng};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("inapplicable parameters: {0}")]
    Inapplicable(String),
    #[error("I(t) is bounded in this regime (case {case:?}); no inverse exists")]
    NotInvertible { case: CaseLabel },
    #[error("window holds fewer than 4 usable samples")]
    DegenerateWindow,
    #[error("quadrature failed to stabilize (last change {0:.3e})")]
    QuadratureDivergence(f64),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

pub type Result<T> = std::result::Result<T, AnalysisError>;

/// Full parameter set of a model run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub n: u32,
    pub m_sq: Complex64,
    pub alpha: f64,
    /// weight exponent γ of the solution space
    pub gamma: f64,
    /// damping exponent Γ of the nonlinearity
    pub gamma_damp: f64,
    /// Sobolev index s
    pub s: f64,
    pub nonlinearity: NonlinearitySpec,
}

impl ModelParams {
    pub fn curved_mass(&self) -> CurvedMass {
        CurvedMass::new(self.n, self.m_sq)
    }

    pub fn with_curved_mass(n: u32, m: f64, alpha: f64, gamma: f64, gamma_damp: f64, s: f64) -> Self {
        let cm = CurvedMass::from_real(n, m);
        Self {
            n,
            m_sq: cm.m_sq,
            alpha,
            gamma,
            gamma_damp,
            s,
            nonlinearity: NonlinearitySpec::power_signed(alpha, 0.0, gamma_damp),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseLabel {
    I,
    II,
    III,
    IV,
    V,
    VI,
    Boundary,
    Inapplicable,
}

impl CaseLabel {
    /// Global-existence side of the classification?
    pub fn is_global(&self) -> bool {
        matches!(self, CaseLabel::I | CaseLabel::II | CaseLabel::III)
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            CaseLabel::I => "i",
            CaseLabel::II => "ii",
            CaseLabel::III => "iii",
            CaseLabel::IV => "iv",
            CaseLabel::V => "v",
            CaseLabel::VI => "vi",
            CaseLabel::Boundary => "boundary",
            CaseLabel::Inapplicable => "inapplicable",
        }
    }
}

/// The three classification expressions, evaluated in their stated form:
/// the first with `Re M`, the second with `max{1/2, Re M}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Slacks {
    /// `n/2 + Re M + γ(α+1) + Γ`
    pub growth_balance: f64,
    /// `n/2 + max{1/2, Re M} + γ`
    pub weight_margin: f64,
    /// `γα + Γ`
    pub damping_margin: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionVerdict {
    /// headline verdict following the stated global-existence conditions
    pub case: CaseLabel,
    /// integral-equation cases (i0)-(vi0), using `Re M` throughout
    pub case_integral_eq: CaseLabel,
    /// six-case partition with `max{1/2, Re M}`; governs `I(t)` boundedness
    pub case_bound_regime: CaseLabel,
    pub slacks: Slacks,
    pub applicable: bool,
}

const EQ_TOL: f64 = 1e-12;

/// Exhaustive six-case partition of the classification inequalities for a
/// effective mass parameter.
fn case_partition(n: u32, m_eff: f64, alpha: f64, gamma: f64, gamma_damp: f64) -> CaseLabel {
    let half_n = n as f64 / 2.0;
    let e1 = half_n + m_eff + gamma * (alpha + 1.0) + gamma_damp;
    let e2 = half_n + m_eff + gamma;
    let e3 = gamma * alpha + gamma_damp;
    if e1 > EQ_TOL {
        if e2 > EQ_TOL {
            CaseLabel::IV
        } else {
            CaseLabel::I
        }
    } else if e1 < -EQ_TOL {
        if e3 >= -EQ_TOL {
            CaseLabel::III
        } else {
            CaseLabel::VI
        }
    } else if e2 < -EQ_TOL {
        CaseLabel::II
    } else {
        CaseLabel::V
    }
}

/// Classify the parameters against the global-existence conditions
/// (i)-(iii) and the finite-lifespan cases (iv)-(vi).
pub fn classify(params: &ModelParams) -> ConditionVerdict {
    let mass = params.curved_mass();
    let rm = mass.re();
    let half_n = params.n as f64 / 2.0;
    let m_max = rm.max(0.5);
    let slacks = Slacks {
        growth_balance: half_n + rm + params.gamma * (params.alpha + 1.0) + params.gamma_damp,
        weight_margin: half_n + m_max + params.gamma,
        damping_margin: params.gamma * params.alpha + params.gamma_damp,
    };
    if !mass.theorem_applicable() {
        return ConditionVerdict {
            case: CaseLabel::Inapplicable,
            case_integral_eq: CaseLabel::Inapplicable,
            case_bound_regime: CaseLabel::Inapplicable,
            slacks,
            applicable: false,
        };
    }

    let e1 = slacks.growth_balance;
    let e2 = slacks.weight_margin;
    let e3 = slacks.damping_margin;
    // global-existence conditions: first expression with Re M, second with max
    let case = if e1 > EQ_TOL && e2 <= EQ_TOL {
        CaseLabel::I
    } else if e1.abs() <= EQ_TOL && e2 < -EQ_TOL {
        CaseLabel::II
    } else if e1 < -EQ_TOL && e2 <= EQ_TOL && e3 >= -EQ_TOL {
        CaseLabel::III
    } else {
        // finite-lifespan side follows the six-case partition with the max
        match case_partition(params.n, m_max, params.alpha, params.gamma, params.gamma_damp) {
            c @ (CaseLabel::IV | CaseLabel::V | CaseLabel::VI) => c,
            // a thin band where the mixed printed forms cover no case
            _ => CaseLabel::Boundary,
        }
    };

    ConditionVerdict {
        case,
        case_integral_eq: case_partition(params.n, rm, params.alpha, params.gamma, params.gamma_damp),
        case_bound_regime: case_partition(params.n, m_max, params.alpha, params.gamma, params.gamma_damp),
        slacks,
        applicable: true,
    }
}

/// Growth function
/// `I(t) = e^{t(n/2+max{1/2,ReM}+γ)} ∫_0^t e^{-(n/2+max{1/2,ReM}+γ(α+1)+Γ)b} db`
/// in closed form.
pub fn lifespan_i(t: f64, params: &ModelParams) -> f64 {
    assert!(t >= 0.0);
    let rm = params.curved_mass().re();
    let m_max = rm.max(0.5);
    let half_n = params.n as f64 / 2.0;
    let a = half_n + m_max + params.gamma;
    let b = half_n + m_max + params.gamma * (params.alpha + 1.0) + params.gamma_damp;
    if b.abs() <= 1e-14 {
        (a * t).exp() * t
    } else {
        ((a * t).exp() - ((a - b) * t).exp()) / b
    }
}

/// Inverse of `I(t)`: the `t` with `|I(t) - y| <= 1e-10 y`, by bracketing
/// bisection. Only defined in the unbounded cases (iv)-(vi).
pub fn lifespan_inverse(y: f64, params: &ModelParams) -> Result<f64> {
    assert!(y > 0.0, "lifespan_inverse needs y > 0");
    let verdict = classify(params);
    if !matches!(
        verdict.case_bound_regime,
        CaseLabel::IV | CaseLabel::V | CaseLabel::VI
    ) {
        return Err(AnalysisError::NotInvertible {
            case: verdict.case_bound_regime,
        });
    }
    let mut hi = 1.0;
    let mut guard = 0;
    while lifespan_i(hi, params) < y {
        hi *= 2.0;
        guard += 1;
        if guard > 60 {
            return Err(AnalysisError::NotInvertible {
                case: verdict.case_bound_regime,
            });
        }
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if lifespan_i(mid, params) < y {
            lo = mid;
        } else {
            hi = mid;
        }
        if (lifespan_i(hi, params) - y).abs() <= 1e-10 * y {
            return Ok(hi);
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Lifespan lower bound `inverse_I(C * data_norm^{-α})` with an empirically
/// calibrated constant `C`.
pub fn lifespan_lower_bound(params: &ModelParams, data_norm: f64, c_calibrated: f64) -> Result<f64> {
    assert!(data_norm > 0.0 && c_calibrated > 0.0);
    lifespan_inverse(c_calibrated * data_norm.powf(-params.alpha), params)
}

/// Certification report for one kernel integral bound.
#[derive(Debug, Clone)]
pub struct BoundReport {
    pub t_grid: Vec<f64>,
    pub integrals: Vec<f64>,
    pub bounds: Vec<f64>,
    pub ratios: Vec<f64>,
    /// empirical bound constant: sup over the grid of integral/bound
    pub sup_ratio: f64,
    /// max relative movement of the ratios under node doubling
    pub refinement_drift: f64,
    /// fitted slope of `ln ∫` vs `ln t` over grid entries in (0, 1)
    pub small_t_slope: Option<f64>,
}

fn weighted_kernel_integral(
    a: f64,
    mass: &CurvedMass,
    t: f64,
    nodes: usize,
    use_k0: bool,
) -> Result<f64> {
    // ∫_0^1 φ^a s^a |K(φ s, t)| φ ds with the s = σ^{1/(1+a)} substitution
    // soaking up the algebraic endpoint factor
    let p = phi(t);
    let rule = gl_rule_01(nodes);
    let inv = 1.0 / (1.0 + a);
    let vals: Vec<f64> = rule
        .iter()
        .map(|&(sig, w)| {
            let s = sig.powf(inv);
            let z = p * s;
            let k = if use_k0 {
                kernel_k0(z, t, mass)
            } else {
                kernel_k1(z, t, mass)
            };
            match k {
                Ok(v) => Ok(w * v.norm()),
                Err(KernelError::SingularBoundary(_)) => Ok(0.0),
                Err(e) => Err(AnalysisError::from(e)),
            }
        })
        .collect::<Result<_>>()?;
    Ok(p.powf(a + 1.0) * inv * pairwise_sum(&vals))
}

fn certify_bound(
    a: f64,
    mass: &CurvedMass,
    t_grid: &[f64],
    base_nodes: usize,
    use_k0: bool,
    bound_fn: impl Fn(f64) -> f64,
) -> Result<BoundReport> {
    assert!(a > -1.0, "the weighted integral requires a > -1");
    assert!(mass.re() > 0.0, "the bound requires Re M > 0");
    let mut integrals = Vec::with_capacity(t_grid.len());
    let mut fine = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        assert!(t > 0.0, "t_grid must be positive");
        integrals.push(weighted_kernel_integral(a, mass, t, base_nodes, use_k0)?);
        fine.push(weighted_kernel_integral(a, mass, t, base_nodes * 2, use_k0)?);
    }
    let bounds: Vec<f64> = t_grid.iter().map(|&t| bound_fn(t)).collect();
    let ratios: Vec<f64> = fine.iter().zip(&bounds).map(|(i, b)| i / b).collect();
    let coarse_ratios: Vec<f64> = integrals.iter().zip(&bounds).map(|(i, b)| i / b).collect();
    let refinement_drift = ratios
        .iter()
        .zip(&coarse_ratios)
        .map(|(f, c)| (f - c).abs() / f.abs().max(1e-300))
        .fold(0.0, f64::max);
    let sup_ratio = ratios.iter().copied().fold(0.0, f64::max);

    let small: Vec<(f64, f64)> = t_grid
        .iter()
        .zip(&fine)
        .filter(|(&t, _)| t < 1.0)
        .map(|(&t, &v)| (t.ln(), v.ln()))
        .collect();
    let small_t_slope = if small.len() >= 4 {
        let xs: Vec<f64> = small.iter().map(|p| p.0).collect();
        let ys: Vec<f64> = small.iter().map(|p| p.1).collect();
        Some(lsq_slope(&xs, &ys))
    } else {
        None
    };

    Ok(BoundReport {
        t_grid: t_grid.to_vec(),
        integrals: fine,
        bounds,
        ratios,
        sup_ratio,
        refinement_drift,
        small_t_slope,
    })
}

/// Certify `∫_0^1 φ^a s^a |K1(φ(t)s, t)| φ ds <= C_M e^{-ReM t}(e^t-1)^{a+1}(e^t+1)^{2ReM-1}`.
pub fn certify_k1_bound(
    a: f64,
    mass: &CurvedMass,
    t_grid: &[f64],
    base_nodes: usize,
) -> Result<BoundReport> {
    let rm = mass.re();
    certify_bound(a, mass, t_grid, base_nodes, false, move |t| {
        let et = t.exp();
        (-rm * t).exp() * (et - 1.0).powf(a + 1.0) * (et + 1.0).powf(2.0 * rm - 1.0)
    })
}

/// Certify the `K0` bound
/// `(e^t-1)^{a+1}(e^t+1)^{ReM-1} × {1 if ReM>1/2; t^{sgn|ImM|}+e^{(1/2-ReM)t} otherwise}`.
///
/// The `t^{sgn|Im M|}` factor reads: present iff `Im M != 0`.
pub fn certify_k0_bound(
    a: f64,
    mass: &CurvedMass,
    t_grid: &[f64],
    base_nodes: usize,
) -> Result<BoundReport> {
    let rm = mass.re();
    let has_im = !mass.is_real();
    certify_bound(a, mass, t_grid, base_nodes, true, move |t| {
        let et = t.exp();
        let extra = if rm > 0.5 {
            1.0
        } else {
            let t_factor = if has_im { t } else { 1.0 };
            t_factor + ((0.5 - rm) * t).exp()
        };
        (et - 1.0).powf(a + 1.0) * (et + 1.0).powf(rm - 1.0) * extra
    })
}

/// Least-squares growth exponent of `ln ||Φ(t)||_{L²}` over a window.
pub fn fit_growth_exponent(trace: &SolutionTrace, window: (f64, f64)) -> Result<f64> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (&t, &v) in trace.t_grid.iter().zip(&trace.l2) {
        if t >= window.0 && t <= window.1 && v > 0.0 {
            xs.push(t);
            ys.push(v.ln());
        }
    }
    if xs.len() < 4 {
        return Err(AnalysisError::DegenerateWindow);
    }
    Ok(lsq_slope(&xs, &ys))
}

/// One sampled parameter point with its verdict.
#[derive(Debug, Clone, Copy)]
pub struct DomainPoint {
    pub m: f64,
    pub gamma: f64,
    pub gamma_damp: f64,
    pub verdict: CaseLabel,
}

/// Uniform sample of the (M, γ, Γ) box, classified point by point.
pub fn feasible_domain_sample(
    n: u32,
    alpha: f64,
    m_range: (f64, f64),
    gamma_range: (f64, f64),
    gamma_damp_range: (f64, f64),
    count: usize,
    seed: u64,
) -> Vec<DomainPoint> {
    assert!(m_range.0 > 0.0, "real M sampling range must be positive");
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut uniform = |lo: f64, hi: f64| {
        let u = (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
        lo + (hi - lo) * u
    };
    (0..count)
        .map(|_| {
            let m = uniform(m_range.0, m_range.1);
            let gamma = uniform(gamma_range.0, gamma_range.1);
            let gamma_damp = uniform(gamma_damp_range.0, gamma_damp_range.1);
            let params = ModelParams::with_curved_mass(n, m, alpha, gamma, gamma_damp, 1.0);
            DomainPoint {
                m,
                gamma,
                gamma_damp,
                verdict: classify(&params).case,
            }
        })
        .collect()
}

/// Independently coded re-evaluation of the printed inequalities, used as a
/// duplicate path for cross-checking `classify`.
pub fn classify_crosscheck(n: u32, m: f64, alpha: f64, gamma: f64, gamma_damp: f64) -> CaseLabel {
    if m <= 0.0 {
        return CaseLabel::Inapplicable;
    }
    let first = gamma.mul_add(alpha + 1.0, n as f64 * 0.5) + m + gamma_damp;
    let second = if m > 0.5 { m } else { 0.5 } + n as f64 * 0.5 + gamma;
    let third = gamma.mul_add(alpha, gamma_damp);
    let pos = |x: f64| x > EQ_TOL;
    let neg = |x: f64| x < -EQ_TOL;
    let zero = |x: f64| x.abs() <= EQ_TOL;
    if pos(first) && !pos(second) {
        return CaseLabel::I;
    }
    if zero(first) && neg(second) {
        return CaseLabel::II;
    }
    if neg(first) && !pos(second) && !neg(third) {
        return CaseLabel::III;
    }
    // finite-lifespan partition with the max-weighted first expression
    let m_eff = if m > 0.5 { m } else { 0.5 };
    let first_eff = gamma.mul_add(alpha + 1.0, n as f64 * 0.5) + m_eff + gamma_damp;
    if pos(first_eff) && pos(second) {
        return CaseLabel::IV;
    }
    if zero(first_eff) && !neg(second) {
        return CaseLabel::V;
    }
    if neg(first_eff) && neg(third) {
        return CaseLabel::VI;
    }
    CaseLabel::Boundary
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(n: u32, m: f64, alpha: f64, gamma: f64, gd: f64) -> ModelParams {
        ModelParams::with_curved_mass(n, m, alpha, gamma, gd, 1.0)
    }

    #[test]
    fn classify_spec_examples() {
        // n=3, α=2, M=0.3, γ=-2.1, Γ=5: case i
        let v = classify(&params(3, 0.3, 2.0, -2.1, 5.0));
        assert_eq!(v.case, CaseLabel::I);
        assert!((v.slacks.growth_balance - 0.5).abs() < 1e-12);
        assert!((v.slacks.weight_margin - (-0.1)).abs() < 1e-12);

        // Higgs example n=3, α=2, M=2, γ=-3/2, Γ=0: finite lifespan
        let v = classify(&params(3, 2.0, 2.0, -1.5, 0.0));
        assert!(!v.case.is_global());
        assert_eq!(v.case, CaseLabel::VI);

        // γ=Γ=0, α=1: case iv for any positive Re M
        for &m in &[0.2, 0.7, 3.0] {
            let v = classify(&params(2, m, 1.0, 0.0, 0.0));
            assert_eq!(v.case, CaseLabel::IV);
        }
    }

    #[test]
    fn inapplicable_masses() {
        // m² > n²/4 makes M imaginary
        let p = ModelParams {
            nonlinearity: NonlinearitySpec::power_signed(2.0, 0.0, 0.0),
            ..ModelParams::with_curved_mass(1, 1.0, 2.0, -1.0, 0.0, 1.0)
        };
        let p = ModelParams {
            m_sq: Complex64::new(5.0, 0.0),
            ..p
        };
        let v = classify(&p);
        assert_eq!(v.case, CaseLabel::Inapplicable);
        assert!(!v.applicable);
    }

    #[test]
    fn classify_depends_only_on_stated_parameters() {
        let a = classify(&params(3, 1.2, 2.0, -2.0, 1.0));
        let mut p2 = params(3, 1.2, 2.0, -2.0, 1.0);
        p2.s = 7.5; // unused by the classification
        let b = classify(&p2);
        assert_eq!(a.case, b.case);
        assert_eq!(a.case_integral_eq, b.case_integral_eq);
    }

    #[test]
    fn lifespan_i_matches_quadrature() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(13);
        let mut uniform = |lo: f64, hi: f64| {
            let u = (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
            lo + (hi - lo) * u
        };
        for _ in 0..50 {
            let p = params(
                1 + (uniform(0.0, 3.0) as u32),
                uniform(0.1, 3.0),
                uniform(0.5, 3.0),
                uniform(-3.0, 1.0),
                uniform(-1.0, 4.0),
            );
            let t = uniform(0.1, 3.0);
            let rm = p.curved_mass().re().max(0.5);
            let a = p.n as f64 / 2.0 + rm + p.gamma;
            let b = p.n as f64 / 2.0 + rm + p.gamma * (p.alpha + 1.0) + p.gamma_damp;
            // quadrature of e^{-b·τ} over [0,t] at high node count
            let rule = gl_rule_01(512);
            let quad: f64 = rule.iter().map(|&(u, w)| w * t * (-b * u * t).exp()).sum();
            let expect = (a * t).exp() * quad;
            let got = lifespan_i(t, &p);
            assert!(
                (got - expect).abs() <= 1e-10 * expect.abs().max(1e-12),
                "{got} vs {expect}"
            );
        }
    }

    #[test]
    fn higgs_lifespan_closed_form() {
        // n=3, M=2, γ=-3/2, α=2, Γ=0: A=2, B=-1, I(t) = e^{2t}(e^t - 1)
        let p = params(3, 2.0, 2.0, -1.5, 0.0);
        for &t in &[0.0_f64, 0.5, 1.0, 2.0] {
            let expect = (2.0 * t).exp() * (t.exp() - 1.0);
            assert!((lifespan_i(t, &p) - expect).abs() < 1e-12 * expect.max(1e-12));
        }
    }

    #[test]
    fn inverse_roundtrip() {
        let p = params(3, 2.0, 2.0, -1.5, 0.0);
        for &t in &[0.5, 1.0, 2.0, 4.0] {
            let y = lifespan_i(t, &p);
            let back = lifespan_inverse(y, &p).unwrap();
            assert!((back - t).abs() < 1e-8, "t={t}: {back}");
        }
    }

    #[test]
    fn lower_bound_grows_as_data_shrinks() {
        let p = params(3, 2.0, 2.0, -1.5, 0.0);
        let mut prev = 0.0;
        for k in 1..=6 {
            let b = lifespan_lower_bound(&p, 10f64.powi(-k), 2.0).unwrap();
            assert!(b > prev, "bound must increase as the data norm shrinks");
            prev = b;
        }
        assert!(prev > 8.0); // heads to infinity
    }

    #[test]
    fn inverse_rejects_bounded_regime() {
        // condition-(i) parameters give bounded I
        let p = params(3, 0.3, 2.0, -2.1, 5.0);
        assert!(matches!(
            lifespan_inverse(10.0, &p),
            Err(AnalysisError::NotInvertible { .. })
        ));
    }

    #[test]
    fn higgs_slope_is_two_thirds() {
        // inverse_I(C ε^{-2}) ~ (2/3)(-ln ε) for the Higgs parameters
        let p = params(3, 2.0, 2.0, -1.5, 0.0);
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for k in 3..=8 {
            let eps = 10f64.powi(-k);
            let t = lifespan_lower_bound(&p, eps, 1.0).unwrap();
            xs.push(-eps.ln());
            ys.push(t);
        }
        let slope = lsq_slope(&xs, &ys);
        assert!(
            (slope - 2.0 / 3.0).abs() < 0.02 * (2.0 / 3.0),
            "slope {slope}"
        );
    }

    #[test]
    fn boundedness_matches_case_partition() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
        let mut uniform = |lo: f64, hi: f64| {
            let u = (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
            lo + (hi - lo) * u
        };
        let mut checked = 0;
        while checked < 50 {
            let p = params(
                1 + (uniform(0.0, 3.0) as u32),
                uniform(0.1, 2.5),
                uniform(0.5, 3.0),
                uniform(-3.0, 0.5),
                uniform(-1.0, 4.0),
            );
            let rm = p.curved_mass().re().max(0.5);
            let a = p.n as f64 / 2.0 + rm + p.gamma;
            let b = p.n as f64 / 2.0 + rm + p.gamma * (p.alpha + 1.0) + p.gamma_damp;
            let e3 = p.gamma * p.alpha + p.gamma_damp;
            // keep away from degenerate margins so the horizon test is sharp
            if a.abs() < 0.2 || b.abs() < 0.2 || e3.abs() < 0.2 {
                continue;
            }
            checked += 1;
            let case = classify(&p).case_bound_regime;
            let sup_to = |horizon: f64| {
                (1..=2000)
                    .map(|k| lifespan_i(horizon * k as f64 / 2000.0, &p))
                    .fold(0.0, f64::max)
            };
            let s20 = sup_to(20.0);
            let s40 = sup_to(40.0);
            if case.is_global() {
                assert!(
                    (s40 - s20).abs() <= 0.01 * s20.abs().max(1e-12),
                    "case {case:?} should be bounded: sup20={s20}, sup40={s40}"
                );
            } else {
                assert!(
                    lifespan_i(40.0, &p) / lifespan_i(20.0, &p) > 10.0,
                    "case {case:?} should be unbounded"
                );
            }
        }
    }

    #[test]
    fn k1_certification_m_half_collapse() {
        // at M = 1/2 the kernel is (1/2)e^{-t/2}; the integral is exactly
        // (1/(a+1)) φ^{a+1} (1/2) e^{-t/2} and the bound ratio is constant
        let mass = CurvedMass::from_real(1, 0.5);
        let a = 0.0;
        let ts: Vec<f64> = vec![0.3, 0.7, 1.5, 3.0];
        let rep = certify_k1_bound(a, &mass, &ts, 256).unwrap();
        for (&t, &intg) in ts.iter().zip(&rep.integrals) {
            let exact = phi(t) * 0.5 * (-t / 2.0).exp();
            assert!((intg - exact).abs() < 1e-10 * exact, "t={t}");
        }
        let r0 = rep.ratios[0];
        for &r in &rep.ratios {
            assert!((r - r0).abs() < 1e-8 * r0);
        }
    }

    #[test]
    fn k1_certification_small_t_slope() {
        // the t^{a+1} regime needs genuinely small t: φ(t) = t(1 + t/2 + ...)
        // contaminates the fitted exponent by ~(a+1) t/2 otherwise
        let mass = CurvedMass::from_real(3, 2.0);
        let ts: Vec<f64> = (1..=9).map(|k| k as f64 * 0.005).collect();
        for &a in &[0.0, 0.5] {
            let rep = certify_k1_bound(a, &mass, &ts, 256).unwrap();
            let slope = rep.small_t_slope.unwrap();
            assert!(
                (slope - (a + 1.0)).abs() < 0.03 * (a + 1.0),
                "a={a}: slope {slope}"
            );
            assert!(rep.refinement_drift < 1e-8);
        }
    }

    #[test]
    fn k0_certification_finite_and_stable() {
        for mass in [
            CurvedMass::from_real(3, 2.0),
            CurvedMass::from_real(1, 0.3),
            CurvedMass::from_curved_mass(1, Complex64::new(1.0, 1.0)),
        ] {
            let ts: Vec<f64> = vec![0.2, 0.5, 1.0, 2.0, 4.0];
            let rep = certify_k0_bound(0.0, &mass, &ts, 512).unwrap();
            assert!(rep.sup_ratio.is_finite() && rep.sup_ratio > 0.0);
            assert!(
                rep.refinement_drift < 1e-4,
                "M={:?}: drift {}",
                mass.m,
                rep.refinement_drift
            );
        }
    }

    #[test]
    fn growth_fit_recovers_pure_exponential() {
        let t_grid: Vec<f64> = (0..30).map(|i| i as f64 * 0.2).collect();
        let l2: Vec<f64> = t_grid.iter().map(|&t| (1.7 * t).exp()).collect();
        let trace = SolutionTrace {
            t_grid: t_grid.clone(),
            l2,
            h_s: vec![],
            weighted: vec![],
            snapshots: None,
        };
        let slope = fit_growth_exponent(&trace, (1.0, 5.0)).unwrap();
        assert!((slope - 1.7).abs() < 1e-12);
        assert!(matches!(
            fit_growth_exponent(&trace, (100.0, 101.0)),
            Err(AnalysisError::DegenerateWindow)
        ));
    }

    #[test]
    fn domain_sampling_panels_nonempty_and_crosschecked() {
        // Figure-style boxes at n=3, α=2
        let boxes = [
            ((0.01, 0.5), CaseLabel::I),
            ((0.01, 0.5), CaseLabel::III),
            ((0.5, 1.5), CaseLabel::I),
            ((0.5, 1.5), CaseLabel::III),
        ];
        for (m_range, wanted) in boxes {
            let cloud =
                feasible_domain_sample(3, 2.0, m_range, (-3.0, -2.0), (4.0, 6.0), 4000, 7);
            assert!(
                cloud.iter().any(|p| p.verdict == wanted),
                "no {wanted:?} points in box {m_range:?}"
            );
            for p in &cloud {
                let dup = classify_crosscheck(3, p.m, 2.0, p.gamma, p.gamma_damp);
                assert_eq!(p.verdict, dup, "mismatch at {p:?}");
            }
        }
        // degenerate box
        let empty = feasible_domain_sample(3, 2.0, (1.0, 1.0), (0.0, 0.0), (0.0, 0.0), 0, 3);
        assert!(empty.is_empty());
    }
}
