//! Nonlinearity handling, weighted-norm monitoring, and the Picard
//! fixed-point solver for the integral equation
//! `Φ = Φ0 + G[e^{-Γ·} F(·, Φ)]`.

mod picard;

pub use picard::{picard_solve, ConvergenceReport, PicardError, PicardOptions};

use crate::waveprop::{sobolev_norm, GridField};
use num_complex::Complex64;
use rand_core::{RngCore, SeedableRng};

/// Supported self-interaction families; all satisfy `F(0) = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NonlinearityKind {
    /// `coeff * |Φ|^(α+1)`
    PowerAbs,
    /// `coeff * |Φ|^α Φ`
    PowerSigned,
    /// `coeff * Φ³` (Higgs self-interaction carries `coeff = -λ`)
    HiggsCubic,
    /// `coeff * Σ_k c_k Φ^(k+2)`: polynomial with no constant or linear term
    Polynomial([f64; 8]),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonlinearitySpec {
    pub kind: NonlinearityKind,
    /// Lipschitz exponent α > 0
    pub alpha: f64,
    pub coeff: f64,
    /// time damping Γ in `e^{-Γ t} F`
    pub gamma_damp: f64,
}

impl NonlinearitySpec {
    pub fn power_signed(alpha: f64, coeff: f64, gamma_damp: f64) -> Self {
        assert!(alpha > 0.0);
        Self {
            kind: NonlinearityKind::PowerSigned,
            alpha,
            coeff,
            gamma_damp,
        }
    }

    pub fn power_abs(alpha: f64, coeff: f64, gamma_damp: f64) -> Self {
        assert!(alpha > 0.0);
        Self {
            kind: NonlinearityKind::PowerAbs,
            alpha,
            coeff,
            gamma_damp,
        }
    }

    /// Higgs potential `μ²ψ - λψ³` folded as `m² = -μ²`, `F = -λΦ³`.
    pub fn higgs_cubic(lambda: f64, gamma_damp: f64) -> Self {
        Self {
            kind: NonlinearityKind::HiggsCubic,
            alpha: 2.0,
            coeff: -lambda,
            gamma_damp,
        }
    }

    /// Polynomial `coeff · Σ_k c_k Φ^{k+2}`; the Lipschitz exponent is that
    /// of the lowest nonzero power, `α = (lowest k) + 1`.
    pub fn polynomial(coeffs: [f64; 8], coeff: f64, gamma_damp: f64) -> Self {
        let lowest = coeffs
            .iter()
            .position(|&c| c != 0.0)
            .expect("polynomial needs at least one nonzero coefficient");
        Self {
            kind: NonlinearityKind::Polynomial(coeffs),
            alpha: lowest as f64 + 1.0,
            coeff,
            gamma_damp,
        }
    }

    /// Pointwise value of `F` (without the `e^{-Γt}` factor).
    pub fn eval(&self, v: Complex64) -> Complex64 {
        match self.kind {
            NonlinearityKind::PowerAbs => {
                Complex64::new(self.coeff * v.norm().powf(self.alpha + 1.0), 0.0)
            }
            NonlinearityKind::PowerSigned => self.coeff * v.norm().powf(self.alpha) * v,
            NonlinearityKind::HiggsCubic => self.coeff * v * v * v,
            NonlinearityKind::Polynomial(cs) => {
                let mut acc = Complex64::default();
                let mut p = v * v;
                for &c in cs.iter() {
                    if c != 0.0 {
                        acc += c * p;
                    }
                    p *= v;
                }
                self.coeff * acc
            }
        }
    }
}

/// Pointwise `e^{-Γt} F(f)` on the grid (physical space).
pub fn apply_nonlinearity(f: &GridField, spec: &NonlinearitySpec, t: f64) -> GridField {
    let damp = (-spec.gamma_damp * t).exp();
    f.map_physical(|v| damp * spec.eval(v))
}

/// Time series of norms (and optional field snapshots) of a solution.
#[derive(Debug, Clone, Default)]
pub struct SolutionTrace {
    pub t_grid: Vec<f64>,
    pub l2: Vec<f64>,
    pub h_s: Vec<f64>,
    /// `e^{γt} ||Φ(t)||_{H_s}`
    pub weighted: Vec<f64>,
    pub snapshots: Option<Vec<GridField>>,
}

impl SolutionTrace {
    pub fn record(fields: &[GridField], t_grid: &[f64], s: f64, gamma: f64, keep: bool) -> Self {
        assert_eq!(fields.len(), t_grid.len());
        let l2: Vec<f64> = fields.iter().map(|f| f.l2_norm()).collect();
        let h_s: Vec<f64> = fields.iter().map(|f| sobolev_norm(f, s)).collect();
        let weighted: Vec<f64> = h_s
            .iter()
            .zip(t_grid)
            .map(|(&h, &t)| (gamma * t).exp() * h)
            .collect();
        Self {
            t_grid: t_grid.to_vec(),
            l2,
            h_s,
            weighted,
            snapshots: keep.then(|| fields.to_vec()),
        }
    }

    pub fn weighted_sup(&self) -> f64 {
        self.weighted.iter().copied().fold(0.0, f64::max)
    }
}

/// Weighted-supremum ball monitor for `X(R, H_(s), γ)`.
#[derive(Debug, Clone)]
pub struct XNormMonitor {
    pub gamma: f64,
    pub s: f64,
    pub radius: f64,
    pub samples: Vec<(f64, f64)>,
}

impl XNormMonitor {
    pub fn new(gamma: f64, s: f64, radius: f64) -> Self {
        Self {
            gamma,
            s,
            radius,
            samples: Vec::new(),
        }
    }

    pub fn observe(&mut self, t: f64, h_s_norm: f64) {
        self.samples.push((t, (self.gamma * t).exp() * h_s_norm));
    }

    pub fn sup(&self) -> f64 {
        self.samples.iter().map(|&(_, v)| v).fold(0.0, f64::max)
    }

    /// First sample time at which the weighted norm reaches the ball radius.
    pub fn escape_time(&self) -> Option<f64> {
        self.samples
            .iter()
            .find(|&&(_, v)| v >= self.radius)
            .map(|&(t, _)| t)
    }
}

/// Empirical Lipschitz constant of `F` in `H_(s)`:
/// max over random smooth pairs of
/// `||F(ψ1)-F(ψ2)|| / (||ψ1-ψ2|| (||ψ1||^α + ||ψ2||^α))`.
pub fn lipschitz_probe(
    spec: &NonlinearitySpec,
    dims: u32,
    points_per_axis: usize,
    box_length: f64,
    s: f64,
    trials: usize,
    seed: u64,
) -> f64 {
    // the product estimate needs the Sobolev algebra, s > n/2
    assert!(s > dims as f64 / 2.0, "lipschitz_probe requires s > n/2");
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut best: f64 = 0.0;
    for _ in 0..trials {
        let f1 = random_smooth_field(dims, points_per_axis, box_length, s, &mut rng);
        let f2 = random_smooth_field(dims, points_per_axis, box_length, s, &mut rng);
        let d = {
            let mut d = f1.clone();
            d.add_scaled(Complex64::new(-1.0, 0.0), &f2);
            sobolev_norm(&d, s)
        };
        if d < 1e-14 {
            continue;
        }
        let g1 = f1.map_physical(|v| spec.eval(v));
        let g2 = f2.map_physical(|v| spec.eval(v));
        let mut gd = g1;
        gd.add_scaled(Complex64::new(-1.0, 0.0), &g2);
        let num = sobolev_norm(&gd, s);
        let den = d * (sobolev_norm(&f1, s).powf(spec.alpha) + sobolev_norm(&f2, s).powf(spec.alpha));
        if den > 0.0 {
            best = best.max(num / den);
        }
    }
    best
}

/// Random real field with spectral decay `(1+|ξ|²)^{-(s+1)}`.
pub fn random_smooth_field(
    dims: u32,
    points_per_axis: usize,
    box_length: f64,
    s: f64,
    rng: &mut rand_chacha::ChaCha8Rng,
) -> GridField {
    let mut f = GridField::zeros(dims, points_per_axis, box_length);
    let mut hat = f.to_spectral();
    let len = hat.values().len();
    let mut coeffs = vec![Complex64::default(); len];
    for (i, cf) in coeffs.iter_mut().enumerate() {
        let xi = hat.xi_abs(i);
        let decay = (1.0 + xi * xi).powf(-(s + 1.0));
        let a = uniform_pm1(rng);
        let b = uniform_pm1(rng);
        *cf = Complex64::new(a, b) * decay;
    }
    hat.values_mut().copy_from_slice(&coeffs);
    let phys = hat.to_physical();
    // keep it real-valued
    for (dst, src) in f.values_mut().iter_mut().zip(phys.values()) {
        *dst = Complex64::new(src.re, 0.0);
    }
    f
}

fn uniform_pm1(rng: &mut rand_chacha::ChaCha8Rng) -> f64 {
    2.0 * ((rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64) - 1.0
}

/// Weighted sup-distance `sup_j e^{γ t_j} ||f_j - g_j||_{H_s}` over a grid.
pub fn x_distance(fs: &[GridField], gs: &[GridField], t_grid: &[f64], s: f64, gamma: f64) -> f64 {
    assert_eq!(fs.len(), gs.len());
    assert_eq!(fs.len(), t_grid.len());
    fs.iter()
        .zip(gs)
        .zip(t_grid)
        .map(|((f, g), &t)| {
            let mut d = f.clone();
            d.add_scaled(Complex64::new(-1.0, 0.0), g);
            (gamma * t).exp() * sobolev_norm(&d, s)
        })
        .fold(0.0, f64::max)
}
