//! Periodic-grid fields and the resolving operator of the free wave
//! equation: `d²v/dt² = Δv` with data `(f, 0)` solved spectrally, each mode
//! multiplied by `cos(r |ξ|)`.

mod fft;

use crate::util::pairwise_sum;
use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WavePropError {
    #[error("grid too small: propagation radius {radius} + support {support} exceeds L/2 = {half_l}")]
    GridTooSmall {
        radius: f64,
        support: f64,
        half_l: f64,
    },
    #[error("incompatible grids: {0}")]
    GridMismatch(String),
}

pub type Result<T> = std::result::Result<T, WavePropError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Space {
    Physical,
    Spectral,
}

/// Periodic-grid sample of a spatial field, `points_per_axis^dims` complex
/// values in row-major order, tagged with its representation.
#[derive(Debug, Clone, PartialEq)]
pub struct GridField {
    dims: u32,
    points_per_axis: usize,
    box_length: f64,
    space: Space,
    values: Vec<Complex64>,
}

impl GridField {
    pub fn zeros(dims: u32, points_per_axis: usize, box_length: f64) -> Self {
        assert!((1..=3).contains(&dims), "dims must be 1, 2 or 3");
        assert!(
            points_per_axis.is_power_of_two(),
            "points_per_axis must be a power of two"
        );
        assert!(box_length > 0.0);
        Self {
            dims,
            points_per_axis,
            box_length,
            space: Space::Physical,
            values: vec![Complex64::new(0.0, 0.0); points_per_axis.pow(dims)],
        }
    }

    /// Build a physical-space field from a function of the grid coordinates.
    pub fn from_fn(
        dims: u32,
        points_per_axis: usize,
        box_length: f64,
        mut f: impl FnMut(&[f64]) -> Complex64,
    ) -> Self {
        let mut out = Self::zeros(dims, points_per_axis, box_length);
        let n = points_per_axis;
        let h = box_length / n as f64;
        let mut coords = [0.0_f64; 3];
        for idx in 0..out.values.len() {
            let mut rem = idx;
            for axis in 0..dims as usize {
                coords[axis] = (rem % n) as f64 * h;
                rem /= n;
            }
            out.values[idx] = f(&coords[..dims as usize]);
        }
        out
    }

    pub fn dims(&self) -> u32 {
        self.dims
    }

    pub fn points_per_axis(&self) -> usize {
        self.points_per_axis
    }

    pub fn box_length(&self) -> f64 {
        self.box_length
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn same_grid(&self, other: &Self) -> bool {
        self.dims == other.dims
            && self.points_per_axis == other.points_per_axis
            && self.box_length == other.box_length
    }

    /// Angular frequency `ξ = 2π k / L` of the mode behind flat index `idx`.
    pub fn xi_abs(&self, idx: usize) -> f64 {
        mode_xi_abs(idx, self.dims, self.points_per_axis, self.box_length)
    }

    pub fn to_spectral(&self) -> Self {
        match self.space {
            Space::Spectral => self.clone(),
            Space::Physical => {
                let mut out = self.clone();
                fft::fft_all_axes(&mut out.values, self.points_per_axis, self.dims, false);
                let scale = 1.0 / self.values.len() as f64;
                for v in &mut out.values {
                    *v *= scale;
                }
                out.space = Space::Spectral;
                out
            }
        }
    }

    pub fn to_physical(&self) -> Self {
        match self.space {
            Space::Physical => self.clone(),
            Space::Spectral => {
                let mut out = self.clone();
                fft::fft_all_axes(&mut out.values, self.points_per_axis, self.dims, true);
                out.space = Space::Physical;
                out
            }
        }
    }

    /// `self += a * other`; both fields must share grid and representation.
    pub fn add_scaled(&mut self, a: Complex64, other: &Self) {
        assert!(self.same_grid(other) && self.space == other.space);
        for (x, y) in self.values.iter_mut().zip(&other.values) {
            *x += a * y;
        }
    }

    pub fn scale(&mut self, a: Complex64) {
        for x in &mut self.values {
            *x *= a;
        }
    }

    pub fn map_physical(&self, mut f: impl FnMut(Complex64) -> Complex64) -> Self {
        let mut out = self.to_physical();
        for v in &mut out.values {
            *v = f(*v);
        }
        out
    }

    /// L² norm over the box; Parseval makes both representations agree.
    pub fn l2_norm(&self) -> f64 {
        let sq: Vec<f64> = self.values.iter().map(|v| v.norm_sqr()).collect();
        let sum = pairwise_sum(&sq);
        let cell = match self.space {
            Space::Physical => {
                (self.box_length / self.points_per_axis as f64).powi(self.dims as i32)
            }
            Space::Spectral => self.box_length.powi(self.dims as i32),
        };
        (sum * cell).sqrt()
    }
}

/// `|ξ|` of the mode behind flat index `idx` on an `n^dims` grid of side `L`.
pub fn mode_xi_abs(idx: usize, dims: u32, points_per_axis: usize, box_length: f64) -> f64 {
    let n = points_per_axis;
    let unit = 2.0 * std::f64::consts::PI / box_length;
    let mut rem = idx;
    let mut sq = 0.0;
    for _ in 0..dims {
        let k = rem % n;
        let signed = if k <= n / 2 {
            k as i64
        } else {
            k as i64 - n as i64
        };
        let xi = signed as f64 * unit;
        sq += xi * xi;
        rem /= n;
    }
    sq.sqrt()
}

/// Unnormalized in-place FFT along every axis; exposed for hot loops that
/// manage their own buffers (the forward/inverse pair scales by `n^dims`).
pub fn spectral_transform_inplace(
    values: &mut [Complex64],
    points_per_axis: usize,
    dims: u32,
    inverse: bool,
) {
    fft::fft_all_axes(values, points_per_axis, dims, inverse);
}

/// Sobolev norm `( Σ_ξ (1+|ξ|²)^s |f̂(ξ)|² L^n )^(1/2)`; `s = 0` is L².
pub fn sobolev_norm(f: &GridField, s: f64) -> f64 {
    let hat = f.to_spectral();
    let weighted: Vec<f64> = hat
        .values
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let xi = hat.xi_abs(i);
            (1.0 + xi * xi).powf(s) * v.norm_sqr()
        })
        .collect();
    (pairwise_sum(&weighted) * hat.box_length.powi(hat.dims as i32)).sqrt()
}

/// Free-wave evolution of data `(f, 0)` to radius `r`: the spectral
/// multiplier `cos(r |ξ|)` per mode. Output is in the input representation.
pub fn ee_propagate(f: &GridField, r: f64) -> GridField {
    assert!(r >= 0.0, "propagation radius must be >= 0");
    let mut hat = f.to_spectral();
    for i in 0..hat.values.len() {
        let xi = hat.xi_abs(i);
        hat.values[i] *= (r * xi).cos();
    }
    match f.space {
        Space::Spectral => hat,
        Space::Physical => hat.to_physical(),
    }
}

/// Propagation request with optional strict-causality validation against
/// torus wraparound.
#[derive(Debug, Clone, Copy)]
pub struct PropagationPlan {
    pub source_time: f64,
    pub target_radius: f64,
    pub strict_causality: bool,
    /// radius of the data support, needed only in strict mode
    pub support_radius: f64,
}

pub fn ee_propagate_plan(f: &GridField, plan: &PropagationPlan) -> Result<GridField> {
    if plan.strict_causality {
        let half_l = f.box_length() / 2.0;
        if plan.target_radius + plan.support_radius > half_l {
            return Err(WavePropError::GridTooSmall {
                radius: plan.target_radius,
                support: plan.support_radius,
                half_l,
            });
        }
    }
    Ok(ee_propagate(f, plan.target_radius))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_core::{RngCore, SeedableRng};

    fn rand_field(dims: u32, n: usize, l: f64, seed: u64) -> GridField {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut f = GridField::zeros(dims, n, l);
        for v in f.values_mut() {
            let a = (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
            let b = (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
            *v = Complex64::new(2.0 * a - 1.0, 2.0 * b - 1.0);
        }
        f
    }

    #[test]
    fn roundtrip_is_identity() {
        for dims in 1..=3u32 {
            let n = if dims == 3 { 16 } else { 64 };
            let f = rand_field(dims, n, 3.7, 42 + dims as u64);
            let back = f.to_spectral().to_physical();
            let err: f64 = f
                .values()
                .iter()
                .zip(back.values())
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            assert!(err < 1e-12, "dims={dims}: {err}");
        }
    }

    #[test]
    fn propagate_zero_radius_is_identity() {
        let f = rand_field(1, 128, 10.0, 7);
        let g = ee_propagate(&f, 0.0);
        let err: f64 = f
            .values()
            .iter()
            .zip(g.values())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-13);
    }

    #[test]
    fn single_mode_multiplier() {
        let l = 2.0 * std::f64::consts::PI;
        let k = 3i32;
        let f = GridField::from_fn(1, 64, l, |x| {
            (Complex64::new(0.0, 1.0) * k as f64 * x[0]).exp()
        });
        let r = 0.83;
        let hat = ee_propagate(&f, r).to_spectral();
        let xi = k as f64; // 2π k / L with L = 2π
        for (i, v) in hat.values().iter().enumerate() {
            let expect = if i == k as usize {
                Complex64::new((r * xi).cos(), 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            };
            assert!((v - expect).norm() < 1e-13, "mode {i}");
        }
    }

    #[test]
    fn gaussian_dalembert_half_sum() {
        // 1D data with v_t = 0: v(x, r) = (f(x-r) + f(x+r)) / 2
        let l = 50.0;
        let n = 512;
        let g = |x: f64| (-(x - 25.0) * (x - 25.0)).exp();
        let f = GridField::from_fn(1, n, l, |x| Complex64::new(g(x[0]), 0.0));
        let r = 1.0;
        let v = ee_propagate(&f, r);
        let h = l / n as f64;
        for (i, val) in v.values().iter().enumerate() {
            let x = i as f64 * h;
            let exact = 0.5 * (g(x - r) + g(x + r));
            assert!((val.re - exact).abs() < 1e-10, "x={x}");
            assert!(val.im.abs() < 1e-12);
        }
    }

    #[test]
    fn sobolev_norm_values() {
        let z = GridField::zeros(1, 64, 1.0);
        assert_eq!(sobolev_norm(&z, 1.3), 0.0);
        // single mode on the unit cell: (1 + |ξ0|²)^(s/2)
        let k = 2.0;
        let f = GridField::from_fn(1, 64, 1.0, |x| {
            (Complex64::new(0.0, 1.0) * 2.0 * std::f64::consts::PI * k * x[0]).exp()
        });
        let xi0 = 2.0 * std::f64::consts::PI * k;
        for &s in &[0.0, 0.5, 1.0, 2.0] {
            let got = sobolev_norm(&f, s);
            let expect = (1.0 + xi0 * xi0).powf(s / 2.0);
            assert!(
                (got - expect).abs() < 1e-10 * expect,
                "s={s}: {got} vs {expect}"
            );
        }
    }

    #[test]
    fn parseval_physical_quadrature() {
        for dims in 1..=2u32 {
            let f = rand_field(dims, 32, 2.9, 11);
            let phys: Vec<f64> = f.values().iter().map(|v| v.norm_sqr()).collect();
            let cell = (f.box_length() / 32.0).powi(dims as i32);
            let direct = (crate::util::pairwise_sum(&phys) * cell).sqrt();
            let spectral = f.to_spectral().l2_norm();
            assert!(
                (direct - spectral).abs() < 1e-12 * direct,
                "dims={dims}: {direct} vs {spectral}"
            );
        }
    }

    #[test]
    fn propagation_never_increases_l2() {
        let f = rand_field(2, 32, 5.0, 3);
        for &r in &[0.1, 1.0, 7.3, 50.0] {
            assert!(ee_propagate(&f, r).l2_norm() <= f.l2_norm() * (1.0 + 1e-13));
        }
    }

    #[test]
    fn strict_causality_guard() {
        let f = rand_field(1, 64, 10.0, 9);
        let plan = PropagationPlan {
            source_time: 0.0,
            target_radius: 4.0,
            strict_causality: true,
            support_radius: 2.0,
        };
        assert!(matches!(
            ee_propagate_plan(&f, &plan),
            Err(WavePropError::GridTooSmall { .. })
        ));
        let ok = PropagationPlan {
            target_radius: 2.5,
            ..plan
        };
        assert!(ee_propagate_plan(&f, &ok).is_ok());
    }
}
