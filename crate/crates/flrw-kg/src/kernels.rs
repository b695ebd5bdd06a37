//! Integral-transform kernels `E`, `K0`, `K1` and the characteristic
//! function `phi(t) = e^t - 1`.
//!
//! All three kernels are built from the Gauss hypergeometric function with
//! parameters `(1/2 - M, 1/2 - M; 1)` evaluated at the ratio
//! `((e^t - e^b)^2 - z^2) / ((e^t + e^b)^2 - z^2)`, where `M` is the curved
//! mass. `K1(z,t) = E(z,t;0,0)` and `K0(z,t) = -[d/db E(z,t;0,b)]_{b=0}`.

use crate::specfun::{hyp2f1, HypArgs, SpecFunError};
use num_complex::Complex64;
use thiserror::Error;

const HYP_TOL: f64 = 1e-12;
const E_BOUNDARY_GUARD: f64 = 1e-12;
const K0_BOUNDARY_GUARD: f64 = 1e-10;
/// Below this hypergeometric argument the K0 bracket is evaluated through
/// the cancellation-free series split.
const K0_STABLE_SWITCH: f64 = 0.25;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KernelError {
    #[error("point outside dependence domain: {0}")]
    DomainError(String),
    #[error("singular boundary: {0}")]
    SingularBoundary(String),
    #[error(transparent)]
    SpecFun(#[from] SpecFunError),
}

pub type Result<T> = std::result::Result<T, KernelError>;

/// Curved mass `M = (n^2/4 - m^2)^(1/2)` (principal branch) with the
/// spatial dimension and mass-squared it came from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvedMass {
    pub n: u32,
    pub m_sq: Complex64,
    pub m: Complex64,
}

impl CurvedMass {
    /// Derive `M` from the dimension and (possibly complex) mass-squared.
    pub fn new(n: u32, m_sq: Complex64) -> Self {
        assert!(n >= 1, "spatial dimension must be >= 1");
        let m = (Complex64::new(n as f64 * n as f64 / 4.0, 0.0) - m_sq).sqrt();
        // principal branch: Re M >= 0
        let m = if m.re < 0.0 { -m } else { m };
        Self { n, m_sq, m }
    }

    /// Construct from a target `M`, back-solving `m^2 = n^2/4 - M^2`.
    pub fn from_curved_mass(n: u32, m: Complex64) -> Self {
        assert!(n >= 1, "spatial dimension must be >= 1");
        assert!(m.re >= 0.0, "principal branch requires Re M >= 0");
        let m_sq = Complex64::new(n as f64 * n as f64 / 4.0, 0.0) - m * m;
        Self { n, m_sq, m }
    }

    pub fn from_real(n: u32, m: f64) -> Self {
        Self::from_curved_mass(n, Complex64::new(m, 0.0))
    }

    pub fn re(&self) -> f64 {
        self.m.re
    }

    pub fn is_real(&self) -> bool {
        self.m.im.abs() <= 1e-12 * (1.0 + self.m.re.abs())
    }

    /// Classification applicability: `Re M > 0`, and when `Re M = 1/2` the
    /// mass must be real.
    pub fn theorem_applicable(&self) -> bool {
        if self.m.re <= 0.0 {
            return false;
        }
        let on_half = (self.m.re - 0.5).abs() <= 1e-12;
        !(on_half && !self.is_real())
    }
}

/// Point in the kernel's dependence domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelPoint {
    /// spatial offset `|x - x0|` (or `phi(t) s` in the transform)
    pub z: f64,
    pub t: f64,
    /// source time, used by `E` only
    pub b: f64,
}

/// `phi(t) = e^t - 1`.
pub fn phi(t: f64) -> f64 {
    t.exp_m1()
}

/// Kernel `E(z, t; 0, b; M)` with domain checking.
pub fn kernel_e(p: KernelPoint, mass: &CurvedMass) -> Result<Complex64> {
    let KernelPoint { z, t, b } = p;
    if z < 0.0 || t < 0.0 || b < 0.0 || b > t {
        return Err(KernelError::DomainError(format!(
            "need z >= 0 and 0 <= b <= t, got z={z}, t={t}, b={b}"
        )));
    }
    let edge = t.exp() - b.exp();
    if z > edge {
        return Err(KernelError::DomainError(format!(
            "z={z} beyond dependence edge e^t - e^b = {edge}"
        )));
    }
    if mass.re() < 0.5 && edge - z < E_BOUNDARY_GUARD {
        return Err(KernelError::SingularBoundary(format!(
            "within {E_BOUNDARY_GUARD} of z = e^t - e^b with Re M < 1/2"
        )));
    }
    kernel_e_raw(z, t, b, mass.m)
}

/// The `E` formula without domain guards; also serves the symmetric
/// extension `b > t` used in tests.
pub fn kernel_e_raw(z: f64, t: f64, b: f64, m: Complex64) -> Result<Complex64> {
    let et = t.exp();
    let eb = b.exp();
    let d_minus = (et - eb) * (et - eb) - z * z;
    let d_plus = (et + eb) * (et + eb) - z * z;
    let ratio = (d_minus / d_plus).clamp(0.0, 1.0 - 1e-16);
    let f = hyp2f1(
        HypArgs::new(0.5 - m, 0.5 - m, Complex64::new(1.0, 0.0), ratio),
        HYP_TOL,
    )?;
    let four_pow = (-(m) * 4.0_f64.ln()).exp(); // 4^{-M}
    let expf = (-m * (b + t)).exp();
    let power = ((m - 0.5) * d_plus.ln()).exp(); // d_plus^(M - 1/2)
    Ok(four_pow * expf * power * f)
}

/// `K1(z, t; M) = E(z, t; 0, 0; M)` for `0 <= z <= e^t - 1`.
pub fn kernel_k1(z: f64, t: f64, mass: &CurvedMass) -> Result<Complex64> {
    kernel_e(KernelPoint { z, t, b: 0.0 }, mass)
}

/// `K0(z, t; M) = -[d/db E(z, t; 0, b; M)]_{b=0}` via the closed form,
/// for `0 <= z < e^t - 1` strictly.
pub fn kernel_k0(z: f64, t: f64, mass: &CurvedMass) -> Result<Complex64> {
    let m = mass.m;
    if z < 0.0 || t <= 0.0 {
        return Err(KernelError::DomainError(format!(
            "need z >= 0 and t > 0, got z={z}, t={t}"
        )));
    }
    let et = t.exp();
    let edge = et - 1.0;
    if z > edge - K0_BOUNDARY_GUARD {
        return if z <= edge {
            Err(KernelError::SingularBoundary(format!(
                "within {K0_BOUNDARY_GUARD} of z = e^t - 1"
            )))
        } else {
            Err(KernelError::DomainError(format!(
                "z={z} beyond e^t - 1 = {edge}"
            )))
        };
    }

    let w = (et - 1.0) * (et - 1.0) - z * z;
    let dp = (et + 1.0) * (et + 1.0) - z * z;
    let ratio = (w / dp).clamp(0.0, 1.0 - 1e-16);

    let one = Complex64::new(1.0, 0.0);
    let a_half = 0.5 - m;
    let coef_a = Complex64::new(et - 1.0, 0.0) + m * (et * et - 1.0 - z * z);

    let bracket = if ratio < K0_STABLE_SWITCH {
        // At z -> e^t - 1 the two hypergeometric terms cancel to O(w); use
        // the identity  A·F1 + B·F2 = -(w/2)·F2 + A·ζ·S(ζ)  with
        // S(ζ) = Σ_{k>=1} (1/2-M)_{k-1} (1/2-M)_k k / (k!)^2 ζ^{k-1},
        // which is explicitly O(w) term by term.
        let f2 = hyp2f1(
            HypArgs::new(-0.5 - m, a_half, one, ratio),
            HYP_TOL,
        )?;
        let mut s = Complex64::new(0.0, 0.0);
        let mut poch_prev = one; // (1/2-M)_{k-1} at k=1
        let mut zp = 1.0;
        let mut kfact_sq = 1.0;
        for k in 1..300usize {
            let kf = k as f64;
            let poch_k = poch_prev * (a_half + (kf - 1.0));
            kfact_sq *= kf * kf;
            let term = poch_prev * poch_k * (kf / kfact_sq) * zp;
            s += term;
            if term.norm() <= 1e-18 * (1.0 + s.norm()) {
                break;
            }
            poch_prev = poch_k;
            zp *= ratio;
        }
        -Complex64::new(w / 2.0, 0.0) * f2 + coef_a * ratio * s
    } else {
        let f1 = hyp2f1(HypArgs::new(a_half, a_half, one, ratio), HYP_TOL)?;
        let f2 = hyp2f1(HypArgs::new(-0.5 - m, a_half, one, ratio), HYP_TOL)?;
        let coef_b = Complex64::new(1.0 - et * et + z * z, 0.0) * (0.5 + m);
        coef_a * f1 + coef_b * f2
    };

    let four_pow = (-(m) * 4.0_f64.ln()).exp();
    let expf = (-m * t).exp();
    let power = (m * dp.ln()).exp(); // dp^M
    Ok(-four_pow * expf * power / (w * dp.sqrt()) * bracket)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn masses() -> Vec<CurvedMass> {
        vec![
            CurvedMass::from_real(1, 0.3),
            CurvedMass::from_real(1, 0.5),
            CurvedMass::from_real(1, 1.0),
            CurvedMass::from_real(3, 2.0),
            CurvedMass::from_curved_mass(3, Complex64::new(1.0, 1.0)),
        ]
    }

    #[test]
    fn curved_mass_roundtrip() {
        // Higgs example: n = 3, m^2 = -7/4 gives M = 2
        let cm = CurvedMass::new(3, Complex64::new(-1.75, 0.0));
        assert!((cm.m - Complex64::new(2.0, 0.0)).norm() < 1e-14);
        for cm in masses() {
            let back = cm.m * cm.m + cm.m_sq;
            assert!((back.re - cm.n as f64 * cm.n as f64 / 4.0).abs() < 1e-12);
            assert!(back.im.abs() < 1e-12);
            assert!(cm.m.re >= 0.0);
        }
        // tachyonic-style mass: n=1, m^2 = 5 -> M = i·sqrt(4.75)
        let cm = CurvedMass::new(1, Complex64::new(5.0, 0.0));
        assert!(cm.m.re.abs() < 1e-14 && cm.m.im > 0.0);
        assert!(!cm.theorem_applicable());
        // Re M = 1/2 with imaginary part: excluded by the reality proviso
        let cm = CurvedMass::from_curved_mass(1, Complex64::new(0.5, 0.7));
        assert!(!cm.theorem_applicable());
        assert!(CurvedMass::from_real(1, 0.5).theorem_applicable());
    }

    #[test]
    fn phi_values() {
        assert_eq!(phi(0.0), 0.0);
        assert!((phi(2.0_f64.ln()) - 1.0).abs() < 1e-15);
        assert!((phi(1.0) - (std::f64::consts::E - 1.0)).abs() < 1e-15);
        assert!(phi(2.0) > phi(1.9));
    }

    #[test]
    fn k1_at_origin_is_one_half_for_every_mass() {
        for cm in masses() {
            let v = kernel_k1(0.0, 1e-9, &cm);
            match v {
                Ok(v) => assert!((v - Complex64::new(0.5, 0.0)).norm() < 1e-7, "M={:?}", cm.m),
                Err(e) => panic!("M={:?}: {e}", cm.m),
            }
        }
    }

    #[test]
    fn m_half_collapses_kernels() {
        let cm = CurvedMass::from_real(1, 0.5);
        for &(z, t, b) in &[(0.0, 1.0, 0.5), (0.3, 2.0, 0.0), (1.0, 1.5, 0.2)] {
            let e = kernel_e(KernelPoint { z, t, b }, &cm).unwrap();
            let exact = 0.5 * (-(b + t) / 2.0).exp();
            assert!((e.re - exact).abs() < 1e-13 && e.im.abs() < 1e-13);
        }
        for &(z, t) in &[(0.0, 1.0), (0.5, 1.2), (3.0, 2.0)] {
            let k1 = kernel_k1(z, t, &cm).unwrap();
            let exact = 0.5 * (-t / 2.0).exp();
            assert!((k1.re - exact).abs() < 1e-13);
        }
    }

    #[test]
    fn e_on_axis_with_b_equal_t() {
        // z = 0, b = t: ratio vanishes, E = 4^{-M} e^{-2Mt} (2 e^t)^{2M-1}
        for cm in masses() {
            let t = 0.8;
            let e = kernel_e(KernelPoint { z: 0.0, t, b: t }, &cm);
            let m = cm.m;
            let exact = (-m * 4.0_f64.ln()).exp()
                * (-2.0 * m * t).exp()
                * ((2.0 * m - 1.0) * (2.0 * t.exp()).ln()).exp();
            match e {
                Ok(e) => assert!((e - exact).norm() < 1e-12 * exact.norm(), "M={:?}", m),
                Err(KernelError::SingularBoundary(_)) => {
                    // Re M < 1/2 refuses the boundary point z = e^t - e^b = 0
                    assert!(cm.re() < 0.5);
                    let raw = kernel_e_raw(0.0, t, t, m).unwrap();
                    assert!((raw - exact).norm() < 1e-12 * exact.norm());
                }
                Err(e) => panic!("{e}"),
            }
        }
    }

    #[test]
    fn k1_is_e_at_b_zero() {
        for cm in masses() {
            for &(z, t) in &[(0.1, 0.7), (0.9, 1.3), (2.0, 2.1)] {
                let k1 = kernel_k1(z, t, &cm).unwrap();
                let e = kernel_e(KernelPoint { z, t, b: 0.0 }, &cm).unwrap();
                assert!((k1 - e).norm() <= 1e-14 * e.norm().max(1.0));
            }
        }
    }

    #[test]
    fn e_is_symmetric_under_t_b_exchange() {
        for cm in masses() {
            let a = kernel_e_raw(0.4, 1.4, 0.3, cm.m).unwrap();
            let b = kernel_e_raw(0.4, 0.3, 1.4, cm.m).unwrap();
            assert!((a - b).norm() <= 1e-13 * a.norm());
        }
    }

    #[test]
    fn real_mass_gives_real_kernels() {
        for cm in masses().into_iter().filter(|c| c.is_real()) {
            for &(z, t) in &[(0.0, 0.5), (0.4, 1.0), (1.2, 1.7)] {
                if z >= phi(t) {
                    continue;
                }
                let k0 = kernel_k0(z, t, &cm).unwrap();
                let k1 = kernel_k1(z, t, &cm).unwrap();
                assert!(k0.im.abs() <= 1e-12 * k0.re.abs().max(1e-300));
                assert!(k1.im.abs() <= 1e-12 * k1.re.abs().max(1e-300));
            }
        }
    }

    #[test]
    fn kernels_even_in_z() {
        // the formulas contain z only through z^2
        for cm in masses() {
            let p = kernel_e_raw(0.6, 1.5, 0.2, cm.m).unwrap();
            let m = kernel_e_raw(-0.6, 1.5, 0.2, cm.m).unwrap();
            assert_eq!(p, m);
        }
    }

    /// One-sided Richardson extrapolation of [E(b=h) - E(b=0)]/h.
    fn de_db_at_zero(z: f64, t: f64, m: Complex64) -> Complex64 {
        let e0 = kernel_e_raw(z, t, 0.0, m).unwrap();
        let d = |h: f64| (kernel_e_raw(z, t, h, m).unwrap() - e0) / h;
        let h = 1e-3;
        let d1 = d(h);
        let d2 = d(h / 2.0);
        let d4 = d(h / 4.0);
        let r1 = 2.0 * d2 - d1;
        let r2 = 2.0 * d4 - d2;
        (4.0 * r2 - r1) / 3.0
    }

    #[test]
    fn k0_matches_richardson_derivative_of_e() {
        for cm in masses() {
            for &(z, t) in &[(0.3, 1.0), (0.0, 0.7), (1.5, 1.8), (0.05, 0.31)] {
                if z >= phi(t) - 1e-6 {
                    continue;
                }
                let k0 = kernel_k0(z, t, &cm).unwrap();
                let fd = -de_db_at_zero(z, t, cm.m);
                assert!(
                    (k0 - fd).norm() <= 1e-6 * fd.norm().max(1e-6),
                    "M={:?} z={z} t={t}: {k0} vs {fd}",
                    cm.m
                );
            }
        }
    }

    #[test]
    fn k0_stable_branch_consistent_with_direct() {
        // pick points where ratio straddles the switch and compare against
        // the finite-difference oracle rather than the (cancelling) direct
        // form near the edge
        let cm = CurvedMass::from_real(3, 2.0);
        let t = 1.0_f64;
        let edge = phi(t);
        for &frac in &[0.55, 0.8, 0.95, 0.999] {
            let z = frac * edge;
            let k0 = kernel_k0(z, t, &cm).unwrap();
            let fd = -de_db_at_zero(z, t, cm.m);
            assert!(
                (k0 - fd).norm() <= 2e-6 * fd.norm().max(1e-8),
                "frac={frac}: {k0} vs {fd}"
            );
        }
    }

    #[test]
    fn domain_violations_are_rejected() {
        let cm = CurvedMass::from_real(1, 1.0);
        assert!(matches!(
            kernel_e(KernelPoint { z: 10.0, t: 1.0, b: 0.0 }, &cm),
            Err(KernelError::DomainError(_))
        ));
        assert!(matches!(
            kernel_k0(phi(1.0) - 1e-12, 1.0, &cm),
            Err(KernelError::SingularBoundary(_))
        ));
        let small = CurvedMass::from_real(1, 0.3);
        assert!(matches!(
            kernel_e(
                KernelPoint { z: phi(1.0) - 1e-14, t: 1.0, b: 0.0 },
                &small
            ),
            Err(KernelError::SingularBoundary(_))
        ));
    }
}
