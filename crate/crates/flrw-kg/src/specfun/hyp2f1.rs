//! Gauss hypergeometric function `2F1(a, b; c; z)` for complex parameters
//! and real argument `z ∈ [0, 1)`.
//!
//! Evaluation strategy:
//! * terminating polynomial when `a` or `b` is a non-positive integer;
//! * direct power series for `z <= 0.75`;
//! * the `z -> 1-z` connection formula beyond, including the logarithmic
//!   variant when `c - a - b` is an integer.

use super::gamma::{digamma_c, gamma_c};
use super::{Result, SpecFunError};
use num_complex::Complex64;

const SWITCH_Z: f64 = 0.75;
const MAX_TERMS: usize = 10_000;
/// Largest integer `|c - a - b|` handled by the logarithmic connection
/// formula; larger gaps do not occur in the parameter ranges we support.
const MAX_INT_GAP: i64 = 8;
const INT_DETECT: f64 = 1e-12;

/// Argument bundle for [`hyp2f1`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HypArgs {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub z: f64,
}

impl HypArgs {
    pub fn new(a: Complex64, b: Complex64, c: Complex64, z: f64) -> Self {
        Self { a, b, c, z }
    }

    pub fn real(a: f64, b: f64, c: f64, z: f64) -> Self {
        Self {
            a: Complex64::new(a, 0.0),
            b: Complex64::new(b, 0.0),
            c: Complex64::new(c, 0.0),
            z,
        }
    }

    fn validate(&self, tol: f64) -> Result<()> {
        if !(tol > 0.0 && tol <= 1e-6) {
            return Err(SpecFunError::InvalidArgs(format!(
                "tol must lie in (0, 1e-6], got {tol}"
            )));
        }
        if nonpositive_int(self.c).is_some() {
            return Err(SpecFunError::InvalidArgs(format!(
                "c = {} is a non-positive integer",
                self.c
            )));
        }
        if !(0.0..1.0).contains(&self.z) {
            return Err(SpecFunError::InvalidArgs(format!(
                "z = {} outside [0, 1); z = 1 is served by gauss_sum",
                self.z
            )));
        }
        Ok(())
    }
}

/// Is `x` a non-positive integer (within detection tolerance)?
/// Returns `n` such that `x ≈ -n`.
fn nonpositive_int(x: Complex64) -> Option<usize> {
    if x.im.abs() > INT_DETECT {
        return None;
    }
    let r = x.re.round();
    if (x.re - r).abs() <= INT_DETECT * (1.0 + x.re.abs()) && r <= 0.0 {
        Some((-r) as usize)
    } else {
        None
    }
}

fn nearest_int(x: Complex64) -> Option<i64> {
    if x.im.abs() > INT_DETECT {
        return None;
    }
    let r = x.re.round();
    if (x.re - r).abs() <= INT_DETECT * (1.0 + x.re.abs()) {
        Some(r as i64)
    } else {
        None
    }
}

/// Gauss hypergeometric function with relative accuracy `<= tol`.
pub fn hyp2f1(args: HypArgs, tol: f64) -> Result<Complex64> {
    args.validate(tol)?;
    let HypArgs { a, b, c, z } = args;

    if let Some(n) = nonpositive_int(a) {
        return Ok(terminating_sum(a, b, c, z, n));
    }
    if let Some(n) = nonpositive_int(b) {
        return Ok(terminating_sum(b, a, c, z, n));
    }
    if z <= SWITCH_Z {
        return power_series(a, b, c, z);
    }
    connection(a, b, c, z, tol)
}

/// Gauss summation formula: `2F1(a, b; c; 1) = Γ(c)Γ(c-a-b) / (Γ(c-a)Γ(c-b))`.
pub fn gauss_sum(a: Complex64, b: Complex64, c: Complex64) -> Result<Complex64> {
    let mu = c - a - b;
    if mu.re <= 0.0 {
        return Err(SpecFunError::DomainError(format!(
            "gauss_sum needs Re(c-a-b) > 0, got {}",
            mu.re
        )));
    }
    if nonpositive_int(c).is_some() {
        return Err(SpecFunError::InvalidArgs(format!(
            "c = {c} is a non-positive integer"
        )));
    }
    if nonpositive_int(c - a).is_some() || nonpositive_int(c - b).is_some() {
        // gamma pole in a denominator: the limit vanishes
        return Ok(Complex64::new(0.0, 0.0));
    }
    Ok(gamma_c(c) * gamma_c(mu) / (gamma_c(c - a) * gamma_c(c - b)))
}

/// Finite sum for `a = -n`: the series truncates exactly; valid for any z.
fn terminating_sum(a: Complex64, b: Complex64, c: Complex64, z: f64, n: usize) -> Complex64 {
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    for k in 0..n {
        let kf = k as f64;
        term *= (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * z;
        sum += term;
    }
    sum
}

fn power_series(a: Complex64, b: Complex64, c: Complex64, z: f64) -> Result<Complex64> {
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut small_streak = 0;
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        term *= (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * z;
        sum += term;
        if term.norm() <= f64::EPSILON * sum.norm() {
            small_streak += 1;
            if small_streak >= 2 {
                return Ok(sum);
            }
        } else {
            small_streak = 0;
        }
    }
    Err(SpecFunError::NonConvergence {
        max_terms: MAX_TERMS,
        z_abs: z,
    })
}

fn connection(a: Complex64, b: Complex64, c: Complex64, z: f64, tol: f64) -> Result<Complex64> {
    let mu = c - a - b;
    if let Some(m) = nearest_int(mu) {
        if m.abs() > MAX_INT_GAP {
            return Err(SpecFunError::InvalidArgs(format!(
                "integer c-a-b = {m} exceeds supported magnitude {MAX_INT_GAP}"
            )));
        }
        if m < 0 {
            // Euler transform flips the sign of the gap:
            // F(a,b;c;z) = (1-z)^(c-a-b) F(c-a, c-b; c; z).
            let w = 1.0 - z;
            let pref = Complex64::new(w, 0.0).powc(mu);
            let inner = hyp2f1(HypArgs::new(c - a, c - b, c, z), tol)?;
            return Ok(pref * inner);
        }
        return log_connection(a, b, m as usize, z);
    }

    // Generic connection formula (non-integer gap):
    // F = Γ(c)Γ(μ)/(Γ(c-a)Γ(c-b)) F(a,b;1-μ;w)
    //   + w^μ Γ(c)Γ(-μ)/(Γ(a)Γ(b)) F(c-a,c-b;1+μ;w),  w = 1-z.
    // A gamma pole in a denominator kills that term exactly.
    let w = 1.0 - z;
    let one = Complex64::new(1.0, 0.0);
    let gc = gamma_c(c);
    let t1 = if nonpositive_int(c - a).is_some() || nonpositive_int(c - b).is_some() {
        Complex64::new(0.0, 0.0)
    } else {
        let f1 = power_series(a, b, one - mu, w)?;
        gc * gamma_c(mu) / (gamma_c(c - a) * gamma_c(c - b)) * f1
    };
    let f2 = power_series(c - a, c - b, one + mu, w)?;
    let t2 = gc * gamma_c(-mu) / (gamma_c(a) * gamma_c(b)) * Complex64::new(w, 0.0).powc(mu) * f2;
    Ok(t1 + t2)
}

/// Connection formula when `c = a + b + m` with integer `m >= 0`.
fn log_connection(a: Complex64, b: Complex64, m: usize, z: f64) -> Result<Complex64> {
    let w = 1.0 - z;
    let lnw = w.ln();
    let c = a + b + m as f64;
    let gc = gamma_c(c);

    if m == 0 {
        // F(a,b;a+b;z) = Γ(a+b)/(Γ(a)Γ(b)) Σ t_n [2ψ(n+1) - ψ(a+n) - ψ(b+n) - ln w] w^n
        let pref = gc / (gamma_c(a) * gamma_c(b));
        let mut coeff = Complex64::new(1.0, 0.0);
        let mut psi_n = -0.577_215_664_901_532_9; // ψ(1)
        let mut psi_a = digamma_c(a);
        let mut psi_b = digamma_c(b);
        let mut wp = 1.0;
        let mut sum = Complex64::new(0.0, 0.0);
        for n in 0..MAX_TERMS {
            let nf = n as f64;
            let bracket = 2.0 * psi_n - psi_a - psi_b - lnw;
            let term = coeff * bracket * wp;
            sum += term;
            if term.norm() <= f64::EPSILON * sum.norm() && n > 2 {
                return Ok(pref * sum);
            }
            coeff *= (a + nf) * (b + nf) / ((nf + 1.0) * (nf + 1.0));
            psi_n += 1.0 / (nf + 1.0);
            psi_a += 1.0 / (a + nf);
            psi_b += 1.0 / (b + nf);
            wp *= w;
        }
        return Err(SpecFunError::NonConvergence {
            max_terms: MAX_TERMS,
            z_abs: z,
        });
    }

    // Finite part: Γ(m)Γ(c)/(Γ(a+m)Γ(b+m)) Σ_{n<m} (a)_n(b)_n/(n!(1-m)_n) w^n
    let mut finite = Complex64::new(0.0, 0.0);
    {
        let pref = gamma_c(Complex64::new(m as f64, 0.0)) * gc
            / (gamma_c(a + m as f64) * gamma_c(b + m as f64));
        let mut coeff = Complex64::new(1.0, 0.0);
        let mut wp = 1.0;
        for n in 0..m {
            finite += coeff * wp;
            let nf = n as f64;
            coeff *= (a + nf) * (b + nf) / ((nf + 1.0) * (1.0 - m as f64 + nf));
            wp *= w;
        }
        finite *= pref;
    }

    // Logarithmic part:
    // -(-1)^m Γ(c)/(Γ(a)Γ(b)) w^m Σ_n (a+m)_n(b+m)_n/(n!(n+m)!) w^n
    //   [ln w - ψ(n+1) - ψ(n+m+1) + ψ(a+m+n) + ψ(b+m+n)]
    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
    let pref = -sign * gc / (gamma_c(a) * gamma_c(b)) * w.powi(m as i32);
    let mut coeff = Complex64::new(1.0, 0.0) / gamma_c(Complex64::new(m as f64 + 1.0, 0.0)); // 1/m!
    let mut psi1 = -0.577_215_664_901_532_9; // ψ(1)
    let mut psi2 = psi1 + (1..=m).map(|k| 1.0 / k as f64).sum::<f64>(); // ψ(m+1)
    let mut psi_a = digamma_c(a + m as f64);
    let mut psi_b = digamma_c(b + m as f64);
    let mut wp = 1.0;
    let mut logsum = Complex64::new(0.0, 0.0);
    for n in 0..MAX_TERMS {
        let nf = n as f64;
        let bracket = lnw - psi1 - psi2 + psi_a + psi_b;
        let term = coeff * bracket * wp;
        logsum += term;
        if term.norm() <= f64::EPSILON * (logsum.norm() + finite.norm()) && n > 2 {
            return Ok(finite + pref * logsum);
        }
        coeff *= (a + m as f64 + nf) * (b + m as f64 + nf) / ((nf + 1.0) * (nf + 1.0 + m as f64));
        psi1 += 1.0 / (nf + 1.0);
        psi2 += 1.0 / (nf + 1.0 + m as f64);
        psi_a += 1.0 / (a + m as f64 + nf);
        psi_b += 1.0 / (b + m as f64 + nf);
        wp *= w;
    }
    Err(SpecFunError::NonConvergence {
        max_terms: MAX_TERMS,
        z_abs: z,
    })
}
