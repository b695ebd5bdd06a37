//! Bessel functions J and Y of real non-negative order, via Steed's method:
//! CF1 plus downward recurrence for J, Temme's series (small x) or the
//! complex continued fraction CF2 (x >= 2) for Y, then upward recurrence.

use super::{Result, SpecFunError};
use std::f64::consts::PI;

const EPS: f64 = 1e-16;
const FPMIN: f64 = 1e-300;
const MAX_ITER: usize = 30_000;
const XMIN_CF2: f64 = 2.0;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const ZETA2: f64 = PI * PI / 6.0;
const ZETA3: f64 = 1.202_056_903_159_594_3;
const ZETA4: f64 = 1.082_323_233_711_138_2;
const ZETA5: f64 = 1.036_927_755_143_370_0;

/// `(J_order(x), Y_order(x))` to ~1e-12 relative accuracy.
pub fn bessel_jy(order: f64, x: f64) -> Result<(f64, f64)> {
    bessel_jy_with_derivatives(order, x).map(|(j, y, _, _)| (j, y))
}

/// `(J, Y, J', Y')` at real order `>= 0` and `x > 0`.
pub fn bessel_jy_with_derivatives(order: f64, x: f64) -> Result<(f64, f64, f64, f64)> {
    if !(x > 0.0) {
        return Err(SpecFunError::DomainError(format!(
            "bessel_jy requires x > 0, got {x}"
        )));
    }
    if !(order >= 0.0) {
        return Err(SpecFunError::DomainError(format!(
            "bessel_jy requires order >= 0, got {order}"
        )));
    }
    // Steed's CF1 needs O(x) iterations; beyond this point the Hankel
    // asymptotic expansion is both cheaper and fully converged.
    if x > 100.0 + order * order {
        return Ok(hankel_asymptotic(order, x));
    }

    let nl = if x < XMIN_CF2 {
        (order + 0.5) as i32
    } else {
        ((order - x + 1.5) as i32).max(0)
    };
    let xmu = order - nl as f64;
    let xmu2 = xmu * xmu;
    let xi = 1.0 / x;
    let xi2 = 2.0 * xi;
    let wron = xi2 / PI;

    // CF1 for f = J'_order / J_order (modified Lentz), tracking sign(J).
    let mut isign = 1.0_f64;
    let mut h = (order * xi).max(FPMIN);
    let mut b = xi2 * order;
    let mut d = 0.0;
    let mut c = h;
    let mut converged = false;
    for _ in 0..MAX_ITER {
        b += xi2;
        d = b - d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = b - 1.0 / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let del = c * d;
        h *= del;
        if d < 0.0 {
            isign = -isign;
        }
        if (del - 1.0).abs() < EPS {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(SpecFunError::NonConvergence {
            max_terms: MAX_ITER,
            z_abs: x,
        });
    }

    // Downward recurrence from `order` to `xmu` (J and J' up to a common scale).
    let mut rjl = isign * FPMIN;
    let mut rjpl = h * rjl;
    let rjl_top = rjl;
    let rjpl_top = rjpl;
    let mut fact = order * xi;
    for _ in 0..nl {
        let rjtemp = fact * rjl + rjpl;
        fact -= xi;
        rjpl = fact * rjtemp - rjl;
        rjl = rjtemp;
    }
    if rjl == 0.0 {
        rjl = EPS;
    }
    let f = rjpl / rjl;

    let (rjmu, mut rymu, mut ry1, rymup);
    if x < XMIN_CF2 {
        // Temme's series for Y_xmu and Y_{xmu+1}.
        let x2 = 0.5 * x;
        let pimu = PI * xmu;
        let fct = if pimu.abs() < EPS { 1.0 } else { pimu / pimu.sin() };
        let mut dd = -x2.ln();
        let mut e = xmu * dd;
        let fct2 = if e.abs() < EPS { 1.0 } else { e.sinh() / e };
        let (gam1, gam2, gampl, gammi) = temme_gammas(xmu);
        let mut ff = 2.0 / PI * fct * (gam1 * e.cosh() + gam2 * fct2 * dd);
        e = e.exp();
        let mut p = e / (gampl * PI);
        let mut q = 1.0 / (e * PI * gammi);
        let pimu2 = 0.5 * pimu;
        let fct3 = if pimu2.abs() < EPS {
            1.0
        } else {
            pimu2.sin() / pimu2
        };
        let r = PI * pimu2 * fct3 * fct3;
        let mut cc = 1.0;
        dd = -x2 * x2;
        let mut sum = ff + r * q;
        let mut sum1 = p;
        let mut ok = false;
        for i in 1..=MAX_ITER {
            let fi = i as f64;
            ff = (fi * ff + p + q) / (fi * fi - xmu2);
            cc *= dd / fi;
            p /= fi - xmu;
            q /= fi + xmu;
            let del = cc * (ff + r * q);
            sum += del;
            let del1 = cc * p - fi * del;
            sum1 += del1;
            if del.abs() < (1.0 + sum.abs()) * EPS {
                ok = true;
                break;
            }
        }
        if !ok {
            return Err(SpecFunError::NonConvergence {
                max_terms: MAX_ITER,
                z_abs: x,
            });
        }
        rymu = -sum;
        ry1 = -sum1 * xi2;
        rymup = xmu * xi * rymu - ry1;
        rjmu = wron / (rymup - f * rymu);
    } else {
        // CF2: p + i q = (J' + i Y') / (J + i Y) at order xmu.
        let mut a = 0.25 - xmu2;
        let mut p = -0.5 * xi;
        let mut q = 1.0;
        let br = 2.0 * x;
        let mut bi = 2.0;
        let mut fct = a * xi / (p * p + q * q);
        let mut cr = br + q * fct;
        let mut ci = bi + p * fct;
        let mut den = br * br + bi * bi;
        let mut dr = br / den;
        let mut di = -bi / den;
        let mut dlr = cr * dr - ci * di;
        let mut dli = cr * di + ci * dr;
        let temp = p * dlr - q * dli;
        q = p * dli + q * dlr;
        p = temp;
        let mut ok = false;
        for i in 2..=MAX_ITER {
            a += 2.0 * (i as f64 - 1.0);
            bi += 2.0;
            dr = a * dr + br;
            di = a * di + bi;
            if dr.abs() + di.abs() < FPMIN {
                dr = FPMIN;
            }
            fct = a / (cr * cr + ci * ci);
            cr = br + cr * fct;
            ci = bi - ci * fct;
            if cr.abs() + ci.abs() < FPMIN {
                cr = FPMIN;
            }
            den = dr * dr + di * di;
            dr /= den;
            di /= -den;
            dlr = cr * dr - ci * di;
            dli = cr * di + ci * dr;
            let temp = p * dlr - q * dli;
            q = p * dli + q * dlr;
            p = temp;
            if (dlr - 1.0).abs() + dli.abs() < EPS {
                ok = true;
                break;
            }
        }
        if !ok {
            return Err(SpecFunError::NonConvergence {
                max_terms: MAX_ITER,
                z_abs: x,
            });
        }
        let gam = (p - f) / q;
        let mut rj = (wron / ((p - f) * gam + q)).sqrt();
        if rjl < 0.0 {
            rj = -rj;
        }
        rjmu = rj;
        rymu = rjmu * gam;
        rymup = rymu * (p + q / gam);
        ry1 = xmu * xi * rymu - rymup;
    }

    // Scale J back to the requested order and recur Y upward.
    let fact = rjmu / rjl;
    let rj = rjl_top * fact;
    let rjp = rjpl_top * fact;
    for i in 1..=nl {
        let rytemp = (xmu + i as f64) * xi2 * ry1 - rymu;
        rymu = ry1;
        ry1 = rytemp;
    }
    let ry = rymu;
    let ryp = order * xi * rymu - ry1;
    Ok((rj, ry, rjp, ryp))
}

/// Hankel asymptotic expansion, valid for large `x`:
/// `J = sqrt(2/(πx)) (P cos χ - Q sin χ)`, `Y = sqrt(2/(πx)) (P sin χ + Q cos χ)`
/// with `χ = x - (ν/2 + 1/4)π`; derivatives via the order-raising recurrence.
fn hankel_asymptotic(nu: f64, x: f64) -> (f64, f64, f64, f64) {
    fn pq(nu: f64, x: f64) -> (f64, f64) {
        let mu = 4.0 * nu * nu;
        let mut p = 1.0;
        let mut q = 0.0;
        let mut term: f64 = 1.0;
        let mut sign_p = -1.0;
        let mut sign_q = 1.0;
        let mut prev = f64::INFINITY;
        for k in 1..40u32 {
            let odd = (2 * k - 1) as f64;
            term *= (mu - odd * odd) / (k as f64 * 8.0 * x);
            if term.abs() >= prev {
                break; // asymptotic tail started to diverge
            }
            prev = term.abs();
            if k % 2 == 1 {
                q += sign_q * term;
                sign_q = -sign_q;
            } else {
                p += sign_p * term;
                sign_p = -sign_p;
            }
            if term.abs() < 1e-17 {
                break;
            }
        }
        (p, q)
    }
    let pref = (2.0 / (PI * x)).sqrt();
    let eval = |nu: f64| -> (f64, f64) {
        let (p, q) = pq(nu, x);
        let chi = x - (0.5 * nu + 0.25) * PI;
        let (s, c) = chi.sin_cos();
        (pref * (p * c - q * s), pref * (p * s + q * c))
    };
    let (j, y) = eval(nu);
    let (j1, y1) = eval(nu + 1.0);
    let jp = nu / x * j - j1;
    let yp = nu / x * y - y1;
    (j, y, jp, yp)
}

/// `gam1 = [1/Γ(1-μ) - 1/Γ(1+μ)]/(2μ)`, `gam2 = [1/Γ(1-μ) + 1/Γ(1+μ)]/2`,
/// plus `1/Γ(1+μ)` and `1/Γ(1-μ)`, stable through μ = 0, for |μ| <= 1/2.
fn temme_gammas(mu: f64) -> (f64, f64, f64, f64) {
    debug_assert!(mu.abs() <= 0.5 + 1e-12);
    // ln(1/Γ(1+x)) = γx - ζ2 x²/2 + ζ3 x³/3 - ζ4 x⁴/4 + ζ5 x⁵/5 - ...
    // split into even part A and odd part B so the difference is exact.
    let (a, b) = if mu.abs() < 0.01 {
        let m2 = mu * mu;
        (
            -ZETA2 * m2 / 2.0 - ZETA4 * m2 * m2 / 4.0,
            mu * (EULER_GAMMA + ZETA3 * m2 / 3.0 + ZETA5 * m2 * m2 / 5.0),
        )
    } else {
        let lp = -super::gamma::ln_gamma_real(1.0 + mu);
        let lm = -super::gamma::ln_gamma_real(1.0 - mu);
        ((lp + lm) / 2.0, (lp - lm) / 2.0)
    };
    let ea = a.exp();
    let sinhc = if b.abs() < 1e-4 {
        let b2 = b * b;
        1.0 + b2 / 6.0 + b2 * b2 / 120.0
    } else {
        b.sinh() / b
    };
    // B/μ is finite and smooth at μ = 0.
    let b_over_mu = if mu.abs() < 0.01 {
        EULER_GAMMA + ZETA3 * mu * mu / 3.0 + ZETA5 * mu.powi(4) / 5.0
    } else {
        b / mu
    };
    let gam1 = -ea * b_over_mu * sinhc;
    let gam2 = ea * b.cosh();
    let gampl = (a + b).exp();
    let gammi = (a - b).exp();
    (gam1, gam2, gampl, gammi)
}
