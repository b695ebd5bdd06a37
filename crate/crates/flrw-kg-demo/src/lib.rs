//! Interactive browser bindings: classify parameter points, paint the
//! (γ, Γ) condition domain, sample kernel profiles, and evaluate the
//! lifespan machinery.

use flrw_kg::analysis::{classify, lifespan_i, lifespan_inverse, CaseLabel, ModelParams};
use flrw_kg::kernels::{kernel_k0, kernel_k1, phi, CurvedMass};
use flrw_kg::Complex64;
use wasm_bindgen::prelude::*;

fn params(n: u32, m: f64, alpha: f64, gamma: f64, gamma_damp: f64) -> ModelParams {
    ModelParams::with_curved_mass(n.max(1), m, alpha, gamma, gamma_damp, 1.0)
}

/// JSON verdict for a single parameter point.
#[wasm_bindgen]
pub fn classify_point(n: u32, m: f64, alpha: f64, gamma: f64, gamma_damp: f64) -> String {
    let v = classify(&params(n, m, alpha, gamma, gamma_damp));
    serde_json::json!({
        "case": v.case.as_str(),
        "case_integral_eq": v.case_integral_eq.as_str(),
        "case_bound_regime": v.case_bound_regime.as_str(),
        "global": v.case.is_global(),
        "applicable": v.applicable,
        "slacks": [
            v.slacks.growth_balance,
            v.slacks.weight_margin,
            v.slacks.damping_margin,
        ],
    })
    .to_string()
}

fn case_color(c: CaseLabel) -> [u8; 4] {
    match c {
        CaseLabel::I => [46, 160, 67, 255],     // green
        CaseLabel::II => [0, 109, 50, 255],     // dark green
        CaseLabel::III => [130, 200, 120, 255], // light green
        CaseLabel::IV => [205, 92, 92, 255],    // red
        CaseLabel::V => [139, 0, 0, 255],       // dark red
        CaseLabel::VI => [240, 160, 120, 255],  // orange
        CaseLabel::Boundary => [200, 200, 80, 255],
        CaseLabel::Inapplicable => [120, 120, 120, 255],
    }
}

/// RGBA image of the (γ, Γ) plane at fixed (n, M, α): γ on the x axis from
/// `gamma_lo` to `gamma_hi`, Γ on the y axis from top `gd_hi` to bottom
/// `gd_lo`.
#[wasm_bindgen]
pub fn domain_image(
    n: u32,
    m: f64,
    alpha: f64,
    gamma_lo: f64,
    gamma_hi: f64,
    gd_lo: f64,
    gd_hi: f64,
    width: u32,
    height: u32,
) -> Vec<u8> {
    let mut out = Vec::with_capacity((width * height * 4) as usize);
    for iy in 0..height {
        let gd = gd_hi - (gd_hi - gd_lo) * (iy as f64 + 0.5) / height as f64;
        for ix in 0..width {
            let g = gamma_lo + (gamma_hi - gamma_lo) * (ix as f64 + 0.5) / width as f64;
            let v = classify(&params(n, m, alpha, g, gd));
            out.extend_from_slice(&case_color(v.case));
        }
    }
    out
}

/// Kernel magnitudes along `z = φ(t)·s`: returns `[s..., |K1|..., |K0|...]`
/// at `samples` interior points.
#[wasm_bindgen]
pub fn kernel_profiles(t: f64, m_re: f64, m_im: f64, samples: u32) -> Vec<f64> {
    let mass = CurvedMass::from_curved_mass(3, Complex64::new(m_re.max(0.0), m_im));
    let n = samples.max(8) as usize;
    let mut s_vals = Vec::with_capacity(n);
    let mut k1_vals = Vec::with_capacity(n);
    let mut k0_vals = Vec::with_capacity(n);
    for i in 0..n {
        let s = (i as f64 + 0.5) / n as f64;
        let z = phi(t) * s;
        s_vals.push(s);
        k1_vals.push(kernel_k1(z, t, &mass).map_or(f64::NAN, |v| v.norm()));
        k0_vals.push(kernel_k0(z, t, &mass).map_or(f64::NAN, |v| v.norm()));
    }
    let mut out = s_vals;
    out.extend_from_slice(&k1_vals);
    out.extend_from_slice(&k0_vals);
    out
}

/// Samples of the growth function `I(t)` on `[0, t_max]`.
#[wasm_bindgen]
pub fn lifespan_curve(
    n: u32,
    m: f64,
    alpha: f64,
    gamma: f64,
    gamma_damp: f64,
    t_max: f64,
    samples: u32,
) -> Vec<f64> {
    let p = params(n, m, alpha, gamma, gamma_damp);
    let k = samples.max(8) as usize;
    (0..k)
        .map(|i| lifespan_i(t_max * i as f64 / (k - 1) as f64, &p))
        .collect()
}

/// Lifespan lower bound `inverse_I(C ε^{-α})` over a log-ε range; entries are
/// NaN when the parameters sit in a global-existence regime.
#[wasm_bindgen]
pub fn lifespan_bound_line(
    n: u32,
    m: f64,
    alpha: f64,
    gamma: f64,
    gamma_damp: f64,
    c: f64,
    log10_eps_lo: f64,
    log10_eps_hi: f64,
    samples: u32,
) -> Vec<f64> {
    let p = params(n, m, alpha, gamma, gamma_damp);
    let k = samples.max(2) as usize;
    (0..k)
        .map(|i| {
            let le = log10_eps_lo + (log10_eps_hi - log10_eps_lo) * i as f64 / (k - 1) as f64;
            let eps = 10f64.powf(le);
            lifespan_inverse(c * eps.powf(-alpha), &p).unwrap_or(f64::NAN)
        })
        .collect()
}
