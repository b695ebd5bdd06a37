//! Gauss–Legendre rules on [0, 1]: a single Newton-computed panel for small
//! node counts, composite 16-point panels beyond. Node/weight tables are
//! cached per count.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

const COMPOSITE_BASE: usize = 16;
const SINGLE_PANEL_MAX: usize = 64;

/// Nodes and weights integrating smooth functions over [0, 1].
pub fn gl_rule_01(n: usize) -> std::sync::Arc<Vec<(f64, f64)>> {
    assert!(n >= 4, "quadrature node counts must be >= 4");
    static CACHE: OnceLock<Mutex<HashMap<usize, std::sync::Arc<Vec<(f64, f64)>>>>> =
        OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap();
    guard
        .entry(n)
        .or_insert_with(|| std::sync::Arc::new(build_rule(n)))
        .clone()
}

fn build_rule(n: usize) -> Vec<(f64, f64)> {
    if n <= SINGLE_PANEL_MAX {
        return legendre_nodes(n)
            .into_iter()
            .map(|(x, w)| ((x + 1.0) / 2.0, w / 2.0))
            .collect();
    }
    // composite: ceil(n/16) panels of the 16-point rule
    let panels = n.div_ceil(COMPOSITE_BASE);
    let base = legendre_nodes(COMPOSITE_BASE);
    let width = 1.0 / panels as f64;
    let mut out = Vec::with_capacity(panels * COMPOSITE_BASE);
    for p in 0..panels {
        let left = p as f64 * width;
        for &(x, w) in &base {
            out.push((left + (x + 1.0) / 2.0 * width, w / 2.0 * width));
        }
    }
    out
}

/// Gauss–Legendre nodes/weights on [-1, 1] by Newton iteration on P_n.
fn legendre_nodes(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi-style initial guess
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_eval(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push((-x, w));
        if n - 1 - i != i {
            out.push((x, w));
        }
    }
    out.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    out
}

/// `(P_n(x), P_n'(x))` via the three-term recurrence.
fn legendre_eval(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}
