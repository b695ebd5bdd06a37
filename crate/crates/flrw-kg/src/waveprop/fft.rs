//! Shared FFT plans, multi-axis transforms over row-major grids.

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

struct Plans {
    forward: HashMap<usize, Arc<dyn Fft<f64>>>,
    inverse: HashMap<usize, Arc<dyn Fft<f64>>>,
}

fn plans() -> &'static Mutex<Plans> {
    static PLANS: OnceLock<Mutex<Plans>> = OnceLock::new();
    PLANS.get_or_init(|| {
        Mutex::new(Plans {
            forward: HashMap::new(),
            inverse: HashMap::new(),
        })
    })
}

fn plan(len: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    let mut guard = plans().lock().unwrap();
    let map = if inverse {
        &mut guard.inverse
    } else {
        &mut guard.forward
    };
    map.entry(len)
        .or_insert_with(|| {
            let mut planner = FftPlanner::new();
            if inverse {
                planner.plan_fft_inverse(len)
            } else {
                planner.plan_fft_forward(len)
            }
        })
        .clone()
}

/// In-place FFT along every axis of a row-major `n^dims` grid.
/// Unnormalized, matching the underlying library convention.
pub fn fft_all_axes(values: &mut [Complex64], n: usize, dims: u32, inverse: bool) {
    let fft = plan(n, inverse);
    let total = values.len();
    debug_assert_eq!(total, n.pow(dims));
    let mut scratch = vec![Complex64::new(0.0, 0.0); n];

    for axis in 0..dims {
        let stride = n.pow(axis);
        let block = stride * n;
        let lines = total / n;
        for line in 0..lines {
            // decompose line index into (block index, offset within stride)
            let blk = line / stride;
            let off = line % stride;
            let base = blk * block + off;
            if stride == 1 {
                fft.process(&mut values[base..base + n]);
            } else {
                for (i, s) in scratch.iter_mut().enumerate() {
                    *s = values[base + i * stride];
                }
                fft.process(&mut scratch);
                for (i, s) in scratch.iter().enumerate() {
                    values[base + i * stride] = *s;
                }
            }
        }
    }
}
