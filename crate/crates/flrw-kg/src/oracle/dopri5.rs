//! Dormand–Prince 5(4) embedded Runge–Kutta with PI step-size control,
//! on flat complex state vectors.

use num_complex::Complex64;

// Butcher tableau.
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

#[derive(Debug, Clone, Copy)]
pub struct Dopri5Options {
    pub rtol: f64,
    pub atol: f64,
    pub max_step: f64,
    pub min_step: f64,
    pub max_steps: usize,
}

impl Default for Dopri5Options {
    fn default() -> Self {
        Self {
            rtol: 1e-8,
            atol: 1e-10,
            max_step: f64::INFINITY,
            min_step: 1e-12,
            max_steps: 50_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Halt {
    Continue,
    Stop,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntegrationStatus {
    Reached,
    StoppedByObserver,
    StepUnderflow,
    StepBudgetExhausted,
}

#[derive(Debug)]
pub struct Integration {
    pub t: f64,
    pub y: Vec<Complex64>,
    pub status: IntegrationStatus,
    pub steps_accepted: usize,
    pub steps_rejected: usize,
}

/// Integrate `y' = rhs(t, y)` from `t0` to `t_end`.
///
/// The observer sees every accepted step (including the initial state) and
/// may stop the run.
pub fn integrate(
    mut rhs: impl FnMut(f64, &[Complex64], &mut [Complex64]),
    t0: f64,
    t_end: f64,
    y0: Vec<Complex64>,
    opts: &Dopri5Options,
    mut observer: impl FnMut(f64, &[Complex64]) -> Halt,
) -> Integration {
    let dim = y0.len();
    let mut y = y0;
    let mut t = t0;
    let mut k: Vec<Vec<Complex64>> = (0..7).map(|_| vec![Complex64::default(); dim]).collect();
    let mut ytmp = vec![Complex64::default(); dim];
    let mut y5 = vec![Complex64::default(); dim];

    if observer(t, &y) == Halt::Stop {
        return Integration {
            t,
            y,
            status: IntegrationStatus::StoppedByObserver,
            steps_accepted: 0,
            steps_rejected: 0,
        };
    }

    rhs(t, &y, &mut k[0]);

    // initial step-size guess from the RHS scale
    let ynorm = y.iter().map(|v| v.norm()).fold(0.0, f64::max).max(1e-8);
    let fnorm = k[0].iter().map(|v| v.norm()).fold(0.0, f64::max);
    let mut h = (0.01 * ynorm / fnorm.max(1e-14))
        .min(opts.max_step)
        .min((t_end - t0).abs() * 0.1)
        .max(opts.min_step);

    let mut err_prev: f64 = 1.0;
    let mut accepted = 0usize;
    let mut rejected = 0usize;

    for _ in 0..opts.max_steps {
        if t >= t_end {
            return Integration {
                t,
                y,
                status: IntegrationStatus::Reached,
                steps_accepted: accepted,
                steps_rejected: rejected,
            };
        }
        h = h.min(t_end - t).min(opts.max_step);
        if h < opts.min_step {
            return Integration {
                t,
                y,
                status: IntegrationStatus::StepUnderflow,
                steps_accepted: accepted,
                steps_rejected: rejected,
            };
        }

        // stages (k0 is fresh from the last accepted step: FSAL)
        for s in 1..7 {
            for i in 0..dim {
                let mut acc = Complex64::default();
                for (j, kj) in k.iter().enumerate().take(s) {
                    let a = A[s - 1][j];
                    if a != 0.0 {
                        acc += a * kj[i];
                    }
                }
                ytmp[i] = y[i] + h * acc;
            }
            let ts = t + C[s] * h;
            rhs(ts, &ytmp, &mut k[s]);
        }

        // 5th-order solution and embedded error
        let mut err_sq = 0.0;
        for i in 0..dim {
            let mut acc5 = Complex64::default();
            let mut acc4 = Complex64::default();
            for s in 0..7 {
                if B5[s] != 0.0 {
                    acc5 += B5[s] * k[s][i];
                }
                if B4[s] != 0.0 {
                    acc4 += B4[s] * k[s][i];
                }
            }
            y5[i] = y[i] + h * acc5;
            let e = h * (acc5 - acc4);
            let scale = opts.atol + opts.rtol * y[i].norm().max(y5[i].norm());
            let r = e.norm() / scale;
            err_sq += r * r;
        }
        let err = (err_sq / dim as f64).sqrt().max(1e-30);

        if err <= 1.0 {
            t += h;
            std::mem::swap(&mut y, &mut y5);
            accepted += 1;
            if observer(t, &y) == Halt::Stop {
                return Integration {
                    t,
                    y,
                    status: IntegrationStatus::StoppedByObserver,
                    steps_accepted: accepted,
                    steps_rejected: rejected,
                };
            }
            // FSAL: k6 was evaluated at (t+h, y5)
            k.swap(0, 6);
            // PI controller
            let fac = 0.9 * err.powf(-0.2) * err_prev.powf(0.04);
            h *= fac.clamp(0.2, 5.0);
            err_prev = err;
        } else {
            rejected += 1;
            h *= (0.9 * err.powf(-0.2)).clamp(0.1, 1.0);
        }
    }

    Integration {
        t,
        y,
        status: IntegrationStatus::StepBudgetExhausted,
        steps_accepted: accepted,
        steps_rejected: rejected,
    }
}

/// Integrate while landing exactly on each requested output time; `on_point`
/// receives the state at every `t_points` entry (those after `t0`).
pub fn integrate_path(
    mut rhs: impl FnMut(f64, &[Complex64], &mut [Complex64]),
    t0: f64,
    t_points: &[f64],
    y0: Vec<Complex64>,
    opts: &Dopri5Options,
    mut on_point: impl FnMut(f64, &[Complex64]),
) -> Integration {
    let mut y = y0;
    let mut t = t0;
    let mut total_acc = 0;
    let mut total_rej = 0;
    for &tp in t_points {
        if tp < t - 1e-14 {
            panic!("t_points must be ascending and >= t0");
        }
        if tp > t {
            let run = integrate(&mut rhs, t, tp, y, opts, |_, _| Halt::Continue);
            total_acc += run.steps_accepted;
            total_rej += run.steps_rejected;
            if run.status != IntegrationStatus::Reached {
                return Integration {
                    steps_accepted: total_acc,
                    steps_rejected: total_rej,
                    ..run
                };
            }
            y = run.y;
            t = run.t;
        }
        on_point(tp, &y);
    }
    Integration {
        t,
        y,
        status: IntegrationStatus::Reached,
        steps_accepted: total_acc,
        steps_rejected: total_rej,
    }
}
