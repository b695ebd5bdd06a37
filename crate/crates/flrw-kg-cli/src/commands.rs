//! One driver per subcommand; each consumes config sections and emits
//! CSV/JSON artifacts into the output directory.

use crate::config::RunConfig;
use crate::output::{fmt_g17, write_csv, write_json};
use flrw_kg::analysis::{
    certify_k0_bound, certify_k1_bound, classify, classify_crosscheck, feasible_domain_sample,
    fit_growth_exponent, lifespan_i, lifespan_inverse, AnalysisError, BoundReport,
};
use flrw_kg::oracle::{mode_solve_linear, mol_solve_semilinear, ModeProblem, MolProblem};
use flrw_kg::semilinear::{picard_solve, PicardOptions, SolutionTrace, XNormMonitor};
use flrw_kg::transform::{solve_linear, LinearProblem, QuadratureSpec};
use flrw_kg::util::lsq_slope;
use flrw_kg::waveprop::{sobolev_norm, GridField};
use flrw_kg::Complex64;
use log::{debug, info, warn};
use serde_json::json;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("runtime error: {0}")]
    Runtime(String),
    #[error("oracle mismatch: {0}")]
    OracleMismatch(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Runtime(_) | CliError::Io(_) => 1,
            CliError::OracleMismatch(_) => 3,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Runtime(_) => "runtime",
            CliError::OracleMismatch(_) => "oracle-mismatch",
            CliError::Io(_) => "io",
        }
    }
}

fn rt<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Runtime(e.to_string())
}

fn trace_rows(trace: &SolutionTrace) -> Vec<Vec<String>> {
    trace
        .t_grid
        .iter()
        .enumerate()
        .map(|(i, &t)| {
            vec![
                fmt_g17(t),
                fmt_g17(trace.l2[i]),
                fmt_g17(trace.h_s[i]),
                fmt_g17(trace.weighted[i]),
            ]
        })
        .collect()
}

const TRACE_HEADER: [&str; 4] = ["t", "l2", "h_s", "weighted"];

/// Per-mode oracle solution of the source-free linear problem.
fn oracle_fields(
    cfg: &RunConfig,
    phi0: &GridField,
    phi1: &GridField,
    t_grid: &[f64],
) -> Result<Vec<GridField>, CliError> {
    let mass = cfg.curved_mass();
    let hat0 = phi0.to_spectral();
    let hat1 = phi1.to_spectral();
    let n_modes = hat0.values().len();
    let mut per_mode = vec![Vec::new(); n_modes];
    for i in 0..n_modes {
        let d0 = hat0.values()[i];
        let d1 = hat1.values()[i];
        if d0.norm().max(d1.norm()) < 1e-300 {
            per_mode[i] = vec![Complex64::default(); t_grid.len()];
            continue;
        }
        let p = ModeProblem::homogeneous(hat0.xi_abs(i), mass, (d0, d1));
        per_mode[i] = mode_solve_linear(&p, t_grid).map_err(rt)?;
    }
    let mut out = Vec::with_capacity(t_grid.len());
    for (j, _) in t_grid.iter().enumerate() {
        let mut hat = hat0.clone();
        for (i, v) in hat.values_mut().iter_mut().enumerate() {
            *v = per_mode[i][j];
        }
        out.push(hat.to_physical());
    }
    Ok(out)
}

pub fn cmd_solve_linear(cfg: &RunConfig, out: &Path) -> Result<(), CliError> {
    let phi0 = cfg.build_field(&cfg.data.phi0).map_err(CliError::Config)?;
    let phi1 = cfg.build_field(&cfg.data.phi1).map_err(CliError::Config)?;
    let t_grid = cfg.time_grid().map_err(CliError::Config)?;
    let prob = LinearProblem {
        mass: cfg.curved_mass(),
        phi0: &phi0,
        phi1: &phi1,
        source: None,
        t_grid: &t_grid,
        sobolev_s: cfg.model.s,
        weight_gamma: cfg.model.gamma,
    };
    info!("solve-linear on {} time points", t_grid.len());
    let trace = solve_linear(&prob, &cfg.quadrature()).map_err(rt)?;
    write_csv(&out.join("trace.csv"), &TRACE_HEADER, &trace_rows(&trace))?;
    if cfg.save_snapshots {
        let snaps = trace.snapshots.as_ref().expect("snapshots kept");
        for (i, (snap, &t)) in snaps.iter().zip(&t_grid).enumerate() {
            let rows: Vec<Vec<String>> = snap
                .values()
                .iter()
                .enumerate()
                .map(|(j, v)| vec![j.to_string(), fmt_g17(v.re), fmt_g17(v.im)])
                .collect();
            let name = format!("snapshot_{i:03}.csv");
            write_csv(&out.join(name), &["index", "re", "im"], &rows)?;
            debug!("snapshot {i:03} at t = {t}");
        }
    }

    if cfg.compare_oracle {
        let snaps = trace.snapshots.as_ref().expect("snapshots kept");
        let oracle = oracle_fields(cfg, &phi0, &phi1, &t_grid)?;
        let mut per_t = Vec::new();
        let mut max_err: f64 = 0.0;
        for ((got, want), &t) in snaps.iter().zip(&oracle).zip(&t_grid) {
            let mut d = got.clone();
            d.add_scaled(Complex64::new(-1.0, 0.0), want);
            let denom = want.l2_norm();
            let err = if denom > 0.0 {
                d.l2_norm() / denom
            } else {
                d.l2_norm()
            };
            if t > 0.0 {
                max_err = max_err.max(err);
            }
            per_t.push(json!({"t": t, "rel_l2_err": err}));
        }
        let pass = max_err <= cfg.oracle_tol;
        write_json(
            &out.join("comparison.json"),
            &json!({
                "max_rel_l2_err": max_err,
                "tol": cfg.oracle_tol,
                "pass": pass,
                "per_t": per_t,
            }),
        )?;
        if !pass {
            return Err(CliError::OracleMismatch(format!(
                "max relative L2 error {max_err:.3e} exceeds {:.3e}",
                cfg.oracle_tol
            )));
        }
    }
    Ok(())
}

pub fn cmd_solve_semilinear(cfg: &RunConfig, out: &Path) -> Result<(), CliError> {
    let phi0 = cfg.build_field(&cfg.data.phi0).map_err(CliError::Config)?;
    let phi1 = cfg.build_field(&cfg.data.phi1).map_err(CliError::Config)?;
    let mut t_grid = cfg.time_grid().map_err(CliError::Config)?;
    if t_grid.first() != Some(&0.0) {
        t_grid.insert(0, 0.0);
    }
    let spec = cfg.nonlinearity().map_err(CliError::Config)?;
    let prob = LinearProblem {
        mass: cfg.curved_mass(),
        phi0: &phi0,
        phi1: &phi1,
        source: None,
        t_grid: &t_grid,
        sobolev_s: cfg.model.s,
        weight_gamma: cfg.model.gamma,
    };
    let eps = sobolev_norm(&phi0, cfg.model.s) + sobolev_norm(&phi1, cfg.model.s);
    let radius = cfg.picard.radius_factor * eps;
    let monitor = XNormMonitor::new(cfg.model.gamma, cfg.model.s, radius);
    let opts = PicardOptions {
        max_iter: cfg.picard.max_iter,
        tol: cfg.picard.tol,
        quad_linear: cfg.quadrature(),
        quad_g: QuadratureSpec {
            nodes_b: cfg.picard.g_nodes_b,
            nodes_r: cfg.picard.g_nodes_r,
            stabilize: false,
            ..cfg.quadrature()
        },
    };
    info!("picard solve, data norm {eps:.3e}, ball radius {radius:.3e}");
    let (trace, report) = picard_solve(&prob, &spec, monitor, &opts).map_err(rt)?;
    write_csv(&out.join("trace.csv"), &TRACE_HEADER, &trace_rows(&trace))?;
    write_json(
        &out.join("picard_report.json"),
        &json!({
            "iterations": report.iterations,
            "distances": report.distances,
            "contraction_ratios": report.contraction_ratios,
            "fixed_point_residual": report.fixed_point_residual,
            "tol": cfg.picard.tol,
            "data_norm": eps,
            "ball_radius": radius,
            "weighted_sup": report.monitor.sup(),
            "escape_time": report.escape_time,
        }),
    )?;
    Ok(())
}

pub fn cmd_classify(cfg: &RunConfig, out: &Path) -> Result<(), CliError> {
    let params = cfg.model_params();
    let v = classify(&params);
    let value = json!({
        "case": v.case.as_str(),
        "case_integral_eq": v.case_integral_eq.as_str(),
        "case_bound_regime": v.case_bound_regime.as_str(),
        "applicable": v.applicable,
        "global_existence": v.case.is_global(),
        "branch": if v.case.is_global() { "global" } else { "finite-lifespan" },
        "slacks": {
            "growth_balance": v.slacks.growth_balance,
            "weight_margin": v.slacks.weight_margin,
            "damping_margin": v.slacks.damping_margin,
        },
        "re_m": params.curved_mass().re(),
    });
    println!("{}", serde_json::to_string_pretty(&value).unwrap());
    write_json(&out.join("verdict.json"), &value)?;
    Ok(())
}

pub fn cmd_lifespan(cfg: &RunConfig, out: &Path) -> Result<(), CliError> {
    let params = cfg.model_params();
    let ladder = &cfg.lifespan.eps_ladder;
    if ladder.is_empty() {
        return Err(CliError::Config("lifespan.eps_ladder is empty".into()));
    }
    let spec = cfg.nonlinearity().map_err(CliError::Config)?;

    // measured escape times via the method-of-lines oracle
    let mut measured: Vec<Option<f64>> = vec![None; ladder.len()];
    if cfg.lifespan.measure {
        if cfg.data.phi0.amplitude == 0.0 {
            return Err(CliError::Config(
                "lifespan.measure needs a nonzero phi0 amplitude to scale the ladder".into(),
            ));
        }
        for (i, &eps) in ladder.iter().enumerate() {
            // scale the whole data pair so its shape is preserved
            let ratio = eps / cfg.data.phi0.amplitude;
            let mut data_cfg = cfg.clone();
            data_cfg.data.phi0.amplitude = eps;
            data_cfg.data.phi1.amplitude *= ratio;
            let phi0 = data_cfg
                .build_field(&data_cfg.data.phi0)
                .map_err(CliError::Config)?;
            let phi1 = data_cfg
                .build_field(&data_cfg.data.phi1)
                .map_err(CliError::Config)?;
            // ε_X := sup_t e^{γt} ||Φ0(t)||, from the exact mode oracle
            let dense: Vec<f64> = (0..=1400)
                .map(|k| cfg.lifespan.mol_t_max * k as f64 / 1400.0)
                .collect();
            let lin = oracle_fields(&data_cfg, &phi0, &phi1, &dense)?;
            let eps_x = lin
                .iter()
                .zip(&dense)
                .map(|(f, &t)| (params.gamma * t).exp() * sobolev_norm(f, params.s))
                .fold(0.0, f64::max);
            let prob = MolProblem {
                mass: cfg.curved_mass(),
                nonlinearity: Some(spec),
                phi0: &phi0,
                phi1: &phi1,
                t_end: cfg.lifespan.mol_t_max,
                sobolev_s: params.s,
                weight_gamma: params.gamma,
                escape_radius: Some(2.0 * eps_x),
                sample_dt: cfg.time.sample_dt,
            };
            let outcome = mol_solve_semilinear(&prob, &cfg.stepper()).map_err(rt)?;
            measured[i] = outcome.escape_time.or(outcome.blowup.map(|b| b.t_last));
            info!(
                "eps={eps:.1e}: eps_X={eps_x:.3e}, escape={:?}, blowup={:?}",
                outcome.escape_time, outcome.blowup
            );
        }
    }

    // calibrate C on the first measured entry unless supplied
    let c_cal = match cfg.lifespan.c_calibrated {
        Some(c) => c,
        None => match measured.first().copied().flatten() {
            Some(t0) => {
                let c = lifespan_i(t0, &params) * ladder[0].powf(params.alpha);
                info!("calibrated C = {c:.6e} at eps = {:.1e}", ladder[0]);
                c
            }
            None => {
                warn!("no calibration measurement available; using C = 1");
                1.0
            }
        },
    };

    let mut rows = Vec::new();
    let mut bounds = Vec::new();
    for (i, &eps) in ladder.iter().enumerate() {
        let bound = match lifespan_inverse(c_cal * eps.powf(-params.alpha), &params) {
            Ok(t) => t,
            Err(AnalysisError::NotInvertible { case }) => {
                return Err(CliError::Runtime(format!(
                    "I(t) is bounded (case {case:?}); lifespan bound undefined — global regime"
                )))
            }
            Err(e) => return Err(rt(e)),
        };
        bounds.push(bound);
        rows.push(vec![
            fmt_g17(eps),
            fmt_g17(bound),
            measured[i].map_or("".into(), fmt_g17),
        ]);
    }
    write_csv(
        &out.join("lifespan.csv"),
        &["eps", "bound", "measured"],
        &rows,
    )?;

    let neg_log_eps: Vec<f64> = ladder.iter().map(|e| -e.ln()).collect();
    let bound_slope = if ladder.len() >= 2 {
        Some(lsq_slope(&neg_log_eps, &bounds))
    } else {
        None
    };
    let measured_pairs: Vec<(f64, f64)> = neg_log_eps
        .iter()
        .zip(&measured)
        .filter_map(|(&x, m)| m.map(|t| (x, t)))
        .collect();
    let measured_slope = if measured_pairs.len() >= 2 {
        let xs: Vec<f64> = measured_pairs.iter().map(|p| p.0).collect();
        let ys: Vec<f64> = measured_pairs.iter().map(|p| p.1).collect();
        Some(lsq_slope(&xs, &ys))
    } else {
        None
    };
    let dominated = measured
        .iter()
        .zip(&bounds)
        .all(|(m, &b)| m.map_or(true, |t| t >= b - 1e-9));
    write_json(
        &out.join("lifespan.json"),
        &json!({
            "c_calibrated": c_cal,
            "bound_slope_vs_neg_log_eps": bound_slope,
            "measured_slope_vs_neg_log_eps": measured_slope,
            "bound_dominated_by_measured": dominated,
        }),
    )?;
    Ok(())
}

fn report_json(rep: &BoundReport) -> serde_json::Value {
    json!({
        "sup_ratio": rep.sup_ratio,
        "refinement_drift": rep.refinement_drift,
        "small_t_slope": rep.small_t_slope,
    })
}

pub fn cmd_certify_kernels(cfg: &RunConfig, out: &Path) -> Result<(), CliError> {
    let mass = cfg.curved_mass();
    if mass.re() <= 0.0 {
        return Err(CliError::Config("kernel bound certification needs Re M > 0".into()));
    }
    let a = cfg.certify.a;
    if a <= -1.0 {
        return Err(CliError::Config("certify.a must be > -1".into()));
    }
    let ts = &cfg.certify.t_grid;
    let k1 = certify_k1_bound(a, &mass, ts, cfg.certify.nodes).map_err(rt)?;
    let k0 = certify_k0_bound(a, &mass, ts, cfg.certify.nodes).map_err(rt)?;
    let mut rows = Vec::new();
    for (name, rep) in [("K1", &k1), ("K0", &k0)] {
        for (i, &t) in rep.t_grid.iter().enumerate() {
            rows.push(vec![
                name.to_string(),
                fmt_g17(t),
                fmt_g17(rep.integrals[i]),
                fmt_g17(rep.bounds[i]),
                fmt_g17(rep.ratios[i]),
            ]);
        }
    }
    write_csv(
        &out.join("certify.csv"),
        &["kernel", "t", "integral", "bound", "ratio"],
        &rows,
    )?;
    write_json(
        &out.join("certify.json"),
        &json!({"a": a, "K1": report_json(&k1), "K0": report_json(&k0)}),
    )?;
    Ok(())
}

pub fn cmd_domain(cfg: &RunConfig, out: &Path) -> Result<(), CliError> {
    let d = &cfg.domain;
    if d.m_range.0 <= 0.0 {
        return Err(CliError::Config("domain.m_range must be positive".into()));
    }
    let cloud = feasible_domain_sample(
        cfg.model.n,
        cfg.model.alpha,
        d.m_range,
        d.gamma_range,
        d.gamma_damp_range,
        d.count,
        cfg.seed,
    );
    let mut mismatches = 0usize;
    let rows: Vec<Vec<String>> = cloud
        .iter()
        .map(|p| {
            let dup = classify_crosscheck(cfg.model.n, p.m, cfg.model.alpha, p.gamma, p.gamma_damp);
            if dup != p.verdict {
                mismatches += 1;
            }
            vec![
                fmt_g17(p.m),
                fmt_g17(p.gamma),
                fmt_g17(p.gamma_damp),
                p.verdict.as_str().to_string(),
                dup.as_str().to_string(),
            ]
        })
        .collect();
    write_csv(
        &out.join("domain.csv"),
        &["m", "gamma", "gamma_damp", "verdict", "verdict_crosscheck"],
        &rows,
    )?;
    write_json(
        &out.join("domain.json"),
        &json!({
            "count": cloud.len(),
            "crosscheck_mismatches": mismatches,
            "nonempty_cases": {
                "i": cloud.iter().filter(|p| p.verdict.as_str() == "i").count(),
                "iii": cloud.iter().filter(|p| p.verdict.as_str() == "iii").count(),
            },
        }),
    )?;
    if mismatches > 0 {
        return Err(CliError::Runtime(format!(
            "{mismatches} classification cross-check mismatches"
        )));
    }
    Ok(())
}

pub fn cmd_oracle(cfg: &RunConfig, out: &Path) -> Result<(), CliError> {
    let phi0 = cfg.build_field(&cfg.data.phi0).map_err(CliError::Config)?;
    let phi1 = cfg.build_field(&cfg.data.phi1).map_err(CliError::Config)?;
    let spec = cfg.nonlinearity().map_err(CliError::Config)?;
    let nonlinearity = (spec.coeff != 0.0).then_some(spec);
    let prob = MolProblem {
        mass: cfg.curved_mass(),
        nonlinearity,
        phi0: &phi0,
        phi1: &phi1,
        t_end: cfg.time.t_max,
        sobolev_s: cfg.model.s,
        weight_gamma: cfg.model.gamma,
        escape_radius: None,
        sample_dt: cfg.time.sample_dt,
    };
    debug!("method-of-lines oracle run to t = {}", cfg.time.t_max);
    let outcome = mol_solve_semilinear(&prob, &cfg.stepper()).map_err(rt)?;
    write_csv(
        &out.join("oracle_trace.csv"),
        &TRACE_HEADER,
        &trace_rows(&outcome.trace),
    )?;
    let growth = fit_growth_exponent(&outcome.trace, (cfg.time.t_max * 0.5, cfg.time.t_max)).ok();
    write_json(
        &out.join("oracle.json"),
        &json!({
            "reached_t": outcome.reached_t,
            "steps_accepted": outcome.steps_accepted,
            "blowup": outcome.blowup.map(|b| json!({
                "t_last": b.t_last, "bracket": [b.bracket.0, b.bracket.1]
            })),
            "escape_time": outcome.escape_time,
            "late_growth_exponent": growth,
        }),
    )?;
    Ok(())
}

pub fn cmd_config_dump(cfg: &RunConfig) -> Result<(), CliError> {
    println!("{}", serde_json::to_string_pretty(cfg).unwrap());
    Ok(())
}
