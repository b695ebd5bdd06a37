//! Run configuration: one JSON document, unknown keys rejected, every
//! default made explicit by `config dump`.

use flrw_kg::analysis::ModelParams;
use flrw_kg::kernels::CurvedMass;
use flrw_kg::oracle::StepperConfig;
use flrw_kg::semilinear::{NonlinearityKind, NonlinearitySpec};
use flrw_kg::transform::QuadratureSpec;
use flrw_kg::waveprop::GridField;
use flrw_kg::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub model: ModelSection,
    pub grid: GridSection,
    pub quadrature: QuadSection,
    pub stepper: StepperSection,
    pub time: TimeSection,
    pub data: DataSection,
    pub picard: PicardSection,
    pub lifespan: LifespanSection,
    pub domain: DomainSection,
    pub certify: CertifySection,
    /// solve-linear comparison mode against the per-mode oracle
    pub compare_oracle: bool,
    /// relative L² tolerance of the comparison mode
    pub oracle_tol: f64,
    /// also write per-time field snapshots (snapshot_NNN.csv)
    pub save_snapshots: bool,
    pub seed: u64,
    /// 0 = all cores; computations are deterministic regardless
    pub threads: u32,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            model: ModelSection::default(),
            grid: GridSection::default(),
            quadrature: QuadSection::default(),
            stepper: StepperSection::default(),
            time: TimeSection::default(),
            data: DataSection::default(),
            picard: PicardSection::default(),
            lifespan: LifespanSection::default(),
            domain: DomainSection::default(),
            certify: CertifySection::default(),
            compare_oracle: false,
            oracle_tol: 1e-3,
            save_snapshots: false,
            seed: 0,
            threads: 0,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct ModelSection {
    pub n: u32,
    pub m_sq: f64,
    pub m_sq_im: f64,
    pub alpha: f64,
    /// weight exponent γ
    pub gamma: f64,
    /// damping exponent Γ
    pub gamma_damp: f64,
    /// Sobolev index s
    pub s: f64,
    pub nonlinearity: NonlinSection,
}

impl Default for ModelSection {
    fn default() -> Self {
        Self {
            n: 1,
            m_sq: -0.75, // M = 1 at n = 1
            m_sq_im: 0.0,
            alpha: 2.0,
            gamma: -1.5,
            gamma_damp: 0.0,
            s: 1.0,
            nonlinearity: NonlinSection::default(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct NonlinSection {
    /// "power_signed" | "power_abs" | "higgs_cubic" | "polynomial"
    pub kind: String,
    pub coeff: f64,
    /// coefficients of Φ², Φ³, ... for the polynomial kind (up to 8)
    pub poly_coeffs: Vec<f64>,
}

impl Default for NonlinSection {
    fn default() -> Self {
        Self {
            kind: "power_signed".into(),
            coeff: 0.0,
            poly_coeffs: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct GridSection {
    pub dims: u32,
    pub points_per_axis: usize,
    pub box_length: f64,
}

impl Default for GridSection {
    fn default() -> Self {
        Self {
            dims: 1,
            points_per_axis: 256,
            box_length: 2.0 * std::f64::consts::PI,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct QuadSection {
    pub nodes_b: usize,
    pub nodes_r: usize,
    pub nodes_s: usize,
    pub tol: f64,
    pub max_doublings: usize,
    pub stabilize: bool,
}

impl Default for QuadSection {
    fn default() -> Self {
        let q = QuadratureSpec::default();
        Self {
            nodes_b: q.nodes_b,
            nodes_r: q.nodes_r,
            nodes_s: q.nodes_s,
            tol: q.tol,
            max_doublings: q.max_doublings,
            stabilize: q.stabilize,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct StepperSection {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_step: f64,
    pub min_step: f64,
    pub blowup_threshold: f64,
}

impl Default for StepperSection {
    fn default() -> Self {
        let c = StepperConfig::default();
        Self {
            rel_tol: c.rel_tol,
            abs_tol: c.abs_tol,
            max_step: c.max_step,
            min_step: c.min_step,
            blowup_threshold: c.blowup_threshold,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct TimeSection {
    pub t_max: f64,
    pub points: usize,
    /// explicit grid overriding (t_max, points) when non-empty
    pub t_grid: Vec<f64>,
    /// trace sampling interval for method-of-lines runs
    pub sample_dt: f64,
}

impl Default for TimeSection {
    fn default() -> Self {
        Self {
            t_max: 3.0,
            points: 25,
            t_grid: Vec::new(),
            sample_dt: 0.02,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct DataSection {
    pub phi0: FieldSpec,
    pub phi1: FieldSpec,
}

impl Default for DataSection {
    fn default() -> Self {
        Self {
            phi0: FieldSpec::default(),
            phi1: FieldSpec {
                kind: "zero".into(),
                ..FieldSpec::default()
            },
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct FieldSpec {
    /// "zero" | "constant" | "mode" (cosine) | "mode_sin" | "gaussian"
    pub kind: String,
    pub amplitude: f64,
    /// integer mode numbers per axis
    pub k: Vec<i64>,
    /// gaussian width
    pub width: f64,
    /// gaussian center as a fraction of the box
    pub center_frac: f64,
}

impl Default for FieldSpec {
    fn default() -> Self {
        Self {
            kind: "mode".into(),
            amplitude: 1e-3,
            k: vec![1],
            width: 1.0,
            center_frac: 0.5,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct PicardSection {
    pub max_iter: usize,
    pub tol: f64,
    /// X-ball radius as a multiple of the data norm (the 2 in "<= 2ε")
    pub radius_factor: f64,
    pub g_nodes_b: usize,
    pub g_nodes_r: usize,
}

impl Default for PicardSection {
    fn default() -> Self {
        Self {
            max_iter: 16,
            tol: 1e-9,
            radius_factor: 2.0,
            g_nodes_b: 96,
            g_nodes_r: 256,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct LifespanSection {
    pub eps_ladder: Vec<f64>,
    /// bound constant; when absent it is calibrated on the first ladder entry
    pub c_calibrated: Option<f64>,
    /// also measure escape times with the method-of-lines oracle
    pub measure: bool,
    pub mol_t_max: f64,
}

impl Default for LifespanSection {
    fn default() -> Self {
        Self {
            eps_ladder: vec![1e-2, 1e-3, 1e-4, 1e-5],
            c_calibrated: None,
            measure: false,
            mol_t_max: 14.0,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct DomainSection {
    pub m_range: (f64, f64),
    pub gamma_range: (f64, f64),
    pub gamma_damp_range: (f64, f64),
    pub count: usize,
}

impl Default for DomainSection {
    fn default() -> Self {
        Self {
            m_range: (0.01, 0.5),
            gamma_range: (-3.0, -2.0),
            gamma_damp_range: (4.0, 6.0),
            count: 2500,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct CertifySection {
    pub a: f64,
    pub t_grid: Vec<f64>,
    pub nodes: usize,
}

impl Default for CertifySection {
    fn default() -> Self {
        Self {
            a: 0.0,
            // four sub-unit entries so the small-t slope fit is defined
            t_grid: vec![0.05, 0.1, 0.2, 0.5, 1.0, 2.0, 4.0, 7.0, 10.0],
            nodes: 512,
        }
    }
}

impl RunConfig {
    pub fn model_params(&self) -> ModelParams {
        ModelParams {
            n: self.model.n,
            m_sq: Complex64::new(self.model.m_sq, self.model.m_sq_im),
            alpha: self.model.alpha,
            gamma: self.model.gamma,
            gamma_damp: self.model.gamma_damp,
            s: self.model.s,
            nonlinearity: self.nonlinearity().unwrap_or_else(|_| {
                NonlinearitySpec::power_signed(self.model.alpha.max(1e-9), 0.0, self.model.gamma_damp)
            }),
        }
    }

    pub fn curved_mass(&self) -> CurvedMass {
        self.model_params().curved_mass()
    }

    pub fn nonlinearity(&self) -> Result<NonlinearitySpec, String> {
        if self.model.alpha <= 0.0 {
            return Err("alpha must be > 0".into());
        }
        let sec = &self.model.nonlinearity;
        let kind = match sec.kind.as_str() {
            "power_signed" => NonlinearityKind::PowerSigned,
            "power_abs" => NonlinearityKind::PowerAbs,
            "higgs_cubic" => NonlinearityKind::HiggsCubic,
            "polynomial" => {
                if sec.poly_coeffs.is_empty() || sec.poly_coeffs.len() > 8 {
                    return Err("polynomial needs 1..=8 poly_coeffs".into());
                }
                let mut cs = [0.0; 8];
                cs[..sec.poly_coeffs.len()].copy_from_slice(&sec.poly_coeffs);
                NonlinearityKind::Polynomial(cs)
            }
            other => return Err(format!("unknown nonlinearity kind '{other}'")),
        };
        Ok(NonlinearitySpec {
            kind,
            alpha: self.model.alpha,
            coeff: sec.coeff,
            gamma_damp: self.model.gamma_damp,
        })
    }

    pub fn quadrature(&self) -> QuadratureSpec {
        QuadratureSpec {
            nodes_b: self.quadrature.nodes_b,
            nodes_r: self.quadrature.nodes_r,
            nodes_s: self.quadrature.nodes_s,
            tol: self.quadrature.tol,
            max_doublings: self.quadrature.max_doublings,
            stabilize: self.quadrature.stabilize,
        }
    }

    pub fn stepper(&self) -> StepperConfig {
        StepperConfig {
            rel_tol: self.stepper.rel_tol,
            abs_tol: self.stepper.abs_tol,
            max_step: self.stepper.max_step,
            min_step: self.stepper.min_step,
            blowup_threshold: self.stepper.blowup_threshold,
        }
    }

    pub fn time_grid(&self) -> Result<Vec<f64>, String> {
        let grid = if !self.time.t_grid.is_empty() {
            self.time.t_grid.clone()
        } else {
            if self.time.points < 2 {
                return Err("time.points must be >= 2".into());
            }
            (0..self.time.points)
                .map(|i| self.time.t_max * i as f64 / (self.time.points - 1) as f64)
                .collect()
        };
        if grid.windows(2).any(|w| w[1] <= w[0]) || grid.iter().any(|&t| t < 0.0) {
            return Err("time grid must be ascending and non-negative".into());
        }
        Ok(grid)
    }

    pub fn build_field(&self, spec: &FieldSpec) -> Result<GridField, String> {
        let g = &self.grid;
        if !(1..=3).contains(&g.dims) {
            return Err("grid.dims must be 1, 2 or 3".into());
        }
        if !g.points_per_axis.is_power_of_two() {
            return Err("grid.points_per_axis must be a power of two".into());
        }
        let l = g.box_length;
        let dims = g.dims as usize;
        let field = match spec.kind.as_str() {
            "zero" => GridField::zeros(g.dims, g.points_per_axis, l),
            "constant" => GridField::from_fn(g.dims, g.points_per_axis, l, |_| {
                Complex64::new(spec.amplitude, 0.0)
            }),
            "mode" | "mode_sin" => {
                if spec.k.len() < dims {
                    return Err("field spec needs one mode number per axis".into());
                }
                let k = spec.k.clone();
                let sin = spec.kind == "mode_sin";
                let amp = spec.amplitude;
                GridField::from_fn(g.dims, g.points_per_axis, l, move |x| {
                    let phase: f64 = x
                        .iter()
                        .zip(&k)
                        .map(|(xi, &ki)| 2.0 * std::f64::consts::PI * ki as f64 * xi / l)
                        .sum();
                    Complex64::new(amp * if sin { phase.sin() } else { phase.cos() }, 0.0)
                })
            }
            "gaussian" => {
                let c = spec.center_frac * l;
                let w2 = spec.width * spec.width;
                let amp = spec.amplitude;
                GridField::from_fn(g.dims, g.points_per_axis, l, move |x| {
                    let r2: f64 = x.iter().map(|xi| (xi - c) * (xi - c)).sum();
                    Complex64::new(amp * (-r2 / w2).exp(), 0.0)
                })
            }
            other => return Err(format!("unknown field kind '{other}'")),
        };
        Ok(field)
    }
}
