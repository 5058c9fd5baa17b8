//! Synthetic autoconvolution experiment: sparse Haar coefficients, noisy data,
//! and the grids behind the d-TIGRA and Landweber result tables.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operators::{ComposedForward, ForwardOperator};
use crate::seqspace::{CoefVec, Exponent};
use crate::signal::{add_noise, NoiseSpec, Signal};
use crate::solvers::{
    dtigra_solve, landweber_solve, sample_start, DtigraConfig, LandweberConfig, SolverResult,
    StartDistribution, StartNorm, StartSpec, StopReason,
};
use crate::tikhonov::ProblemInstance;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Seeds {
    pub noise: u64,
    pub start: u64,
}

impl Default for Seeds {
    fn default() -> Self {
        Self { noise: 42, start: 7 }
    }
}

/// Solver selection. The Landweber schedule measures `x₀` in the same norm
/// the start vector was scaled in.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverChoice {
    Dtigra(DtigraConfig<f64>),
    Landweber { tau: f64, beta_cap: f64, max_iters: usize },
}

impl SolverChoice {
    pub fn landweber_default() -> Self {
        let d = LandweberConfig::<f64>::default();
        SolverChoice::Landweber {
            tau: d.tau,
            beta_cap: d.beta_cap,
            max_iters: d.max_iters,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            SolverChoice::Dtigra(_) => "dtigra",
            SolverChoice::Landweber { .. } => "landweber",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentConfig {
    /// Haar levels; the grid has `2^levels` points.
    pub levels: u32,
    pub p: f64,
    /// Relative noise level `δ/‖y‖`.
    pub noise: f64,
    pub start_norm: f64,
    pub seeds: Seeds,
    pub start: StartSpec,
    pub solver: SolverChoice,
    /// Nonzero entries of `x†` as 1-based `(index, value)` pairs.
    pub true_coefficients: Vec<(usize, f64)>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            levels: 9,
            p: 1.2,
            noise: 0.01,
            start_norm: 1.0,
            seeds: Seeds::default(),
            start: StartSpec {
                distribution: StartDistribution::Uniform,
                norm: StartNorm::L2,
            },
            solver: SolverChoice::Dtigra(DtigraConfig::default()),
            true_coefficients: vec![(2, 3.0), (4, -1.0), (7, 0.5)],
        }
    }
}

impl ExperimentConfig {
    pub fn grid_size(&self) -> usize {
        1usize << self.levels
    }

    pub fn exponent(&self) -> Result<Exponent<f64>> {
        Exponent::new(self.p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.levels > 24 {
            return Err(Error::InvalidConfig(format!("{} levels is too many", self.levels)));
        }
        self.exponent()?;
        if !(self.noise > 0.0 && self.noise < 1.0) {
            return Err(Error::InvalidConfig(format!("noise level {} must lie in (0, 1)", self.noise)));
        }
        if !(self.start_norm >= 0.0 && self.start_norm.is_finite()) {
            return Err(Error::InvalidConfig(format!("start norm {} must be nonnegative", self.start_norm)));
        }
        let n = self.grid_size();
        if self.true_coefficients.is_empty() {
            return Err(Error::InvalidConfig("true_coefficients is empty".into()));
        }
        for &(i, v) in &self.true_coefficients {
            if i == 0 || i > n {
                return Err(Error::InvalidConfig(format!("coefficient index {i} outside 1..={n}")));
            }
            if !v.is_finite() {
                return Err(Error::InvalidConfig(format!("coefficient {i} is not finite")));
            }
        }
        match &self.solver {
            SolverChoice::Dtigra(cfg) => cfg.validate(),
            SolverChoice::Landweber { tau, beta_cap, .. } if !(*tau > 1.0 && *beta_cap > 0.0) => Err(
                Error::InvalidConfig(format!("landweber tau = {tau} must exceed 1, beta_cap = {beta_cap} must be positive")),
            ),
            SolverChoice::Landweber { .. } => Ok(()),
        }
    }

    pub fn forward(&self) -> Result<ComposedForward> {
        ComposedForward::with_levels(self.levels)
    }

    pub fn true_solution(&self) -> Result<CoefVec<f64>> {
        self.validate()?;
        let mut x = vec![0.0; self.grid_size()];
        for &(i, v) in &self.true_coefficients {
            x[i - 1] = v;
        }
        CoefVec::new(x)
    }

    pub fn start_vector(&self) -> Result<CoefVec<f64>> {
        sample_start(self.grid_size(), self.start_norm, self.start, self.exponent()?, self.seeds.start)
    }
}

/// Everything derived from `x†` and the noise seed.
#[derive(Clone, Debug, PartialEq)]
pub struct DataBundle {
    pub x_true: CoefVec<f64>,
    pub f_true: Signal<f64>,
    pub y: Signal<f64>,
    pub y_delta: Signal<f64>,
    pub delta: f64,
}

pub fn generate(cfg: &ExperimentConfig) -> Result<DataBundle> {
    let x_true = cfg.true_solution()?;
    let op = cfg.forward()?;
    let f_true = op.synthesis().synthesize(&x_true)?;
    let y = op.apply(&x_true)?;
    let (y_delta, delta) = add_noise(
        &y,
        NoiseSpec {
            relative_level: cfg.noise,
            seed: cfg.seeds.noise,
        },
    )?;
    Ok(DataBundle {
        x_true,
        f_true,
        y,
        y_delta,
        delta,
    })
}

/// Runs the configured solver on `y_delta`, reporting the error against `x_true`.
pub fn solve(
    cfg: &ExperimentConfig,
    y_delta: &Signal<f64>,
    delta: f64,
    x_true: &CoefVec<f64>,
) -> Result<SolverResult<f64>> {
    cfg.validate()?;
    let prob = ProblemInstance::new(cfg.forward()?, y_delta.clone(), delta, cfg.exponent()?)?;
    let x0 = cfg.start_vector()?;
    let result = match cfg.solver {
        SolverChoice::Dtigra(d) => dtigra_solve(&prob, &x0, &d)?,
        SolverChoice::Landweber { tau, beta_cap, max_iters } => {
            let lw = LandweberConfig {
                tau,
                beta_cap,
                max_iters,
                start_norm: cfg.start.norm,
            };
            landweber_solve(&prob, &x0, &lw)?
        }
    };
    result.with_truth(x_true)
}

pub fn run(cfg: &ExperimentConfig) -> Result<SolverResult<f64>> {
    let data = generate(cfg)?;
    solve(cfg, &data.y_delta, data.delta, &data.x_true)
}

pub const TABLE_NOISE_LEVELS: [f64; 3] = [0.05, 0.01, 0.005];
pub const TABLE_START_NORMS: [f64; 4] = [1.0, 500.0, 1000.0, 10000.0];
pub const TABLE_EXPONENTS: [f64; 2] = [1.2, 1.6];

/// One cell per (noise, start norm, p), in table order, derived from `base`.
pub fn table_cells(base: &ExperimentConfig, solver: SolverChoice) -> Vec<ExperimentConfig> {
    let mut out = Vec::new();
    for noise in TABLE_NOISE_LEVELS {
        for start_norm in TABLE_START_NORMS {
            for p in TABLE_EXPONENTS {
                out.push(ExperimentConfig {
                    noise,
                    start_norm,
                    p,
                    solver,
                    ..base.clone()
                });
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub noise: f64,
    pub start_norm: f64,
    pub p: f64,
    pub alpha: f64,
    pub j_star: usize,
    pub k_star: usize,
    pub relative_error: f64,
    /// `None` when the cell failed with an error.
    pub stop_reason: Option<StopReason>,
    pub error_message: Option<String>,
}

impl TableRow {
    pub fn from_outcome(cfg: &ExperimentConfig, outcome: &Result<SolverResult<f64>>) -> Self {
        let (alpha, j_star, k_star, relative_error, stop_reason, error_message) = match outcome {
            Ok(r) => (
                r.alpha_final,
                r.j_star,
                r.k_star,
                r.relative_error.unwrap_or(f64::NAN),
                Some(r.stop_reason()),
                None,
            ),
            Err(e) => (f64::NAN, 0, 0, f64::NAN, None, Some(e.to_string())),
        };
        Self {
            noise: cfg.noise,
            start_norm: cfg.start_norm,
            p: cfg.p,
            alpha,
            j_star,
            k_star,
            relative_error,
            stop_reason,
            error_message,
        }
    }

    pub fn met_discrepancy(&self) -> bool {
        self.stop_reason == Some(StopReason::Discrepancy)
    }
}

/// Writes rows as CSV. Cells that never met the discrepancy principle print
/// `--` in the result columns.
pub fn write_table<W: Write>(rows: &[TableRow], with_outer: bool, mut w: W) -> std::io::Result<()> {
    if with_outer {
        writeln!(w, "delta,x0_norm,p,alpha,j_star,k_star,e,stop_reason")?;
    } else {
        writeln!(w, "delta,x0_norm,p,alpha,k_star,e,stop_reason")?;
    }
    for r in rows {
        let reason = match (&r.stop_reason, &r.error_message) {
            (Some(s), _) => s.as_str().to_string(),
            (None, Some(msg)) => format!("\"Error: {}\"", msg.replace('"', "'")),
            (None, None) => "Error".to_string(),
        };
        let head = format!("{},{},{}", r.noise, r.start_norm, r.p);
        let body = if r.met_discrepancy() {
            let mut cols = vec![format!("{:.16e}", r.alpha)];
            if with_outer {
                cols.push(r.j_star.to_string());
            }
            cols.push(r.k_star.to_string());
            cols.push(format!("{:.16e}", r.relative_error));
            cols.join(",")
        } else {
            vec!["--"; if with_outer { 4 } else { 3 }].join(",")
        };
        writeln!(w, "{head},{body},{reason}")?;
    }
    Ok(())
}
