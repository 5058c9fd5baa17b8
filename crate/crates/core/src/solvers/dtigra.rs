use serde::{Deserialize, Serialize};

use super::step::{practical_step_size, step_along, theoretical_from};
use super::trace::{fingerprint, SolverTrace, StopReason, TraceRecord};
use super::SolverResult;
use crate::error::{check_len, Error, Result};
use crate::operators::ForwardOperator;
use crate::scalar::{lit, Scalar};
use crate::seqspace::CoefVec;
use crate::theory::TheoryConstants;
use crate::tikhonov::ProblemInstance;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
#[serde(bound(serialize = "T: Scalar + Serialize", deserialize = "T: Scalar + Deserialize<'de>"))]
pub enum StepPolicy<T> {
    /// `β = min(1/‖∇Φ‖, cap)`.
    Practical { cap: T },
    /// Step size from the convergence analysis.
    Theoretical(TheoryConstants<T>),
}

/// Parameters of the continuation method. The inner loop at level `j` stops
/// once `‖∇Φ_{α_j}‖ ≤ inner_grad_factor·α_j`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar + Serialize", deserialize = "T: Scalar + Deserialize<'de>"))]
pub struct DtigraConfig<T> {
    pub alpha0: T,
    pub qbar: T,
    pub tau: T,
    pub step_policy: StepPolicy<T>,
    pub inner_grad_factor: T,
    pub inner_max_iters: usize,
    pub outer_max_iters: usize,
    pub alpha_floor: T,
}

impl<T: Scalar> Default for DtigraConfig<T> {
    fn default() -> Self {
        Self {
            alpha0: lit(1e6),
            qbar: lit(0.7),
            tau: lit(2.0),
            step_policy: StepPolicy::Practical { cap: lit(0.02) },
            inner_grad_factor: lit(1.5),
            inner_max_iters: 3000,
            outer_max_iters: 200,
            alpha_floor: T::zero(),
        }
    }
}

impl<T: Scalar> DtigraConfig<T> {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if !(self.alpha0 > T::zero() && self.alpha0.is_finite()) {
            return bad(format!("alpha0 = {} must be positive", self.alpha0));
        }
        if !(self.qbar > T::zero() && self.qbar < T::one()) {
            return bad(format!("qbar = {} must lie in (0, 1)", self.qbar));
        }
        if !(self.tau > T::one() && self.tau.is_finite()) {
            return bad(format!("tau = {} must exceed 1", self.tau));
        }
        if !(self.inner_grad_factor > T::zero() && self.inner_grad_factor.is_finite()) {
            return bad(format!("inner_grad_factor = {} must be positive", self.inner_grad_factor));
        }
        if !(self.alpha_floor >= T::zero() && self.alpha_floor < self.alpha0) {
            return bad(format!("alpha_floor = {} must lie in [0, alpha0)", self.alpha_floor));
        }
        if self.outer_max_iters == 0 {
            return bad("outer_max_iters must be at least 1".into());
        }
        match &self.step_policy {
            StepPolicy::Practical { cap } if !(*cap > T::zero() && cap.is_finite()) => {
                bad(format!("step cap = {cap} must be positive"))
            }
            StepPolicy::Theoretical(tc) => tc.validate().map_err(|e| Error::InvalidConfig(e.to_string())),
            _ => Ok(()),
        }
    }
}

/// Runs inner dual-gradient loops at `α_j = q̄^j·α₀`, each warm-started from the
/// previous level, until the residual first reaches `τδ` or a safeguard fires.
pub fn dtigra_solve<T: Scalar, F: ForwardOperator<T>>(
    prob: &ProblemInstance<T, F>,
    x0: &CoefVec<T>,
    cfg: &DtigraConfig<T>,
) -> Result<SolverResult<T>> {
    cfg.validate()?;
    check_len(prob.coef_len(), x0.len())?;
    if !x0.is_finite() {
        return Err(Error::InvalidParameter("start vector contains non-finite entries".into()));
    }
    let e = prob.exponent();
    let target = cfg.tau * prob.delta();
    let mut x = x0.clone();
    let mut alpha = cfg.alpha0;
    let mut records = Vec::new();
    let mut total = 0usize;
    let mut j = 0usize;

    loop {
        let mut k = 0usize;
        let residual = loop {
            let ev = prob.evaluate(alpha, &x)?;
            let grad_norm = ev.gradient.dual_norm(e);
            for (quantity, v) in [("phi", ev.phi), ("grad_norm", grad_norm)] {
                if !v.is_finite() {
                    return Err(Error::Diverged {
                        quantity,
                        outer: j,
                        inner: k,
                        alpha: alpha.as_f64(),
                        phi: ev.phi.as_f64(),
                        grad_norm: grad_norm.as_f64(),
                    });
                }
            }
            let mut record = TraceRecord {
                j,
                k,
                alpha,
                beta: T::zero(),
                phi: ev.phi,
                grad_norm,
                residual: ev.residual,
                fingerprint: fingerprint(&x),
            };
            if grad_norm <= cfg.inner_grad_factor * alpha || grad_norm == T::zero() || k >= cfg.inner_max_iters {
                records.push(record);
                break ev.residual;
            }
            let beta = match &cfg.step_policy {
                StepPolicy::Practical { cap } => practical_step_size(grad_norm, *cap)?,
                StepPolicy::Theoretical(tc) => theoretical_from(prob, alpha, &x, &ev, tc)?,
            };
            record.beta = beta;
            records.push(record);
            x = step_along(&x, &ev.gradient, beta, e)?;
            k += 1;
            total += 1;
        };

        let stop = if residual <= target {
            Some(StopReason::Discrepancy)
        } else if j + 1 >= cfg.outer_max_iters {
            Some(StopReason::OuterCap)
        } else if cfg.qbar * alpha < cfg.alpha_floor {
            Some(StopReason::AlphaFloor)
        } else {
            None
        };
        if let Some(stop_reason) = stop {
            return Ok(SolverResult {
                x_final: x,
                alpha_final: alpha,
                j_star: j,
                k_star: total,
                residual,
                relative_error: None,
                trace: SolverTrace { records, stop_reason },
            });
        }
        alpha = cfg.qbar * alpha;
        j += 1;
    }
}
