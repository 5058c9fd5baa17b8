use serde::{Deserialize, Serialize};

use super::start::StartNorm;
use super::step::{practical_step_size, step_along};
use super::trace::{fingerprint, SolverTrace, StopReason, TraceRecord};
use super::SolverResult;
use crate::error::{check_len, Error, Result};
use crate::operators::ForwardOperator;
use crate::scalar::{lit, Scalar};
use crate::seqspace::CoefVec;
use crate::tikhonov::ProblemInstance;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar + Serialize", deserialize = "T: Scalar + Deserialize<'de>"))]
pub struct LandweberConfig<T> {
    pub tau: T,
    pub beta_cap: T,
    pub max_iters: usize,
    /// Norm of `x₀` that scales the α schedule.
    pub start_norm: StartNorm,
}

impl<T: Scalar> Default for LandweberConfig<T> {
    fn default() -> Self {
        Self {
            tau: lit(2.0),
            beta_cap: lit(0.02),
            max_iters: 200_000,
            start_norm: StartNorm::Lp,
        }
    }
}

/// `α_k = ‖x₀‖ / (2(k + 1000)^{0.99})`.
pub fn landweber_alpha<T: Scalar>(x0_norm: T, k: usize) -> T {
    x0_norm / (lit::<T>(2.0) * lit::<T>(k as f64 + 1000.0).powf(lit(0.99)))
}

/// Dual gradient iteration with the decaying α schedule, stopped by the
/// discrepancy principle or after `max_iters` steps.
pub fn landweber_solve<T: Scalar, F: ForwardOperator<T>>(
    prob: &ProblemInstance<T, F>,
    x0: &CoefVec<T>,
    cfg: &LandweberConfig<T>,
) -> Result<SolverResult<T>> {
    check_len(prob.coef_len(), x0.len())?;
    if !(cfg.tau > T::one() && cfg.beta_cap > T::zero()) {
        return Err(Error::InvalidConfig(format!(
            "tau = {} must exceed 1 and beta_cap = {} must be positive",
            cfg.tau, cfg.beta_cap
        )));
    }
    let e = prob.exponent();
    let x0_norm = cfg.start_norm.measure(x0, e);
    if x0_norm == T::zero() {
        return Err(Error::ZeroStart);
    }
    let target = cfg.tau * prob.delta();
    let mut x = x0.clone();
    let mut records = Vec::new();
    let mut k = 0usize;
    loop {
        let alpha = landweber_alpha(x0_norm, k);
        let ev = prob.evaluate(alpha, &x)?;
        let grad_norm = ev.gradient.dual_norm(e);
        if !(ev.phi.is_finite() && grad_norm.is_finite()) {
            return Err(Error::Diverged {
                quantity: if ev.phi.is_finite() { "grad_norm" } else { "phi" },
                outer: 0,
                inner: k,
                alpha: alpha.as_f64(),
                phi: ev.phi.as_f64(),
                grad_norm: grad_norm.as_f64(),
            });
        }
        let mut record = TraceRecord {
            j: 0,
            k,
            alpha,
            beta: T::zero(),
            phi: ev.phi,
            grad_norm,
            residual: ev.residual,
            fingerprint: fingerprint(&x),
        };
        let stop = if ev.residual <= target {
            Some(StopReason::Discrepancy)
        } else if k >= cfg.max_iters {
            Some(StopReason::OuterCap)
        } else {
            None
        };
        if let Some(stop_reason) = stop {
            records.push(record);
            return Ok(SolverResult {
                x_final: x,
                alpha_final: alpha,
                j_star: 0,
                k_star: k,
                residual: ev.residual,
                relative_error: None,
                trace: SolverTrace { records, stop_reason },
            });
        }
        // A vanishing gradient leaves x in place; the next α moves the stationary point.
        if grad_norm > T::zero() {
            record.beta = practical_step_size(grad_norm, cfg.beta_cap)?;
            x = step_along(&x, &ev.gradient, record.beta, e)?;
        }
        records.push(record);
        k += 1;
    }
}
