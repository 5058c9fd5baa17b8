//! Dual gradient solvers for the Tikhonov functional: the continuation method
//! over a geometric α schedule, and the modified Landweber baseline.

mod dtigra;
mod landweber;
mod start;
mod step;
mod trace;

pub use dtigra::{dtigra_solve, DtigraConfig, StepPolicy};
pub use landweber::{landweber_alpha, landweber_solve, LandweberConfig};
pub use start::{random_start, sample_start, StartDistribution, StartNorm, StartSpec};
pub use step::{dual_step, practical_step_size, theoretical_step_size};
pub use trace::{fingerprint, SolverTrace, StopReason, TraceRecord, TRACE_HEADER};

use crate::error::{check_len, Error, Result};
use crate::scalar::Scalar;
use crate::seqspace::CoefVec;

/// Outcome of a solver run. `j_star` is the 0-based index of the last
/// regularization level visited and `k_star` counts every executed step.
#[derive(Clone, Debug, PartialEq)]
pub struct SolverResult<T> {
    pub x_final: CoefVec<T>,
    pub alpha_final: T,
    pub j_star: usize,
    pub k_star: usize,
    pub residual: T,
    pub relative_error: Option<T>,
    pub trace: SolverTrace<T>,
}

impl<T: Scalar> SolverResult<T> {
    pub fn stop_reason(&self) -> StopReason {
        self.trace.stop_reason
    }

    /// Fills `relative_error` with `‖x_final − x†‖₂/‖x†‖₂`.
    pub fn with_truth(mut self, x_true: &CoefVec<T>) -> Result<Self> {
        self.relative_error = Some(relative_error(&self.x_final, x_true)?);
        Ok(self)
    }
}

/// `‖x − x†‖₂/‖x†‖₂`.
pub fn relative_error<T: Scalar>(x: &CoefVec<T>, x_true: &CoefVec<T>) -> Result<T> {
    check_len(x_true.len(), x.len())?;
    let norm = x_true.l2_norm();
    if norm == T::zero() {
        return Err(Error::InvalidParameter("reference solution is zero".into()));
    }
    Ok(x.sub(x_true)?.l2_norm() / norm)
}
