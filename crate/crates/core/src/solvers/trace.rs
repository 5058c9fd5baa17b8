use std::hash::{DefaultHasher, Hash, Hasher};
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;
use crate::seqspace::CoefVec;

/// Why a solver returned.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StopReason {
    /// Residual dropped to `τδ`.
    Discrepancy,
    /// Iteration budget exhausted (outer levels for d-TIGRA, iterations for Landweber).
    OuterCap,
    /// The next regularization parameter would fall below the configured floor.
    AlphaFloor,
}

impl StopReason {
    pub fn as_str(&self) -> &'static str {
        match self {
            StopReason::Discrepancy => "Discrepancy",
            StopReason::OuterCap => "OuterCap",
            StopReason::AlphaFloor => "AlphaFloor",
        }
    }
}

impl std::fmt::Display for StopReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// State at one evaluated iterate `x_{j,k}`. `beta` is the step taken from it,
/// or zero when the inner loop ended there.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceRecord<T> {
    pub j: usize,
    pub k: usize,
    pub alpha: T,
    pub beta: T,
    pub phi: T,
    pub grad_norm: T,
    pub residual: T,
    /// Hash of the bit pattern of the iterate.
    pub fingerprint: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolverTrace<T> {
    pub records: Vec<TraceRecord<T>>,
    pub stop_reason: StopReason,
}

pub const TRACE_HEADER: &str = "j,k,alpha,beta,phi,grad_norm,residual";

impl<T: Scalar> SolverTrace<T> {
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "{TRACE_HEADER}")?;
        for r in &self.records {
            writeln!(
                w,
                "{},{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                r.j,
                r.k,
                r.alpha.as_f64(),
                r.beta.as_f64(),
                r.phi.as_f64(),
                r.grad_norm.as_f64(),
                r.residual.as_f64()
            )?;
        }
        Ok(())
    }
}

pub fn fingerprint<T: Scalar>(x: &CoefVec<T>) -> u64 {
    let mut h = DefaultHasher::new();
    for v in x.iter() {
        v.as_f64().to_bits().hash(&mut h);
    }
    h.finish()
}
