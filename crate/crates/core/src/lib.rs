//! Dual-space Tikhonov continuation for sparsity-regularized nonlinear inverse problems.
//!
//! The crate minimizes `Φ_α(x) = ½‖F(x) − y^δ‖² + (α/p)‖x‖_p^p`, `1 < p ≤ 2`, by
//! gradient steps taken on `J_p(x)` in the dual space, over a decreasing
//! geometric schedule of `α` that ends with the discrepancy principle. The
//! reference forward operator is the autoconvolution of a signal given by its
//! Haar wavelet coefficients.
//!
//! Numerical code is generic over [`Scalar`] (`f32` or `f64`); the aliases at
//! the crate root fix `f64`, which the experiment layer uses throughout.

pub mod error;
pub mod experiment;
pub mod operators;
mod scalar;
pub mod seqspace;
pub mod signal;
pub mod solvers;
pub mod theory;
pub mod tikhonov;

pub use error::{Error, Result};
pub use operators::{AutoconvOp, ComposedForward, DenseLinear, ForwardOperator, HaarSynthesis};
pub use scalar::Scalar;
pub use seqspace::{CoefVec, DualVec, Exponent};
pub use signal::{NoiseSpec, Signal};
pub use solvers::{DtigraConfig, LandweberConfig, SolverResult, StepPolicy, StopReason};
pub use theory::{AssumptionParams, TheoryConstants};
pub use tikhonov::ProblemInstance;

pub type CoefVecF64 = CoefVec<f64>;
pub type DualVecF64 = DualVec<f64>;
pub type SignalF64 = Signal<f64>;
pub type ExponentF64 = Exponent<f64>;
pub type AutoconvProblem = ProblemInstance<f64, ComposedForward>;
pub type DtigraConfigF64 = DtigraConfig<f64>;
pub type SolverResultF64 = SolverResult<f64>;
pub type TheoryConstantsF64 = TheoryConstants<f64>;
