//! The Tikhonov functional `Φ_α(x) = ½‖F(x) − y^δ‖² + α·f_p(x)` and its gradient.

use crate::error::{check_len, Error, Result};
use crate::operators::ForwardOperator;
use crate::scalar::{lit, Scalar};
use crate::seqspace::{duality_map_p, fp_value, CoefVec, DualVec, Exponent};
use crate::signal::{l2_norm, Signal};

/// Forward operator, noisy data, noise level and penalty exponent.
#[derive(Clone, Debug)]
pub struct ProblemInstance<T, F> {
    forward: F,
    data: Signal<T>,
    delta: T,
    exponent: Exponent<T>,
}

/// Value, gradient and residual norm at one point, sharing a single forward evaluation.
#[derive(Clone, Debug)]
pub struct Evaluation<T> {
    pub phi: T,
    pub gradient: DualVec<T>,
    pub residual: T,
}

fn check_alpha<T: Scalar>(alpha: T) -> Result<()> {
    if alpha > T::zero() && alpha.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositiveAlpha(alpha.as_f64()))
    }
}

impl<T: Scalar, F: ForwardOperator<T>> ProblemInstance<T, F> {
    pub fn new(forward: F, data: Signal<T>, delta: T, exponent: Exponent<T>) -> Result<Self> {
        check_len(forward.grid_size(), data.grid_size())?;
        if !(delta >= T::zero() && delta.is_finite()) {
            return Err(Error::InvalidParameter(format!("noise level {delta} must be finite and nonnegative")));
        }
        if !data.is_finite() {
            return Err(Error::InvalidParameter("data contains non-finite samples".into()));
        }
        Ok(Self { forward, data, delta, exponent })
    }

    pub fn forward(&self) -> &F {
        &self.forward
    }

    pub fn data(&self) -> &Signal<T> {
        &self.data
    }

    pub fn delta(&self) -> T {
        self.delta
    }

    pub fn exponent(&self) -> Exponent<T> {
        self.exponent
    }

    pub fn coef_len(&self) -> usize {
        self.forward.coef_len()
    }

    /// `F(x) − y^δ`.
    pub fn residual(&self, x: &CoefVec<T>) -> Result<Signal<T>> {
        self.forward.apply(x)?.sub(&self.data)
    }

    pub fn residual_norm(&self, x: &CoefVec<T>) -> Result<T> {
        Ok(l2_norm(&self.residual(x)?))
    }

    pub fn phi_value(&self, alpha: T, x: &CoefVec<T>) -> Result<T> {
        check_alpha(alpha)?;
        let r = self.residual_norm(x)?;
        Ok(lit::<T>(0.5) * r * r + alpha * fp_value(x, self.exponent))
    }

    /// `∇Φ_α(x) = F'(x)*(F(x) − y^δ) + α·J_p(x)`.
    pub fn phi_gradient(&self, alpha: T, x: &CoefVec<T>) -> Result<DualVec<T>> {
        Ok(self.evaluate(alpha, x)?.gradient)
    }

    pub fn evaluate(&self, alpha: T, x: &CoefVec<T>) -> Result<Evaluation<T>> {
        check_alpha(alpha)?;
        let res = self.residual(x)?;
        let residual = l2_norm(&res);
        let phi = lit::<T>(0.5) * residual * residual + alpha * fp_value(x, self.exponent);
        let gradient = self
            .forward
            .adjoint_derivative(x, &res)?
            .add_scaled(alpha, &duality_map_p(x, self.exponent))?;
        Ok(Evaluation { phi, gradient, residual })
    }
}
