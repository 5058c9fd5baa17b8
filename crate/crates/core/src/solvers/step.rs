//! One dual gradient step and the two step-size policies.

use crate::error::{Error, Result};
use crate::operators::ForwardOperator;
use crate::scalar::{lit, Scalar};
use crate::seqspace::{duality_map_p, duality_map_q, CoefVec, DualVec, Exponent};
use crate::theory::TheoryConstants;
use crate::tikhonov::{Evaluation, ProblemInstance};

const GOLDEN_ITERS: usize = 60;
const LINE_SEARCH_SPAN: f64 = 10.0;

/// `J_q(J_p(x) − β·g)`.
pub(crate) fn step_along<T: Scalar>(x: &CoefVec<T>, g: &DualVec<T>, beta: T, e: Exponent<T>) -> Result<CoefVec<T>> {
    if beta == T::zero() {
        return Ok(x.clone());
    }
    Ok(duality_map_q(&duality_map_p(x, e).add_scaled(-beta, g)?, e))
}

/// `J_q(J_p(x) − β∇Φ_α(x))`.
pub fn dual_step<T: Scalar, F: ForwardOperator<T>>(
    prob: &ProblemInstance<T, F>,
    alpha: T,
    x: &CoefVec<T>,
    beta: T,
) -> Result<CoefVec<T>> {
    if !(beta >= T::zero() && beta.is_finite()) {
        return Err(Error::InvalidParameter(format!("step size {beta} must be finite and nonnegative")));
    }
    let g = prob.phi_gradient(alpha, x)?;
    step_along(x, &g, beta, prob.exponent())
}

/// `min(1/‖∇Φ‖, cap)`.
pub fn practical_step_size<T: Scalar>(grad_norm: T, cap: T) -> Result<T> {
    if grad_norm == T::zero() {
        return Err(Error::ZeroGradient);
    }
    if !(grad_norm > T::zero() && grad_norm.is_finite()) {
        return Err(Error::InvalidParameter(format!("gradient norm {grad_norm} must be positive and finite")));
    }
    Ok(grad_norm.recip().min(cap))
}

/// Step size from the convergence analysis at `x`, with the dual gradient norm.
pub fn theoretical_step_size<T: Scalar, F: ForwardOperator<T>>(
    prob: &ProblemInstance<T, F>,
    alpha: T,
    x: &CoefVec<T>,
    constants: &TheoryConstants<T>,
) -> Result<T> {
    let ev = prob.evaluate(alpha, x)?;
    theoretical_from(prob, alpha, x, &ev, constants)
}

pub(crate) fn theoretical_from<T: Scalar, F: ForwardOperator<T>>(
    prob: &ProblemInstance<T, F>,
    alpha: T,
    x: &CoefVec<T>,
    ev: &Evaluation<T>,
    constants: &TheoryConstants<T>,
) -> Result<T> {
    let gn = ev.gradient.dual_norm(prob.exponent());
    if gn == T::zero() {
        return Err(Error::ZeroGradient);
    }
    let phi_min = line_minimum(prob, alpha, x, &ev.gradient, ev.phi, lit::<T>(LINE_SEARCH_SPAN) / gn)?;
    let cbar = constants.c_bar_jk(alpha, ev.phi, phi_min)?;
    let first = constants.gamma() * cbar * alpha / (gn * gn);
    let second = (lit::<T>(2.0) * constants.m_alpha(alpha)?).recip();
    Ok(first.min(second))
}

/// Approximates `min_{t>0} Φ_α(J_q(J_p(x) − t·g))` by golden-section search on
/// `(0, t_max]`. Never exceeds `phi_x`, the value at `t = 0`.
fn line_minimum<T: Scalar, F: ForwardOperator<T>>(
    prob: &ProblemInstance<T, F>,
    alpha: T,
    x: &CoefVec<T>,
    g: &DualVec<T>,
    phi_x: T,
    t_max: T,
) -> Result<T> {
    let e = prob.exponent();
    let jx = duality_map_p(x, e);
    let eval = |t: T| -> Result<T> {
        let v = prob.phi_value(alpha, &duality_map_q(&jx.add_scaled(-t, g)?, e))?;
        Ok(if v.is_finite() { v } else { T::infinity() })
    };
    let ratio = (lit::<T>(5.0).sqrt() - T::one()) / lit(2.0);
    let (mut a, mut b) = (T::zero(), t_max);
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let (mut fc, mut fd) = (eval(c)?, eval(d)?);
    let mut best = phi_x.min(fc).min(fd);
    for _ in 0..GOLDEN_ITERS {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = eval(c)?;
            best = best.min(fc);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = eval(d)?;
            best = best.min(fd);
        }
    }
    Ok(best.min(eval(t_max)?))
}
