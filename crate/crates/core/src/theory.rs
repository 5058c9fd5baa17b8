//! Constants from the convergence analysis of the dual iteration.
//!
//! `AssumptionParams` carries the structural constants of the operator and the
//! noise level; [`TheoryConstants`] adds the algorithm parameters and evaluates
//! every α-dependent quantity, including the ones the theoretical step size needs.
//!
//! The auxiliary constant `d_α` only has an existence proof; it is supplied
//! through [`DAlphaPolicy`], and every quantity built on it (`κ_α`, `T_α`,
//! `c_p(α)`, `M_α`) inherits that choice.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{lit, Scalar};
use crate::seqspace::Exponent;

/// Structural constants: nonlinearity `c`, Lipschitz constant `L` of `F'`,
/// scaling `s > 2`, source bound `ϱ < 1/(sc)`, noise level `δ`, derivative
/// bound `K` and minimizer-norm bound `A`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar + Serialize", deserialize = "T: Scalar + Deserialize<'de>"))]
pub struct AssumptionParams<T> {
    pub c: T,
    #[serde(rename = "L")]
    pub lipschitz: T,
    pub s: T,
    pub varrho: T,
    pub delta: T,
    #[serde(rename = "K")]
    pub k_bound: T,
    #[serde(rename = "A")]
    pub a_bound: T,
    pub p: Exponent<T>,
}

fn positive<T: Scalar>(name: &str, v: T) -> Result<()> {
    if v > T::zero() && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be positive and finite, got {v}")))
    }
}

impl<T: Scalar> AssumptionParams<T> {
    pub fn validate(&self) -> Result<()> {
        positive("c", self.c)?;
        positive("L", self.lipschitz)?;
        positive("varrho", self.varrho)?;
        positive("delta", self.delta)?;
        positive("K", self.k_bound)?;
        positive("A", self.a_bound)?;
        if !(self.s > lit(2.0) && self.s.is_finite()) {
            return Err(Error::InvalidParameter(format!("s must exceed 2, got {}", self.s)));
        }
        if self.sc_varrho() >= T::one() {
            return Err(Error::InvalidParameter(format!(
                "s·c·varrho = {} must be below 1",
                self.sc_varrho()
            )));
        }
        Ok(())
    }

    fn sc_varrho(&self) -> T {
        self.s * self.c * self.varrho
    }
}

/// `α* = δ/((s − 2)ϱ)`.
pub fn alpha_star<T: Scalar>(params: &AssumptionParams<T>) -> Result<T> {
    params.validate()?;
    Ok(params.delta / ((params.s - lit(2.0)) * params.varrho))
}

/// `γ = (1 − scϱ)/2`.
pub fn gamma<T: Scalar>(params: &AssumptionParams<T>) -> Result<T> {
    params.validate()?;
    Ok((T::one() - params.sc_varrho()) / lit(2.0))
}

/// `q̄₀ = 2scϱ/(1 + scϱ)`, the smallest admissible ratio of the α schedule.
pub fn qbar0<T: Scalar>(params: &AssumptionParams<T>) -> Result<T> {
    params.validate()?;
    let m = params.sc_varrho();
    Ok(lit::<T>(2.0) * m / (T::one() + m))
}

/// `τ = 2 + 2/(q̄(s − 2))`.
pub fn tau_discrepancy<T: Scalar>(qbar: T, s: T) -> Result<T> {
    if !(qbar > T::zero() && qbar < T::one()) {
        return Err(Error::InvalidParameter(format!("qbar must lie in (0, 1), got {qbar}")));
    }
    if !(s > lit(2.0) && s.is_finite()) {
        return Err(Error::InvalidParameter(format!("s must exceed 2, got {s}")));
    }
    Ok(lit::<T>(2.0) + lit::<T>(2.0) / (qbar * (s - lit(2.0))))
}

/// Minimizer-norm bound `A = (p/(2α*))^{1/p}·‖F(0) − y^δ‖^{2/p}`.
pub fn minimizer_norm_bound<T: Scalar>(p: Exponent<T>, alpha_star: T, initial_residual: T) -> Result<T> {
    positive("alpha_star", alpha_star)?;
    let p = p.p();
    Ok((p / (lit::<T>(2.0) * alpha_star)).powf(p.recip()) * initial_residual.powf(lit::<T>(2.0) / p))
}

/// Derivative bound `K = L·A + ‖F'(0)‖`.
pub fn derivative_bound<T: Scalar>(lipschitz: T, a_bound: T, deriv_at_zero: T) -> T {
    lipschitz * a_bound + deriv_at_zero
}

/// Admissible upper-bound constant `c̃_p = 2^{2−p}` for `D_{f_p}(z, x) ≤ c̃_p‖x − z‖^p`.
pub fn c_p_tilde<T: Scalar>(p: Exponent<T>) -> T {
    lit::<T>(2.0).powf(lit::<T>(2.0) - p.p())
}

/// Choice of the non-constructive constant `d_α`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DAlphaPolicy<T> {
    /// `d_α = c̄_A(α)·r_α²`.
    #[default]
    Default,
    Fixed(T),
}

/// Assumption constants together with the algorithm parameters `α₀`, `q̄` and
/// the inner stopping factor (`C_α = factor·α`).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar + Serialize", deserialize = "T: Scalar + Deserialize<'de>"))]
pub struct TheoryConstants<T> {
    pub params: AssumptionParams<T>,
    pub alpha0: T,
    pub qbar: T,
    pub inner_grad_factor: T,
    #[serde(default)]
    pub d_alpha_policy: DAlphaPolicy<T>,
}

impl<T: Scalar> TheoryConstants<T> {
    pub fn new(params: AssumptionParams<T>, alpha0: T, qbar: T, inner_grad_factor: T) -> Result<Self> {
        let out = Self {
            params,
            alpha0,
            qbar,
            inner_grad_factor,
            d_alpha_policy: DAlphaPolicy::Default,
        };
        out.validate()?;
        Ok(out)
    }

    pub fn with_d_alpha(mut self, policy: DAlphaPolicy<T>) -> Result<Self> {
        self.d_alpha_policy = policy;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        positive("inner_grad_factor", self.inner_grad_factor)?;
        if !(self.qbar > T::zero() && self.qbar < T::one()) {
            return Err(Error::InvalidParameter(format!("qbar must lie in (0, 1), got {}", self.qbar)));
        }
        if let DAlphaPolicy::Fixed(d) = self.d_alpha_policy {
            positive("d_alpha", d)?;
        }
        self.check_alpha(self.alpha0)
    }

    fn p(&self) -> T {
        self.params.p.p()
    }

    fn check_alpha(&self, alpha: T) -> Result<()> {
        let star = self.alpha_star();
        if alpha.is_finite() && alpha >= star {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("alpha = {alpha} lies below alpha* = {star}")))
        }
    }

    pub fn alpha_star(&self) -> T {
        let p = &self.params;
        p.delta / ((p.s - lit(2.0)) * p.varrho)
    }

    pub fn gamma(&self) -> T {
        (T::one() - self.params.sc_varrho()) / lit(2.0)
    }

    pub fn qbar0(&self) -> T {
        let m = self.params.sc_varrho();
        lit::<T>(2.0) * m / (T::one() + m)
    }

    pub fn tau(&self) -> T {
        lit::<T>(2.0) + lit::<T>(2.0) / (self.qbar * (self.params.s - lit(2.0)))
    }

    pub fn c_p_tilde(&self) -> T {
        c_p_tilde(self.params.p)
    }

    /// `c_A = ((p−1)/2)(3A)^{p−2}`.
    pub fn c_a(&self) -> T {
        let p = self.p();
        (p - T::one()) / lit(2.0) * (lit::<T>(3.0) * self.params.a_bound).powf(p - lit(2.0))
    }

    /// `σ = 2sϱK / (c_A(1 − scϱ)α*)`.
    pub fn sigma(&self) -> T {
        let p = &self.params;
        lit::<T>(2.0) * p.s * p.varrho * p.k_bound / (self.c_a() * (T::one() - p.sc_varrho()) * self.alpha_star())
    }

    /// Radius of the convexity region, `(2/(1+√2))·min{γα/(csK), √(γα/(10cL))}`.
    pub fn r_alpha(&self, alpha: T) -> Result<T> {
        self.check_alpha(alpha)?;
        Ok(self.r_unchecked(alpha))
    }

    fn r_unchecked(&self, alpha: T) -> T {
        let p = &self.params;
        let g = self.gamma();
        let linear = g * alpha / (p.c * p.s * p.k_bound);
        let root = (g * alpha / (lit::<T>(10.0) * p.c * p.lipschitz)).sqrt();
        lit::<T>(2.0) / (T::one() + lit::<T>(2.0).sqrt()) * linear.min(root)
    }

    /// `ρ = max{c̃_p^{1/p}, 2A^{p−1} + r_{α₀}^{p−1}}`.
    pub fn rho_upd(&self) -> T {
        let p = self.p();
        let a = self.params.a_bound;
        let first = self.c_p_tilde().powf(p.recip());
        let second = lit::<T>(2.0) * a.powf(p - T::one()) + self.r_unchecked(self.alpha0).powf(p - T::one());
        first.max(second)
    }

    /// `c̄_A(α) = ((p−1)/2)(2r_α + A)^{p−2}`.
    pub fn c_bar_a(&self, alpha: T) -> Result<T> {
        let r = self.r_alpha(alpha)?;
        let p = self.p();
        Ok((p - T::one()) / lit(2.0) * (lit::<T>(2.0) * r + self.params.a_bound).powf(p - lit(2.0)))
    }

    pub fn d_alpha(&self, alpha: T) -> Result<T> {
        match self.d_alpha_policy {
            DAlphaPolicy::Default => {
                let r = self.r_alpha(alpha)?;
                Ok(self.c_bar_a(alpha)? * r * r)
            }
            DAlphaPolicy::Fixed(d) => {
                self.check_alpha(alpha)?;
                Ok(d)
            }
        }
    }

    /// `(Lr_α + K)` and `c·d_α + (Lr_α + K)r_α + sϱα`, shared by κ_α and M_α.
    fn kappa_parts(&self, alpha: T) -> Result<(T, T)> {
        let p = &self.params;
        let r = self.r_alpha(alpha)?;
        let lk = p.lipschitz * r + p.k_bound;
        let inner = p.c * self.d_alpha(alpha)? + lk * r + p.s * p.varrho * alpha;
        Ok((lk, inner))
    }

    /// `κ_α = (Lr_α + K)(c·d_α + (Lr_α + K)r_α + sϱα) + α(r_α + A)^{p−1}`.
    pub fn kappa_alpha(&self, alpha: T) -> Result<T> {
        let (lk, inner) = self.kappa_parts(alpha)?;
        let r = self.r_alpha(alpha)?;
        Ok(lk * inner + alpha * (r + self.params.a_bound).powf(self.p() - T::one()))
    }

    /// `c̃_q(α) = max{1, ((q−1)/2)(2(r_α + A)^{p−1} + r_α)^{q−2}}`.
    pub fn c_q_tilde_alpha(&self, alpha: T) -> Result<T> {
        let r = self.r_alpha(alpha)?;
        let e = self.params.p;
        let q = e.q();
        let base = lit::<T>(2.0) * (r + self.params.a_bound).powf(e.p() - T::one()) + r;
        Ok(T::one().max((q - T::one()) / lit(2.0) * base.powf(q - lit(2.0))))
    }

    /// `C_α = inner_grad_factor·α`.
    pub fn c_alpha(&self, alpha: T) -> T {
        self.inner_grad_factor * alpha
    }

    /// `T_α = r_α / (c̃_q(α)·C_α)`.
    pub fn t_alpha(&self, alpha: T) -> Result<T> {
        Ok(self.r_alpha(alpha)? / (self.c_q_tilde_alpha(alpha)? * self.c_alpha(alpha)))
    }

    /// `c_p(α) = ((p−1)/2)(3(r_α + A) + 2(T_ακ_α)^{p−1})^{p−2}`.
    pub fn c_p_alpha(&self, alpha: T) -> Result<T> {
        let p = self.p();
        let r = self.r_alpha(alpha)?;
        let tk = self.t_alpha(alpha)? * self.kappa_alpha(alpha)?;
        let base = lit::<T>(3.0) * (r + self.params.a_bound) + lit::<T>(2.0) * tk.powf(p - T::one());
        Ok((p - T::one()) / lit(2.0) * base.powf(p - lit(2.0)))
    }

    /// `M_α = c²T_α²κ_α²/(2c_p(α)) + (Lr_α + K)/c_p(α) + c(c·d_α + (Lr_α + K)r_α + sϱα) + α`.
    pub fn m_alpha(&self, alpha: T) -> Result<T> {
        let c = self.params.c;
        let t = self.t_alpha(alpha)?;
        let kappa = self.kappa_alpha(alpha)?;
        let cp = self.c_p_alpha(alpha)?;
        let (lk, inner) = self.kappa_parts(alpha)?;
        Ok(c * c * t * t * kappa * kappa / (lit::<T>(2.0) * cp) + lk / cp + c * inner + alpha)
    }

    /// `c̄_{j,k} = min{1, 8c̄_A(Φ − φ) / (4K² + 4Lsϱα + 4LKr_α + L²r_α² + 8αc̃_p c̄_A^{(2−p)/2})}`.
    pub fn c_bar_jk(&self, alpha: T, phi: T, phi_min: T) -> Result<T> {
        let p = &self.params;
        let r = self.r_alpha(alpha)?;
        let cba = self.c_bar_a(alpha)?;
        let four = lit::<T>(4.0);
        let denom = four * p.k_bound * p.k_bound
            + four * p.lipschitz * p.s * p.varrho * alpha
            + four * p.lipschitz * p.k_bound * r
            + p.lipschitz * p.lipschitz * r * r
            + lit::<T>(8.0) * alpha * self.c_p_tilde() * cba.powf((lit::<T>(2.0) - self.p()) / lit(2.0));
        let gap = (phi - phi_min).max(T::zero());
        Ok(T::one().min(lit::<T>(8.0) * cba * gap / denom))
    }

    /// Every constant at `alpha`, as plain numbers.
    pub fn report(&self, alpha: T) -> Result<ConstantsReport> {
        Ok(ConstantsReport {
            alpha: alpha.as_f64(),
            alpha_star: self.alpha_star().as_f64(),
            gamma: self.gamma().as_f64(),
            qbar0: self.qbar0().as_f64(),
            tau: self.tau().as_f64(),
            sigma: self.sigma().as_f64(),
            rho_upd: self.rho_upd().as_f64(),
            c_a: self.c_a().as_f64(),
            c_p_tilde: self.c_p_tilde().as_f64(),
            r_alpha: self.r_alpha(alpha)?.as_f64(),
            d_alpha: self.d_alpha(alpha)?.as_f64(),
            c_bar_a: self.c_bar_a(alpha)?.as_f64(),
            kappa_alpha: self.kappa_alpha(alpha)?.as_f64(),
            c_q_tilde_alpha: self.c_q_tilde_alpha(alpha)?.as_f64(),
            c_alpha: self.c_alpha(alpha).as_f64(),
            t_alpha: self.t_alpha(alpha)?.as_f64(),
            c_p_alpha: self.c_p_alpha(alpha)?.as_f64(),
            m_alpha: self.m_alpha(alpha)?.as_f64(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstantsReport {
    pub alpha: f64,
    pub alpha_star: f64,
    pub gamma: f64,
    pub qbar0: f64,
    pub tau: f64,
    pub sigma: f64,
    pub rho_upd: f64,
    pub c_a: f64,
    pub c_p_tilde: f64,
    pub r_alpha: f64,
    pub d_alpha: f64,
    pub c_bar_a: f64,
    pub kappa_alpha: f64,
    pub c_q_tilde_alpha: f64,
    pub c_alpha: f64,
    pub t_alpha: f64,
    pub c_p_alpha: f64,
    pub m_alpha: f64,
}
