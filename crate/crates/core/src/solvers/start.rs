use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal, Uniform};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::seqspace::{lp_norm, CoefVec, Exponent};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StartDistribution {
    /// i.i.d. standard normal entries.
    Normal,
    /// i.i.d. entries uniform on `[0, 1)`.
    Uniform,
}

/// Norm used to measure the size of a start vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StartNorm {
    Lp,
    L2,
}

impl StartNorm {
    pub fn measure<T: Scalar>(&self, x: &CoefVec<T>, e: Exponent<T>) -> T {
        match self {
            StartNorm::Lp => lp_norm(x, e),
            StartNorm::L2 => x.l2_norm(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StartSpec {
    pub distribution: StartDistribution,
    pub norm: StartNorm,
}

/// Seeded random vector rescaled to `target_norm` in the chosen norm.
pub fn sample_start<T: Scalar>(
    n: usize,
    target_norm: T,
    spec: StartSpec,
    e: Exponent<T>,
    seed: u64,
) -> Result<CoefVec<T>> {
    if !(target_norm >= T::zero() && target_norm.is_finite()) {
        return Err(Error::InvalidParameter(format!("start norm {target_norm} must be finite and nonnegative")));
    }
    if n == 0 {
        return Err(Error::Empty);
    }
    if target_norm == T::zero() {
        return Ok(CoefVec::zeros(n));
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let raw: Vec<f64> = match spec.distribution {
        StartDistribution::Normal => (0..n).map(|_| StandardNormal.sample(&mut rng)).collect(),
        StartDistribution::Uniform => {
            let u = Uniform::new(0.0, 1.0).expect("valid range");
            (0..n).map(|_| u.sample(&mut rng)).collect()
        }
    };
    let x = CoefVec::new(raw.into_iter().map(T::lit).collect())?;
    let size = spec.norm.measure(&x, e);
    if size == T::zero() {
        return Err(Error::ZeroStart);
    }
    Ok(x.scaled(target_norm / size))
}

/// Standard-normal start vector with `‖x₀‖_p = target_norm`.
pub fn random_start<T: Scalar>(n: usize, target_norm: T, e: Exponent<T>, seed: u64) -> Result<CoefVec<T>> {
    let spec = StartSpec {
        distribution: StartDistribution::Normal,
        norm: StartNorm::Lp,
    };
    sample_start(n, target_norm, spec, e, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn hits_target_norm() {
        for p in [1.2, 1.6, 2.0] {
            let e = Exponent::new(p).unwrap();
            for target in [1.0, 500.0, 1e4] {
                let x = random_start(512, target, e, 9).unwrap();
                assert_relative_eq!(lp_norm(&x, e), target, max_relative = 1e-12);
                let spec = StartSpec {
                    distribution: StartDistribution::Uniform,
                    norm: StartNorm::L2,
                };
                let u = sample_start(512, target, spec, e, 9).unwrap();
                assert_relative_eq!(u.l2_norm(), target, max_relative = 1e-12);
                assert!(u.iter().all(|v| *v >= 0.0));
            }
        }
    }

    #[test]
    fn zero_target_and_determinism() {
        let e = Exponent::new(1.2).unwrap();
        assert!(random_start(16, 0.0, e, 1).unwrap().is_zero());
        assert_eq!(random_start(16, 2.0, e, 5).unwrap(), random_start(16, 2.0, e, 5).unwrap());
        assert_ne!(random_start(16, 2.0, e, 5).unwrap(), random_start(16, 2.0, e, 6).unwrap());
        assert!(random_start(16, -1.0, e, 1).is_err());
    }
}
