//! Functions on [0, 1] sampled at cell midpoints, and noise injection.

use std::io::{BufRead, Write};

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{check_len, Error, Result};
use crate::scalar::{lit, Scalar};

/// Name of the pseudo-random generator used for every seeded draw in this crate.
pub const RNG_ALGORITHM: &str = "ChaCha20 (rand_chacha), seeded via seed_from_u64";

/// Samples `f(t_i)` at the midpoints `t_i = (i − ½)/n`, `i = 1..n`.
#[derive(Clone, Debug, PartialEq)]
pub struct Signal<T> {
    samples: Vec<T>,
}

impl<T: Scalar> Signal<T> {
    pub fn new(samples: Vec<T>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::Empty);
        }
        if let Some(index) = samples.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { samples })
    }

    pub(crate) fn from_vec_unchecked(samples: Vec<T>) -> Self {
        Self { samples }
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            samples: vec![T::zero(); n],
        }
    }

    /// Samples `f` on the midpoint grid of size `n`.
    pub fn from_fn(n: usize, f: impl Fn(T) -> T) -> Self {
        Self {
            samples: (0..n).map(|i| f(midpoint(i, n))).collect(),
        }
    }

    pub fn grid_size(&self) -> usize {
        self.samples.len()
    }

    pub fn as_slice(&self) -> &[T] {
        &self.samples
    }

    pub fn into_vec(self) -> Vec<T> {
        self.samples
    }

    /// Grid abscissae `t_i`.
    pub fn grid(&self) -> impl Iterator<Item = T> + '_ {
        let n = self.grid_size();
        (0..n).map(move |i| midpoint(i, n))
    }

    pub fn is_finite(&self) -> bool {
        self.samples.iter().all(|v| v.is_finite())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        check_len(self.grid_size(), other.grid_size())?;
        Ok(Self::from_vec_unchecked(
            self.samples.iter().zip(&other.samples).map(|(a, b)| *a - *b).collect(),
        ))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_len(self.grid_size(), other.grid_size())?;
        Ok(Self::from_vec_unchecked(
            self.samples.iter().zip(&other.samples).map(|(a, b)| *a + *b).collect(),
        ))
    }

    pub fn scaled(&self, factor: T) -> Self {
        Self::from_vec_unchecked(self.samples.iter().map(|v| *v * factor).collect())
    }

    /// Writes `t,value` rows with 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "t,value")?;
        for (t, v) in self.grid().zip(&self.samples) {
            writeln!(w, "{:.16e},{:.16e}", t.as_f64(), v.as_f64())?;
        }
        Ok(())
    }

    /// Reads the format produced by [`Signal::write_csv`]. The grid column is
    /// checked against the midpoint grid implied by the row count.
    pub fn read_csv<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = r.lines();
        match lines.next() {
            Some(Ok(h)) if h.trim() == "t,value" => {}
            Some(Ok(h)) => return Err(Error::Parse(format!("unexpected header {h:?}"))),
            Some(Err(e)) => return Err(Error::Parse(e.to_string())),
            None => return Err(Error::Parse("empty signal file".into())),
        }
        let mut ts = Vec::new();
        let mut vs = Vec::new();
        for (row, line) in lines.enumerate() {
            let line = line.map_err(|e| Error::Parse(e.to_string()))?;
            if line.trim().is_empty() {
                continue;
            }
            let (t, v) = line
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("row {}: expected two columns", row + 1)))?;
            let parse = |s: &str| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::Parse(format!("row {}: {e}", row + 1)))
            };
            ts.push(parse(t)?);
            vs.push(T::lit(parse(v)?));
        }
        let n = vs.len();
        for (i, t) in ts.iter().enumerate() {
            let expected = (i as f64 + 0.5) / n as f64;
            if (t - expected).abs() > 1e-9 {
                return Err(Error::Parse(format!(
                    "row {}: grid point {t} does not match midpoint {expected}",
                    i + 1
                )));
            }
        }
        Signal::new(vs)
    }
}

fn midpoint<T: Scalar>(i: usize, n: usize) -> T {
    (lit::<T>(i as f64) + lit(0.5)) / lit(n as f64)
}

/// Midpoint-rule approximation of `∫₀¹ u v`: `(1/n)·Σ u_i v_i`.
pub fn l2_inner<T: Scalar>(u: &Signal<T>, v: &Signal<T>) -> Result<T> {
    check_len(u.grid_size(), v.grid_size())?;
    let n = lit::<T>(u.grid_size() as f64);
    Ok(u.samples.iter().zip(&v.samples).map(|(a, b)| *a * *b).sum::<T>() / n)
}

pub fn l2_norm<T: Scalar>(u: &Signal<T>) -> T {
    let n = lit::<T>(u.grid_size() as f64);
    (u.samples.iter().map(|a| *a * *a).sum::<T>() / n).sqrt()
}

/// Relative noise level and the seed of the generator that draws it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    pub relative_level: f64,
    pub seed: u64,
}

/// Adds Gaussian noise scaled so that `‖y^δ − y‖ = relative_level·‖y‖ = δ`.
///
/// Returns `(y^δ, δ)`. A fresh generator is built from `spec.seed` on each call.
pub fn add_noise<T: Scalar>(y: &Signal<T>, spec: NoiseSpec) -> Result<(Signal<T>, T)> {
    if !(spec.relative_level.is_finite() && spec.relative_level >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "relative noise level {} must be finite and nonnegative",
            spec.relative_level
        )));
    }
    let y_norm = l2_norm(y);
    if y_norm == T::zero() {
        return Err(Error::ZeroSignal);
    }
    let mut rng = ChaCha20Rng::seed_from_u64(spec.seed);
    let e: Vec<T> = (0..y.grid_size())
        .map(|_| T::lit(StandardNormal.sample(&mut rng)))
        .collect();
    let e = Signal::from_vec_unchecked(e);
    let delta = lit::<T>(spec.relative_level) * y_norm;
    let scale = delta / l2_norm(&e);
    Ok((y.add(&e.scaled(scale))?, delta))
}
