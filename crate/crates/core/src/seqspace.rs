//! Finite sections of the sequence spaces ℓ^p and ℓ^q.
//!
//! The primal variable lives in [`CoefVec`], dual objects (duality-map images,
//! gradients) in [`DualVec`]. Both share the storage type [`Seq`] and differ only
//! in a marker, so a gradient cannot be added to a coefficient vector by accident.
//! Mixing lengths is always an error.

use std::fmt;
use std::marker::PhantomData;

use serde::{Deserialize, Serialize};

use crate::error::{check_len, Error, Result};
use crate::scalar::{lit, signed_pow, Scalar};

/// Marker for primal (ℓ^p) sequences.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Primal {}

/// Marker for dual (ℓ^q) sequences.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dual {}

/// Finite real sequence tagged with the space it belongs to.
pub struct Seq<T, S> {
    entries: Vec<T>,
    _space: PhantomData<S>,
}

/// Truncated ℓ^p coefficient sequence.
pub type CoefVec<T> = Seq<T, Primal>;
/// Truncated ℓ^q dual sequence.
pub type DualVec<T> = Seq<T, Dual>;

impl<T: Clone, S> Clone for Seq<T, S> {
    fn clone(&self) -> Self {
        Self::from_vec_unchecked(self.entries.clone())
    }
}

impl<T: fmt::Debug, S> fmt::Debug for Seq<T, S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("Seq").field(&self.entries).finish()
    }
}

impl<T: PartialEq, S> PartialEq for Seq<T, S> {
    fn eq(&self, other: &Self) -> bool {
        self.entries == other.entries
    }
}

impl<T: Serialize, S> Serialize for Seq<T, S> {
    fn serialize<Ser: serde::Serializer>(&self, s: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        self.entries.serialize(s)
    }
}

impl<'de, T: Scalar + Deserialize<'de>, S> Deserialize<'de> for Seq<T, S> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let entries = Vec::<T>::deserialize(d)?;
        Seq::new(entries).map_err(serde::de::Error::custom)
    }
}

impl<T, S> Seq<T, S> {
    pub(crate) fn from_vec_unchecked(entries: Vec<T>) -> Self {
        Self {
            entries,
            _space: PhantomData,
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn as_slice(&self) -> &[T] {
        &self.entries
    }

    pub fn iter(&self) -> std::slice::Iter<'_, T> {
        self.entries.iter()
    }

    pub fn into_vec(self) -> Vec<T> {
        self.entries
    }
}

impl<T: Scalar, S> Seq<T, S> {
    /// Wraps `entries`, rejecting empty input and non-finite values.
    pub fn new(entries: Vec<T>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Empty);
        }
        if let Some(index) = entries.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self::from_vec_unchecked(entries))
    }

    pub fn zeros(n: usize) -> Self {
        Self::from_vec_unchecked(vec![T::zero(); n])
    }

    /// Canonical unit vector with a one at 0-based position `index`.
    pub fn unit(n: usize, index: usize) -> Self {
        let mut v = vec![T::zero(); n];
        v[index] = T::one();
        Self::from_vec_unchecked(v)
    }

    pub fn from_fn(n: usize, f: impl FnMut(usize) -> T) -> Self {
        Self::from_vec_unchecked((0..n).map(f).collect())
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().all(|v| v.is_finite())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|v| *v == T::zero())
    }

    /// Euclidean norm, independent of the exponent of the ambient space.
    pub fn l2_norm(&self) -> T {
        self.entries.iter().map(|v| *v * *v).sum::<T>().sqrt()
    }

    pub fn scaled(&self, factor: T) -> Self {
        Self::from_vec_unchecked(self.entries.iter().map(|v| *v * factor).collect())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    /// `self + factor·other`.
    pub fn add_scaled(&self, factor: T, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + factor * b)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(T, T) -> T) -> Result<Self> {
        check_len(self.len(), other.len())?;
        Ok(Self::from_vec_unchecked(
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| f(*a, *b))
                .collect(),
        ))
    }

    /// Signed power map `sign(v)·|v|^e` applied entrywise.
    fn signed_power<R>(&self, e: T) -> Seq<T, R> {
        Seq::from_vec_unchecked(self.entries.iter().map(|v| signed_pow(*v, e)).collect())
    }

    fn power_sum(&self, r: T) -> T {
        if r == lit(2.0) {
            self.entries.iter().map(|v| *v * *v).sum()
        } else {
            self.entries.iter().map(|v| v.abs().powf(r)).sum()
        }
    }

    fn power_norm(&self, r: T) -> T {
        if r == lit(2.0) {
            self.l2_norm()
        } else {
            self.power_sum(r).powf(r.recip())
        }
    }
}

impl<T, S> std::ops::Index<usize> for Seq<T, S> {
    type Output = T;
    fn index(&self, i: usize) -> &T {
        &self.entries[i]
    }
}

impl<T: Scalar> DualVec<T> {
    /// Duality pairing `⟨ξ, x⟩ = Σ ξ_i x_i`.
    pub fn pair(&self, x: &CoefVec<T>) -> Result<T> {
        check_len(self.len(), x.len())?;
        Ok(self.iter().zip(x.iter()).map(|(a, b)| *a * *b).sum())
    }

    /// The dual norm `‖ξ‖_q`.
    pub fn dual_norm(&self, e: Exponent<T>) -> T {
        self.power_norm(e.q())
    }

    /// Reinterprets this dual sequence as a primal one of the same length.
    ///
    /// Only meaningful when the Riesz identification is intended (p = 2, or
    /// operator adjoints whose output is known to live in both spaces).
    pub fn into_primal(self) -> CoefVec<T> {
        Seq::from_vec_unchecked(self.entries)
    }
}

impl<T: Scalar> CoefVec<T> {
    pub fn into_dual(self) -> DualVec<T> {
        Seq::from_vec_unchecked(self.entries)
    }
}

/// Penalty exponent `p ∈ (1, 2]` together with its conjugate `q = p/(p−1)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Exponent<T> {
    p: T,
}

impl<T: Scalar> Serialize for Exponent<T> {
    fn serialize<Ser: serde::Serializer>(&self, s: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        s.serialize_f64(self.p.as_f64())
    }
}

impl<'de, T: Scalar> Deserialize<'de> for Exponent<T> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let p = f64::deserialize(d)?;
        Exponent::new(T::lit(p)).map_err(serde::de::Error::custom)
    }
}

impl<T: Scalar> Exponent<T> {
    pub fn new(p: T) -> Result<Self> {
        if p.is_finite() && p > T::one() && p <= lit(2.0) {
            Ok(Self { p })
        } else {
            Err(Error::InvalidExponent(p.as_f64()))
        }
    }

    pub fn p(&self) -> T {
        self.p
    }

    /// Conjugate exponent; exactly 2 when `p` is 2.
    pub fn q(&self) -> T {
        if self.p == lit(2.0) {
            self.p
        } else {
            self.p / (self.p - T::one())
        }
    }

    /// `q − 1 = 1/(p − 1)`, computed without going through `q`.
    fn q_minus_one(&self) -> T {
        (self.p - T::one()).recip()
    }
}

/// `‖x‖_p = (Σ|x_i|^p)^{1/p}`.
pub fn lp_norm<T: Scalar>(x: &CoefVec<T>, e: Exponent<T>) -> T {
    x.power_norm(e.p())
}

/// Penalty `f_p(x) = (1/p)·Σ|x_i|^p`.
pub fn fp_value<T: Scalar>(x: &CoefVec<T>, e: Exponent<T>) -> T {
    x.power_sum(e.p()) / e.p()
}

/// `f_q(ξ) = (1/q)·Σ|ξ_i|^q`.
pub fn fq_value<T: Scalar>(xi: &DualVec<T>, e: Exponent<T>) -> T {
    xi.power_sum(e.q()) / e.q()
}

/// Duality mapping `J_p(x)_i = sign(x_i)·|x_i|^{p−1}` (the gradient of `f_p`).
pub fn duality_map_p<T: Scalar>(x: &CoefVec<T>, e: Exponent<T>) -> DualVec<T> {
    if e.p() == lit(2.0) {
        return x.clone().into_dual();
    }
    x.signed_power(e.p() - T::one())
}

/// Inverse duality mapping `J_q(ξ)_i = sign(ξ_i)·|ξ_i|^{q−1}`.
pub fn duality_map_q<T: Scalar>(xi: &DualVec<T>, e: Exponent<T>) -> CoefVec<T> {
    if e.p() == lit(2.0) {
        return xi.clone().into_primal();
    }
    xi.signed_power(e.q_minus_one())
}

/// Bregman distance of `f_p`: `D(z, x) = f_p(z) − f_p(x) − ⟨J_p(x), z − x⟩`.
pub fn bregman_fp<T: Scalar>(z: &CoefVec<T>, x: &CoefVec<T>, e: Exponent<T>) -> Result<T> {
    check_len(z.len(), x.len())?;
    let jx = duality_map_p(x, e);
    let diff = z.sub(x)?;
    Ok(fp_value(z, e) - fp_value(x, e) - jx.pair(&diff)?)
}

/// Bregman distance of `f_q` on the dual side: `f_q(a) − f_q(b) − ⟨J_q(b), a − b⟩`.
pub fn bregman_fq_dual<T: Scalar>(a: &DualVec<T>, b: &DualVec<T>, e: Exponent<T>) -> Result<T> {
    check_len(a.len(), b.len())?;
    let jb = duality_map_q(b, e);
    let diff = a.sub(b)?;
    Ok(fq_value(a, e) - fq_value(b, e) - diff.pair(&jb)?)
}
