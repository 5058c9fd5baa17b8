//! Forward operators: discrete autoconvolution, orthonormal Haar synthesis,
//! their composition, and a dense linear map for small test problems.
//!
//! Every adjoint here is the exact transpose of the implemented derivative with
//! respect to [`l2_inner`](crate::signal::l2_inner) on the data side and the
//! Euclidean pairing on the coefficient side.

use crate::error::{check_len, Error, Result};
use crate::scalar::{lit, Scalar};
use crate::seqspace::{CoefVec, DualVec};
use crate::signal::Signal;

/// A Fréchet-differentiable map from coefficient sequences to sampled signals.
pub trait ForwardOperator<T: Scalar> {
    /// Number of coefficients accepted.
    fn coef_len(&self) -> usize;

    /// Grid size of the produced signals.
    fn grid_size(&self) -> usize;

    fn apply(&self, x: &CoefVec<T>) -> Result<Signal<T>>;

    /// Directional derivative `F'(x)h`.
    fn derivative(&self, x: &CoefVec<T>, h: &CoefVec<T>) -> Result<Signal<T>>;

    /// Adjoint of the derivative, `F'(x)* w`.
    fn adjoint_derivative(&self, x: &CoefVec<T>, w: &Signal<T>) -> Result<DualVec<T>>;
}

/// Dot product with four independent accumulators.
#[inline]
fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    let n = a.len().min(b.len());
    let (a, b) = (&a[..n], &b[..n]);
    let mut acc = [T::zero(); 4];
    let chunks = n / 4;
    for c in 0..chunks {
        let i = 4 * c;
        acc[0] = acc[0] + a[i] * b[i];
        acc[1] = acc[1] + a[i + 1] * b[i + 1];
        acc[2] = acc[2] + a[i + 2] * b[i + 2];
        acc[3] = acc[3] + a[i + 3] * b[i + 3];
    }
    let mut tail = T::zero();
    for i in 4 * chunks..n {
        tail = tail + a[i] * b[i];
    }
    (acc[0] + acc[1]) + (acc[2] + acc[3]) + tail
}

/// Causal discrete autoconvolution `(Gf)_m = (1/n)·Σ_{i=1..m} f_i f_{m+1−i}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AutoconvOp {
    grid_size: usize,
}

impl AutoconvOp {
    pub fn new(grid_size: usize) -> Result<Self> {
        if grid_size == 0 {
            return Err(Error::Empty);
        }
        Ok(Self { grid_size })
    }

    pub fn grid_size(&self) -> usize {
        self.grid_size
    }

    fn check<T: Scalar>(&self, s: &Signal<T>) -> Result<()> {
        check_len(self.grid_size, s.grid_size())
    }

    /// `(G f)_m` for every grid index.
    pub fn apply<T: Scalar>(&self, f: &Signal<T>) -> Result<Signal<T>> {
        self.check(f)?;
        let n = self.grid_size;
        let f = f.as_slice();
        let rev: Vec<T> = f.iter().rev().copied().collect();
        let inv_n = lit::<T>(n as f64).recip();
        // f[0..=m] against f[m..=0]: the reversed copy makes that window contiguous.
        let out = (0..n)
            .map(|m| dot(&f[..=m], &rev[n - 1 - m..]) * inv_n)
            .collect();
        Ok(Signal::from_vec_unchecked(out))
    }

    /// `G'(f)h = 2·(f ∗ h)`, causal and truncated to the grid.
    pub fn derivative<T: Scalar>(&self, f: &Signal<T>, h: &Signal<T>) -> Result<Signal<T>> {
        self.check(f)?;
        self.check(h)?;
        let n = self.grid_size;
        let rev: Vec<T> = f.as_slice().iter().rev().copied().collect();
        let h = h.as_slice();
        let scale = lit::<T>(2.0) / lit(n as f64);
        let out = (0..n)
            .map(|m| dot(&h[..=m], &rev[n - 1 - m..]) * scale)
            .collect();
        Ok(Signal::from_vec_unchecked(out))
    }

    /// Transpose of [`AutoconvOp::derivative`]: `(G'(f)* w)_i = (2/n)·Σ_{m≥i} f_{m+1−i} w_m`.
    pub fn adjoint<T: Scalar>(&self, f: &Signal<T>, w: &Signal<T>) -> Result<Signal<T>> {
        self.check(f)?;
        self.check(w)?;
        let n = self.grid_size;
        let (f, w) = (f.as_slice(), w.as_slice());
        let scale = lit::<T>(2.0) / lit(n as f64);
        let out = (0..n).map(|i| dot(&f[..n - i], &w[i..]) * scale).collect();
        Ok(Signal::from_vec_unchecked(out))
    }
}

/// Orthonormal Haar synthesis on `2^J` midpoint samples.
///
/// Coefficient order (0-based): index 0 is the scaling function (constant one),
/// then wavelets level by level, `ℓ = 0..J−1`, and by shift `k = 0..2^ℓ−1`
/// within a level. Index `2^ℓ + k` holds `ψ_{ℓ,k} = 2^{ℓ/2} ψ(2^ℓ t − k)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HaarSynthesis {
    levels: u32,
}

impl HaarSynthesis {
    pub fn new(levels: u32) -> Result<Self> {
        if levels > 30 {
            return Err(Error::InvalidParameter(format!("{levels} Haar levels is too many")));
        }
        Ok(Self { levels })
    }

    pub fn for_size(n: usize) -> Result<Self> {
        if n == 0 || !n.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(n));
        }
        Self::new(n.trailing_zeros())
    }

    pub fn levels(&self) -> u32 {
        self.levels
    }

    pub fn size(&self) -> usize {
        1usize << self.levels
    }

    /// `T x = Σ x_i u_i`.
    pub fn synthesize<T: Scalar>(&self, x: &CoefVec<T>) -> Result<Signal<T>> {
        check_len(self.size(), x.len())?;
        let x = x.as_slice();
        let r = lit::<T>(0.5).sqrt();
        let mut approx = vec![x[0]];
        for level in 0..self.levels {
            let width = 1usize << level;
            let detail = &x[width..2 * width];
            let mut next = Vec::with_capacity(2 * width);
            for (a, d) in approx.iter().zip(detail) {
                next.push((*a + *d) * r);
                next.push((*a - *d) * r);
            }
            approx = next;
        }
        let scale = lit::<T>(self.size() as f64).sqrt();
        approx.iter_mut().for_each(|v| *v = *v * scale);
        Ok(Signal::from_vec_unchecked(approx))
    }

    /// `T* f = {⟨f, u_i⟩}`; the exact inverse of [`HaarSynthesis::synthesize`].
    pub fn analyze<T: Scalar>(&self, f: &Signal<T>) -> Result<CoefVec<T>> {
        check_len(self.size(), f.grid_size())?;
        let n = self.size();
        let r = lit::<T>(0.5).sqrt();
        let scale = lit::<T>(n as f64).sqrt().recip();
        let mut approx: Vec<T> = f.as_slice().iter().map(|v| *v * scale).collect();
        let mut out = vec![T::zero(); n];
        for level in (0..self.levels).rev() {
            let width = 1usize << level;
            let mut coarse = Vec::with_capacity(width);
            for k in 0..width {
                let (a, b) = (approx[2 * k], approx[2 * k + 1]);
                coarse.push((a + b) * r);
                out[width + k] = (a - b) * r;
            }
            approx = coarse;
        }
        out[0] = approx[0];
        Ok(CoefVec::from_vec_unchecked(out))
    }
}

/// `F = G ∘ T`: Haar coefficients to the autoconvolution of the synthesized signal.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ComposedForward {
    synthesis: HaarSynthesis,
    autoconv: AutoconvOp,
}

impl ComposedForward {
    pub fn new(synthesis: HaarSynthesis, autoconv: AutoconvOp) -> Result<Self> {
        check_len(synthesis.size(), autoconv.grid_size())?;
        Ok(Self { synthesis, autoconv })
    }

    /// Stack on `2^levels` samples.
    pub fn with_levels(levels: u32) -> Result<Self> {
        let synthesis = HaarSynthesis::new(levels)?;
        Self::new(synthesis, AutoconvOp::new(synthesis.size())?)
    }

    pub fn synthesis(&self) -> &HaarSynthesis {
        &self.synthesis
    }

    pub fn autoconv(&self) -> &AutoconvOp {
        &self.autoconv
    }
}

impl<T: Scalar> ForwardOperator<T> for ComposedForward {
    fn coef_len(&self) -> usize {
        self.synthesis.size()
    }

    fn grid_size(&self) -> usize {
        self.autoconv.grid_size()
    }

    fn apply(&self, x: &CoefVec<T>) -> Result<Signal<T>> {
        self.autoconv.apply(&self.synthesis.synthesize(x)?)
    }

    fn derivative(&self, x: &CoefVec<T>, h: &CoefVec<T>) -> Result<Signal<T>> {
        let f = self.synthesis.synthesize(x)?;
        let th = self.synthesis.synthesize(h)?;
        self.autoconv.derivative(&f, &th)
    }

    fn adjoint_derivative(&self, x: &CoefVec<T>, w: &Signal<T>) -> Result<DualVec<T>> {
        let f = self.synthesis.synthesize(x)?;
        let back = self.autoconv.adjoint(&f, w)?;
        Ok(self.synthesis.analyze(&back)?.into_dual())
    }
}

/// Linear forward map `x ↦ A x` given by a dense row-major `m × n` matrix.
///
/// The data space carries the weighted inner product `(1/m)·Σ u_i v_i`, so the
/// adjoint is `(1/m)·Aᵀ`.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseLinear<T> {
    rows: usize,
    cols: usize,
    entries: Vec<T>,
}

impl<T: Scalar> DenseLinear<T> {
    pub fn new(rows: usize, cols: usize, entries: Vec<T>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Empty);
        }
        check_len(rows * cols, entries.len())?;
        if let Some(index) = entries.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, r: usize, c: usize) -> T {
        self.entries[r * self.cols + c]
    }

    fn matvec(&self, x: &[T]) -> Vec<T> {
        self.entries.chunks(self.cols).map(|row| dot(row, x)).collect()
    }

    fn adjoint_vec(&self, w: &[T]) -> Vec<T> {
        let inv_m = lit::<T>(self.rows as f64).recip();
        (0..self.cols)
            .map(|c| (0..self.rows).map(|r| self.entry(r, c) * w[r]).sum::<T>() * inv_m)
            .collect()
    }

    /// Operator norm from Euclidean coefficients to the weighted data space,
    /// by power iteration on `(1/m)·AᵀA`.
    pub fn operator_norm(&self) -> T {
        let mut v: Vec<T> = (0..self.cols).map(|i| T::one() + lit(0.1 * i as f64)).collect();
        let mut lambda = T::zero();
        for _ in 0..1000 {
            let w = self.adjoint_vec(&self.matvec(&v));
            let norm = w.iter().map(|a| *a * *a).sum::<T>().sqrt();
            if norm == T::zero() {
                return T::zero();
            }
            let vn = v.iter().map(|a| *a * *a).sum::<T>().sqrt();
            lambda = norm / vn;
            v = w.iter().map(|a| *a / norm).collect();
        }
        lambda.sqrt()
    }
}

impl<T: Scalar> ForwardOperator<T> for DenseLinear<T> {
    fn coef_len(&self) -> usize {
        self.cols
    }

    fn grid_size(&self) -> usize {
        self.rows
    }

    fn apply(&self, x: &CoefVec<T>) -> Result<Signal<T>> {
        check_len(self.cols, x.len())?;
        Ok(Signal::from_vec_unchecked(self.matvec(x.as_slice())))
    }

    fn derivative(&self, _x: &CoefVec<T>, h: &CoefVec<T>) -> Result<Signal<T>> {
        self.apply(h)
    }

    fn adjoint_derivative(&self, x: &CoefVec<T>, w: &Signal<T>) -> Result<DualVec<T>> {
        check_len(self.cols, x.len())?;
        check_len(self.rows, w.grid_size())?;
        Ok(DualVec::from_vec_unchecked(self.adjoint_vec(w.as_slice())))
    }
}
