//! Dense real third-order tensors.
//!
//! Storage is slice-major: frontal slice `k` occupies a contiguous block of
//! `m * n` values, stored column-major inside the slice. Entry `(i, j, k)`
//! lives at `i + j * m + k * m * n`. A mode-3 fiber `(i, j, :)` is therefore
//! strided by `m * n`.

use nalgebra::DMatrix;
use rand::Rng;

use crate::error::{mismatch, Error, Result};
use crate::tubal::TubalScalar;

#[derive(Debug, Clone, PartialEq)]
pub struct Tensor3 {
    dims: (usize, usize, usize),
    data: Vec<f64>,
}

impl Tensor3 {
    pub fn zeros(m: usize, n: usize, p: usize) -> Self {
        assert!(m >= 1 && n >= 1 && p >= 1, "tensor dimensions must be positive");
        Self {
            dims: (m, n, p),
            data: vec![0.0; m * n * p],
        }
    }

    /// Wraps slice-major, column-major-within-slice data.
    pub fn from_vec(m: usize, n: usize, p: usize, data: Vec<f64>) -> Result<Self> {
        if m == 0 || n == 0 || p == 0 {
            return Err(mismatch("Tensor3::from_vec", "dimensions must be positive"));
        }
        if data.len() != m * n * p {
            return Err(mismatch(
                "Tensor3::from_vec",
                format!("{} values for {m}x{n}x{p}", data.len()),
            ));
        }
        if data.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("Tensor3::from_vec"));
        }
        Ok(Self { dims: (m, n, p), data })
    }

    pub fn from_fn(m: usize, n: usize, p: usize, mut f: impl FnMut(usize, usize, usize) -> f64) -> Self {
        let mut t = Self::zeros(m, n, p);
        for k in 0..p {
            for j in 0..n {
                for i in 0..m {
                    t.data[i + j * m + k * m * n] = f(i, j, k);
                }
            }
        }
        t
    }

    pub fn random_uniform<R: Rng>(m: usize, n: usize, p: usize, lo: f64, hi: f64, rng: &mut R) -> Self {
        let data = (0..m * n * p).map(|_| rng.random_range(lo..hi)).collect();
        Self { dims: (m, n, p), data }
    }

    /// Builds a tensor from `p` frontal slices of equal shape.
    pub fn from_slices(slices: &[DMatrix<f64>]) -> Result<Self> {
        let first = slices
            .first()
            .ok_or_else(|| mismatch("Tensor3::from_slices", "no slices"))?;
        let (m, n) = first.shape();
        let mut data = Vec::with_capacity(m * n * slices.len());
        for s in slices {
            if s.shape() != (m, n) {
                return Err(mismatch("Tensor3::from_slices", "slice shapes differ"));
            }
            data.extend_from_slice(s.as_slice());
        }
        Self::from_vec(m, n, slices.len(), data)
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        self.dims
    }

    pub fn rows(&self) -> usize {
        self.dims.0
    }

    pub fn cols(&self) -> usize {
        self.dims.1
    }

    pub fn tubes(&self) -> usize {
        self.dims.2
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    #[inline]
    pub fn index_of(&self, i: usize, j: usize, k: usize) -> usize {
        let (m, n, _) = self.dims;
        i + j * m + k * m * n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.data[self.index_of(i, j, k)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, k: usize, x: f64) {
        let idx = self.index_of(i, j, k);
        self.data[idx] = x;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    /// Column-major view of frontal slice `k`.
    pub fn slice_data(&self, k: usize) -> &[f64] {
        let mn = self.dims.0 * self.dims.1;
        &self.data[k * mn..(k + 1) * mn]
    }

    pub fn slice_data_mut(&mut self, k: usize) -> &mut [f64] {
        let mn = self.dims.0 * self.dims.1;
        &mut self.data[k * mn..(k + 1) * mn]
    }

    /// Frontal slice `A^{(k)} = A(:, :, k)` as an owned matrix.
    pub fn frontal_slice(&self, k: usize) -> DMatrix<f64> {
        let (m, n, _) = self.dims;
        DMatrix::from_column_slice(m, n, self.slice_data(k))
    }

    pub fn set_frontal_slice(&mut self, k: usize, s: &DMatrix<f64>) {
        assert_eq!(s.shape(), (self.dims.0, self.dims.1), "slice shape");
        self.slice_data_mut(k).copy_from_slice(s.as_slice());
    }

    /// Mode-3 fiber `A(i, j, :)`.
    pub fn fiber(&self, i: usize, j: usize) -> Vec<f64> {
        (0..self.dims.2).map(|k| self.get(i, j, k)).collect()
    }

    pub fn tube(&self, i: usize, j: usize) -> TubalScalar {
        TubalScalar::new(self.fiber(i, j)).expect("tensor entries are finite")
    }

    pub fn set_fiber(&mut self, i: usize, j: usize, fiber: &[f64]) {
        assert_eq!(fiber.len(), self.dims.2, "fiber length");
        for (k, &x) in fiber.iter().enumerate() {
            self.set(i, j, k, x);
        }
    }

    /// `A(:, :, [0..t))`, the first `t` frontal slices.
    pub fn leading_slices(&self, t: usize) -> Tensor3 {
        assert!(t >= 1 && t <= self.dims.2, "slice count out of range");
        let (m, n, _) = self.dims;
        Self {
            dims: (m, n, t),
            data: self.data[..m * n * t].to_vec(),
        }
    }

    pub fn frobenius_norm_sq(&self) -> f64 {
        compensated_sum(self.data.iter().map(|x| x * x))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.frobenius_norm_sq().sqrt()
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0f64, |acc, x| acc.max(x.abs()))
    }

    /// Entrywise absolute sum.
    pub fn l1_norm(&self) -> f64 {
        compensated_sum(self.data.iter().map(|x| x.abs()))
    }

    pub fn inner(&self, other: &Tensor3) -> f64 {
        assert_eq!(self.dims, other.dims, "inner product dims");
        compensated_sum(self.data.iter().zip(&other.data).map(|(a, b)| a * b))
    }

    pub fn scale(&self, alpha: f64) -> Tensor3 {
        self.map(|x| alpha * x)
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Tensor3 {
        Self {
            dims: self.dims,
            data: self.data.iter().map(|&x| f(x)).collect(),
        }
    }

    /// `alpha * self + beta * other`.
    pub fn lin_comb(&self, alpha: f64, other: &Tensor3, beta: f64) -> Tensor3 {
        assert_eq!(self.dims, other.dims, "linear combination dims");
        Self {
            dims: self.dims,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| alpha * a + beta * b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Tensor3) -> Tensor3 {
        self.lin_comb(1.0, other, -1.0)
    }

    pub fn add(&self, other: &Tensor3) -> Tensor3 {
        self.lin_comb(1.0, other, 1.0)
    }

    /// Largest absolute entrywise difference.
    pub fn max_abs_diff(&self, other: &Tensor3) -> f64 {
        assert_eq!(self.dims, other.dims, "max_abs_diff dims");
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0f64, |acc, (a, b)| acc.max((a - b).abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }
}

/// Neumaier-compensated sum; results do not depend on thread scheduling.
pub fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut c = 0.0f64;
    for x in values {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            c += (sum - t) + x;
        } else {
            c += (x - t) + sum;
        }
        sum = t;
    }
    sum + c
}
