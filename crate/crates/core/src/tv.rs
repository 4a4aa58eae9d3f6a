//! Finite-difference operators for the TV regulariser and the cosine
//! diagonalisation of `H_m = L_m^T L_m`.

use nalgebra::{DMatrix, DVector};

use crate::error::{mismatch, Result};
use crate::tensor::Tensor3;

/// Forward difference matrix with an all-zero first row:
/// `(L x)(0) = 0`, `(L x)(i) = x(i) - x(i-1)`.
pub fn build_l(m: usize) -> DMatrix<f64> {
    assert!(m >= 1, "size must be positive");
    DMatrix::from_fn(m, m, |i, j| {
        if i == 0 {
            0.0
        } else if j == i {
            1.0
        } else if j + 1 == i {
            -1.0
        } else {
            0.0
        }
    })
}

/// `H_m = L_m^T L_m`, tridiagonal with diagonal `(1, 2, ..., 2, 1)`.
pub fn build_h(m: usize) -> DMatrix<f64> {
    assert!(m >= 1, "size must be positive");
    if m == 1 {
        return DMatrix::zeros(1, 1);
    }
    DMatrix::from_fn(m, m, |i, j| {
        if i == j {
            if i == 0 || i == m - 1 {
                1.0
            } else {
                2.0
            }
        } else if i.abs_diff(j) == 1 {
            -1.0
        } else {
            0.0
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiffKind {
    /// `D1`: first frontal slice `L_m`, applied from the left.
    Vertical,
    /// `D2`: first frontal slice `L_n^T`, applied from the right.
    Horizontal,
}

/// A difference tensor whose only nonzero frontal slice is the first.
#[derive(Debug, Clone)]
pub struct DiffTensor {
    kind: DiffKind,
    first: DMatrix<f64>,
}

impl DiffTensor {
    pub fn vertical(m: usize) -> Self {
        Self {
            kind: DiffKind::Vertical,
            first: build_l(m),
        }
    }

    pub fn horizontal(n: usize) -> Self {
        Self {
            kind: DiffKind::Horizontal,
            first: build_l(n).transpose(),
        }
    }

    pub fn kind(&self) -> DiffKind {
        self.kind
    }

    pub fn size(&self) -> usize {
        self.first.nrows()
    }

    pub fn first_slice(&self) -> &DMatrix<f64> {
        &self.first
    }

    /// Dense `size × size × p` tensor.
    pub fn to_tensor(&self, p: usize) -> Tensor3 {
        let s = self.size();
        let mut t = Tensor3::zeros(s, s, p);
        t.set_frontal_slice(0, &self.first);
        t
    }
}

/// Orthogonal diagonalisation `H_m = K Λ K^T` by the DCT-II basis.
#[derive(Debug, Clone)]
pub struct DctDiagonalization {
    k: DMatrix<f64>,
    lambda: DVector<f64>,
}

impl DctDiagonalization {
    pub fn new(m: usize) -> Self {
        assert!(m >= 1, "size must be positive");
        let mf = m as f64;
        let pi = std::f64::consts::PI;
        let k = DMatrix::from_fn(m, m, |i, j| {
            let w = if j == 0 { (1.0 / mf).sqrt() } else { (2.0 / mf).sqrt() };
            w * (pi * (2 * i + 1) as f64 * j as f64 / (2.0 * mf)).cos()
        });
        let lambda = DVector::from_fn(m, |i, _| {
            let s = (i as f64 * pi / (2.0 * mf)).sin();
            4.0 * s * s
        });
        Self { k, lambda }
    }

    pub fn size(&self) -> usize {
        self.lambda.len()
    }

    pub fn k(&self) -> &DMatrix<f64> {
        &self.k
    }

    pub fn lambda(&self) -> &DVector<f64> {
        &self.lambda
    }

    pub fn reconstruct(&self) -> DMatrix<f64> {
        &self.k * DMatrix::from_diagonal(&self.lambda) * self.k.transpose()
    }
}

pub fn build_dct_diagonalization(m: usize) -> DctDiagonalization {
    DctDiagonalization::new(m)
}

/// `D1 *_v C`. Only the first (real) frontal slice of `D1` is nonzero, so
/// every spectral slice of `D1` equals `L_m` and the product is `L_m C^{(k)}`
/// on each frontal slice, whatever `v` is.
pub fn apply_d1(c: &Tensor3) -> Tensor3 {
    let (m, n, p) = c.dims();
    let mut out = Tensor3::zeros(m, n, p);
    for k in 0..p {
        let src = c.slice_data(k);
        let dst = out.slice_data_mut(k);
        for j in 0..n {
            let col = j * m;
            for i in 1..m {
                dst[col + i] = src[col + i] - src[col + i - 1];
            }
        }
    }
    out
}

/// `C *_v D2 = C^{(k)} L_n^T` on each frontal slice.
pub fn apply_d2(c: &Tensor3) -> Tensor3 {
    let (m, n, p) = c.dims();
    let mut out = Tensor3::zeros(m, n, p);
    for k in 0..p {
        let src = c.slice_data(k);
        let dst = out.slice_data_mut(k);
        for j in 1..n {
            for i in 0..m {
                dst[j * m + i] = src[j * m + i] - src[(j - 1) * m + i];
            }
        }
    }
    out
}

/// `L_m^T A^{(k)}` on each frontal slice (adjoint of [`apply_d1`]).
pub fn apply_d1_adjoint(a: &Tensor3) -> Tensor3 {
    let (m, n, p) = a.dims();
    let mut out = Tensor3::zeros(m, n, p);
    for k in 0..p {
        let src = a.slice_data(k);
        let dst = out.slice_data_mut(k);
        for j in 0..n {
            let col = j * m;
            for i in 0..m {
                let mut x = if i >= 1 { src[col + i] } else { 0.0 };
                if i + 1 < m {
                    x -= src[col + i + 1];
                }
                dst[col + i] = x;
            }
        }
    }
    out
}

/// `A^{(k)} L_n` on each frontal slice (adjoint of [`apply_d2`]).
pub fn apply_d2_adjoint(a: &Tensor3) -> Tensor3 {
    let (m, n, p) = a.dims();
    let mut out = Tensor3::zeros(m, n, p);
    for k in 0..p {
        let src = a.slice_data(k);
        let dst = out.slice_data_mut(k);
        for j in 0..n {
            for i in 0..m {
                let mut x = if j >= 1 { src[j * m + i] } else { 0.0 };
                if j + 1 < n {
                    x -= src[(j + 1) * m + i];
                }
                dst[j * m + i] = x;
            }
        }
    }
    out
}

pub fn check_diff_dims(c: &Tensor3, m: usize, n: usize) -> Result<()> {
    if c.rows() != m || c.cols() != n {
        return Err(mismatch(
            "difference operator",
            format!("tensor is {:?}, operators sized {m} and {n}", c.dims()),
        ));
    }
    Ok(())
}
