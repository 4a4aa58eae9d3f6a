//! Tubal scalars: length-`p` real vectors forming the commutative ring
//! `K_p = (R^p, +, ⊙_v)`.
//!
//! The math indexes tube entries from 1. Here entry `k` of the math is
//! `values[k - 1]`, so the product rule `i + j - k - 1 ≡ 0 (mod v)` becomes
//! `i + j - k ≡ 0 (mod v)` over zero-based `i, j, k`.

use std::ops::{Add, Index};

use crate::error::{mismatch, Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct TubalScalar {
    values: Vec<f64>,
}

impl TubalScalar {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(mismatch("TubalScalar::new", "tubal length must be at least 1"));
        }
        if values.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("TubalScalar::new"));
        }
        Ok(Self { values })
    }

    pub fn zero(p: usize) -> Self {
        assert!(p >= 1, "tubal length must be at least 1");
        Self { values: vec![0.0; p] }
    }

    /// The multiplicative unit `e = (1, 0, ..., 0)`.
    pub fn unit(p: usize) -> Self {
        let mut e = Self::zero(p);
        e.values[0] = 1.0;
        e
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// `b(1) = a(1)`, `b(k) = a(p + 2 - k)` for `k ≥ 2`.
    pub fn transpose(&self) -> Self {
        let p = self.len();
        let values = (0..p)
            .map(|k| if k == 0 { self.values[0] } else { self.values[p - k] })
            .collect();
        Self { values }
    }

    /// Euclidean length of the tube.
    pub fn modulus(&self) -> f64 {
        self.values.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// `a ⊙_v b` by explicit double summation over all index pairs.
    ///
    /// O(p²); kept as the reference against which the FFT route is checked.
    pub fn variable_product_direct(&self, other: &Self, v: usize) -> Result<Self> {
        let p = self.len();
        if other.len() != p {
            return Err(mismatch(
                "variable_product_direct",
                format!("tube lengths {} and {}", p, other.len()),
            ));
        }
        if v < p {
            return Err(Error::TransformTooShort { v, p });
        }
        let (a, b) = (&self.values, &other.values);
        let mut out = vec![0.0; p];
        // Visit each unordered pair {i, j} once and add a(i)b(j) + a(j)b(i)
        // together, so that swapping the operands gives bit-identical sums.
        for i in 0..p {
            for j in i..p {
                // k ≡ i + j (mod v), and only k < p is kept.
                let k = (i + j) % v;
                if k < p {
                    out[k] += if i == j { a[i] * b[j] } else { a[i] * b[j] + a[j] * b[i] };
                }
            }
        }
        Ok(Self { values: out })
    }
}

impl Index<usize> for TubalScalar {
    type Output = f64;

    fn index(&self, k: usize) -> &f64 {
        &self.values[k]
    }
}

impl Add for &TubalScalar {
    type Output = TubalScalar;

    fn add(self, rhs: &TubalScalar) -> TubalScalar {
        assert_eq!(self.len(), rhs.len(), "tube lengths differ");
        TubalScalar {
            values: self
                .values
                .iter()
                .zip(&rhs.values)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

/// Free-function form of [`TubalScalar::variable_product_direct`].
pub fn variable_product_direct(a: &TubalScalar, b: &TubalScalar, v: usize) -> Result<TubalScalar> {
    a.variable_product_direct(b, v)
}

pub fn tubal_transpose(a: &TubalScalar) -> TubalScalar {
    a.transpose()
}

pub fn tubal_modulus(a: &TubalScalar) -> f64 {
    a.modulus()
}

pub fn tubal_unit(p: usize) -> TubalScalar {
    TubalScalar::unit(p)
}
