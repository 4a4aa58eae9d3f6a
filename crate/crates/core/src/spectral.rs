//! The zero-padding DFT (ZDFT) and the variable Fourier domain.
//!
//! `T` is the `v × p` matrix made of the first `p` columns of the `v × v`
//! DFT matrix, `T[l, k] = ω^{l k}` with `ω = exp(-2πi / v)` (zero-based).
//! Applying `T` to a tube is the same as zero-padding it to length `v` and
//! taking a length-`v` DFT, which is how [`forward_transform`] computes it.
//! The dense matrix is kept for reference checks.

use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{mismatch, Error, Result};
use crate::tensor::Tensor3;
use crate::tubal::TubalScalar;

/// Default bound on the imaginary part discarded when returning to the real
/// domain. Assumes data normalised to `[0, 1]`.
pub const DEFAULT_IMAG_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct ZdftMatrix {
    v: usize,
    p: usize,
    entries: DMatrix<Complex64>,
}

/// `exp(-2πi e / v)` with the exponent reduced mod `v` first.
fn root_power(e: usize, v: usize) -> Complex64 {
    let r = (e % v) as f64;
    Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * r / v as f64)
}

impl ZdftMatrix {
    pub fn new(v: usize, p: usize) -> Result<Self> {
        if p == 0 {
            return Err(mismatch("build_zdft", "p must be positive"));
        }
        if v < p {
            return Err(Error::TransformTooShort { v, p });
        }
        let entries = DMatrix::from_fn(v, p, |l, k| root_power(l * k, v));
        Ok(Self { v, p, entries })
    }

    pub fn v(&self) -> usize {
        self.v
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    /// `φ(a) = T a`.
    pub fn phi(&self, a: &[Complex64]) -> Result<Vec<Complex64>> {
        if a.len() != self.p {
            return Err(mismatch("phi", format!("input length {} but p = {}", a.len(), self.p)));
        }
        Ok((0..self.v)
            .map(|l| (0..self.p).map(|k| self.entries[(l, k)] * a[k]).sum())
            .collect())
    }

    pub fn phi_real(&self, a: &[f64]) -> Result<Vec<Complex64>> {
        let a: Vec<Complex64> = a.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        self.phi(&a)
    }

    /// `φ^H(c) = T^H c`.
    pub fn phi_adjoint(&self, c: &[Complex64]) -> Result<Vec<Complex64>> {
        if c.len() != self.v {
            return Err(mismatch(
                "phi_adjoint",
                format!("input length {} but v = {}", c.len(), self.v),
            ));
        }
        Ok((0..self.p)
            .map(|k| (0..self.v).map(|l| self.entries[(l, k)].conj() * c[l]).sum())
            .collect())
    }
}

pub fn build_zdft(v: usize, p: usize) -> Result<ZdftMatrix> {
    ZdftMatrix::new(v, p)
}

/// `a ⊙_v b = (1/v) φ^H[φ(a) ∘ φ(b)]`, evaluated with length-`v` FFTs.
pub fn variable_product_fft(a: &TubalScalar, b: &TubalScalar, v: usize) -> Result<TubalScalar> {
    let p = a.len();
    if b.len() != p {
        return Err(mismatch(
            "variable_product_fft",
            format!("tube lengths {} and {}", p, b.len()),
        ));
    }
    if v < p {
        return Err(Error::TransformTooShort { v, p });
    }
    let mut planner = FftPlanner::new();
    let fwd = planner.plan_fft_forward(v);
    let inv = planner.plan_fft_inverse(v);
    let pad = |t: &TubalScalar| {
        let mut buf = vec![Complex64::new(0.0, 0.0); v];
        for (dst, &x) in buf.iter_mut().zip(t.values()) {
            dst.re = x;
        }
        buf
    };
    let mut fa = pad(a);
    let mut fb = pad(b);
    fwd.process(&mut fa);
    fwd.process(&mut fb);
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x *= y;
    }
    // inverse FFT evaluates the conjugate-power sum; its first p entries are φ^H
    inv.process(&mut fa);
    let scale = 1.0 / v as f64;
    let residue = fa[..p].iter().fold(0.0f64, |acc, z| acc.max((z.im * scale).abs()));
    if residue > DEFAULT_IMAG_TOL {
        return Err(Error::ImaginaryResidue {
            op: "variable_product_fft",
            residue,
            tol: DEFAULT_IMAG_TOL,
        });
    }
    TubalScalar::new(fa[..p].iter().map(|z| z.re * scale).collect())
}

/// `C̄(T)`: `v` complex frontal slices carrying the tubal length `p` of the
/// real tensor they came from.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralTensor {
    p: usize,
    slices: Vec<DMatrix<Complex64>>,
}

impl SpectralTensor {
    pub fn new(p: usize, slices: Vec<DMatrix<Complex64>>) -> Result<Self> {
        let first = slices
            .first()
            .ok_or_else(|| mismatch("SpectralTensor::new", "no slices"))?;
        let shape = first.shape();
        if slices.iter().any(|s| s.shape() != shape) {
            return Err(mismatch("SpectralTensor::new", "slice shapes differ"));
        }
        if p == 0 || slices.len() < p {
            return Err(Error::TransformTooShort { v: slices.len(), p });
        }
        Ok(Self { p, slices })
    }

    pub fn zeros(m: usize, n: usize, p: usize, v: usize) -> Self {
        assert!(v >= p && p >= 1);
        Self {
            p,
            slices: vec![DMatrix::zeros(m, n); v],
        }
    }

    pub fn rows(&self) -> usize {
        self.slices[0].nrows()
    }

    pub fn cols(&self) -> usize {
        self.slices[0].ncols()
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn v(&self) -> usize {
        self.slices.len()
    }

    pub fn slices(&self) -> &[DMatrix<Complex64>] {
        &self.slices
    }

    pub fn slices_mut(&mut self) -> &mut [DMatrix<Complex64>] {
        &mut self.slices
    }

    pub fn slice(&self, l: usize) -> &DMatrix<Complex64> {
        &self.slices[l]
    }

    pub fn into_slices(self) -> Vec<DMatrix<Complex64>> {
        self.slices
    }

    pub fn frobenius_norm_sq(&self) -> f64 {
        crate::tensor::compensated_sum(self.slices.iter().flat_map(|s| s.iter().map(|z| z.norm_sqr())))
    }

    /// Largest deviation from `S_l = conj(S_{v-l})`.
    pub fn conjugate_symmetry_defect(&self) -> f64 {
        let v = self.v();
        let mut worst = 0.0f64;
        for l in 1..v {
            let a = &self.slices[l];
            let b = &self.slices[v - l];
            for (x, y) in a.iter().zip(b.iter()) {
                worst = worst.max((x - y.conj()).norm());
            }
        }
        for z in self.slices[0].iter() {
            worst = worst.max(z.im.abs());
        }
        worst
    }

    pub fn max_abs_diff(&self, other: &SpectralTensor) -> f64 {
        assert_eq!(self.v(), other.v());
        self.slices
            .iter()
            .zip(&other.slices)
            .flat_map(|(a, b)| a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()))
            .fold(0.0, f64::max)
    }
}

/// Cached FFT plans for one transform length.
#[derive(Clone)]
pub struct Transformer {
    v: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for Transformer {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Transformer").field("v", &self.v).finish()
    }
}

impl Transformer {
    pub fn new(v: usize) -> Self {
        assert!(v >= 1, "transform length must be positive");
        let mut planner = FftPlanner::new();
        Self {
            v,
            fwd: planner.plan_fft_forward(v),
            inv: planner.plan_fft_inverse(v),
        }
    }

    pub fn v(&self) -> usize {
        self.v
    }

    /// `fft_p2v(C, [], 3)`: zero-pad every mode-3 fiber to length `v`, then
    /// DFT it.
    pub fn forward(&self, c: &Tensor3) -> Result<SpectralTensor> {
        let (m, n, p) = c.dims();
        let v = self.v;
        if v < p {
            return Err(Error::TransformTooShort { v, p });
        }
        let mn = m * n;
        // fiber-major scratch: fiber f occupies buf[f*v..(f+1)*v]
        let mut buf = vec![Complex64::new(0.0, 0.0); mn * v];
        let data = c.as_slice();
        for k in 0..p {
            let slice = &data[k * mn..(k + 1) * mn];
            for (f, &x) in slice.iter().enumerate() {
                buf[f * v + k].re = x;
            }
        }
        self.fwd.process(&mut buf);
        let slices = (0..v)
            .map(|l| DMatrix::from_iterator(m, n, (0..mn).map(|f| buf[f * v + l])))
            .collect();
        Ok(SpectralTensor { p, slices })
    }

    /// `ifft_v2p(C̄, [], 3)`: apply `(1/v) T^H` to every fiber and return the
    /// real part, rejecting imaginary parts larger than `imag_tol`.
    pub fn inverse_with_tol(&self, s: &SpectralTensor, imag_tol: f64) -> Result<Tensor3> {
        let (out, residue) = self.inverse_unchecked(s)?;
        if residue > imag_tol {
            return Err(Error::ImaginaryResidue {
                op: "inverse_transform",
                residue,
                tol: imag_tol,
            });
        }
        Ok(out)
    }

    pub fn inverse(&self, s: &SpectralTensor) -> Result<Tensor3> {
        self.inverse_with_tol(s, DEFAULT_IMAG_TOL)
    }

    /// Real part of `(1/v) T^H S` plus the largest discarded imaginary part.
    pub fn inverse_unchecked(&self, s: &SpectralTensor) -> Result<(Tensor3, f64)> {
        let v = self.v;
        if s.v() != v {
            return Err(mismatch(
                "inverse_transform",
                format!("spectrum has {} slices, transformer length {}", s.v(), v),
            ));
        }
        let (m, n, p) = (s.rows(), s.cols(), s.p());
        let mn = m * n;
        let mut buf = vec![Complex64::new(0.0, 0.0); mn * v];
        for (l, slice) in s.slices.iter().enumerate() {
            for (f, z) in slice.iter().enumerate() {
                buf[f * v + l] = *z;
            }
        }
        self.inv.process(&mut buf);
        let scale = 1.0 / v as f64;
        let mut out = Tensor3::zeros(m, n, p);
        let mut residue = 0.0f64;
        let data = out.as_mut_slice();
        for k in 0..p {
            for f in 0..mn {
                let z = buf[f * v + k] * scale;
                data[k * mn + f] = z.re;
                residue = residue.max(z.im.abs());
            }
        }
        if !out.is_finite() {
            return Err(Error::NonFinite("inverse_transform"));
        }
        Ok((out, residue))
    }
}

pub fn forward_transform(c: &Tensor3, v: usize) -> Result<SpectralTensor> {
    if v < c.tubes() {
        return Err(Error::TransformTooShort { v, p: c.tubes() });
    }
    Transformer::new(v).forward(c)
}

pub fn inverse_transform(s: &SpectralTensor) -> Result<Tensor3> {
    Transformer::new(s.v()).inverse(s)
}
