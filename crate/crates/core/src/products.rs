//! Tensor products in the variable Fourier domain.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{mismatch, Error, Result};
use crate::spectral::{SpectralTensor, Transformer};
use crate::tensor::Tensor3;

/// Default relative singular-value cutoff for numerical rank.
pub const DEFAULT_RANK_TOL: f64 = 1e-8;

/// A low-rank factor pair `X ∈ R^{m×q×p}`, `Y ∈ R^{q×n×p}`.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorPair {
    x: Tensor3,
    y: Tensor3,
}

impl FactorPair {
    pub fn new(x: Tensor3, y: Tensor3) -> Result<Self> {
        let (_, q, p) = x.dims();
        let (q2, _, p2) = y.dims();
        if q != q2 || p != p2 {
            return Err(mismatch(
                "FactorPair::new",
                format!("X is {:?}, Y is {:?}", x.dims(), y.dims()),
            ));
        }
        Ok(Self { x, y })
    }

    pub fn x(&self) -> &Tensor3 {
        &self.x
    }

    pub fn y(&self) -> &Tensor3 {
        &self.y
    }

    pub fn rank(&self) -> usize {
        self.x.cols()
    }

    pub fn product(&self, v: usize) -> Result<Tensor3> {
        variable_t_product(&self.x, &self.y, v)
    }
}

/// The identity tensor of order `n`: `E(i, i, :) = e`, zero elsewhere.
pub fn identity_tensor(n: usize, p: usize) -> Tensor3 {
    Tensor3::from_fn(n, n, p, |i, j, k| if i == j && k == 0 { 1.0 } else { 0.0 })
}

fn check_product_dims(op: &'static str, a: (usize, usize, usize), b: (usize, usize, usize)) -> Result<()> {
    if a.1 != b.0 || a.2 != b.2 {
        return Err(mismatch(op, format!("{a:?} times {b:?}")));
    }
    Ok(())
}

/// `A *_v B`: transform both operands, multiply matching frontal slices,
/// transform back.
pub fn variable_t_product(a: &Tensor3, b: &Tensor3, v: usize) -> Result<Tensor3> {
    check_product_dims("variable_t_product", a.dims(), b.dims())?;
    let p = a.tubes();
    if v < p {
        return Err(Error::TransformTooShort { v, p });
    }
    let tr = Transformer::new(v);
    let sa = tr.forward(a)?;
    let sb = tr.forward(b)?;
    tr.inverse(&h_product(&sa, &sb)?)
}

/// The classical T-product `A0 * B0`, i.e. the `v = w` case.
pub fn classical_t_product(a0: &Tensor3, b0: &Tensor3) -> Result<Tensor3> {
    check_product_dims("classical_t_product", a0.dims(), b0.dims())?;
    variable_t_product(a0, b0, a0.tubes())
}

/// Append `v - p` zero frontal slices.
pub fn zero_pad_mode3(a: &Tensor3, v: usize) -> Result<Tensor3> {
    let (m, q, p) = a.dims();
    if v < p {
        return Err(Error::TransformTooShort { v, p });
    }
    let mut data = a.as_slice().to_vec();
    data.resize(m * q * v, 0.0);
    Tensor3::from_vec(m, q, v, data)
}

/// `A *_H B`: `c_ij = Σ_l a_il ∘ b_lj`, i.e. slice-wise matrix products.
pub fn h_product(a: &SpectralTensor, b: &SpectralTensor) -> Result<SpectralTensor> {
    if a.cols() != b.rows() || a.v() != b.v() || a.p() != b.p() {
        return Err(mismatch(
            "h_product",
            format!(
                "{}x{}x{} (p={}) times {}x{}x{} (p={})",
                a.rows(),
                a.cols(),
                a.v(),
                a.p(),
                b.rows(),
                b.cols(),
                b.v(),
                b.p()
            ),
        ));
    }
    let slices = a
        .slices()
        .iter()
        .zip(b.slices())
        .map(|(x, y)| x * y)
        .collect();
    SpectralTensor::new(a.p(), slices)
}

fn to_faer(m: &DMatrix<Complex64>) -> faer::Mat<Complex64> {
    faer::Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

/// Numerical rank: singular values above `tol · σ_max`.
///
/// Uses faer's SVD: nalgebra's complex SVD returns wrong singular values on
/// some exactly rank-deficient inputs.
pub fn numerical_rank(m: &DMatrix<Complex64>, tol: f64) -> Result<usize> {
    if m.is_empty() {
        return Ok(0);
    }
    let sv = to_faer(m)
        .singular_values()
        .map_err(|e| Error::NonConvergence(format!("singular values: {e:?}")))?;
    let smax = sv.first().copied().unwrap_or(0.0);
    if smax == 0.0 {
        return Ok(0);
    }
    Ok(sv.iter().filter(|&&s| s > tol * smax).count())
}

/// `Rank_v(C)`: the largest numerical rank over the spectral slices.
pub fn variable_tubal_rank(c: &Tensor3, v: usize, tol: f64) -> Result<usize> {
    let s = Transformer::new(v).forward(c)?;
    spectral_tubal_rank(&s, tol)
}

pub fn spectral_tubal_rank(s: &SpectralTensor, tol: f64) -> Result<usize> {
    let mut rank = 0;
    for m in s.slices() {
        rank = rank.max(numerical_rank(m, tol)?);
    }
    Ok(rank)
}

/// Checks `A *_v B == (A0 * B0)(:, :, 1..p)` where `A0`, `B0` are the
/// zero-padded operands. Returns the largest entrywise deviation.
pub fn truncated_product_check(a: &Tensor3, b: &Tensor3, v: usize, tol: f64) -> Result<f64> {
    let direct = variable_t_product(a, b, v)?;
    let padded = classical_t_product(&zero_pad_mode3(a, v)?, &zero_pad_mode3(b, v)?)?;
    let max_deviation = direct.max_abs_diff(&padded.leading_slices(a.tubes()));
    if max_deviation > tol {
        return Err(Error::IdentityViolated { max_deviation, tol });
    }
    Ok(max_deviation)
}

/// Splits every spectral slice as `U_r Σ_r V_r^H` with `r` the slice rank
/// cap, giving `C̄ = X̄ *_H Ȳ` with `X̄ = U_r Σ_r`, `Ȳ = V_r^H`.
pub fn spectral_rank_factorization(s: &SpectralTensor, r: usize) -> Result<(SpectralTensor, SpectralTensor)> {
    let mut xs = Vec::with_capacity(s.v());
    let mut ys = Vec::with_capacity(s.v());
    for slice in s.slices() {
        let (m, n) = slice.shape();
        let k = r.min(m).min(n);
        let svd = to_faer(slice)
            .thin_svd()
            .map_err(|e| Error::NonConvergence(format!("svd: {e:?}")))?;
        // singular values come sorted in nonincreasing order
        let (u, sigma, v) = (svd.U(), svd.S().column_vector(), svd.V());
        let x = DMatrix::from_fn(m, r, |i, c| if c < k { u[(i, c)] * sigma[c] } else { Complex64::new(0.0, 0.0) });
        let y = DMatrix::from_fn(r, n, |c, j| if c < k { v[(j, c)].conj() } else { Complex64::new(0.0, 0.0) });
        xs.push(x);
        ys.push(y);
    }
    Ok((SpectralTensor::new(s.p(), xs)?, SpectralTensor::new(s.p(), ys)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tubal::TubalScalar;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Definitional tubal sum `c_ij = Σ_l a_il ⊙_v b_lj` via direct products.
    fn direct_product(a: &Tensor3, b: &Tensor3, v: usize) -> Tensor3 {
        let (m, q, p) = a.dims();
        let n = b.cols();
        let mut out = Tensor3::zeros(m, n, p);
        for i in 0..m {
            for j in 0..n {
                let mut acc = TubalScalar::zero(p);
                for l in 0..q {
                    acc = &acc + &a.tube(i, l).variable_product_direct(&b.tube(l, j), v).unwrap();
                }
                out.set_fiber(i, j, acc.values());
            }
        }
        out
    }

    #[test]
    fn single_tube_reduces_to_tubal_product() {
        let a = Tensor3::from_vec(1, 1, 2, vec![1.0, 2.0]).unwrap();
        let b = Tensor3::from_vec(1, 1, 2, vec![3.0, 4.0]).unwrap();
        let c = variable_t_product(&a, &b, 3).unwrap();
        assert!((c.get(0, 0, 0) - 3.0).abs() < 1e-12);
        assert!((c.get(0, 0, 1) - 10.0).abs() < 1e-12);
    }

    #[test]
    fn identity_is_unit() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let b = Tensor3::random_uniform(3, 4, 3, -1.0, 1.0, &mut rng);
        for v in 3..8 {
            let r = variable_t_product(&identity_tensor(3, 3), &b, v).unwrap();
            assert!(r.max_abs_diff(&b) < 1e-12);
        }
    }

    #[test]
    fn spectral_matches_direct_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let a = Tensor3::random_uniform(2, 2, 3, -1.0, 1.0, &mut rng);
        let b = Tensor3::random_uniform(2, 2, 3, -1.0, 1.0, &mut rng);
        let got = variable_t_product(&a, &b, 5).unwrap();
        assert!(got.max_abs_diff(&direct_product(&a, &b, 5)) < 1e-10);
    }

    #[test]
    fn classical_product_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        // w = 1 is the matrix product
        let a = Tensor3::random_uniform(3, 2, 1, -1.0, 1.0, &mut rng);
        let b = Tensor3::random_uniform(2, 4, 1, -1.0, 1.0, &mut rng);
        let c = classical_t_product(&a, &b).unwrap();
        let want = a.frontal_slice(0) * b.frontal_slice(0);
        assert!((c.frontal_slice(0) - want).abs().max() < 1e-12);

        let a = Tensor3::random_uniform(2, 2, 3, -1.0, 1.0, &mut rng);
        let b = Tensor3::random_uniform(2, 2, 3, -1.0, 1.0, &mut rng);
        let c = classical_t_product(&a, &b).unwrap();
        assert_eq!(c, variable_t_product(&a, &b, 3).unwrap());
        // circular convolution oracle
        let mut want = Tensor3::zeros(2, 2, 3);
        for i in 0..2 {
            for j in 0..2 {
                for l in 0..2 {
                    for s in 0..3 {
                        for t in 0..3 {
                            let k = (s + t) % 3;
                            let x = want.get(i, j, k) + a.get(i, l, s) * b.get(l, j, t);
                            want.set(i, j, k, x);
                        }
                    }
                }
            }
        }
        assert!(c.max_abs_diff(&want) < 1e-12);
    }

    #[test]
    fn product_dimension_errors() {
        let a = Tensor3::zeros(2, 3, 2);
        let b = Tensor3::zeros(2, 3, 2);
        assert!(matches!(variable_t_product(&a, &b, 3), Err(Error::DimensionMismatch { .. })));
        let b = Tensor3::zeros(3, 3, 2);
        assert!(matches!(variable_t_product(&a, &b, 1), Err(Error::TransformTooShort { .. })));
        assert!(FactorPair::new(a, Tensor3::zeros(2, 2, 2)).is_err());
    }

    #[test]
    fn zero_padding() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let a = Tensor3::random_uniform(2, 3, 2, -1.0, 1.0, &mut rng);
        assert_eq!(zero_pad_mode3(&a, 2).unwrap(), a);
        let z = zero_pad_mode3(&a, 5).unwrap();
        assert_eq!(z.dims(), (2, 3, 5));
        assert_eq!(z.frobenius_norm(), a.frobenius_norm());
        let one = Tensor3::from_vec(1, 1, 1, vec![2.0]).unwrap();
        assert_eq!(zero_pad_mode3(&one, 3).unwrap().fiber(0, 0), vec![2.0, 0.0, 0.0]);
        assert!(zero_pad_mode3(&a, 1).is_err());
    }

    #[test]
    fn h_product_is_slicewise_and_matches_t_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let a = Tensor3::random_uniform(3, 2, 4, -1.0, 1.0, &mut rng);
        let b = Tensor3::random_uniform(2, 3, 4, -1.0, 1.0, &mut rng);
        let tr = Transformer::new(7);
        let (sa, sb) = (tr.forward(&a).unwrap(), tr.forward(&b).unwrap());
        let h = h_product(&sa, &sb).unwrap();
        for l in 0..7 {
            assert_eq!(h.slice(l), &(sa.slice(l) * sb.slice(l)));
        }
        let back = tr.inverse(&h).unwrap();
        assert!(back.max_abs_diff(&direct_product(&a, &b, 7)) < 1e-10);

        // 1x1 operands: a Hadamard product of tubes
        let x = Tensor3::from_vec(1, 1, 2, vec![1.0, -1.0]).unwrap();
        let y = Tensor3::from_vec(1, 1, 2, vec![0.5, 2.0]).unwrap();
        let (fx, fy) = (tr.forward(&x).unwrap(), tr.forward(&y).unwrap());
        let h = h_product(&fx, &fy).unwrap();
        for l in 0..7 {
            assert_eq!(h.slice(l)[(0, 0)], fx.slice(l)[(0, 0)] * fy.slice(l)[(0, 0)]);
        }
        assert!(h_product(&fx, &sa).is_err());
    }

    #[test]
    fn tubal_rank_cases() {
        assert_eq!(variable_tubal_rank(&Tensor3::zeros(3, 3, 2), 3, DEFAULT_RANK_TOL).unwrap(), 0);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let a = Tensor3::random_uniform(5, 1, 3, -1.0, 1.0, &mut rng);
        let b = Tensor3::random_uniform(1, 4, 3, -1.0, 1.0, &mut rng);
        let c = variable_t_product(&a, &b, 3).unwrap();
        assert!(variable_tubal_rank(&c, 3, DEFAULT_RANK_TOL).unwrap() <= 1);
        // with v > p the truncation to p tubes leaves the rank-1 spectral
        // structure behind; the bound holds for the spectrum Ā *_H B̄ itself
        let tr = Transformer::new(5);
        let h = h_product(&tr.forward(&a).unwrap(), &tr.forward(&b).unwrap()).unwrap();
        assert_eq!(spectral_tubal_rank(&h, DEFAULT_RANK_TOL).unwrap(), 1);
        let c = variable_t_product(&a, &b, 5).unwrap();
        assert!(variable_tubal_rank(&c, 5, DEFAULT_RANK_TOL).unwrap() > 1);

        // v = p agrees with the classical tubal rank from a plain DFT
        let c = Tensor3::random_uniform(4, 3, 3, -1.0, 1.0, &mut rng);
        let classical = (0..3)
            .map(|l| {
                let slice = DMatrix::from_fn(4, 3, |i, j| {
                    (0..3)
                        .map(|k| {
                            let ang = -2.0 * std::f64::consts::PI * (l * k) as f64 / 3.0;
                            Complex64::from_polar(c.get(i, j, k), ang)
                        })
                        .sum::<Complex64>()
                });
                numerical_rank(&slice, DEFAULT_RANK_TOL).unwrap()
            })
            .max()
            .unwrap();
        assert_eq!(variable_tubal_rank(&c, 3, DEFAULT_RANK_TOL).unwrap(), classical);
    }

    #[test]
    fn truncated_identity_edge_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let a = Tensor3::random_uniform(2, 3, 3, -1.0, 1.0, &mut rng);
        let b = Tensor3::random_uniform(3, 2, 3, -1.0, 1.0, &mut rng);
        assert!(truncated_product_check(&a, &b, 3, 1e-9).unwrap() < 1e-12);
        assert!(truncated_product_check(&a, &b, 8, 1e-9).is_ok());
        let z = Tensor3::zeros(3, 2, 3);
        assert_eq!(truncated_product_check(&a, &z, 6, 1e-9).unwrap(), 0.0);
    }

    #[test]
    fn bilinearity() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let a = Tensor3::random_uniform(3, 2, 4, -1.0, 1.0, &mut rng);
        let a2 = Tensor3::random_uniform(3, 2, 4, -1.0, 1.0, &mut rng);
        let b = Tensor3::random_uniform(2, 3, 4, -1.0, 1.0, &mut rng);
        let lhs = variable_t_product(&a.lin_comb(2.0, &a2, -0.5), &b, 7).unwrap();
        let rhs = variable_t_product(&a, &b, 7)
            .unwrap()
            .lin_comb(2.0, &variable_t_product(&a2, &b, 7).unwrap(), -0.5);
        assert!(lhs.max_abs_diff(&rhs) < 1e-12);
    }
}
