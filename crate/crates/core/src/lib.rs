//! Variable T-product tensor algebra and low-rank tensor completion.
//!
//! The variable T-product `*_v` multiplies third-order tensors as matrices of
//! tubes, combining tubes with `⊙_v`: a product that is circular convolution
//! at `v = p` and truncated linear convolution from `v = 2p − 1` on. It is
//! diagonalised by the zero-padding DFT, which maps a length-`p` tube to `v`
//! frequencies. The completion solver fits a low-rank factorisation in that
//! domain with TV smoothing on the recovered tensor.
//!
//! Modules:
//! - [`tubal`]: tube ring with the direct `⊙_v` product.
//! - [`spectral`]: ZDFT, forward/inverse transforms, FFT-based `⊙_v`.
//! - [`tensor`], [`products`]: `Tensor3`, `*_v`, H-product, tubal rank.
//! - [`tv`]: difference operators and the DCT diagonalisation of `L^T L`.
//! - [`solver`]: the alternating minimisation and its subproblem updates.
//! - [`metrics`]: PSNR and SSIM.

pub mod error;
pub mod metrics;
pub mod products;
pub mod solver;
pub mod spectral;
pub mod tensor;
pub mod tubal;
pub mod tv;

pub use error::{Error, Result};
pub use products::{
    classical_t_product, h_product, truncated_product_check, variable_t_product, variable_tubal_rank,
    zero_pad_mode3, FactorPair,
};
pub use solver::{solve_vtctf, solve_vtctf_tv, ObservationMask, SolveOutput, SolverConfig};
pub use spectral::{build_zdft, forward_transform, inverse_transform, SpectralTensor, Transformer, ZdftMatrix};
pub use tensor::Tensor3;
pub use tubal::TubalScalar;
