//! PSNR and global-statistics SSIM.
//!
//! SSIM here is computed from whole-tensor means, standard deviations and
//! covariance (population moments, divisor `N`). It is not the windowed SSIM
//! that image libraries usually report.

use crate::error::{mismatch, Result};
use crate::tensor::{compensated_sum, Tensor3};

pub const DEFAULT_C1: f64 = 1e-4;
pub const DEFAULT_C2: f64 = 9e-4;

/// Which SSIM expression to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SsimVariant {
    /// `(2 μ_x μ_y)(2 σ_xy + c2) / ((μ_x² μ_y² + c1)(σ_x² + σ_y² + c2))`,
    /// exactly as printed with the method. Not bounded by 1.
    #[default]
    Literal,
    /// `(2 μ_x μ_y + c1)(2 σ_xy + c2) / ((μ_x² + μ_y² + c1)(σ_x² + σ_y² + c2))`.
    Standard,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SsimParams {
    pub c1: f64,
    pub c2: f64,
    pub variant: SsimVariant,
}

impl Default for SsimParams {
    fn default() -> Self {
        Self {
            c1: DEFAULT_C1,
            c2: DEFAULT_C2,
            variant: SsimVariant::Literal,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricsReport {
    /// dB; `+inf` when the tensors are identical.
    pub psnr: f64,
    pub ssim: f64,
    pub cpu_seconds: f64,
}

fn check_dims(op: &'static str, a: &Tensor3, b: &Tensor3) -> Result<()> {
    if a.dims() != b.dims() {
        return Err(mismatch(op, format!("{:?} vs {:?}", a.dims(), b.dims())));
    }
    Ok(())
}

fn psnr_raw(recovered: &[f64], truth: &[f64]) -> f64 {
    let peak = truth.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
    let err = compensated_sum(recovered.iter().zip(truth).map(|(a, b)| (a - b) * (a - b)));
    if err == 0.0 {
        return f64::INFINITY;
    }
    10.0 * (truth.len() as f64 * peak * peak / err).log10()
}

/// `10 log10(mnp ‖C_true‖_∞² / ‖C − C_true‖_F²)`.
pub fn psnr(recovered: &Tensor3, truth: &Tensor3) -> Result<f64> {
    check_dims("psnr", recovered, truth)?;
    Ok(psnr_raw(recovered.as_slice(), truth.as_slice()))
}

fn moments(x: &[f64], y: &[f64]) -> (f64, f64, f64, f64, f64) {
    let n = x.len() as f64;
    let mx = compensated_sum(x.iter().copied()) / n;
    let my = compensated_sum(y.iter().copied()) / n;
    let vx = compensated_sum(x.iter().map(|a| (a - mx) * (a - mx))) / n;
    let vy = compensated_sum(y.iter().map(|b| (b - my) * (b - my))) / n;
    let cov = compensated_sum(x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my))) / n;
    (mx, my, vx, vy, cov)
}

fn ssim_raw(recovered: &[f64], truth: &[f64], params: SsimParams) -> f64 {
    let (mx, my, vx, vy, cov) = moments(recovered, truth);
    let SsimParams { c1, c2, variant } = params;
    match variant {
        SsimVariant::Literal => {
            (2.0 * mx * my) * (2.0 * cov + c2) / ((mx * mx * my * my + c1) * (vx + vy + c2))
        }
        SsimVariant::Standard => {
            (2.0 * mx * my + c1) * (2.0 * cov + c2) / ((mx * mx + my * my + c1) * (vx + vy + c2))
        }
    }
}

pub fn ssim(recovered: &Tensor3, truth: &Tensor3, params: SsimParams) -> Result<f64> {
    check_dims("ssim", recovered, truth)?;
    Ok(ssim_raw(recovered.as_slice(), truth.as_slice(), params))
}

/// PSNR and SSIM of every frontal slice (band), in slice order.
pub fn per_band(recovered: &Tensor3, truth: &Tensor3, params: SsimParams) -> Result<Vec<(f64, f64)>> {
    check_dims("per_band", recovered, truth)?;
    Ok((0..truth.tubes())
        .map(|k| {
            let (r, t) = (recovered.slice_data(k), truth.slice_data(k));
            (psnr_raw(r, t), ssim_raw(r, t, params))
        })
        .collect())
}

/// Mean of the per-band PSNR and SSIM values.
pub fn band_average(bands: &[(f64, f64)]) -> (f64, f64) {
    let n = bands.len() as f64;
    (
        bands.iter().map(|b| b.0).sum::<f64>() / n,
        bands.iter().map(|b| b.1).sum::<f64>() / n,
    )
}

pub fn report(recovered: &Tensor3, truth: &Tensor3, params: SsimParams, cpu_seconds: f64) -> Result<MetricsReport> {
    Ok(MetricsReport {
        psnr: psnr(recovered, truth)?,
        ssim: ssim(recovered, truth, params)?,
        cpu_seconds,
    })
}
