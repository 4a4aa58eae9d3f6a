//! Masks, single runs, v-sweeps and method comparisons, with CSV output.

use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use vtctf::metrics::{self, SsimParams};
use vtctf::{solve_vtctf, solve_vtctf_tv, ObservationMask, SolveOutput, SolverConfig, Tensor3};

use crate::error::{CliError, Result};
use crate::ingest::{self, DataKind};
use crate::rawio;

/// Exactly `round(rate · mnp)` distinct linear indices, uniform, fixed by `seed`.
pub fn sample_indices(dims: (usize, usize, usize), rate: f64, seed: u64) -> Result<Vec<usize>> {
    if !(rate > 0.0 && rate <= 1.0) {
        return Err(CliError::Invalid(format!("sampling rate {rate} outside (0, 1]")));
    }
    let total = dims.0 * dims.1 * dims.2;
    let count = ((rate * total as f64).round() as usize).clamp(1, total);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut idx = rand::seq::index::sample(&mut rng, total, count).into_vec();
    idx.sort_unstable();
    Ok(idx)
}

pub fn make_mask(truth: &Tensor3, rate: f64, seed: u64) -> Result<ObservationMask> {
    let idx = sample_indices(truth.dims(), rate, seed)?;
    ObservationMask::from_linear(truth, idx).map_err(CliError::Solver)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Low-rank factorisation with TV regularisation.
    VtctfTv,
    /// Low-rank factorisation alone.
    Vtctf,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::VtctfTv => "VTCTF-TV",
            Method::Vtctf => "VTCTF",
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub input: PathBuf,
    pub kind: DataKind,
    pub sampling_rate: f64,
    pub seed: u64,
    pub config: SolverConfig,
    pub out_dir: PathBuf,
    pub ssim: SsimParams,
    /// Observation mask as a 0/1 raw tensor; sampled from `seed` when absent.
    pub mask: Option<PathBuf>,
}

/// One CSV row.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub method: &'static str,
    pub v: usize,
    pub sr: f64,
    pub psnr: f64,
    pub ssim: f64,
    pub seconds: f64,
    pub iterations: usize,
    pub converged: bool,
    pub bands: Vec<(f64, f64)>,
}

pub const RESULTS_HEADER: [&str; 7] = ["method", "v", "SR", "PSNR", "SSIM", "seconds", "iterations"];
pub const BANDS_HEADER: [&str; 5] = ["method", "v", "band", "PSNR", "SSIM"];

/// Fixed formatting; `inf` for the identical-tensor PSNR sentinel.
fn num(x: f64) -> String {
    if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{x:.6}")
    }
}

pub fn write_results(path: &Path, rows: &[RunRecord]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| CliError::write(path, e))?;
    w.write_record(RESULTS_HEADER).map_err(|e| CliError::write(path, e))?;
    for r in rows {
        w.write_record([
            r.method.to_string(),
            r.v.to_string(),
            num(r.sr),
            num(r.psnr),
            num(r.ssim),
            format!("{:.3}", r.seconds),
            r.iterations.to_string(),
        ])
        .map_err(|e| CliError::write(path, e))?;
    }
    w.flush().map_err(|e| CliError::write(path, e))
}

pub fn write_bands(path: &Path, rows: &[RunRecord]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| CliError::write(path, e))?;
    w.write_record(BANDS_HEADER).map_err(|e| CliError::write(path, e))?;
    for r in rows {
        for (band, (psnr, ssim)) in r.bands.iter().enumerate() {
            w.write_record([r.method.to_string(), r.v.to_string(), (band + 1).to_string(), num(*psnr), num(*ssim)])
                .map_err(|e| CliError::write(path, e))?;
        }
    }
    w.flush().map_err(|e| CliError::write(path, e))
}

/// Data, mask and observed tensor of an experiment.
pub struct Prepared {
    pub truth: Tensor3,
    pub mask: ObservationMask,
    pub observed: Tensor3,
}

pub fn prepare(spec: &ExperimentSpec) -> Result<Prepared> {
    let truth = ingest::ingest(&spec.input, spec.kind)?;
    let mask = match &spec.mask {
        Some(path) => {
            let flags = rawio::read_tensor(path)?;
            if flags.dims() != truth.dims() {
                return Err(CliError::format(
                    path,
                    format!("mask is {:?}, data is {:?}", flags.dims(), truth.dims()),
                ));
            }
            ObservationMask::from_indicator(&truth, &flags).map_err(CliError::Solver)?
        }
        None => make_mask(&truth, spec.sampling_rate, spec.seed)?,
    };
    let observed = mask.observed_tensor();
    Ok(Prepared { truth, mask, observed })
}

/// Configuration problems are argument errors; everything else is a solver
/// failure.
fn solver_error(e: vtctf::Error) -> CliError {
    match e {
        vtctf::Error::InvalidConfig(_) | vtctf::Error::TransformTooShort { .. } => CliError::Invalid(e.to_string()),
        other => CliError::Solver(other),
    }
}

/// Solve once and score against `truth`.
pub fn run_once(
    data: &Prepared,
    method: Method,
    config: &SolverConfig,
    ssim: SsimParams,
) -> Result<(RunRecord, SolveOutput)> {
    let start = Instant::now();
    let out = match method {
        Method::VtctfTv => solve_vtctf_tv(&data.observed, &data.mask, config),
        Method::Vtctf => solve_vtctf(&data.observed, &data.mask, config),
    }
    .map_err(solver_error)?;
    let seconds = start.elapsed().as_secs_f64();
    let rec = &out.completed;
    let record = RunRecord {
        method: method.name(),
        v: config.transform_len(data.truth.tubes()),
        sr: data.mask.sampling_rate(),
        psnr: metrics::psnr(rec, &data.truth).map_err(CliError::Solver)?,
        ssim: metrics::ssim(rec, &data.truth, ssim).map_err(CliError::Solver)?,
        seconds,
        iterations: out.trace.iterations,
        converged: out.trace.converged,
        bands: metrics::per_band(rec, &data.truth, ssim).map_err(CliError::Solver)?,
    };
    Ok((record, out))
}

fn ensure_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::write(dir, e))
}

fn save_outputs(spec: &ExperimentSpec, rows: &[RunRecord]) -> Result<()> {
    write_results(&spec.out_dir.join("results.csv"), rows)?;
    if spec.kind == DataKind::Multispectral {
        write_bands(&spec.out_dir.join("bands.csv"), rows)?;
    }
    Ok(())
}

fn save_recovered(spec: &ExperimentSpec, rec: &RunRecord, out: &SolveOutput) -> Result<()> {
    let stem = format!("recovered_{}_v{}", rec.method.to_ascii_lowercase(), rec.v);
    rawio::write_tensor(&spec.out_dir.join(format!("{stem}.vtt")), &out.completed)?;
    if spec.kind == DataKind::ColorImage {
        ingest::save_image(&out.completed, &spec.out_dir.join(format!("{stem}.png")))?;
    }
    Ok(())
}

/// Solve with TV, and also without it when `with_plain` is set.
pub fn run_experiment(spec: &ExperimentSpec, with_plain: bool) -> Result<Vec<RunRecord>> {
    let data = prepare(spec)?;
    ensure_dir(&spec.out_dir)?;
    let mut methods = vec![Method::VtctfTv];
    if with_plain {
        methods.push(Method::Vtctf);
    }
    let mut rows = Vec::new();
    for m in methods {
        let (rec, out) = run_once(&data, m, &spec.config, spec.ssim)?;
        save_recovered(spec, &rec, &out)?;
        rows.push(rec);
    }
    save_outputs(spec, &rows)?;
    Ok(rows)
}

/// `p..=3p`, the range the sweep defaults to.
pub fn default_v_range(p: usize) -> Vec<usize> {
    (p..=3 * p).collect()
}

/// One run per `v`, sharing the mask and seed; writes `sweep.csv`.
pub fn v_sweep(spec: &ExperimentSpec, v_range: Option<&[usize]>) -> Result<Vec<RunRecord>> {
    let data = prepare(spec)?;
    let p = data.truth.tubes();
    let range = v_range.map(|r| r.to_vec()).unwrap_or_else(|| default_v_range(p));
    if let Some(&bad) = range.iter().find(|&&v| v < p || v > 3 * p) {
        return Err(CliError::Invalid(format!("v = {bad} outside [{p}, {}]", 3 * p)));
    }
    ensure_dir(&spec.out_dir)?;
    let mut rows = Vec::with_capacity(range.len());
    for v in range {
        let cfg = spec.config.clone().with_v(v);
        rows.push(run_once(&data, Method::VtctfTv, &cfg, spec.ssim)?.0);
    }
    write_results(&spec.out_dir.join("sweep.csv"), &rows)?;
    if spec.kind == DataKind::Multispectral {
        write_bands(&spec.out_dir.join("sweep_bands.csv"), &rows)?;
    }
    Ok(rows)
}

/// Both methods at `v = p` and `v = 2p − 1`.
pub fn compare(spec: &ExperimentSpec) -> Result<Vec<RunRecord>> {
    let data = prepare(spec)?;
    let p = data.truth.tubes();
    ensure_dir(&spec.out_dir)?;
    let mut rows = Vec::new();
    for method in [Method::VtctfTv, Method::Vtctf] {
        for v in [p, 2 * p - 1] {
            let cfg = spec.config.clone().with_v(v);
            let (rec, out) = run_once(&data, method, &cfg, spec.ssim)?;
            save_recovered(spec, &rec, &out)?;
            rows.push(rec);
        }
    }
    save_outputs(spec, &rows)?;
    Ok(rows)
}
