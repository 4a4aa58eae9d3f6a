use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use vtctf::metrics::{self, SsimParams, SsimVariant};
use vtctf::{SolverConfig, Tensor3};
use vtctf_cli::experiment::{self, ExperimentSpec, RunRecord};
use vtctf_cli::{ingest, rawio, CliError, DataKind};

#[derive(Parser)]
#[command(name = "vtctf", version, about = "Low-rank tensor completion with the variable T-product")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Complete one tensor and score it against the full data.
    Complete {
        #[command(flatten)]
        exp: ExpArgs,
        /// Also run the TV-free variant.
        #[arg(long)]
        plain: bool,
    },
    /// Run the solver for each v and write sweep.csv.
    SweepV {
        #[command(flatten)]
        exp: ExpArgs,
        /// Comma-separated v values; default p..=3p.
        #[arg(long, value_delimiter = ',')]
        vs: Option<Vec<usize>>,
    },
    /// Both methods at v = p and v = 2p-1.
    Compare {
        #[command(flatten)]
        exp: ExpArgs,
    },
    /// PSNR and SSIM of a recovered tensor against ground truth.
    Metrics {
        recovered: PathBuf,
        truth: PathBuf,
        #[arg(long, value_enum, default_value = "raw-tensor")]
        kind: DataKind,
        #[arg(long)]
        standard_ssim: bool,
        /// Print per-band values too.
        #[arg(long)]
        bands: bool,
    },
    /// Write a 0/1 observation mask as a raw tensor.
    MakeMask {
        /// m,n,p
        #[arg(long, value_delimiter = ',', required = true)]
        dims: Vec<usize>,
        #[arg(long)]
        sr: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct ExpArgs {
    /// Image file, directory of frames/bands, or raw tensor.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "color-image")]
    kind: DataKind,
    /// Sampling rate in (0, 1].
    #[arg(long, default_value_t = 0.5)]
    sr: f64,
    /// Seeds both the mask and the factor initialisation.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Use this 0/1 raw tensor instead of sampling a mask.
    #[arg(long)]
    mask: Option<PathBuf>,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    #[arg(long)]
    standard_ssim: bool,
    #[command(flatten)]
    solver: SolverArgs,
}

#[derive(Args)]
struct SolverArgs {
    /// Transform length; default 2p-1.
    #[arg(long)]
    v: Option<usize>,
    #[arg(long, default_value_t = 30)]
    rank: usize,
    #[arg(long, default_value_t = 1e-5)]
    alpha1: f64,
    #[arg(long, default_value_t = 1e-5)]
    alpha2: f64,
    #[arg(long, default_value_t = 1e-5)]
    beta: f64,
    #[arg(long, default_value_t = 1e-5)]
    mu: f64,
    #[arg(long, default_value_t = 5e-6)]
    rho1: f64,
    #[arg(long, default_value_t = 5e-6)]
    rho2: f64,
    #[arg(long, default_value_t = 5e-6)]
    rho3: f64,
    #[arg(long, default_value_t = 1e-5)]
    eps: f64,
    #[arg(long, default_value_t = 200)]
    max_iter: usize,
}

fn ssim_params(standard: bool) -> SsimParams {
    SsimParams {
        variant: if standard { SsimVariant::Standard } else { SsimVariant::Literal },
        ..Default::default()
    }
}

impl ExpArgs {
    fn spec(&self) -> ExperimentSpec {
        let s = &self.solver;
        ExperimentSpec {
            input: self.input.clone(),
            kind: self.kind,
            sampling_rate: self.sr,
            seed: self.seed,
            config: SolverConfig {
                v: s.v,
                rank: s.rank,
                alpha1: s.alpha1,
                alpha2: s.alpha2,
                beta: s.beta,
                mu: s.mu,
                rho1: s.rho1,
                rho2: s.rho2,
                rho3: s.rho3,
                epsilon: s.eps,
                max_iter: s.max_iter,
                seed: self.seed,
                ..Default::default()
            },
            out_dir: self.out.clone(),
            ssim: ssim_params(self.standard_ssim),
            mask: self.mask.clone(),
        }
    }
}

fn print_rows(rows: &[RunRecord]) {
    println!("{:<10} {:>4} {:>6} {:>10} {:>8} {:>9} {:>6}", "method", "v", "SR", "PSNR", "SSIM", "seconds", "iters");
    for r in rows {
        println!(
            "{:<10} {:>4} {:>6.3} {:>10.4} {:>8.4} {:>9.3} {:>6}{}",
            r.method,
            r.v,
            r.sr,
            r.psnr,
            r.ssim,
            r.seconds,
            r.iterations,
            if r.converged { "" } else { " (max-iter)" }
        );
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Complete { exp, plain } => {
            let spec = exp.spec();
            print_rows(&experiment::run_experiment(&spec, plain)?);
            println!("wrote {}", spec.out_dir.display());
        }
        Command::SweepV { exp, vs } => {
            let spec = exp.spec();
            print_rows(&experiment::v_sweep(&spec, vs.as_deref())?);
            println!("wrote {}", spec.out_dir.join("sweep.csv").display());
        }
        Command::Compare { exp } => {
            let spec = exp.spec();
            print_rows(&experiment::compare(&spec)?);
            println!("wrote {}", spec.out_dir.display());
        }
        Command::Metrics { recovered, truth, kind, standard_ssim, bands } => {
            let rec = ingest::ingest(&recovered, kind)?;
            let truth_t = ingest::ingest(&truth, kind)?;
            if rec.dims() != truth_t.dims() {
                return Err(CliError::Invalid(format!("shapes differ: {:?} vs {:?}", rec.dims(), truth_t.dims())).into());
            }
            let params = ssim_params(standard_ssim);
            println!("PSNR {:.4}", metrics::psnr(&rec, &truth_t)?);
            println!("SSIM {:.6}", metrics::ssim(&rec, &truth_t, params)?);
            if bands {
                for (k, (p, s)) in metrics::per_band(&rec, &truth_t, params)?.iter().enumerate() {
                    println!("band {:>3}  PSNR {p:.4}  SSIM {s:.6}", k + 1);
                }
            }
        }
        Command::MakeMask { dims, sr, seed, out } => {
            let &[m, n, p] = dims.as_slice() else {
                return Err(CliError::Invalid(format!("--dims takes m,n,p, got {} values", dims.len())).into());
            };
            if m == 0 || n == 0 || p == 0 {
                return Err(CliError::Invalid("dims must be positive".into()).into());
            }
            let idx = experiment::sample_indices((m, n, p), sr, seed)?;
            let mut flags = Tensor3::zeros(m, n, p);
            for i in &idx {
                flags.as_mut_slice()[*i] = 1.0;
            }
            rawio::write_tensor(&out, &flags).with_context(|| format!("writing mask for {m}x{n}x{p}"))?;
            println!("{} of {} entries observed, wrote {}", idx.len(), m * n * p, out.display());
        }
    }
    Ok(())
}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<CliError>() {
            return e.exit_code() as u8;
        }
        if cause.downcast_ref::<vtctf::Error>().is_some() {
            return 4;
        }
    }
    1
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
