//! Acceptance checks. Prints one PASS/FAIL/SKIP line per criterion and exits
//! non-zero if a required criterion fails.
//!
//! Criterion 9 needs the 256×256 colour test image; point `VTCTF_LENA` at it
//! to enable the check.

use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vtctf::metrics::{psnr, ssim, SsimParams, SsimVariant};
use vtctf::products::{h_product, spectral_rank_factorization, spectral_tubal_rank, DEFAULT_RANK_TOL};
use vtctf::solver::{solve_c_slice, SolveTrace};
use vtctf::spectral::variable_product_fft;
use vtctf::tv::{build_h, DctDiagonalization};
use vtctf::*;
use vtctf_cli::experiment::make_mask;
use vtctf_cli::{ingest, synthetic, DataKind};

enum Outcome {
    Pass(String),
    Fail(String),
    Skip(String),
}

fn verdict(ok: bool, detail: String) -> Outcome {
    if ok {
        Outcome::Pass(detail)
    } else {
        Outcome::Fail(detail)
    }
}

/// H1 margins and exact feasibility from every end-to-end run.
#[derive(Default)]
struct DescentLog {
    runs: usize,
    worst_margin: f64,
    worst_feasibility: f64,
}

impl DescentLog {
    fn record(&mut self, t: &SolveTrace) {
        if self.runs == 0 {
            self.worst_margin = f64::INFINITY;
        }
        self.runs += 1;
        self.worst_margin = self.worst_margin.min(t.min_h1_margin());
        for &f in &t.feasibility {
            self.worst_feasibility = self.worst_feasibility.max(f);
        }
    }
}

fn c1_algebra() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut worst = 0.0f64;
    let cases = 1200;
    for _ in 0..cases {
        let p = rng.random_range(1..=16);
        let v = rng.random_range(p..=3 * p);
        let a = TubalScalar::new((0..p).map(|_| rng.random_range(-1.0..1.0)).collect()).unwrap();
        let b = TubalScalar::new((0..p).map(|_| rng.random_range(-1.0..1.0)).collect()).unwrap();
        let direct = a.variable_product_direct(&b, v).unwrap();
        let fast = variable_product_fft(&a, &b, v).unwrap();
        for k in 0..p {
            worst = worst.max((direct[k] - fast[k]).abs());
        }
    }
    let secs = start.elapsed().as_secs_f64();
    verdict(
        worst <= 1e-9 && secs < 5.0,
        format!("{cases} tube pairs, max |fft - direct| = {worst:.2e}, {secs:.2}s"),
    )
}

fn c2_truncated_identity() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    let mut worst = 0.0f64;
    let cases = 250;
    for _ in 0..cases {
        let (m, q, n) = (rng.random_range(1..=4), rng.random_range(1..=4), rng.random_range(1..=4));
        let p = rng.random_range(1..=8);
        let v = rng.random_range(p..=3 * p);
        let a = Tensor3::random_uniform(m, q, p, -1.0, 1.0, &mut rng);
        let b = Tensor3::random_uniform(q, n, p, -1.0, 1.0, &mut rng);
        worst = worst.max(truncated_product_check(&a, &b, v, f64::INFINITY).unwrap());
    }
    let secs = start.elapsed().as_secs_f64();
    verdict(
        worst <= 1e-9 && secs < 10.0,
        format!("{cases} tensor pairs, max deviation {worst:.2e}, {secs:.2}s"),
    )
}

fn c3_transform() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    let (mut gram, mut round, mut energy) = (0.0f64, 0.0f64, 0.0f64);
    let mut pairs = 0;
    for v in 1..=64 {
        for p in 1..=v {
            pairs += 1;
            let t = build_zdft(v, p).unwrap();
            let g = t.matrix().adjoint() * t.matrix();
            let dev = (g - DMatrix::<Complex64>::identity(p, p) * Complex64::new(v as f64, 0.0)).camax();
            gram = gram.max(dev / v as f64);

            let c = Tensor3::random_uniform(2, 2, p, -1.0, 1.0, &mut rng);
            let s = forward_transform(&c, v).unwrap();
            let back = inverse_transform(&s).unwrap();
            round = round.max(back.sub(&c).frobenius_norm() / c.frobenius_norm());
            let e = c.frobenius_norm_sq();
            energy = energy.max((s.frobenius_norm_sq() - v as f64 * e).abs() / (v as f64 * e));
        }
    }
    verdict(
        gram <= 1e-10 && round <= 1e-10 && energy <= 1e-10,
        format!("{pairs} (p, v) pairs: Gram {gram:.1e}, round trip {round:.1e}, energy {energy:.1e} (relative)"),
    )
}

fn random_spectrum(rows: usize, cols: usize, p: usize, v: usize, rng: &mut ChaCha8Rng) -> SpectralTensor {
    let slices = (0..v)
        .map(|_| DMatrix::from_fn(rows, cols, |_, _| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))))
        .collect();
    SpectralTensor::new(p, slices).unwrap()
}

fn c4_rank_theorem() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    let (mut rank_ok, mut worst_refactor, mut trials) = (true, 0.0f64, 0);
    let mut truncated_above = 0;
    for _ in 0..150 {
        trials += 1;
        let r = rng.random_range(1..=3);
        let (m, n) = (rng.random_range(r..=8), rng.random_range(r..=8));
        let p = rng.random_range(1..=6);
        let v = rng.random_range(p..=3 * p);

        // factors in the variable Fourier domain
        let c = h_product(&random_spectrum(m, r, p, v, &mut rng), &random_spectrum(r, n, p, v, &mut rng)).unwrap();
        rank_ok &= spectral_tubal_rank(&c, DEFAULT_RANK_TOL).unwrap() <= r;
        let (x, y) = spectral_rank_factorization(&c, r).unwrap();
        let scale = c.slices().iter().map(|s| s.norm()).fold(1.0, f64::max);
        worst_refactor = worst_refactor.max(h_product(&x, &y).unwrap().max_abs_diff(&c) / scale);

        // real factors: A *_p B keeps the bound; the truncated product at v > p
        // generally does not (its spectrum is the rank-r product projected
        // onto the range of the transform)
        let a = Tensor3::random_uniform(m, r, p, -1.0, 1.0, &mut rng);
        let b = Tensor3::random_uniform(r, n, p, -1.0, 1.0, &mut rng);
        rank_ok &= variable_tubal_rank(&variable_t_product(&a, &b, p).unwrap(), p, DEFAULT_RANK_TOL).unwrap() <= r;
        if v > p && variable_tubal_rank(&variable_t_product(&a, &b, v).unwrap(), v, DEFAULT_RANK_TOL).unwrap() > r {
            truncated_above += 1;
        }
    }
    verdict(
        rank_ok && worst_refactor <= 1e-9,
        format!(
            "{trials} instances: Ā *_H B̄ and A *_p B rank ≤ r, SVD refactorisation error {worst_refactor:.1e}; \
             (info: {truncated_above} truncated A *_v B with v > p exceed r)"
        ),
    )
}

fn dense_sylvester(r: &DMatrix<Complex64>, beta: f64, mu: f64, rho3: f64) -> DMatrix<Complex64> {
    let (m, n) = r.shape();
    let (hm, hn) = (build_h(m), build_h(n));
    // vec(C + β H_m C + μ C H_n + ρ3 C) = [I_n ⊗ ((1+ρ3)I + βH_m) + μ H_n^T ⊗ I_m] vec(C)
    let left = DMatrix::<f64>::identity(m, m) * (1.0 + rho3) + hm * beta;
    let big = DMatrix::<f64>::identity(n, n).kronecker(&left) + hn.transpose().kronecker(&DMatrix::<f64>::identity(m, m)) * mu;
    let lu = big.lu();
    let re = lu.solve(&DVector::from_iterator(m * n, r.iter().map(|z| z.re))).unwrap();
    let im = lu.solve(&DVector::from_iterator(m * n, r.iter().map(|z| z.im))).unwrap();
    DMatrix::from_fn(m, n, |i, j| Complex64::new(re[i + j * m], im[i + j * m]))
}

fn c5_sylvester() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(105);
    let (dm, dn) = (DctDiagonalization::new(6), DctDiagonalization::new(5));
    let mut worst = 0.0f64;
    let mut solves = 0;
    for v in [3, 4, 5] {
        for params in [(1e-5, 1e-5, 5e-6), (0.5, 2.0, 0.1), (10.0, 0.3, 1e-3)] {
            for _ in 0..5 {
                let (beta, mu, rho3) = params;
                let s = Transformer::new(v).forward(&Tensor3::random_uniform(6, 5, 3, -1.0, 1.0, &mut rng)).unwrap();
                for r in s.slices() {
                    let ours = solve_c_slice(r, &dm, &dn, beta, mu, rho3);
                    let dense = dense_sylvester(r, beta, mu, rho3);
                    worst = worst.max((&ours - &dense).norm() / dense.norm());
                    solves += 1;
                }
            }
        }
    }
    verdict(worst <= 1e-8, format!("{solves} slice solves, max relative gap to dense solve {worst:.1e}"))
}

fn c7_recovery(log: &mut DescentLog) -> Outcome {
    let truth = synthetic::low_rank(30, 30, 5, 2, 9, 7);
    let mask = make_mask(&truth, 0.7, 7).unwrap();
    // rank 2 = the true rank; the default rank 30 would be full rank here
    let cfg = SolverConfig::default().with_v(9).with_rank(2);
    let start = Instant::now();
    let out = solve_vtctf_tv(&mask.observed_tensor(), &mask, &cfg).unwrap();
    let secs = start.elapsed().as_secs_f64();
    log.record(&out.trace);
    let rel = out.completed.sub(&truth).frobenius_norm() / truth.frobenius_norm();
    let db = psnr(&out.completed, &truth).unwrap();
    verdict(
        rel <= 0.1 && db >= 20.0 && out.trace.iterations <= 200 && secs < 30.0,
        format!("30x30x5, q=2, v=9, SR=0.7: rel err {rel:.4}, PSNR {db:.2} dB, {} iterations, {secs:.2}s", out.trace.iterations),
    )
}

/// The argmax of a single-mask curve moves by several v between masks, so the
/// trend is read off the curve averaged over a few masks.
fn c8_v_sweep(log: &mut DescentLog) -> Outcome {
    let p = 8;
    let masks = [0u64, 1, 2];
    let truth = synthetic::smooth_video(36, 36, p, 3, 0);
    let start = Instant::now();
    let mut curve: Vec<(usize, f64)> = (p..=3 * p).map(|v| (v, 0.0)).collect();
    for &seed in &masks {
        let mask = make_mask(&truth, 0.5, seed).unwrap();
        let g = mask.observed_tensor();
        for (v, acc) in curve.iter_mut() {
            let cfg = SolverConfig { epsilon: 1e-10, max_iter: 2000, ..SolverConfig::default().with_rank(3).with_v(*v) };
            let out = solve_vtctf_tv(&g, &mask, &cfg).unwrap();
            log.record(&out.trace);
            *acc += psnr(&out.completed, &truth).unwrap() / masks.len() as f64;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let (best_v, best) = curve.iter().cloned().fold((0, f64::NEG_INFINITY), |acc, x| if x.1 > acc.1 { x } else { acc });
    let at = |v: usize| curve.iter().find(|c| c.0 == v).unwrap().1;
    let gain = at(2 * p - 1) - at(p);
    let shape: Vec<String> = curve.iter().map(|(v, d)| format!("{v}:{d:.1}")).collect();
    verdict(
        (13..=19).contains(&best_v) && gain >= 0.5 && secs < 120.0,
        format!(
            "36x36x8, SR=0.5, mean over {} masks: best v = {best_v} ({best:.2} dB), PSNR(v=15) - PSNR(v=8) = {gain:.2} dB, {secs:.1}s [{}]",
            masks.len(),
            shape.join(" ")
        ),
    )
}

fn c6_descent(log: &mut DescentLog) -> Outcome {
    // a run with TV weights large enough to matter
    let truth = synthetic::smooth_video(20, 18, 4, 2, 5);
    let mask = make_mask(&truth, 0.4, 5).unwrap();
    let cfg = SolverConfig {
        alpha1: 1e-3,
        alpha2: 1e-3,
        beta: 1e-2,
        mu: 1e-2,
        rho1: 1e-3,
        rho2: 1e-3,
        rho3: 1e-3,
        epsilon: 1e-12,
        max_iter: 300,
        ..SolverConfig::default().with_rank(2)
    };
    log.record(&solve_vtctf_tv(&mask.observed_tensor(), &mask, &cfg).unwrap().trace);
    log.record(&solve_vtctf(&mask.observed_tensor(), &mask, &cfg).unwrap().trace);
    verdict(
        log.worst_margin >= -1e-9 && log.worst_feasibility == 0.0,
        format!(
            "{} runs: min H1 margin {:.2e}, max |C - G| on Ω = {:e}",
            log.runs, log.worst_margin, log.worst_feasibility
        ),
    )
}

fn c9_lena() -> Outcome {
    let Some(path) = std::env::var_os("VTCTF_LENA") else {
        return Outcome::Skip("VTCTF_LENA not set".into());
    };
    let truth = match ingest(std::path::Path::new(&path), DataKind::ColorImage) {
        Ok(t) => t,
        Err(e) => return Outcome::Fail(format!("cannot load image: {e}")),
    };
    let mask = make_mask(&truth, 0.7, 0).unwrap();
    let start = Instant::now();
    let out = solve_vtctf_tv(&mask.observed_tensor(), &mask, &SolverConfig::default()).unwrap();
    let db = psnr(&out.completed, &truth).unwrap();
    let params = SsimParams { variant: SsimVariant::Standard, ..Default::default() };
    let s = ssim(&out.completed, &truth, params).unwrap();
    verdict(
        (db - 32.47).abs() <= 1.5 && (s - 0.96).abs() <= 0.05,
        format!("PSNR {db:.2} dB (target 32.47 ± 1.5), SSIM {s:.4} (target 0.96 ± 0.05), {:.1}s", start.elapsed().as_secs_f64()),
    )
}

/// Two-pass moments with plain summation, written out independently.
fn scalar_ssim(x: &[f64], y: &[f64], c1: f64, c2: f64, standard: bool) -> f64 {
    let n = x.len() as f64;
    let mut sx = 0.0;
    let mut sy = 0.0;
    for i in 0..x.len() {
        sx += x[i];
        sy += y[i];
    }
    let (mx, my) = (sx / n, sy / n);
    let (mut vx, mut vy, mut cxy) = (0.0, 0.0, 0.0);
    for i in 0..x.len() {
        vx += (x[i] - mx).powi(2);
        vy += (y[i] - my).powi(2);
        cxy += (x[i] - mx) * (y[i] - my);
    }
    let (vx, vy, cxy) = (vx / n, vy / n, cxy / n);
    if standard {
        (2.0 * mx * my + c1) * (2.0 * cxy + c2) / ((mx * mx + my * my + c1) * (vx + vy + c2))
    } else {
        (2.0 * mx * my) * (2.0 * cxy + c2) / ((mx * mx * my * my + c1) * (vx + vy + c2))
    }
}

fn c10_metrics() -> Outcome {
    let one = |x: f64| Tensor3::from_vec(1, 1, 1, vec![x]).unwrap();
    let hand = psnr(&one(0.5), &one(1.0)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(110);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let a = Tensor3::random_uniform(4, 4, 2, 0.0, 1.0, &mut rng);
        let b = Tensor3::random_uniform(4, 4, 2, 0.0, 1.0, &mut rng);
        for (variant, standard) in [(SsimVariant::Literal, false), (SsimVariant::Standard, true)] {
            let params = SsimParams { variant, ..Default::default() };
            let ours = ssim(&a, &b, params).unwrap();
            let reference = scalar_ssim(a.as_slice(), b.as_slice(), params.c1, params.c2, standard);
            worst = worst.max((ours - reference).abs());
        }
    }
    verdict(
        (hand - 6.0206).abs() <= 1e-3 && worst <= 1e-12,
        format!("PSNR hand case {hand:.4} dB, max SSIM gap to scalar evaluation {worst:.1e}"),
    )
}

fn main() {
    // `cargo test -- --list` and filters from other targets end up here too
    if std::env::args().any(|a| a == "--list") {
        println!("acceptance: test");
        return;
    }
    let mut log = DescentLog::default();
    let results: Vec<(usize, &str, bool, Outcome)> = vec![
        (1, "variable product: FFT vs direct summation", true, c1_algebra()),
        (2, "truncated-product identity", true, c2_truncated_identity()),
        (3, "transform: Gram, round trip, energy", true, c3_transform()),
        (4, "rank theorem and SVD refactorisation", true, c4_rank_theorem()),
        (5, "C-step solve vs dense Kronecker system", true, c5_sylvester()),
        (7, "recovery at desk scale", true, c7_recovery(&mut log)),
        (8, "v-sweep trend", true, c8_v_sweep(&mut log)),
        (6, "sufficient decrease and feasibility", true, c6_descent(&mut log)),
        (9, "colour test image vs published table", false, c9_lena()),
        (10, "metrics", true, c10_metrics()),
    ];
    let mut ordered = results;
    ordered.sort_by_key(|r| r.0);
    let mut failed = 0;
    for (id, name, required, outcome) in &ordered {
        let (tag, detail) = match outcome {
            Outcome::Pass(d) => ("PASS", d),
            Outcome::Fail(d) => {
                if *required {
                    failed += 1;
                }
                ("FAIL", d)
            }
            Outcome::Skip(d) => ("SKIP", d),
        };
        println!("criterion {id:>2} [{tag}] {name}: {detail}");
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
