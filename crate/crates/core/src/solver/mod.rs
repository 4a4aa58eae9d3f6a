//! Proximal alternating minimisation for low-rank completion with TV
//! regularisation in the variable Fourier domain.
//!
//! The factors are held as free spectral stacks `X̄ ∈ C^{m×q×v}`,
//! `Ȳ ∈ C^{q×n×v}`; one outer iteration updates `X̄`, then `Ȳ`, then `C`.
//! The function the iterates descend is
//!
//! ```text
//! f(X̄, Ȳ, C) = 1/(2v) Σ_l ‖X̄_l Ȳ_l − C̄_l‖²  +  α1 ‖D1 *_v C‖₁  +  α2 ‖C *_v D2‖₁  +  Φ(C)
//! ```
//!
//! which coincides with `½‖X *_v Y − C‖² + …` whenever the factors are
//! spectra of real tensors whose product does not spill past tube length
//! `p`. Distances between factor iterates carry the same `1/v` weight.

mod config;
mod mask;

pub use config::SolverConfig;
pub use mask::ObservationMask;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{mismatch, Error, Result};
use crate::products::variable_t_product;
use crate::spectral::{SpectralTensor, Transformer};
use crate::tensor::{compensated_sum, Tensor3};
use crate::tv::{apply_d1, apply_d1_adjoint, apply_d2, apply_d2_adjoint, DctDiagonalization};

type CMat = DMatrix<Complex64>;

/// `T_η(x)`: shrink `x` towards zero by `η`.
pub fn soft_threshold(x: f64, eta: f64) -> f64 {
    if x.abs() > eta {
        (x.abs() - eta) * x.signum()
    } else {
        0.0
    }
}

fn soft_threshold_tensor(t: &Tensor3, eta: f64) -> Tensor3 {
    t.map(|x| soft_threshold(x, eta))
}

/// Iterate of the alternating scheme.
#[derive(Debug, Clone)]
pub struct SolverState {
    pub xbar: SpectralTensor,
    pub ybar: SpectralTensor,
    pub c: Tensor3,
    /// Spectrum of `c`.
    pub cbar: SpectralTensor,
    pub q1: Tensor3,
    pub q2: Tensor3,
    pub s: Tensor3,
    pub t: Tensor3,
    pub iteration: usize,
    pub objective_trace: Vec<f64>,
    transformer: Transformer,
}

impl SolverState {
    /// `C^0 = P_Ω(G)`; `X^0`, `Y^0` are real tensors with entries drawn
    /// uniformly from `[0, 1/√(q p)]`, mapped to the spectral domain.
    pub fn initialize(mask: &ObservationMask, cfg: &SolverConfig) -> Result<Self> {
        let (m, n, p) = mask.dims();
        cfg.validate((m, n, p))?;
        let v = cfg.transform_len(p);
        let q = cfg.rank;
        let tr = Transformer::new(v);
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let hi = 1.0 / ((q * p) as f64).sqrt();
        let x0 = Tensor3::from_vec(m, q, p, (0..m * q * p).map(|_| rng.random_range(0.0..=hi)).collect())?;
        let y0 = Tensor3::from_vec(q, n, p, (0..q * n * p).map(|_| rng.random_range(0.0..=hi)).collect())?;
        let c = mask.observed_tensor();
        let zeros = Tensor3::zeros(m, n, p);
        Ok(Self {
            xbar: tr.forward(&x0)?,
            ybar: tr.forward(&y0)?,
            cbar: tr.forward(&c)?,
            c,
            q1: zeros.clone(),
            q2: zeros.clone(),
            s: zeros.clone(),
            t: zeros,
            iteration: 0,
            objective_trace: Vec::new(),
            transformer: tr,
        })
    }

    pub fn v(&self) -> usize {
        self.transformer.v()
    }

    pub fn transformer(&self) -> &Transformer {
        &self.transformer
    }

    /// Real-domain factors, when the spectral stacks are conjugate-symmetric.
    pub fn real_factors(&self) -> Result<(Tensor3, Tensor3)> {
        Ok((
            self.transformer.inverse(&self.xbar)?,
            self.transformer.inverse(&self.ybar)?,
        ))
    }
}

/// Slices that need explicit computation; the rest are conjugates.
fn computed_slices(v: usize, cfg: &SolverConfig) -> usize {
    if cfg.exploit_symmetry {
        v / 2 + 1
    } else {
        v
    }
}

/// Fill slices `len..v` from `S_l = conj(S_{v−l})`.
fn mirror(slices: &mut Vec<CMat>, v: usize) {
    let have = slices.len();
    for l in have..v {
        let src = slices[v - l].map(|z| z.conj());
        slices.push(src);
    }
}

fn rel_residual(r: &CMat, b: &CMat) -> f64 {
    let nb = b.norm();
    if nb == 0.0 {
        r.norm()
    } else {
        r.norm() / nb
    }
}

/// `X = (ρ X^k + C Y^H)(Y Y^H + ρ I)^{-1}` with its normal-equation residual.
pub fn x_slice_update(xk: &CMat, c: &CMat, y: &CMat, rho: f64) -> Option<(CMat, f64)> {
    let q = y.nrows();
    let gram = y * y.adjoint() + CMat::identity(q, q) * Complex64::new(rho, 0.0);
    let rhs = xk * Complex64::new(rho, 0.0) + c * y.adjoint();
    // X G = B  <=>  G X^H = B^H since G is Hermitian
    let chol = gram.clone().cholesky()?;
    let x = chol.solve(&rhs.adjoint()).adjoint();
    let res = rel_residual(&(&x * &gram - &rhs), &rhs);
    Some((x, res))
}

/// `Y = (X^H X + ρ I)^{-1}(X^H C + ρ Y^k)` with its normal-equation residual.
pub fn y_slice_update(yk: &CMat, c: &CMat, x: &CMat, rho: f64) -> Option<(CMat, f64)> {
    let q = x.ncols();
    let gram = x.adjoint() * x + CMat::identity(q, q) * Complex64::new(rho, 0.0);
    let rhs = x.adjoint() * c + yk * Complex64::new(rho, 0.0);
    let chol = gram.clone().cholesky()?;
    let y = chol.solve(&rhs);
    let res = rel_residual(&(&gram * &y - &rhs), &rhs);
    Some((y, res))
}

/// New factor stack and the largest relative normal-equation residual.
#[derive(Debug, Clone)]
pub struct FactorUpdate {
    pub factor: SpectralTensor,
    pub max_residual: f64,
}

fn factor_update(
    op: &'static str,
    v: usize,
    p: usize,
    cfg: &SolverConfig,
    mut per_slice: impl FnMut(usize) -> Option<(CMat, f64)>,
) -> Result<FactorUpdate> {
    let mut slices = Vec::with_capacity(v);
    let mut worst = 0.0f64;
    for l in 0..computed_slices(v, cfg) {
        let (s, res) = per_slice(l).ok_or_else(|| Error::IllConditioned {
            op,
            slice: l,
            detail: "regularised Gram matrix is not positive definite".into(),
        })?;
        if res.is_nan() || res > cfg.solve_residual_limit {
            return Err(Error::IllConditioned {
                op,
                slice: l,
                detail: format!("normal-equation residual {res:e}"),
            });
        }
        worst = worst.max(res);
        slices.push(s);
    }
    mirror(&mut slices, v);
    Ok(FactorUpdate {
        factor: SpectralTensor::new(p, slices)?,
        max_residual: worst,
    })
}

/// Proximal least-squares update of `X̄`, slice by slice.
pub fn update_x(state: &SolverState, cfg: &SolverConfig) -> Result<FactorUpdate> {
    let (x, y, c) = (&state.xbar, &state.ybar, &state.cbar);
    factor_update("update_x", state.v(), c.p(), cfg, |l| {
        x_slice_update(x.slice(l), c.slice(l), y.slice(l), cfg.rho1)
    })
}

/// Proximal least-squares update of `Ȳ` against the current `X̄`.
pub fn update_y(state: &SolverState, cfg: &SolverConfig) -> Result<FactorUpdate> {
    let (x, y, c) = (&state.xbar, &state.ybar, &state.cbar);
    factor_update("update_y", state.v(), c.p(), cfg, |l| {
        y_slice_update(y.slice(l), c.slice(l), x.slice(l), cfg.rho2)
    })
}

/// `A ↦ K^T A K'` for a complex matrix and real `K`, `K'`.
fn real_sandwich(left_t: &DMatrix<f64>, a: &CMat, right: &DMatrix<f64>) -> CMat {
    let re = left_t * a.map(|z| z.re) * right;
    let im = left_t * a.map(|z| z.im) * right;
    CMat::from_fn(a.nrows(), a.ncols(), |i, j| Complex64::new(re[(i, j)], im[(i, j)]))
}

/// Solves `C + β H_m C + μ C H_n + ρ3 C = R` through `H = K Λ K^T`:
/// `Ĉ(i,j) = R̂(i,j) / (1 + ρ3 + β Λ_m(i) + μ Λ_n(j))` with
/// `R̂ = K_m^T R K_n` and `C = K_m Ĉ K_n^T`.
pub fn solve_c_slice(
    r: &CMat,
    diag_m: &DctDiagonalization,
    diag_n: &DctDiagonalization,
    beta: f64,
    mu: f64,
    rho3: f64,
) -> CMat {
    let (lm, ln) = (diag_m.lambda(), diag_n.lambda());
    let mut hat = real_sandwich(&diag_m.k().transpose(), r, diag_n.k());
    for j in 0..hat.ncols() {
        for i in 0..hat.nrows() {
            let denom = 1.0 + rho3 + beta * lm[i] + mu * ln[j];
            debug_assert!(denom >= 1.0 + rho3);
            hat[(i, j)] /= denom;
        }
    }
    real_sandwich(diag_m.k(), &hat, &diag_n.k().transpose())
}

/// `H_m A` for tridiagonal `H_m`, applied to a complex matrix.
fn h_left(a: &CMat) -> CMat {
    let m = a.nrows();
    CMat::from_fn(m, a.ncols(), |i, j| {
        let mut x = Complex64::new(0.0, 0.0);
        if i > 0 {
            x += a[(i, j)] - a[(i - 1, j)];
        }
        if i + 1 < m {
            x += a[(i, j)] - a[(i + 1, j)];
        }
        x
    })
}

fn h_right(a: &CMat) -> CMat {
    h_left(&a.transpose()).transpose()
}

/// Relative residual `‖C + βH_mC + μCH_n + ρ3C − R‖ / ‖R‖`.
pub fn sylvester_residual(c: &CMat, r: &CMat, beta: f64, mu: f64, rho3: f64) -> f64 {
    let lhs = c * Complex64::new(1.0 + rho3, 0.0)
        + h_left(c) * Complex64::new(beta, 0.0)
        + h_right(c) * Complex64::new(mu, 0.0);
    rel_residual(&(lhs - r), r)
}

/// How the accepted `C^{k+1}` was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CStep {
    /// The augmented-Lagrangian pass.
    Augmented,
    /// The pass broke sufficient decrease; the TV-free proximal minimiser
    /// was taken instead.
    Smooth,
    /// Neither candidate decreased the objective; `C^k` kept.
    Held,
}

#[derive(Debug, Clone)]
pub struct CUpdate {
    pub c: Tensor3,
    pub cbar: SpectralTensor,
    pub q1: Tensor3,
    pub q2: Tensor3,
    pub s: Tensor3,
    pub t: Tensor3,
    pub max_sylvester_residual: f64,
    pub step: CStep,
}

/// `(1/2v) Σ_l ‖Z_l − C̄_l‖²` for precomputed products `Z_l = X̄_l Ȳ_l`.
fn fit_term(products: &[CMat], cbar: &SpectralTensor) -> f64 {
    let v = products.len() as f64;
    compensated_sum(
        products
            .iter()
            .zip(cbar.slices())
            .map(|(z, c)| (z - c).norm_squared()),
    ) / (2.0 * v)
}

fn tv_term(c: &Tensor3, cfg: &SolverConfig) -> f64 {
    let mut total = 0.0;
    if cfg.alpha1 != 0.0 {
        total += cfg.alpha1 * apply_d1(c).l1_norm();
    }
    if cfg.alpha2 != 0.0 {
        total += cfg.alpha2 * apply_d2(c).l1_norm();
    }
    total
}

fn slice_products(x: &SpectralTensor, y: &SpectralTensor, cfg: &SolverConfig) -> Vec<CMat> {
    let v = x.v();
    let mut out: Vec<CMat> = (0..computed_slices(v, cfg)).map(|l| x.slice(l) * y.slice(l)).collect();
    mirror(&mut out, v);
    out
}

/// Spectral objective `f(X̄, Ȳ, C)`; `+∞` when `C_Ω ≠ G_Ω`.
pub fn spectral_objective(
    xbar: &SpectralTensor,
    ybar: &SpectralTensor,
    c: &Tensor3,
    cbar: &SpectralTensor,
    mask: &ObservationMask,
    cfg: &SolverConfig,
) -> f64 {
    if !mask.is_feasible(c) {
        return f64::INFINITY;
    }
    fit_term(&slice_products(xbar, ybar, cfg), cbar) + tv_term(c, cfg)
}

pub fn state_objective(state: &SolverState, mask: &ObservationMask, cfg: &SolverConfig) -> f64 {
    spectral_objective(&state.xbar, &state.ybar, &state.c, &state.cbar, mask, cfg)
}

/// `½‖X *_v Y − C‖² + α1‖D1 *_v C‖₁ + α2‖C *_v D2‖₁ + Φ(C)` for real
/// factors. Returns `+∞` when `C` is infeasible.
pub fn evaluate_objective(
    x: &Tensor3,
    y: &Tensor3,
    c: &Tensor3,
    mask: &ObservationMask,
    cfg: &SolverConfig,
) -> Result<f64> {
    if c.dims() != mask.dims() {
        return Err(mismatch("evaluate_objective", "C and mask dims differ"));
    }
    if !mask.is_feasible(c) {
        return Ok(f64::INFINITY);
    }
    let v = cfg.transform_len(c.tubes());
    let xy = variable_t_product(x, y, v)?;
    if xy.dims() != c.dims() {
        return Err(mismatch("evaluate_objective", "X *_v Y and C dims differ"));
    }
    Ok(0.5 * xy.sub(c).frobenius_norm_sq() + tv_term(c, cfg))
}

fn solve_and_project(
    r: &[CMat],
    state: &SolverState,
    mask: &ObservationMask,
    cfg: &SolverConfig,
    solve: impl Fn(&CMat) -> CMat,
) -> Result<(Tensor3, Vec<CMat>)> {
    let v = state.v();
    let mut slices: Vec<CMat> = r[..computed_slices(v, cfg)].iter().map(solve).collect();
    mirror(&mut slices, v);
    let spec = SpectralTensor::new(state.c.tubes(), slices)?;
    let mut c = state.transformer.inverse_with_tol(&spec, cfg.imag_tol)?;
    mask.project(&mut c);
    Ok((c, spec.into_slices()))
}

/// One C update: shrinkage for `Q1`, `Q2`, the diagonalised solve per
/// spectral slice, return to the real domain with `C_Ω = G_Ω` enforced, then
/// the multiplier steps. `state.xbar` and `state.ybar` must already hold the
/// new factors.
pub fn update_c(
    state: &SolverState,
    cfg: &SolverConfig,
    mask: &ObservationMask,
    diag_m: &DctDiagonalization,
    diag_n: &DctDiagonalization,
) -> Result<CUpdate> {
    let (m, n, _) = state.c.dims();
    if diag_m.size() != m || diag_n.size() != n {
        return Err(mismatch("update_c", "diagonalisation sizes do not match C"));
    }
    let tr = &state.transformer;
    let v = state.v();
    let products = slice_products(&state.xbar, &state.ybar, cfg);
    let rho3 = cfg.rho3;

    // base R without the TV terms: X̄Ȳ + ρ3 C̄^k
    let base: Vec<CMat> = products
        .iter()
        .zip(state.cbar.slices())
        .map(|(z, c)| z + c * Complex64::new(rho3, 0.0))
        .collect();

    let mut worst_res = 0.0f64;
    let (mut q1, mut q2) = (state.q1.clone(), state.q2.clone());
    let (mut s, mut t) = (state.s.clone(), state.t.clone());
    let mut multipliers_before = (s.clone(), t.clone());
    let candidate = if cfg.tv_disabled() {
        let (c, _) = solve_and_project(&base, state, mask, cfg, |r| r / Complex64::new(1.0 + rho3, 0.0))?;
        c
    } else {
        let (beta, mu) = (cfg.beta, cfg.mu);
        let mut c_cur = state.c.clone();
        for _ in 0..cfg.inner_iters {
            q1 = soft_threshold_tensor(&apply_d1(&c_cur).lin_comb(1.0, &s, -1.0 / beta), cfg.alpha1 / beta);
            q2 = soft_threshold_tensor(&apply_d2(&c_cur).lin_comb(1.0, &t, -1.0 / mu), cfg.alpha2 / mu);
            // D̄1 and D̄2 are the same real matrix in every slice, so the
            // adjoint difference terms are assembled before transforming.
            let w = apply_d1_adjoint(&q1.lin_comb(beta, &s, 1.0))
                .add(&apply_d2_adjoint(&q2.lin_comb(mu, &t, 1.0)));
            let wbar = tr.forward(&w)?;
            let r: Vec<CMat> = base.iter().zip(wbar.slices()).map(|(b, w)| b + w).collect();
            let (c_new, sol) = solve_and_project(&r, state, mask, cfg, |rl| {
                solve_c_slice(rl, diag_m, diag_n, beta, mu, rho3)
            })?;
            for (cl, rl) in sol.iter().zip(&r).take(computed_slices(v, cfg)) {
                worst_res = worst_res.max(sylvester_residual(cl, rl, beta, mu, rho3));
            }
            multipliers_before = (s.clone(), t.clone());
            s = s.add(&q1.sub(&apply_d1(&c_new)).scale(beta));
            t = t.add(&q2.sub(&apply_d2(&c_new)).scale(mu));
            c_cur = c_new;
        }
        c_cur
    };
    let cbar_cand = tr.forward(&candidate)?;

    let mut step = CStep::Augmented;
    let (mut c, mut cbar) = (candidate, cbar_cand);
    if cfg.monotone_safeguard && !cfg.tv_disabled() {
        let reference = fit_term(&products, &state.cbar) + tv_term(&state.c, cfg);
        let merit = |c: &Tensor3, cb: &SpectralTensor| {
            fit_term(&products, cb) + tv_term(c, cfg) + 0.5 * rho3 * c.sub(&state.c).frobenius_norm_sq()
        };
        if merit(&c, &cbar) > reference {
            let (smooth, _) = solve_and_project(&base, state, mask, cfg, |r| r / Complex64::new(1.0 + rho3, 0.0))?;
            let smooth_bar = tr.forward(&smooth)?;
            if merit(&smooth, &smooth_bar) <= reference {
                step = CStep::Smooth;
                c = smooth;
                cbar = smooth_bar;
            } else {
                step = CStep::Held;
                c = state.c.clone();
                cbar = state.cbar.clone();
            }
            let (s0, t0) = multipliers_before;
            s = s0.add(&q1.sub(&apply_d1(&c)).scale(cfg.beta));
            t = t0.add(&q2.sub(&apply_d2(&c)).scale(cfg.mu));
        }
    }

    Ok(CUpdate {
        c,
        cbar,
        q1,
        q2,
        s,
        t,
        max_sylvester_residual: worst_res,
        step,
    })
}

/// Per-iteration diagnostics.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SolveTrace {
    /// `f(u^0), f(u^1), …`.
    pub objective: Vec<f64>,
    /// `‖C^{k+1} − C^k‖² / ‖C^{k+1}‖²` per iteration.
    pub relative_change: Vec<f64>,
    /// `f(u^k) − f(u^{k+1}) − (ρ_min/2)‖u^{k+1} − u^k‖²`; nonnegative under
    /// sufficient decrease.
    pub h1_margin: Vec<f64>,
    pub x_residual: Vec<f64>,
    pub y_residual: Vec<f64>,
    pub sylvester_residual: Vec<f64>,
    /// Largest `|C − G|` over `Ω` after each iteration.
    pub feasibility: Vec<f64>,
    pub c_steps: Vec<CStep>,
    pub iterations: usize,
    pub converged: bool,
}

impl SolveTrace {
    pub fn min_h1_margin(&self) -> f64 {
        self.h1_margin.iter().cloned().fold(f64::INFINITY, f64::min)
    }
}

#[derive(Debug, Clone)]
pub struct SolveOutput {
    pub completed: Tensor3,
    pub xbar: SpectralTensor,
    pub ybar: SpectralTensor,
    pub trace: SolveTrace,
}

fn dump(state: &SolverState, cfg: &SolverConfig) -> String {
    format!(
        "state: iteration={} |Xbar|^2={:e} |Ybar|^2={:e} |C|^2={:e} |S|^2={:e} |T|^2={:e}\nconfig: {:?}",
        state.iteration,
        state.xbar.frobenius_norm_sq(),
        state.ybar.frobenius_norm_sq(),
        state.c.frobenius_norm_sq(),
        state.s.frobenius_norm_sq(),
        state.t.frobenius_norm_sq(),
        cfg
    )
}

fn spectral_distance_sq(a: &SpectralTensor, b: &SpectralTensor) -> f64 {
    compensated_sum(
        a.slices()
            .iter()
            .zip(b.slices())
            .map(|(x, y)| (x - y).norm_squared()),
    )
}

fn check_inputs(g: &Tensor3, mask: &ObservationMask) -> Result<()> {
    if g.dims() != mask.dims() {
        return Err(mismatch("solve", format!("G is {:?}, mask is {:?}", g.dims(), mask.dims())));
    }
    if mask.is_empty() {
        return Err(Error::InvalidMask("no observed entries".into()));
    }
    for (&idx, &val) in mask.indices().iter().zip(mask.values()) {
        if g.as_slice()[idx] != val {
            return Err(Error::InvalidMask("mask values disagree with G on Ω".into()));
        }
        if !(0.0..=1.0).contains(&val) {
            return Err(Error::InvalidMask(format!(
                "observed value {val} outside [0, 1]; normalise the data first"
            )));
        }
    }
    Ok(())
}

/// Runs the full method. Stops when the relative change of `C` drops to
/// `epsilon` or after `max_iter` iterations.
pub fn solve_vtctf_tv(g: &Tensor3, mask: &ObservationMask, cfg: &SolverConfig) -> Result<SolveOutput> {
    check_inputs(g, mask)?;
    let (m, n, _) = g.dims();
    let diag_m = DctDiagonalization::new(m);
    let diag_n = DctDiagonalization::new(n);
    let mut state = SolverState::initialize(mask, cfg)?;
    let v = state.v() as f64;
    let rho_min = cfg.rho_min();
    let mut trace = SolveTrace::default();
    let mut f_prev = state_objective(&state, mask, cfg);
    state.objective_trace.push(f_prev);
    trace.objective.push(f_prev);

    let abort = |state: &SolverState, reason: String| Error::SolverAbort {
        iteration: state.iteration,
        reason,
        dump: dump(state, cfg),
    };

    for _ in 0..cfg.max_iter {
        let xu = update_x(&state, cfg)?;
        let x_prev = std::mem::replace(&mut state.xbar, xu.factor);
        let yu = update_y(&state, cfg)?;
        let y_prev = std::mem::replace(&mut state.ybar, yu.factor);
        let cu = update_c(&state, cfg, mask, &diag_m, &diag_n)?;

        let dc = cu.c.sub(&state.c).frobenius_norm_sq();
        let dist_sq = (spectral_distance_sq(&state.xbar, &x_prev) + spectral_distance_sq(&state.ybar, &y_prev)) / v + dc;
        let c_norm = cu.c.frobenius_norm_sq();

        state.c = cu.c;
        state.cbar = cu.cbar;
        state.q1 = cu.q1;
        state.q2 = cu.q2;
        state.s = cu.s;
        state.t = cu.t;
        state.iteration += 1;

        if !state.c.is_finite() || state.xbar.frobenius_norm_sq().is_nan() || state.ybar.frobenius_norm_sq().is_nan() {
            return Err(abort(&state, "non-finite iterate".into()));
        }
        let f_next = state_objective(&state, mask, cfg);
        if !f_next.is_finite() {
            return Err(abort(&state, format!("objective became {f_next}")));
        }

        let rel = if c_norm > 0.0 { dc / c_norm } else if dc == 0.0 { 0.0 } else { f64::INFINITY };
        state.objective_trace.push(f_next);
        trace.objective.push(f_next);
        trace.h1_margin.push(f_prev - f_next - 0.5 * rho_min * dist_sq);
        trace.relative_change.push(rel);
        trace.x_residual.push(xu.max_residual);
        trace.y_residual.push(yu.max_residual);
        trace.sylvester_residual.push(cu.max_sylvester_residual);
        trace.feasibility.push(mask.max_violation(&state.c));
        trace.c_steps.push(cu.step);
        trace.iterations = state.iteration;
        f_prev = f_next;

        if rel <= cfg.epsilon {
            trace.converged = true;
            break;
        }
    }

    Ok(SolveOutput {
        completed: state.c,
        xbar: state.xbar,
        ybar: state.ybar,
        trace,
    })
}

/// The TV-free variant (`α1 = α2 = 0`).
pub fn solve_vtctf(g: &Tensor3, mask: &ObservationMask, cfg: &SolverConfig) -> Result<SolveOutput> {
    solve_vtctf_tv(g, mask, &cfg.clone().without_tv())
}
