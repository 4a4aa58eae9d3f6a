//! Synthetic ground-truth tensors for regression runs and trend checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vtctf::{variable_t_product, Tensor3};

fn normalised(t: Tensor3) -> Tensor3 {
    let peak = t.max_abs();
    if peak == 0.0 {
        t
    } else {
        t.scale(1.0 / peak)
    }
}

/// `A *_v B` with `A`, `B` uniform on `[0, 1]`, scaled to peak 1.
pub fn low_rank(m: usize, n: usize, p: usize, q: usize, v: usize, seed: u64) -> Tensor3 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = Tensor3::random_uniform(m, q, p, 0.0, 1.0, &mut rng);
    let b = Tensor3::random_uniform(q, n, p, 0.0, 1.0, &mut rng);
    normalised(variable_t_product(&a, &b, v).expect("factor shapes agree"))
}

/// Video-like `A *_{2p-1} B` whose factor tubes decay smoothly along the
/// third mode, `u · exp(−k/τ)` with `τ ∈ [1.5, 6]`, scaled to peak 1.
pub fn smooth_video(m: usize, n: usize, p: usize, r: usize, seed: u64) -> Tensor3 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = |count: usize| -> Vec<(f64, f64)> {
        (0..count)
            .map(|_| (rng.random_range(1.5..6.0), rng.random_range(0.0..1.0)))
            .collect()
    };
    let fa = draw(m * r);
    let fb = draw(n * r);
    let a = Tensor3::from_fn(m, r, p, |i, s, k| {
        let (tau, u) = fa[i + s * m];
        u * (-(k as f64) / tau).exp()
    });
    let b = Tensor3::from_fn(r, n, p, |s, j, k| {
        let (tau, u) = fb[s + j * r];
        u * (-(k as f64) / tau).exp()
    });
    normalised(variable_t_product(&a, &b, 2 * p - 1).expect("factor shapes agree"))
}
