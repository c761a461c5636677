//! Brute-force oracles and matrix builders shared by the integration tests.
#![allow(dead_code)]

use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use sgs_core::{CMat, C64};

pub fn c(re: f64) -> C64 {
    Complex::new(re, 0.0)
}

pub fn random_unitary(n: usize, seed: u64) -> CMat {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = CMat::from_fn(n, n, |_, _| {
        C64::new(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng))
    });
    g.qr().q()
}

pub fn dft(n: usize) -> CMat {
    let s = 1.0 / (n as f64).sqrt();
    CMat::from_fn(n, n, |i, j| {
        C64::from_polar(s, -2.0 * std::f64::consts::PI * (i * j) as f64 / n as f64)
    })
}

pub fn block_diagonal(blocks: &[CMat]) -> CMat {
    let n: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut a = CMat::zeros(n, n);
    let mut off = 0;
    for b in blocks {
        a.view_mut((off, off), b.shape()).copy_from(b);
        off += b.nrows();
    }
    a
}

pub fn permutation(pi: &[usize]) -> CMat {
    let r = pi.len();
    CMat::from_fn(r, r, |k, l| c(if l == pi[k] { 1.0 } else { 0.0 }))
}

/// All subsets of `0..n` as bitmasks, filtered by a predicate on the mask.
fn masks(n: usize, keep: impl Fn(u32) -> bool) -> Vec<u32> {
    (0u32..(1 << n)).filter(|&m| keep(m)).collect()
}

fn quad(g: &CMat, x: &[C64]) -> f64 {
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..x.len() {
        for j in 0..x.len() {
            acc += x[i].conj() * g[(i, j)] * x[j];
        }
    }
    acc.re
}

/// Global maximum of `η^* G η` over unimodular `η`: a phase grid with the first entry fixed,
/// followed by coordinate-wise exact maximization from the best grid points.
pub fn dense_unimodular_max(g: &CMat, grid: usize) -> f64 {
    let n = g.nrows();
    if n == 0 {
        return 0.0;
    }
    let free = n - 1;
    let total = grid.pow(free as u32);
    let mut scored: Vec<(f64, Vec<C64>)> = Vec::new();
    for idx in 0..total {
        let mut x = vec![c(1.0); n];
        let mut t = idx;
        for xi in x.iter_mut().skip(1) {
            let a = (t % grid) as f64 * std::f64::consts::TAU / grid as f64;
            *xi = C64::from_polar(1.0, a);
            t /= grid;
        }
        let v = quad(g, &x);
        scored.push((v, x));
    }
    scored.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut best = scored[0].0;
    for (_, mut x) in scored.into_iter().take(4) {
        for _ in 0..500 {
            for i in 0..n {
                let mut s = C64::new(0.0, 0.0);
                for j in 0..n {
                    if j != i {
                        s += g[(i, j)] * x[j];
                    }
                }
                if s.norm() > 0.0 {
                    x[i] = s / s.norm();
                }
            }
        }
        best = best.max(quad(g, &x));
    }
    best
}

/// `S_k` by exhaustive support enumeration and dense maximization on each support.
pub fn brute_relative_sparsity(
    a: &CMat,
    n_levels: &[usize],
    m_levels: &[usize],
    s: &[usize],
    k: usize,
    grid: usize,
) -> f64 {
    let lo = if k == 1 { 0 } else { n_levels[k - 2] };
    let rows = a.rows(lo, n_levels[k - 1] - lo).into_owned();
    let width = *m_levels.last().unwrap();
    let level_of = |j: usize| m_levels.iter().position(|&m| j < m).unwrap();
    let supports = masks(width, |mask| {
        (0..m_levels.len()).all(|l| {
            (0..width).filter(|&j| mask >> j & 1 == 1 && level_of(j) == l).count() == s[l]
        })
    });
    let mut best = 0.0f64;
    for mask in supports {
        let cols: Vec<usize> = (0..width).filter(|&j| mask >> j & 1 == 1).collect();
        let sub = rows.select_columns(&cols);
        best = best.max(dense_unimodular_max(&sub.ad_mul(&sub), grid));
    }
    best
}

/// `σ_{s,M}` by trying every kept subset per level.
pub fn brute_sigma(beta: &[C64], m_levels: &[usize], s: &[usize]) -> f64 {
    let mut total = 0.0;
    let mut lo = 0;
    for (l, &hi) in m_levels.iter().enumerate() {
        let seg = &beta[lo..hi];
        let w = seg.len();
        let best = masks(w, |m| m.count_ones() as usize == s[l])
            .into_iter()
            .map(|m| (0..w).filter(|&j| m >> j & 1 == 0).map(|j| seg[j].norm()).sum::<f64>())
            .fold(f64::INFINITY, f64::min);
        total += best;
        lo = hi;
    }
    total + beta[lo..].iter().map(|z| z.norm()).sum::<f64>()
}

/// Least-squares slope of `y` against `x`.
pub fn slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}
