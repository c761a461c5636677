//! Truncation selection, coefficient flipping and the recovery trials built on them.

use super::l1::{l1_solve_dense, CsResult, L1Options, SolverStatus};
use super::sparsity::SparsityLevels;
use super::InfiniteMatrix;
use crate::crossgram::fast::haar_synthesis_adjoint;
use crate::crossgram::IndexRange;
use crate::error::{Error, Result};
use crate::{CMat, CVec, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// Largest truncation [`choose_truncation`] will try.
pub const TRUNCATION_CAP: usize = 1 << 16;

/// Rows `omega` (sorted, 1-based) and columns `1..=k`, assembled run by run.
pub fn sampled_rows(a: &dyn InfiniteMatrix, omega: &[usize], k: usize) -> Result<CMat> {
    let cols = IndexRange::leading(k);
    let mut out = CMat::zeros(omega.len(), k);
    let mut i = 0;
    while i < omega.len() {
        let mut j = i;
        while j + 1 < omega.len() && omega[j + 1] == omega[j] + 1 {
            j += 1;
        }
        let blk = a.block(IndexRange::new(omega[i], omega[j])?, cols)?;
        out.rows_mut(i, j - i + 1).copy_from(&blk);
        i = j + 1;
    }
    Ok(out)
}

fn pad(x: &CVec, len: usize) -> CVec {
    CVec::from_fn(len, |i, _| if i < x.len() { x[i] } else { C64::new(0.0, 0.0) })
}

/// Double `K` from `base_k` until consecutive ℓ¹ solutions differ by at most
/// `tol · (1 + ‖ξ_K‖₁)` in ℓ¹, and return the smaller `K` of that pair.
pub fn choose_truncation(
    a: &dyn InfiniteMatrix,
    omega: &[usize],
    y: &CVec,
    delta: f64,
    base_k: usize,
    tol: f64,
) -> Result<usize> {
    if base_k == 0 {
        return Err(Error::InvalidArgument("base truncation must be positive".into()));
    }
    let opts = L1Options::default();
    let mut k = base_k;
    let mut prev = l1_solve_dense(&sampled_rows(a, omega, k)?, y, delta, &opts)?;
    loop {
        let k2 = 2 * k;
        if k2 > TRUNCATION_CAP {
            return Err(Error::TruncationCap { cap: TRUNCATION_CAP });
        }
        let next = l1_solve_dense(&sampled_rows(a, omega, k2)?, y, delta, &opts)?;
        let diff: f64 = (&next.coeffs - pad(&prev.coeffs, k2)).iter().map(|z| z.norm()).sum();
        log::info!("truncation {k} -> {k2}: ℓ¹ change {diff:.3e}");
        if diff <= tol * (1.0 + prev.objective) {
            return Ok(k);
        }
        k = k2;
        prev = next;
    }
}

/// Reverse entries `1..=bandwidth`; the rest are unchanged.
pub fn flip_coefficients(beta: &CVec, bandwidth: usize) -> CVec {
    let b = bandwidth.min(beta.len());
    CVec::from_fn(beta.len(), |i, _| if i < b { beta[b - 1 - i] } else { beta[i] })
}

/// A vector with exactly `s_l` nonzeros per level at uniformly drawn positions, each a random
/// phase times a magnitude in `[1, 2)`.
pub fn random_sparse_vector(sp: &SparsityLevels, len: usize, seed: u64) -> Result<CVec> {
    if len < sp.extent() {
        return Err(Error::DimensionMismatch {
            expected: sp.extent(),
            got: len,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut beta = CVec::zeros(len);
    for l in 1..=sp.r() {
        let b = sp.band(l);
        for i in rand::seq::index::sample(&mut rng, b.len(), sp.s[l - 1]) {
            let mag = 1.0 + rng.random::<f64>();
            let ph = rng.random_range(0.0..std::f64::consts::TAU);
            beta[b.start - 1 + i] = C64::from_polar(mag, ph);
        }
    }
    Ok(beta)
}

/// Complex Gaussian vector of norm exactly `delta`.
pub fn noise_vector(len: usize, delta: f64, seed: u64) -> CVec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let z = CVec::from_fn(len, |_, _| {
        C64::new(
            StandardNormal.sample(&mut rng),
            StandardNormal.sample(&mut rng),
        )
    });
    let n = z.norm();
    if n == 0.0 || delta == 0.0 {
        CVec::zeros(len)
    } else {
        z * C64::new(delta / n, 0.0)
    }
}

/// One solve against a known ground truth.
#[derive(Clone, Debug)]
pub struct RecoveryTrial {
    pub err_l2: f64,
    pub err_l1: f64,
    pub feasibility_gap: f64,
    pub iterations: usize,
    pub status: SolverStatus,
}

impl RecoveryTrial {
    fn new(xi: &CVec, beta: &CVec, res: &CsResult) -> RecoveryTrial {
        let d = xi - beta;
        RecoveryTrial {
            err_l2: d.norm(),
            err_l1: d.iter().map(|z| z.norm()).sum(),
            feasibility_gap: res.feasibility_gap,
            iterations: res.iterations,
            status: res.status,
        }
    }
}

/// Measure `β` through the rows `a_omega` (plus noise of norm `δ`) and solve.
pub fn recovery_trial(a_omega: &CMat, beta: &CVec, delta: f64, noise_seed: u64) -> Result<RecoveryTrial> {
    let y = a_omega * beta + noise_vector(a_omega.nrows(), delta, noise_seed);
    let res = l1_solve_dense(a_omega, &y, delta, &L1Options::default())?;
    Ok(RecoveryTrial::new(&res.coeffs, beta, &res))
}

/// Direct solve and flip→solve→flip on the same rows; errors are against `β` in both cases.
pub fn flip_trial(a_omega: &CMat, beta: &CVec) -> Result<(RecoveryTrial, RecoveryTrial)> {
    let k = beta.len();
    let direct = recovery_trial(a_omega, beta, 0.0, 0)?;
    let flipped = flip_coefficients(beta, k);
    let y = a_omega * &flipped;
    let res = l1_solve_dense(a_omega, &y, 0.0, &L1Options::default())?;
    let back = flip_coefficients(&res.coeffs, k);
    Ok((direct, RecoveryTrial::new(&back, beta, &res)))
}

/// Haar coefficients on `[0, 1]` of a function given by its cell averages on `2^J` cells.
pub fn haar_coefficients_from_averages(averages: &[f64]) -> CVec {
    let n = averages.len();
    let cells: Vec<C64> = averages.iter().map(|&v| C64::new(v, 0.0)).collect();
    let c = haar_synthesis_adjoint(&cells);
    CVec::from_iterator(n, c.into_iter().map(|z| z / n as f64))
}

/// Antiderivative of the piecewise-smooth test signal on `[0, 1]`:
/// `1 + t` on `[0, 0.3)`, `cos 4πt` on `[0.3, 0.7)`, `(1 − t)²` on `[0.7, 1]`.
fn test_signal_integral(t: f64) -> f64 {
    use std::f64::consts::PI;
    let p1 = |t: f64| t + t * t / 2.0;
    let p2 = |t: f64| (4.0 * PI * t).sin() / (4.0 * PI);
    let p3 = |t: f64| -(1.0 - t).powi(3) / 3.0;
    if t < 0.3 {
        p1(t)
    } else if t < 0.7 {
        p1(0.3) + p2(t) - p2(0.3)
    } else {
        p1(0.3) + p2(0.7) - p2(0.3) + p3(t) - p3(0.7)
    }
}

/// Exact Haar coefficients `1..=2^level` of the piecewise-smooth test signal.
pub fn test_signal_haar(level: u32) -> CVec {
    let n = 1usize << level;
    let h = 1.0 / n as f64;
    let avg: Vec<f64> = (0..n)
        .map(|i| (test_signal_integral((i + 1) as f64 * h) - test_signal_integral(i as f64 * h)) / h)
        .collect();
    haar_coefficients_from_averages(&avg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{analyze, FunctionSystem, Grid, Interval};
    use crate::csinf::testing::*;
    use crate::csinf::ExplicitMatrix;

    #[test]
    fn flip_examples() {
        let pal = CVec::from_vec(vec![1.0, 2.0, 3.0, 2.0, 1.0].into_iter().map(|x| C64::new(x, 0.0)).collect());
        assert_eq!(flip_coefficients(&pal, 5), pal);
        let mut e1 = CVec::zeros(8);
        e1[0] = C64::new(1.0, 0.0);
        let f = flip_coefficients(&e1, 6);
        assert_eq!(f[5], C64::new(1.0, 0.0));
        assert_eq!(flip_coefficients(&f, 6), e1);
    }

    #[test]
    fn test_signal_matches_quadrature() {
        let beta = test_signal_haar(6);
        let haar = FunctionSystem::haar(Interval::UNIT);
        let f = |t: f64| {
            if t < 0.3 {
                1.0 + t
            } else if t < 0.7 {
                (4.0 * std::f64::consts::PI * t).cos()
            } else {
                (1.0 - t) * (1.0 - t)
            }
        };
        let grid = Grid::composite(Interval::UNIT, 6400, 8);
        let vals: Vec<C64> = grid.nodes.iter().map(|&t| C64::new(f(t), 0.0)).collect();
        let q = analyze(&vals, &haar, 1, 64, &grid).unwrap();
        assert!((&q - &beta).norm() < 1e-9, "{}", (&q - &beta).norm());
    }

    #[test]
    fn block_diagonal_truncation_is_base() {
        let a = block_diagonal(&[random_unitary(8, 1), random_unitary(8, 2)]);
        let e = ExplicitMatrix(a);
        let omega: Vec<usize> = (1..=16).collect();
        let mut beta = CVec::zeros(8);
        beta[2] = C64::new(1.0, 0.0);
        let y = sampled_rows(&e, &omega, 8).unwrap() * &beta;
        assert_eq!(choose_truncation(&e, &omega, &y, 0.0, 8, 1e-6).unwrap(), 8);
    }

    #[test]
    fn sparse_vector_shape() {
        let sp = SparsityLevels::new(vec![2, 8, 16], vec![1, 3, 2]).unwrap();
        let b = random_sparse_vector(&sp, 20, 1).unwrap();
        let nz = |r: std::ops::Range<usize>| r.filter(|&i| b[i].norm() > 0.0).count();
        assert_eq!((nz(0..2), nz(2..8), nz(8..16), nz(16..20)), (1, 3, 2, 0));
    }
}
