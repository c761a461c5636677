//! The balancing property and the sufficient sampling conditions of the multilevel recovery
//! guarantee, evaluated with explicit constants.

use super::{band, check_levels, InfiniteMatrix};
use crate::crossgram::IndexRange;
use crate::error::{Error, Result};
use crate::CMat;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BalancingReport {
    /// `‖P_M A^* P_N A P_M − P_M‖_{∞→∞}`.
    pub lhs_weak: f64,
    /// `‖P_M^⊥ A^* P_N A P_M‖_{∞→∞}` over the tail window; a lower bound.
    pub lhs_strong: f64,
    /// `(1/8) / sqrt(log₂(4 √s K M))`.
    pub threshold_weak: f64,
    pub holds_weak: bool,
    pub holds_strong: bool,
}

/// Maximum absolute row sum.
fn inf_norm(a: &CMat) -> f64 {
    a.row_iter()
        .map(|r| r.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Weak and strong balancing checks for `N` samples, undersampling `K`, `M` columns and total
/// sparsity `s`. Columns `M+1..=M+tail` stand in for the infinite complement.
pub fn balancing_check(
    a: &dyn InfiniteMatrix,
    n: usize,
    k: f64,
    m: usize,
    s: usize,
    tail: usize,
) -> Result<BalancingReport> {
    if n == 0 || m == 0 || s == 0 || !(k >= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "balancing needs N, M, s ≥ 1 and K ≥ 1 (N={n}, M={m}, s={s}, K={k})"
        )));
    }
    let width = match a.extent() {
        Some((_, c)) => (m + tail).min(c.max(m)),
        None => m + tail,
    };
    let u = a.block(IndexRange::leading(n), IndexRange::leading(width))?;
    let g = u.ad_mul(&u.columns(0, m));
    let mut head = g.rows(0, m).into_owned();
    for i in 0..m {
        head[(i, i)] -= 1.0;
    }
    let lhs_weak = inf_norm(&head);
    let lhs_strong = if width > m {
        inf_norm(&g.rows(m, width - m).into_owned())
    } else {
        0.0
    };
    let log_term = (4.0 * (s as f64).sqrt() * k * m as f64).log2();
    let threshold_weak = if log_term > 0.0 {
        0.125 / log_term.sqrt()
    } else {
        f64::INFINITY
    };
    let holds_weak = lhs_weak <= threshold_weak;
    Ok(BalancingReport {
        lhs_weak,
        lhs_strong,
        threshold_weak,
        holds_weak,
        holds_strong: holds_weak && lhs_strong <= 0.125,
    })
}

/// Inputs for [`theorem_conditions`]; levels are 1-based bands as elsewhere.
#[derive(Clone, Debug)]
pub struct ConditionsInput {
    pub n_levels: Vec<usize>,
    pub counts: Vec<usize>,
    pub s: Vec<usize>,
    /// `μ_{N,M}(k, l)`, row `k`, column `l`.
    pub local_coherence: Vec<Vec<f64>>,
    /// Relative sparsities `S_k`.
    pub relative_sparsity: Vec<f64>,
    pub epsilon: f64,
    /// Constant standing in for every `≳`.
    pub constant: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LevelReport {
    /// `c (N_k − N_{k-1})/m_k (log ε⁻¹ + 1) (Σ_l μ(k,l) s_l) log N`; must be ≤ 1.
    pub coherence_lhs: f64,
    /// Worst-case `Σ_k ((N_k − N_{k-1})/m̂_k − 1) μ(k,l) s̃_k` with this level as `l`; must be ≤ 1.
    pub hat_lhs: f64,
    pub fully_sampled: bool,
    pub pass: bool,
    /// Smallest `m_k` meeting the coherence condition.
    pub min_samples: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConditionsReport {
    pub levels: Vec<LevelReport>,
    /// `K = max (N_k − N_{k-1}) / m_k`.
    pub undersampling: f64,
}

impl ConditionsReport {
    pub fn all_pass(&self) -> bool {
        self.levels.iter().all(|l| l.pass)
    }
}

/// Largest fraction of `Σ w_k s̃_k` over `0 ≤ s̃_k ≤ cap_k`, `Σ s̃_k ≤ total` (greedy knapsack).
fn worst_allocation(weights: &[f64], caps: &[f64], total: f64) -> f64 {
    let mut order: Vec<usize> = (0..weights.len()).collect();
    order.sort_by(|&i, &j| weights[j].total_cmp(&weights[i]));
    let mut left = total;
    let mut acc = 0.0;
    for i in order {
        if weights[i] <= 0.0 || left <= 0.0 {
            break;
        }
        let take = caps[i].min(left);
        acc += weights[i] * take;
        left -= take;
    }
    acc
}

/// Evaluate both sufficient conditions per level.
///
/// `m̂_k` is taken as large as the second condition allows, `m_k / (c (log ε⁻¹ + 1) log N)`,
/// which makes the `m̂` condition as easy as possible. A fully sampled level passes outright.
pub fn theorem_conditions(inp: &ConditionsInput) -> Result<ConditionsReport> {
    check_levels("sampling", &inp.n_levels)?;
    let r = inp.n_levels.len();
    let ok_len = inp.counts.len() == r
        && inp.s.len() == r
        && inp.relative_sparsity.len() == r
        && inp.local_coherence.len() == r
        && inp.local_coherence.iter().all(|row| row.len() == r);
    if !ok_len {
        return Err(Error::InvalidArgument(format!("every per-level input needs {r} entries")));
    }
    if !(inp.epsilon > 0.0 && inp.epsilon < 1.0) || !(inp.constant > 0.0) {
        return Err(Error::InvalidArgument("need 0 < ε < 1 and a positive constant".into()));
    }
    let widths: Vec<f64> = (1..=r).map(|k| band(&inp.n_levels, k).len() as f64).collect();
    if (0..r).any(|k| inp.counts[k] == 0 || inp.counts[k] as f64 > widths[k]) {
        return Err(Error::InvalidArgument("counts must lie in 1..=level width".into()));
    }
    let log_n = (inp.n_levels[r - 1] as f64).ln();
    let eps_term = (1.0 / inp.epsilon).ln() + 1.0;
    let c = inp.constant;
    let s_total: f64 = inp.s.iter().map(|&v| v as f64).sum();
    let m_hat: Vec<f64> = (0..r)
        .map(|k| inp.counts[k] as f64 / (c * eps_term * log_n))
        .collect();
    let levels = (0..r)
        .map(|k| {
            let mix: f64 = (0..r).map(|l| inp.local_coherence[k][l] * inp.s[l] as f64).sum();
            let base = c * eps_term * mix * log_n;
            let coherence_lhs = widths[k] / inp.counts[k] as f64 * base;
            let weights: Vec<f64> = (0..r)
                .map(|j| (widths[j] / m_hat[j] - 1.0).max(0.0) * inp.local_coherence[j][k])
                .collect();
            let hat_lhs = worst_allocation(&weights, &inp.relative_sparsity, s_total);
            let fully_sampled = inp.counts[k] as f64 == widths[k];
            let tol = 1e-12;
            LevelReport {
                coherence_lhs,
                hat_lhs,
                fully_sampled,
                pass: fully_sampled || (coherence_lhs <= 1.0 + tol && hat_lhs <= 1.0 + tol),
                min_samples: (widths[k] * base * (1.0 - tol)).ceil().max(1.0) as usize,
            }
        })
        .collect();
    Ok(ConditionsReport {
        levels,
        undersampling: (0..r)
            .map(|k| widths[k] / inp.counts[k] as f64)
            .fold(0.0, f64::max),
    })
}

/// Per-level sample counts `c (N_k − N_{k-1}) (log ε⁻¹ + 1) μ(A_k) s_k log N` for a
/// block-diagonal matrix.
pub fn block_diagonal_samples(
    n_levels: &[usize],
    block_coherence: &[f64],
    s: &[usize],
    epsilon: f64,
    constant: f64,
) -> Vec<f64> {
    let log_n = (*n_levels.last().unwrap() as f64).ln();
    let eps_term = (1.0 / epsilon).ln() + 1.0;
    (1..=n_levels.len())
        .map(|k| {
            constant
                * band(n_levels, k).len() as f64
                * eps_term
                * block_coherence[k - 1]
                * s[k - 1] as f64
                * log_n
        })
        .collect()
}

/// `δ √K (1 + L √s) + σ`, with `L = 1 + sqrt(log₂(6/ε)) / log₂(4 K M √s)`.
pub fn error_bound_shape(delta: f64, k: f64, s: usize, m: usize, epsilon: f64, sigma: f64) -> f64 {
    let sq = (s as f64).sqrt();
    let l = 1.0 + (6.0 / epsilon).log2().sqrt() / (4.0 * k * m as f64 * sq).log2();
    delta * k.sqrt() * (1.0 + l * sq) + sigma
}
