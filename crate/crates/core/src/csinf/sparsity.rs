//! Sparsity in levels: level structures, effective sparsity, best `(s, M)`-term error and the
//! relative sparsity `S_k`.

use super::{band, check_levels, InfiniteMatrix};
use crate::crossgram::IndexRange;
use crate::error::{Error, Result};
use crate::{CMat, CVec, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Level boundaries `M_1 < … < M_r` and per-level sparsities `s_k ≤ M_k − M_{k-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparsityLevels {
    pub levels: Vec<usize>,
    pub s: Vec<usize>,
}

impl SparsityLevels {
    pub fn new(levels: Vec<usize>, s: Vec<usize>) -> Result<SparsityLevels> {
        check_levels("sparsity", &levels)?;
        if s.len() != levels.len() {
            return Err(Error::DimensionMismatch {
                expected: levels.len(),
                got: s.len(),
            });
        }
        for k in 1..=levels.len() {
            if s[k - 1] > band(&levels, k).len() {
                return Err(Error::InvalidArgument(format!(
                    "s_{k} = {} exceeds level width {}",
                    s[k - 1],
                    band(&levels, k).len()
                )));
            }
        }
        Ok(SparsityLevels { levels, s })
    }

    pub fn r(&self) -> usize {
        self.levels.len()
    }

    pub fn total(&self) -> usize {
        self.s.iter().sum()
    }

    /// `(M_{k-1}, M_k]`, `k` 1-based.
    pub fn band(&self, k: usize) -> IndexRange {
        band(&self.levels, k)
    }

    pub fn extent(&self) -> usize {
        *self.levels.last().unwrap()
    }

    /// The standing assumption `s ≥ 3` of the recovery guarantees.
    pub fn check_theorem_total(&self) -> Result<()> {
        if self.total() < 3 {
            return Err(Error::InvalidArgument(format!(
                "total sparsity {} is below 3",
                self.total()
            )));
        }
        Ok(())
    }
}

/// Indices of a slice sorted by decreasing magnitude, ties to the lower index.
fn magnitude_order(x: &[C64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..x.len()).collect();
    idx.sort_by(|&i, &j| x[j].norm().total_cmp(&x[i].norm()));
    idx
}

/// Per level, the fewest largest entries whose ℓ² norm reaches `eps` times the level norm.
pub fn effective_sparsity(beta: &[C64], levels: &[usize], eps: f64) -> Result<Vec<usize>> {
    check_levels("sparsity", levels)?;
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::InvalidArgument(format!("eps must lie in (0, 1], got {eps}")));
    }
    let top = *levels.last().unwrap();
    if beta.len() < top {
        return Err(Error::DimensionMismatch {
            expected: top,
            got: beta.len(),
        });
    }
    let mut out = Vec::with_capacity(levels.len());
    for k in 1..=levels.len() {
        let b = band(levels, k);
        let seg = &beta[b.start - 1..b.end];
        let total: f64 = seg.iter().map(|z| z.norm_sqr()).sum();
        if total == 0.0 {
            out.push(0);
            continue;
        }
        // Relative slack so an exact equality is not lost to rounding in the running sum.
        let target = eps * eps * total * (1.0 - 1e-12);
        let mut acc = 0.0;
        let mut count = seg.len();
        for (n, &i) in magnitude_order(seg).iter().enumerate() {
            acc += seg[i].norm_sqr();
            if acc >= target {
                count = n + 1;
                break;
            }
        }
        out.push(count);
    }
    Ok(out)
}

/// `σ_{s,M}(β)`: ℓ¹ distance to the nearest `(s, M)`-sparse vector.
///
/// Entries past `M_r` count in full.
pub fn sigma_s_m(beta: &[C64], sp: &SparsityLevels) -> f64 {
    let mut dist = 0.0;
    for k in 1..=sp.r() {
        let b = sp.band(k);
        if b.start > beta.len() {
            break;
        }
        let seg = &beta[b.start - 1..b.end.min(beta.len())];
        let order = magnitude_order(seg);
        dist += order.iter().skip(sp.s[k - 1]).map(|&i| seg[i].norm()).sum::<f64>();
    }
    dist + beta.iter().skip(sp.extent()).map(|z| z.norm()).sum::<f64>()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SparsityMode {
    /// Enumerate supports; maximize over unimodular vectors on each.
    Exact,
    /// `min(s, (Σ over levels of the s_l largest column norms)²)`.
    Bound,
}

/// Limit on the number of support patterns in exact mode.
pub const MAX_SUPPORT_PATTERNS: f64 = 1e6;

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `S_k = max ‖P^{N_{k-1}}_{N_k} A η‖²` over `‖η‖_∞ ≤ 1` with exactly `s_l` nonzeros in level `l`.
pub fn relative_sparsity(
    a: &dyn InfiniteMatrix,
    n_levels: &[usize],
    sp: &SparsityLevels,
    k: usize,
    mode: SparsityMode,
) -> Result<f64> {
    check_levels("sampling", n_levels)?;
    if k == 0 || k > n_levels.len() {
        return Err(Error::InvalidArgument(format!(
            "level {k} outside 1..={}",
            n_levels.len()
        )));
    }
    let rows = band(n_levels, k);
    let b = a.block(
        rows,
        IndexRange {
            start: 1,
            end: sp.extent(),
        },
    )?;
    match mode {
        SparsityMode::Bound => Ok(bound_mode(&b, sp)),
        SparsityMode::Exact => {
            let patterns: f64 = (1..=sp.r())
                .map(|l| binomial(sp.band(l).len(), sp.s[l - 1]))
                .product();
            if patterns > MAX_SUPPORT_PATTERNS {
                return Err(Error::Refused(format!(
                    "{patterns:.3e} support patterns exceed the exact-mode limit"
                )));
            }
            Ok(exact_mode(&b, sp))
        }
    }
}

fn bound_mode(b: &CMat, sp: &SparsityLevels) -> f64 {
    let mut sum = 0.0;
    for l in 1..=sp.r() {
        let band = sp.band(l);
        let mut norms: Vec<f64> = (band.start - 1..band.end).map(|j| b.column(j).norm()).collect();
        norms.sort_by(|x, y| y.total_cmp(x));
        sum += norms.iter().take(sp.s[l - 1]).sum::<f64>();
    }
    (sum * sum).min(sp.total() as f64)
}

/// Advance `c` to the next `k`-combination of `0..n` in lexicographic order.
fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    for i in (0..k).rev() {
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn exact_mode(b: &CMat, sp: &SparsityLevels) -> f64 {
    let r = sp.r();
    let mut combos: Vec<Vec<usize>> = (0..r).map(|l| (0..sp.s[l]).collect()).collect();
    let mut best = 0.0f64;
    loop {
        let cols: Vec<usize> = (0..r)
            .flat_map(|l| {
                let off = sp.band(l + 1).start - 1;
                combos[l].iter().map(move |&c| off + c)
            })
            .collect();
        if !cols.is_empty() {
            let sub = b.select_columns(&cols);
            best = best.max(max_unimodular(&sub.ad_mul(&sub)));
        }
        // Odometer over the per-level combinations.
        let mut l = 0;
        loop {
            if l == r {
                return best;
            }
            let width = sp.band(l + 1).len();
            if next_combination(&mut combos[l], width) {
                break;
            }
            combos[l] = (0..sp.s[l]).collect();
            l += 1;
        }
    }
}

fn quad(g: &CMat, x: &CVec) -> f64 {
    x.dotc(&(g * x)).re
}

fn phase(z: C64, fallback: C64) -> C64 {
    let n = z.norm();
    if n > 0.0 {
        z / n
    } else {
        fallback
    }
}

/// Local maximum of `η^* G η` over unimodular `η` by the fixed point `η ← phase(G η)`, which
/// never decreases the objective for positive semidefinite `G`.
fn ascend(g: &CMat, mut x: CVec) -> f64 {
    let mut val = quad(g, &x);
    for _ in 0..1000 {
        let gx = g * &x;
        let next = CVec::from_fn(x.len(), |i, _| phase(gx[i], x[i]));
        let v = quad(g, &next);
        x = next;
        if v <= val * (1.0 + 1e-15) {
            return val.max(v);
        }
        val = v;
    }
    val
}

/// Maximum of `η^* G η` over unimodular `η`, multi-start.
fn max_unimodular(g: &CMat) -> f64 {
    let n = g.nrows();
    let one = C64::new(1.0, 0.0);
    let mut best = ascend(g, CVec::from_element(n, one));
    let eig = g.clone().symmetric_eigen();
    let top = eig.eigenvalues.imax();
    let v = eig.eigenvectors.column(top);
    best = best.max(ascend(g, CVec::from_fn(n, |i, _| phase(v[i], one))));
    if n <= 10 {
        for mask in 0..(1u32 << (n - 1)) {
            let x = CVec::from_fn(n, |i, _| if i > 0 && mask >> (i - 1) & 1 == 1 { -one } else { one });
            best = best.max(ascend(g, x));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..8 {
        let x = CVec::from_fn(n, |_, _| {
            C64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU))
        });
        best = best.max(ascend(g, x));
    }
    best
}
