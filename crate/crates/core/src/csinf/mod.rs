//! Compressed sensing with infinite change-of-basis matrices: coherence functionals,
//! sparsity in levels, multilevel random subsampling, the balancing property and ℓ¹
//! recovery.

pub mod coherence;
pub mod l1;
pub mod recovery;
pub mod scheme;
pub mod sparsity;
pub mod theorem;

pub use coherence::{coherence, coherence_of, local_coherence, tail_coherence, LevelCol};
pub use l1::{l1_solve, l1_solve_dense, CsResult, L1Options, SolverStatus};
pub use recovery::{choose_truncation, flip_coefficients};
pub use scheme::{draw_scheme, MultilevelScheme};
pub use sparsity::{
    effective_sparsity, relative_sparsity, sigma_s_m, SparsityLevels, SparsityMode,
};
pub use theorem::{balancing_check, theorem_conditions, BalancingReport, ConditionsInput};

use crate::basis::FunctionSystem;
use crate::crossgram::{assemble_section, IndexRange};
use crate::error::Result;
use crate::{CMat, C64};

/// Access to arbitrary finite blocks of a (possibly infinite) matrix, 1-based.
pub trait InfiniteMatrix: Sync {
    fn block(&self, rows: IndexRange, cols: IndexRange) -> Result<CMat>;

    /// `(rows, cols)` beyond which every entry is zero, if the matrix is finite.
    fn extent(&self) -> Option<(usize, usize)> {
        None
    }
}

/// The cross-Gramian of a sampling and a reconstruction system.
#[derive(Clone, Copy, Debug)]
pub struct SystemPair {
    pub sampling: FunctionSystem,
    pub reconstruction: FunctionSystem,
}

impl SystemPair {
    pub fn new(sampling: FunctionSystem, reconstruction: FunctionSystem) -> SystemPair {
        SystemPair {
            sampling,
            reconstruction,
        }
    }
}

impl InfiniteMatrix for SystemPair {
    fn block(&self, rows: IndexRange, cols: IndexRange) -> Result<CMat> {
        Ok(assemble_section(&self.sampling, &self.reconstruction, rows, cols)?.entries)
    }
}

/// A finite matrix, extended by zeros.
#[derive(Clone, Debug)]
pub struct ExplicitMatrix(pub CMat);

impl InfiniteMatrix for ExplicitMatrix {
    fn block(&self, rows: IndexRange, cols: IndexRange) -> Result<CMat> {
        let a = &self.0;
        Ok(CMat::from_fn(rows.len(), cols.len(), |i, j| {
            let (r, c) = (rows.start - 1 + i, cols.start - 1 + j);
            if r < a.nrows() && c < a.ncols() {
                a[(r, c)]
            } else {
                C64::new(0.0, 0.0)
            }
        }))
    }

    fn extent(&self) -> Option<(usize, usize)> {
        Some(self.0.shape())
    }
}

/// Check that level boundaries are strictly increasing and positive.
pub(crate) fn check_levels(name: &str, levels: &[usize]) -> Result<()> {
    if levels.is_empty() || levels[0] == 0 || levels.windows(2).any(|w| w[1] <= w[0]) {
        return Err(crate::Error::InvalidArgument(format!(
            "{name} levels must be positive and strictly increasing, got {levels:?}"
        )));
    }
    Ok(())
}

/// `(N_{k-1}, N_k]` as an [`IndexRange`], `k` 1-based.
pub(crate) fn band(levels: &[usize], k: usize) -> IndexRange {
    let lo = if k == 1 { 0 } else { levels[k - 2] };
    IndexRange {
        start: lo + 1,
        end: levels[k - 1],
    }
}

#[cfg(test)]
pub(crate) mod testing {
    use crate::{CMat, C64};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    /// Haar-random unitary by QR of a complex Gaussian matrix.
    pub fn random_unitary(n: usize, seed: u64) -> CMat {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = CMat::from_fn(n, n, |_, _| {
            C64::new(
                StandardNormal.sample(&mut rng),
                StandardNormal.sample(&mut rng),
            )
        });
        g.qr().q()
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

    pub fn dft(n: usize) -> CMat {
        let s = 1.0 / (n as f64).sqrt();
        CMat::from_fn(n, n, |i, j| {
            C64::from_polar(s, -2.0 * std::f64::consts::PI * (i * j) as f64 / n as f64)
        })
    }

    pub fn kronecker(v: &CMat, w: &CMat) -> CMat {
        v.kronecker(w)
    }
}
