//! Multilevel random subsampling.

use super::{band, check_levels};
use crate::error::{Error, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// An `(N, m)`-multilevel sampling scheme realized from a seed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultilevelScheme {
    pub levels: Vec<usize>,
    pub counts: Vec<usize>,
    /// Sorted, 1-based.
    pub omega: Vec<usize>,
    pub seed: u64,
}

impl MultilevelScheme {
    /// `K = max_k (N_k − N_{k-1}) / m_k`.
    pub fn undersampling(&self) -> f64 {
        (1..=self.levels.len())
            .map(|k| band(&self.levels, k).len() as f64 / self.counts[k - 1] as f64)
            .fold(0.0, f64::max)
    }

    pub fn bandwidth(&self) -> usize {
        *self.levels.last().unwrap()
    }

    pub fn len(&self) -> usize {
        self.omega.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omega.is_empty()
    }
}

/// Draw `m_k` indices uniformly without replacement from each band `(N_{k-1}, N_k]`.
pub fn draw_scheme(levels: &[usize], counts: &[usize], seed: u64) -> Result<MultilevelScheme> {
    check_levels("sampling", levels)?;
    if counts.len() != levels.len() {
        return Err(Error::DimensionMismatch {
            expected: levels.len(),
            got: counts.len(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut omega = Vec::with_capacity(counts.iter().sum());
    for k in 1..=levels.len() {
        let b = band(levels, k);
        let m = counts[k - 1];
        if m == 0 || m > b.len() {
            return Err(Error::InvalidArgument(format!(
                "level {k}: count {m} must lie in 1..={}",
                b.len()
            )));
        }
        let mut pick: Vec<usize> = rand::seq::index::sample(&mut rng, b.len(), m)
            .into_iter()
            .map(|i| b.start + i)
            .collect();
        pick.sort_unstable();
        omega.extend(pick);
    }
    Ok(MultilevelScheme {
        levels: levels.to_vec(),
        counts: counts.to_vec(),
        omega,
        seed,
    })
}
