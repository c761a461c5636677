//! Coherence `μ(A) = max |a_ij|²` and its tail and local variants.
//!
//! Anything involving an infinite tail is a maximum over a finite probe window and therefore a
//! lower bound on the true supremum.

use super::{band, check_levels, InfiniteMatrix};
use crate::crossgram::{IndexRange, SectionMatrix};
use crate::error::{Error, Result};
use crate::CMat;

pub fn coherence_of(a: &CMat) -> f64 {
    a.iter().map(|z| z.norm_sqr()).fold(0.0, f64::max)
}

/// Maximum squared entry modulus of an assembled section.
pub fn coherence(a: &SectionMatrix) -> f64 {
    coherence_of(&a.entries)
}

const CHUNK: usize = 256;

/// Max of `|a_ij|²` over a rectangle, assembled in row chunks.
fn window_max(a: &dyn InfiniteMatrix, rows: IndexRange, cols: IndexRange) -> Result<f64> {
    let mut best = 0.0f64;
    let mut start = rows.start;
    while start <= rows.end {
        let end = (start + CHUNK - 1).min(rows.end);
        let blk = a.block(IndexRange { start, end }, cols)?;
        best = best.max(coherence_of(&blk));
        start = end + 1;
    }
    Ok(best)
}

/// `(μ(P_N^⊥ A), μ(A P_N^⊥))` over the window of indices `1..=N + probe_depth`.
pub fn tail_coherence(a: &dyn InfiniteMatrix, n: usize, probe_depth: usize) -> Result<(f64, f64)> {
    if probe_depth == 0 {
        return Err(Error::InvalidArgument("probe depth must be positive".into()));
    }
    let far = n + probe_depth;
    let (rmax, cmax) = a.extent().unwrap_or((far, far));
    let (rfar, cfar) = (far.min(rmax), far.min(cmax));
    let rows_tail = if n < rfar {
        window_max(
            a,
            IndexRange { start: n + 1, end: rfar },
            IndexRange { start: 1, end: cfar },
        )?
    } else {
        0.0
    };
    let cols_tail = if n < cfar {
        window_max(
            a,
            IndexRange { start: 1, end: rfar },
            IndexRange { start: n + 1, end: cfar },
        )?
    } else {
        0.0
    };
    Ok((rows_tail, cols_tail))
}

/// Column band for [`local_coherence`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LevelCol {
    /// `(M_{l-1}, M_l]`, 1-based.
    Level(usize),
    /// Everything beyond `M_{r-1}`.
    Tail,
}

/// `sqrt(μ(P^{N_{k-1}}_{N_k} A P^{M_{l-1}}_{M_l}) · μ(P^{N_{k-1}}_{N_k} A))`.
///
/// Rows of the band are scanned over columns `1..=probe_cols` (clipped to the matrix if finite).
pub fn local_coherence(
    a: &dyn InfiniteMatrix,
    n_levels: &[usize],
    m_levels: &[usize],
    k: usize,
    l: LevelCol,
    probe_cols: usize,
) -> Result<f64> {
    check_levels("sampling", n_levels)?;
    check_levels("sparsity", m_levels)?;
    let r = n_levels.len();
    if m_levels.len() != r {
        return Err(Error::DimensionMismatch {
            expected: r,
            got: m_levels.len(),
        });
    }
    if k == 0 || k > r {
        return Err(Error::InvalidArgument(format!("level {k} outside 1..={r}")));
    }
    let width = match a.extent() {
        Some((_, c)) => c,
        None => probe_cols.max(m_levels[r - 1]),
    };
    let rows = band(n_levels, k);
    let full = a.block(rows, IndexRange { start: 1, end: width })?;
    let cols = match l {
        LevelCol::Level(l) if l >= 1 && l <= r => band(m_levels, l),
        LevelCol::Level(l) => {
            return Err(Error::InvalidArgument(format!("level {l} outside 1..={r}")))
        }
        LevelCol::Tail => IndexRange {
            start: if r == 1 { 1 } else { m_levels[r - 2] + 1 },
            end: width,
        },
    };
    let sub = if cols.start > width {
        0.0
    } else {
        let end = cols.end.min(width);
        coherence_of(&full.columns(cols.start - 1, end - cols.start + 1).into_owned())
    };
    Ok((sub * coherence_of(&full)).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{FunctionSystem, Interval};
    use crate::csinf::testing::*;
    use crate::csinf::{ExplicitMatrix, SystemPair};

    #[test]
    fn identity_and_dft() {
        assert_eq!(coherence_of(&CMat::identity(7, 7)), 1.0);
        assert!((coherence_of(&dft(16)) - 1.0 / 16.0).abs() < 1e-14);
    }

    #[test]
    fn same_system_tails_are_one() {
        let f = FunctionSystem::fourier(Interval::UNIT);
        let (r, c) = tail_coherence(&SystemPair::new(f, f), 10, 40).unwrap();
        assert!((r - 1.0).abs() < 1e-14 && (c - 1.0).abs() < 1e-14);
    }

    #[test]
    fn block_diagonal_local() {
        let a = block_diagonal(&[random_unitary(4, 1), random_unitary(6, 2)]);
        let mu1 = coherence_of(&a.view((0, 0), (4, 4)).into_owned());
        let e = ExplicitMatrix(a);
        let lv = [4, 10];
        let off = local_coherence(&e, &lv, &lv, 1, LevelCol::Level(2), 0).unwrap();
        assert_eq!(off, 0.0);
        let on = local_coherence(&e, &lv, &lv, 1, LevelCol::Level(1), 0).unwrap();
        assert!((on - mu1).abs() < 1e-14);
    }

    #[test]
    fn kronecker_local() {
        let (r, n) = (3, 4);
        let w = random_unitary(n, 5);
        let a = kronecker(&dft(r), &w);
        let lv = [4, 8, 12];
        let e = ExplicitMatrix(a);
        for k in 1..=r {
            for l in 1..=r {
                let v = local_coherence(&e, &lv, &lv, k, LevelCol::Level(l), 0).unwrap();
                assert!((v - coherence_of(&w) / r as f64).abs() < 1e-12);
            }
        }
    }
}
