//! Finite sections of the cross-Gramian `A_{ij} = ⟨φ_j, ψ_i⟩` between a sampling
//! system `ψ` (rows) and a reconstruction system `φ` (columns).

pub mod bessel;
pub mod closed;
pub mod dump;
pub mod fast;

use crate::basis::{FunctionSystem, Grid, SystemKind};
use crate::error::{Error, Result};
use crate::linalg::{self, LinearOperator};
use crate::{CMat, CVec, C64};
use std::io::{Read, Write};

pub use fast::FourierHaarOperator;

/// 1-based inclusive index range.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct IndexRange {
    pub start: usize,
    pub end: usize,
}

impl IndexRange {
    pub fn new(start: usize, end: usize) -> Result<IndexRange> {
        if start == 0 || end < start {
            return Err(Error::InvalidArgument(format!("bad range {start}..={end}")));
        }
        Ok(IndexRange { start, end })
    }

    /// `1..=n`.
    pub fn leading(n: usize) -> IndexRange {
        assert!(n >= 1, "empty range");
        IndexRange { start: 1, end: n }
    }

    pub fn len(&self) -> usize {
        self.end - self.start + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains_range(&self, other: &IndexRange) -> bool {
        other.start >= self.start && other.end <= self.end
    }
}

/// Dense block of the cross-Gramian together with where it came from.
#[derive(Clone, Debug, PartialEq)]
pub struct SectionMatrix {
    pub entries: CMat,
    pub rows: IndexRange,
    pub cols: IndexRange,
    pub sampling: FunctionSystem,
    pub reconstruction: FunctionSystem,
}

/// Relative change below which quadrature refinement stops.
const QUAD_TOL: f64 = 1e-11;
const QUAD_ORDER: usize = 20;
const QUAD_MAX_DOUBLINGS: u32 = 7;

fn fill_rows<F>(nrows: usize, ncols: usize, row: F) -> CMat
where
    F: Fn(usize) -> Vec<C64> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    let rows: Vec<Vec<C64>> = {
        use rayon::prelude::*;
        (0..nrows).into_par_iter().map(&row).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let rows: Vec<Vec<C64>> = (0..nrows).map(&row).collect();
    CMat::from_fn(nrows, ncols, |i, j| rows[i][j])
}

/// Oscillation scale of the first `n` elements, in cycles over the domain.
fn oscillation(sys: &FunctionSystem, n: usize) -> usize {
    match sys.kind {
        SystemKind::Fourier => n / 2 + 1,
        SystemKind::Legendre => n / 2 + 1,
        _ => 1,
    }
}

/// `A = Ψ^* W Φ` on a composite Gauss grid with `2^level` panels.
fn quadrature_block_at(
    samp: &FunctionSystem,
    recon: &FunctionSystem,
    rows: IndexRange,
    cols: IndexRange,
    level: u32,
) -> Result<CMat> {
    let grid = Grid::dyadic(samp.domain, level, QUAD_ORDER);
    let psi = samp.eval_block(rows.start, rows.len(), &grid.nodes)?;
    let phi = recon.eval_block(cols.start, cols.len(), &grid.nodes)?;
    let g = grid.len();
    let psi_w = CMat::from_fn(g, rows.len(), |n, i| psi[i][n] * grid.weights[n]);
    let phi_m = CMat::from_fn(g, cols.len(), |n, j| phi[j][n]);
    Ok(psi_w.ad_mul(&phi_m))
}

/// Quadrature assembly, doubling the panel count until entries settle.
pub fn quadrature_section(
    samp: &FunctionSystem,
    recon: &FunctionSystem,
    rows: IndexRange,
    cols: IndexRange,
) -> Result<CMat> {
    if samp.domain != recon.domain {
        return Err(Error::InvalidArgument(
            "sampling and reconstruction systems must share a domain".into(),
        ));
    }
    let osc = oscillation(samp, rows.end).max(oscillation(recon, cols.end));
    let osc_level = (osc.next_power_of_two().trailing_zeros()).max(1);
    let bp = samp
        .breakpoint_level(rows.end)
        .max(recon.breakpoint_level(cols.end));
    let mut level = osc_level.max(bp).max(2);
    let mut prev = quadrature_block_at(samp, recon, rows, cols, level)?;
    let mut worst = (f64::INFINITY, 0, 0);
    for _ in 0..QUAD_MAX_DOUBLINGS {
        level += 1;
        let next = quadrature_block_at(samp, recon, rows, cols, level)?;
        worst = (0.0, 0, 0);
        for i in 0..next.nrows() {
            for j in 0..next.ncols() {
                let d = (next[(i, j)] - prev[(i, j)]).norm();
                if d > worst.0 {
                    worst = (d, i, j);
                }
            }
        }
        prev = next;
        if worst.0 < QUAD_TOL {
            return Ok(prev);
        }
    }
    Err(Error::QuadratureNotConverged {
        worst: worst.0,
        row: rows.start + worst.1,
        col: cols.start + worst.2,
    })
}

/// Assemble `A^{[rows, cols]}`.
///
/// Identical systems give the identity pattern; Fourier against Haar, periodic Daubechies or
/// Legendre uses exact transforms; everything else falls back to adaptive quadrature.
pub fn assemble_section(
    samp: &FunctionSystem,
    recon: &FunctionSystem,
    rows: IndexRange,
    cols: IndexRange,
) -> Result<SectionMatrix> {
    let entries = if closed::has_closed_form(samp, recon) {
        let (s, r) = (*samp, *recon);
        fill_rows(rows.len(), cols.len(), move |i| {
            closed::closed_row(&s, &r, rows.start + i, cols.start, cols.len())
        })
    } else {
        quadrature_section(samp, recon, rows, cols)?
    };
    Ok(SectionMatrix {
        entries,
        rows,
        cols,
        sampling: *samp,
        reconstruction: *recon,
    })
}

/// `σ_min` of a section viewed as a map on its columns.
pub fn min_singular_value(a: &SectionMatrix) -> f64 {
    linalg::sigma_min(&a.entries)
}

impl SectionMatrix {
    pub fn nrows(&self) -> usize {
        self.entries.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.entries.ncols()
    }

    /// Dense `A x` or `A^* x`.
    pub fn matvec(&self, x: &CVec, adjoint: bool) -> Result<CVec> {
        let expected = if adjoint { self.nrows() } else { self.ncols() };
        if x.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                got: x.len(),
            });
        }
        Ok(if adjoint {
            self.entries.ad_mul(x)
        } else {
            &self.entries * x
        })
    }

    /// Sub-block over ranges contained in this section.
    pub fn restrict(&self, rows: IndexRange, cols: IndexRange) -> Result<SectionMatrix> {
        if !self.rows.contains_range(&rows) || !self.cols.contains_range(&cols) {
            return Err(Error::InvalidArgument("sub-range outside section".into()));
        }
        let entries = self
            .entries
            .view(
                (rows.start - self.rows.start, cols.start - self.cols.start),
                (rows.len(), cols.len()),
            )
            .into_owned();
        Ok(SectionMatrix {
            entries,
            rows,
            cols,
            sampling: self.sampling,
            reconstruction: self.reconstruction,
        })
    }

    /// FFT-based operator when sampling is Fourier, reconstruction is Haar on the same domain,
    /// and the columns are `1..=2^J`.
    pub fn fast_operator(&self) -> Option<FourierHaarOperator> {
        let ok = self.sampling.kind == SystemKind::Fourier
            && self.reconstruction.kind == SystemKind::Haar
            && self.sampling.domain == self.reconstruction.domain
            && self.cols.start == 1
            && self.cols.end.is_power_of_two();
        ok.then(|| {
            FourierHaarOperator::new(
                &self.sampling,
                self.rows.start,
                self.rows.end,
                self.cols.end.trailing_zeros(),
            )
        })
    }

    /// `A x` through the fast path when available, dense otherwise.
    pub fn matvec_fast(&self, x: &CVec, adjoint: bool) -> Result<CVec> {
        match self.fast_operator() {
            Some(op) => {
                let expected = if adjoint { op.nrows() } else { op.ncols() };
                if x.len() != expected {
                    return Err(Error::DimensionMismatch {
                        expected,
                        got: x.len(),
                    });
                }
                Ok(if adjoint {
                    op.apply_adjoint(x)
                } else {
                    op.apply(x)
                })
            }
            None => self.matvec(x, adjoint),
        }
    }

    pub fn dump<W: Write>(&self, w: &mut W) -> Result<()> {
        dump::write_raw(w, &self.entries, self.rows.start, self.cols.start)
    }

    /// Read a dump; the system descriptors are not stored and must be supplied.
    pub fn load<R: Read>(
        r: &mut R,
        sampling: FunctionSystem,
        reconstruction: FunctionSystem,
    ) -> Result<SectionMatrix> {
        let raw = dump::read_raw(r)?;
        let (n, m) = raw.entries.shape();
        if n == 0 || m == 0 {
            return Err(Error::Format("empty section".into()));
        }
        Ok(SectionMatrix {
            rows: IndexRange::new(raw.row_start, raw.row_start + n - 1)?,
            cols: IndexRange::new(raw.col_start, raw.col_start + m - 1)?,
            entries: raw.entries,
            sampling,
            reconstruction,
        })
    }
}

impl LinearOperator for SectionMatrix {
    fn nrows(&self) -> usize {
        self.entries.nrows()
    }
    fn ncols(&self) -> usize {
        self.entries.ncols()
    }
    fn apply(&self, x: &CVec) -> CVec {
        &self.entries * x
    }
    fn apply_adjoint(&self, y: &CVec) -> CVec {
        self.entries.ad_mul(y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{inner_product, eval_element, Interval};

    fn unit() -> Interval {
        Interval::UNIT
    }

    #[test]
    fn identical_systems_give_identity() {
        let h = FunctionSystem::haar(unit());
        let a = assemble_section(&h, &h, IndexRange::leading(4), IndexRange::leading(4)).unwrap();
        assert_eq!(a.entries, CMat::identity(4, 4));
    }

    #[test]
    fn zero_frequency_against_mother_wavelet() {
        let a = assemble_section(
            &FunctionSystem::fourier(unit()),
            &FunctionSystem::haar(unit()),
            IndexRange::leading(1),
            IndexRange::new(2, 2).unwrap(),
        )
        .unwrap();
        assert_eq!(a.entries[(0, 0)].norm(), 0.0);
    }

    fn oracle(samp: &FunctionSystem, recon: &FunctionSystem, i: usize, j: usize, grid: &Grid) -> C64 {
        let f = eval_element(recon, j, grid).unwrap();
        inner_product(&f, samp, i, grid).unwrap()
    }

    #[test]
    fn closed_forms_match_quadrature() {
        let dom = Interval::new(-1.0, 1.0);
        let grid = Grid::dyadic(dom, 8, 24);
        let f = FunctionSystem::fourier(dom);
        for recon in [FunctionSystem::haar(dom), FunctionSystem::legendre(dom)] {
            let a = assemble_section(&f, &recon, IndexRange::leading(24), IndexRange::leading(16))
                .unwrap();
            for (i, j) in [(1, 1), (2, 5), (7, 3), (24, 16), (13, 9), (4, 12)] {
                let o = oracle(&f, &recon, i, j, &grid);
                assert!((a.entries[(i - 1, j - 1)] - o).norm() < 1e-10, "{recon} ({i},{j})");
            }
            let t = assemble_section(&recon, &f, IndexRange::leading(16), IndexRange::leading(24))
                .unwrap();
            assert!((t.entries.adjoint() - &a.entries).norm() < 1e-13);
        }
    }

    #[test]
    fn fourier_legendre_quadrature_path() {
        let dom = unit();
        let f = FunctionSystem::fourier(dom);
        let l = FunctionSystem::legendre(dom);
        let closed = assemble_section(&f, &l, IndexRange::leading(8), IndexRange::leading(8)).unwrap();
        let quad = quadrature_section(&f, &l, IndexRange::leading(8), IndexRange::leading(8)).unwrap();
        assert!(linalg::max_abs((closed.entries - quad).iter()) < 1e-9);
    }

    #[test]
    fn fast_path_agrees_with_dense() {
        let a = assemble_section(
            &FunctionSystem::fourier(unit()),
            &FunctionSystem::haar(unit()),
            IndexRange::leading(64),
            IndexRange::leading(64),
        )
        .unwrap();
        let x = CVec::from_fn(64, |i, _| C64::new((i as f64 * 0.7).sin(), (i as f64).cos()));
        let y = CVec::from_fn(64, |i, _| C64::new(1.0 / (1.0 + i as f64), 0.2));
        let fx = a.matvec_fast(&x, false).unwrap();
        let dx = a.matvec(&x, false).unwrap();
        assert!(linalg::max_abs((fx - dx).iter()) < 1e-10);
        let fy = a.matvec_fast(&y, true).unwrap();
        let dy = a.matvec(&y, true).unwrap();
        assert!(linalg::max_abs((fy - dy).iter()) < 1e-10);
    }

    #[test]
    fn dump_roundtrip() {
        let f = FunctionSystem::fourier(unit());
        let h = FunctionSystem::haar(unit());
        let a = assemble_section(&f, &h, IndexRange::new(3, 9).unwrap(), IndexRange::new(2, 5).unwrap())
            .unwrap();
        let mut buf = Vec::new();
        a.dump(&mut buf).unwrap();
        assert_eq!(&buf[..4], b"SGRM");
        assert_eq!(buf.len(), 4 + 16 + 7 * 4 * 16);
        let b = SectionMatrix::load(&mut buf.as_slice(), f, h).unwrap();
        assert_eq!(a, b);
        assert!(SectionMatrix::load(&mut &b"XXXX"[..], f, h).is_err());
    }

    #[test]
    fn matvec_checks_dimensions() {
        let h = FunctionSystem::haar(unit());
        let a = assemble_section(&h, &h, IndexRange::leading(3), IndexRange::leading(3)).unwrap();
        assert!(a.matvec(&CVec::zeros(2), false).is_err());
        let e = CVec::from_fn(3, |i, _| C64::new(i as f64, 0.0));
        assert_eq!(a.matvec(&e, false).unwrap(), e);
    }
}
