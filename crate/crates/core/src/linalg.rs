//! Dense linear algebra helpers on top of nalgebra.

use crate::error::{Error, Result};
use crate::{CMat, CVec, C64};
use nalgebra::DMatrix;

/// Anything that can multiply a vector and its adjoint.
pub trait LinearOperator {
    fn nrows(&self) -> usize;
    fn ncols(&self) -> usize;
    fn apply(&self, x: &CVec) -> CVec;
    fn apply_adjoint(&self, y: &CVec) -> CVec;
}

impl LinearOperator for CMat {
    fn nrows(&self) -> usize {
        self.nrows()
    }
    fn ncols(&self) -> usize {
        self.ncols()
    }
    fn apply(&self, x: &CVec) -> CVec {
        self * x
    }
    fn apply_adjoint(&self, y: &CVec) -> CVec {
        self.ad_mul(y)
    }
}

/// Singular values in decreasing order.
pub fn singular_values(a: &CMat) -> Vec<f64> {
    if a.nrows() == 0 || a.ncols() == 0 {
        return Vec::new();
    }
    if a.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        // the iterative SVD does not terminate on non-finite input
        return vec![f64::NAN; a.nrows().min(a.ncols())];
    }
    let mut s: Vec<f64> = a.clone().singular_values().iter().copied().collect();
    s.sort_by(|x, y| y.total_cmp(x));
    s
}

/// Smallest singular value of `a` viewed as a map on its column space.
/// Wide matrices have a kernel, so the answer is 0 there.
pub fn sigma_min(a: &CMat) -> f64 {
    if a.nrows() < a.ncols() {
        return 0.0;
    }
    singular_values(a).last().copied().unwrap_or(0.0)
}

pub fn sigma_max(a: &CMat) -> f64 {
    singular_values(a).first().copied().unwrap_or(0.0)
}

/// Least squares through Householder QR. Needs `rows >= cols` and full column rank.
pub fn lstsq_qr(a: &CMat, b: &CVec) -> Result<CVec> {
    if a.nrows() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.nrows(),
            got: b.len(),
        });
    }
    if a.nrows() < a.ncols() {
        return Err(Error::InvalidArgument(format!(
            "least squares needs rows >= cols, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    let qr = a.clone().qr();
    let qtb = qr.q().ad_mul(b);
    let r = qr.r();
    r.solve_upper_triangular(&qtb).ok_or(Error::Singular {
        condition: f64::INFINITY,
    })
}

/// Minimum-norm least squares; singular values below `rcond * sigma_max` are dropped.
pub fn pinv_solve(a: &CMat, b: &CVec, rcond: f64) -> Result<CVec> {
    if a.nrows() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.nrows(),
            got: b.len(),
        });
    }
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let u = svd.u.as_ref().expect("u requested");
    let vt = svd.v_t.as_ref().expect("v_t requested");
    let utb = u.ad_mul(b);
    let mut y = CVec::zeros(svd.singular_values.len());
    for (i, &s) in svd.singular_values.iter().enumerate() {
        if s > rcond * smax && s > 0.0 {
            y[i] = utb[i] / s;
        }
    }
    Ok(vt.ad_mul(&y))
}

/// Moore–Penrose pseudo-inverse with relative cutoff.
pub fn pinv(a: &CMat, rcond: f64) -> CMat {
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let u = svd.u.as_ref().expect("u requested");
    let vt = svd.v_t.as_ref().expect("v_t requested");
    let k = svd.singular_values.len();
    let mut vs = vt.adjoint();
    for i in 0..k {
        let s = svd.singular_values[i];
        let f = if s > rcond * smax && s > 0.0 { 1.0 / s } else { 0.0 };
        vs.column_mut(i).scale_mut(f);
    }
    vs * u.adjoint()
}

/// Square solve by LU with partial pivoting.
pub fn lu_solve(a: &CMat, b: &CVec) -> Result<CVec> {
    if !a.is_square() {
        return Err(Error::InvalidArgument("LU needs a square matrix".into()));
    }
    if a.nrows() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.nrows(),
            got: b.len(),
        });
    }
    a.clone().lu().solve(b).ok_or(Error::Singular {
        condition: f64::INFINITY,
    })
}

/// Eigenvalues of a Hermitian matrix, increasing.
pub fn hermitian_eigenvalues(a: &CMat) -> Vec<f64> {
    let mut e: Vec<f64> = a.clone().symmetric_eigenvalues().iter().copied().collect();
    e.sort_by(|x, y| x.total_cmp(y));
    e
}

/// Orthonormal basis of the column space (thin, via SVD with relative cutoff).
pub fn range_basis(a: &CMat, rcond: f64) -> CMat {
    let svd = a.clone().svd(true, false);
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let u = svd.u.expect("u requested");
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] > rcond * smax && svd.singular_values[i] > 0.0)
        .collect();
    CMat::from_fn(a.nrows(), keep.len(), |r, c| u[(r, keep[c])])
}

/// Outcome of an iterative least-squares solve.
#[derive(Clone, Debug)]
pub struct CgOutcome {
    pub x: CVec,
    pub iterations: usize,
    /// `‖A*(b − Ax)‖ / ‖A*b‖` at exit.
    pub relative_residual: f64,
}

/// CGLS: conjugate gradients on `A*A x = A*b` without forming `A*A`.
pub fn cgls(op: &dyn LinearOperator, b: &CVec, tol: f64, max_iter: usize) -> CgOutcome {
    let n = op.ncols();
    let mut x = CVec::zeros(n);
    let mut r = b.clone();
    let mut s = op.apply_adjoint(&r);
    let norm0 = s.norm();
    if norm0 == 0.0 {
        return CgOutcome {
            x,
            iterations: 0,
            relative_residual: 0.0,
        };
    }
    let mut p = s.clone();
    let mut gamma = s.norm_squared();
    let mut it = 0;
    while it < max_iter && gamma.sqrt() > tol * norm0 {
        let q = op.apply(&p);
        let qq = q.norm_squared();
        if qq == 0.0 {
            break;
        }
        let alpha = gamma / qq;
        x.axpy(C64::new(alpha, 0.0), &p, C64::new(1.0, 0.0));
        r.axpy(C64::new(-alpha, 0.0), &q, C64::new(1.0, 0.0));
        s = op.apply_adjoint(&r);
        let gamma_new = s.norm_squared();
        let beta = gamma_new / gamma;
        gamma = gamma_new;
        p = &s + &p * C64::new(beta, 0.0);
        it += 1;
    }
    CgOutcome {
        x,
        iterations: it,
        relative_residual: gamma.sqrt() / norm0,
    }
}

/// Largest entry modulus.
pub fn max_abs<'a>(entries: impl IntoIterator<Item = &'a C64>) -> f64 {
    entries.into_iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Promote a real matrix.
pub fn to_complex(a: &DMatrix<f64>) -> CMat {
    a.map(|v| C64::new(v, 0.0))
}
