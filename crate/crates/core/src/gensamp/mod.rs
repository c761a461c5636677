//! Generalized sampling: least-squares reconstruction from an uneven section, the
//! consistent (square) baseline, and the stability functionals `D_{N,M}`, `sec θ_{N,M}`
//! and the stable sampling rate.

use crate::basis::{CoeffVec, FunctionSystem};
use crate::crossgram::{assemble_section, IndexRange, SectionMatrix};
use crate::error::{Error, Result};
use crate::linalg::{self, LinearOperator};
use crate::{CMat, CVec, C64};

/// Below this `σ_min` a section is treated as unusable.
pub const ILL_POSED_SIGMA: f64 = 1e-12;
/// `d_nm` reports infinity below this `σ_min`.
pub const INFINITE_D_SIGMA: f64 = 1e-14;
pub const CG_TOL: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct GsResult {
    pub coeffs: CoeffVec,
    /// `‖A β − y‖`.
    pub residual_norm: f64,
    pub iterations: usize,
    /// `1 / σ_min` of the section used.
    pub d_nm: f64,
    /// `σ_max / σ_min`.
    pub kappa_estimate: f64,
}

/// Search parameters for [`stable_sampling_rate`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SsrQuery {
    pub m: usize,
    pub theta: f64,
    /// Largest `N` the search may try.
    pub max_n: usize,
}

impl SsrQuery {
    pub fn new(m: usize, theta: f64) -> SsrQuery {
        SsrQuery {
            m,
            theta,
            max_n: 1 << 14,
        }
    }
}

fn check_samples(a: &SectionMatrix, y: &CVec) -> Result<()> {
    if y.len() != a.nrows() {
        return Err(Error::DimensionMismatch {
            expected: a.nrows(),
            got: y.len(),
        });
    }
    Ok(())
}

fn extremes(a: &CMat) -> (f64, f64) {
    if a.nrows() < a.ncols() {
        return (0.0, linalg::sigma_max(a));
    }
    let s = linalg::singular_values(a);
    (*s.last().unwrap_or(&0.0), *s.first().unwrap_or(&0.0))
}

/// Least-squares reconstruction `argmin ‖A β − y‖` by conjugate gradients on the normal equations.
pub fn gs_reconstruct(a: &SectionMatrix, samples: &CVec) -> Result<GsResult> {
    check_samples(a, samples)?;
    if a.nrows() < a.ncols() {
        return Err(Error::InvalidArgument(format!(
            "need at least as many samples as coefficients, got N={} < M={}",
            a.nrows(),
            a.ncols()
        )));
    }
    let (smin, smax) = extremes(&a.entries);
    if smin < ILL_POSED_SIGMA {
        return Err(Error::IllPosedSection {
            sigma_min: smin,
            advice: format!("increase N beyond {}", a.nrows()),
        });
    }
    let op: Box<dyn LinearOperator> = match a.fast_operator() {
        Some(f) => Box::new(f),
        None => Box::new(a.entries.clone()),
    };
    let out = linalg::cgls(op.as_ref(), samples, CG_TOL, 10 * a.ncols().max(1));
    if out.relative_residual > CG_TOL {
        log::debug!(
            "CG stopped at relative residual {:e} after {} iterations",
            out.relative_residual,
            out.iterations
        );
    }
    let residual_norm = (&a.entries * &out.x - samples).norm();
    Ok(GsResult {
        coeffs: CoeffVec::new(out.x, a.reconstruction, a.cols.start)?,
        residual_norm,
        iterations: out.iterations,
        d_nm: 1.0 / smin,
        kappa_estimate: smax / smin,
    })
}

/// Direct QR least squares; the reference solution for [`gs_reconstruct`].
pub fn gs_reconstruct_qr(a: &SectionMatrix, samples: &CVec) -> Result<CVec> {
    check_samples(a, samples)?;
    linalg::lstsq_qr(&a.entries, samples)
}

/// Solve the square system `A^{[N,N]} β = y` directly (finite-section method).
pub fn consistent_reconstruct(a: &SectionMatrix, samples: &CVec) -> Result<GsResult> {
    check_samples(a, samples)?;
    if a.nrows() != a.ncols() {
        return Err(Error::InvalidArgument(
            "consistent reconstruction needs a square section".into(),
        ));
    }
    let (smin, smax) = extremes(&a.entries);
    let kappa = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if !(kappa < 1e15) {
        return Err(Error::Singular { condition: kappa });
    }
    let x = linalg::lu_solve(&a.entries, samples)?;
    let residual_norm = (&a.entries * &x - samples).norm();
    Ok(GsResult {
        coeffs: CoeffVec::new(x, a.reconstruction, a.cols.start)?,
        residual_norm,
        iterations: 0,
        d_nm: 1.0 / smin,
        kappa_estimate: kappa,
    })
}

fn d_from_sigma(s: f64) -> f64 {
    if s < INFINITE_D_SIGMA {
        f64::INFINITY
    } else {
        1.0 / s
    }
}

/// `D_{N,M} = 1 / σ_min(A^{[N,M]})`.
pub fn d_nm(samp: &FunctionSystem, recon: &FunctionSystem, n: usize, m: usize) -> Result<f64> {
    let a = assemble_section(samp, recon, IndexRange::leading(n), IndexRange::leading(m))?;
    Ok(d_from_sigma(linalg::sigma_min(&a.entries)))
}

/// `D_{n,M}` for every leading row count `n` in `ns`, from one assembled section.
pub fn d_curve(a: &SectionMatrix, ns: &[usize]) -> Vec<f64> {
    let eval = |&n: &usize| -> f64 {
        let n = n.min(a.nrows());
        let top = a.entries.rows(0, n).into_owned();
        d_from_sigma(linalg::sigma_min(&top))
    };
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        ns.par_iter().map(eval).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        ns.iter().map(eval).collect()
    }
}

/// Least `N` with `D_{N,M} ≤ θ`: doubling from `N = M`, then bisection on row prefixes.
pub fn stable_sampling_rate(
    q: &SsrQuery,
    samp: &FunctionSystem,
    recon: &FunctionSystem,
) -> Result<usize> {
    if !(q.theta > 1.0) && samp != recon {
        return Err(Error::InvalidArgument("theta must exceed 1".into()));
    }
    if q.m == 0 || q.max_n < q.m {
        return Err(Error::InvalidArgument("need 1 ≤ M ≤ max_n".into()));
    }
    let cols = IndexRange::leading(q.m);
    let d_of = |a: &SectionMatrix, n: usize| -> f64 {
        let top = a.entries.rows(0, n).into_owned();
        d_from_sigma(linalg::sigma_min(&top))
    };
    let mut hi = q.m;
    let mut a = assemble_section(samp, recon, IndexRange::leading(hi), cols)?;
    let mut last = d_of(&a, hi);
    while last > q.theta {
        if hi == q.max_n {
            return Err(Error::BoundExhausted {
                bound: q.max_n,
                last_d: last,
            });
        }
        hi = (2 * hi).min(q.max_n);
        a = assemble_section(samp, recon, IndexRange::leading(hi), cols)?;
        last = d_of(&a, hi);
    }
    let mut lo = (hi / 2).max(q.m - 1);
    if hi == q.m {
        return Ok(hi);
    }
    // invariant: D(lo) > θ (or lo < M), D(hi) ≤ θ
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if mid >= q.m && d_of(&a, mid) <= q.theta {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    debug_assert!(hi == q.m || d_of(&a, hi - 1) > q.theta);
    Ok(hi)
}

/// `sec θ_{N,M} = λ_min(B)^{-1/2}` with `B = (A^*A)(A^*CA)^{-1}(A^*A)` and `C` the
/// sampling Gram matrix of rows `1..=N`.
pub fn sec_angle(samp: &FunctionSystem, recon: &FunctionSystem, n: usize, m: usize) -> Result<f64> {
    let a = assemble_section(samp, recon, IndexRange::leading(n), IndexRange::leading(m))?;
    let c = assemble_section(samp, samp, IndexRange::leading(n), IndexRange::leading(n))?;
    let ata = a.entries.ad_mul(&a.entries);
    let aca = a.entries.ad_mul(&(&c.entries * &a.entries));
    let inv = aca.clone().try_inverse().ok_or(Error::Singular {
        condition: f64::INFINITY,
    })?;
    let b = &ata * inv * &ata;
    let b = (&b + b.adjoint()) * crate::C64::new(0.5, 0.0);
    let lmin = linalg::hermitian_eigenvalues(&b)[0];
    if lmin <= 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(1.0 / lmin.sqrt())
}

/// Worst-case ratio `‖f − F f‖ / ‖f − P_M f‖` of the GS map on `1..=N` over
/// functions in the span of the first `k` reconstruction elements, `k > M`.
///
/// Equals `sqrt(1 + ‖A_M^† A_⊥‖²)`, which tends to `sec θ_{N,M}` as `k` grows.
pub fn empirical_quasi_optimality(
    samp: &FunctionSystem,
    recon: &FunctionSystem,
    n: usize,
    m: usize,
    k: usize,
) -> Result<f64> {
    if k <= m {
        return Err(Error::InvalidArgument("need k > M".into()));
    }
    let a = assemble_section(samp, recon, IndexRange::leading(n), IndexRange::leading(k))?;
    let am = a.entries.columns(0, m).into_owned();
    let aperp = a.entries.columns(m, k - m).into_owned();
    let pinv = linalg::pinv(&am, 1e-14);
    let t = pinv * aperp;
    let s = linalg::sigma_max(&t);
    Ok((1.0 + s * s).sqrt())
}

/// Built-in test functions, defined on the real line and restricted to the domain.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TestFunction {
    /// `t⁵ e^{-t}`.
    PolyExp,
    /// `1 / (1 + 25 t²)`.
    Runge,
    /// `cos 2πt`.
    Cosine,
}

impl TestFunction {
    pub fn eval(&self, t: f64) -> f64 {
        match self {
            TestFunction::PolyExp => t.powi(5) * (-t).exp(),
            TestFunction::Runge => 1.0 / (1.0 + 25.0 * t * t),
            TestFunction::Cosine => (2.0 * std::f64::consts::PI * t).cos(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            TestFunction::PolyExp => "poly-exp",
            TestFunction::Runge => "runge",
            TestFunction::Cosine => "cosine",
        }
    }
}

impl std::str::FromStr for TestFunction {
    type Err = Error;
    fn from_str(s: &str) -> Result<TestFunction> {
        match s {
            "poly-exp" => Ok(TestFunction::PolyExp),
            "runge" => Ok(TestFunction::Runge),
            "cosine" => Ok(TestFunction::Cosine),
            _ => Err(Error::InvalidArgument(format!(
                "unknown test function {s:?} (poly-exp, runge, cosine)"
            ))),
        }
    }
}

/// Which solver [`reconstruct_function`] applies to the samples.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Generalized,
    Consistent,
}

/// L² errors of one reconstruction of a known function.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FunctionReport {
    pub n: usize,
    pub m: usize,
    pub d_nm: f64,
    /// `‖f − F f‖` for the chosen method.
    pub error: f64,
    /// `‖f − P_M f‖` in the reconstruction system.
    pub best_error: f64,
    /// `‖f − Σ_{i ≤ N} ⟨f, ψ_i⟩ ψ_i‖`, the direct truncated expansion of the same samples.
    pub truncated_error: f64,
}

/// Quadrature grid fine enough for the first `n` sampling and `m` reconstruction elements.
fn function_grid(samp: &FunctionSystem, recon: &FunctionSystem, n: usize, m: usize) -> crate::basis::Grid {
    let cycles = n.max(m) / 2 + 1;
    let level = (usize::BITS - cycles.leading_zeros() + 2)
        .max(samp.breakpoint_level(n))
        .max(recon.breakpoint_level(m))
        .max(6);
    crate::basis::Grid::dyadic(samp.domain, level, 20)
}

/// Sample `f` with the first `n` sampling elements and reconstruct `m` coefficients.
pub fn reconstruct_function(
    f: TestFunction,
    samp: &FunctionSystem,
    recon: &FunctionSystem,
    n: usize,
    m: usize,
    method: Method,
) -> Result<FunctionReport> {
    use crate::basis::{analyze, synthesize};
    let grid = function_grid(samp, recon, n, m);
    let fv: Vec<C64> = grid.nodes.iter().map(|&t| C64::new(f.eval(t), 0.0)).collect();
    let err_of = |c: &CoeffVec| -> Result<f64> {
        let rec = synthesize(c, &grid)?;
        let diff: Vec<C64> = rec.iter().zip(&fv).map(|(a, b)| a - b).collect();
        Ok(grid.l2_norm(&diff))
    };
    let y = analyze(&fv, samp, 1, n, &grid)?;
    let truncated_error = err_of(&CoeffVec::leading(y.clone(), *samp)?)?;
    let best = analyze(&fv, recon, 1, m, &grid)?;
    let best_error = err_of(&CoeffVec::leading(best, *recon)?)?;
    let a = assemble_section(samp, recon, IndexRange::leading(n), IndexRange::leading(m))?;
    let res = match method {
        Method::Generalized => gs_reconstruct(&a, &y)?,
        Method::Consistent => consistent_reconstruct(&a, &y)?,
    };
    Ok(FunctionReport {
        n,
        m,
        d_nm: res.d_nm,
        error: err_of(&res.coeffs)?,
        best_error,
        truncated_error,
    })
}
