//! Computable right-hand sides of the error estimates for the two recovery paths.
//!
//! Both follow from splitting the error into the part present with exact singular
//! coefficients `γ_l = ⟨g, u_l⟩` and the part caused by estimating `γ` from noisy samples.
//! The estimation part is bounded by `s1 · (‖g − P_{U_N} g‖ + δ)` with `s1 = 1/σ_min(S^*U)`.

use super::{filtered_from_gamma, l2_error, su_gramian, vt_gramian, FilterSpec, SingularSystem};
use crate::basis::{analyze, synthesize, CoeffVec, FunctionSystem, Grid};
use crate::error::Result;
use crate::linalg;
use crate::{CMat, CVec, C64};

/// Ingredients shared by both estimates.
#[derive(Clone, Debug)]
pub struct BoundTerms {
    /// `1 / σ_min(S_R^* U_N)`.
    pub s1: f64,
    /// `1 / σ_min(V_N^* T_M)`.
    pub s2: f64,
    /// `‖f − P_{T_M} f‖`.
    pub f_proj_err: f64,
    /// `‖g − P_{U_N} g‖`.
    pub g_proj_err: f64,
    /// Smallest retained singular value.
    pub sigma_n: f64,
    /// Exact `⟨g, u_l⟩`.
    pub gamma_exact: CVec,
    n: usize,
    m: usize,
    vt: CMat,
}

fn inv(s: f64) -> f64 {
    if s > 0.0 {
        1.0 / s
    } else {
        f64::INFINITY
    }
}

impl BoundTerms {
    #[allow(clippy::too_many_arguments)]
    pub fn compute(
        ss: &SingularSystem,
        samp: &FunctionSystem,
        recon: &FunctionSystem,
        n: usize,
        m: usize,
        r: usize,
        f: &[C64],
        g: &[C64],
        grid: &Grid,
    ) -> Result<BoundTerms> {
        let su = su_gramian(ss, samp, n, r)?;
        let vt = vt_gramian(ss, recon, n, m)?;
        let s1 = inv(linalg::sigma_min(&su));
        let sv = linalg::singular_values(&vt);
        // the uneven path truncates below 1e-12 σ_max; beyond that the estimate is void
        let s2 = if n < m || sv.last().copied().unwrap_or(0.0) <= 1e-12 * sv[0] {
            f64::INFINITY
        } else {
            inv(*sv.last().unwrap())
        };
        let beta_f = analyze(f, recon, 1, m, grid)?;
        let pf = synthesize(&CoeffVec::leading(beta_f, *recon)?, grid)?;
        let df: Vec<C64> = f.iter().zip(&pf).map(|(a, b)| a - b).collect();
        let mut gamma_exact = CVec::zeros(n);
        let mut pg = vec![C64::new(0.0, 0.0); grid.len()];
        for l in 0..n {
            let u = ss.eval_u(l + 1, &grid.nodes)?;
            let c: C64 = g
                .iter()
                .zip(&u)
                .zip(&grid.weights)
                .map(|((a, b), w)| a * *b * *w)
                .sum();
            gamma_exact[l] = c;
            for (p, v) in pg.iter_mut().zip(&u) {
                *p += c * *v;
            }
        }
        let dg: Vec<C64> = g.iter().zip(&pg).map(|(a, b)| a - b).collect();
        Ok(BoundTerms {
            s1,
            s2,
            f_proj_err: grid.l2_norm(&df),
            g_proj_err: grid.l2_norm(&dg),
            sigma_n: ss.sigma[n - 1],
            gamma_exact,
            n,
            m,
            vt,
        })
    }
}

/// `sqrt(1 + s2²) ‖f − P_T f‖ + s2 · s1 · (‖g − P_{U_N} g‖ + δ) / σ_N`.
pub fn uneven_error_bound(t: &BoundTerms, delta: f64) -> f64 {
    (1.0 + t.s2 * t.s2).sqrt() * t.f_proj_err + t.s2 * t.s1 * (t.g_proj_err + delta) / t.sigma_n
}

/// `‖f − f^α_{N,M}‖ + s2α · max_l F(σ_l²) σ_l · s1 · (‖g − P_{U_N} g‖ + δ)`, where
/// `f^α_{N,M}` is the filtered reconstruction from exact `γ` and
/// `s2α = 1/σ_min(Q^* V^*T)` with `Q` an orthonormal basis of `range(Θ^{-2} V^*T)`.
#[allow(clippy::too_many_arguments)]
pub fn filtered_error_bound(
    t: &BoundTerms,
    ss: &SingularSystem,
    recon: &FunctionSystem,
    filter: FilterSpec,
    n: usize,
    m: usize,
    f: &[C64],
    grid: &Grid,
    delta: f64,
) -> Result<f64> {
    debug_assert_eq!((n, m), (t.n, t.m));
    let exact = filtered_from_gamma(ss, recon, filter, n, m, &t.gamma_exact)?;
    let head = l2_error(f, &exact, grid)?;
    let mut z = t.vt.clone();
    let mut fmax: f64 = 0.0;
    for l in 0..n {
        let s = ss.sigma[l];
        let fl = filter.evaluate(s * s);
        fmax = fmax.max(fl * s);
        z.row_mut(l).scale_mut(1.0 / (fl * fl));
    }
    let q = linalg::range_basis(&z, 1e-13);
    let s2a = if q.ncols() < m {
        f64::INFINITY
    } else {
        inv(linalg::sigma_min(&q.ad_mul(&t.vt)))
    };
    Ok(head + s2a * fmax * t.s1 * (t.g_proj_err + delta))
}
