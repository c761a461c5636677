//! Generalized sampling through a compact operator `A`: samples of `g = A f` in one
//! system, reconstruction of `f` in another, with SVD filtering or uneven sections.

use crate::basis::{analyze, gauss_legendre, CoeffVec, FunctionSystem, Grid, Interval};
use crate::error::{Error, Result};
use crate::linalg;
use crate::{CMat, CVec, C64};
use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use std::f64::consts::PI;
use std::sync::Arc;

pub mod bounds;

pub use bounds::{filtered_error_bound, uneven_error_bound, BoundTerms};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SingularKind {
    VolterraAnalytic,
    NumericFromOperator,
}

type Kernel = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

struct NumericData {
    kernel: Kernel,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    /// Column `k` holds `u_k` at the nodes.
    u: DMatrix<f64>,
    v: DMatrix<f64>,
}

/// Leading singular triples `{σ_k, u_k, v_k}` of a compact operator on `L²(domain)`.
#[derive(Clone)]
pub struct SingularSystem {
    pub kind: SingularKind,
    pub domain: Interval,
    /// Nonincreasing.
    pub sigma: Vec<f64>,
    first_label: usize,
    numeric: Option<Arc<NumericData>>,
}

impl std::fmt::Debug for SingularSystem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SingularSystem")
            .field("kind", &self.kind)
            .field("count", &self.sigma.len())
            .field("first_label", &self.first_label)
            .finish()
    }
}

impl SingularSystem {
    /// Integration `f ↦ ∫_0^t f` on `[0, 1]`: `σ_k = 1/((k+½)π)`,
    /// `u_k = √2 sin((k+½)πt)`, `v_k = √2 cos((k+½)πt)`, labels `k = 1..=count`.
    pub fn volterra(count: usize) -> SingularSystem {
        SingularSystem::volterra_from(1, count)
    }

    /// Same family with labels `first..first+count`; `first = 0` is the complete system.
    pub fn volterra_from(first: usize, count: usize) -> SingularSystem {
        SingularSystem {
            kind: SingularKind::VolterraAnalytic,
            domain: Interval::UNIT,
            sigma: (first..first + count)
                .map(|k| 1.0 / ((k as f64 + 0.5) * PI))
                .collect(),
            first_label: first,
            numeric: None,
        }
    }

    /// Nyström discretization of `(A f)(t) = ∫ K(t, s) f(s) ds` on `grid`, keeping `count` triples.
    pub fn from_kernel<K>(kernel: K, grid: &Grid, count: usize) -> Result<SingularSystem>
    where
        K: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        let g = grid.len();
        if count == 0 || count > g {
            return Err(Error::InvalidArgument(format!(
                "cannot keep {count} triples from {g} nodes"
            )));
        }
        let sw: Vec<f64> = grid.weights.iter().map(|w| w.sqrt()).collect();
        let m = DMatrix::from_fn(g, g, |i, j| {
            sw[i] * kernel(grid.nodes[i], grid.nodes[j]) * sw[j]
        });
        let svd = m.svd(true, true);
        let mut order: Vec<usize> = (0..g).collect();
        order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
        let uu = svd.u.expect("u requested");
        let vt = svd.v_t.expect("v_t requested");
        let sigma: Vec<f64> = order[..count].iter().map(|&i| svd.singular_values[i]).collect();
        let u = DMatrix::from_fn(g, count, |i, k| uu[(i, order[k])] / sw[i]);
        let v = DMatrix::from_fn(g, count, |i, k| vt[(order[k], i)] / sw[i]);
        Ok(SingularSystem {
            kind: SingularKind::NumericFromOperator,
            domain: grid.domain,
            sigma,
            first_label: 0,
            numeric: Some(Arc::new(NumericData {
                kernel: Arc::new(kernel),
                nodes: grid.nodes.clone(),
                weights: grid.weights.clone(),
                u,
                v,
            })),
        })
    }

    pub fn count(&self) -> usize {
        self.sigma.len()
    }

    /// Label of the first retained triple.
    pub fn first_label(&self) -> usize {
        self.first_label
    }

    /// Oscillation of the first `n` triples in cycles over the domain.
    fn cycles(&self, n: usize) -> usize {
        match self.kind {
            SingularKind::VolterraAnalytic => (self.first_label + n) / 2 + 1,
            SingularKind::NumericFromOperator => n / 2 + 1,
        }
    }

    fn check(&self, k: usize) -> Result<()> {
        if k == 0 || k > self.count() {
            return Err(Error::InvalidArgument(format!(
                "triple {k} outside 1..={}",
                self.count()
            )));
        }
        Ok(())
    }

    /// `u_k` at `points` (k is 1-based among retained triples).
    pub fn eval_u(&self, k: usize, points: &[f64]) -> Result<Vec<f64>> {
        self.check(k)?;
        Ok(match &self.numeric {
            None => {
                let lam = (self.first_label as f64 + k as f64 - 0.5) * PI;
                points
                    .iter()
                    .map(|&t| std::f64::consts::SQRT_2 * (lam * t).sin())
                    .collect()
            }
            Some(d) => {
                // u_k(t) = σ_k^{-1} ∫ K(t, s) v_k(s) ds
                let s = self.sigma[k - 1];
                points
                    .iter()
                    .map(|&t| {
                        d.nodes
                            .iter()
                            .zip(&d.weights)
                            .enumerate()
                            .map(|(j, (&sj, &wj))| wj * (d.kernel)(t, sj) * d.v[(j, k - 1)])
                            .sum::<f64>()
                            / s
                    })
                    .collect()
            }
        })
    }

    /// `v_k` at `points`.
    pub fn eval_v(&self, k: usize, points: &[f64]) -> Result<Vec<f64>> {
        self.check(k)?;
        Ok(match &self.numeric {
            None => {
                let lam = (self.first_label as f64 + k as f64 - 0.5) * PI;
                points
                    .iter()
                    .map(|&t| std::f64::consts::SQRT_2 * (lam * t).cos())
                    .collect()
            }
            Some(d) => {
                // v_k(s) = σ_k^{-1} ∫ K(t, s) u_k(t) dt
                let s = self.sigma[k - 1];
                points
                    .iter()
                    .map(|&x| {
                        d.nodes
                            .iter()
                            .zip(&d.weights)
                            .enumerate()
                            .map(|(i, (&ti, &wi))| wi * (d.kernel)(ti, x) * d.u[(i, k - 1)])
                            .sum::<f64>()
                            / s
                    })
                    .collect()
            }
        })
    }
}

/// Spectral filter applied to the singular values.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FilterSpec {
    /// `F(σ²) = 1/(α + σ²)`.
    Tikhonov(f64),
    /// `F(σ²) = 1/σ²`.
    Unfiltered,
}

impl FilterSpec {
    pub fn evaluate(&self, sigma_sq: f64) -> f64 {
        match *self {
            FilterSpec::Tikhonov(alpha) => 1.0 / (alpha + sigma_sq),
            FilterSpec::Unfiltered => 1.0 / sigma_sq,
        }
    }

    pub fn alpha(&self) -> f64 {
        match *self {
            FilterSpec::Tikhonov(alpha) => alpha,
            FilterSpec::Unfiltered => 0.0,
        }
    }
}

/// Integration matrix on one Gauss panel: `S[i][j] = ∫_{-1}^{x_i} ℓ_j`.
fn panel_integration_matrix(order: usize) -> DMatrix<f64> {
    let (x, _) = gauss_legendre(order);
    let (z, w) = gauss_legendre(order);
    DMatrix::from_fn(order, order, |i, j| {
        let half = 0.5 * (x[i] + 1.0);
        z.iter()
            .zip(&w)
            .map(|(&zk, &wk)| {
                let y = -1.0 + half * (zk + 1.0);
                let l: f64 = (0..order)
                    .filter(|&m| m != j)
                    .map(|m| (y - x[m]) / (x[j] - x[m]))
                    .product();
                half * wk * l
            })
            .sum()
    })
}

/// `g(t) = ∫_a^t f(s) ds` at the grid nodes, by panelwise polynomial integration.
pub fn volterra_forward(f: &[C64], grid: &Grid) -> Result<Vec<C64>> {
    if f.len() != grid.len() {
        return Err(Error::DimensionMismatch {
            expected: grid.len(),
            got: f.len(),
        });
    }
    let q = grid.order;
    let s = panel_integration_matrix(q);
    let h = grid.domain.length() / grid.panels() as f64;
    let mut out = Vec::with_capacity(f.len());
    let mut acc = C64::new(0.0, 0.0);
    for p in 0..grid.panels() {
        let fp = &f[p * q..(p + 1) * q];
        for i in 0..q {
            let part: C64 = (0..q).map(|j| fp[j] * s[(i, j)]).sum();
            out.push(acc + part * (0.5 * h));
        }
        let total: C64 = fp
            .iter()
            .zip(&grid.weights[p * q..(p + 1) * q])
            .map(|(v, w)| v * *w)
            .sum();
        acc += total;
    }
    Ok(out)
}

/// Grid fine enough for Gramians between the singular functions and a system.
pub fn gramian_grid(ss: &SingularSystem, n: usize, sys_cycles: usize) -> Grid {
    let cycles = ss.cycles(n).max(sys_cycles);
    let panels = (2 * cycles + 2).next_power_of_two();
    Grid::composite(ss.domain, panels, 20)
}

fn system_cycles(sys: &FunctionSystem, count: usize) -> usize {
    match sys.kind {
        crate::basis::SystemKind::Fourier | crate::basis::SystemKind::Legendre => count / 2 + 1,
        _ => count.next_power_of_two(),
    }
}

fn check_domain(ss: &SingularSystem, sys: &FunctionSystem) -> Result<()> {
    if ss.domain != sys.domain {
        return Err(Error::InvalidArgument(format!(
            "system {sys} and operator domain differ"
        )));
    }
    Ok(())
}

/// `(S^*U)_{kl} = ⟨u_l, ψ_k⟩`, shape `R × N`.
pub fn su_gramian(ss: &SingularSystem, samp: &FunctionSystem, n: usize, r: usize) -> Result<CMat> {
    check_domain(ss, samp)?;
    if n > ss.count() {
        return Err(Error::InvalidArgument(format!(
            "N={n} exceeds the {} retained triples",
            ss.count()
        )));
    }
    let grid = gramian_grid(ss, n, system_cycles(samp, r));
    let psi = samp.eval_block(1, r, &grid.nodes)?;
    let g = grid.len();
    let psi_w = CMat::from_fn(g, r, |i, k| psi[k][i] * grid.weights[i]);
    let mut u = CMat::zeros(g, n);
    for l in 0..n {
        let col = ss.eval_u(l + 1, &grid.nodes)?;
        for (i, v) in col.into_iter().enumerate() {
            u[(i, l)] = C64::new(v, 0.0);
        }
    }
    Ok(psi_w.ad_mul(&u))
}

/// `(V^*T)_{lj} = ⟨φ_j, v_l⟩`, shape `N × M`.
pub fn vt_gramian(ss: &SingularSystem, recon: &FunctionSystem, n: usize, m: usize) -> Result<CMat> {
    check_domain(ss, recon)?;
    if n > ss.count() {
        return Err(Error::InvalidArgument(format!(
            "N={n} exceeds the {} retained triples",
            ss.count()
        )));
    }
    let grid = gramian_grid(ss, n, system_cycles(recon, m));
    let phi = recon.eval_block(1, m, &grid.nodes)?;
    let g = grid.len();
    let phi_m = CMat::from_fn(g, m, |i, j| phi[j][i]);
    let mut vw = CMat::zeros(g, n);
    for l in 0..n {
        let col = ss.eval_v(l + 1, &grid.nodes)?;
        for (i, v) in col.into_iter().enumerate() {
            vw[(i, l)] = C64::new(v * grid.weights[i], 0.0);
        }
    }
    Ok(vw.ad_mul(&phi_m))
}

/// Least-squares estimate of `⟨g, u_l⟩`, `l = 1..=N`, from the first `R` samples.
pub fn recover_gamma(
    ss: &SingularSystem,
    samp: &FunctionSystem,
    n: usize,
    r: usize,
    eta: &CVec,
) -> Result<CVec> {
    if r < n {
        return Err(Error::InvalidArgument(format!(
            "need R ≥ N, got R={r} < N={n}"
        )));
    }
    if eta.len() < r {
        return Err(Error::DimensionMismatch {
            expected: r,
            got: eta.len(),
        });
    }
    let su = su_gramian(ss, samp, n, r)?;
    let smin = linalg::sigma_min(&su);
    if smin < 1e-12 {
        return Err(Error::IllPosedSection {
            sigma_min: smin,
            advice: format!("subspace angle too small; increase R beyond {r}"),
        });
    }
    let rhs = eta.rows(0, r).into_owned();
    linalg::lstsq_qr(&su, &rhs)
}

fn sigmas(ss: &SingularSystem, n: usize) -> &[f64] {
    &ss.sigma[..n]
}

/// Filtered recovery: weighted least squares `(Θ^{-1} V^*T) β ≈ Σ γ`, `Θ = diag(F(σ²))`.
pub fn filtered_recover(
    ss: &SingularSystem,
    samp: &FunctionSystem,
    recon: &FunctionSystem,
    filter: FilterSpec,
    n: usize,
    m: usize,
    r: usize,
    eta: &CVec,
) -> Result<CoeffVec> {
    let gamma = recover_gamma(ss, samp, n, r, eta)?;
    filtered_from_gamma(ss, recon, filter, n, m, &gamma)
}

/// Weighted section `Θ^{-1} V^*T`.
pub fn weighted_section(
    ss: &SingularSystem,
    recon: &FunctionSystem,
    filter: FilterSpec,
    n: usize,
    m: usize,
) -> Result<CMat> {
    let mut w = vt_gramian(ss, recon, n, m)?;
    for (l, &s) in sigmas(ss, n).iter().enumerate() {
        let scale = 1.0 / filter.evaluate(s * s);
        w.row_mut(l).scale_mut(scale);
    }
    Ok(w)
}

pub fn filtered_from_gamma(
    ss: &SingularSystem,
    recon: &FunctionSystem,
    filter: FilterSpec,
    n: usize,
    m: usize,
    gamma: &CVec,
) -> Result<CoeffVec> {
    if n < m {
        return Err(Error::InvalidArgument(format!(
            "weighted section is {n}x{m}; increase N to at least M"
        )));
    }
    let w = weighted_section(ss, recon, filter, n, m)?;
    let s = linalg::singular_values(&w);
    let (smin, smax) = (*s.last().unwrap(), s[0]);
    if smin <= 1e-12 * smax {
        return Err(Error::IllPosedSection {
            sigma_min: smin,
            advice: format!("weighted section singular; increase N={n} or decrease M={m}"),
        });
    }
    let rhs = CVec::from_fn(n, |l, _| gamma[l] * sigmas(ss, n)[l]);
    let beta = linalg::lstsq_qr(&w, &rhs)?;
    CoeffVec::leading(beta, *recon)
}

/// Uneven-section recovery `β = (V^*T)^† Σ^{-1} γ`, pseudo-inverse cutoff `1e-12 σ_max`.
pub fn uneven_recover(
    ss: &SingularSystem,
    samp: &FunctionSystem,
    recon: &FunctionSystem,
    n: usize,
    m: usize,
    r: usize,
    eta: &CVec,
) -> Result<CoeffVec> {
    let gamma = recover_gamma(ss, samp, n, r, eta)?;
    uneven_from_gamma(ss, recon, n, m, &gamma)
}

pub fn uneven_from_gamma(
    ss: &SingularSystem,
    recon: &FunctionSystem,
    n: usize,
    m: usize,
    gamma: &CVec,
) -> Result<CoeffVec> {
    let b = vt_gramian(ss, recon, n, m)?;
    if linalg::sigma_max(&b) == 0.0 {
        return Err(Error::IllPosedSection {
            sigma_min: 0.0,
            advice: "singular functions orthogonal to the reconstruction space".into(),
        });
    }
    let rhs = CVec::from_fn(n, |l, _| gamma[l] / sigmas(ss, n)[l]);
    let beta = linalg::pinv_solve(&b, &rhs, 1e-12)?;
    CoeffVec::leading(beta, *recon)
}

/// Noisy measurements of `g` in the sampling system.
#[derive(Clone, Debug)]
pub struct InvProblemData {
    pub g_clean: Vec<C64>,
    pub noise_seed: u64,
    /// `‖z‖` in `L²`.
    pub delta: f64,
    /// `⟨g + z, ψ_k⟩`, `k = 1..=R`.
    pub eta: CVec,
}

/// Sample `g` in the first `r` elements of `samp` and add noise `z` from their span with
/// complex Gaussian coefficients rescaled so `‖z‖ = eps_rel/100 · ‖g‖`.
pub fn add_noise(
    g: &[C64],
    grid: &Grid,
    samp: &FunctionSystem,
    r: usize,
    eps_rel: f64,
    seed: u64,
) -> Result<InvProblemData> {
    if !(eps_rel >= 0.0) {
        return Err(Error::InvalidArgument("eps_rel must be ≥ 0".into()));
    }
    let gnorm = grid.l2_norm(g);
    if eps_rel > 0.0 && gnorm == 0.0 {
        return Err(Error::InvalidArgument("relative noise on zero data".into()));
    }
    let mut eta = analyze(g, samp, 1, r, grid)?;
    let mut delta = 0.0;
    if eps_rel > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let z = CVec::from_fn(r, |_, _| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            C64::new(re, im)
        });
        delta = eps_rel / 100.0 * gnorm;
        let z = z.unscale(z.norm()).scale(delta);
        eta += z;
    }
    Ok(InvProblemData {
        g_clean: g.to_vec(),
        noise_seed: seed,
        delta,
        eta,
    })
}

/// `‖f − Σ β_j φ_j‖` on the grid.
pub fn l2_error(f: &[C64], coeffs: &CoeffVec, grid: &Grid) -> Result<f64> {
    let rec = crate::basis::synthesize(coeffs, grid)?;
    let diff: Vec<C64> = rec.iter().zip(f).map(|(a, b)| a - b).collect();
    Ok(grid.l2_norm(&diff))
}

/// One row of the integration-operator experiment.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VolterraCase {
    pub m: usize,
    pub n: usize,
    pub r: usize,
    pub alpha: f64,
    pub eps_rel: f64,
    pub seed: u64,
    /// Label of the first singular triple used.
    pub first_label: usize,
}

impl VolterraCase {
    pub fn new(m: usize, n: usize, r: usize, alpha: f64) -> VolterraCase {
        VolterraCase {
            m,
            n,
            r,
            alpha,
            eps_rel: 0.0,
            seed: 0,
            first_label: 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VolterraReport {
    pub delta: f64,
    pub err_uneven: f64,
    /// Filtered path with `α = 0`.
    pub err_unfiltered: f64,
    /// Filtered path with the case's `α`.
    pub err_filtered: f64,
    pub bound_uneven: f64,
    pub bound_filtered: f64,
}

/// Recover `f(t) = cos 2πt` from Fourier samples of `∫_0^t f` with Fourier reconstruction.
pub fn run_volterra(case: &VolterraCase) -> Result<VolterraReport> {
    let ss = SingularSystem::volterra_from(case.first_label, case.n);
    let dom = Interval::UNIT;
    let fourier = FunctionSystem::fourier(dom);
    let grid = gramian_grid(&ss, case.n, case.r.max(case.m) / 2 + 1);
    let f: Vec<C64> = grid
        .nodes
        .iter()
        .map(|&t| C64::new((2.0 * PI * t).cos(), 0.0))
        .collect();
    let g = volterra_forward(&f, &grid)?;
    let data = add_noise(&g, &grid, &fourier, case.r, case.eps_rel, case.seed)?;
    let gamma = recover_gamma(&ss, &fourier, case.n, case.r, &data.eta)?;
    let uneven = uneven_from_gamma(&ss, &fourier, case.n, case.m, &gamma)?;
    let unf = filtered_from_gamma(&ss, &fourier, FilterSpec::Tikhonov(0.0), case.n, case.m, &gamma)?;
    let filt = filtered_from_gamma(
        &ss,
        &fourier,
        FilterSpec::Tikhonov(case.alpha),
        case.n,
        case.m,
        &gamma,
    )?;
    let terms = BoundTerms::compute(&ss, &fourier, &fourier, case.n, case.m, case.r, &f, &g, &grid)?;
    Ok(VolterraReport {
        delta: data.delta,
        err_uneven: l2_error(&f, &uneven, &grid)?,
        err_unfiltered: l2_error(&f, &unf, &grid)?,
        err_filtered: l2_error(&f, &filt, &grid)?,
        bound_uneven: uneven_error_bound(&terms, data.delta),
        bound_filtered: filtered_error_bound(
            &terms,
            &ss,
            &fourier,
            FilterSpec::Tikhonov(case.alpha),
            case.n,
            case.m,
            &f,
            &grid,
            data.delta,
        )?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn filters() {
        assert_eq!(FilterSpec::Tikhonov(0.5).evaluate(1.5), 0.5);
        assert_eq!(FilterSpec::Unfiltered.evaluate(0.25), 4.0);
    }

    #[test]
    fn forward_of_constants_and_cosine() {
        let grid = Grid::composite(Interval::UNIT, 8, 16);
        let zero = vec![C64::new(0.0, 0.0); grid.len()];
        assert!(volterra_forward(&zero, &grid)
            .unwrap()
            .iter()
            .all(|v| v.norm() == 0.0));
        let one = vec![C64::new(1.0, 0.0); grid.len()];
        let g = volterra_forward(&one, &grid).unwrap();
        for (v, &t) in g.iter().zip(&grid.nodes) {
            assert!((v.re - t).abs() < 1e-12);
        }
        let f: Vec<C64> = grid
            .nodes
            .iter()
            .map(|&t| C64::new((2.0 * PI * t).cos(), 0.0))
            .collect();
        let g = volterra_forward(&f, &grid).unwrap();
        for (v, &t) in g.iter().zip(&grid.nodes) {
            assert!((v.re - (2.0 * PI * t).sin() / (2.0 * PI)).abs() < 1e-10);
        }
    }

    #[test]
    fn singular_functions_orthonormal() {
        let ss = SingularSystem::volterra_from(0, 12);
        let grid = Grid::composite(Interval::UNIT, 16, 20);
        for a in 1..=12 {
            for b in 1..=12 {
                let ua = ss.eval_u(a, &grid.nodes).unwrap();
                let ub = ss.eval_u(b, &grid.nodes).unwrap();
                let va = ss.eval_v(a, &grid.nodes).unwrap();
                let vb = ss.eval_v(b, &grid.nodes).unwrap();
                let iu: f64 = (0..grid.len()).map(|i| ua[i] * ub[i] * grid.weights[i]).sum();
                let iv: f64 = (0..grid.len()).map(|i| va[i] * vb[i] * grid.weights[i]).sum();
                let t = if a == b { 1.0 } else { 0.0 };
                assert!((iu - t).abs() < 1e-8 && (iv - t).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn gamma_of_a_singular_function() {
        let ss = SingularSystem::volterra(8);
        let f = FunctionSystem::fourier(Interval::UNIT);
        let grid = gramian_grid(&ss, 8, 40);
        let u1: Vec<C64> = ss
            .eval_u(1, &grid.nodes)
            .unwrap()
            .into_iter()
            .map(|v| C64::new(v, 0.0))
            .collect();
        let eta = analyze(&u1, &f, 1, 64, &grid).unwrap();
        for n in [1, 3, 8] {
            let g = recover_gamma(&ss, &f, n, 64, &eta).unwrap();
            assert!((g[0] - C64::new(1.0, 0.0)).norm() < 1e-8);
            assert!(g.iter().skip(1).all(|v| v.norm() < 1e-8));
        }
        assert!(recover_gamma(&ss, &f, 8, 4, &eta).is_err());
    }

    #[test]
    fn noise_scaling_and_determinism() {
        let grid = Grid::composite(Interval::UNIT, 32, 16);
        let f = FunctionSystem::fourier(Interval::UNIT);
        let g: Vec<C64> = grid
            .nodes
            .iter()
            .map(|&t| C64::new((2.0 * PI * t).sin() / (2.0 * PI), 0.0))
            .collect();
        let clean = add_noise(&g, &grid, &f, 40, 0.0, 1).unwrap();
        assert_eq!(clean.delta, 0.0);
        let a = add_noise(&g, &grid, &f, 40, 5.0, 7).unwrap();
        let b = add_noise(&g, &grid, &f, 40, 5.0, 7).unwrap();
        assert_eq!(a.eta, b.eta);
        assert!((a.delta - 0.005627).abs() < 1e-5);
        assert!(((&a.eta - &clean.eta).norm() - a.delta).abs() < 1e-12);
        let zero = vec![C64::new(0.0, 0.0); grid.len()];
        assert!(add_noise(&zero, &grid, &f, 40, 1.0, 1).is_err());
    }

    #[test]
    fn numeric_system_approximates_analytic() {
        let grid = Grid::composite(Interval::UNIT, 40, 10);
        let ss = SingularSystem::from_kernel(|t, s| if s <= t { 1.0 } else { 0.0 }, &grid, 4).unwrap();
        for k in 0..4 {
            let exact = 1.0 / ((k as f64 + 0.5) * PI);
            assert!((ss.sigma[k] - exact).abs() < 2e-3 * exact, "k={k}");
        }
    }
}
