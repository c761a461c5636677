//! The experiments behind each subcommand. Every `run_*` function validates the whole config
//! before computing anything.

use super::config::{nonempty, required, ExperimentConfig};
use crate::basis::{Interval, SystemKind};
use crate::crossgram::{assemble_section, min_singular_value, IndexRange};
use crate::csinf::recovery::{
    flip_trial, random_sparse_vector, recovery_trial, sampled_rows, test_signal_haar,
};
use crate::csinf::{
    balancing_check, draw_scheme, local_coherence, relative_sparsity, tail_coherence,
    theorem_conditions, ConditionsInput, LevelCol, SparsityLevels, SparsityMode, SystemPair,
};
use crate::error::{Error, Result};
use crate::gensamp::{reconstruct_function, stable_sampling_rate, Method, SsrQuery, TestFunction};
use crate::invreg::{run_volterra, VolterraCase};

/// One CSV file's worth of output.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    /// Appended to the output stem, e.g. `_balancing`; empty for the main table.
    pub suffix: &'static str,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn new(header: Vec<&'static str>) -> Table {
        Table {
            suffix: "",
            header,
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

/// Shortest round-trip text; scientific outside `[1e-4, 1e15)`.
fn f(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || !v.is_finite() || (1e-4..1e15).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

fn u(v: impl std::fmt::Display) -> String {
    v.to_string()
}

fn pair(cfg: &ExperimentConfig) -> Result<SystemPair> {
    Ok(SystemPair::new(cfg.sampling()?, cfg.reconstruction()?))
}

pub fn run_gs(cfg: &ExperimentConfig) -> Result<Vec<Table>> {
    let p = pair(cfg)?;
    let ns = nonempty(&cfg.sizes.n, "sizes.n")?;
    let ms = nonempty(&cfg.sizes.m, "sizes.m")?;
    let func: TestFunction = cfg.knobs.function.as_deref().unwrap_or("poly-exp").parse()?;
    let method = match cfg.knobs.method.as_deref().unwrap_or("gs") {
        "gs" => Method::Generalized,
        "consistent" => Method::Consistent,
        other => {
            return Err(Error::InvalidArgument(format!(
                "knobs.method must be gs or consistent, got {other:?}"
            )))
        }
    };
    let cases: Vec<(usize, usize)> = ms
        .iter()
        .flat_map(|&m| ns.iter().filter(move |&&n| n >= m).map(move |&n| (n, m)))
        .collect();
    if cases.is_empty() {
        return Err(Error::InvalidArgument("no (n, m) pair with n ≥ m".into()));
    }
    let mut t = Table::new(vec![
        "function", "method", "n", "m", "d_nm", "error", "best_error", "truncated_error",
    ]);
    for (n, m) in cases {
        let r = reconstruct_function(func, &p.sampling, &p.reconstruction, n, m, method)?;
        let name = if method == Method::Generalized { "gs" } else { "consistent" };
        t.push(vec![
            func.name().into(),
            name.into(),
            u(n),
            u(m),
            f(r.d_nm),
            f(r.error),
            f(r.best_error),
            f(r.truncated_error),
        ]);
    }
    Ok(vec![t])
}

pub fn run_ssr(cfg: &ExperimentConfig) -> Result<Vec<Table>> {
    let p = pair(cfg)?;
    let ms = nonempty(&cfg.sizes.m, "sizes.m")?;
    let theta = cfg.knobs.theta.unwrap_or(2.0);
    if !(theta > 1.0) {
        return Err(Error::InvalidArgument("knobs.theta must exceed 1".into()));
    }
    let mut t = Table::new(vec!["m", "theta", "ssr", "ssr_over_m"]);
    for &m in ms {
        let n = stable_sampling_rate(&SsrQuery::new(m, theta), &p.sampling, &p.reconstruction)?;
        t.push(vec![u(m), f(theta), u(n), f(n as f64 / m as f64)]);
    }
    Ok(vec![t])
}

pub fn run_consistent_fail(cfg: &ExperimentConfig) -> Result<Vec<Table>> {
    let p = pair(cfg)?;
    let ns = nonempty(&cfg.sizes.n, "sizes.n")?;
    let func: TestFunction = cfg.knobs.function.as_deref().unwrap_or("runge").parse()?;
    let mut t = Table::new(vec![
        "function", "n", "sigma_min", "log_sigma_min", "consistent_error", "status",
    ]);
    for &n in ns {
        let a = assemble_section(&p.sampling, &p.reconstruction, IndexRange::leading(n), IndexRange::leading(n))?;
        let smin = min_singular_value(&a);
        let (err, status) =
            match reconstruct_function(func, &p.sampling, &p.reconstruction, n, n, Method::Consistent) {
                Ok(r) => (r.error, "ok"),
                Err(Error::Singular { .. }) => (f64::NAN, "singular"),
                Err(e) => return Err(e),
            };
        t.push(vec![func.name().into(), u(n), f(smin), f(smin.ln()), f(err), status.into()]);
    }
    Ok(vec![t])
}

pub fn run_invreg_volterra(cfg: &ExperimentConfig, seed: u64) -> Result<Vec<Table>> {
    let m = *required(cfg.sizes.m.first(), "sizes.m")?;
    let n = *required(cfg.sizes.n.first(), "sizes.n")?;
    let r = required(cfg.sizes.r, "sizes.r")?;
    let alphas: Vec<f64> = if cfg.knobs.alpha.is_empty() {
        vec![0.0]
    } else {
        cfg.knobs.alpha.clone()
    };
    let eps_rel = cfg.knobs.eps_rel.unwrap_or(0.0);
    if alphas.iter().any(|a| !(*a >= 0.0)) || !(eps_rel >= 0.0) {
        return Err(Error::InvalidArgument("alpha and eps_rel must be ≥ 0".into()));
    }
    if n < m || r < n {
        return Err(Error::InvalidArgument("need m ≤ n ≤ r".into()));
    }
    let mut t = Table::new(vec![
        "m", "n", "r", "alpha", "eps_rel", "seed", "delta", "err_uneven", "err_unfiltered",
        "err_filtered", "bound_uneven", "bound_filtered",
    ]);
    for &alpha in &alphas {
        let case = VolterraCase {
            eps_rel,
            seed,
            ..VolterraCase::new(m, n, r, alpha)
        };
        let rep = run_volterra(&case)?;
        t.push(vec![
            u(m),
            u(n),
            u(r),
            f(alpha),
            f(eps_rel),
            u(seed),
            f(rep.delta),
            f(rep.err_uneven),
            f(rep.err_unfiltered),
            f(rep.err_filtered),
            f(rep.bound_uneven),
            f(rep.bound_filtered),
        ]);
    }
    Ok(vec![t])
}

pub fn run_coherence(cfg: &ExperimentConfig) -> Result<Vec<Table>> {
    let p = pair(cfg)?;
    let ns = nonempty(&cfg.sizes.n, "sizes.n")?;
    let mut t = Table::new(vec!["n", "probe_depth", "mu_rows", "mu_cols", "n_times_mu_rows"]);
    for &n in ns {
        let depth = cfg.knobs.probe_depth.unwrap_or(4 * n);
        let (r, c) = tail_coherence(&p, n, depth)?;
        t.push(vec![u(n), u(depth), f(r), f(c), f(n as f64 * r)]);
    }
    Ok(vec![t])
}

struct CsPlan {
    levels: Vec<usize>,
    counts: Vec<usize>,
    sp: SparsityLevels,
    k: usize,
    trials: usize,
    delta: f64,
}

fn cs_plan(cfg: &ExperimentConfig) -> Result<CsPlan> {
    let levels = nonempty(&cfg.sizes.levels, "sizes.levels")?.to_vec();
    let counts = nonempty(&cfg.sizes.counts, "sizes.counts")?.to_vec();
    draw_scheme(&levels, &counts, 0)?;
    let sp = SparsityLevels::new(cfg.sizes.sparsity_levels.clone(), cfg.sizes.sparsity.clone())?;
    let k = cfg.sizes.k.unwrap_or(sp.extent());
    if k < sp.extent() {
        return Err(Error::InvalidArgument("sizes.k must cover the sparsity levels".into()));
    }
    let delta = cfg.knobs.delta.unwrap_or(0.0);
    if !(delta >= 0.0) {
        return Err(Error::InvalidArgument("knobs.delta must be ≥ 0".into()));
    }
    Ok(CsPlan {
        levels,
        counts,
        sp,
        k,
        trials: cfg.seeds.trials.unwrap_or(20),
        delta,
    })
}

pub fn run_cs_recover(cfg: &ExperimentConfig, seed: u64) -> Result<Vec<Table>> {
    let p = pair(cfg)?;
    let plan = cs_plan(cfg)?;
    let budget: usize = plan.counts.iter().sum();
    let bandwidth = *plan.levels.last().unwrap();
    let mut t = Table::new(vec![
        "seed", "scheme_id", "s_total", "err_l2", "err_l1", "feasibility_gap", "iterations", "status",
    ]);
    for trial in 0..plan.trials as u64 {
        let s = seed + trial;
        let beta = random_sparse_vector(&plan.sp, plan.k, s)?;
        let schemes = [
            ("multilevel", draw_scheme(&plan.levels, &plan.counts, s)?),
            ("uniform", draw_scheme(&[bandwidth], &[budget], s)?),
        ];
        for (id, scheme) in schemes {
            let a = sampled_rows(&p, &scheme.omega, plan.k)?;
            let r = recovery_trial(&a, &beta, plan.delta, s)?;
            t.push(vec![
                u(s),
                id.into(),
                u(plan.sp.total()),
                f(r.err_l2),
                f(r.err_l1),
                f(r.feasibility_gap),
                u(r.iterations),
                format!("{:?}", r.status),
            ]);
        }
    }
    Ok(vec![t])
}

pub fn run_cs_flip(cfg: &ExperimentConfig, seed: u64) -> Result<Vec<Table>> {
    let p = pair(cfg)?;
    let haar_unit = p.reconstruction.kind == SystemKind::Haar && p.reconstruction.domain == Interval::UNIT;
    if !haar_unit {
        return Err(Error::InvalidArgument(
            "cs-flip needs reconstruction = \"haar\" on the domain [0, 1]".into(),
        ));
    }
    let k = required(cfg.sizes.k, "sizes.k")?;
    if !k.is_power_of_two() {
        return Err(Error::InvalidArgument("sizes.k must be a power of two".into()));
    }
    let levels = nonempty(&cfg.sizes.levels, "sizes.levels")?;
    let counts = nonempty(&cfg.sizes.counts, "sizes.counts")?;
    draw_scheme(levels, counts, 0)?;
    let trials = cfg.seeds.trials.unwrap_or(10);
    let beta = test_signal_haar(k.trailing_zeros());
    let mut t = Table::new(vec![
        "seed", "k", "samples", "err_direct", "err_flipped", "ratio", "iterations_direct",
        "iterations_flipped",
    ]);
    for trial in 0..trials as u64 {
        let s = seed + trial;
        let scheme = draw_scheme(levels, counts, s)?;
        let a = sampled_rows(&p, &scheme.omega, k)?;
        let (d, fl) = flip_trial(&a, &beta)?;
        t.push(vec![
            u(s),
            u(k),
            u(scheme.len()),
            f(d.err_l2),
            f(fl.err_l2),
            f(fl.err_l2 / d.err_l2),
            u(d.iterations),
            u(fl.iterations),
        ]);
    }
    Ok(vec![t])
}

pub fn run_theorem_check(cfg: &ExperimentConfig) -> Result<Vec<Table>> {
    let p = pair(cfg)?;
    let levels = nonempty(&cfg.sizes.levels, "sizes.levels")?.to_vec();
    let counts = nonempty(&cfg.sizes.counts, "sizes.counts")?.to_vec();
    let scheme = draw_scheme(&levels, &counts, 0)?;
    let sp = SparsityLevels::new(cfg.sizes.sparsity_levels.clone(), cfg.sizes.sparsity.clone())?;
    sp.check_theorem_total()?;
    let r = levels.len();
    if sp.r() != r {
        return Err(Error::InvalidArgument(
            "sampling and sparsity levels need the same count".into(),
        ));
    }
    let epsilon = cfg.knobs.epsilon.unwrap_or(0.1);
    let constant = cfg.knobs.constant.unwrap_or(1.0);
    let probe = cfg.knobs.probe_depth.unwrap_or(4 * sp.extent());
    let mut mu = vec![vec![0.0; r]; r];
    for (k, row) in mu.iter_mut().enumerate() {
        for (l, v) in row.iter_mut().enumerate() {
            let col = if l + 1 == r { LevelCol::Tail } else { LevelCol::Level(l + 1) };
            *v = local_coherence(&p, &levels, &sp.levels, k + 1, col, sp.extent() + probe)?;
        }
    }
    let big_s = (1..=r)
        .map(|k| relative_sparsity(&p, &levels, &sp, k, SparsityMode::Bound))
        .collect::<Result<Vec<_>>>()?;
    let rep = theorem_conditions(&ConditionsInput {
        n_levels: levels.clone(),
        counts: counts.clone(),
        s: sp.s.clone(),
        local_coherence: mu.clone(),
        relative_sparsity: big_s.clone(),
        epsilon,
        constant,
    })?;
    let mut t = Table::new(vec![
        "level", "n_lo", "n_hi", "m_k", "s_k", "mu_kk", "relative_sparsity_bound", "coherence_lhs",
        "hat_lhs", "min_samples", "fully_sampled", "pass",
    ]);
    for (k, lv) in rep.levels.iter().enumerate() {
        let lo = if k == 0 { 0 } else { levels[k - 1] };
        t.push(vec![
            u(k + 1),
            u(lo + 1),
            u(levels[k]),
            u(counts[k]),
            u(sp.s[k]),
            f(mu[k][k]),
            f(big_s[k]),
            f(lv.coherence_lhs),
            f(lv.hat_lhs),
            u(lv.min_samples),
            u(lv.fully_sampled),
            u(lv.pass),
        ]);
    }
    let bal = balancing_check(
        &p,
        scheme.bandwidth(),
        scheme.undersampling(),
        sp.extent(),
        sp.total(),
        probe,
    )?;
    let mut b = Table::new(vec![
        "n", "undersampling", "m", "s", "tail", "lhs_weak", "lhs_strong", "threshold_weak",
        "holds_weak", "holds_strong",
    ]);
    b.suffix = "_balancing";
    b.push(vec![
        u(scheme.bandwidth()),
        f(scheme.undersampling()),
        u(sp.extent()),
        u(sp.total()),
        u(probe),
        f(bal.lhs_weak),
        f(bal.lhs_strong),
        f(bal.threshold_weak),
        u(bal.holds_weak),
        u(bal.holds_strong),
    ]);
    Ok(vec![t, b])
}
