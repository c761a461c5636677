mod common;

use common::*;
use proptest::prelude::*;
use sgs_core::csinf::{
    relative_sparsity, sigma_s_m, ExplicitMatrix, SparsityLevels, SparsityMode,
};
use sgs_core::{CMat, C64};

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-12)
}

fn random_dense(rows: usize, cols: usize, seed: u64) -> CMat {
    let u = random_unitary(rows.max(cols), seed);
    u.view((0, 0), (rows, cols)).into_owned()
}

#[test]
fn exact_relative_sparsity_matches_enumeration() {
    let cases: &[(&[usize], &[usize], &[usize])] = &[
        (&[3, 6], &[3, 6], &[1, 2]),
        (&[2, 6], &[3, 6], &[2, 2]),
        (&[4, 6], &[2, 6], &[1, 1]),
        (&[6], &[6], &[2]),
        (&[6], &[4], &[3]),
    ];
    for (seed, (n_levels, m_levels, s)) in cases.iter().enumerate() {
        let n = *n_levels.last().unwrap();
        let a = random_dense(n, *m_levels.last().unwrap(), seed as u64 + 11);
        let sp = SparsityLevels::new(m_levels.to_vec(), s.to_vec()).unwrap();
        for k in 1..=n_levels.len() {
            let got =
                relative_sparsity(&ExplicitMatrix(a.clone()), n_levels, &sp, k, SparsityMode::Exact)
                    .unwrap();
            let want = brute_relative_sparsity(&a, n_levels, m_levels, s, k, 16);
            assert!(rel_close(got, want, 1e-6), "case {seed} k {k}: {got} vs {want}");
        }
    }
}

#[test]
fn block_diagonal_relative_sparsity_is_level_sparsity() {
    let blocks = [random_unitary(4, 1), dft(6), random_unitary(5, 2)];
    let a = block_diagonal(&blocks);
    let levels = vec![4, 10, 15];
    let sp = SparsityLevels::new(levels.clone(), vec![2, 3, 1]).unwrap();
    for k in 1..=3 {
        for mode in [SparsityMode::Exact, SparsityMode::Bound] {
            let got = relative_sparsity(&ExplicitMatrix(a.clone()), &levels, &sp, k, mode).unwrap();
            if mode == SparsityMode::Exact {
                assert!(rel_close(got, sp.s[k - 1] as f64, 1e-9), "k {k}: {got}");
            } else {
                assert!(got >= sp.s[k - 1] as f64 - 1e-9, "bound below exact at k {k}");
            }
        }
    }
}

#[test]
fn permutation_kronecker_relative_sparsity() {
    let w = random_unitary(4, 5);
    for pi in [[0usize, 1, 2], [2, 0, 1], [1, 2, 0], [2, 1, 0]] {
        let a = permutation(&pi).kronecker(&w);
        let levels = vec![4, 8, 12];
        let sp = SparsityLevels::new(levels.clone(), vec![1, 2, 3]).unwrap();
        for k in 1..=3 {
            let got = relative_sparsity(&ExplicitMatrix(a.clone()), &levels, &sp, k, SparsityMode::Exact)
                .unwrap();
            let want = sp.s[pi[k - 1]] as f64;
            assert!(rel_close(got, want, 1e-9), "pi {pi:?} k {k}: {got} vs {want}");
        }
    }
}

#[test]
fn dft_kronecker_relative_sparsity_is_between_average_and_total() {
    let r = 3;
    let a = dft(r).kronecker(&random_unitary(4, 9));
    let levels = vec![4, 8, 12];
    let sp = SparsityLevels::new(levels.clone(), vec![1, 2, 2]).unwrap();
    let s = sp.total() as f64;
    for k in 1..=r {
        let got = relative_sparsity(&ExplicitMatrix(a.clone()), &levels, &sp, k, SparsityMode::Exact)
            .unwrap();
        assert!(got >= s / r as f64 - 1e-9 && got <= s + 1e-9, "k {k}: {got}");
    }
}

fn level_strategy() -> impl Strategy<Value = (Vec<usize>, Vec<usize>, Vec<C64>)> {
    prop::collection::vec(1usize..=6, 1..=3)
        .prop_flat_map(|widths| {
            let s = widths.iter().map(|&w| 0..=w).collect::<Vec<_>>();
            let total: usize = widths.iter().sum();
            (
                Just(widths),
                s,
                prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), total..=total + 4),
            )
        })
        .prop_map(|(widths, s, beta)| {
            let mut levels = Vec::new();
            let mut acc = 0;
            for w in widths {
                acc += w;
                levels.push(acc);
            }
            (levels, s, beta.into_iter().map(|(a, b)| C64::new(a, b)).collect())
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn sigma_matches_enumeration((levels, s, beta) in level_strategy()) {
        let sp = SparsityLevels::new(levels.clone(), s.clone()).unwrap();
        let got = sigma_s_m(&beta, &sp);
        let want = brute_sigma(&beta, &levels, &s);
        prop_assert!((got - want).abs() <= 1e-12 * (1.0 + want));
    }

    #[test]
    fn sigma_matches_enumeration_on_wide_levels(
        beta in prop::collection::vec(-1.0f64..1.0, 12),
        s0 in 0usize..=12,
    ) {
        let beta: Vec<C64> = beta.into_iter().map(c).collect();
        let sp = SparsityLevels::new(vec![12], vec![s0]).unwrap();
        prop_assert!((sigma_s_m(&beta, &sp) - brute_sigma(&beta, &[12], &[s0])).abs() < 1e-12);
    }
}
