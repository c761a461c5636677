mod common;

use common::*;
use proptest::prelude::*;
use sgs_core::basis::{fourier_frequency, fourier_index, wavelet_label, FunctionSystem, Interval, Label};
use sgs_core::crossgram::fast::{haar_synthesis, haar_synthesis_adjoint};
use sgs_core::crossgram::{assemble_section, IndexRange};
use sgs_core::csinf::{
    draw_scheme, effective_sparsity, flip_coefficients, relative_sparsity, ExplicitMatrix,
    SparsityLevels, SparsityMode,
};
use sgs_core::gensamp::{d_curve, empirical_quasi_optimality, gs_reconstruct, gs_reconstruct_qr};
use sgs_core::{CVec, C64};

fn cvec(v: &[(f64, f64)]) -> CVec {
    CVec::from_iterator(v.len(), v.iter().map(|&(a, b)| C64::new(a, b)))
}

fn pair_vec(len: usize) -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), len)
}

fn fh() -> (FunctionSystem, FunctionSystem) {
    (FunctionSystem::fourier(Interval::UNIT), FunctionSystem::haar(Interval::UNIT))
}

fn fl() -> (FunctionSystem, FunctionSystem) {
    (
        FunctionSystem::fourier(Interval::SYMMETRIC),
        FunctionSystem::legendre(Interval::SYMMETRIC),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn fourier_indexing_is_a_bijection(j in 1usize..1_000_000) {
        prop_assert_eq!(fourier_index(fourier_frequency(j)), j);
    }

    #[test]
    fn system_labels_round_trip(j in 1usize..5000, which in 0usize..4) {
        let sys = match which {
            0 => FunctionSystem::fourier(Interval::UNIT),
            1 => FunctionSystem::haar(Interval::UNIT),
            2 => FunctionSystem::legendre(Interval::SYMMETRIC),
            _ => FunctionSystem::daubechies(4, Interval::UNIT).unwrap(),
        };
        let label = sys.label(j);
        prop_assert_eq!(sys.index_of(label), Some(j));
        if j >= 2 && matches!(label, Label::Wavelet { .. }) {
            let (scale, shift) = wavelet_label(j);
            prop_assert_eq!(label, Label::Wavelet { scale, shift });
            prop_assert!(shift < 1u64 << scale);
        }
    }

    #[test]
    fn columns_obey_bessel(m in 1usize..24, extra in 0usize..64, legendre in any::<bool>()) {
        let (s, r) = if legendre { fl() } else { fh() };
        let a = assemble_section(&s, &r, IndexRange::leading(m + extra), IndexRange::leading(m)).unwrap();
        for j in 0..m {
            prop_assert!(a.entries.column(j).norm() <= 1.0 + 1e-9);
        }
    }

    #[test]
    fn section_adjoint_pairing(x in pair_vec(32), y in pair_vec(40), r0 in 1usize..20) {
        let (s, r) = fh();
        let rows = IndexRange::new(r0, r0 + 39).unwrap();
        let a = assemble_section(&s, &r, rows, IndexRange::leading(32)).unwrap();
        let (x, y) = (cvec(&x), cvec(&y));
        for fast in [false, true] {
            let (ax, aty) = if fast {
                (a.matvec_fast(&x, false).unwrap(), a.matvec_fast(&y, true).unwrap())
            } else {
                (a.matvec(&x, false).unwrap(), a.matvec(&y, true).unwrap())
            };
            let lhs = y.dotc(&ax);
            let rhs = aty.dotc(&x);
            prop_assert!((lhs - rhs).norm() < 1e-10);
        }
        let dense = a.matvec(&x, false).unwrap();
        prop_assert!((dense - a.matvec_fast(&x, false).unwrap()).norm() < 1e-10);
    }

    #[test]
    fn haar_synthesis_is_isometric_up_to_scale(v in pair_vec(64)) {
        let v = cvec(&v);
        let cells = haar_synthesis(v.as_slice());
        let back = haar_synthesis_adjoint(&cells);
        let n = cells.len() as f64;
        let cell_norm: f64 = cells.iter().map(|z| z.norm_sqr()).sum::<f64>() / n;
        prop_assert!((cell_norm - v.norm_squared()).abs() < 1e-10 * (1.0 + v.norm_squared()));
        let rescaled: Vec<C64> = back.iter().map(|z| z / n).collect();
        prop_assert!((CVec::from_vec(rescaled) - v).norm() < 1e-10);
    }

    #[test]
    fn restriction_matches_direct_assembly(
        r0 in 1usize..30, nr in 1usize..20, c0 in 1usize..10, nc in 1usize..10, legendre in any::<bool>(),
    ) {
        let (s, r) = if legendre { fl() } else { fh() };
        let big = assemble_section(&s, &r, IndexRange::leading(60), IndexRange::leading(20)).unwrap();
        let rows = IndexRange::new(r0, r0 + nr - 1).unwrap();
        let cols = IndexRange::new(c0, c0 + nc - 1).unwrap();
        let sub = big.restrict(rows, cols).unwrap();
        let direct = assemble_section(&s, &r, rows, cols).unwrap();
        prop_assert!((sub.entries - direct.entries).norm() < 1e-10);
    }

    #[test]
    fn gs_matches_qr_and_is_stable(y in pair_vec(48), e in pair_vec(48), m in 4usize..16) {
        let (s, r) = fh();
        let a = assemble_section(&s, &r, IndexRange::leading(48), IndexRange::leading(m)).unwrap();
        let y = cvec(&y);
        let cg = gs_reconstruct(&a, &y).unwrap();
        let qr = gs_reconstruct_qr(&a, &y).unwrap();
        prop_assert!((&cg.coeffs.values - &qr).norm() < 1e-8 * (1.0 + qr.norm()));
        // perturbation of the data moves the solution by at most D_{N,M} times as much
        let e = cvec(&e) * C64::new(1e-3, 0.0);
        let moved = gs_reconstruct_qr(&a, &(&y + &e)).unwrap();
        prop_assert!((moved - qr).norm() <= cg.d_nm * e.norm() * (1.0 + 1e-9));
    }

    #[test]
    fn flip_is_an_involution(v in pair_vec(40), b in 0usize..50) {
        let v = cvec(&v);
        prop_assert_eq!(flip_coefficients(&flip_coefficients(&v, b), b), v);
    }

    #[test]
    fn schemes_respect_their_levels(
        widths in prop::collection::vec(1usize..40, 1..5), frac in 0.0f64..=1.0, seed in any::<u64>(),
    ) {
        let mut levels = Vec::new();
        let mut acc = 0;
        for w in &widths {
            acc += w;
            levels.push(acc);
        }
        let counts: Vec<usize> = widths.iter().map(|&w| ((w as f64 * frac).round() as usize).max(1)).collect();
        let sch = draw_scheme(&levels, &counts, seed).unwrap();
        prop_assert_eq!(sch.len(), counts.iter().sum::<usize>());
        prop_assert!(sch.omega.windows(2).all(|w| w[0] < w[1]));
        prop_assert!(sch.omega.iter().all(|&i| i >= 1 && i <= acc));
        let mut lo = 0;
        for (k, &hi) in levels.iter().enumerate() {
            let inside = sch.omega.iter().filter(|&&i| i > lo && i <= hi).count();
            prop_assert_eq!(inside, counts[k]);
            lo = hi;
        }
        prop_assert_eq!(draw_scheme(&levels, &counts, seed).unwrap().omega, sch.omega);
    }

    #[test]
    fn effective_sparsity_grows_with_eps(v in pair_vec(30), e1 in 0.05f64..1.0, e2 in 0.05f64..1.0) {
        let v: Vec<C64> = cvec(&v).iter().copied().collect();
        let (lo, hi) = if e1 <= e2 { (e1, e2) } else { (e2, e1) };
        let levels = [5, 15, 30];
        let a = effective_sparsity(&v, &levels, lo).unwrap();
        let b = effective_sparsity(&v, &levels, hi).unwrap();
        prop_assert!(a.iter().zip(&b).all(|(x, y)| x <= y));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn relative_sparsity_never_exceeds_total(seed in 0u64..1000, s1 in 0usize..=2, s2 in 0usize..=2) {
        let a = random_unitary(8, seed);
        let levels = vec![3, 8];
        let sp = SparsityLevels::new(vec![4, 8], vec![s1, s2]).unwrap();
        for k in 1..=2 {
            let ex = relative_sparsity(&ExplicitMatrix(a.clone()), &levels, &sp, k, SparsityMode::Exact).unwrap();
            let bd = relative_sparsity(&ExplicitMatrix(a.clone()), &levels, &sp, k, SparsityMode::Bound).unwrap();
            prop_assert!(ex <= sp.total() as f64 + 1e-9);
            prop_assert!(ex <= bd + 1e-9);
        }
    }

    #[test]
    fn quasi_optimality_holds(coefs in pair_vec(24), m in 6usize..12) {
        let (s, r) = fl();
        let n = 40;
        let a = assemble_section(&s, &r, IndexRange::leading(n), IndexRange::leading(24)).unwrap();
        let beta = cvec(&coefs);
        let y = &a.entries * &beta;
        let head = a.restrict(IndexRange::leading(n), IndexRange::leading(m)).unwrap();
        let got = gs_reconstruct_qr(&head, &y).unwrap();
        let mut err = beta.clone();
        for i in 0..m {
            err[i] -= got[i];
        }
        let best = beta.rows(m, 24 - m).norm();
        let mu = empirical_quasi_optimality(&s, &r, n, m, 24).unwrap();
        prop_assert!(err.norm() <= mu * best * (1.0 + 1e-8) + 1e-12);
    }
}

#[test]
fn d_is_nonincreasing_in_n() {
    for (s, r, m) in [(fh().0, fh().1, 16), (fl().0, fl().1, 10)] {
        let a = assemble_section(&s, &r, IndexRange::leading(200), IndexRange::leading(m)).unwrap();
        let ns: Vec<usize> = (m..=200).collect();
        let d = d_curve(&a, &ns);
        assert!(d.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-10)), "{d:?}");
    }
}

#[test]
fn effective_sparsity_at_full_energy_counts_support() {
    let v: Vec<C64> = [0.0, 3.0, 0.0, 1.0, 0.0, 0.0, 2.0].iter().map(|&x| c(x)).collect();
    assert_eq!(effective_sparsity(&v, &[4, 7], 1.0).unwrap(), vec![2, 1]);
}
