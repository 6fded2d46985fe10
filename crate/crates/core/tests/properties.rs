mod common;

use btc_core::classify::{gershgorin, is_b, is_b0, is_dd, is_sdd, is_z};
use btc_core::decompose::{decompose_b0, verify_cert};
use btc_core::spectra::{min_h_eigenvalue, residual, spectral_radius_nonneg};
use btc_core::{certify_definiteness, generate, GenKind, GenSpec, SpectraOptions, SymTensor, Verdict};
use proptest::prelude::*;

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
}

fn shape() -> impl Strategy<Value = (usize, usize)> {
    (2usize..=5, 1usize..=4)
}

fn tensor(kind: GenKind) -> impl Strategy<Value = SymTensor<f64>> {
    (shape(), any::<u64>(), prop_oneof![Just(1.0), Just(0.5)]).prop_map(move |((m, n), seed, d)| {
        generate(&GenSpec::new(kind, m, n, seed).with_density(d)).unwrap()
    })
}

fn tensor_and_x(kind: GenKind) -> impl Strategy<Value = (SymTensor<f64>, Vec<f64>)> {
    tensor(kind).prop_flat_map(|t| {
        let n = t.dim();
        (Just(t), prop::collection::vec(-1.0f64..1.0, n))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn x_dot_apply_is_eval((a, x) in tensor_and_x(GenKind::SymmetricArbitrary)) {
        let ax = a.apply(&x).unwrap();
        let dot: f64 = ax.iter().zip(&x).map(|(p, q)| p * q).sum();
        prop_assert!(close(dot, a.eval_xm(&x).unwrap(), 1e-12));
    }

    #[test]
    fn compressed_matches_dense((a, x) in tensor_and_x(GenKind::SymmetricArbitrary)) {
        prop_assert!(close(a.eval_xm(&x).unwrap(), common::dense_eval(&a, &x), 1e-12));
        for (p, q) in a.apply(&x).unwrap().iter().zip(common::dense_apply(&a, &x)) {
            prop_assert!(close(*p, q, 1e-12));
        }
    }

    #[test]
    fn eval_is_homogeneous((a, x) in tensor_and_x(GenKind::SymmetricArbitrary), t in -3.0f64..3.0) {
        let tx: Vec<f64> = x.iter().map(|v| t * v).collect();
        let want = t.powi(a.order() as i32) * a.eval_xm(&x).unwrap();
        prop_assert!(close(a.eval_xm(&tx).unwrap(), want, 1e-11));
    }

    #[test]
    fn storage_is_bounded_by_canonical_count(a in tensor(GenKind::SymmetricArbitrary)) {
        let (m, n) = (a.order() as u64, a.dim() as u64);
        // C(n + m - 1, m)
        let bound = (0..m).fold(1u64, |acc, k| acc * (n + k) / (k + 1));
        prop_assert!(a.nnz() as u64 <= bound);
    }

    #[test]
    fn b_implies_b0(a in tensor(GenKind::B)) {
        prop_assert!(is_b(&a, &0.0));
        prop_assert!(is_b0(&a, &0.0));
    }

    #[test]
    fn principal_subtensors_stay_in_class(a in tensor(GenKind::B), b0 in tensor(GenKind::B0), mask in 1u32..16) {
        for (t, strict) in [(&a, true), (&b0, false)] {
            let set: Vec<usize> = (0..t.dim()).filter(|i| mask & (1 << i) != 0).collect();
            if set.is_empty() {
                continue;
            }
            let sub = t.principal_subtensor(&set).unwrap();
            if strict {
                prop_assert!(is_b(&sub, &0.0));
            } else {
                prop_assert!(is_b0(&sub, &0.0));
            }
        }
    }

    #[test]
    fn gershgorin_translates_with_identity(a in tensor(GenKind::SymmetricArbitrary), c in -5.0f64..5.0) {
        let shifted = a.axpy(c, &SymTensor::identity(a.order(), a.dim()).unwrap()).unwrap();
        let g0 = gershgorin(&a);
        let g1 = gershgorin(&shifted);
        for (p, q) in g0.intervals.iter().zip(&g1.intervals) {
            prop_assert!(close(p.lo + c, q.lo, 1e-12));
            prop_assert!(close(p.hi + c, q.hi, 1e-12));
        }
    }

    #[test]
    fn decomposition_transfers_positivity((a, x) in tensor_and_x(GenKind::B0)) {
        let cert = decompose_b0(&a, &0.0).unwrap();
        prop_assert!(verify_cert(&a, &cert, &0.0).unwrap().valid);
        let scale = a.max_abs_entry().max(1.0);
        let ea = a.eval_xm(&x).unwrap();
        let em = cert.residual.eval_xm(&x).unwrap();
        if a.order() % 2 == 0 {
            prop_assert!(ea >= em - 1e-10 * scale);
        }
    }

    #[test]
    fn z_tensors_need_no_steps(a in tensor(GenKind::ZDd)) {
        let cert = decompose_b0(&a, &0.0).unwrap();
        prop_assert!(cert.steps.is_empty());
        prop_assert_eq!(&cert.residual, &a);
    }

    #[test]
    fn decomposition_scales(a in tensor(GenKind::B0), k in -3i32..=3) {
        // powers of two scale exactly
        let c = 2f64.powi(k);
        let base = decompose_b0(&a, &0.0).unwrap();
        let scaled = decompose_b0(&a.scale(c), &0.0).unwrap();
        prop_assert_eq!(base.steps.len(), scaled.steps.len());
        for (p, q) in base.steps.iter().zip(&scaled.steps) {
            prop_assert_eq!(&p.set, &q.set);
            prop_assert!(close(c * p.h, q.h, 1e-12));
        }
    }

    #[test]
    fn residual_is_z_and_dd(a in tensor(GenKind::B0)) {
        let cert = decompose_b0(&a, &0.0).unwrap();
        let tol = 1e-12 * a.max_abs_entry().max(1.0);
        prop_assert!(is_z(&cert.residual, &tol));
        prop_assert!(is_dd(&cert.residual, &tol));
    }

    #[test]
    fn b_residual_is_sdd(a in tensor(GenKind::B)) {
        prop_assert!(is_sdd(&decompose_b0(&a, &0.0).unwrap().residual, &0.0));
    }

    #[test]
    fn partial_all_one_closed_form(m in 2usize..=5, n in 1usize..=5, mask in 1u32..32, seed in prop::collection::vec(-1.0f64..1.0, 5)) {
        let set: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        prop_assume!(!set.is_empty());
        let x = &seed[..n];
        let e = SymTensor::<f64>::partial_all_one(m, n, &set).unwrap();
        let want = common::restricted_sum(x, &set).powi(m as i32);
        let mag = set.iter().map(|&j| x[j].abs()).sum::<f64>().powi(m as i32);
        prop_assert!((e.eval_xm(x).unwrap() - want).abs() <= 1e-12 * mag.max(f64::MIN_POSITIVE));
    }

    #[test]
    fn matrix_verdict_agrees_with_sylvester(n in 1usize..=6, seed in any::<u64>(), kind in prop_oneof![Just(GenKind::B), Just(GenKind::B0)]) {
        let a = generate(&GenSpec::new(kind, 2, n, seed)).unwrap();
        let verdict = certify_definiteness(&a, &0.0).unwrap().verdict;
        if verdict == Verdict::PositiveDefinite {
            prop_assert!(common::sylvester_pd(&common::matrix_of(&a)));
        }
        if kind == GenKind::B {
            prop_assert_eq!(verdict, Verdict::PositiveDefinite);
        }
    }

    #[test]
    fn matrix_radius_is_perron_root(n in 1usize..=5, seed in any::<u64>()) {
        let a = generate(&GenSpec::new(GenKind::Nonneg, 2, n, seed)).unwrap();
        let r = spectral_radius_nonneg(&a, 1e-13, 100_000).unwrap();
        let want = common::dominant_real_eigenvalue(&common::matrix_of(&a));
        prop_assert!(close(r.estimate, want, 1e-8), "{} vs {}", r.estimate, want);
    }

    #[test]
    fn eigenpairs_scale_with_the_tensor(n in 1usize..=3, seed in any::<u64>(), c in 0.25f64..4.0) {
        let a = generate(&GenSpec::new(GenKind::SymmetricArbitrary, 4, n, seed)).unwrap();
        let opts = SpectraOptions { restarts: 2, seed, ..SpectraOptions::default() };
        let scaled = a.scale(c);
        for p in min_h_eigenvalue(&a, &opts).unwrap().pairs {
            let r = residual(&scaled, c * p.lambda, &p.x).unwrap();
            prop_assert!(r <= 1e-9 * c.max(1.0), "{r}");
        }
    }
}
