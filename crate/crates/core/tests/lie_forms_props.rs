mod common;

use homlie::forms::{self, GramForm};
use homlie::linalg::{self, int, Mat, Subspace};
use homlie::zoo::{self, ZooItem};
use homlie::StructureConstants;
use num_traits::Zero;
use proptest::prelude::*;

fn lie_zoo() -> Vec<(&'static str, StructureConstants)> {
    let (g0, _, _) = zoo::example_g0(&Mat::identity(3)).unwrap();
    vec![
        ("abelian_3", zoo::abelian(3)),
        ("heisenberg3", zoo::heisenberg3()),
        ("sl2", zoo::sl2()),
        ("osc4", zoo::osc4()),
        ("example_g0", g0),
        ("example_g", common::example().g),
    ]
}

#[test]
fn killing_form_is_associative() {
    for (name, alg) in lie_zoo() {
        let kappa = alg.killing_form().unwrap();
        let n = alg.dim();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let (x, y, z) = (common::unit(n, i), common::unit(n, j), common::unit(n, k));
                    let lhs = common::form_value(&kappa, &common::raw_product(&alg, &x, &y), &z);
                    let rhs = common::form_value(&kappa, &x, &common::raw_product(&alg, &y, &z));
                    assert_eq!(lhs, rhs, "{name} ({i},{j},{k})");
                }
            }
        }
    }
}

#[test]
fn nilpotent_implies_solvable_and_zero_killing() {
    let mut algebras = lie_zoo();
    for seed in 0..20 {
        let (_, bundle) = common::random_trivial(seed);
        algebras.push(("trivial", bundle.g));
    }
    for seed in 0..5 {
        let (_, bundle) = common::random_beta_bundle(seed);
        algebras.push(("beta", bundle.g));
    }
    for (name, alg) in algebras {
        if alg.is_nilpotent() {
            assert!(alg.is_solvable(), "{name}");
            assert!(alg.killing_form().unwrap().is_zero(), "{name}");
        }
    }
}

#[test]
fn center_is_killed_by_ad() {
    for (name, alg) in lie_zoo() {
        let n = alg.dim();
        for z in alg.center().basis() {
            for i in 0..n {
                let prod = common::raw_product(&alg, &common::unit(n, i), z);
                assert!(prod.iter().all(Zero::is_zero), "{name}");
            }
        }
    }
}

#[test]
fn zoo_classification() {
    let osc = zoo::osc4();
    assert!(osc.is_solvable() && !osc.is_nilpotent());
    let sl2 = zoo::sl2();
    assert!(!sl2.is_solvable());
    assert!(sl2.killing_form().unwrap().is_nondegenerate());
    assert!(zoo::heisenberg3().is_nilpotent());
    let (g0, _, _) = zoo::example_g0(&Mat::identity(3)).unwrap();
    assert_eq!(g0.lower_central_series().iter().map(Subspace::dim).collect::<Vec<_>>(), vec![6, 3, 0]);
    let g = common::example().g;
    assert_eq!(g.lower_central_series().iter().map(Subspace::dim).collect::<Vec<_>>(), vec![9, 6, 3, 0]);
}

#[test]
fn zoo_outputs_validate() {
    let names = [
        "abelian_3", "heisenberg3", "sl2", "osc4", "ff", "mat2", "example_g0", "example", "trivial_sl2_2",
        "trivial_osc4_1", "trivial_abelian4_3",
    ];
    for name in names {
        match zoo::stock(name).unwrap() {
            ZooItem::Algebra { alg, form } => {
                if alg.is_skew() {
                    assert!(alg.jacobi_defect().unwrap().is_empty(), "{name}");
                }
                if let Some(f) = form {
                    assert!(forms::check_invariant(&alg, &f).unwrap().is_empty(), "{name}");
                    assert!(f.is_nondegenerate(), "{name}");
                }
            }
            ZooItem::Bundle(b) => {
                assert!(b.g.jacobi_defect().unwrap().is_empty(), "{name}");
                assert!(forms::check_invariant(&b.g, &b.b).unwrap().is_empty(), "{name}");
                assert!(forms::check_invariant(&b.g0, &b.b0).unwrap().is_empty(), "{name}");
                assert!(b.b.is_nondegenerate() && b.b0.is_nondegenerate(), "{name}");
            }
        }
    }
    assert!(zoo::stock("trivial_heisenberg3_1").is_err());
    assert!(zoo::stock("nope").is_err());
}

#[test]
fn example_derivations_are_outer_skew_derivations() {
    let (g0, b0, ds) = zoo::example_g0(&Mat::identity(3)).unwrap();
    let derived = linalg::Subspace::coordinate(6, 3..6);
    assert_eq!(g0.product_space(&Subspace::full(6), &Subspace::full(6)), derived);
    for d in &ds {
        assert!(common::leibniz_holds(&g0, d));
        assert!(common::skew_for(&b0, d));
        // an inner derivation would map into span{b}
        assert!(!derived.contains_subspace(&linalg::image(d)));
        assert!(forms::is_inner(&g0, d).is_none());
    }
}

#[test]
fn derivation_spaces_pass_independent_leibniz() {
    let mut cases: Vec<(StructureConstants, Option<GramForm>)> = lie_zoo().into_iter().map(|(_, a)| (a, None)).collect();
    let (g0, b0, _) = zoo::example_g0(&Mat::identity(3)).unwrap();
    cases.push((g0, Some(b0)));
    cases.push((zoo::osc4(), Some(zoo::osc4_metric())));
    let sl2 = zoo::sl2();
    let kappa = sl2.killing_form().unwrap();
    cases.push((sl2, Some(kappa)));
    for (alg, form) in cases {
        let space = forms::derivation_space(&alg);
        for d in &space {
            assert!(common::leibniz_holds(&alg, d));
        }
        if let Some(f) = form {
            let skew = forms::skew_derivation_space(&alg, &f).unwrap();
            for d in &skew {
                assert!(common::leibniz_holds(&alg, d));
                assert!(common::skew_for(&f, d));
            }
        }
    }
    assert_eq!(forms::derivation_space(&zoo::sl2()).len(), 3);
}

#[test]
fn invariant_form_spaces_are_invariant() {
    for (name, alg) in lie_zoo() {
        for f in forms::invariant_form_space(&alg) {
            assert!(forms::check_invariant(&alg, &f).unwrap().is_empty(), "{name}");
            assert!(f.gram.is_symmetric(), "{name}");
        }
    }
    assert_eq!(forms::invariant_form_space(&zoo::sl2()).len(), 1);
}

#[test]
fn isotropic_metric_search_on_example() {
    let bundle = common::example();
    let v = bundle.v_subspace();
    let found = forms::find_metric_isotropic(&bundle.g, &v, 2).expect("metric with V isotropic");
    assert!(found.is_nondegenerate());
    assert!(found.is_isotropic(&v));
    assert!(forms::check_invariant(&bundle.g, &found).unwrap().is_empty());
    // sl2 carries only multiples of the Killing form, which has no isotropic line along h
    let h_line = Subspace::coordinate(3, [2]);
    assert!(forms::find_metric_isotropic(&zoo::sl2(), &h_line, 3).is_none());
}

#[test]
fn centroid_of_simple_algebra_is_scalar() {
    let sl2 = zoo::sl2();
    let c = forms::centroid(&sl2);
    assert_eq!(c.len(), 1);
    assert!(forms::is_centroid_member(&sl2, &Mat::identity(3).scale(&int(5))));
    assert!(forms::is_invertible_member(&Mat::identity(3)));
    assert!(!forms::is_invertible_member(&Mat::zeros(3, 3)));
}

fn nondegenerate_form() -> impl Strategy<Value = GramForm> {
    (1usize..=5)
        .prop_flat_map(|n| prop::collection::vec(-3i64..=3, n * n).prop_map(move |v| Mat::from_flat(n, n, v.into_iter().map(int).collect())))
        .prop_filter_map("singular", |m| {
            let sym = &m + &m.transpose();
            let f = GramForm::symmetric(sym);
            f.is_nondegenerate().then_some(f)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sharp_inverts_flat(form in nondegenerate_form(), seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let x = common::random_vec(&mut rng, form.dim, 5);
        prop_assert_eq!(form.sharp(&form.flat(&x)).unwrap(), x);
    }

    #[test]
    fn complement_dimension(form in nondegenerate_form(), seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let n = form.dim;
        let k = (seed as usize) % (n + 1);
        let sub = Subspace::span(n, (0..k).map(|_| common::random_vec(&mut rng, n, 3)));
        let perp = forms::orthogonal_complement(&form, &sub).unwrap();
        prop_assert_eq!(sub.dim() + perp.dim(), n);
        for p in perp.basis() {
            for s in sub.basis() {
                prop_assert!(common::form_value(&form, s, p).is_zero());
            }
        }
    }

    #[test]
    fn invariant_forms_of_trivial_extensions(seed in 0u64..10_000) {
        let (name, bundle) = common::random_trivial(seed);
        for f in forms::invariant_form_space(&bundle.g) {
            prop_assert!(forms::check_invariant(&bundle.g, &f).unwrap().is_empty(), "{}", name);
        }
        prop_assert!(bundle.b.is_nondegenerate());
    }
}
