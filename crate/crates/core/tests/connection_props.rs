mod common;

use common::{form_value, raw_product, unit};
use homlie::connection::{self, SimplicityVerdict};
use homlie::homlie as hl;
use homlie::linalg::{frac, int, Subspace, Vector};
use homlie::{zoo, BilinearProduct, Error, ExtensionBundle, HomLieStructure};
use num_traits::Zero;
use proptest::prelude::*;

fn setup(bundle: &ExtensionBundle) -> (HomLieStructure, BilinearProduct) {
    let pair = hl::compute_hk(bundle).unwrap();
    let prime = hl::build_alpha_prime(bundle, &pair).unwrap();
    let conn = connection::connection_product(&bundle.b, &prime).unwrap();
    (prime, conn)
}

fn bundles() -> Vec<(String, ExtensionBundle)> {
    let mut out = vec![("example".to_string(), common::example())];
    for seed in 0..10 {
        out.push(common::random_trivial(seed));
    }
    for seed in 0..3 {
        let (c, b) = common::random_beta_bundle(seed);
        out.push((format!("beta {c}"), b));
    }
    out
}

#[test]
fn product_solves_the_pairing_system() {
    for (name, bundle) in bundles() {
        let (prime, conn) = setup(&bundle);
        let (b, mu) = (&bundle.b, &prime.mu);
        let n = bundle.dim();
        for i in 0..n {
            for j in 0..n {
                let (x, y) = (unit(n, i), unit(n, j));
                let xy = raw_product(&conn, &x, &y);
                for k in 0..n {
                    let z = unit(n, k);
                    let lhs = form_value(b, &xy, &z) * int(2);
                    let rhs = form_value(b, &raw_product(mu, &x, &y), &z)
                        + form_value(b, &raw_product(mu, &z, &x), &y)
                        + form_value(b, &raw_product(mu, &z, &y), &x);
                    assert_eq!(lhs, rhs, "{name} ({i},{j},{k})");
                }
            }
        }
    }
}

#[test]
fn commutator_and_skew_pairing() {
    for (name, bundle) in bundles() {
        let (prime, conn) = setup(&bundle);
        let n = bundle.dim();
        for i in 0..n {
            for j in 0..n {
                let (x, y) = (unit(n, i), unit(n, j));
                let comm: Vector = raw_product(&conn, &x, &y)
                    .iter()
                    .zip(raw_product(&conn, &y, &x))
                    .map(|(a, b)| a - b)
                    .collect();
                assert_eq!(comm, raw_product(&prime.mu, &x, &y), "{name}");
                for k in 0..n {
                    let z = unit(n, k);
                    let s = form_value(&bundle.b, &raw_product(&conn, &x, &y), &z)
                        + form_value(&bundle.b, &y, &raw_product(&conn, &x, &z));
                    assert!(s.is_zero(), "{name} ({i},{j},{k})");
                }
            }
        }
    }
}

#[test]
fn skew_exactly_when_cocycle_vanishes() {
    for (name, bundle) in bundles() {
        let (_, conn) = setup(&bundle);
        let n = bundle.dim();
        let skew = (0..n).all(|i| {
            (0..n).all(|j| {
                let (x, y) = (unit(n, i), unit(n, j));
                raw_product(&conn, &x, &y)
                    .iter()
                    .zip(raw_product(&conn, &y, &x))
                    .all(|(a, b)| (a + b).is_zero())
            })
        });
        assert_eq!(skew, bundle.theta.is_zero(), "{name}");
    }
}

#[test]
fn reports_pass_on_example_and_variants() {
    for (name, bundle) in bundles() {
        let pair = hl::compute_hk(&bundle).unwrap();
        let (prime, conn) = setup(&bundle);
        let rep = connection::connection_report(&bundle, &pair, &conn, &prime, &prime.alpha).unwrap();
        let failed: Vec<_> = rep.failures().map(|e| e.anchor.clone()).collect();
        assert!(failed.is_empty(), "{name}: {failed:?}");
        let (_, dot) = connection::g0_connection(&bundle, &pair, &conn).unwrap();
        assert!(dot.all_pass(), "{name}");
    }
}

#[test]
fn mu_invariance_iff_derivations_vanish() {
    for (name, bundle) in bundles() {
        let pair = hl::compute_hk(&bundle).unwrap();
        let alpha = hl::build_alpha(&bundle, &pair).unwrap();
        let invariant = connection::check_mu_invariance_of_b(&bundle, &alpha).unwrap();
        let direct = homlie::forms::check_invariant(&alpha.mu, &bundle.b).unwrap().is_empty();
        assert_eq!(invariant, direct, "{name}");
        assert_eq!(invariant, bundle.theta.is_zero(), "{name}");
    }
}

#[test]
fn unital_algebra_structure() {
    let bundle = common::example();
    let (prime, conn) = setup(&bundle);
    let g = connection::build_g(&bundle.b, &prime, &conn).unwrap();
    assert_eq!(g.base.dim(), 10);
    assert_eq!(g.base.names()[0], "1");
    assert_eq!(connection::find_unit(&g.base), Some(unit(10, 0)));
    for p in 0..10 {
        for q in 0..10 {
            let (x, y) = (unit(10, p), unit(10, q));
            let xy = raw_product(&g.base, &x, &y);
            let yx = raw_product(&g.base, &y, &x);
            assert!((&xy[0] - &yx[0]).is_zero(), "scalar part of the commutator");
        }
    }
}

#[test]
fn burnside_on_small_algebras() {
    let mat2 = zoo::matrix2();
    assert_eq!(connection::find_unit(&mat2), Some(vec![int(1), int(0), int(0), int(1)]));
    let rep = connection::burnside_simplicity(&mat2, 50, 3, 5).unwrap();
    assert_eq!(rep.mult_algebra_dim, 16);
    assert!(rep.absolutely_simple && rep.probe.failures.is_empty());

    let ff = zoo::direct_sum_ff();
    let rep = connection::burnside_simplicity(&ff, 50, 3, 5).unwrap();
    assert_eq!(rep.mult_algebra_dim, 2);
    assert_eq!(rep.verdict, SimplicityVerdict::UndeterminedOverClosure);
    let u1 = Subspace::span(2, [unit(2, 0)]);
    assert_eq!(connection::ideal_closure(&ff, &u1), u1);

    assert!(matches!(connection::burnside_simplicity(&zoo::heisenberg3(), 5, 1, 3), Err(Error::Precondition(_))));
}

#[test]
fn example_g_is_absolutely_simple() {
    let bundle = common::example();
    let (prime, conn) = setup(&bundle);
    let g = connection::build_g(&bundle.b, &prime, &conn).unwrap();
    assert_eq!(connection::multiplication_algebra_dim(&g.base), 100);
    let (quotient, iso) = connection::quotient_homlie(&g, &prime).unwrap();
    assert!(iso);
    assert_eq!(quotient.mu, prime.mu);
}

#[test]
fn example_products() {
    let bundle = common::example();
    let (_, conn) = setup(&bundle);
    let e = |i| unit(9, i);
    // a1 b2 = b3 + v3/2
    let mut want = e(5);
    want[8] = frac(1, 2);
    assert_eq!(raw_product(&conn, &e(0), &e(4)), want);
    // a1 a2 = (a3 + b3)/2
    let mut want = vec![int(0); 9];
    want[2] = frac(1, 2);
    want[5] = frac(1, 2);
    assert_eq!(raw_product(&conn, &e(0), &e(1)), want);
    for j in 3..6 {
        for k in 3..6 {
            assert!(raw_product(&conn, &e(j), &e(k)).iter().all(Zero::is_zero));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(30))]

    #[test]
    fn fourth_powers_vanish(seed in any::<u64>()) {
        let bundle = common::example();
        let (_, conn) = setup(&bundle);
        let mut rng = common::rng(seed);
        let y = common::random_vec(&mut rng, 9, 20);
        let y2 = raw_product(&conn, &y, &y);
        prop_assert!(raw_product(&conn, &y2, &y2).iter().all(Zero::is_zero));
        prop_assert_eq!(connection::fourth_power(&conn, &y), vec![int(0); 9]);
    }

    #[test]
    fn simplicity_certificate_agrees_with_probes(seed in 0u64..1000) {
        let mat2 = zoo::matrix2();
        let rep = connection::burnside_simplicity(&mat2, 20, seed, 4).unwrap();
        prop_assert!(!rep.absolutely_simple || rep.probe.failures.is_empty());
    }
}
