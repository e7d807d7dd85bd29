mod common;

use homlie::linalg::{self, frac, int, Mat, Scalar, Subspace};
use num_traits::Zero;
use proptest::prelude::*;

fn small_matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = Mat> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(|(r, c)| {
        prop::collection::vec(-4i64..=4, r * c).prop_map(move |v| Mat::from_flat(r, c, v.into_iter().map(int).collect()))
    })
}

fn square_matrix(max: usize) -> impl Strategy<Value = Mat> {
    (1..=max).prop_flat_map(|n| {
        prop::collection::vec(-3i64..=3, n * n).prop_map(move |v| Mat::from_flat(n, n, v.into_iter().map(int).collect()))
    })
}

proptest! {
    #[test]
    fn rref_transform_reproduces_reduced(m in small_matrix(6, 6)) {
        let (r, p) = linalg::rref_with_transform(&m);
        prop_assert_eq!(&p * &m, r.reduced);
        prop_assert!(linalg::inverse(&p).is_some());
    }

    #[test]
    fn kernel_vectors_are_annihilated(m in small_matrix(6, 7)) {
        let ker = linalg::kernel_basis(&m);
        for v in &ker {
            prop_assert!(common::mat_vec(&m, v).iter().all(Zero::is_zero));
        }
        prop_assert_eq!(ker.len() + linalg::rank(&m), m.cols());
    }

    #[test]
    fn solve_consistent_iff_ranks_agree(m in small_matrix(5, 5), seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let rhs = common::random_vec(&mut rng, m.rows(), 3);
        let aug = Mat::from_fn(m.rows(), m.cols() + 1, |i, j| {
            if j < m.cols() { m[(i, j)].clone() } else { rhs[i].clone() }
        });
        let sol = linalg::solve(&m, &rhs).unwrap();
        prop_assert_eq!(sol.is_some(), linalg::rank(&m) == linalg::rank(&aug));
        if let Some(s) = sol {
            prop_assert_eq!(common::mat_vec(&m, &s.particular), rhs);
        }
    }

    #[test]
    fn solve_agrees_with_oracle(m in small_matrix(5, 5), seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let rhs = common::random_vec(&mut rng, m.rows(), 3);
        let ours = linalg::solve(&m, &rhs).unwrap();
        let oracle = common::gauss_solve(m.to_rows(), rhs.clone(), m.cols());
        prop_assert_eq!(ours.is_some(), oracle.is_some());
    }

    #[test]
    fn inverse_is_two_sided(m in square_matrix(6)) {
        if let Some(inv) = linalg::inverse(&m) {
            prop_assert_eq!(&m * &inv, Mat::identity(m.rows()));
            prop_assert_eq!(&inv * &m, Mat::identity(m.rows()));
        } else {
            prop_assert!(linalg::det(&m).unwrap().is_zero());
        }
    }

    #[test]
    fn subspace_dimension_formula(a in small_matrix(4, 6), b in small_matrix(4, 6)) {
        let n = 6;
        let pad = |m: &Mat| Subspace::span(n, m.to_rows().into_iter().map(|mut r| { r.resize(n, Scalar::zero()); r }));
        let (sa, sb) = (pad(&a), pad(&b));
        let sum = sa.sum(&sb);
        let meet = sa.intersection(&sb);
        prop_assert_eq!(sa.dim() + sb.dim(), sum.dim() + meet.dim());
        prop_assert!(sum.contains_subspace(&sa) && sa.contains_subspace(&meet));
    }

    #[test]
    fn scalar_text_round_trip(p in -1000i64..1000, q in 1i64..1000) {
        let x = frac(p, q);
        prop_assert_eq!(linalg::parse_scalar(&linalg::format_scalar(&x)).unwrap(), x);
    }
}

/// Determinant vanishes exactly when the rank drops, on seeded matrices up to
/// 10x10 with a share of forced rank deficiency.
#[test]
fn det_nonzero_iff_full_rank_seeded() {
    let mut rng = common::rng(7);
    for t in 0..200 {
        let n = 1 + t % 10;
        let mut m = common::random_matrix(&mut rng, n, n, 3);
        if t % 3 == 0 && n > 1 {
            for c in 0..n {
                let v = &m[(0, c)] + &m[(1 % n, c)];
                m[(n - 1, c)] = v;
            }
        }
        let d = linalg::det(&m).unwrap();
        assert_eq!(!d.is_zero(), linalg::rank(&m) == n, "matrix {t}: {m:?}");
    }
}

#[test]
fn det_of_known_matrix() {
    let m = Mat::from_i64(&[&[2, 0, 1], &[1, 3, 2], &[1, 1, 2]]);
    assert_eq!(linalg::det(&m).unwrap(), int(6));
    assert!(linalg::det(&Mat::zeros(2, 3)).is_err());
}

#[test]
fn parse_scalar_forms() {
    assert_eq!(linalg::parse_scalar("2/4").unwrap(), frac(1, 2));
    assert_eq!(linalg::parse_scalar("-3").unwrap(), int(-3));
    assert!(linalg::parse_scalar("1/0").is_err());
    assert!(linalg::parse_scalar("x").is_err());
}
