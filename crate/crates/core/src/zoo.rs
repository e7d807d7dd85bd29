//! Deterministic fixtures: the nine-dimensional worked example and a few
//! stock algebras.

use num_traits::{One, Zero};

use crate::cocycle::{cocycle_from_derivations, extension_unchecked, Cocycle, ExtensionBundle};
use crate::error::{Error, Result};
use crate::forms::{self, GramForm};
use crate::lie::{default_names, StructureConstants};
use crate::linalg::{self, int, unit_vec, Mat, Scalar, Vector};

/// `i -> i+1 mod 3` on indices `0, 1, 2`.
fn cyc(i: usize) -> usize {
    (i + 1) % 3
}

fn names(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}

/// The scalar `c` with `beta = c * Id`, if any.
fn scalar_multiple_of_identity(beta: &Mat) -> Option<Scalar> {
    let c = beta[(0, 0)].clone();
    (*beta == Mat::identity(beta.rows()).scale(&c)).then_some(c)
}

/// The six-dimensional 2-step nilpotent algebra on `a1 a2 a3 b1 b2 b3`
/// with `[a_i, a_{i+1}] = b_{i+2}` (indices mod 3), its metric
/// `B0(a_j, b_k) = beta_jk`, and the three outer skew derivations.
///
/// Invariance of `B0` forces `beta` to be a nonzero multiple of the
/// identity; other values are rejected.
pub fn example_g0(beta: &Mat) -> Result<(StructureConstants, GramForm, Vec<Mat>)> {
    if beta.rows() != 3 || beta.cols() != 3 {
        return Err(Error::DimensionMismatch("beta must be 3x3".into()));
    }
    match scalar_multiple_of_identity(beta) {
        Some(c) if !c.is_zero() => {}
        _ if linalg::det(beta)?.is_zero() => return Err(Error::Precondition("beta is singular".into())),
        _ => {
            return Err(Error::Precondition(
                "B0 is invariant only when beta is a multiple of the identity".into(),
            ))
        }
    }
    let a = |i: usize| i;
    let b = |i: usize| 3 + i;
    let mut g0 = StructureConstants::zero(names(&["a1", "a2", "a3", "b1", "b2", "b3"]), true);
    for i in 0..3 {
        g0.set_basis_product(a(i), a(cyc(i)), unit_vec(6, b(cyc(cyc(i)))));
    }
    let gram = Mat::from_fn(6, 6, |p, q| match (p < 3, q < 3) {
        (true, false) => beta[(p, q - 3)].clone(),
        (false, true) => beta[(q, p - 3)].clone(),
        _ => Scalar::zero(),
    });
    let b0 = GramForm::symmetric(gram);
    let ds = (0..3)
        .map(|i| {
            let j = cyc(i);
            let k = cyc(j);
            let mut d = Mat::zeros(6, 6);
            // D_i(a_j) = a_k + b_k, D_i(b_j) = b_k
            d[(a(k), a(j))] = Scalar::one();
            d[(b(k), a(j))] = Scalar::one();
            d[(b(k), b(j))] = Scalar::one();
            // D_i(a_k) = -(a_j + b_j), D_i(b_k) = -b_j
            d[(a(j), a(k))] = -Scalar::one();
            d[(b(j), a(k))] = -Scalar::one();
            d[(b(j), b(k))] = -Scalar::one();
            d
        })
        .collect();
    Ok((g0, b0, ds))
}

/// The nine-dimensional extension of [`example_g0`] by `V = span{v1,v2,v3}`.
///
/// For `beta = Id` the metric on `g` is `B(b_i,b_j) = B(a_i,v_j) = δ_ij`
/// with every other pairing zero. For `beta = c * Id` the metric is solved
/// for inside the invariant-form space with the same block pattern.
pub fn example_bundle(beta: &Mat) -> Result<ExtensionBundle> {
    let (g0, b0, ds) = example_g0(beta)?;
    let theta = cocycle_from_derivations(&g0, &b0, &ds)?.with_v_names(names(&["v1", "v2", "v3"]));
    let b = if *beta == Mat::identity(3) {
        GramForm::symmetric(Mat::from_fn(9, 9, |p, q| {
            let hit = (3..6).contains(&p) && p == q || (p < 3 && q == p + 6) || (q < 3 && p == q + 6);
            if hit {
                Scalar::one()
            } else {
                Scalar::zero()
            }
        }))
    } else {
        let g = extension_unchecked(&g0, &theta);
        complete_metric(&g)?
    };
    ExtensionBundle::new(g0, b0, theta, b)
}

/// Invariant metric on the extended example with `b`-`b` block the identity
/// and the `a`-`a`, `v`-`v`, `a`-`b`, `b`-`v` blocks zero.
fn complete_metric(g: &StructureConstants) -> Result<GramForm> {
    let space = forms::invariant_form_space(g);
    let block = |p: usize| p / 3;
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for p in 0..9 {
        for q in p..9 {
            let target = match (block(p), block(q)) {
                (1, 1) => Some(if p == q { int(1) } else { int(0) }),
                (0, 0) | (2, 2) | (0, 1) | (1, 2) => Some(int(0)),
                _ => None,
            };
            if let Some(t) = target {
                rows.push(space.iter().map(|f| f.gram[(p, q)].clone()).collect::<Vector>());
                rhs.push(t);
            }
        }
    }
    let m = Mat::from_rows(rows)?;
    let sol = linalg::solve(&m, &rhs)?.ok_or_else(|| Error::Precondition("no invariant completion of the metric".into()))?;
    let mut gram = Mat::zeros(9, 9);
    for (c, f) in sol.particular.iter().zip(&space) {
        gram = &gram + &f.gram.scale(c);
    }
    let form = GramForm::symmetric(gram);
    if !form.is_nondegenerate() {
        return Err(Error::Precondition("invariant completion of the metric is degenerate".into()));
    }
    Ok(form)
}

pub fn abelian(n: usize) -> StructureConstants {
    StructureConstants::abelian(n)
}

/// `[e1, e2] = e3`.
pub fn heisenberg3() -> StructureConstants {
    let mut alg = StructureConstants::zero(default_names("e", 3), true);
    alg.set_basis_product(0, 1, unit_vec(3, 2));
    alg
}

/// Basis `e, f, h` with `[h,e] = 2e`, `[h,f] = -2f`, `[e,f] = h`.
pub fn sl2() -> StructureConstants {
    let mut alg = StructureConstants::zero(names(&["e", "f", "h"]), true);
    alg.set_basis_product(2, 0, vec![int(2), int(0), int(0)]);
    alg.set_basis_product(2, 1, vec![int(0), int(-2), int(0)]);
    alg.set_basis_product(0, 1, unit_vec(3, 2));
    alg
}

/// The oscillator algebra on `d, x, y, z`: `[d,x] = y`, `[d,y] = -x`,
/// `[x,y] = z`.
pub fn osc4() -> StructureConstants {
    let mut alg = StructureConstants::zero(names(&["d", "x", "y", "z"]), true);
    alg.set_basis_product(0, 1, unit_vec(4, 2));
    alg.set_basis_product(0, 2, vec![int(0), int(-1), int(0), int(0)]);
    alg.set_basis_product(1, 2, unit_vec(4, 3));
    alg
}

/// `B(d,z) = B(x,x) = B(y,y) = 1`.
pub fn osc4_metric() -> GramForm {
    GramForm::symmetric(Mat::from_i64(&[&[0, 0, 0, 1], &[0, 1, 0, 0], &[0, 0, 1, 0], &[1, 0, 0, 0]]))
}

/// `F ⊕ F` with componentwise multiplication.
pub fn direct_sum_ff() -> StructureConstants {
    let mut alg = StructureConstants::zero(default_names("u", 2), false);
    alg.set_basis_product(0, 0, unit_vec(2, 0));
    alg.set_basis_product(1, 1, unit_vec(2, 1));
    alg
}

/// The full 2x2 matrix algebra on `E11, E12, E21, E22`.
pub fn matrix2() -> StructureConstants {
    let label = ["E11", "E12", "E21", "E22"];
    let idx = |r: usize, c: usize| 2 * r + c;
    let mut alg = StructureConstants::zero(names(&label), false);
    for p in 0..4 {
        for q in 0..4 {
            let (i, j) = (p / 2, p % 2);
            let (k, l) = (q / 2, q % 2);
            if j == k {
                alg.set_basis_product(p, q, unit_vec(4, idx(i, l)));
            }
        }
    }
    alg
}

/// `g = g0 ⊕ V` with `θ = 0` and `B = B0 ⊥ B_V`.
pub fn trivial_extension(g0: &StructureConstants, b0: &GramForm, b_v: &GramForm) -> Result<ExtensionBundle> {
    trivial_extension_with(g0, b0, b0, b_v)
}

/// As [`trivial_extension`] but with `B|g0 = b_g0`, which may differ from
/// `B0`.
pub fn trivial_extension_with(g0: &StructureConstants, b0: &GramForm, b_g0: &GramForm, b_v: &GramForm) -> Result<ExtensionBundle> {
    let n = g0.dim();
    let r = b_v.dim;
    if b0.dim != n || b_g0.dim != n {
        return Err(Error::DimensionMismatch("metric dimension differs from g0".into()));
    }
    let theta = Cocycle::zero(n, r);
    let gram = Mat::from_fn(n + r, n + r, |p, q| match (p < n, q < n) {
        (true, true) => b_g0.gram[(p, q)].clone(),
        (false, false) => b_v.gram[(p - n, q - n)].clone(),
        _ => Scalar::zero(),
    });
    ExtensionBundle::new(g0.clone(), b0.clone(), theta, GramForm::new(gram)?)
}

/// A named fixture.
#[derive(Clone, Debug)]
pub enum ZooItem {
    Algebra {
        alg: StructureConstants,
        form: Option<GramForm>,
    },
    Bundle(Box<ExtensionBundle>),
}

/// Looks up a fixture by name.
///
/// Names: `abelian_<n>`, `heisenberg3`, `sl2`, `osc4`, `ff`, `mat2`,
/// `example_g0`, `example`, and `trivial_<g0>_<r>` for a trivial extension
/// of `sl2`, `osc4` or `abelian<n>` by an `r`-dimensional `V` with the
/// identity metric.
pub fn stock(name: &str) -> Result<ZooItem> {
    let algebra = |alg, form| Ok(ZooItem::Algebra { alg, form });
    match name {
        "heisenberg3" => algebra(heisenberg3(), None),
        "sl2" => {
            let alg = sl2();
            let form = alg.killing_form()?;
            algebra(alg, Some(form))
        }
        "osc4" => algebra(osc4(), Some(osc4_metric())),
        "ff" => algebra(direct_sum_ff(), None),
        "mat2" => algebra(matrix2(), None),
        "example_g0" => {
            let (alg, form, _) = example_g0(&Mat::identity(3))?;
            algebra(alg, Some(form))
        }
        "example" => Ok(ZooItem::Bundle(Box::new(example_bundle(&Mat::identity(3))?))),
        _ => {
            if let Some(n) = name.strip_prefix("abelian_").and_then(|s| s.parse::<usize>().ok()) {
                return algebra(abelian(n), Some(GramForm::identity(n)));
            }
            if let Some(rest) = name.strip_prefix("trivial_") {
                if let Some((base, r)) = rest.rsplit_once('_') {
                    let r: usize = r.parse().map_err(|_| Error::UnknownZoo(name.into()))?;
                    let base_name = base.replace("abelian", "abelian_");
                    if let ZooItem::Algebra { alg, form: Some(b0) } = stock(&base_name)? {
                        let bundle = trivial_extension(&alg, &b0, &GramForm::identity(r))?;
                        return Ok(ZooItem::Bundle(Box::new(bundle)));
                    }
                }
            }
            Err(Error::UnknownZoo(name.into()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivations_are_skew_and_outer() {
        let (g0, b0, ds) = example_g0(&Mat::identity(3)).unwrap();
        for d in &ds {
            assert!(forms::is_derivation(&g0, d));
            assert!(b0.is_skew_map(d));
            assert!(forms::is_inner(&g0, d).is_none());
        }
    }

    #[test]
    fn non_scalar_beta_rejected() {
        let beta = Mat::diagonal(&[int(1), int(2), int(3)]);
        assert!(matches!(example_g0(&beta), Err(Error::Precondition(_))));
        assert!(matches!(example_g0(&Mat::zeros(3, 3)), Err(Error::Precondition(_))));
    }

    #[test]
    fn scaled_beta_bundle_validates() {
        let bundle = example_bundle(&Mat::identity(3).scale(&int(2))).unwrap();
        assert_eq!(bundle.dim(), 9);
    }

    #[test]
    fn stock_names() {
        for name in ["heisenberg3", "sl2", "osc4", "ff", "mat2", "abelian_3", "example", "trivial_sl2_2", "trivial_abelian4_1"] {
            stock(name).unwrap();
        }
        assert!(matches!(stock("nope"), Err(Error::UnknownZoo(_))));
    }

    #[test]
    fn matrix_units_multiply() {
        let m = matrix2();
        assert_eq!(m.basis_product(1, 2), unit_vec(4, 0).as_slice());
        assert!(m.basis_product(1, 1).iter().all(Zero::is_zero));
    }
}
