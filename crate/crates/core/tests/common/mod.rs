//! Test-side oracles and seeded generators. The oracles avoid the library's
//! own solvers and product routines.

#![allow(dead_code)]

use homlie::linalg::{int, Mat, Scalar, Vector};
use homlie::{zoo, Cocycle, ExtensionBundle, GramForm, StructureConstants};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn example() -> ExtensionBundle {
    zoo::example_bundle(&Mat::identity(3)).unwrap()
}

/// `x * y` straight from the coefficient table.
pub fn raw_product(alg: &StructureConstants, x: &[Scalar], y: &[Scalar]) -> Vector {
    let n = alg.dim();
    let mut out = vec![Scalar::zero(); n];
    for i in 0..n {
        if x[i].is_zero() {
            continue;
        }
        for j in 0..n {
            if y[j].is_zero() {
                continue;
            }
            let c = &x[i] * &y[j];
            for (k, o) in out.iter_mut().enumerate() {
                *o += &c * alg.coeff(i, j, k);
            }
        }
    }
    out
}

pub fn mat_vec(m: &Mat, v: &[Scalar]) -> Vector {
    (0..m.rows())
        .map(|r| (0..m.cols()).fold(Scalar::zero(), |acc, c| acc + &m[(r, c)] * &v[c]))
        .collect()
}

pub fn unit(n: usize, i: usize) -> Vector {
    (0..n).map(|k| if k == i { Scalar::one() } else { Scalar::zero() }).collect()
}

pub fn form_value(form: &GramForm, x: &[Scalar], y: &[Scalar]) -> Scalar {
    let gy = mat_vec(&form.gram, y);
    x.iter().zip(&gy).fold(Scalar::zero(), |acc, (a, b)| acc + a * b)
}

/// Leibniz rule on every basis pair, by direct substitution.
pub fn leibniz_holds(alg: &StructureConstants, d: &Mat) -> bool {
    let n = alg.dim();
    for i in 0..n {
        for j in 0..n {
            let (ei, ej) = (unit(n, i), unit(n, j));
            let lhs = mat_vec(d, &raw_product(alg, &ei, &ej));
            let a = raw_product(alg, &mat_vec(d, &ei), &ej);
            let b = raw_product(alg, &ei, &mat_vec(d, &ej));
            for k in 0..n {
                if lhs[k] != &a[k] + &b[k] {
                    return false;
                }
            }
        }
    }
    true
}

pub fn skew_for(form: &GramForm, d: &Mat) -> bool {
    let n = form.dim;
    (0..n).all(|i| {
        (0..n).all(|j| {
            let (ei, ej) = (unit(n, i), unit(n, j));
            (form_value(form, &mat_vec(d, &ei), &ej) + form_value(form, &ei, &mat_vec(d, &ej))).is_zero()
        })
    })
}

/// Plain Gauss-Jordan solve of `rows * x = rhs`; `None` if inconsistent.
pub fn gauss_solve(mut rows: Vec<Vector>, mut rhs: Vector, unknowns: usize) -> Option<Vector> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..unknowns {
        let Some(p) = (r..rows.len()).find(|&p| !rows[p][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        rhs.swap(r, p);
        let inv = Scalar::one() / &rows[r][c];
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        rhs[r] *= &inv;
        for q in 0..rows.len() {
            if q != r && !rows[q][c].is_zero() {
                let f = rows[q][c].clone();
                for k in 0..unknowns {
                    let t = &f * &rows[r][k];
                    rows[q][k] -= t;
                }
                let t = &f * &rhs[r];
                rhs[q] -= t;
            }
        }
        pivots.push(c);
        r += 1;
    }
    if rhs[r..].iter().any(|x| !x.is_zero()) {
        return None;
    }
    let mut x = vec![Scalar::zero(); unknowns];
    for (row, &c) in pivots.iter().enumerate() {
        x[c] = rhs[row].clone();
    }
    Some(x)
}

/// Searches for `tau` with `tau([e_i,e_j]) = theta(e_i,e_j)` over all
/// `dim_v * dim_g0` entries at once.
pub fn brute_coboundary(g0: &StructureConstants, theta: &Cocycle) -> Option<Mat> {
    let n = g0.dim();
    let r = theta.dim_v();
    let unknowns = r * n;
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let br = raw_product(g0, &unit(n, i), &unit(n, j));
            for l in 0..r {
                let mut row = vec![Scalar::zero(); unknowns];
                for (c, b) in br.iter().enumerate() {
                    row[l * n + c] = b.clone();
                }
                rows.push(row);
                rhs.push(theta.basis_value(i, j)[l].clone());
            }
        }
    }
    let x = gauss_solve(rows, rhs, unknowns)?;
    Some(Mat::from_fn(r, n, |l, c| x[l * n + c].clone()))
}

pub fn random_int(rng: &mut ChaCha8Rng, bound: i64) -> Scalar {
    int(rng.gen_range(-bound..=bound))
}

pub fn random_nonzero(rng: &mut ChaCha8Rng, bound: i64) -> Scalar {
    loop {
        let x = rng.gen_range(-bound..=bound);
        if x != 0 {
            return int(x);
        }
    }
}

pub fn random_vec(rng: &mut ChaCha8Rng, n: usize, bound: i64) -> Vector {
    (0..n).map(|_| random_int(rng, bound)).collect()
}

pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, bound: i64) -> Mat {
    Mat::from_fn(rows, cols, |_, _| random_int(rng, bound))
}

pub fn combine(ms: &[Mat], coeffs: &[Scalar]) -> Mat {
    let (r, c) = (ms[0].rows(), ms[0].cols());
    ms.iter()
        .zip(coeffs)
        .fold(Mat::zeros(r, c), |acc, (m, k)| &acc + &m.scale(k))
}

/// Quadratic base algebras used for trivial extensions.
pub fn quadratic_bases() -> Vec<(&'static str, StructureConstants, GramForm)> {
    let sl2 = zoo::sl2();
    let kappa = sl2.killing_form().unwrap();
    vec![
        ("sl2", sl2, kappa),
        ("osc4", zoo::osc4(), zoo::osc4_metric()),
        ("abelian_4", zoo::abelian(4), GramForm::identity(4)),
    ]
}

/// A trivial extension with a random base, `dim V` in 1..=3, a random
/// diagonal metric on `V` and `B|g0` a random nonzero multiple of `B0`.
pub fn random_trivial(seed: u64) -> (String, ExtensionBundle) {
    let mut rng = rng(seed);
    let bases = quadratic_bases();
    let (name, g0, b0) = &bases[rng.gen_range(0..bases.len())];
    let r = rng.gen_range(1..=3);
    let diag: Vec<Scalar> = (0..r).map(|_| random_nonzero(&mut rng, 5)).collect();
    let b_v = GramForm::symmetric(Mat::diagonal(&diag));
    let c = random_nonzero(&mut rng, 3);
    let b_g0 = GramForm::symmetric(b0.gram.scale(&c));
    let bundle = zoo::trivial_extension_with(g0, b0, &b_g0, &b_v).unwrap();
    (format!("{name} dim V {r} scale {c}"), bundle)
}

/// The worked example with `beta = c Id` for a random nonzero `c`.
pub fn random_beta_bundle(seed: u64) -> (Scalar, ExtensionBundle) {
    let mut rng = rng(seed);
    let c = random_nonzero(&mut rng, 6);
    let bundle = zoo::example_bundle(&Mat::identity(3).scale(&c)).unwrap();
    (c, bundle)
}

/// Random combinations of the skew derivations of the example `g0`.
pub fn random_skew_tuple(seed: u64, g0: &StructureConstants, b0: &GramForm) -> Vec<Mat> {
    let mut rng = rng(seed);
    let basis = homlie::forms::skew_derivation_space(g0, b0).unwrap();
    let count = rng.gen_range(1..=3);
    (0..count)
        .map(|_| {
            let coeffs: Vec<Scalar> = (0..basis.len()).map(|_| random_int(&mut rng, 4)).collect();
            combine(&basis, &coeffs)
        })
        .collect()
}
