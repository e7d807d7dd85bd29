//! Bilinear forms, musical isomorphisms, and the linear spaces of
//! derivations, centroid elements, and invariant forms.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lie::StructureConstants;
use crate::linalg::{self, det, int, kernel_basis, solve, Mat, Scalar, Subspace, Vector};

/// A bilinear form `B(x, y) = x^T G y` given by its Gram matrix `G`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GramForm {
    pub dim: usize,
    pub symmetric: bool,
    pub gram: Mat,
}

/// One failing basis triple of a scalar-valued trilinear identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScalarResidual {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    #[serde(serialize_with = "linalg::serialize_scalar")]
    pub residual: Scalar,
}

impl GramForm {
    /// Wraps a square Gram matrix, recording whether it is symmetric.
    pub fn new(gram: Mat) -> Result<Self> {
        if !gram.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "Gram matrix is {}x{}",
                gram.rows(),
                gram.cols()
            )));
        }
        Ok(GramForm {
            dim: gram.rows(),
            symmetric: gram.is_symmetric(),
            gram,
        })
    }

    /// Panics unless `gram` is square and symmetric.
    pub fn symmetric(gram: Mat) -> Self {
        assert!(gram.is_symmetric(), "Gram matrix is not symmetric");
        GramForm {
            dim: gram.rows(),
            symmetric: true,
            gram,
        }
    }

    pub fn zero(n: usize) -> Self {
        GramForm::symmetric(Mat::zeros(n, n))
    }

    pub fn identity(n: usize) -> Self {
        GramForm::symmetric(Mat::identity(n))
    }

    pub fn value(&self, x: &[Scalar], y: &[Scalar]) -> Scalar {
        linalg::dot(x, &self.gram.apply(y))
    }

    pub fn entry(&self, i: usize, j: usize) -> &Scalar {
        &self.gram[(i, j)]
    }

    pub fn is_zero(&self) -> bool {
        self.gram.is_zero()
    }

    pub fn det(&self) -> Scalar {
        det(&self.gram).expect("square Gram matrix")
    }

    pub fn is_nondegenerate(&self) -> bool {
        !self.det().is_zero()
    }

    /// Coordinates of the functional `z -> B(x, z)`.
    pub fn flat(&self, x: &[Scalar]) -> Vector {
        self.gram.transpose().apply(x)
    }

    /// The vector `s` with `B(s, z) = phi(z)` for all `z`.
    pub fn sharp(&self, phi: &[Scalar]) -> Result<Vector> {
        let inv = self.sharp_matrix()?;
        Ok(inv.apply(phi))
    }

    /// Matrix of the sharp map, `(G^T)^{-1}`.
    pub fn sharp_matrix(&self) -> Result<Mat> {
        linalg::inverse(&self.gram.transpose())
            .ok_or_else(|| Error::SingularForm(format!("{}-dimensional form has zero determinant", self.dim)))
    }

    /// Restriction to the coordinate block `r0..r1`.
    pub fn restrict(&self, r0: usize, r1: usize) -> GramForm {
        GramForm::new(self.gram.block(r0, r1, r0, r1)).expect("square block")
    }

    pub fn scale(&self, c: &Scalar) -> GramForm {
        GramForm {
            dim: self.dim,
            symmetric: self.symmetric,
            gram: self.gram.scale(c),
        }
    }

    /// `B(T x, y) = B(x, T y)` on all basis pairs.
    pub fn is_symmetric_map(&self, t: &Mat) -> bool {
        let lhs = &t.transpose() * &self.gram;
        let rhs = &self.gram * t;
        lhs == rhs
    }

    /// `B(D x, y) = -B(x, D y)` on all basis pairs.
    pub fn is_skew_map(&self, d: &Mat) -> bool {
        let lhs = &d.transpose() * &self.gram;
        let rhs = &self.gram * d;
        (&lhs + &rhs).is_zero()
    }

    /// `B(x, s) = 0` on every pair of vectors from `sub`.
    pub fn is_isotropic(&self, sub: &Subspace) -> bool {
        let b = sub.basis();
        b.iter().all(|x| b.iter().all(|y| self.value(x, y).is_zero()))
    }
}

/// `B([e_i,e_j],e_k) - B(e_i,[e_j,e_k])` for every triple where it is
/// nonzero.
pub fn check_invariant(alg: &StructureConstants, form: &GramForm) -> Result<Vec<ScalarResidual>> {
    let n = alg.dim();
    if form.dim != n {
        return Err(Error::DimensionMismatch(format!(
            "form has dimension {}, algebra has {n}",
            form.dim
        )));
    }
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let ij = alg.basis_product(i, j);
            for k in 0..n {
                let lhs = linalg::dot(ij, &form.gram.column(k));
                let rhs = linalg::dot(form.gram.row(i), alg.basis_product(j, k));
                let r = lhs - rhs;
                if !r.is_zero() {
                    out.push(ScalarResidual { i, j, k, residual: r });
                }
            }
        }
    }
    Ok(out)
}

pub fn is_nondegenerate(form: &GramForm) -> bool {
    form.is_nondegenerate()
}

/// Leibniz residuals `D[e_i,e_j] - [D e_i, e_j] - [e_i, D e_j]`, by direct
/// substitution.
pub fn leibniz_defect(alg: &StructureConstants, d: &Mat) -> Vec<(usize, usize, Vector)> {
    let n = alg.dim();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let lhs = d.apply(alg.basis_product(i, j));
            let a = alg.product_unchecked(&d.column(i), &linalg::unit_vec(n, j));
            let b = alg.product_unchecked(&linalg::unit_vec(n, i), &d.column(j));
            let r = linalg::sub_vec(&linalg::sub_vec(&lhs, &a), &b);
            if !linalg::is_zero_vec(&r) {
                out.push((i, j, r));
            }
        }
    }
    out
}

pub fn is_derivation(alg: &StructureConstants, d: &Mat) -> bool {
    d.rows() == alg.dim() && d.cols() == alg.dim() && leibniz_defect(alg, d).is_empty()
}

/// Accumulates dense linear constraints on `unknowns` variables.
struct System {
    unknowns: usize,
    rows: Vec<Vector>,
}

impl System {
    fn new(unknowns: usize) -> Self {
        System { unknowns, rows: Vec::new() }
    }

    fn push(&mut self, row: Vector) {
        if !linalg::is_zero_vec(&row) {
            self.rows.push(row);
        }
    }

    fn kernel(self) -> Vec<Vector> {
        if self.rows.is_empty() {
            return (0..self.unknowns).map(|i| linalg::unit_vec(self.unknowns, i)).collect();
        }
        kernel_basis(&Mat::from_rows(self.rows).expect("equal-length rows"))
    }
}

/// Variable index of entry `(r, c)` of an unknown `n x n` matrix.
fn var(n: usize, r: usize, c: usize) -> usize {
    r * n + c
}

fn leibniz_rows(alg: &StructureConstants, sys: &mut System) {
    let n = alg.dim();
    for i in 0..n {
        let j0 = if alg.is_skew() { i + 1 } else { 0 };
        for j in j0..n {
            for k in 0..n {
                let mut row = linalg::zero_vec(n * n);
                for m in 0..n {
                    // D[e_i,e_j]_k
                    row[var(n, k, m)] += alg.coeff(i, j, m);
                    // - [D e_i, e_j]_k - [e_i, D e_j]_k
                    row[var(n, m, i)] -= alg.coeff(m, j, k);
                    row[var(n, m, j)] -= alg.coeff(i, m, k);
                }
                sys.push(row);
            }
        }
    }
}

fn skew_rows(form: &GramForm, sys: &mut System) {
    let n = form.dim;
    for i in 0..n {
        for j in i..n {
            let mut row = linalg::zero_vec(n * n);
            for m in 0..n {
                row[var(n, m, i)] += form.entry(m, j);
                row[var(n, m, j)] += form.entry(i, m);
            }
            sys.push(row);
        }
    }
}

fn symmetric_map_rows(form: &GramForm, sys: &mut System) {
    let n = form.dim;
    for i in 0..n {
        for j in i + 1..n {
            let mut row = linalg::zero_vec(n * n);
            for m in 0..n {
                row[var(n, m, i)] += form.entry(m, j);
                row[var(n, m, j)] -= form.entry(i, m);
            }
            sys.push(row);
        }
    }
}

fn to_matrices(n: usize, kernel: Vec<Vector>) -> Vec<Mat> {
    kernel.into_iter().map(|v| Mat::from_flat(n, n, v)).collect()
}

/// Basis of `Der(g)`.
pub fn derivation_space(alg: &StructureConstants) -> Vec<Mat> {
    let n = alg.dim();
    let mut sys = System::new(n * n);
    leibniz_rows(alg, &mut sys);
    to_matrices(n, sys.kernel())
}

/// Basis of the derivations that are skew for `form`.
pub fn skew_derivation_space(alg: &StructureConstants, form: &GramForm) -> Result<Vec<Mat>> {
    let n = alg.dim();
    if form.dim != n {
        return Err(Error::DimensionMismatch("form and algebra dimensions differ".into()));
    }
    let mut sys = System::new(n * n);
    leibniz_rows(alg, &mut sys);
    skew_rows(form, &mut sys);
    Ok(to_matrices(n, sys.kernel()))
}

fn centroid_rows(alg: &StructureConstants, sys: &mut System) {
    let n = alg.dim();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                // T[e_i,e_j] = [T e_i, e_j] and T[e_i,e_j] = [e_i, T e_j]
                let mut left = linalg::zero_vec(n * n);
                let mut right = linalg::zero_vec(n * n);
                for m in 0..n {
                    let c = alg.coeff(i, j, m);
                    left[var(n, k, m)] += c;
                    right[var(n, k, m)] += c;
                    left[var(n, m, i)] -= alg.coeff(m, j, k);
                    right[var(n, m, j)] -= alg.coeff(i, m, k);
                }
                sys.push(left);
                sys.push(right);
            }
        }
    }
}

/// Basis of the centroid: maps with `T[x,y] = [T x, y] = [x, T y]`.
pub fn centroid(alg: &StructureConstants) -> Vec<Mat> {
    let n = alg.dim();
    let mut sys = System::new(n * n);
    centroid_rows(alg, &mut sys);
    to_matrices(n, sys.kernel())
}

/// Basis of the centroid elements that are symmetric for `form`.
pub fn symmetric_centroid(alg: &StructureConstants, form: &GramForm) -> Result<Vec<Mat>> {
    let n = alg.dim();
    if form.dim != n {
        return Err(Error::DimensionMismatch("form and algebra dimensions differ".into()));
    }
    let mut sys = System::new(n * n);
    centroid_rows(alg, &mut sys);
    symmetric_map_rows(form, &mut sys);
    Ok(to_matrices(n, sys.kernel()))
}

/// Direct check of `T[x,y] = [T x, y] = [x, T y]` on basis pairs.
pub fn is_centroid_member(alg: &StructureConstants, t: &Mat) -> bool {
    let n = alg.dim();
    (0..n).all(|i| {
        (0..n).all(|j| {
            let lhs = t.apply(alg.basis_product(i, j));
            lhs == alg.product_unchecked(&t.column(i), &linalg::unit_vec(n, j))
                && lhs == alg.product_unchecked(&linalg::unit_vec(n, i), &t.column(j))
        })
    })
}

pub fn is_invertible_member(t: &Mat) -> bool {
    t.is_square() && !det(t).expect("square").is_zero()
}

/// Some `a` with `ad(a) = d`, if one exists; the solution has all free
/// coordinates set to zero.
pub fn is_inner(alg: &StructureConstants, d: &Mat) -> Option<Vector> {
    let n = alg.dim();
    if d.rows() != n || d.cols() != n {
        return None;
    }
    // ad(a)[k][j] = sum_i a_i c[i][j][k]
    let m = Mat::from_fn(n * n, n, |row, i| {
        let (k, j) = (row / n, row % n);
        alg.coeff(i, j, k).clone()
    });
    let rhs: Vector = (0..n * n).map(|row| d[(row / n, row % n)].clone()).collect();
    solve(&m, &rhs).expect("consistent shapes").map(|s| s.particular)
}

/// Upper-triangle variable index for a symmetric unknown matrix.
fn sym_var(n: usize, p: usize, q: usize) -> usize {
    let (p, q) = if p <= q { (p, q) } else { (q, p) };
    p * n - p * (p + 1) / 2 + q
}

fn sym_matrix(n: usize, v: &[Scalar]) -> Mat {
    Mat::from_fn(n, n, |p, q| v[sym_var(n, p, q)].clone())
}

/// Basis of the invariant symmetric bilinear forms.
pub fn invariant_form_space(alg: &StructureConstants) -> Vec<GramForm> {
    let n = alg.dim();
    let unknowns = n * (n + 1) / 2;
    let mut sys = System::new(unknowns);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let mut row = linalg::zero_vec(unknowns);
                for m in 0..n {
                    row[sym_var(n, m, k)] += alg.coeff(i, j, m);
                    row[sym_var(n, i, m)] -= alg.coeff(j, k, m);
                }
                sys.push(row);
            }
        }
    }
    sys.kernel()
        .into_iter()
        .map(|v| GramForm::symmetric(sym_matrix(n, &v)))
        .collect()
}

/// Integer coefficient vectors of length `len` with sup-norm exactly `s`,
/// in lexicographic order of the coefficient sequence `0, 1, -1, 2, -2, ...`.
fn shell(len: usize, s: i64) -> impl Iterator<Item = Vec<i64>> {
    let values: Vec<i64> = std::iter::once(0).chain((1..=s).flat_map(|c| [c, -c])).collect();
    let base = values.len();
    let total = base.checked_pow(len as u32).unwrap_or(usize::MAX);
    (0..total).filter_map(move |mut code| {
        let mut v = vec![0; len];
        for slot in v.iter_mut().rev() {
            *slot = values[code % base];
            code /= base;
        }
        (v.iter().any(|c| c.abs() == s)).then_some(v)
    })
}

/// Number of seeded random points used to decide that the isotropic family
/// contains no non-degenerate member before enumerating.
const GENERIC_PROBES: usize = 16;

/// Bounded search for an invariant metric for which `sub` is isotropic.
///
/// Isotropy is imposed as a linear condition on the invariant-form space.
/// Candidates are integer combinations of the resulting basis, enumerated by
/// increasing sup-norm up to `search_bound`. `None` means nothing was found
/// within the bound.
pub fn find_metric_isotropic(alg: &StructureConstants, sub: &Subspace, search_bound: u32) -> Option<GramForm> {
    let n = alg.dim();
    let space = invariant_form_space(alg);
    let sb = sub.basis();
    let mut sys = System::new(space.len());
    for (a, x) in sb.iter().enumerate() {
        for y in &sb[a..] {
            sys.push(space.iter().map(|f| f.value(x, y)).collect());
        }
    }
    let family: Vec<Mat> = sys
        .kernel()
        .into_iter()
        .map(|coeffs| {
            let mut m = Mat::zeros(n, n);
            for (c, f) in coeffs.iter().zip(&space) {
                if !c.is_zero() {
                    m = &m + &f.gram.scale(c);
                }
            }
            m
        })
        .collect();
    if family.is_empty() {
        return None;
    }
    let combine = |coeffs: &[i64]| {
        let mut m = Mat::zeros(n, n);
        for (c, f) in coeffs.iter().zip(&family) {
            if *c != 0 {
                m = &m + &f.scale(&int(*c));
            }
        }
        m
    };
    // The determinant is a polynomial in the coefficients; if it vanishes at
    // many random wide-range points it is identically zero.
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let generic = (0..GENERIC_PROBES).any(|_| {
        let coeffs: Vec<i64> = (0..family.len()).map(|_| rng.gen_range(-1_000_000..=1_000_000)).collect();
        !det(&combine(&coeffs)).expect("square").is_zero()
    });
    if !generic {
        return None;
    }
    for s in 1..=i64::from(search_bound) {
        for coeffs in shell(family.len(), s) {
            let m = combine(&coeffs);
            if !det(&m).expect("square").is_zero() {
                return Some(GramForm::symmetric(m));
            }
        }
    }
    None
}

/// `{x : B(x, s) = 0 for all s in sub}`.
pub fn orthogonal_complement(form: &GramForm, sub: &Subspace) -> Result<Subspace> {
    if !form.is_nondegenerate() {
        return Err(Error::SingularForm("orthogonal complement needs a non-degenerate form".into()));
    }
    if sub.ambient_dim() != form.dim {
        return Err(Error::DimensionMismatch("subspace and form dimensions differ".into()));
    }
    if sub.is_zero() {
        return Ok(Subspace::full(form.dim));
    }
    let rows: Vec<Vector> = sub.basis().iter().map(|s| form.gram.apply(s)).collect();
    let m = Mat::from_rows(rows)?;
    Ok(Subspace::span(form.dim, kernel_basis(&m)))
}

/// Whether `m` lies in the span of `space`.
pub fn contains_matrix(space: &[Mat], m: &Mat) -> bool {
    let n = m.rows() * m.cols();
    let sub = Subspace::span(n, space.iter().map(|x| x.as_slice().to_vec()));
    sub.contains(m.as_slice())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::unit_vec;

    #[test]
    fn abelian_spaces_are_everything() {
        let g = StructureConstants::abelian(3);
        assert_eq!(derivation_space(&g).len(), 9);
        assert_eq!(invariant_form_space(&g).len(), 6);
        assert_eq!(centroid(&g).len(), 9);
    }

    #[test]
    fn identity_form_flat_and_sharp() {
        let f = GramForm::identity(3);
        let x = vec![int(1), int(-2), int(5)];
        assert_eq!(f.flat(&x), x);
        assert_eq!(f.sharp(&x).unwrap(), x);
        assert!(matches!(GramForm::zero(2).sharp(&[int(1), int(0)]), Err(Error::SingularForm(_))));
    }

    #[test]
    fn complement_of_full_space_is_zero() {
        let f = GramForm::identity(4);
        assert!(orthogonal_complement(&f, &Subspace::full(4)).unwrap().is_zero());
        let c = orthogonal_complement(&f, &Subspace::coordinate(4, [1])).unwrap();
        assert_eq!(c, Subspace::coordinate(4, [0, 2, 3]));
    }

    #[test]
    fn isotropic_search_fails_on_totally_isotropic_abelian() {
        let g = StructureConstants::abelian(2);
        assert!(find_metric_isotropic(&g, &Subspace::full(2), 3).is_none());
        let found = find_metric_isotropic(&g, &Subspace::coordinate(2, [0]), 3).unwrap();
        assert!(found.is_nondegenerate());
        assert!(found.value(&unit_vec(2, 0), &unit_vec(2, 0)).is_zero());
    }

    #[test]
    fn shell_enumeration_order() {
        let s1: Vec<Vec<i64>> = shell(2, 1).collect();
        assert_eq!(s1.len(), 8);
        assert_eq!(s1[0], vec![0, 1]);
        assert!(s1.iter().all(|v| v.iter().any(|c| c.abs() == 1)));
        assert_eq!(shell(2, 2).count(), 25 - 9);
    }

    #[test]
    fn inner_of_zero_is_zero() {
        let mut g = StructureConstants::abelian(3);
        g.set_basis_product(0, 1, unit_vec(3, 2));
        let a = is_inner(&g, &Mat::zeros(3, 3)).unwrap();
        assert!(linalg::is_zero_vec(&a));
    }
}
