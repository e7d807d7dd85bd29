//! V-valued 2-cocycles, central extensions, and the validated extension
//! datum every later construction starts from.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::forms::{self, check_invariant, GramForm};
use crate::lie::{default_names, StructureConstants, TripleResidual};
use crate::linalg::{self, axpy, rref, solve, zero_vec, Mat, Scalar, Subspace, Vector};
use crate::report::{CheckReport, Failure};

/// A skew bilinear map `theta: g0 x g0 -> V`, with
/// `theta(e_i, e_j) = sum_l t[i][j][l] v_l`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cocycle {
    dim_g0: usize,
    dim_v: usize,
    tensor: Vec<Scalar>,
    v_names: Vec<String>,
}

impl Cocycle {
    pub fn zero(dim_g0: usize, dim_v: usize) -> Self {
        Cocycle {
            dim_g0,
            dim_v,
            tensor: vec![Scalar::zero(); dim_g0 * dim_g0 * dim_v],
            v_names: default_names("v", dim_v),
        }
    }

    pub fn with_v_names(mut self, names: Vec<String>) -> Self {
        assert_eq!(names.len(), self.dim_v);
        self.v_names = names;
        self
    }

    pub fn dim_g0(&self) -> usize {
        self.dim_g0
    }

    pub fn dim_v(&self) -> usize {
        self.dim_v
    }

    pub fn v_names(&self) -> &[String] {
        &self.v_names
    }

    fn at(&self, i: usize, j: usize) -> usize {
        (i * self.dim_g0 + j) * self.dim_v
    }

    /// V-coordinates of `theta(e_i, e_j)`.
    pub fn basis_value(&self, i: usize, j: usize) -> &[Scalar] {
        let s = self.at(i, j);
        &self.tensor[s..s + self.dim_v]
    }

    /// Sets `theta(e_i, e_j) = v` and `theta(e_j, e_i) = -v`.
    pub fn set(&mut self, i: usize, j: usize, v: Vector) {
        assert_eq!(v.len(), self.dim_v);
        assert!(i != j || linalg::is_zero_vec(&v), "cocycle must vanish on the diagonal");
        let (s, t) = (self.at(i, j), self.at(j, i));
        for (l, c) in v.into_iter().enumerate() {
            self.tensor[t + l] = -c.clone();
            self.tensor[s + l] = c;
        }
    }

    pub fn value(&self, x: &[Scalar], y: &[Scalar]) -> Vector {
        let mut out = zero_vec(self.dim_v);
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if !yj.is_zero() {
                    axpy(&mut out, &(xi * yj), self.basis_value(i, j));
                }
            }
        }
        out
    }

    /// Matrix of the scalar form `theta_l`: entry `(i, j)` is
    /// `theta_l(e_i, e_j)`.
    pub fn component(&self, l: usize) -> Mat {
        Mat::from_fn(self.dim_g0, self.dim_g0, |i, j| self.basis_value(i, j)[l].clone())
    }

    pub fn is_zero(&self) -> bool {
        self.tensor.iter().all(Zero::is_zero)
    }

    pub(crate) fn tensor_mut(&mut self) -> &mut [Scalar] {
        &mut self.tensor
    }

    pub(crate) fn index(&self, i: usize, j: usize, l: usize) -> usize {
        self.at(i, j) + l
    }
}

/// `theta(e_i,[e_j,e_k]) + theta(e_j,[e_k,e_i]) + theta(e_k,[e_i,e_j])` for
/// every `i < j < k` where it is nonzero.
pub fn check_cocycle(g0: &StructureConstants, theta: &Cocycle) -> Result<Vec<TripleResidual>> {
    let n = g0.dim();
    if theta.dim_g0 != n {
        return Err(Error::DimensionMismatch(format!(
            "cocycle is defined on dimension {}, algebra has {n}",
            theta.dim_g0
        )));
    }
    let e = |i| linalg::unit_vec(n, i);
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let mut r = theta.value(&e(i), g0.basis_product(j, k));
                r = linalg::add_vec(&r, &theta.value(&e(j), g0.basis_product(k, i)));
                r = linalg::add_vec(&r, &theta.value(&e(k), g0.basis_product(i, j)));
                if !linalg::is_zero_vec(&r) {
                    out.push(TripleResidual { i, j, k, residual: r });
                }
            }
        }
    }
    Ok(out)
}

/// `theta(x, y) = sum_i B0(D_i x, y) v_i` for a tuple of `B0`-skew
/// derivations.
pub fn cocycle_from_derivations(g0: &StructureConstants, b0: &GramForm, ds: &[Mat]) -> Result<Cocycle> {
    let n = g0.dim();
    if b0.dim != n {
        return Err(Error::DimensionMismatch("form and algebra dimensions differ".into()));
    }
    for (l, d) in ds.iter().enumerate() {
        if d.rows() != n || d.cols() != n {
            return Err(Error::DimensionMismatch(format!("derivation {l} is not {n}x{n}")));
        }
        if let Some((i, j, r)) = forms::leibniz_defect(g0, d).into_iter().next() {
            return Err(Error::validation(
                "D([x,y]) = [D(x),y] + [x,D(y)]",
                format!("map {l} fails on ({i}, {j}) with residual {:?}", linalg::format_vec(&r)),
            ));
        }
        if !b0.is_skew_map(d) {
            return Err(Error::validation("B0(D(x),y) + B0(x,D(y)) = 0", format!("map {l} is not skew")));
        }
    }
    let mut theta = Cocycle::zero(n, ds.len());
    for (l, d) in ds.iter().enumerate() {
        // B0(D e_i, e_j) = (D^T G)_{ij}
        let m = &d.transpose() * &b0.gram;
        for i in 0..n {
            for j in 0..n {
                let idx = theta.index(i, j, l);
                theta.tensor_mut()[idx] = m[(i, j)].clone();
            }
        }
    }
    Ok(theta)
}

/// The inverse correspondence: `D_l(x)` is the sharp of `y -> theta_l(x, y)`.
pub fn derivations_from_cocycle(g0: &StructureConstants, b0: &GramForm, theta: &Cocycle) -> Result<Vec<Mat>> {
    let n = g0.dim();
    if b0.dim != n || theta.dim_g0 != n {
        return Err(Error::DimensionMismatch("cocycle, form and algebra dimensions differ".into()));
    }
    let sharp = b0.sharp_matrix()?;
    // Column i of D_l is sharp(row i of theta_l).
    Ok((0..theta.dim_v)
        .map(|l| &sharp * &theta.component(l).transpose())
        .collect())
}

/// `[g0, g0]` as a subspace.
pub fn derived_algebra(g0: &StructureConstants) -> Subspace {
    let n = g0.dim();
    let mut vecs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            vecs.push(g0.basis_product(i, j).to_vec());
        }
    }
    Subspace::span(n, vecs)
}

/// A linear `tau: g0 -> V` with `theta(x, y) = tau([x, y])`, if one exists.
///
/// `tau` is fixed to vanish on the coordinate complement of `[g0, g0]` given
/// by the non-pivot columns of its canonical basis. The result is a
/// `dim_v x dim_g0` matrix.
pub fn is_coboundary(g0: &StructureConstants, theta: &Cocycle) -> Result<Option<Mat>> {
    let n = g0.dim();
    if theta.dim_g0 != n {
        return Err(Error::DimensionMismatch("cocycle and algebra dimensions differ".into()));
    }
    let derived = derived_algebra(g0);
    let pivots: Vec<usize> = if derived.is_zero() {
        Vec::new()
    } else {
        rref(&Mat::from_rows(derived.basis().to_vec())?).pivots
    };
    let complement: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();

    let mut rows = Vec::new();
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            rows.push(g0.basis_product(i, j).to_vec());
            pairs.push((i, j));
        }
    }
    for &f in &complement {
        rows.push(linalg::unit_vec(n, f));
    }
    if rows.is_empty() {
        return Ok(Some(Mat::zeros(theta.dim_v, n)));
    }
    let m = Mat::from_rows(rows)?;
    let mut tau = Mat::zeros(theta.dim_v, n);
    for l in 0..theta.dim_v {
        let mut rhs: Vector = pairs.iter().map(|&(i, j)| theta.basis_value(i, j)[l].clone()).collect();
        rhs.extend(complement.iter().map(|_| Scalar::zero()));
        match solve(&m, &rhs)? {
            None => return Ok(None),
            Some(s) => {
                for (c, x) in s.particular.into_iter().enumerate() {
                    tau[(l, c)] = x;
                }
            }
        }
    }
    Ok(Some(tau))
}

/// Bracket `[x+u, y+v] = [x,y]_0 + theta(x,y)` on `g0 + V`, without checking
/// the cocycle condition.
pub(crate) fn extension_unchecked(g0: &StructureConstants, theta: &Cocycle) -> StructureConstants {
    let n = g0.dim();
    let r = theta.dim_v;
    let mut names = g0.names().to_vec();
    names.extend(theta.v_names.iter().cloned());
    let mut g = StructureConstants::zero(names, true);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                g.set_coeff(i, j, k, g0.coeff(i, j, k).clone());
            }
            for l in 0..r {
                g.set_coeff(i, j, n + l, theta.basis_value(i, j)[l].clone());
            }
        }
    }
    g
}

/// The central extension of `g0` by `theta`; rejects non-cocycles.
pub fn central_extend(g0: &StructureConstants, theta: &Cocycle) -> Result<StructureConstants> {
    let defect = check_cocycle(g0, theta)?;
    if let Some(t) = defect.first() {
        return Err(Error::validation(
            anchors::COCYCLE,
            format!(
                "fails on ({}, {}, {}) with residual {:?}",
                t.i,
                t.j,
                t.k,
                linalg::format_vec(&t.residual)
            ),
        ));
    }
    Ok(extension_unchecked(g0, theta))
}

/// Radicals of the component forms `theta_l`, and their intersection.
pub fn cocycle_radicals(g0: &StructureConstants, theta: &Cocycle) -> Result<(Vec<Subspace>, Subspace)> {
    let n = g0.dim();
    if theta.dim_g0 != n {
        return Err(Error::DimensionMismatch("cocycle and algebra dimensions differ".into()));
    }
    // x is in Rad(theta_l) iff theta_l(x, e_j) = 0 for all j: kernel of the
    // transposed component matrix.
    let per: Vec<Subspace> = (0..theta.dim_v)
        .map(|l| linalg::kernel(&theta.component(l).transpose()))
        .collect();
    let joint = per.iter().fold(Subspace::full(n), |acc, s| acc.intersection(s));
    Ok((per, joint))
}

/// Stable keys for the checks performed on extension data.
pub mod anchors {
    pub const JACOBI_G0: &str = "[x,[y,z]]0 + [y,[z,x]]0 + [z,[x,y]]0 = 0";
    pub const JACOBI_G: &str = "[x,[y,z]] + [y,[z,x]] + [z,[x,y]] = 0";
    pub const METRIC_B0: &str = "B0: non-degenerate, symmetric, bilinear form";
    pub const METRIC_B: &str = "non-degenerate, symmetric, bilinear form";
    pub const INVARIANT_B0: &str = "B0([x,y]0,z) = B0(x,[y,z]0)";
    pub const INVARIANT_B: &str = "B([x,y],z) = B(x,[y,z])";
    pub const COCYCLE: &str = "θ(x,[y,z]) + θ(y,[z,x]) + θ(z,[x,y]) = 0";
    pub const EXTENSION: &str = "[x+u,y+v] = [x,y]0 + θ(x,y)";
    pub const V_CENTRAL: &str = "V ⊂ C(g)";
}

/// The standing datum: a quadratic Lie algebra `(g0, B0)`, a cocycle
/// `theta`, the extension `g = g0 + V` (V trailing), and an invariant metric
/// `B` on `g`.
#[derive(Clone, Debug)]
pub struct ExtensionBundle {
    pub g0: StructureConstants,
    pub b0: GramForm,
    pub theta: Cocycle,
    pub g: StructureConstants,
    pub b: GramForm,
    pub v_offset: usize,
}

fn triple_failures(d: Vec<TripleResidual>) -> Vec<Failure> {
    d.into_iter().map(|t| Failure::new(vec![t.i, t.j, t.k], &t.residual)).collect()
}

fn metric_failures(form: &GramForm) -> Vec<Failure> {
    let mut f = Vec::new();
    if !form.gram.is_symmetric() {
        f.push(Failure::note("Gram matrix is not symmetric"));
    }
    if !form.is_nondegenerate() {
        f.push(Failure::note("Gram matrix has zero determinant"));
    }
    f
}

/// Runs every bundle check in order and records each outcome.
pub fn validation_report(
    g0: &StructureConstants,
    b0: &GramForm,
    theta: &Cocycle,
    g: &StructureConstants,
    b: &GramForm,
) -> Result<CheckReport> {
    let n = g0.dim();
    let r = theta.dim_v;
    if b0.dim != n || theta.dim_g0 != n || g.dim() != n + r || b.dim != n + r {
        return Err(Error::DimensionMismatch(format!(
            "bundle dimensions: g0 {n}, B0 {}, theta {}x{}, g {}, B {}",
            b0.dim,
            theta.dim_g0,
            r,
            g.dim(),
            b.dim
        )));
    }
    let mut rep = CheckReport::new();
    rep.check(anchors::JACOBI_G0, triple_failures(g0.jacobi_defect()?));
    rep.check(anchors::METRIC_B0, metric_failures(b0));
    rep.check(
        anchors::INVARIANT_B0,
        check_invariant(g0, b0)?
            .into_iter()
            .map(|t| Failure::scalar(vec![t.i, t.j, t.k], &t.residual))
            .collect(),
    );
    rep.check(anchors::COCYCLE, triple_failures(check_cocycle(g0, theta)?));
    rep.check(anchors::JACOBI_G, triple_failures(g.jacobi_defect()?));
    rep.check(anchors::METRIC_B, metric_failures(b));
    rep.check(
        anchors::INVARIANT_B,
        check_invariant(g, b)?
            .into_iter()
            .map(|t| Failure::scalar(vec![t.i, t.j, t.k], &t.residual))
            .collect(),
    );
    let expected = extension_unchecked(g0, theta);
    let mut mismatch = Vec::new();
    for i in 0..n + r {
        for j in 0..n + r {
            let d = linalg::sub_vec(g.basis_product(i, j), expected.basis_product(i, j));
            if !linalg::is_zero_vec(&d) {
                mismatch.push(Failure::new(vec![i, j], &d));
            }
        }
    }
    rep.check(anchors::EXTENSION, mismatch);
    let center = g.center();
    let v_fail = (n..n + r)
        .filter(|&i| !center.contains(&linalg::unit_vec(n + r, i)))
        .map(|i| {
            let j = (0..n + r)
                .find(|&j| !linalg::is_zero_vec(g.basis_product(i, j)))
                .unwrap_or(0);
            Failure::new(vec![i, j], g.basis_product(i, j))
        })
        .collect();
    rep.check(anchors::V_CENTRAL, v_fail);
    Ok(rep)
}

pub(crate) fn first_failure_error(rep: &CheckReport) -> Option<Error> {
    rep.failures().next().map(|e| {
        let detail = e
            .failures
            .iter()
            .map(|f| format!("indices {:?} residual {:?}", f.indices, f.residual))
            .collect::<Vec<_>>()
            .join("; ");
        Error::validation(e.anchor.clone(), detail)
    })
}

impl ExtensionBundle {
    /// Builds `g` by central extension and validates the datum.
    pub fn new(g0: StructureConstants, b0: GramForm, theta: Cocycle, b: GramForm) -> Result<Self> {
        let g = extension_unchecked(&g0, &theta);
        Self::with_g(g0, b0, theta, g, b)
    }

    /// Validates the datum against a supplied `g`.
    pub fn with_g(g0: StructureConstants, b0: GramForm, theta: Cocycle, g: StructureConstants, b: GramForm) -> Result<Self> {
        let rep = validation_report(&g0, &b0, &theta, &g, &b)?;
        if let Some(e) = first_failure_error(&rep) {
            return Err(e);
        }
        let v_offset = g0.dim();
        Ok(ExtensionBundle {
            g0,
            b0,
            theta,
            g,
            b,
            v_offset,
        })
    }

    pub fn dim_g0(&self) -> usize {
        self.v_offset
    }

    pub fn dim_v(&self) -> usize {
        self.theta.dim_v()
    }

    pub fn dim(&self) -> usize {
        self.g.dim()
    }

    /// Projection `g -> g0` as a matrix.
    pub fn pi(&self) -> Mat {
        Mat::identity(self.dim()).block(0, self.dim_g0(), 0, self.dim())
    }

    /// Inclusion `g0 -> g`.
    pub fn iota(&self) -> Mat {
        self.pi().transpose()
    }

    /// Projection `g -> V` in V-coordinates.
    pub fn pi_v(&self) -> Mat {
        Mat::identity(self.dim()).block(self.dim_g0(), self.dim(), 0, self.dim())
    }

    pub fn g0_subspace(&self) -> Subspace {
        Subspace::coordinate(self.dim(), 0..self.dim_g0())
    }

    pub fn v_subspace(&self) -> Subspace {
        Subspace::coordinate(self.dim(), self.dim_g0()..self.dim())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{int, unit_vec};

    #[test]
    fn heisenberg_from_abelian_plane() {
        let g0 = StructureConstants::abelian(2);
        let mut theta = Cocycle::zero(2, 1);
        theta.set(0, 1, vec![int(1)]);
        let h = central_extend(&g0, &theta).unwrap();
        assert_eq!(h.dim(), 3);
        assert_eq!(h.bracket(&unit_vec(3, 0), &unit_vec(3, 1)).unwrap(), unit_vec(3, 2));
        assert!(h.jacobi_defect().unwrap().is_empty());
        assert_eq!(h.center(), Subspace::coordinate(3, [2]));
    }

    #[test]
    fn zero_cocycle_is_coboundary_with_zero_tau() {
        let g0 = StructureConstants::abelian(3);
        let theta = Cocycle::zero(3, 2);
        assert!(check_cocycle(&g0, &theta).unwrap().is_empty());
        assert!(is_coboundary(&g0, &theta).unwrap().unwrap().is_zero());
        let (per, joint) = cocycle_radicals(&g0, &theta).unwrap();
        assert!(per.iter().all(Subspace::is_full));
        assert!(joint.is_full());
    }

    #[test]
    fn nonzero_cocycle_on_abelian_is_not_coboundary() {
        let g0 = StructureConstants::abelian(2);
        let mut theta = Cocycle::zero(2, 1);
        theta.set(0, 1, vec![int(1)]);
        assert!(is_coboundary(&g0, &theta).unwrap().is_none());
    }

    #[test]
    fn empty_derivation_tuple_gives_empty_cocycle() {
        let g0 = StructureConstants::abelian(2);
        let t = cocycle_from_derivations(&g0, &GramForm::identity(2), &[]).unwrap();
        assert_eq!(t.dim_v(), 0);
    }

    #[test]
    fn non_skew_derivation_is_rejected() {
        let g0 = StructureConstants::abelian(2);
        let err = cocycle_from_derivations(&g0, &GramForm::identity(2), &[Mat::identity(2)]).unwrap_err();
        assert!(matches!(err, Error::Validation { .. }));
    }
}
