//! Algebras given by structure constants, and the classical Lie-theoretic
//! invariants computed from them.

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::forms::GramForm;
use crate::linalg::{self, axpy, zero_vec, Mat, Scalar, Subspace, Vector};

/// A finite-dimensional algebra: `e_i * e_j = sum_k c[i][j][k] e_k`.
///
/// The `skew` flag marks alternating products (Lie brackets, Hom-Lie
/// products). Non-skew products such as the connection product use the same
/// type through the [`BilinearProduct`] alias.
#[derive(Clone, PartialEq, Eq)]
pub struct StructureConstants {
    dim: usize,
    names: Vec<String>,
    tensor: Vec<Scalar>,
    skew: bool,
}

pub type BilinearProduct = StructureConstants;

/// One failing basis triple of a trilinear identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TripleResidual {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    #[serde(serialize_with = "linalg::serialize_vec")]
    pub residual: Vector,
}

pub fn default_names(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

impl StructureConstants {
    /// The zero product on `names.len()` basis vectors.
    pub fn zero(names: Vec<String>, skew: bool) -> Self {
        let dim = names.len();
        StructureConstants {
            dim,
            names,
            tensor: vec![Scalar::zero(); dim * dim * dim],
            skew,
        }
    }

    pub fn abelian(n: usize) -> Self {
        StructureConstants::zero(default_names("e", n), true)
    }

    /// Builds a product from a function returning the coordinates of
    /// `e_i * e_j`.
    pub fn from_fn(names: Vec<String>, skew: bool, mut f: impl FnMut(usize, usize) -> Vector) -> Result<Self> {
        let mut out = StructureConstants::zero(names, skew);
        let n = out.dim;
        for i in 0..n {
            for j in 0..n {
                let v = f(i, j);
                if v.len() != n {
                    return Err(Error::DimensionMismatch(format!(
                        "product of basis {i},{j} has {} coordinates, expected {n}",
                        v.len()
                    )));
                }
                out.set_product(i, j, v);
            }
        }
        if skew {
            out.check_skew()?;
        }
        Ok(out)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn is_skew(&self) -> bool {
        self.skew
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    #[inline]
    fn at(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.dim + j) * self.dim + k
    }

    pub fn coeff(&self, i: usize, j: usize, k: usize) -> &Scalar {
        &self.tensor[self.at(i, j, k)]
    }

    pub fn set_coeff(&mut self, i: usize, j: usize, k: usize, c: Scalar) {
        let idx = self.at(i, j, k);
        self.tensor[idx] = c;
    }

    /// Coordinates of `e_i * e_j`.
    pub fn basis_product(&self, i: usize, j: usize) -> &[Scalar] {
        let s = self.at(i, j, 0);
        &self.tensor[s..s + self.dim]
    }

    fn set_product(&mut self, i: usize, j: usize, v: Vector) {
        let s = self.at(i, j, 0);
        for (k, c) in v.into_iter().enumerate() {
            self.tensor[s + k] = c;
        }
    }

    /// Sets `e_i * e_j = v`, and `e_j * e_i = -v` when the product is skew.
    pub fn set_basis_product(&mut self, i: usize, j: usize, v: Vector) {
        assert_eq!(v.len(), self.dim);
        if self.skew {
            assert!(i != j || linalg::is_zero_vec(&v), "skew product with nonzero square");
            self.set_product(j, i, v.iter().map(|x| -x).collect());
        }
        self.set_product(i, j, v);
    }

    pub fn with_names(mut self, names: Vec<String>) -> Self {
        assert_eq!(names.len(), self.dim);
        self.names = names;
        self
    }

    /// Verifies the skew flag against the tensor.
    pub fn check_skew(&self) -> Result<()> {
        if !self.skew {
            return Ok(());
        }
        for i in 0..self.dim {
            for j in i..self.dim {
                for k in 0..self.dim {
                    if *self.coeff(i, j, k) != -self.coeff(j, i, k) {
                        return Err(Error::validation(
                            "skew-symmetry",
                            format!(
                                "{} * {} and {} * {} are not negatives in coordinate {}",
                                self.names[i], self.names[j], self.names[j], self.names[i], self.names[k]
                            ),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    fn check_len(&self, v: &[Scalar], what: &str) -> Result<()> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "{what} has {} coordinates, algebra has dimension {}",
                v.len(),
                self.dim
            )));
        }
        Ok(())
    }

    /// Bilinear product of two arbitrary vectors.
    pub fn product(&self, x: &[Scalar], y: &[Scalar]) -> Result<Vector> {
        self.check_len(x, "left operand")?;
        self.check_len(y, "right operand")?;
        Ok(self.product_unchecked(x, y))
    }

    pub(crate) fn product_unchecked(&self, x: &[Scalar], y: &[Scalar]) -> Vector {
        let mut out = zero_vec(self.dim);
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let c = xi * yj;
                axpy(&mut out, &c, self.basis_product(i, j));
            }
        }
        out
    }

    /// Alias of [`product`](Self::product) for Lie brackets.
    pub fn bracket(&self, x: &[Scalar], y: &[Scalar]) -> Result<Vector> {
        self.product(x, y)
    }

    /// `e_i * y`.
    pub(crate) fn basis_left(&self, i: usize, y: &[Scalar]) -> Vector {
        let mut out = zero_vec(self.dim);
        for (j, yj) in y.iter().enumerate() {
            axpy(&mut out, yj, self.basis_product(i, j));
        }
        out
    }

    /// Left multiplication `y -> x * y`; for a Lie bracket this is `ad(x)`.
    pub fn ad(&self, x: &[Scalar]) -> Result<Mat> {
        self.check_len(x, "ad argument")?;
        let cols: Vec<Vector> = (0..self.dim)
            .map(|j| {
                let mut out = zero_vec(self.dim);
                for (i, xi) in x.iter().enumerate() {
                    axpy(&mut out, xi, self.basis_product(i, j));
                }
                out
            })
            .collect();
        Ok(Mat::from_columns(self.dim, &cols))
    }

    pub fn left_mult(&self, i: usize) -> Mat {
        Mat::from_fn(self.dim, self.dim, |r, j| self.coeff(i, j, r).clone())
    }

    pub fn right_mult(&self, i: usize) -> Mat {
        Mat::from_fn(self.dim, self.dim, |r, j| self.coeff(j, i, r).clone())
    }

    /// The cyclic sum `[e_i,[e_j,e_k]] + [e_j,[e_k,e_i]] + [e_k,[e_i,e_j]]`
    /// for every `i < j < k` where it is nonzero.
    pub fn jacobi_defect(&self) -> Result<Vec<TripleResidual>> {
        if !self.skew {
            return Err(Error::Precondition("Jacobi identity requires a skew product".into()));
        }
        let n = self.dim;
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let r = linalg::add_vec(
                        &linalg::add_vec(
                            &self.basis_left(i, self.basis_product(j, k)),
                            &self.basis_left(j, self.basis_product(k, i)),
                        ),
                        &self.basis_left(k, self.basis_product(i, j)),
                    );
                    if !linalg::is_zero_vec(&r) {
                        out.push(TripleResidual { i, j, k, residual: r });
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn is_lie(&self) -> bool {
        self.skew && self.jacobi_defect().map(|d| d.is_empty()).unwrap_or(false)
    }

    fn require_lie(&self, op: &str) -> Result<()> {
        if !self.skew {
            return Err(Error::Precondition(format!("{op}: product is not skew")));
        }
        let d = self.jacobi_defect()?;
        if let Some(t) = d.first() {
            return Err(Error::Precondition(format!(
                "{op}: Jacobi identity fails on ({}, {}, {}) with residual {:?}",
                self.names[t.i],
                self.names[t.j],
                self.names[t.k],
                linalg::format_vec(&t.residual)
            )));
        }
        Ok(())
    }

    pub fn ad_basis(&self) -> Vec<Mat> {
        (0..self.dim).map(|i| self.left_mult(i)).collect()
    }

    /// `kappa(x, y) = Tr(ad x ad y)`.
    pub fn killing_form(&self) -> Result<GramForm> {
        self.require_lie("killing_form")?;
        let ads = self.ad_basis();
        let gram = Mat::from_fn(self.dim, self.dim, |i, j| trace_of_product(&ads[i], &ads[j]));
        Ok(GramForm::symmetric(gram))
    }

    /// `{x : [x, g] = 0}`.
    pub fn center(&self) -> Subspace {
        // x is central iff sum_i x_i c[i][j][k] = 0 for all j, k.
        let n = self.dim;
        let m = Mat::from_fn(n * n, n, |row, i| {
            let (j, k) = (row / n, row % n);
            self.coeff(i, j, k).clone()
        });
        linalg::kernel(&m)
    }

    /// Span of all products `x * y` with `x` in `a`, `y` in `b`.
    pub fn product_space(&self, a: &Subspace, b: &Subspace) -> Subspace {
        let mut vecs = Vec::new();
        for x in a.basis() {
            for y in b.basis() {
                vecs.push(self.product_unchecked(x, y));
            }
        }
        Subspace::span(self.dim, vecs)
    }

    /// `g, [g,g], [g,[g,g]], ...` until the terms stabilize or reach zero.
    pub fn lower_central_series(&self) -> Vec<Subspace> {
        let full = Subspace::full(self.dim);
        iterate_series(full.clone(), |s| self.product_space(&full, s))
    }

    /// `g, [g,g], [[g,g],[g,g]], ...` until the terms stabilize or reach zero.
    pub fn derived_series(&self) -> Vec<Subspace> {
        iterate_series(Subspace::full(self.dim), |s| self.product_space(s, s))
    }

    pub fn is_nilpotent(&self) -> bool {
        self.lower_central_series().last().is_some_and(Subspace::is_zero)
    }

    pub fn is_solvable(&self) -> bool {
        self.derived_series().last().is_some_and(Subspace::is_zero)
    }

    pub fn is_abelian(&self) -> bool {
        self.tensor.iter().all(Zero::is_zero)
    }

    /// Pulls the product back along an invertible change of basis: the new
    /// basis vectors are the columns of `basis`.
    pub fn change_basis(&self, basis: &Mat) -> Result<Self> {
        let inv = linalg::inverse(basis)
            .ok_or_else(|| Error::Precondition("change_basis: singular basis matrix".into()))?;
        let cols = basis.columns();
        StructureConstants::from_fn(self.names.clone(), self.skew, |i, j| {
            inv.apply(&self.product_unchecked(&cols[i], &cols[j]))
        })
    }
}

/// Repeats `step` from `start`, returning every term up to the first one that
/// is zero or equals its predecessor.
pub(crate) fn iterate_series(start: Subspace, mut step: impl FnMut(&Subspace) -> Subspace) -> Vec<Subspace> {
    let mut out = vec![start];
    loop {
        let last = out.last().expect("nonempty");
        if last.is_zero() {
            break;
        }
        let next = step(last);
        if &next == last {
            break;
        }
        out.push(next);
    }
    out
}

pub(crate) fn trace_of_product(a: &Mat, b: &Mat) -> Scalar {
    let n = a.rows();
    let mut t = Scalar::zero();
    for i in 0..n {
        for k in 0..a.cols() {
            let x = &a[(i, k)];
            if x.is_zero() {
                continue;
            }
            let y = &b[(k, i)];
            if !y.is_zero() {
                t += x * y;
            }
        }
    }
    t
}

impl std::fmt::Debug for StructureConstants {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "StructureConstants(dim {}, skew {}) {{", self.dim, self.skew)?;
        for i in 0..self.dim {
            for j in 0..self.dim {
                if self.skew && j <= i {
                    continue;
                }
                let v = self.basis_product(i, j);
                if linalg::is_zero_vec(v) {
                    continue;
                }
                let terms: Vec<String> = v
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(k, c)| format!("{} {}", linalg::format_scalar(c), self.names[k]))
                    .collect();
                writeln!(f, "  [{}, {}] = {}", self.names[i], self.names[j], terms.join(" + "))?;
            }
        }
        write!(f, "}}")
    }
}
