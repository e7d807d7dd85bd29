//! Exact linear algebra over the rationals.
//!
//! Matrices follow the column-action convention used throughout the crate:
//! entry `(i, j)` is the coefficient of output basis vector `i` in the image
//! of input basis vector `j`. A linear map is applied as `m.apply(v)`.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::ser::{SerializeSeq, Serializer};

use crate::error::{Error, Result};

pub type Scalar = BigRational;
pub type Vector = Vec<Scalar>;

pub fn int(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

pub fn frac(p: i64, q: i64) -> Scalar {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

pub fn zero_vec(n: usize) -> Vector {
    vec![Scalar::zero(); n]
}

pub fn unit_vec(n: usize, i: usize) -> Vector {
    let mut v = zero_vec(n);
    v[i] = Scalar::one();
    v
}

pub fn is_zero_vec(v: &[Scalar]) -> bool {
    v.iter().all(Zero::is_zero)
}

pub fn add_vec(a: &[Scalar], b: &[Scalar]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub_vec(a: &[Scalar], b: &[Scalar]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale_vec(c: &Scalar, v: &[Scalar]) -> Vector {
    v.iter().map(|x| c * x).collect()
}

pub fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    let mut acc = Scalar::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += x * y;
        }
    }
    acc
}

/// `acc += c * v`, skipping the work when `c` is zero.
pub(crate) fn axpy(acc: &mut [Scalar], c: &Scalar, v: &[Scalar]) {
    if c.is_zero() {
        return;
    }
    for (a, x) in acc.iter_mut().zip(v) {
        if !x.is_zero() {
            *a += c * x;
        }
    }
}

/// Parses `"p/q"` or `"p"` with no whitespace and `q > 0`. Non-reduced
/// fractions such as `"2/4"` are accepted and normalized.
pub fn parse_scalar(s: &str) -> std::result::Result<Scalar, String> {
    if s.is_empty() {
        return Err("empty rational".into());
    }
    if s.chars().any(char::is_whitespace) {
        return Err(format!("rational {s:?} contains whitespace"));
    }
    let parse_int = |t: &str| -> std::result::Result<BigInt, String> {
        let digits = t.strip_prefix('-').unwrap_or(t);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(format!("malformed rational {s:?}"));
        }
        t.parse::<BigInt>().map_err(|e| format!("malformed rational {s:?}: {e}"))
    };
    match s.split_once('/') {
        None => Ok(BigRational::from_integer(parse_int(s)?)),
        Some((p, q)) => {
            let p = parse_int(p)?;
            let q = parse_int(q)?;
            if !q.is_positive() {
                return Err(format!("rational {s:?} needs a positive denominator"));
            }
            Ok(BigRational::new(p, q))
        }
    }
}

/// Canonical text form: `"p"` for integers, otherwise `"p/q"` in lowest terms.
pub fn format_scalar(x: &Scalar) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn format_vec(v: &[Scalar]) -> Vec<String> {
    v.iter().map(format_scalar).collect()
}

pub(crate) fn serialize_scalar<S: Serializer>(x: &Scalar, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_scalar(x))
}

pub(crate) fn serialize_vec<S: Serializer>(v: &[Scalar], s: S) -> std::result::Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        seq.serialize_element(&format_scalar(x))?;
    }
    seq.end()
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vector>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged matrix rows".into()));
        }
        Ok(Mat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Integer entries, row-major. Convenient for fixtures.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix rows");
        Mat::from_fn(r, c, |i, j| int(rows[i][j]))
    }

    /// Matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(rows: usize, columns: &[Vector]) -> Self {
        assert!(columns.iter().all(|c| c.len() == rows));
        Mat::from_fn(rows, columns.len(), |i, j| columns[j][i].clone())
    }

    pub fn diagonal(entries: &[Scalar]) -> Self {
        let n = entries.len();
        Mat::from_fn(n, n, |i, j| if i == j { entries[i].clone() } else { Scalar::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vector> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vector> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn apply(&self, v: &[Scalar]) -> Vector {
        assert_eq!(v.len(), self.cols, "matrix-vector dimension mismatch");
        let mut out = zero_vec(self.rows);
        for (j, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (i, o) in out.iter_mut().enumerate() {
                let a = &self[(i, j)];
                if !a.is_zero() {
                    *o += a * x;
                }
            }
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| c * x).collect(),
        }
    }

    pub fn trace(&self) -> Scalar {
        (0..self.rows.min(self.cols)).fold(Scalar::zero(), |acc, i| acc + &self[(i, i)])
    }

    /// Rows `r0..r1`, columns `c0..c1`.
    pub fn block(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Mat {
        Mat::from_fn(r1 - r0, c1 - c0, |i, j| self[(r0 + i, c0 + j)].clone())
    }

    /// Entries flattened row-major; used when matrices are themselves
    /// treated as vectors (End(V) as a vector space).
    pub fn as_slice(&self) -> &[Scalar] {
        &self.data
    }

    pub fn from_flat(rows: usize, cols: usize, data: Vector) -> Self {
        assert_eq!(data.len(), rows * cols);
        Mat { rows, cols, data }
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows).map(|i| format_vec(self.row(i))).collect()
    }
}

impl Index<(usize, usize)> for Mat {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &Mat {
    type Output = Mat;
    fn mul(self, rhs: &Mat) -> Mat {
        assert_eq!(self.cols, rhs.rows, "matrix product dimension mismatch");
        let mut out = Mat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out.data[i * rhs.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }
}

impl Add for &Mat {
    type Output = Mat;
    fn add(self, rhs: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &Mat {
    type Output = Mat;
    fn sub(self, rhs: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &Mat {
    type Output = Mat;
    fn neg(self) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| -a).collect(),
        }
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {}", format_vec(self.row(i)).join(", "))?;
        }
        write!(f, "]")
    }
}

impl serde::Serialize for Mat {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub reduced: Mat,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

/// Reduced row-echelon form by Gauss-Jordan elimination.
pub fn rref(m: &Mat) -> Rref {
    rref_impl(m, None)
}

/// Like [`rref`], also returning the invertible `P` with `P * m == reduced`
/// (the accumulated elementary row operations).
pub fn rref_with_transform(m: &Mat) -> (Rref, Mat) {
    let mut p = Mat::identity(m.rows());
    let r = rref_impl(m, Some(&mut p));
    (r, p)
}

fn rref_impl(m: &Mat, mut track: Option<&mut Mat>) -> Rref {
    let (rows, cols) = (m.rows, m.cols);
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[(i, c)].is_zero()) else {
            continue;
        };
        if p != r {
            swap_rows(&mut a, p, r);
            if let Some(t) = track.as_deref_mut() {
                swap_rows(t, p, r);
            }
        }
        let inv = a[(r, c)].recip();
        scale_row(&mut a, r, &inv);
        if let Some(t) = track.as_deref_mut() {
            scale_row(t, r, &inv);
        }
        for i in 0..rows {
            if i == r || a[(i, c)].is_zero() {
                continue;
            }
            let f = a[(i, c)].clone();
            sub_row_multiple(&mut a, i, r, &f);
            if let Some(t) = track.as_deref_mut() {
                sub_row_multiple(t, i, r, &f);
            }
        }
        pivots.push(c);
        r += 1;
    }
    let rank = pivots.len();
    Rref {
        reduced: a,
        pivots,
        rank,
    }
}

fn swap_rows(a: &mut Mat, i: usize, j: usize) {
    let cols = a.cols;
    for c in 0..cols {
        a.data.swap(i * cols + c, j * cols + c);
    }
}

fn scale_row(a: &mut Mat, i: usize, f: &Scalar) {
    let cols = a.cols;
    for x in &mut a.data[i * cols..(i + 1) * cols] {
        if !x.is_zero() {
            *x *= f;
        }
    }
}

/// row_i -= f * row_r
fn sub_row_multiple(a: &mut Mat, i: usize, r: usize, f: &Scalar) {
    let cols = a.cols;
    for c in 0..cols {
        let src = &a.data[r * cols + c];
        if src.is_zero() {
            continue;
        }
        let d = f * src;
        a.data[i * cols + c] -= d;
    }
}

pub fn rank(m: &Mat) -> usize {
    rref(m).rank
}

/// Basis of the right null space, one vector per free column of the rref.
pub fn kernel_basis(m: &Mat) -> Vec<Vector> {
    let r = rref(m);
    kernel_from_rref(&r, m.cols)
}

fn kernel_from_rref(r: &Rref, cols: usize) -> Vec<Vector> {
    let mut is_pivot = vec![false; cols];
    for &p in &r.pivots {
        is_pivot[p] = true;
    }
    (0..cols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = zero_vec(cols);
            v[f] = Scalar::one();
            for (row, &p) in r.pivots.iter().enumerate() {
                v[p] = -r.reduced[(row, f)].clone();
            }
            v
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    /// The solution with every free variable set to zero.
    pub particular: Vector,
    pub homogeneous: Vec<Vector>,
}

/// Solves `m x = rhs`. `Ok(None)` means the system is inconsistent.
pub fn solve(m: &Mat, rhs: &[Scalar]) -> Result<Option<Solution>> {
    if rhs.len() != m.rows {
        return Err(Error::DimensionMismatch(format!(
            "solve: rhs has length {}, matrix has {} rows",
            rhs.len(),
            m.rows
        )));
    }
    let aug = Mat::from_fn(m.rows, m.cols + 1, |i, j| {
        if j < m.cols {
            m[(i, j)].clone()
        } else {
            rhs[i].clone()
        }
    });
    let r = rref(&aug);
    if r.pivots.last() == Some(&m.cols) {
        return Ok(None);
    }
    let mut particular = zero_vec(m.cols);
    for (row, &p) in r.pivots.iter().enumerate() {
        particular[p] = r.reduced[(row, m.cols)].clone();
    }
    let coeff_part = Rref {
        reduced: r.reduced.block(0, m.rows, 0, m.cols),
        pivots: r.pivots.clone(),
        rank: r.rank,
    };
    Ok(Some(Solution {
        particular,
        homogeneous: kernel_from_rref(&coeff_part, m.cols),
    }))
}

/// Determinant by fraction-free (Bareiss) elimination. Each row is first
/// scaled to integers by the lcm of its denominators.
pub fn det(m: &Mat) -> Result<Scalar> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "determinant of a non-square {}x{} matrix",
            m.rows, m.cols
        )));
    }
    let n = m.rows;
    if n == 0 {
        return Ok(Scalar::one());
    }
    let mut scale = BigInt::one();
    let mut a: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for i in 0..n {
        let l = m.row(i).iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        a.push(m.row(i).iter().map(|x| x.numer() * (&l / x.denom())).collect());
        scale *= l;
    }
    let mut sign = 1i32;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return Ok(Scalar::zero());
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone() * BigInt::from(sign);
    Ok(BigRational::new(d, scale))
}

pub fn inverse(m: &Mat) -> Option<Mat> {
    if !m.is_square() {
        return None;
    }
    let (r, p) = rref_with_transform(m);
    (r.rank == m.rows).then_some(p)
}

/// A linear subspace of `F^n`, stored by the nonzero rows of the rref of any
/// spanning set. Two subspaces are equal iff their canonical bases are equal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Vec<Vector>,
}

impl Subspace {
    pub fn span<I: IntoIterator<Item = Vector>>(ambient_dim: usize, vectors: I) -> Self {
        let rows: Vec<Vector> = vectors.into_iter().collect();
        assert!(rows.iter().all(|v| v.len() == ambient_dim), "vector outside ambient space");
        if rows.is_empty() {
            return Subspace::zero(ambient_dim);
        }
        let m = Mat::from_rows(rows).expect("equal-length rows");
        let r = rref(&m);
        let basis = (0..r.rank).map(|i| r.reduced.row(i).to_vec()).collect();
        Subspace { ambient_dim, basis }
    }

    pub fn zero(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: Vec::new(),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: (0..ambient_dim).map(|i| unit_vec(ambient_dim, i)).collect(),
        }
    }

    /// Span of the standard basis vectors with the given indices.
    pub fn coordinate(ambient_dim: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        Subspace::span(ambient_dim, indices.into_iter().map(|i| unit_vec(ambient_dim, i)))
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.basis.len() == self.ambient_dim
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        if is_zero_vec(v) {
            return true;
        }
        // Canonical rref rows: eliminate at each pivot.
        let mut w = v.to_vec();
        for b in &self.basis {
            let p = b.iter().position(|x| !x.is_zero()).expect("nonzero basis row");
            if !w[p].is_zero() {
                let f = w[p].clone();
                axpy(&mut w, &-f, b);
            }
        }
        is_zero_vec(&w)
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        Subspace::span(
            self.ambient_dim,
            self.basis.iter().chain(&other.basis).cloned(),
        )
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        if self.is_zero() || other.is_zero() {
            return Subspace::zero(self.ambient_dim);
        }
        let n = self.ambient_dim;
        let (p, q) = (self.dim(), other.dim());
        let m = Mat::from_fn(n, p + q, |i, j| {
            if j < p {
                self.basis[j][i].clone()
            } else {
                -other.basis[j - p][i].clone()
            }
        });
        let vecs = kernel_basis(&m).into_iter().map(|k| {
            let mut x = zero_vec(n);
            for (j, c) in k.iter().take(p).enumerate() {
                axpy(&mut x, c, &self.basis[j]);
            }
            x
        });
        Subspace::span(n, vecs)
    }

    /// Image of the subspace under a linear map.
    pub fn image(&self, map: &Mat) -> Subspace {
        Subspace::span(map.rows(), self.basis.iter().map(|v| map.apply(v)))
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(dim {} in {}) [", self.dim(), self.ambient_dim)?;
        for b in &self.basis {
            write!(f, " ({})", format_vec(b).join(", "))?;
        }
        write!(f, " ]")
    }
}

impl serde::Serialize for Subspace {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = self.basis.iter().map(|b| format_vec(b)).collect();
        rows.serialize(s)
    }
}

/// Image of a linear map as a subspace of its codomain.
pub fn image(m: &Mat) -> Subspace {
    Subspace::span(m.rows(), m.columns())
}

pub fn kernel(m: &Mat) -> Subspace {
    Subspace::span(m.cols(), kernel_basis(m))
}

/// Incrementally maintained echelon basis; used by span saturations where
/// vectors arrive one at a time.
#[derive(Clone, Debug, Default)]
pub(crate) struct EchelonBasis {
    rows: Vec<(usize, Vector)>,
}

impl EchelonBasis {
    pub fn new() -> Self {
        EchelonBasis { rows: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    /// Inserts `v` if it is independent of the current rows; returns whether
    /// it was added.
    pub fn insert(&mut self, v: &[Scalar]) -> bool {
        let mut w = v.to_vec();
        for (p, row) in &self.rows {
            if !w[*p].is_zero() {
                let f = -w[*p].clone();
                axpy(&mut w, &f, row);
            }
        }
        match w.iter().position(|x| !x.is_zero()) {
            None => false,
            Some(p) => {
                let inv = w[p].recip();
                for x in &mut w {
                    *x *= &inv;
                }
                self.rows.push((p, w));
                true
            }
        }
    }

    pub fn vectors(&self) -> impl Iterator<Item = &Vector> {
        self.rows.iter().map(|(_, v)| v)
    }
}
