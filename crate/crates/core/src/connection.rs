//! The connection product on `g` whose commutator is `μ`, the unital algebra
//! built from it, and a multiplication-algebra simplicity certificate.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cocycle::ExtensionBundle;
use crate::error::{Error, Result};
use crate::forms::{self, GramForm};
use crate::homlie::{check_twisted_jacobi, consistency_from, vec_failure, HKPair, HomLieStructure};
use crate::lie::{BilinearProduct, StructureConstants};
use crate::linalg::{self, add_vec, int, is_zero_vec, scale_vec, sub_vec, unit_vec, EchelonBasis, Mat, Scalar, Subspace, Vector};
use crate::report::{CheckReport, Failure};

pub mod anchors {
    pub const MU_INVARIANCE: &str = "B(μ(x,y),z) = B(x,μ(y,z)) ⇔ D_1 = ... = D_r = 0";
    pub const PAIRING: &str = "2B(xy,z) = B(μ(x,y),z) + B(μ(z,x),y) + B(μ(z,y),x)";
    pub const COMMUTATOR: &str = "μ(x,y) = xy − yx";
    pub const SKEW_PAIRING: &str = "B(xy,z) + B(y,xz) = 0";
    pub const FORMULA: &str = "2xy = μ(x,y) − [h(x),y] + [x,h(y)]";
    pub const SQUARES: &str = "x² = 0 for x ∈ Ker(h) ∪ Im(α′)";
    pub const SPLIT: &str = "g = Ker(h) ⊕ Im(α′)";
    pub const SQUARE_MIXED: &str = "(a + α′(x))² = [a,x] ∈ Im(α′)";
    pub const FOURTH: &str = "y⁴ = 0";
    pub const SKEW_IFF: &str = "xy = −yx ⇔ θ = 0";
    pub const UNIT: &str = "ν((1,0),(ξ,x)) = ν((ξ,x),(1,0)) = (ξ,x)";
    pub const NU_COMMUTATOR: &str = "[(ξ,x),(η,y)]_ν = (0,μ(x,y))";
    pub const DOT_COMMUTATOR: &str = "μ0(x,y) = x·y − y·x";
    pub const DOT_FORMULA: &str = "2x·y = μ0(x,y) − [h(x),y]0 + [x,h(y)]0";
    pub const DOT_SQUARES: &str = "x·x = 0 for x ∈ Ker(h) ∪ Im(α0)";
    pub const DOT_MIXED: &str = "(a + T(x))·(a + T(x)) = [a,x]0";
    pub const DOT_FOURTH: &str = "y⁴ = 0 in g0";
}

/// Seed for the random samples used in the fourth-power checks.
const SAMPLE_SEED: u64 = 1;
const SAMPLE_COUNT: usize = 50;
const SAMPLE_BOUND: i64 = 9;

/// Lemma: `B` is `μ`-invariant iff every `D_i` vanishes. Returns whether
/// `B` is `μ`-invariant; disagreement between the two sides is an error.
pub fn check_mu_invariance_of_b(bundle: &ExtensionBundle, hl: &HomLieStructure) -> Result<bool> {
    let invariant = forms::check_invariant(&hl.mu, &bundle.b)?.is_empty();
    let ds = crate::cocycle::derivations_from_cocycle(&bundle.g0, &bundle.b0, &bundle.theta)?;
    let all_zero = ds.iter().all(Mat::is_zero);
    if invariant != all_zero {
        return Err(Error::consistency(
            anchors::MU_INVARIANCE,
            format!("B μ-invariant: {invariant}, all D_i zero: {all_zero}"),
        ));
    }
    Ok(invariant)
}

/// The product `xy` defined by
/// `2B(xy,z) = B(μ(x,y),z) + B(μ(z,x),y) + B(μ(z,y),x)`.
pub fn connection_product(b: &GramForm, hl: &HomLieStructure) -> Result<BilinearProduct> {
    let n = hl.dim();
    if b.dim != n {
        return Err(Error::DimensionMismatch(format!("form has dimension {}, product {n}", b.dim)));
    }
    let sharp = b.sharp_matrix()?;
    let half = linalg::frac(1, 2);
    let functional = |i: usize, j: usize| -> Vector {
        let first = b.flat(hl.mu.basis_product(i, j));
        (0..n)
            .map(|q| {
                let s = &first[q] + b.value(hl.mu.basis_product(q, i), &unit_vec(n, j)) + b.value(hl.mu.basis_product(q, j), &unit_vec(n, i));
                s * &half
            })
            .collect()
    };
    let conn = StructureConstants::from_fn(hl.mu.names().to_vec(), false, |i, j| sharp.apply(&functional(i, j)))?;
    for i in 0..n {
        for j in 0..n {
            if b.flat(conn.basis_product(i, j)) != functional(i, j) {
                return Err(Error::consistency(anchors::PAIRING, format!("pair ({i}, {j})")));
            }
        }
    }
    Ok(conn)
}

pub fn square(conn: &BilinearProduct, y: &[Scalar]) -> Vector {
    conn.product_unchecked(y, y)
}

/// `(y²)²`.
pub fn fourth_power(conn: &BilinearProduct, y: &[Scalar]) -> Vector {
    square(conn, &square(conn, y))
}

fn random_vectors(n: usize, count: usize, seed: u64, bound: i64) -> Vec<Vector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let v: Vector = (0..n).map(|_| int(rng.gen_range(-bound..=bound))).collect();
        if !is_zero_vec(&v) {
            out.push(v);
        }
    }
    out
}

fn samples(n: usize) -> Vec<Vector> {
    (0..n)
        .map(|i| unit_vec(n, i))
        .chain(random_vectors(n, SAMPLE_COUNT, SAMPLE_SEED, SAMPLE_BOUND))
        .collect()
}

fn is_skew_product(conn: &BilinearProduct) -> bool {
    let n = conn.dim();
    (0..n).all(|i| (i..n).all(|j| is_zero_vec(&add_vec(conn.basis_product(i, j), conn.basis_product(j, i)))))
}

/// The identities satisfied by the connection product on `g`.
pub fn connection_report(bundle: &ExtensionBundle, pair: &HKPair, conn: &BilinearProduct, hl: &HomLieStructure, alpha_prime: &Mat) -> Result<CheckReport> {
    let big = bundle.dim();
    let n = bundle.dim_g0();
    let g = &bundle.g;
    let b = &bundle.b;
    let e = |p| unit_vec(big, p);
    let iota = bundle.iota();
    let mut rep = CheckReport::new();

    let mut f = Vec::new();
    for i in 0..big {
        for j in i + 1..big {
            let rhs = sub_vec(conn.basis_product(i, j), conn.basis_product(j, i));
            f.extend(vec_failure(vec![i, j], hl.mu.basis_product(i, j), &rhs));
        }
    }
    rep.check(anchors::COMMUTATOR, f);

    let mut f = Vec::new();
    for i in 0..big {
        for j in 0..big {
            for k in 0..big {
                let r = b.value(conn.basis_product(i, j), &e(k)) + b.value(&e(j), conn.basis_product(i, k));
                if !r.is_zero() {
                    f.push(Failure::scalar(vec![i, j, k], &r));
                }
            }
        }
    }
    rep.check(anchors::SKEW_PAIRING, f);

    let h_emb: Vec<Vector> = (0..big).map(|p| iota.apply(&pair.h.column(p))).collect();
    let mut f = Vec::new();
    for i in 0..big {
        for j in 0..big {
            let lhs = scale_vec(&int(2), conn.basis_product(i, j));
            let rhs = add_vec(
                &sub_vec(hl.mu.basis_product(i, j), &g.product_unchecked(&h_emb[i], &e(j))),
                &g.product_unchecked(&e(i), &h_emb[j]),
            );
            f.extend(vec_failure(vec![i, j], &lhs, &rhs));
        }
    }
    rep.check(anchors::FORMULA, f);

    let ker_h = linalg::kernel(&pair.h);
    let im_ap = linalg::image(alpha_prime);
    let mut f = Vec::new();
    for (label, space) in [(0usize, &ker_h), (1, &im_ap)] {
        for (p, x) in space.basis().iter().enumerate() {
            let s = square(conn, x);
            if !is_zero_vec(&s) {
                f.push(Failure::new(vec![label, p], &s));
            }
        }
    }
    rep.check(anchors::SQUARES, f);
    rep.check_bool(
        anchors::SPLIT,
        ker_h.intersection(&im_ap).is_zero() && ker_h.sum(&im_ap).is_full(),
        || format!("dim Ker(h) = {}, dim Im(α′) = {}", ker_h.dim(), im_ap.dim()),
    );

    let mut f = Vec::new();
    for (p, a) in ker_h.basis().iter().enumerate() {
        for x in 0..n {
            let y = add_vec(a, &alpha_prime.column(x));
            let lhs = square(conn, &y);
            let rhs = g.product_unchecked(a, &e(x));
            f.extend(vec_failure(vec![p, x], &lhs, &rhs));
            if !im_ap.contains(&rhs) {
                f.push(Failure::new(vec![p, x], &rhs));
            }
        }
    }
    rep.check(anchors::SQUARE_MIXED, f);

    let mut f = Vec::new();
    for (p, y) in samples(big).iter().enumerate() {
        let r = fourth_power(conn, y);
        if !is_zero_vec(&r) {
            f.push(Failure::new(vec![p], &r));
        }
    }
    rep.check(anchors::FOURTH, f);

    let skew = is_skew_product(conn);
    rep.check_bool(anchors::SKEW_IFF, skew == bundle.theta.is_zero(), || {
        format!("product skew: {skew}, θ zero: {}", bundle.theta.is_zero())
    });
    Ok(rep)
}

/// `G = F ⊕ g` with `ν((ξ,x),(η,y)) = (ξη + B(x,y), ξy + ηx + xy)`; the
/// unit is basis vector 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitalAlgebraG {
    pub base: StructureConstants,
    pub unit_index: usize,
}

pub fn build_g(b: &GramForm, hl: &HomLieStructure, conn: &BilinearProduct) -> Result<UnitalAlgebraG> {
    let n = conn.dim();
    let big = n + 1;
    let names: Vec<String> = std::iter::once("1".to_string()).chain(conn.names().iter().cloned()).collect();
    let base = StructureConstants::from_fn(names, false, |p, q| match (p, q) {
        (0, q) => unit_vec(big, q),
        (p, 0) => unit_vec(big, p),
        (p, q) => {
            let mut v = vec![b.entry(p - 1, q - 1).clone()];
            v.extend_from_slice(conn.basis_product(p - 1, q - 1));
            v
        }
    })?;
    let alg = UnitalAlgebraG { base, unit_index: 0 };
    consistency_from(&g_report(&alg, hl))?;
    Ok(alg)
}

fn g_report(alg: &UnitalAlgebraG, hl: &HomLieStructure) -> CheckReport {
    let big = alg.base.dim();
    let mut rep = CheckReport::new();
    let unit = unit_vec(big, alg.unit_index);
    let mut f = Vec::new();
    for p in 0..big {
        let x = unit_vec(big, p);
        f.extend(vec_failure(vec![p, 0], &alg.base.product_unchecked(&unit, &x), &x));
        f.extend(vec_failure(vec![p, 1], &alg.base.product_unchecked(&x, &unit), &x));
    }
    rep.check(anchors::UNIT, f);
    let mut f = Vec::new();
    for p in 1..big {
        for q in 1..big {
            let comm = sub_vec(alg.base.basis_product(p, q), alg.base.basis_product(q, p));
            let mut want = vec![Scalar::zero()];
            want.extend_from_slice(hl.mu.basis_product(p - 1, q - 1));
            f.extend(vec_failure(vec![p, q], &comm, &want));
        }
    }
    rep.check(anchors::NU_COMMUTATOR, f);
    rep
}

/// The smallest two-sided ideal containing `sub`.
pub fn ideal_closure(alg: &StructureConstants, sub: &Subspace) -> Subspace {
    let n = alg.dim();
    let mut basis = EchelonBasis::new();
    let mut frontier: Vec<Vector> = sub.basis().iter().filter(|v| basis.insert(v)).cloned().collect();
    while !frontier.is_empty() && basis.len() < n {
        let mut next = Vec::new();
        for v in &frontier {
            for i in 0..n {
                let w = alg.basis_left(i, v);
                if basis.insert(&w) {
                    next.push(w);
                }
            }
        }
        for v in &frontier {
            for i in 0..n {
                let w = alg.product_unchecked(v, &unit_vec(n, i));
                if basis.insert(&w) {
                    next.push(w);
                }
            }
        }
        frontier = next;
    }
    Subspace::span(n, basis.vectors().cloned())
}

/// A two-sided unit, if one exists.
pub fn find_unit(alg: &StructureConstants) -> Option<Vector> {
    let n = alg.dim();
    // Σ u_i L_i = Id and Σ u_i R_i = Id, one equation per matrix entry.
    let lefts: Vec<Mat> = (0..n).map(|i| alg.left_mult(i)).collect();
    let rights: Vec<Mat> = (0..n).map(|i| alg.right_mult(i)).collect();
    let mut rows = Vec::with_capacity(2 * n * n);
    let mut rhs = Vec::with_capacity(2 * n * n);
    for ops in [&lefts, &rights] {
        for r in 0..n {
            for c in 0..n {
                rows.push(ops.iter().map(|m| m[(r, c)].clone()).collect::<Vector>());
                rhs.push(if r == c { Scalar::one() } else { Scalar::zero() });
            }
        }
    }
    let m = Mat::from_rows(rows).ok()?;
    linalg::solve(&m, &rhs).ok()?.map(|s| s.particular)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProbeResult {
    pub seed: u64,
    pub probes: usize,
    pub bound: i64,
    /// Probe elements whose ideal closure is a proper subspace.
    pub failures: Vec<Vec<String>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SimplicityVerdict {
    AbsolutelySimple,
    UndeterminedOverClosure,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SimplicityReport {
    pub dim: usize,
    pub mult_algebra_dim: usize,
    pub absolutely_simple: bool,
    pub verdict: SimplicityVerdict,
    pub probe: ProbeResult,
}

/// Dimension of the span of all compositions of left and right
/// multiplications, plus random ideal-closure probes.
pub fn multiplication_algebra_dim(alg: &StructureConstants) -> usize {
    let n = alg.dim();
    let gens: Vec<Mat> = (0..n).flat_map(|i| [alg.left_mult(i), alg.right_mult(i)]).collect();
    let mut basis = EchelonBasis::new();
    let id = Mat::identity(n);
    basis.insert(id.as_slice());
    let mut queue = vec![id];
    while let Some(m) = queue.pop() {
        if basis.len() == n * n {
            break;
        }
        for gen in &gens {
            let w = gen * &m;
            if basis.insert(w.as_slice()) {
                queue.push(w);
            }
        }
    }
    basis.len()
}

pub fn burnside_simplicity(alg: &StructureConstants, probes: usize, seed: u64, bound: i64) -> Result<SimplicityReport> {
    if find_unit(alg).is_none() {
        return Err(Error::Precondition("algebra has no two-sided unit".into()));
    }
    let n = alg.dim();
    let mult_algebra_dim = multiplication_algebra_dim(alg);
    let absolutely_simple = mult_algebra_dim == n * n;
    let failures = random_vectors(n, probes, seed, bound)
        .into_iter()
        .filter(|v| !ideal_closure(alg, &Subspace::span(n, [v.clone()])).is_full())
        .map(|v| linalg::format_vec(&v))
        .collect();
    Ok(SimplicityReport {
        dim: n,
        mult_algebra_dim,
        absolutely_simple,
        verdict: if absolutely_simple {
            SimplicityVerdict::AbsolutelySimple
        } else {
            SimplicityVerdict::UndeterminedOverClosure
        },
        probe: ProbeResult {
            seed,
            probes,
            bound,
            failures,
        },
    })
}

/// The quotient `G / F·1` with the bracket induced by the commutator of `ν`
/// and the twist induced by `(ξ,x) ↦ (ξ, α′(x))`, compared entrywise with
/// `reference = (g, μ, α′)`.
pub fn quotient_homlie(alg: &UnitalAlgebraG, reference: &HomLieStructure) -> Result<(HomLieStructure, bool)> {
    let big = alg.base.dim();
    let n = big - 1;
    if reference.dim() != n || alg.unit_index != 0 {
        return Err(Error::DimensionMismatch("quotient and reference dimensions differ".into()));
    }
    let names = alg.base.names()[1..].to_vec();
    let bracket = StructureConstants::from_fn(names, true, |i, j| {
        sub_vec(alg.base.basis_product(i + 1, j + 1), alg.base.basis_product(j + 1, i + 1))[1..].to_vec()
    })?;
    let lifted = Mat::from_fn(big, big, |p, q| match (p, q) {
        (0, 0) => Scalar::one(),
        (0, _) | (_, 0) => Scalar::zero(),
        (p, q) => reference.alpha[(p - 1, q - 1)].clone(),
    });
    let induced = lifted.block(1, big, 1, big);
    let quotient = HomLieStructure::candidate(bracket, induced)?;
    let iso_ok = quotient.mu == reference.mu && quotient.alpha == reference.alpha && check_twisted_jacobi(&quotient).is_empty();
    Ok((quotient, iso_ok))
}

/// `x·y = π(xy)` on `g0`, with its report.
pub fn g0_connection(bundle: &ExtensionBundle, pair: &HKPair, conn: &BilinearProduct) -> Result<(BilinearProduct, CheckReport)> {
    let n = bundle.dim_g0();
    let dot = StructureConstants::from_fn(bundle.g0.names().to_vec(), false, |i, j| conn.basis_product(i, j)[..n].to_vec())?;
    let mu0 = |i: usize, j: usize| pair.h.apply(bundle.g.basis_product(i, j));
    let g0 = &bundle.g0;
    let h0 = pair.h_on_g0();
    let t = &pair.t;
    let e = |p| unit_vec(n, p);
    let mut rep = CheckReport::new();

    let mut f = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let rhs = sub_vec(dot.basis_product(i, j), dot.basis_product(j, i));
            f.extend(vec_failure(vec![i, j], &mu0(i, j), &rhs));
        }
    }
    rep.check(anchors::DOT_COMMUTATOR, f);

    let mut f = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let lhs = scale_vec(&int(2), dot.basis_product(i, j));
            let rhs = add_vec(
                &sub_vec(&mu0(i, j), &g0.product_unchecked(&h0.column(i), &e(j))),
                &g0.product_unchecked(&e(i), &h0.column(j)),
            );
            f.extend(vec_failure(vec![i, j], &lhs, &rhs));
        }
    }
    rep.check(anchors::DOT_FORMULA, f);

    let ker_h0 = linalg::kernel(&h0);
    let im_t = linalg::image(t);
    let mut f = Vec::new();
    for (label, space) in [(0usize, &ker_h0), (1, &im_t)] {
        for (p, x) in space.basis().iter().enumerate() {
            let s = square(&dot, x);
            if !is_zero_vec(&s) {
                f.push(Failure::new(vec![label, p], &s));
            }
        }
    }
    rep.check(anchors::DOT_SQUARES, f);

    let mut f = Vec::new();
    for (p, a) in ker_h0.basis().iter().enumerate() {
        for x in 0..n {
            let y = add_vec(a, &t.column(x));
            f.extend(vec_failure(vec![p, x], &square(&dot, &y), &g0.product_unchecked(a, &e(x))));
        }
    }
    rep.check(anchors::DOT_MIXED, f);

    let mut f = Vec::new();
    for (p, y) in samples(n).iter().enumerate() {
        let r = fourth_power(&dot, y);
        if !is_zero_vec(&r) {
            f.push(Failure::new(vec![p], &r));
        }
    }
    rep.check(anchors::DOT_FOURTH, f);
    Ok((dot, rep))
}
