//! The metric-induced maps `h` and `k`, the Hom-Lie structures they produce
//! on `g` and `g0`, and the structural identities relating them.

use num_traits::Zero;
use serde::Serialize;

use crate::cocycle::{self, derivations_from_cocycle, Cocycle, ExtensionBundle};
use crate::error::{Error, Result};
use crate::forms;
use crate::lie::{StructureConstants, TripleResidual};
use crate::linalg::{self, add_vec, is_zero_vec, sub_vec, unit_vec, Mat, Scalar, Subspace, Vector};
use crate::report::{CheckReport, Failure};

/// A skew product `mu` with a twist map `alpha`.
///
/// Values built through [`HomLieStructure::new`] satisfy the twisted Jacobi
/// identity; [`HomLieStructure::candidate`] skips that check so negative
/// examples can be represented.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomLieStructure {
    pub mu: StructureConstants,
    pub alpha: Mat,
    pub candidate: bool,
}

impl HomLieStructure {
    pub fn new(mu: StructureConstants, alpha: Mat) -> Result<Self> {
        let hl = Self::candidate(mu, alpha)?;
        let defect = check_twisted_jacobi(&hl);
        if let Some(t) = defect.first() {
            return Err(Error::validation(
                anchors::TWISTED_JACOBI,
                format!(
                    "fails on ({}, {}, {}) with residual {:?}",
                    t.i,
                    t.j,
                    t.k,
                    linalg::format_vec(&t.residual)
                ),
            ));
        }
        Ok(HomLieStructure {
            candidate: false,
            ..hl
        })
    }

    /// Wraps `(mu, alpha)` after shape and skewness checks only.
    pub fn candidate(mu: StructureConstants, alpha: Mat) -> Result<Self> {
        let n = mu.dim();
        if alpha.rows() != n || alpha.cols() != n {
            return Err(Error::DimensionMismatch(format!(
                "twist map is {}x{}, product has dimension {n}",
                alpha.rows(),
                alpha.cols()
            )));
        }
        if !mu.is_skew() {
            return Err(Error::Precondition("Hom-Lie product must be skew".into()));
        }
        mu.check_skew()?;
        Ok(HomLieStructure {
            mu,
            alpha,
            candidate: true,
        })
    }

    pub fn dim(&self) -> usize {
        self.mu.dim()
    }

    pub fn is_homlie(&self) -> bool {
        check_twisted_jacobi(self).is_empty()
    }
}

/// `mu(alpha e_i, mu(e_j,e_k))` summed cyclically, for each `i < j < k`
/// where it is nonzero. The cyclic sum is alternating, so these triples
/// cover every case.
pub fn check_twisted_jacobi(hl: &HomLieStructure) -> Vec<TripleResidual> {
    let n = hl.dim();
    let alpha_cols = hl.alpha.columns();
    let mut out = Vec::new();
    let term = |a: usize, b: usize, c: usize| hl.mu.product_unchecked(&alpha_cols[a], hl.mu.basis_product(b, c));
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let r = add_vec(&add_vec(&term(i, j, k), &term(j, k, i)), &term(k, i, j));
                if !is_zero_vec(&r) {
                    out.push(TripleResidual { i, j, k, residual: r });
                }
            }
        }
    }
    out
}

/// Whether `sub` is a Hom-Lie subalgebra and whether it is an ideal.
pub fn check_homlie_ideal(hl: &HomLieStructure, sub: &Subspace) -> (bool, bool) {
    let alpha_stable = sub.basis().iter().all(|x| sub.contains(&hl.alpha.apply(x)));
    let closed = sub
        .basis()
        .iter()
        .all(|x| sub.basis().iter().all(|y| sub.contains(&hl.mu.product_unchecked(x, y))));
    let absorbs = sub
        .basis()
        .iter()
        .all(|x| (0..hl.dim()).all(|j| sub.contains(&hl.mu.product_unchecked(x, &unit_vec(hl.dim(), j)))));
    (alpha_stable && closed, alpha_stable && absorbs)
}

/// `h: g -> g0`, `k: g0 -> g`, and the pieces of `k = T + R`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HKPair {
    pub h: Mat,
    pub k: Mat,
    pub t: Mat,
    pub r_matrix: Mat,
    #[serde(serialize_with = "serialize_vectors")]
    pub a_elems: Vec<Vector>,
}

fn serialize_vectors<S: serde::Serializer>(v: &[Vector], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        seq.serialize_element(&linalg::format_vec(x))?;
    }
    seq.end()
}

/// Elements `a_i + w_i` of `g0^⊥` with `w_i` in `V` and
/// `B(a_i + w_i, v_j) = δ_ij`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrthoBasisWitness {
    #[serde(serialize_with = "serialize_vectors")]
    pub elems: Vec<Vector>,
}

/// Stable keys for the checks in this module.
pub mod anchors {
    pub const HK_ID: &str = "h∘k = Id_g0";
    pub const H_PAIRING: &str = "B(x+v,y) = B0(h(x+v),y)";
    pub const K_PAIRING: &str = "B0(x,y) = B(k(x),y+v)";
    pub const KER_H: &str = "Ker(h) = g0^⊥";
    pub const IM_K: &str = "Im(k) = V^⊥";
    pub const SPLIT: &str = "g = Ker(h) ⊕ Im(k)";
    pub const K_BRACKET: &str = "k([x,y]0) = [k(x),y]";
    pub const K_DECOMP: &str = "k(x) = T(x) + Σ B0(a_i,x) v_i";
    pub const T_CENTROID: &str = "T ∈ Γ_B0(g0)";
    pub const WITNESS: &str = "B(a_i+w_i,v_j) = δ_ij with a_i+w_i ∈ g0^⊥";
    pub const KER_T: &str = "Ker(T) ⊆ C(g0)";
    pub const H_DOUBLE: &str = "h([x,[y,z]]) = [x,h([y,z])]0";
    pub const RHO_REP: &str = "ρ([x,y]) = ρ(x)∘T∘ρ(y) − ρ(y)∘T∘ρ(x)";
    pub const RHO_A: &str = "ρ(a_i) = D_i";
    pub const KER_D: &str = "Ker(D_i) = {x ∈ g0 : [a_i,x] = 0}";
    pub const RECON: &str = "x = T∘h(x+v) + Σ B(x+v,v_i) a_i";
    pub const T_RHO: &str = "T∘ρ(x) = ρ(x)∘T = ad0(x)";
    pub const T_D: &str = "T∘D_i = D_i∘T = ad0(a_i)";
    pub const RHO_DER: &str = "ρ(x) ∈ Der(g0) ∩ o_B0(g0)";
    pub const IM_T_ZERO: &str = "Im(T) = 0 ⇒ g0 abelian";

    pub const K_MU: &str = "k(μ(x,y)) = [x,y]";
    pub const MU_IMAGE: &str = "μ(g,g) ⊆ g0";
    pub const MU_V: &str = "μ(V,g) = 0";
    pub const TWISTED_JACOBI: &str = "μ(α(x),μ(y,z)) + μ(α(y),μ(z,x)) + μ(α(z),μ(x,y)) = 0";
    pub const TWISTED_JACOBI_PRIME: &str = "μ(α′(x),μ(y,z)) + μ(α′(y),μ(z,x)) + μ(α′(z),μ(x,y)) = 0";
    pub const TWISTED_JACOBI_ZERO: &str = "μ0(α0(x),μ0(y,z)) + μ0(α0(y),μ0(z,x)) + μ0(α0(z),μ0(x,y)) = 0";
    pub const ALPHA_V: &str = "α|V = Id_V";
    pub const ALPHA_PRIME_CENTROID: &str = "α′([x,y]) = [α′(x),y]";
    pub const ALPHA_PRIME_SYM: &str = "B(α′(x),y) = B(x,α′(y))";
    pub const ALPHA_PRIME_MU: &str = "α′(μ(x,y)) = [x,y]";
    pub const MU_ALPHA_PRIME: &str = "μ(α′(x),y) = [x,y]0";
    pub const ALPHA0_SYM: &str = "B0(α0(x),y) = B0(x,α0(y))";
    pub const B0_MU0_INVARIANT: &str = "B0(μ0(x,y),z) = B0(x,μ0(y,z))";
    pub const DELTA3: &str = "α0(μ0(x,y)) = μ0(α0(x),y) = [x,y]0";
    pub const D_FROM_MU: &str = "D_i(x) = μ(a_i,x)";
    pub const TWISTS_AGREE: &str = "π∘α|g0 = π∘α′|g0 = T";
    pub const G0_IDEAL_ALPHA: &str = "g0 is a Hom-Lie ideal and direct summand of (g,μ,α)";
    pub const G0_IDEAL_ALPHA_PRIME: &str = "g0 is an ideal of (g,μ,α′) ⇔ θ = 0";

    pub const NOT_INNER: &str = "some D_i is not inner";
    pub const CENTERS: &str = "C(g) = C_μ(g) = V";
    pub const PERFECT: &str = "g0 = h([g,g]) = μ(g,g) = μ(g0,g0)";
    pub const KER_T_CENTER: &str = "C(g0) = Ker(T)";
    pub const IM_T_DERIVED: &str = "[g0,g0]0 = Im(T)";
    pub const RADICAL: &str = "θ(x,g0) = 0 ⇒ x = 0";

    pub const V_ISOTROPIC: &str = "B(V,V) = 0";
    pub const INDEPENDENT: &str = "{a_i} and {h(v_i)} linearly independent";
    pub const H_V: &str = "h(𝔞) ⊆ h(V) = Ker(α0), h|V: V → Ker(α0) bijective";
    pub const IM_ALPHA0_PERP: &str = "B(Im(α0),V) = 0";
    pub const ALPHA0_REGULAR: &str = "α0 = α0∘h∘α0";
    pub const E_PROJ: &str = "E = α0∘h|g0, E² = E, g0 = Im(α0) ⊕ 𝔞";
    pub const F_PROJ: &str = "F = h∘α0, F² = F, g0 = Ker(α0) ⊕ 𝔞^⊥";
    pub const L1: &str = "x = F(x) + Σ B0(a_i,x) h(v_i)";
}

pub(crate) fn mat_failures(lhs: &Mat, rhs: &Mat) -> Vec<Failure> {
    let mut out = Vec::new();
    for i in 0..lhs.rows() {
        for j in 0..lhs.cols() {
            let d = &lhs[(i, j)] - &rhs[(i, j)];
            if !d.is_zero() {
                out.push(Failure::scalar(vec![i, j], &d));
            }
        }
    }
    out
}

pub(crate) fn vec_failure(indices: Vec<usize>, lhs: &[Scalar], rhs: &[Scalar]) -> Option<Failure> {
    let d = sub_vec(lhs, rhs);
    (!is_zero_vec(&d)).then(|| Failure::new(indices, &d))
}

pub(crate) fn subspace_failures(lhs: &Subspace, rhs: &Subspace) -> Vec<Failure> {
    if lhs == rhs {
        Vec::new()
    } else {
        vec![Failure::note(format!(
            "subspaces differ: dim {} vs dim {} ({:?} vs {:?})",
            lhs.dim(),
            rhs.dim(),
            lhs,
            rhs
        ))]
    }
}

pub(crate) fn consistency_from(rep: &CheckReport) -> Result<()> {
    match rep.failures().next() {
        None => Ok(()),
        Some(e) => Err(Error::consistency(
            e.anchor.clone(),
            e.failures
                .iter()
                .map(|f| format!("indices {:?} residual {:?}", f.indices, f.residual))
                .collect::<Vec<_>>()
                .join("; "),
        )),
    }
}

/// `h = B0♯ ∘ ι* ∘ B♭` and `k = B♯ ∘ π* ∘ B0♭`, with `T`, `R` and the
/// elements `a_i` read off from `k`.
pub fn compute_hk(bundle: &ExtensionBundle) -> Result<HKPair> {
    let n = bundle.dim_g0();
    let big = bundle.dim();
    let g0_sharp = bundle.b0.sharp_matrix()?;
    let g_sharp = bundle.b.sharp_matrix()?;
    let g_t = bundle.b.gram.transpose();
    let h = &g0_sharp * &g_t.block(0, n, 0, big);
    let lifted = Mat::from_fn(big, n, |i, j| {
        if i < n {
            bundle.b0.gram[(j, i)].clone()
        } else {
            Scalar::zero()
        }
    });
    let k = &g_sharp * &lifted;
    let t = k.block(0, n, 0, n);
    let r_matrix = k.block(n, big, 0, n);
    let a_elems = (0..bundle.dim_v())
        .map(|i| g0_sharp.apply(r_matrix.row(i)))
        .collect();
    let pair = HKPair {
        h,
        k,
        t,
        r_matrix,
        a_elems,
    };
    let hk = &pair.h * &pair.k;
    if hk != Mat::identity(n) {
        return Err(Error::consistency(anchors::HK_ID, format!("{:?}", mat_failures(&hk, &Mat::identity(n)))));
    }
    Ok(pair)
}

impl HKPair {
    /// `h` restricted to `g0`, as an endomorphism of `g0`.
    pub fn h_on_g0(&self) -> Mat {
        let n = self.t.rows();
        self.h.block(0, n, 0, n)
    }

    /// `h(v_i)` for each basis vector of `V`.
    pub fn h_on_v(&self) -> Vec<Vector> {
        let n = self.t.rows();
        (n..self.h.cols()).map(|c| self.h.column(c)).collect()
    }
}

/// `rho(x) = h ∘ ad(x) ∘ ι` on `g0`, for an arbitrary `x` in `g`.
pub fn rho_of(bundle: &ExtensionBundle, pair: &HKPair, x: &[Scalar]) -> Mat {
    let ad = bundle.g.ad(x).expect("vector in g");
    &(&pair.h * &ad) * &bundle.iota()
}

/// `rho` on every basis vector of `g`, verified to land in
/// `Der(g0) ∩ o_B0(g0)` and to satisfy the representation identity.
pub fn rho(bundle: &ExtensionBundle, pair: &HKPair) -> Result<Vec<Mat>> {
    let big = bundle.dim();
    let maps: Vec<Mat> = (0..big).map(|i| rho_of(bundle, pair, &unit_vec(big, i))).collect();
    let mut rep = CheckReport::new();
    rep.check(anchors::RHO_DER, rho_der_failures(bundle, &maps));
    rep.check(anchors::RHO_REP, rho_rep_failures(bundle, pair));
    consistency_from(&rep)?;
    Ok(maps)
}

fn rho_der_failures(bundle: &ExtensionBundle, maps: &[Mat]) -> Vec<Failure> {
    let mut f = Vec::new();
    for (i, m) in maps.iter().enumerate() {
        if let Some((p, q, r)) = forms::leibniz_defect(&bundle.g0, m).into_iter().next() {
            f.push(Failure::new(vec![i, p, q], &r));
        }
        if !bundle.b0.is_skew_map(m) {
            f.push(Failure::note(format!("ρ(e_{i}) is not B0-skew")));
        }
    }
    f
}

fn rho_rep_failures(bundle: &ExtensionBundle, pair: &HKPair) -> Vec<Failure> {
    let n = bundle.dim_g0();
    let big = bundle.dim();
    let rhos: Vec<Mat> = (0..n).map(|i| rho_of(bundle, pair, &unit_vec(big, i))).collect();
    let mut f = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let lhs = rho_of(bundle, pair, bundle.g.basis_product(i, j));
            let rhs = &(&(&rhos[i] * &pair.t) * &rhos[j]) - &(&(&rhos[j] * &pair.t) * &rhos[i]);
            if lhs != rhs {
                f.push(Failure::note(format!("pair ({i}, {j})")));
            }
        }
    }
    f
}

/// Solves for `w_i` in `V` with `a_i + w_i ⊥ g0` and `B(a_i + w_i, v_j) = δ_ij`.
pub fn ortho_witness(bundle: &ExtensionBundle, pair: &HKPair) -> Result<OrthoBasisWitness> {
    let n = bundle.dim_g0();
    let r = bundle.dim_v();
    let big = n + r;
    let g = &bundle.b.gram;
    // Unknown w (r coordinates). Rows: B(a + w, e_q) = target_q for q < big.
    let m = Mat::from_fn(big, r, |q, l| g[(n + l, q)].clone());
    let mut elems = Vec::with_capacity(r);
    for (i, a) in pair.a_elems.iter().enumerate() {
        let mut lifted = a.clone();
        lifted.extend(std::iter::repeat(Scalar::zero()).take(r));
        let rhs: Vector = (0..big)
            .map(|q| {
                let target = if q >= n && q - n == i { Scalar::from_integer(1.into()) } else { Scalar::zero() };
                target - linalg::dot(&lifted, &g.column(q))
            })
            .collect();
        let sol = linalg::solve(&m, &rhs)?.ok_or_else(|| {
            Error::consistency(anchors::WITNESS, format!("no w_{} in V completes a_{} to a dual element", i + 1, i + 1))
        })?;
        for (l, c) in sol.particular.into_iter().enumerate() {
            lifted[n + l] = c;
        }
        elems.push(lifted);
    }
    Ok(OrthoBasisWitness { elems })
}

/// Every identity relating `h`, `k`, `T`, `rho`, the `a_i` and the derived
/// derivations `D_i`.
pub fn hk_diagnostics(bundle: &ExtensionBundle, pair: &HKPair) -> Result<CheckReport> {
    let n = bundle.dim_g0();
    let r = bundle.dim_v();
    let big = n + r;
    let g = &bundle.g;
    let g0 = &bundle.g0;
    let e_big = |i| unit_vec(big, i);
    let e0 = |i| unit_vec(n, i);
    let embed = |x: &[Scalar]| {
        let mut v = x.to_vec();
        v.resize(big, Scalar::zero());
        v
    };
    let mut rep = CheckReport::new();

    rep.check(anchors::HK_ID, mat_failures(&(&pair.h * &pair.k), &Mat::identity(n)));

    // B(e_p, e_q) = B0(h e_p, e_q) for p in g, q in g0.
    let lhs = bundle.b.gram.block(0, big, 0, n);
    let rhs = &pair.h.transpose() * &bundle.b0.gram;
    rep.check(anchors::H_PAIRING, mat_failures(&lhs, &rhs));

    let lhs = &pair.k.transpose() * &bundle.b.gram;
    let rhs = Mat::from_fn(n, big, |p, q| if q < n { bundle.b0.gram[(p, q)].clone() } else { Scalar::zero() });
    rep.check(anchors::K_PAIRING, mat_failures(&lhs, &rhs));

    let ker_h = linalg::kernel(&pair.h);
    let g0_perp = forms::orthogonal_complement(&bundle.b, &bundle.g0_subspace())?;
    rep.check(anchors::KER_H, subspace_failures(&ker_h, &g0_perp));
    let im_k = linalg::image(&pair.k);
    let v_perp = forms::orthogonal_complement(&bundle.b, &bundle.v_subspace())?;
    rep.check(anchors::IM_K, subspace_failures(&im_k, &v_perp));
    rep.check_bool(
        anchors::SPLIT,
        ker_h.intersection(&im_k).is_zero() && ker_h.sum(&im_k).is_full(),
        || format!("dim Ker(h) = {}, dim Im(k) = {}", ker_h.dim(), im_k.dim()),
    );

    let mut f = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let lhs = pair.k.apply(g0.basis_product(i, j));
            let rhs = g.product_unchecked(&pair.k.column(i), &e_big(j));
            f.extend(vec_failure(vec![i, j], &lhs, &rhs));
        }
    }
    rep.check(anchors::K_BRACKET, f);

    let mut f = Vec::new();
    for j in 0..n {
        let mut rebuilt = embed(&pair.t.column(j));
        for (i, a) in pair.a_elems.iter().enumerate() {
            rebuilt[n + i] += bundle.b0.value(a, &e0(j));
        }
        f.extend(vec_failure(vec![j], &pair.k.column(j), &rebuilt));
    }
    rep.check(anchors::K_DECOMP, f);

    rep.check_bool(
        anchors::T_CENTROID,
        forms::is_centroid_member(g0, &pair.t) && bundle.b0.is_symmetric_map(&pair.t),
        || "T fails the centroid or B0-symmetry condition".into(),
    );

    match ortho_witness(bundle, pair) {
        Ok(w) => {
            let mut f = Vec::new();
            for (i, z) in w.elems.iter().enumerate() {
                if !g0_perp.contains(z) {
                    f.push(Failure::note(format!("a_{0}+w_{0} is not orthogonal to g0", i + 1)));
                }
                for j in 0..r {
                    let val = bundle.b.value(z, &e_big(n + j));
                    let want = if i == j { Scalar::from_integer(1.into()) } else { Scalar::zero() };
                    if val != want {
                        f.push(Failure::scalar(vec![i, j], &(val - want)));
                    }
                }
            }
            if Subspace::span(big, w.elems.clone()) != g0_perp {
                f.push(Failure::note("witness elements do not span g0^⊥"));
            }
            rep.check(anchors::WITNESS, f);
        }
        Err(e) => rep.check(anchors::WITNESS, vec![Failure::note(e.to_string())]),
    }

    let ker_t = linalg::kernel(&pair.t);
    rep.check_bool(anchors::KER_T, g0.center().contains_subspace(&ker_t), || {
        format!("Ker(T) = {ker_t:?}")
    });

    // h([x,[y,z]]) = [x, h([y,z])]0 for x in g0, y, z in g.
    let mut f = Vec::new();
    for x in 0..n {
        for y in 0..big {
            for z in y + 1..big {
                let yz = g.basis_product(y, z);
                let lhs = pair.h.apply(&g.product_unchecked(&e_big(x), yz));
                let rhs = g0.product_unchecked(&e0(x), &pair.h.apply(yz));
                f.extend(vec_failure(vec![x, y, z], &lhs, &rhs));
            }
        }
    }
    rep.check(anchors::H_DOUBLE, f);

    rep.check(anchors::RHO_REP, rho_rep_failures(bundle, pair));

    let ds = derivations_from_cocycle(g0, &bundle.b0, &bundle.theta)?;
    let mut f = Vec::new();
    for (i, (a, d)) in pair.a_elems.iter().zip(&ds).enumerate() {
        f.extend(mat_failures(&rho_of(bundle, pair, &embed(a)), d).into_iter().map(|mut x| {
            x.indices.insert(0, i);
            x
        }));
    }
    rep.check(anchors::RHO_A, f);

    let mut f = Vec::new();
    for (i, (a, d)) in pair.a_elems.iter().zip(&ds).enumerate() {
        let ker_d = linalg::kernel(d);
        // x in g0 with [a_i, x] = 0 in g.
        let ad_a = g.ad(&embed(a))?.block(0, big, 0, n);
        let centralizer = linalg::kernel(&ad_a);
        if ker_d != centralizer {
            f.push(Failure::note(format!("i = {}: {:?} vs {:?}", i + 1, ker_d, centralizer)));
        }
    }
    rep.check(anchors::KER_D, f);

    let mut f = Vec::new();
    let th = &pair.t * &pair.h;
    for p in 0..big {
        let mut rhs = th.column(p);
        for (i, a) in pair.a_elems.iter().enumerate() {
            let c = bundle.b.value(&e_big(p), &e_big(n + i));
            linalg::axpy(&mut rhs, &c, a);
        }
        let lhs = if p < n { e0(p) } else { linalg::zero_vec(n) };
        f.extend(vec_failure(vec![p], &lhs, &rhs));
    }
    rep.check(anchors::RECON, f);

    let mut f = Vec::new();
    for x in 0..n {
        let rho_x = rho_of(bundle, pair, &e_big(x));
        let ad0 = g0.left_mult(x);
        for (label, m) in [(0, &pair.t * &rho_x), (1, &rho_x * &pair.t)] {
            f.extend(mat_failures(&m, &ad0).into_iter().map(|mut q| {
                q.indices.splice(0..0, [x, label]);
                q
            }));
        }
    }
    rep.check(anchors::T_RHO, f);

    let mut f = Vec::new();
    for (i, (a, d)) in pair.a_elems.iter().zip(&ds).enumerate() {
        let ad_a = g0.ad(a)?;
        for m in [&pair.t * d, d * &pair.t] {
            f.extend(mat_failures(&m, &ad_a).into_iter().map(|mut q| {
                q.indices.insert(0, i);
                q
            }));
        }
    }
    rep.check(anchors::T_D, f);

    let maps: Vec<Mat> = (0..big).map(|i| rho_of(bundle, pair, &e_big(i))).collect();
    rep.check(anchors::RHO_DER, rho_der_failures(bundle, &maps));

    let im_t_zero = pair.t.is_zero();
    rep.check_bool(anchors::IM_T_ZERO, !im_t_zero || g0.is_abelian(), || {
        "T = 0 but g0 is not abelian".into()
    });
    Ok(rep)
}

fn twisted_jacobi_failures(hl: &HomLieStructure) -> Vec<Failure> {
    check_twisted_jacobi(hl)
        .into_iter()
        .map(|t| Failure::new(vec![t.i, t.j, t.k], &t.residual))
        .collect()
}

/// `mu(x, y) = h([x, y])`, embedded in `g`.
pub fn build_mu(bundle: &ExtensionBundle, pair: &HKPair) -> Result<StructureConstants> {
    let (rep, mu) = mu_report(bundle, pair);
    consistency_from(&rep)?;
    Ok(mu)
}

/// `h ∘ [.,.]` embedded in `g`, without the accompanying checks.
pub(crate) fn induced_mu(bundle: &ExtensionBundle, pair: &HKPair) -> StructureConstants {
    mu_report(bundle, pair).1
}

fn mu_report(bundle: &ExtensionBundle, pair: &HKPair) -> (CheckReport, StructureConstants) {
    let n = bundle.dim_g0();
    let big = bundle.dim();
    let iota = bundle.iota();
    let mu = StructureConstants::from_fn(bundle.g.names().to_vec(), true, |i, j| {
        iota.apply(&pair.h.apply(bundle.g.basis_product(i, j)))
    })
    .expect("h of a skew bracket is skew");
    let mut rep = CheckReport::new();
    let mut f = Vec::new();
    for i in 0..big {
        for j in i + 1..big {
            let lhs = pair.k.apply(&pair.h.apply(bundle.g.basis_product(i, j)));
            f.extend(vec_failure(vec![i, j], &lhs, bundle.g.basis_product(i, j)));
        }
    }
    rep.check(anchors::K_MU, f);
    let g0_sub = bundle.g0_subspace();
    let mut f = Vec::new();
    for i in 0..big {
        for j in 0..big {
            if !g0_sub.contains(mu.basis_product(i, j)) {
                f.push(Failure::new(vec![i, j], mu.basis_product(i, j)));
            }
        }
    }
    rep.check(anchors::MU_IMAGE, f);
    let mut f = Vec::new();
    for i in n..big {
        for j in 0..big {
            if !is_zero_vec(mu.basis_product(i, j)) {
                f.push(Failure::new(vec![i, j], mu.basis_product(i, j)));
            }
        }
    }
    rep.check(anchors::MU_V, f);
    (rep, mu)
}

/// `alpha(x + v) = T(x) + v`.
pub fn alpha_matrix(bundle: &ExtensionBundle, pair: &HKPair) -> Mat {
    let n = bundle.dim_g0();
    let big = bundle.dim();
    Mat::from_fn(big, big, |i, j| {
        if i < n && j < n {
            pair.t[(i, j)].clone()
        } else if i == j && i >= n {
            Scalar::from_integer(1.into())
        } else {
            Scalar::zero()
        }
    })
}

/// `alpha'(x + v) = k(x)`.
pub fn alpha_prime_matrix(bundle: &ExtensionBundle, pair: &HKPair) -> Mat {
    &pair.k * &bundle.pi()
}

pub fn build_alpha(bundle: &ExtensionBundle, pair: &HKPair) -> Result<HomLieStructure> {
    let mu = build_mu(bundle, pair)?;
    let hl = HomLieStructure::candidate(mu, alpha_matrix(bundle, pair))?;
    let mut rep = CheckReport::new();
    rep.check(anchors::TWISTED_JACOBI, twisted_jacobi_failures(&hl));
    consistency_from(&rep)?;
    Ok(HomLieStructure {
        candidate: false,
        ..hl
    })
}

fn alpha_prime_relations(bundle: &ExtensionBundle, hl: &HomLieStructure) -> CheckReport {
    let n = bundle.dim_g0();
    let big = bundle.dim();
    let g = &bundle.g;
    let ap = &hl.alpha;
    let e = |i| unit_vec(big, i);
    let mut rep = CheckReport::new();
    let mut f = Vec::new();
    for i in 0..big {
        for j in 0..big {
            let lhs = ap.apply(g.basis_product(i, j));
            let rhs = g.product_unchecked(&ap.column(i), &e(j));
            f.extend(vec_failure(vec![i, j], &lhs, &rhs));
        }
    }
    rep.check(anchors::ALPHA_PRIME_CENTROID, f);
    rep.check_bool(anchors::ALPHA_PRIME_SYM, bundle.b.is_symmetric_map(ap), || {
        "α′ is not B-symmetric".into()
    });
    let mut f = Vec::new();
    for i in 0..big {
        for j in 0..big {
            let lhs = ap.apply(hl.mu.basis_product(i, j));
            f.extend(vec_failure(vec![i, j], &lhs, g.basis_product(i, j)));
        }
    }
    rep.check(anchors::ALPHA_PRIME_MU, f);
    let mut f = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let lhs = hl.mu.product_unchecked(&ap.column(i), &e(j));
            let mut rhs = bundle.g0.basis_product(i, j).to_vec();
            rhs.resize(big, Scalar::zero());
            f.extend(vec_failure(vec![i, j], &lhs, &rhs));
        }
    }
    rep.check(anchors::MU_ALPHA_PRIME, f);
    rep
}

pub fn build_alpha_prime(bundle: &ExtensionBundle, pair: &HKPair) -> Result<HomLieStructure> {
    let mu = build_mu(bundle, pair)?;
    let hl = HomLieStructure::candidate(mu, alpha_prime_matrix(bundle, pair))?;
    let mut rep = CheckReport::new();
    rep.check(anchors::TWISTED_JACOBI_PRIME, twisted_jacobi_failures(&hl));
    rep.extend(alpha_prime_relations(bundle, &hl));
    consistency_from(&rep)?;
    Ok(HomLieStructure {
        candidate: false,
        ..hl
    })
}

fn restricted(bundle: &ExtensionBundle, pair: &HKPair, mu: &StructureConstants) -> Result<HomLieStructure> {
    let n = bundle.dim_g0();
    let mu0 = StructureConstants::from_fn(bundle.g0.names().to_vec(), true, |i, j| {
        mu.basis_product(i, j)[..n].to_vec()
    })?;
    HomLieStructure::candidate(mu0, pair.t.clone())
}

fn restricted_relations(bundle: &ExtensionBundle, hl0: &HomLieStructure) -> CheckReport {
    let n = bundle.dim_g0();
    let mut rep = CheckReport::new();
    rep.check(anchors::TWISTED_JACOBI_ZERO, twisted_jacobi_failures(hl0));
    rep.check_bool(anchors::ALPHA0_SYM, bundle.b0.is_symmetric_map(&hl0.alpha), || {
        "α0 is not B0-symmetric".into()
    });
    rep.check(
        anchors::B0_MU0_INVARIANT,
        forms::check_invariant(&hl0.mu, &bundle.b0)
            .expect("matching dimensions")
            .into_iter()
            .map(|t| Failure::scalar(vec![t.i, t.j, t.k], &t.residual))
            .collect(),
    );
    let mut f = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let target = bundle.g0.basis_product(i, j);
            let a = hl0.alpha.apply(hl0.mu.basis_product(i, j));
            let b = hl0.mu.product_unchecked(&hl0.alpha.column(i), &unit_vec(n, j));
            f.extend(vec_failure(vec![i, j, 0], &a, target));
            f.extend(vec_failure(vec![i, j, 1], &b, target));
        }
    }
    rep.check(anchors::DELTA3, f);
    rep
}

/// `(g0, mu0, alpha0 = T)`.
pub fn restrict_homlie(bundle: &ExtensionBundle, pair: &HKPair) -> Result<HomLieStructure> {
    let mu = build_mu(bundle, pair)?;
    let hl0 = restricted(bundle, pair, &mu)?;
    consistency_from(&restricted_relations(bundle, &hl0))?;
    Ok(HomLieStructure {
        candidate: false,
        ..hl0
    })
}

/// Every relation satisfied by `mu`, `alpha`, `alpha'` and the restricted
/// structure, as a report.
pub fn construction_report(bundle: &ExtensionBundle, pair: &HKPair) -> Result<CheckReport> {
    let n = bundle.dim_g0();
    let (mut rep, mu) = mu_report(bundle, pair);
    let hl = HomLieStructure::candidate(mu.clone(), alpha_matrix(bundle, pair))?;
    let hlp = HomLieStructure::candidate(mu.clone(), alpha_prime_matrix(bundle, pair))?;
    let hl0 = restricted(bundle, pair, &mu)?;
    rep.check(anchors::TWISTED_JACOBI, twisted_jacobi_failures(&hl));
    let alpha_v = hl.alpha.block(n, bundle.dim(), n, bundle.dim());
    rep.check(anchors::ALPHA_V, mat_failures(&alpha_v, &Mat::identity(bundle.dim_v())));
    rep.check(anchors::TWISTED_JACOBI_PRIME, twisted_jacobi_failures(&hlp));
    rep.extend(alpha_prime_relations(bundle, &hlp));
    rep.extend(restricted_relations(bundle, &hl0));

    let ds = derivations_from_cocycle(&bundle.g0, &bundle.b0, &bundle.theta)?;
    let mut f = Vec::new();
    for (i, (a, d)) in pair.a_elems.iter().zip(&ds).enumerate() {
        let mu_a = hl0.mu.ad(a)?;
        f.extend(mat_failures(d, &mu_a).into_iter().map(|mut q| {
            q.indices.insert(0, i);
            q
        }));
    }
    rep.check(anchors::D_FROM_MU, f);

    let pi = bundle.pi();
    let iota = bundle.iota();
    let a_part = &(&pi * &hl.alpha) * &iota;
    let ap_part = &(&pi * &hlp.alpha) * &iota;
    let mut f = mat_failures(&a_part, &pair.t);
    f.extend(mat_failures(&ap_part, &pair.t));
    rep.check(anchors::TWISTS_AGREE, f);

    let g0_sub = bundle.g0_subspace();
    let v_sub = bundle.v_subspace();
    let (_, g0_ideal) = check_homlie_ideal(&hl, &g0_sub);
    let (_, v_ideal) = check_homlie_ideal(&hl, &v_sub);
    rep.check_bool(anchors::G0_IDEAL_ALPHA, g0_ideal && v_ideal, || {
        format!("g0 ideal: {g0_ideal}, V ideal: {v_ideal}")
    });
    let (_, g0_ideal_prime) = check_homlie_ideal(&hlp, &g0_sub);
    rep.check_bool(
        anchors::G0_IDEAL_ALPHA_PRIME,
        g0_ideal_prime == bundle.theta.is_zero(),
        || format!("g0 ideal under α′: {g0_ideal_prime}, θ zero: {}", bundle.theta.is_zero()),
    );
    Ok(rep)
}

/// The metric-free construction: `mu = h ∘ [.,.]` and
/// `alpha = (π∘k)∘π + sigma`, with `sigma: g -> V`.
pub fn build_from_hk(g0: &StructureConstants, theta: &Cocycle, h: &Mat, k: &Mat, sigma: &Mat) -> Result<HomLieStructure> {
    let n = g0.dim();
    let r = theta.dim_v();
    let big = n + r;
    if h.rows() != n || h.cols() != big || k.rows() != big || k.cols() != n || sigma.rows() != big || sigma.cols() != big {
        return Err(Error::DimensionMismatch("h, k, sigma shapes do not match g0 and V".into()));
    }
    if (0..n).any(|i| (0..big).any(|j| !sigma[(i, j)].is_zero())) {
        return Err(Error::Precondition("sigma must take values in V".into()));
    }
    let g = cocycle::central_extend(g0, theta)?;
    let e = |i| unit_vec(big, i);
    for i in 0..n {
        for j in 0..n {
            let lhs = k.apply(g0.basis_product(i, j));
            let rhs = g.product_unchecked(&k.column(i), &e(j));
            if lhs != rhs {
                return Err(Error::Precondition(format!(
                    "k([x,y]0) = [k(x),y] fails for ({}, {})",
                    g0.names()[i],
                    g0.names()[j]
                )));
            }
        }
    }
    for i in 0..big {
        for j in i + 1..big {
            let br = g.basis_product(i, j);
            if k.apply(&h.apply(br)) != br {
                return Err(Error::Precondition(format!(
                    "k(h([x,y])) = [x,y] fails for ({}, {})",
                    g.names()[i],
                    g.names()[j]
                )));
            }
        }
    }
    let mut iota = Mat::zeros(big, n);
    for i in 0..n {
        iota[(i, i)] = Scalar::from_integer(1.into());
    }
    let pi = iota.transpose();
    let mu = StructureConstants::from_fn(g.names().to_vec(), true, |i, j| iota.apply(&h.apply(g.basis_product(i, j))))?;
    let alpha0 = &pi * k;
    let alpha = &(&(&iota * &alpha0) * &pi) + sigma;
    let hl = HomLieStructure::new(mu, alpha)?;
    let sigma_on_g0_zero = (0..big).all(|i| (0..n).all(|j| sigma[(i, j)].is_zero()));
    if sigma_on_g0_zero {
        let (_, g0_ideal) = check_homlie_ideal(&hl, &Subspace::coordinate(big, 0..n));
        let (_, v_ideal) = check_homlie_ideal(&hl, &Subspace::coordinate(big, n..big));
        if !(g0_ideal && v_ideal) {
            return Err(Error::consistency(
                anchors::G0_IDEAL_ALPHA,
                format!("g0 ideal: {g0_ideal}, V ideal: {v_ideal}"),
            ));
        }
    }
    Ok(hl)
}

/// Checks the consequences of some `D_i` being outer. When every `D_i` is
/// inner the entries are marked as having an unmet hypothesis.
pub fn structure_diagnostics(bundle: &ExtensionBundle, pair: &HKPair, hl: &HomLieStructure) -> Result<CheckReport> {
    let n = bundle.dim_g0();
    let big = bundle.dim();
    let ds = derivations_from_cocycle(&bundle.g0, &bundle.b0, &bundle.theta)?;
    let outer = ds.iter().any(|d| forms::is_inner(&bundle.g0, d).is_none());
    let mut rep = CheckReport::new();
    let keys = [
        anchors::CENTERS,
        anchors::PERFECT,
        anchors::KER_T_CENTER,
        anchors::IM_T_DERIVED,
        anchors::RADICAL,
    ];
    if !outer {
        rep.unmet(anchors::NOT_INNER, "every D_i is inner");
        for k in keys {
            rep.unmet(k, "requires some D_i not inner");
        }
        return Ok(rep);
    }
    rep.check(anchors::NOT_INNER, vec![]);

    let v = bundle.v_subspace();
    let c_g = bundle.g.center();
    let c_mu = hl.mu.center();
    let mut f = subspace_failures(&c_g, &v);
    f.extend(subspace_failures(&c_mu, &v));
    rep.check(anchors::CENTERS, f);

    let g0_sub = bundle.g0_subspace();
    let full = Subspace::full(big);
    let h_gg = Subspace::span(
        n,
        (0..big).flat_map(|i| (i + 1..big).map(move |j| (i, j))).map(|(i, j)| pair.h.apply(bundle.g.basis_product(i, j))),
    );
    let mu_gg = hl.mu.product_space(&full, &full);
    let mu_00 = hl.mu.product_space(&g0_sub, &g0_sub);
    let mut f = Vec::new();
    if !h_gg.is_full() {
        f.push(Failure::note(format!("h([g,g]) has dimension {}", h_gg.dim())));
    }
    f.extend(subspace_failures(&mu_gg, &g0_sub));
    f.extend(subspace_failures(&mu_00, &g0_sub));
    rep.check(anchors::PERFECT, f);

    rep.check(
        anchors::KER_T_CENTER,
        subspace_failures(&bundle.g0.center(), &linalg::kernel(&pair.t)),
    );
    rep.check(
        anchors::IM_T_DERIVED,
        subspace_failures(&cocycle::derived_algebra(&bundle.g0), &linalg::image(&pair.t)),
    );
    let (_, joint) = cocycle::cocycle_radicals(&bundle.g0, &bundle.theta)?;
    rep.check_bool(anchors::RADICAL, joint.is_zero(), || format!("joint radical {joint:?}"));
    Ok(rep)
}

/// The projections `E = α0∘h|g0` and `F = h|g0∘α0` with their report.
#[derive(Clone, Debug, Serialize)]
pub struct Projections {
    pub e: Mat,
    pub f: Mat,
    pub report: CheckReport,
}

/// Requires `V` isotropic for `B`.
pub fn isotropic_projections(bundle: &ExtensionBundle, pair: &HKPair) -> Result<Projections> {
    let n = bundle.dim_g0();
    let r = bundle.dim_v();
    let v = bundle.v_subspace();
    if !bundle.b.is_isotropic(&v) {
        return Err(Error::Precondition(format!("{} fails", anchors::V_ISOTROPIC)));
    }
    let t = &pair.t;
    let h0 = pair.h_on_g0();
    let e = t * &h0;
    let f = &h0 * t;
    let mut rep = CheckReport::new();
    rep.check(anchors::V_ISOTROPIC, vec![]);

    let a_span = Subspace::span(n, pair.a_elems.clone());
    let hv = pair.h_on_v();
    let hv_span = Subspace::span(n, hv.clone());
    rep.check_bool(anchors::INDEPENDENT, a_span.dim() == r && hv_span.dim() == r, || {
        format!("dim span a = {}, dim span h(V) = {}", a_span.dim(), hv_span.dim())
    });

    let ker_t = linalg::kernel(t);
    let h_a = Subspace::span(n, pair.a_elems.iter().map(|a| h0.apply(a)));
    rep.check_bool(
        anchors::H_V,
        hv_span.contains_subspace(&h_a) && hv_span == ker_t && ker_t.dim() == r && hv_span.dim() == r,
        || format!("h(V) = {hv_span:?}, Ker(α0) = {ker_t:?}"),
    );

    let mut f_im = Vec::new();
    for (j, col) in t.columns().iter().enumerate() {
        let mut x = col.clone();
        x.resize(n + r, Scalar::zero());
        for l in 0..r {
            let val = bundle.b.value(&x, &unit_vec(n + r, n + l));
            if !val.is_zero() {
                f_im.push(Failure::scalar(vec![j, l], &val));
            }
        }
    }
    rep.check(anchors::IM_ALPHA0_PERP, f_im);
    rep.check(anchors::ALPHA0_REGULAR, mat_failures(t, &(&(t * &h0) * t)));

    let mut fe = mat_failures(&(&e * &e), &e);
    fe.extend(subspace_failures(&linalg::image(&e), &linalg::image(t)));
    fe.extend(subspace_failures(&linalg::kernel(&e), &a_span));
    rep.check(anchors::E_PROJ, fe);

    let a_perp = forms::orthogonal_complement(&bundle.b0, &a_span)?;
    let mut ff = mat_failures(&(&f * &f), &f);
    ff.extend(subspace_failures(&linalg::kernel(&f), &ker_t));
    ff.extend(subspace_failures(&linalg::image(&f), &a_perp));
    rep.check(anchors::F_PROJ, ff);

    let mut fl = Vec::new();
    for j in 0..n {
        let x = unit_vec(n, j);
        let mut rhs = f.column(j);
        for (a, hvi) in pair.a_elems.iter().zip(&hv) {
            let c = bundle.b0.value(a, &x);
            linalg::axpy(&mut rhs, &c, hvi);
        }
        fl.extend(vec_failure(vec![j], &x, &rhs));
    }
    rep.check(anchors::L1, fl);
    Ok(Projections { e, f, report: rep })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int;

    #[test]
    fn candidate_rejects_bad_shapes() {
        let mu = StructureConstants::abelian(2);
        assert!(HomLieStructure::candidate(mu.clone(), Mat::identity(3)).is_err());
        let non_skew = StructureConstants::zero(vec!["x".into(), "y".into()], false);
        assert!(HomLieStructure::candidate(non_skew, Mat::identity(2)).is_err());
        assert!(HomLieStructure::new(mu, Mat::identity(2)).is_ok());
    }

    #[test]
    fn zero_subspace_is_an_ideal() {
        let mut mu = StructureConstants::abelian(3);
        mu.set_basis_product(0, 1, vec![int(0), int(0), int(1)]);
        let hl = HomLieStructure::new(mu, Mat::identity(3)).unwrap();
        assert_eq!(check_homlie_ideal(&hl, &Subspace::zero(3)), (true, true));
        assert_eq!(check_homlie_ideal(&hl, &Subspace::coordinate(3, [2])), (true, true));
        assert_eq!(check_homlie_ideal(&hl, &Subspace::coordinate(3, [0])), (true, false));
    }
}
