//! The twisted Killing form `K(x,y) = Tr(ad_μ(x) ∘ ad_μ(y) ∘ α)` and its
//! relation to the Killing form of an ambient Lie bracket.

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::forms::GramForm;
use crate::homlie::{check_twisted_jacobi, vec_failure, HomLieStructure};
use crate::lie::{iterate_series, StructureConstants};
use crate::linalg::{unit_vec, Mat, Subspace};
use crate::report::{CheckReport, Failure};

pub mod anchors {
    pub const CONDITION_A: &str = "μ(α(x),μ(y,z)) + μ(α(y),μ(z,x)) + μ(α(z),μ(x,y)) = 0";
    pub const CONDITION_B: &str = "α(μ(x,y)) = μ(α(x),y) = [x,y]";
    pub const K_SYMMETRIC: &str = "K(x,y) = K(y,x)";
    pub const K_ALPHA: &str = "K(α(x),y) = K(x,α(y)) = κ(x,y)";
    pub const K_MU: &str = "K(μ(x,y),z) = K(x,μ(y,z))";
    pub const K_BRACKET: &str = "K([x,y],z) = K(x,[y,z])";
    pub const NONDEGENERATE: &str = "K non-degenerate ⇔ κ non-degenerate";
    pub const SOLVABLE: &str = "K(x,[y,z]) = 0 ⇒ g solvable";
    pub const NILPOTENT: &str = "K = 0 ⇔ g nilpotent";
}

/// Basis pairs where `α(μ(x,y)) = [x,y]` or `μ(α(x),y) = [x,y]` fails.
/// Index `[i, j, 0]` marks the first equality, `[i, j, 1]` the second.
pub fn check_condition_b(hl: &HomLieStructure, lie: &StructureConstants) -> Result<Vec<Failure>> {
    let n = hl.dim();
    if lie.dim() != n {
        return Err(Error::DimensionMismatch(format!(
            "Hom-Lie structure has dimension {n}, Lie algebra {}",
            lie.dim()
        )));
    }
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let target = lie.basis_product(i, j);
            let first = hl.alpha.apply(hl.mu.basis_product(i, j));
            let second = hl.mu.product(&hl.alpha.column(i), &unit_vec(n, j))?;
            out.extend(vec_failure(vec![i, j, 0], &first, target));
            out.extend(vec_failure(vec![i, j, 1], &second, target));
        }
    }
    Ok(out)
}

/// Gram matrix of `K`; symmetric only when the data make it so.
pub fn twisted_killing(hl: &HomLieStructure) -> GramForm {
    let n = hl.dim();
    let ads: Vec<Mat> = (0..n).map(|i| hl.mu.left_mult(i)).collect();
    let gram = Mat::from_fn(n, n, |i, j| (&(&ads[i] * &ads[j]) * &hl.alpha).trace());
    GramForm::new(gram).expect("square")
}

fn scalar_pairs(n: usize, f: impl Fn(usize, usize) -> crate::linalg::Scalar) -> Vec<Failure> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let r = f(i, j);
            if !r.is_zero() {
                out.push(Failure::scalar(vec![i, j], &r));
            }
        }
    }
    out
}

fn associativity_failures(form: &GramForm, prod: &StructureConstants) -> Vec<Failure> {
    let n = form.dim;
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let e = |p| unit_vec(n, p);
                let lhs = form.value(prod.basis_product(i, j), &e(k));
                let rhs = form.value(&e(i), prod.basis_product(j, k));
                let r = lhs - rhs;
                if !r.is_zero() {
                    out.push(Failure::scalar(vec![i, j, k], &r));
                }
            }
        }
    }
    out
}

const IDENTITY_ANCHORS: [&str; 3] = [anchors::K_ALPHA, anchors::K_MU, anchors::K_BRACKET];

/// The three identity families tying `K` to `κ`, `μ` and `[.,.]`. Entries
/// are marked unmet when condition (B) fails.
pub fn killing_identities_report(hl: &HomLieStructure, lie: &StructureConstants) -> Result<CheckReport> {
    let mut rep = CheckReport::new();
    let cond_b = check_condition_b(hl, lie)?;
    if !cond_b.is_empty() {
        for a in IDENTITY_ANCHORS {
            rep.unmet(a, "condition (B) fails");
        }
        return Ok(rep);
    }
    let n = hl.dim();
    let k = twisted_killing(hl);
    let kappa = lie.killing_form()?;
    let e = |p| unit_vec(n, p);
    let mut f = scalar_pairs(n, |i, j| k.value(&hl.alpha.column(i), &e(j)) - kappa.entry(i, j));
    f.extend(scalar_pairs(n, |i, j| k.value(&e(i), &hl.alpha.column(j)) - kappa.entry(i, j)));
    rep.check(anchors::K_ALPHA, f);
    rep.check(anchors::K_MU, associativity_failures(&k, &hl.mu));
    rep.check(anchors::K_BRACKET, associativity_failures(&k, lie));
    Ok(rep)
}

/// `g_μ^1 = g`, `g_μ^{n+1} = μ(g, g_μ^n)`, until zero or stable.
pub fn homlie_lcs(hl: &HomLieStructure) -> (Vec<Subspace>, bool) {
    let full = Subspace::full(hl.dim());
    let series = iterate_series(full.clone(), |s| hl.mu.product_space(&full, s));
    let nilpotent = series.last().is_some_and(Subspace::is_zero);
    (series, nilpotent)
}

#[derive(Clone, Debug, Serialize)]
pub struct TwistedKillingReport {
    #[serde(rename = "K")]
    pub k_form: GramForm,
    pub kappa: GramForm,
    #[serde(rename = "condition_A")]
    pub condition_a: bool,
    #[serde(rename = "condition_B")]
    pub condition_b: bool,
    pub hypothesis_met: bool,
    pub identities_pass: bool,
    #[serde(rename = "K_symmetric")]
    pub k_symmetric: bool,
    pub nondegenerate: bool,
    pub kappa_nondegenerate: bool,
    pub solvability_hypothesis: bool,
    pub solvability_criterion_holds: bool,
    #[serde(rename = "K_is_zero")]
    pub k_is_zero: bool,
    pub homlie_nilpotent: bool,
    pub lie_nilpotent: bool,
    pub lie_solvable: bool,
    pub checks: CheckReport,
}

/// Computes `K`, `κ` and the classification flags. Theorem-backed entries
/// in `checks` are marked unmet when condition (B) fails.
pub fn classify(hl: &HomLieStructure, lie: &StructureConstants) -> Result<TwistedKillingReport> {
    let n = hl.dim();
    let cond_a = check_twisted_jacobi(hl).is_empty();
    let cond_b_failures = check_condition_b(hl, lie)?;
    let cond_b = cond_b_failures.is_empty();
    let k = twisted_killing(hl);
    let kappa = lie.killing_form()?;
    let hypothesis_met = cond_a && cond_b;

    let mut checks = CheckReport::new();
    checks.check(anchors::CONDITION_A, {
        check_twisted_jacobi(hl)
            .into_iter()
            .map(|t| Failure::new(vec![t.i, t.j, t.k], &t.residual))
            .collect()
    });
    checks.check(anchors::CONDITION_B, cond_b_failures);

    let k_symmetric = k.gram.is_symmetric();
    let nondegenerate = k.is_nondegenerate();
    let kappa_nondegenerate = kappa.is_nondegenerate();
    let k_is_zero = k.is_zero();
    let lie_nilpotent = lie.is_nilpotent();
    let lie_solvable = lie.is_solvable();
    let (_, homlie_nilpotent) = homlie_lcs(hl);

    let mut solvability_hypothesis = true;
    for i in 0..n {
        for j in 0..n {
            for l in 0..n {
                if !k.value(&unit_vec(n, i), lie.basis_product(j, l)).is_zero() {
                    solvability_hypothesis = false;
                }
            }
        }
    }
    let solvability_criterion_holds = !solvability_hypothesis || lie_solvable;

    let identities = killing_identities_report(hl, lie)?;
    let identities_pass = cond_b && identities.all_pass();
    if hypothesis_met {
        checks.check_bool(anchors::K_SYMMETRIC, k_symmetric, || "K is not symmetric".into());
        checks.extend(identities);
        checks.check_bool(anchors::NONDEGENERATE, nondegenerate == kappa_nondegenerate, || {
            format!("det K = {}, det κ = {}", k.det(), kappa.det())
        });
        checks.check_bool(anchors::SOLVABLE, solvability_criterion_holds, || {
            "K(x,[y,z]) = 0 on all triples but g is not solvable".into()
        });
        checks.check_bool(anchors::NILPOTENT, k_is_zero == lie_nilpotent, || {
            format!("K zero: {k_is_zero}, g nilpotent: {lie_nilpotent}")
        });
    } else {
        for a in [
            anchors::K_SYMMETRIC,
            anchors::K_ALPHA,
            anchors::K_MU,
            anchors::K_BRACKET,
            anchors::NONDEGENERATE,
            anchors::SOLVABLE,
            anchors::NILPOTENT,
        ] {
            checks.unmet(a, "conditions (A) and (B) are required");
        }
    }

    Ok(TwistedKillingReport {
        k_form: k,
        kappa,
        condition_a: cond_a,
        condition_b: cond_b,
        hypothesis_met,
        identities_pass,
        k_symmetric,
        nondegenerate,
        kappa_nondegenerate,
        solvability_hypothesis,
        solvability_criterion_holds,
        k_is_zero,
        homlie_nilpotent,
        lie_nilpotent,
        lie_solvable,
        checks,
    })
}

/// Hom-Lie nilpotent ⇒ Lie nilpotent and `K = 0`. Returns whether the
/// antecedent holds; a violated implication is an error.
pub fn check_gil_implication(hl: &HomLieStructure, lie: &StructureConstants) -> Result<bool> {
    if !check_condition_b(hl, lie)?.is_empty() {
        return Err(Error::Precondition("condition (B) fails".into()));
    }
    let (_, nilpotent) = homlie_lcs(hl);
    if nilpotent {
        let lie_nil = lie.is_nilpotent();
        let k_zero = twisted_killing(hl).is_zero();
        if !(lie_nil && k_zero) {
            return Err(Error::consistency(
                "Hom-Lie nilpotent ⇒ g nilpotent and K = 0",
                format!("g nilpotent: {lie_nil}, K zero: {k_zero}"),
            ));
        }
    }
    Ok(nilpotent)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int;
    use crate::zoo;

    #[test]
    fn sl2_killing_values() {
        let alg = zoo::sl2();
        let hl = HomLieStructure::new(alg.clone(), Mat::identity(3)).unwrap();
        let k = twisted_killing(&hl);
        assert_eq!(k.entry(2, 2), &int(8));
        assert_eq!(k.entry(0, 1), &int(4));
        let rep = classify(&hl, &alg).unwrap();
        assert!(rep.condition_b && rep.nondegenerate && rep.kappa_nondegenerate);
        assert!(rep.checks.all_pass());
    }

    #[test]
    fn heisenberg_is_homlie_nilpotent() {
        let alg = zoo::heisenberg3();
        let hl = HomLieStructure::new(alg.clone(), Mat::identity(3)).unwrap();
        let (series, nil) = homlie_lcs(&hl);
        assert!(nil);
        assert_eq!(series.len(), 3);
        assert!(check_gil_implication(&hl, &alg).unwrap());
    }

    #[test]
    fn failing_condition_b_is_unmet() {
        let alg = zoo::sl2();
        let hl = HomLieStructure::candidate(alg.clone(), Mat::diagonal(&[int(1), int(1), int(0)])).unwrap();
        assert!(!check_condition_b(&hl, &alg).unwrap().is_empty());
        let rep = killing_identities_report(&hl, &alg).unwrap();
        assert!(rep.entries.iter().all(|e| e.status == crate::report::CheckStatus::HypothesisUnmet));
        assert!(matches!(check_gil_implication(&hl, &alg), Err(Error::Precondition(_))));
    }
}
