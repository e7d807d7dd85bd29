//! End-to-end run over a bundle: every construction and identity check in
//! order, gathered into one report.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::cocycle::{first_failure_error, validation_report, ExtensionBundle};
use crate::connection::{self, SimplicityReport};
use crate::error::Result;
use crate::homlie::{self, check_twisted_jacobi, HKPair, HomLieStructure};
use crate::killing::{self, TwistedKillingReport};
use crate::report::{CheckReport, CheckStatus, Failure};

/// Options forwarded to the simplicity probe.
#[derive(Clone, Copy, Debug)]
pub struct ProbeOptions {
    pub seed: u64,
    pub probes: usize,
    pub bound: i64,
}

impl Default for ProbeOptions {
    fn default() -> Self {
        ProbeOptions {
            seed: 1,
            probes: 200,
            bound: 9,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VariantStatus {
    pub twisted_jacobi: bool,
    pub alpha: crate::linalg::Mat,
}

#[derive(Clone, Debug, Serialize)]
pub struct LcsSummary {
    pub dims: Vec<usize>,
    pub nilpotent: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PipelineReport {
    pub bundle_valid: bool,
    pub all_pass: bool,
    pub validation: CheckReport,
    pub hk: HKPair,
    pub hk_diagnostics: CheckReport,
    pub construction: CheckReport,
    pub homlie_variants: BTreeMap<String, VariantStatus>,
    pub killing: TwistedKillingReport,
    pub condition_b_on_g: bool,
    pub homlie_lcs: LcsSummary,
    pub mu_invariant: Option<bool>,
    pub projections: CheckReport,
    pub connection: CheckReport,
    pub g0_connection: CheckReport,
    pub simplicity: Option<SimplicityReport>,
    pub quotient_iso: Option<bool>,
    pub structure: CheckReport,
    /// Status per anchor across all sections; a failure anywhere wins.
    pub lemmas: BTreeMap<String, CheckStatus>,
}

fn merge(map: &mut BTreeMap<String, CheckStatus>, rep: &CheckReport) {
    for e in &rep.entries {
        map.entry(e.anchor.clone())
            .and_modify(|s| {
                if e.status == CheckStatus::Fail || *s == CheckStatus::HypothesisUnmet {
                    *s = e.status;
                }
            })
            .or_insert(e.status);
    }
}

fn section(anchor: &str, r: Result<CheckReport>) -> CheckReport {
    r.unwrap_or_else(|e| {
        let mut rep = CheckReport::new();
        rep.check(anchor, vec![Failure::note(e.to_string())]);
        rep
    })
}

/// Runs every stage on `bundle`. Validation failures and a singular metric
/// abort with an error; later stages record failures in the report.
pub fn run_report(bundle: &ExtensionBundle, opts: ProbeOptions) -> Result<PipelineReport> {
    let validation = validation_report(&bundle.g0, &bundle.b0, &bundle.theta, &bundle.g, &bundle.b)?;
    if let Some(e) = first_failure_error(&validation) {
        return Err(e);
    }
    let hk = homlie::compute_hk(bundle)?;
    let hk_diagnostics = section(homlie::anchors::HK_ID, homlie::hk_diagnostics(bundle, &hk));
    let construction = section(homlie::anchors::K_MU, homlie::construction_report(bundle, &hk));

    let mu = homlie::induced_mu(bundle, &hk);
    let hl_alpha = HomLieStructure::candidate(mu.clone(), homlie::alpha_matrix(bundle, &hk))?;
    let hl_prime = HomLieStructure::candidate(mu.clone(), homlie::alpha_prime_matrix(bundle, &hk))?;
    let n = bundle.dim_g0();
    let mu0 = crate::lie::StructureConstants::from_fn(bundle.g0.names().to_vec(), true, |i, j| {
        mu.basis_product(i, j)[..n].to_vec()
    })?;
    let hl0 = HomLieStructure::candidate(mu0, hk.t.clone())?;
    let mut homlie_variants = BTreeMap::new();
    for (name, hl) in [("alpha", &hl_alpha), ("alpha_prime", &hl_prime), ("restricted", &hl0)] {
        homlie_variants.insert(
            name.to_string(),
            VariantStatus {
                twisted_jacobi: check_twisted_jacobi(hl).is_empty(),
                alpha: hl.alpha.clone(),
            },
        );
    }

    let killing = killing::classify(&hl0, &bundle.g0)?;
    let condition_b_on_g = killing::check_condition_b(&hl_alpha, &bundle.g)?.is_empty();
    let (series, nilpotent) = killing::homlie_lcs(&hl0);
    let homlie_lcs = LcsSummary {
        dims: series.iter().map(|s| s.dim()).collect(),
        nilpotent,
    };

    let mut extra = CheckReport::new();
    let mu_invariant = match connection::check_mu_invariance_of_b(bundle, &hl_alpha) {
        Ok(b) => {
            extra.check(connection::anchors::MU_INVARIANCE, vec![]);
            Some(b)
        }
        Err(e) => {
            extra.check(connection::anchors::MU_INVARIANCE, vec![Failure::note(e.to_string())]);
            None
        }
    };

    let projections = if bundle.b.is_isotropic(&bundle.v_subspace()) {
        section(homlie::anchors::V_ISOTROPIC, homlie::isotropic_projections(bundle, &hk).map(|p| p.report))
    } else {
        let mut rep = CheckReport::new();
        rep.unmet(homlie::anchors::V_ISOTROPIC, "V is not isotropic");
        rep
    };

    let mut simplicity = None;
    let mut quotient_iso = None;
    let (connection_rep, g0_connection) = match connection::connection_product(&bundle.b, &hl_prime) {
        Ok(conn) => {
            let thm = section(
                connection::anchors::PAIRING,
                connection::connection_report(bundle, &hk, &conn, &hl_prime, &hl_prime.alpha),
            );
            let dot = section(
                connection::anchors::DOT_COMMUTATOR,
                connection::g0_connection(bundle, &hk, &conn).map(|(_, r)| r),
            );
            match connection::build_g(&bundle.b, &hl_prime, &conn) {
                Ok(g_alg) => {
                    extra.check(connection::anchors::UNIT, vec![]);
                    extra.check(connection::anchors::NU_COMMUTATOR, vec![]);
                    match connection::burnside_simplicity(&g_alg.base, opts.probes, opts.seed, opts.bound) {
                        Ok(s) => simplicity = Some(s),
                        Err(e) => extra.check("G simplicity", vec![Failure::note(e.to_string())]),
                    }
                    let (_, iso) = connection::quotient_homlie(&g_alg, &hl_prime)?;
                    extra.check_bool("G/F·1 ≅ (g,μ,α′)", iso, || "quotient differs from (g,μ,α′)".into());
                    quotient_iso = Some(iso);
                }
                Err(e) => extra.check(connection::anchors::UNIT, vec![Failure::note(e.to_string())]),
            }
            (thm, dot)
        }
        Err(e) => {
            let mut rep = CheckReport::new();
            rep.check(connection::anchors::PAIRING, vec![Failure::note(e.to_string())]);
            (rep, CheckReport::new())
        }
    };

    let structure = section(homlie::anchors::NOT_INNER, homlie::structure_diagnostics(bundle, &hk, &hl_alpha));

    let mut lemmas = BTreeMap::new();
    for rep in [
        &validation,
        &hk_diagnostics,
        &construction,
        &killing.checks,
        &extra,
        &projections,
        &connection_rep,
        &g0_connection,
        &structure,
    ] {
        merge(&mut lemmas, rep);
    }
    let all_pass = lemmas.values().all(|s| *s != CheckStatus::Fail);
    Ok(PipelineReport {
        bundle_valid: validation.all_pass(),
        all_pass,
        validation,
        hk,
        hk_diagnostics,
        construction,
        homlie_variants,
        killing,
        condition_b_on_g,
        homlie_lcs,
        mu_invariant,
        projections,
        connection: connection_rep,
        g0_connection,
        simplicity,
        quotient_iso,
        structure,
        lemmas,
    })
}

/// One line per anchor, prefixed `PASS`, `FAIL` or `UNMET`.
pub fn summary(rep: &PipelineReport) -> String {
    let mut out = String::new();
    for (anchor, status) in &rep.lemmas {
        let tag = match status {
            CheckStatus::Pass => "PASS ",
            CheckStatus::Fail => "FAIL ",
            CheckStatus::HypothesisUnmet => "UNMET",
        };
        out.push_str(&format!("{tag} {anchor}\n"));
    }
    if let Some(s) = &rep.simplicity {
        out.push_str(&format!(
            "G: dim {}, multiplication algebra dim {}, absolutely simple: {}\n",
            s.dim, s.mult_algebra_dim, s.absolutely_simple
        ));
    }
    out.push_str(&format!("overall: {}\n", if rep.all_pass { "pass" } else { "fail" }));
    out
}
