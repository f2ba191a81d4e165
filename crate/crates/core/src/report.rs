//! End-to-end pipelines behind the command-line tool, with JSON and text output.

use std::fmt::Write as _;

use serde::Serialize;

use crate::ampleness::{check_ampleness, AmplenessReport, Verdict};
use crate::blowdown::{
    blowdown_invariants, branch_locus_from_cover, discrepancy_assignment, sigma_star_k,
    BlowdownInvariants, BranchLocusInvariants, CurveCombination, DiscrepancyAssignment,
};
use crate::config::ConfigFile;
use crate::exact;
use crate::geometry::{validate, Configuration, ValidationReport};
use crate::lattice::Rational;
use crate::swcert::{search_certificate, verify_certificate, CertificateSearch, ChamberCertificate, ANALYTIC_NOTE};
use crate::wahl::{characteristic_set, find_wahl_subchains, recognize_wahl, CharacteristicSet, SubchainSearch, WahlDescriptor};

/// Process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Ok = 0,
    Parse = 1,
    Validation = 2,
    CheckFailure = 3,
    NoCertificate = 4,
}

impl Outcome {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainReport {
    pub name: String,
    pub aux: bool,
    pub curves: Vec<String>,
    pub self_intersections: Vec<i64>,
    pub determinant: String,
    pub negative_definite: bool,
    pub wahl: Option<WahlDescriptor>,
    pub characteristic_set: CharacteristicSet,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub surface: String,
    pub outcome: Outcome,
    pub checks: Vec<Check>,
    pub failures: Vec<String>,
    pub validation: ValidationReport,
    pub chains: Vec<ChainReport>,
    pub discrepancies: Option<DiscrepancyAssignment>,
    pub invariants: Option<BlowdownInvariants>,
    pub sigma_star_k: Option<CurveCombination>,
    #[serde(serialize_with = "opt_rational")]
    pub sigma_star_k_squared: Option<Rational>,
    pub ampleness: Option<AmplenessReport>,
    pub certificate: Option<ChamberCertificate>,
    pub branch_locus: Option<BranchLocusInvariants>,
    pub notes: Vec<String>,
}

fn opt_rational<S: serde::Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
    match r {
        Some(r) => exact::rational(r, s),
        None => s.serialize_none(),
    }
}

fn chain_reports(cfg: &Configuration) -> Vec<ChainReport> {
    cfg.chains()
        .iter()
        .map(|c| {
            let q = cfg.intersection_matrix(&c.curves).expect("chains are resolved");
            let self_intersections = q.diagonal();
            let a: Option<Vec<u64>> = self_intersections.iter().map(|&s| u64::try_from(-s).ok()).collect();
            ChainReport {
                name: c.name.clone(),
                aux: c.aux,
                curves: c.curves.clone(),
                determinant: q.det().to_string(),
                negative_definite: q.is_negative_definite().unwrap_or(false),
                wahl: a.and_then(|a| recognize_wahl(&a)),
                characteristic_set: characteristic_set(&c.name, &q),
                self_intersections,
            }
        })
        .collect()
}

/// validate → chains → discrepancies → invariants → σ*K → ampleness →
/// certificate → branch locus. Stops at the first stage that cannot proceed.
pub fn verify(file: &ConfigFile, cfg: &Configuration) -> VerifyReport {
    let mut r = VerifyReport {
        surface: cfg.name.clone(),
        outcome: Outcome::Ok,
        checks: Vec::new(),
        failures: Vec::new(),
        validation: validate(cfg),
        chains: Vec::new(),
        discrepancies: None,
        invariants: None,
        sigma_star_k: None,
        sigma_star_k_squared: None,
        ampleness: None,
        certificate: None,
        branch_locus: None,
        notes: vec![ANALYTIC_NOTE.to_string()],
    };
    let violations = r.validation.violations();
    r.checks.push(Check {
        name: "validation".into(),
        passed: violations.is_empty(),
    });
    if !violations.is_empty() {
        r.failures = violations;
        r.outcome = Outcome::Validation;
        return r;
    }

    let check = |r: &mut VerifyReport, name: &str, passed: bool, failure: Option<String>| {
        r.checks.push(Check {
            name: name.to_string(),
            passed,
        });
        if !passed {
            r.failures.push(failure.unwrap_or_else(|| format!("{name} failed")));
        }
        passed
    };

    r.chains = chain_reports(cfg);
    let chains_ok = r
        .chains
        .iter()
        .filter(|c| !c.aux)
        .all(|c| c.wahl.is_some() && c.negative_definite);
    let bad: Vec<String> = r
        .chains
        .iter()
        .filter(|c| !c.aux && c.wahl.is_none())
        .map(|c| format!("chain {} with self-intersections {:?} is not a Wahl chain", c.name, c.self_intersections))
        .collect();
    if !check(&mut r, "wahl chains", chains_ok, bad.first().cloned()) {
        r.outcome = Outcome::CheckFailure;
        return r;
    }

    let d = match discrepancy_assignment(cfg) {
        Ok(d) => d,
        Err(e) => {
            check(&mut r, "discrepancies", false, Some(e.to_string()));
            r.outcome = Outcome::CheckFailure;
            return r;
        }
    };
    check(&mut r, "discrepancies", true, None);
    r.discrepancies = Some(d.clone());

    let inv = match blowdown_invariants(cfg) {
        Ok(inv) => inv,
        Err(e) => {
            check(&mut r, "blow-down invariants", false, Some(e.to_string()));
            r.outcome = Outcome::CheckFailure;
            return r;
        }
    };
    let coprime = inv.pi1_certificate.coprime;
    check(
        &mut r,
        "lens-space orders coprime",
        coprime,
        Some(format!("gcd of {:?} is {}", inv.pi1_certificate.orders, inv.pi1_certificate.gcd)),
    );

    match branch_locus_from_cover(inv.euler, inv.signature) {
        Ok(b) => r.branch_locus = Some(b),
        Err(e) => r.notes.push(e.to_string()),
    }
    let k_squared = inv.k_squared.clone();
    r.invariants = Some(inv);

    if file.kw.is_empty() {
        check(&mut r, "σ*K", false, Some("no [kw] expression for K_W".into()));
    } else {
        match sigma_star_k(cfg, &file.kw, &d) {
            Ok(s) => {
                check(&mut r, "σ*K", true, None);
                let sq = s.square(cfg).expect("resolved curves");
                check(
                    &mut r,
                    "σ*K² agrees with K²",
                    sq == k_squared,
                    Some(format!("σ*K² = {} but K² = {}", exact::to_string(&sq), exact::to_string(&k_squared))),
                );
                let amp = check_ampleness(cfg, &s).expect("resolved curves");
                let failure = match &amp.verdict {
                    Verdict::Failed { reason } => Some(format!("ampleness failed: {reason:?}")),
                    _ => None,
                };
                check(&mut r, "ampleness", amp.verdict.is_verified(), failure);
                r.sigma_star_k_squared = Some(sq);
                r.sigma_star_k = Some(s);
                r.ampleness = Some(amp);
            }
            Err(e) => {
                check(&mut r, "σ*K", false, Some(e.to_string()));
            }
        }
    }

    if let Some(alpha) = file.alpha_class(cfg.n()) {
        let alpha = alpha.expect("checked when the file was built");
        let cert = verify_certificate(cfg, &alpha).expect("same basis");
        check(&mut r, "chamber certificate", cert.accepted, Some(cert.failures.join("; ")));
        r.certificate = Some(cert);
    }

    if !r.failures.is_empty() {
        r.outcome = Outcome::CheckFailure;
    }
    r
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainSearchReport {
    pub surface: String,
    pub max_pairs: usize,
    pub search: SubchainSearch,
    pub pairs: Vec<(Vec<String>, Vec<String>)>,
}

pub fn search_chains(cfg: &Configuration, max_pairs: usize) -> Result<ChainSearchReport, crate::wahl::WahlError> {
    let search = find_wahl_subchains(cfg, max_pairs)?;
    Ok(ChainSearchReport {
        surface: cfg.name.clone(),
        max_pairs,
        pairs: search.pair_names(),
        search,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CertificateReport {
    pub surface: String,
    pub outcome: Outcome,
    pub declared: Option<ChamberCertificate>,
    pub search: CertificateSearch,
    pub note: String,
}

pub fn find_certificate(file: &ConfigFile, cfg: &Configuration, bound: i64) -> CertificateReport {
    let declared = file
        .alpha_class(cfg.n())
        .map(|a| verify_certificate(cfg, &a.expect("checked when the file was built")).expect("same basis"));
    let search = search_certificate(cfg, bound).expect("chains are resolved");
    let outcome = if declared.as_ref().is_some_and(|c| !c.accepted) {
        Outcome::CheckFailure
    } else if search.certificate.is_none() {
        Outcome::NoCertificate
    } else {
        Outcome::Ok
    };
    CertificateReport {
        surface: cfg.name.clone(),
        outcome,
        declared,
        search,
        note: ANALYTIC_NOTE.to_string(),
    }
}

pub fn to_json<T: Serialize>(report: &T) -> String {
    serde_json::to_string_pretty(report).expect("reports serialize") + "\n"
}

fn fmt_q(r: &Rational, approx: bool) -> String {
    if approx {
        format!("{} (≈ {})", exact::to_string(r), exact::approx(r))
    } else {
        exact::to_string(r)
    }
}

pub fn render_verify(r: &VerifyReport, approx: bool) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "surface {}", r.surface);
    for c in &r.chains {
        let wahl = match &c.wahl {
            Some(w) => format!("Wahl p={} q={} (|π₁| = {})", w.p, w.q, w.knot_determinant),
            None => "not Wahl".to_string(),
        };
        let _ = writeln!(
            out,
            "chain {}{}: {:?} det {} {}; characteristic set {:?}",
            c.name,
            if c.aux { " (aux)" } else { "" },
            c.self_intersections,
            c.determinant,
            wahl,
            c.characteristic_set.members,
        );
    }
    if let Some(d) = &r.discrepancies {
        for c in &d.chains {
            let vals: Vec<String> = c.values.iter().map(|v| fmt_q(v, approx)).collect();
            let _ = writeln!(out, "discrepancies {}: {}", c.chain, vals.join(", "));
        }
    }
    if let Some(inv) = &r.invariants {
        let _ = writeln!(
            out,
            "b2+ = {}, b2- = {}, euler = {}, signature = {}, K² = {}",
            inv.b2_plus,
            inv.b2_minus,
            inv.euler,
            inv.signature,
            fmt_q(&inv.k_squared, approx)
        );
    }
    if let Some(s) = &r.sigma_star_k {
        let terms: Vec<String> = s.terms.iter().map(|(c, v)| format!("{} {c}", fmt_q(v, approx))).collect();
        let _ = writeln!(out, "σ*K = {}", terms.join(" + "));
    }
    if let Some(a) = &r.ampleness {
        for p in &a.pairings {
            let _ = writeln!(out, "σ*K·{} = {}", p.curve, fmt_q(&p.value, approx));
        }
        let _ = writeln!(out, "fiber in support: {}", a.fiber_cover.as_deref().unwrap_or("none"));
        let verdict = match &a.verdict {
            Verdict::VerifiedOnDeclaredCurves { scope } => format!("verified ({scope})"),
            Verdict::Failed { reason } => format!("failed: {reason:?}"),
        };
        let _ = writeln!(out, "ampleness: {verdict}");
    }
    if let Some(c) = &r.certificate {
        let _ = writeln!(
            out,
            "certificate α = {}: α² = {}, K·α = {}, α·h = {}, {}",
            c.alpha,
            c.alpha_sq,
            c.k_dot_alpha,
            c.h_dot_alpha,
            if c.accepted { "accepted" } else { "rejected" }
        );
    }
    if let Some(b) = &r.branch_locus {
        let _ = writeln!(
            out,
            "branch locus {}RP² with normal Euler number {} (standard set {:?}, |e| < 2n: {})",
            b.nonorientable_genus, b.normal_euler, b.standard_euler_set, b.cop_range_ok
        );
    }
    for c in &r.checks {
        let _ = writeln!(out, "[{}] {}", if c.passed { "pass" } else { "FAIL" }, c.name);
    }
    for f in &r.failures {
        let _ = writeln!(out, "failure: {f}");
    }
    for n in &r.notes {
        let _ = writeln!(out, "note: {n}");
    }
    let _ = writeln!(out, "outcome: {:?}", r.outcome);
    out
}

pub fn render_chain_search(r: &ChainSearchReport) -> String {
    let mut out = String::new();
    for c in &r.search.candidates {
        let _ = writeln!(out, "candidate {} : p={} q={} {:?}", c.curves.join(" "), c.descriptor.p, c.descriptor.q, c.descriptor.chain);
    }
    for (a, b) in &r.pairs {
        let _ = writeln!(out, "pair [{}] [{}]", a.join(" "), b.join(" "));
    }
    let _ = writeln!(out, "truncated: {}", r.search.truncated);
    out
}

pub fn render_certificate(r: &CertificateReport) -> String {
    let mut out = String::new();
    let line = |c: &ChamberCertificate| {
        format!(
            "α = {}: α² = {}, K·α = {}, α·h = {}, {}",
            c.alpha,
            c.alpha_sq,
            c.k_dot_alpha,
            c.h_dot_alpha,
            if c.accepted { "accepted".to_string() } else { format!("rejected ({})", c.failures.join("; ")) }
        )
    };
    if let Some(c) = &r.declared {
        let _ = writeln!(out, "declared {}", line(c));
    }
    let _ = writeln!(out, "complement rank {}, bound {}, {} points examined", r.search.basis.len(), r.search.bound, r.search.examined);
    match (&r.search.certificate, &r.search.coordinates) {
        (Some(c), Some(x)) => {
            let _ = writeln!(out, "found {} at coordinates {:?}", line(c), x);
        }
        _ => {
            let _ = writeln!(out, "no certificate within bound {}", r.search.bound);
        }
    }
    let _ = writeln!(out, "note: {}", r.note);
    out
}
