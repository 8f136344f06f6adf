//! Serializable report: every flag, residual, identity and equivalence for one
//! structure, with the conventions used. Scalars are stored as strings
//! (`"1/4"` exact, shortest round-trip decimal in float mode) so that reports
//! compare bit-for-bit.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::almost_abelian::{classify_4d, lee_form_aa, params_from_structure, pluricanonical_conditions_aa};
use crate::conditions::{classify_metric, residual_scale, verify_equivalences};
use crate::feasibility::symplectic_feasibility;
use crate::forms::KForm;
use crate::hermitian::AlmostHermitian;
use crate::identities::{battery, Hypotheses, LeeTensors};
use crate::linalg::{vec_sub, Matrix};
use crate::scalar::{max_abs, Scalar};

/// Sign and normalization choices behind every number in a report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conventions {
    pub indices: String,
    pub structure_constants: String,
    pub fundamental_form: String,
    pub j_on_one_forms: String,
    pub j_on_two_forms: String,
    pub nijenhuis: String,
    pub curvature_sign: String,
    pub star_ricci: String,
    pub lee_normalisation: String,
    pub almost_abelian_lee_form: String,
    pub flag_rule: String,
}

pub fn conventions() -> Conventions {
    let s = |x: &str| x.to_string();
    Conventions {
        indices: s("basis e1..e_dim, 1-based"),
        structure_constants: s("[e_i, e_j] = sum_k c_ij^k e_k"),
        fundamental_form: s("F(X,Y) = g(JX,Y)"),
        j_on_one_forms: s("(J alpha)(X) = -alpha(JX)"),
        j_on_two_forms: s("(J phi)(X,Y) = -phi(JX,Y)"),
        nijenhuis: s("4N(X,Y) = [JX,JY] - [X,Y] - J[JX,Y] - J[X,JY]"),
        curvature_sign: s("R(X,Y) = D_[X,Y] - [D_X, D_Y]"),
        star_ricci: s("rho*(X,Y) = 1/2 sum_a g(R(X,Y) f_a, J f_a), f_a g-orthonormal"),
        lee_normalisation: s("dF = theta ^ F and J delta F = (n-1) theta"),
        almost_abelian_lee_form: s("theta = (Jv)^flat - tr(A) e^2n"),
        flag_rule: s("exact: residual = 0; float: |r| <= tau * max(1, scale)"),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeeSection {
    pub theta: Vec<String>,
    pub t: Vec<String>,
    pub j_theta: Vec<String>,
    pub jt: Vec<String>,
    pub eta: Vec<String>,
    pub v: Vec<String>,
    pub norm_sq: String,
    pub residual: String,
    pub d_f: BTreeMap<String, String>,
    pub d_theta_sym: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FirstKindSection {
    pub kind: String,
    pub automorphism_dim: usize,
    pub t: Option<Vec<String>>,
    pub adapted_scale: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivalenceEntry {
    pub name: String,
    pub applicable: bool,
    pub lhs: bool,
    pub rhs: bool,
    pub holds: bool,
    pub residuals: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityEntry {
    pub name: String,
    pub applicable: bool,
    pub residual: String,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeasibilitySection {
    pub verdict: String,
    pub slice: String,
    pub candidate_dim: usize,
    pub witness: Option<BTreeMap<String, String>>,
    pub witness_min_eigenvalue: Option<String>,
    pub certificate: Option<Vec<Vec<String>>>,
    pub optimum: Option<String>,
    pub exact_optimum: Option<String>,
    pub restarts: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlmostAbelianSection {
    pub a: String,
    pub b: Vec<String>,
    pub v: Vec<String>,
    pub a_matrix: Vec<Vec<String>>,
    pub unimodular: bool,
    pub lee_form_agrees: Option<bool>,
    /// Only in dimension 4.
    pub conditions: Option<BTreeMap<String, String>>,
    pub label: Option<String>,
    pub jordan: Option<String>,
    pub b_dot_v: Option<String>,
    pub consistent: Option<bool>,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub name: String,
    pub dim: usize,
    pub arithmetic_mode: String,
    pub tolerance: String,
    pub conventions: Conventions,
    pub unimodular: bool,
    pub flags: BTreeMap<String, bool>,
    pub residuals: BTreeMap<String, String>,
    pub lee: LeeSection,
    pub image_of_n: Vec<Vec<String>>,
    pub first_kind: Option<FirstKindSection>,
    pub equivalences: Vec<EquivalenceEntry>,
    pub identities: Vec<IdentityEntry>,
    pub feasibility: Option<FeasibilitySection>,
    pub almost_abelian: Option<AlmostAbelianSection>,
    pub warnings: Vec<String>,
    pub status: String,
    pub failures: Vec<String>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    /// Short human-readable summary.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} (dim {}, {} mode, tau {})\n", self.name, self.dim, self.arithmetic_mode, self.tolerance);
        for (k, v) in &self.flags {
            out.push_str(&format!("  {:<26} {}\n", k, v));
        }
        out.push_str(&format!("  theta = [{}]\n", self.lee.theta.join(", ")));
        if let Some(f) = &self.feasibility {
            out.push_str(&format!("  feasibility: {}", f.verdict));
            if let Some(o) = &f.optimum {
                out.push_str(&format!(" (optimum {})", o));
            }
            out.push('\n');
        }
        if let Some(aa) = &self.almost_abelian {
            if let Some(l) = &aa.label {
                out.push_str(&format!("  almost abelian class: {}\n", l));
            }
        }
        for w in &self.warnings {
            out.push_str(&format!("  warning: {}\n", w));
        }
        out.push_str(&format!("status: {}\n", self.status));
        for f in &self.failures {
            out.push_str(&format!("  failed: {}\n", f));
        }
        out
    }
}

#[derive(Debug, Clone, Default)]
pub struct ReportOptions {
    pub feasibility: bool,
    /// Flags that must be true for the report to pass.
    pub require: Vec<String>,
}

fn strs<S: Scalar>(v: &[S]) -> Vec<String> {
    v.iter().map(Scalar::to_repr).collect()
}

fn matrix_strs<S: Scalar>(m: &Matrix<S>) -> Vec<Vec<String>> {
    m.to_rows().iter().map(|r| strs(r)).collect()
}

fn map_strs<S: Scalar>(m: &BTreeMap<String, S>) -> BTreeMap<String, String> {
    m.iter().map(|(k, v)| (k.clone(), v.to_repr())).collect()
}

/// `{"e1^e3": "1/2", …}` over the nonzero coefficients.
pub fn form_strs<S: Scalar>(f: &KForm<S>) -> BTreeMap<String, String> {
    f.terms()
        .filter(|(_, c)| !c.is_zero())
        .map(|(idx, c)| {
            let key = idx.iter().map(|i| format!("e{}", i + 1)).collect::<Vec<_>>().join("^");
            (key, c.to_repr())
        })
        .collect()
}

/// Runs validation-dependent stages in order: Lee form, connection, checkers,
/// identities, optional feasibility search, and almost abelian classification.
pub fn run_report<S: Scalar>(s: &AlmostHermitian<S>, name: &str, opts: &ReportOptions) -> Report {
    let tol = s.tol;
    let scale = residual_scale(s);
    let small = |r: &S| tol.negligible_scaled(r, scale);
    let t = LeeTensors::compute(s);
    let rep = classify_metric(s);
    let unimodular = s.alg().is_unimodular(&tol);
    let mut failures: Vec<String> = rep.warnings.iter().map(|w| format!("implication: {}", w)).collect();

    let lee = LeeSection {
        theta: strs(&t.lee.theta),
        t: strs(&t.lee.t),
        j_theta: strs(&t.lee.j_theta),
        jt: strs(&t.lee.jt),
        eta: strs(&t.lee.eta),
        v: strs(&t.lee.v),
        norm_sq: t.lee.norm_sq.to_repr(),
        residual: t.lee.residual.to_repr(),
        d_f: form_strs(&s.f().d(s.alg())),
        d_theta_sym: matrix_strs(&t.d_theta.symmetric_part()),
    };

    let first_kind = rep.first_kind.as_ref().map(|fk| FirstKindSection {
        kind: fk.automorphisms.kind.as_str().to_string(),
        automorphism_dim: fk.automorphisms.basis.len(),
        t: fk.t_candidate.as_ref().map(|v| strs(v)),
        adapted_scale: rep.adapted.as_ref().map(|a| a.scale.to_repr()),
    });

    let mut equivalences = Vec::new();
    if let Ok(eq) = verify_equivalences(s) {
        for e in eq.items {
            if e.applicable && !e.holds {
                failures.push(format!("equivalence: {}", e.name));
            }
            equivalences.push(EquivalenceEntry {
                name: e.name.to_string(),
                applicable: e.applicable,
                lhs: e.lhs,
                rhs: e.rhs,
                holds: e.holds,
                residuals: map_strs(&e.residuals),
            });
        }
    }

    let hyp = Hypotheses {
        lee_exact: small(&t.lee.residual),
        lcs: rep.flags.is_lcs,
        unimodular,
        t_orthogonal_to_imn: rep.flags.t_orthogonal_to_imn,
        pluricanonical: rep.flags.pluricanonical,
    };
    let identities = battery(s, &t, hyp, &[])
        .into_iter()
        .map(|c| {
            let holds = small(&c.residual);
            if c.applicable && !holds {
                failures.push(format!("identity: {}", c.name));
            }
            IdentityEntry { name: c.name.to_string(), applicable: c.applicable, residual: c.residual.to_repr(), holds }
        })
        .collect();

    let feasibility = opts.feasibility.then(|| {
        let f = symplectic_feasibility(s);
        FeasibilitySection {
            verdict: f.verdict.as_str().to_string(),
            slice: f.slice.as_str().to_string(),
            candidate_dim: f.basis.len(),
            witness: f.witness.as_ref().map(form_strs),
            witness_min_eigenvalue: f.witness_min_eigenvalue.map(|x| x.to_repr()),
            certificate: f.certificate.as_ref().map(matrix_strs),
            optimum: f.optimum.map(|x| x.to_repr()),
            exact_optimum: f.exact_optimum.as_ref().map(Scalar::to_repr),
            restarts: f.restarts,
        }
    });

    let almost_abelian = params_from_structure(s).map(|p| {
        let lee_form_agrees = hyp.lee_exact.then(|| small(&max_abs(vec_sub(&lee_form_aa(&p), &t.lee.theta).iter())));
        if lee_form_agrees == Some(false) {
            failures.push("almost abelian Lee form disagrees".to_string());
        }
        let mut sec = AlmostAbelianSection {
            a: p.a.to_repr(),
            b: strs(&p.b),
            v: strs(&p.v),
            a_matrix: matrix_strs(&p.a_matrix),
            unimodular: p.is_unimodular(),
            lee_form_agrees,
            conditions: None,
            label: None,
            jordan: None,
            b_dot_v: None,
            consistent: None,
            note: None,
        };
        if let Ok(r) = pluricanonical_conditions_aa(&p) {
            let mut m = BTreeMap::new();
            m.insert("closed".to_string(), max_abs(r.closed.iter()).to_repr());
            m.insert("orthogonality".to_string(), max_abs(r.orthogonality.iter()).to_repr());
            m.insert("anti_invariance".to_string(), max_abs(r.anti_invariance.iter()).to_repr());
            sec.conditions = Some(m);
            match classify_4d(&p, &tol) {
                Ok(c) => {
                    sec.label = Some(c.label.name());
                    sec.jordan = Some(c.jordan.name());
                    sec.b_dot_v = Some(c.b_dot_v.to_repr());
                    sec.consistent = Some(c.consistent);
                }
                Err(e) => sec.note = Some(e.to_string()),
            }
        }
        sec
    });

    for req in &opts.require {
        match rep.flags.get(req) {
            Some(true) => {}
            Some(false) => failures.push(format!("required flag: {}", req)),
            None => failures.push(format!("unknown flag: {}", req)),
        }
    }

    Report {
        name: name.to_string(),
        dim: s.dim(),
        arithmetic_mode: if S::EXACT { "exact" } else { "float" }.to_string(),
        tolerance: if S::EXACT { "0".to_string() } else { tol.tau.to_repr() },
        conventions: conventions(),
        unimodular,
        flags: rep.flags.named().into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
        residuals: map_strs(&rep.residuals),
        lee,
        image_of_n: rep.image_of_n.iter().map(|v| strs(v)).collect(),
        first_kind,
        equivalences,
        identities,
        feasibility,
        almost_abelian,
        warnings: rep.warnings.clone(),
        status: if failures.is_empty() { "pass" } else { "fail" }.to_string(),
        failures,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::entry;

    #[test]
    fn a41_report() {
        let r = run_report(&entry("A4_1").unwrap().structure, "A4_1", &ReportOptions::default());
        assert!(r.flags["pluricanonical"] && !r.flags["vaisman"]);
        assert_eq!(r.lee.theta, vec!["0", "0", "-1", "0"]);
        assert_eq!(r.lee.d_f.get("e2^e3^e4").map(String::as_str), Some("1"));
        assert_eq!(r.status, "pass", "{:?}", r.failures);
        assert!(r.almost_abelian.is_none());
    }

    #[test]
    fn json_round_trip() {
        let opts = ReportOptions { feasibility: true, require: vec!["is_gcs".into()] };
        for name in ["A4_8", "aa_A3_4_plus_A1"] {
            let s = entry(name).unwrap().structure;
            let r = run_report(&s, name, &opts);
            assert_eq!(Report::from_json(&r.to_json()).unwrap(), r);
            let rf = run_report(&s.to_f64(), name, &opts);
            assert_eq!(Report::from_json(&rf.to_json()).unwrap(), rf);
            assert_eq!(r.status, "fail");
            assert_eq!(r.failures, vec!["required flag: is_gcs".to_string()]);
        }
    }

    #[test]
    fn almost_abelian_section() {
        let r = run_report(&entry("aa_A3_6_plus_A1").unwrap().structure, "x", &ReportOptions::default());
        let aa = r.almost_abelian.unwrap();
        assert_eq!(aa.label.as_deref(), Some("A_3_6_plus_A1"));
        assert_eq!(aa.consistent, Some(true));
        assert_eq!(aa.lee_form_agrees, Some(true));
    }

    #[test]
    fn unknown_required_flag_fails() {
        let opts = ReportOptions { feasibility: false, require: vec!["nope".into()] };
        let r = run_report(&entry("abelian_kahler").unwrap().structure, "k", &opts);
        assert_eq!(r.failures, vec!["unknown flag: nope".to_string()]);
    }
}
