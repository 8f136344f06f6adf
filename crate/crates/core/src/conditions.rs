//! Structural conditions (LCS, first kind, adapted, pluricanonical, …) and the
//! pointwise checks of their equivalences.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::forms::KForm;
use crate::hermitian::{AlmostHermitian, LeeData};
use crate::identities::{self, LeeTensors};
use crate::linalg::{dot, Matrix};
use crate::scalar::{max_abs, Scalar, Tolerance};

#[derive(Debug, Clone, PartialEq)]
pub struct LcsCheck<S> {
    pub is_lcs: bool,
    pub theta: Vec<S>,
    /// `dF − θ∧F`, max-norm.
    pub lee_residual: S,
    /// `dθ`, max-norm.
    pub dtheta_residual: S,
}

/// Scale used to turn float residuals into flags: residuals are quadratic in the
/// structure constants and linear in the metric.
pub fn residual_scale<S: Scalar>(s: &AlmostHermitian<S>) -> f64 {
    let c = max_abs(s.alg().brackets().iter().map(|b| &b.value)).to_f64();
    let g = s.g().max_abs().to_f64().max(s.ginv().max_abs().to_f64());
    (1.0 + c).powi(2) * (1.0 + g).powi(2)
}

fn small<S: Scalar>(s: &AlmostHermitian<S>, r: &S) -> bool {
    s.tol.negligible_scaled(r, residual_scale(s))
}

pub fn check_lcs<S: Scalar>(s: &AlmostHermitian<S>) -> LcsCheck<S> {
    let lee = s.lee_form().expect("valid structures have nondegenerate F");
    lcs_from_lee(s, &lee)
}

fn lcs_from_lee<S: Scalar>(s: &AlmostHermitian<S>, lee: &LeeData<S>) -> LcsCheck<S> {
    let dtheta = KForm::one_form(&lee.theta).d(s.alg()).max_abs();
    let is_lcs = small(s, &lee.residual) && small(s, &dtheta);
    LcsCheck { is_lcs, theta: lee.theta.clone(), lee_residual: lee.residual.clone(), dtheta_residual: dtheta }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LcsKind {
    /// The Lee morphism is onto.
    First,
    /// θ vanishes on every infinitesimal automorphism.
    Second,
    /// θ = 0: globally conformally symplectic, the dichotomy does not apply.
    Undetermined,
}

impl LcsKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            LcsKind::First => "first",
            LcsKind::Second => "second",
            LcsKind::Undetermined => "undetermined",
        }
    }
}

/// Infinitesimal automorphisms `{X : L_X F = 0}` and the Lee morphism on them.
#[derive(Debug, Clone, PartialEq)]
pub struct AutomorphismAlgebra<S> {
    pub basis: Vec<Vec<S>>,
    pub lee_morphism: Vec<S>,
    pub kind: LcsKind,
}

pub fn automorphism_algebra<S: Scalar>(s: &AlmostHermitian<S>) -> Result<AutomorphismAlgebra<S>> {
    let lcs = check_lcs(s);
    if !lcs.is_lcs {
        return Err(Error::NotLcs(lcs.lee_residual.to_repr()));
    }
    let d = s.dim();
    // X ↦ L_X F is linear; stack the images of the basis as columns
    let cols: Vec<Vec<S>> = (0..d).map(|i| s.lie_derivative_f(&crate::linalg::unit(d, i)).dense()).collect();
    let rows = cols[0].len();
    let m = Matrix::from_fn(rows, d, |r, c| cols[c][r].clone());
    let basis = m.nullspace(&s.tol);
    let lee_morphism: Vec<S> = basis.iter().map(|x| dot(&lcs.theta, x)).collect();
    let kind = if lcs.theta.iter().all(|x| small(s, x)) {
        LcsKind::Undetermined
    } else if lee_morphism.iter().any(|x| !small(s, x)) {
        LcsKind::First
    } else {
        LcsKind::Second
    };
    Ok(AutomorphismAlgebra { basis, lee_morphism, kind })
}

#[derive(Debug, Clone, PartialEq)]
pub struct FirstKindCheck<S> {
    pub first_kind: bool,
    /// Minimal g-norm automorphism with `θ(T) = 1`.
    pub t_candidate: Option<Vec<S>>,
    /// `η = −ι_T F` for the candidate.
    pub eta: Option<Vec<S>>,
    /// `F − (dη − θ∧η)`, max-norm.
    pub f_residual: Option<S>,
    pub automorphisms: AutomorphismAlgebra<S>,
}

pub fn check_first_kind<S: Scalar>(s: &AlmostHermitian<S>) -> Result<FirstKindCheck<S>> {
    let aut = automorphism_algebra(s)?;
    if aut.kind != LcsKind::First {
        return Ok(FirstKindCheck { first_kind: false, t_candidate: None, eta: None, f_residual: None, automorphisms: aut });
    }
    // minimise cᵀGc subject to wᵀc = 1, G the Gram matrix of the basis
    let k = aut.basis.len();
    let gram = Matrix::from_fn(k, k, |a, b| s.g_product(&aut.basis[a], &aut.basis[b]));
    let y = gram.solve(&aut.lee_morphism, &s.tol).expect("Gram matrix of a basis is invertible");
    let denom = dot(&aut.lee_morphism, &y);
    let d = s.dim();
    let mut t = vec![S::zero(); d];
    for (c, b) in y.iter().zip(&aut.basis) {
        let w = c.clone() / denom.clone();
        for i in 0..d {
            t[i] = t[i].clone() + w.clone() * b[i].clone();
        }
    }
    let (eta, res) = first_kind_form(s, &t);
    Ok(FirstKindCheck {
        first_kind: true,
        t_candidate: Some(t),
        eta: Some(eta),
        f_residual: Some(res),
        automorphisms: aut,
    })
}

/// `η = −ι_T F` and the residual of `F = dη − θ∧η`.
fn first_kind_form<S: Scalar>(s: &AlmostHermitian<S>, t: &[S]) -> (Vec<S>, S) {
    let lee = s.lee_form().expect("nondegenerate");
    let eta: Vec<S> = s.f().contract(t).as_vector().into_iter().map(|x| -x).collect();
    let eta_form = KForm::one_form(&eta);
    let rhs = eta_form
        .d(s.alg())
        .sub(&KForm::one_form(&lee.theta).wedge(&eta_form).expect("same dimension"));
    (eta, s.f().sub(&rhs).max_abs())
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdaptedCheck<S> {
    pub adapted: bool,
    /// Homothety factor `λ = ‖θ‖²`; the checks run on `(λF, λg)`, where `‖θ‖ = 1`.
    pub scale: S,
    /// `JV'` with `ι_{V'}(λF) = θ`.
    pub t: Vec<S>,
    pub residuals: BTreeMap<String, S>,
    pub h_positive: bool,
}

/// Adaptedness of `J` to the LCS structure, after the homothety that makes `‖θ‖ = 1`.
///
/// `Jθ = −η` forces `T = JV`, so that vector is tested as the automorphism.
pub fn check_adapted<S: Scalar>(s: &AlmostHermitian<S>) -> Result<AdaptedCheck<S>> {
    let fk = check_first_kind(s)?;
    if !fk.first_kind {
        return Err(Error::NotFirstKind);
    }
    let lee = s.lee_form()?;
    let lambda = lee.norm_sq.clone();
    let f2 = s.f().scale(&lambda);
    let g2 = s.g().scale(&lambda);
    let gp = |x: &[S], y: &[S]| dot(x, &g2.mul_vec(y));
    // V' = V/λ, T = JV'
    let v: Vec<S> = lee.v.iter().map(|x| x.clone() / lambda.clone()).collect();
    let t = s.apply_j(&v);
    let eta: Vec<S> = f2.contract(&t).as_vector().into_iter().map(|x| -x).collect();
    let mut res = BTreeMap::new();
    let one = S::one();
    res.insert("theta_of_t".to_string(), (dot(&lee.theta, &t) - one.clone()).abs());
    res.insert("lie_t_f".to_string(), s.lie_derivative_f(&t).max_abs());
    let jte: Vec<S> = lee.j_theta.iter().zip(&eta).map(|(a, b)| a.clone() + b.clone()).collect();
    res.insert("j_theta_plus_eta".to_string(), max_abs(jte.iter()));
    let ortho = [
        (gp(&t, &t) - one.clone()).abs(),
        (gp(&v, &v) - one.clone()).abs(),
        gp(&t, &v).abs(),
    ];
    res.insert("t_v_orthonormal".to_string(), max_abs(ortho.iter()));
    // H = ker θ ∩ ker η
    let constraints = Matrix::from_rows(vec![lee.theta.clone(), eta.clone()]);
    let h = constraints.nullspace(&s.tol);
    let split: Vec<S> = h.iter().flat_map(|x| [gp(x, &t), gp(x, &v)]).collect();
    res.insert("splitting_orthogonal".to_string(), max_abs(split.iter()));
    // J preserves H
    let jh: Vec<S> = h.iter().flat_map(|x| {
        let jx = s.apply_j(x);
        [dot(&lee.theta, &jx), dot(&eta, &jx)]
    }).collect();
    res.insert("j_preserves_h".to_string(), max_abs(jh.iter()));
    // dη(·, J·) restricted to H
    let deta = KForm::one_form(&eta).d(s.alg()).as_matrix().mul(s.j());
    let hm = Matrix::from_rows(h.clone());
    let restricted = if h.is_empty() { Matrix::zeros(0, 0) } else { hm.mul(&deta).mul(&hm.transpose()) };
    res.insert("h_form_asymmetry".to_string(), restricted.antisymmetric_part().max_abs());
    let h_positive = h.is_empty() || restricted.symmetric_part().is_positive_definite(&s.tol);
    let adapted = h_positive && res.values().all(|r| small(s, r));
    Ok(AdaptedCheck { adapted, scale: lambda, t, residuals: res, h_positive })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Flags {
    pub is_lcs: bool,
    pub lee_closed: bool,
    pub is_gcs: bool,
    pub is_gauduchon: bool,
    pub t_orthogonal_to_imn: bool,
    pub dtheta_j_anti_invariant: bool,
    pub dtheta_j_invariant: bool,
    pub pluricanonical: bool,
    pub anti_pluricanonical: bool,
    pub vaisman: bool,
    pub first_kind: bool,
    pub adapted: bool,
    pub lee_field_holomorphic: bool,
    pub jt_killing: bool,
}

impl Flags {
    pub fn named(&self) -> Vec<(&'static str, bool)> {
        vec![
            ("is_lcs", self.is_lcs),
            ("lee_closed", self.lee_closed),
            ("is_gcs", self.is_gcs),
            ("is_gauduchon", self.is_gauduchon),
            ("t_orthogonal_to_imn", self.t_orthogonal_to_imn),
            ("dtheta_j_anti_invariant", self.dtheta_j_anti_invariant),
            ("dtheta_j_invariant", self.dtheta_j_invariant),
            ("pluricanonical", self.pluricanonical),
            ("anti_pluricanonical", self.anti_pluricanonical),
            ("vaisman", self.vaisman),
            ("first_kind", self.first_kind),
            ("adapted", self.adapted),
            ("lee_field_holomorphic", self.lee_field_holomorphic),
            ("jt_killing", self.jt_killing),
        ]
    }

    pub fn get(&self, name: &str) -> Option<bool> {
        self.named().into_iter().find(|(n, _)| *n == name).map(|(_, v)| v)
    }
}

#[derive(Debug, Clone)]
pub struct ConditionReport<S> {
    pub flags: Flags,
    pub residuals: BTreeMap<String, S>,
    pub warnings: Vec<String>,
    pub lee: LeeData<S>,
    pub automorphisms: Option<AutomorphismAlgebra<S>>,
    pub first_kind: Option<FirstKindCheck<S>>,
    pub adapted: Option<AdaptedCheck<S>>,
    pub image_of_n: Vec<Vec<S>>,
    pub d_theta: Matrix<S>,
    pub tolerance: Tolerance,
}

/// Evaluates every condition and records the residual behind each flag.
pub fn classify_metric<S: Scalar>(s: &AlmostHermitian<S>) -> ConditionReport<S> {
    let t = LeeTensors::compute(s);
    let lee = t.lee.clone();
    let lcs = lcs_from_lee(s, &lee);
    let mut r: BTreeMap<String, S> = BTreeMap::new();
    let mut f = Flags::default();

    r.insert("lee_equation".into(), lcs.lee_residual.clone());
    r.insert("d_theta".into(), lcs.dtheta_residual.clone());
    f.lee_closed = small(s, &lcs.dtheta_residual);
    f.is_lcs = lcs.is_lcs;
    let theta_norm = max_abs(lee.theta.iter());
    r.insert("theta".into(), theta_norm.clone());
    f.is_gcs = f.is_lcs && small(s, &theta_norm);

    r.insert("codifferential_theta".into(), t.delta_theta.abs());
    f.is_gauduchon = small(s, &t.delta_theta);

    let orth = S::max_of(s.orthogonality_to_image_of_n(&lee.t), s.orthogonality_to_image_of_n(&lee.jt));
    r.insert("t_jt_against_image_of_n".into(), orth.clone());
    f.t_orthogonal_to_imn = small(s, &orth);

    let split = s.split_tensor(&t.d_theta);
    let plus = split.j_plus.max_abs();
    let minus = split.j_minus.max_abs();
    r.insert("d_theta_j_plus".into(), plus.clone());
    r.insert("d_theta_j_minus".into(), minus.clone());
    f.dtheta_j_anti_invariant = small(s, &plus);
    f.dtheta_j_invariant = small(s, &minus);
    let dtheta_all = t.d_theta.max_abs();
    r.insert("lee_derivative".into(), dtheta_all.clone());

    f.pluricanonical = f.is_lcs && f.t_orthogonal_to_imn && f.dtheta_j_anti_invariant;
    f.anti_pluricanonical = f.is_lcs && f.t_orthogonal_to_imn && f.dtheta_j_invariant;
    f.vaisman = f.is_lcs && f.t_orthogonal_to_imn && small(s, &dtheta_all);

    let ltj = s.lie_derivative_j(&lee.t).max_abs();
    r.insert("lie_t_j".into(), ltj.clone());
    f.lee_field_holomorphic = small(s, &ltj);

    // L_X g(Y,Z) = −g([X,Y],Z) − g(Y,[X,Z])
    let ad = s.alg().ad(&lee.jt).expect("length");
    let ga = s.g().mul(&ad);
    let killing = ga.add(&ga.transpose()).max_abs();
    r.insert("lie_jt_g".into(), killing.clone());
    f.jt_killing = small(s, &killing);

    let mut automorphisms = None;
    let mut first_kind = None;
    let mut adapted = None;
    if f.is_lcs {
        if let Ok(fk) = check_first_kind(s) {
            f.first_kind = fk.first_kind;
            if let Some(res) = &fk.f_residual {
                r.insert("first_kind_f".into(), res.clone());
            }
            automorphisms = Some(fk.automorphisms.clone());
            if fk.first_kind {
                if let Ok(ad) = check_adapted(s) {
                    f.adapted = ad.adapted;
                    for (k, v) in &ad.residuals {
                        r.insert(format!("adapted_{}", k), v.clone());
                    }
                    adapted = Some(ad);
                }
            }
            first_kind = Some(fk);
        }
    }

    let mut warnings = Vec::new();
    let mut implies = |cond: bool, concl: bool, text: &str| {
        if cond && !concl {
            warnings.push(text.to_string());
        }
    };
    implies(f.pluricanonical, f.is_gauduchon, "pluricanonical but not Gauduchon");
    let ltf = s.lie_derivative_f(&lee.t).max_abs();
    implies(f.pluricanonical, small(s, &ltf), "pluricanonical but L_T F is nonzero");
    let sympl = t
        .d_j_theta
        .add(&s.f().as_matrix().scale(&lee.norm_sq))
        .sub(&t.theta_wedge_j_theta())
        .max_abs();
    implies(f.pluricanonical, small(s, &sympl), "pluricanonical but dJθ differs from −‖θ‖²F + θ∧Jθ");
    if f.is_lcs && f.t_orthogonal_to_imn {
        let djt_inv = s.split_tensor(&t.d_j_theta).j_minus.max_abs();
        let nt = s.nijenhuis_tensor(&lee.t);
        let nt_sym = nt.antisymmetric_part().max_abs();
        let lc = s.levi_civita();
        let dtj = lc.along(&lee.t).commutator(s.j()).max_abs();
        let djtj = lc.along(&lee.jt).commutator(s.j()).max_abs();
        implies(true, small(s, &djt_inv), "T ⟂ Im N but dJθ is not J-invariant");
        implies(true, small(s, &nt_sym), "T ⟂ Im N but N(T) is not symmetric");
        implies(true, small(s, &dtj) && small(s, &djtj), "T ⟂ Im N but J is not parallel along T, JT");
    }
    implies(f.vaisman, f.pluricanonical && f.anti_pluricanonical, "Vaisman but not both (anti-)pluricanonical");

    ConditionReport {
        flags: f,
        residuals: r,
        warnings,
        lee,
        automorphisms,
        first_kind,
        adapted,
        image_of_n: s.image_of_n(),
        d_theta: t.d_theta,
        tolerance: s.tol,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Equivalence<S> {
    pub name: &'static str,
    pub applicable: bool,
    pub lhs: bool,
    pub rhs: bool,
    pub holds: bool,
    pub residuals: BTreeMap<String, S>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceReport<S> {
    pub items: Vec<Equivalence<S>>,
}

impl<S> EquivalenceReport<S> {
    pub fn all_hold(&self) -> bool {
        self.items.iter().all(|e| e.holds)
    }

    pub fn get(&self, name: &str) -> Option<&Equivalence<S>> {
        self.items.iter().find(|e| e.name == name)
    }
}

/// Evaluates both sides of each equivalence independently.
pub fn verify_equivalences<S: Scalar>(s: &AlmostHermitian<S>) -> Result<EquivalenceReport<S>> {
    let rep = classify_metric(s);
    if !rep.flags.is_lcs {
        return Err(Error::NotLcs(rep.residuals["lee_equation"].to_repr()));
    }
    let t = LeeTensors::compute(s);
    let f = rep.flags;
    let unimodular = s.alg().is_unimodular(&s.tol);
    let mut items = Vec::new();

    // with θ = 0 the first kind is impossible while every other condition is trivial
    let app_a = !f.is_gcs;
    items.push(Equivalence {
        name: "first_kind_adapted",
        applicable: app_a,
        lhs: f.pluricanonical,
        rhs: f.first_kind && f.adapted,
        holds: !app_a || f.pluricanonical == (f.first_kind && f.adapted),
        residuals: BTreeMap::new(),
    });

    let br = s.alg().bracket(&t.lee.t, &t.lee.jt);
    let tjt = s.g_product(&br, &t.lee.jt);
    let residue = identities::unimodular_residue(s, &t);
    let app = unimodular && f.t_orthogonal_to_imn;
    let rhs = small(s, &tjt);
    items.push(Equivalence {
        name: "unimodular_criterion",
        applicable: app,
        lhs: f.pluricanonical,
        rhs,
        holds: !app || f.pluricanonical == rhs,
        residuals: BTreeMap::from([
            ("g_bracket_t_jt_jt".to_string(), tjt.abs()),
            ("unimodular_residue".to_string(), residue.abs()),
        ]),
    });

    let ltj = rep.residuals["lie_t_j"].clone();
    let holo = small(s, &ltj);
    items.push(Equivalence {
        name: "holomorphic_lee_field",
        applicable: true,
        lhs: f.anti_pluricanonical,
        rhs: holo,
        holds: f.anti_pluricanonical == holo,
        residuals: BTreeMap::from([("lie_t_j".to_string(), ltj)]),
    });

    let dth = &t.d_theta;
    let d_t_theta = max_abs(dth.vec_mul(&t.lee.t).iter());
    let d_jt_theta = max_abs(dth.vec_mul(&t.lee.jt).iter());
    let d_jtheta = s.levi_civita().covariant_one_form(&t.lee.j_theta);
    let d_t_jtheta = max_abs(d_jtheta.vec_mul(&t.lee.t).iter());
    let d_jt_jtheta = max_abs(d_jtheta.vec_mul(&t.lee.jt).iter());
    let bracket = max_abs(br.iter());
    let consequences = BTreeMap::from([
        ("d_t_theta".to_string(), d_t_theta),
        ("d_jt_theta".to_string(), d_jt_theta),
        ("d_t_j_theta".to_string(), d_t_jtheta),
        ("d_jt_j_theta".to_string(), d_jt_jtheta),
        ("bracket_t_jt".to_string(), bracket),
    ]);
    let vanish = consequences.values().all(|v| small(s, v));
    items.push(Equivalence {
        name: "pluricanonical_consequences",
        applicable: f.pluricanonical,
        lhs: f.pluricanonical,
        rhs: vanish,
        holds: !f.pluricanonical || vanish,
        residuals: consequences,
    });

    let app4 = s.dim() == 4 && unimodular;
    let integrand = identities::dim4_integrand(s, &t);
    let zero = small(s, &integrand);
    items.push(Equivalence {
        name: "dim4_integrand",
        applicable: app4,
        lhs: true,
        rhs: zero,
        holds: !app4 || zero,
        residuals: BTreeMap::from([("integrand".to_string(), integrand.abs())]),
    });

    Ok(EquivalenceReport { items })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::LieAlgebra;
    use crate::hermitian::tests::{a41, a48, abelian, j_from_pairs, qv};
    use crate::scalar::Rational;

    type Q = Rational;

    #[test]
    fn lcs_examples() {
        let c = check_lcs(&a41());
        assert!(c.is_lcs);
        assert_eq!(c.theta, qv(&[0, 0, -1, 0]));
        assert!(c.dtheta_residual.is_zero());
        let ab = check_lcs(&abelian());
        assert!(ab.is_lcs);
        assert_eq!(ab.theta, qv(&[0, 0, 0, 0]));
    }

    #[test]
    fn other_complex_structure_is_not_lcs() {
        // same algebra, J e1 = e2, J e3 = e4
        let alg = LieAlgebra::from_int_triples(4, &[(1, 3, 0, 1), (2, 3, 1, 1)]).unwrap();
        let s = AlmostHermitian::with_identity_metric(alg, j_from_pairs(4, &[(0, 1), (2, 3)]), Tolerance::default())
            .unwrap();
        let c = check_lcs(&s);
        assert!(!c.is_lcs);
        assert_eq!(c.dtheta_residual, Q::from_i64(1));
        assert!(matches!(automorphism_algebra(&s), Err(Error::NotLcs(_))));
        assert!(matches!(verify_equivalences(&s), Err(Error::NotLcs(_))));
    }

    #[test]
    fn homothetic_metric_stays_lcs() {
        let alg = LieAlgebra::from_int_triples(4, &[(1, 3, 0, 1), (2, 3, 1, 1)]).unwrap();
        let mut g: Matrix<Q> = Matrix::identity(4);
        g[(1, 1)] = Q::from_i64(4);
        g[(3, 3)] = Q::from_i64(4);
        let s = AlmostHermitian::new(alg, j_from_pairs(4, &[(0, 2), (1, 3)]), g, Tolerance::default()).unwrap();
        assert!(check_lcs(&s).is_lcs);
    }

    #[test]
    fn first_kind_examples() {
        let fk = check_first_kind(&a41()).unwrap();
        assert!(fk.first_kind);
        assert_eq!(fk.t_candidate.unwrap(), qv(&[0, 0, -1, 0]));
        assert!(fk.f_residual.unwrap().is_zero());
        let fk8 = check_first_kind(&a48()).unwrap();
        assert!(fk8.first_kind);
        assert_eq!(fk8.t_candidate.unwrap(), qv(&[0, 0, 0, -1]));
        let ab = check_first_kind(&abelian()).unwrap();
        assert!(!ab.first_kind);
        assert_eq!(ab.automorphisms.kind, LcsKind::Undetermined);
        assert!(ab.automorphisms.lee_morphism.iter().all(|x| x.is_zero()));
    }

    #[test]
    fn adapted_examples() {
        let a = check_adapted(&a41()).unwrap();
        assert!(a.adapted, "{:?}", a.residuals);
        assert!(check_adapted(&a48()).unwrap().adapted);
        // −J on the same algebra
        let s = a41();
        // −J flips F and V together, so JV = T survives and so does adaptedness
        let flipped = AlmostHermitian::with_identity_metric(s.alg().clone(), s.j().neg(), Tolerance::default()).unwrap();
        let a = check_adapted(&flipped).unwrap();
        assert!(a.adapted);
        assert_eq!(a.t, qv(&[0, 0, -1, 0]));
        assert!(classify_metric(&flipped).flags.pluricanonical);
        assert!(matches!(check_adapted(&abelian()), Err(Error::NotFirstKind)));
    }

    #[test]
    fn classification_examples() {
        let r = classify_metric(&a41());
        assert!(r.flags.pluricanonical && !r.flags.vaisman && r.flags.is_gauduchon);
        assert!(r.warnings.is_empty(), "{:?}", r.warnings);
        let r8 = classify_metric(&a48());
        assert!(r8.flags.pluricanonical);
        assert!(r8.warnings.is_empty());
        let ab = classify_metric(&abelian());
        let f = ab.flags;
        assert!(f.vaisman && f.pluricanonical && f.anti_pluricanonical && f.is_gcs);
        assert!(!f.first_kind);
    }

    #[test]
    fn equivalences_on_examples() {
        for s in [a41(), a48(), abelian()] {
            let e = verify_equivalences(&s).unwrap();
            assert!(e.all_hold(), "{:?}", e);
        }
        let e = verify_equivalences(&a41()).unwrap();
        let b = e.get("unimodular_criterion").unwrap();
        assert!(b.applicable && b.rhs);
        assert!(b.residuals["g_bracket_t_jt_jt"].is_zero());
    }
}
