//! Pointwise tensor identities of almost Hermitian Lie algebras, each returned
//! as the max-norm of `lhs − rhs` (or the value of an expression that must vanish).
//!
//! Several identities hold only under extra hypotheses; the doc comment of each
//! function says which. `θ` is always the least-squares Lee form.

use crate::connection::{canonical_connection_forms, covariant_j, star_ricci};
use crate::forms::{volume_form, KForm};
use crate::hermitian::{AlmostHermitian, LeeData, Tensor2};
use crate::linalg::{dot, unit, Matrix};
use crate::scalar::Scalar;

/// `(α∧β)(X,Y) = α(X)β(Y) − α(Y)β(X)` as a matrix.
pub fn wedge_matrix<S: Scalar>(a: &[S], b: &[S]) -> Matrix<S> {
    let d = a.len();
    Matrix::from_fn(d, d, |i, j| a[i].clone() * b[j].clone() - a[j].clone() * b[i].clone())
}

/// Bilinear-tensor norm `Σ g^{ia} g^{jb} φ_ij φ_ab`.
pub fn tensor_norm_sq<S: Scalar>(ginv: &Matrix<S>, phi: &Matrix<S>) -> S {
    tensor_inner(ginv, phi, phi)
}

pub fn tensor_inner<S: Scalar>(ginv: &Matrix<S>, a: &Matrix<S>, b: &Matrix<S>) -> S {
    ginv.mul(a).mul(ginv).mul(&b.transpose()).trace()
}

/// Norm of an antisymmetric matrix as a 2-form (half the tensor norm).
pub fn form_norm_sq<S: Scalar>(ginv: &Matrix<S>, phi: &Matrix<S>) -> S {
    tensor_norm_sq(ginv, phi) / S::from_i64(2)
}

/// Derived tensors shared by the identities below.
#[derive(Debug, Clone)]
pub struct LeeTensors<S> {
    pub lee: LeeData<S>,
    /// `Dθ[(i, j)] = (D_{e_i} θ)(e_j)`.
    pub d_theta: Tensor2<S>,
    /// `dθ` as an antisymmetric matrix.
    pub ext_d_theta: Matrix<S>,
    /// `d(Jθ)`.
    pub d_j_theta: Matrix<S>,
    /// `N_{JT}(X,Y) = g(N(X,Y), JT)`.
    pub n_jt: Matrix<S>,
    /// `δ^g θ`.
    pub delta_theta: S,
}

impl<S: Scalar> LeeTensors<S> {
    pub fn new(s: &AlmostHermitian<S>, lee: LeeData<S>) -> Self {
        let lc = s.levi_civita();
        let d_theta = lc.covariant_one_form(&lee.theta);
        let ext_d_theta = KForm::one_form(&lee.theta).d(s.alg()).as_matrix();
        let d_j_theta = KForm::one_form(&lee.j_theta).d(s.alg()).as_matrix();
        let n_jt = s.nijenhuis_form(&lee.jt);
        let delta_theta = -dot_matrix(s.ginv(), &d_theta);
        Self { lee, d_theta, ext_d_theta, d_j_theta, n_jt, delta_theta }
    }

    pub fn compute(s: &AlmostHermitian<S>) -> Self {
        Self::new(s, s.lee_form().expect("valid structures have nondegenerate F"))
    }

    /// `(Dθ)^{sym,J,+}_{J·,·}`.
    pub fn sym_j_plus_composed(&self, s: &AlmostHermitian<S>) -> Matrix<S> {
        s.compose_j(&s.split_tensor(&self.d_theta.symmetric_part()).j_plus)
    }

    /// `J(dθ)^{J,−}`.
    pub fn j_of_d_theta_minus(&self, s: &AlmostHermitian<S>) -> Matrix<S> {
        s.j_on_two_form(&s.split_tensor(&self.ext_d_theta).j_minus)
    }

    pub fn theta_wedge_j_theta(&self) -> Matrix<S> {
        wedge_matrix(&self.lee.theta, &self.lee.j_theta)
    }
}

/// `Σ_{ab} A_{ab} B_{ab}`.
fn dot_matrix<S: Scalar>(a: &Matrix<S>, b: &Matrix<S>) -> S {
    dot(a.entries(), b.entries())
}

/// `dJθ = 2(Dθ)^{sym,J,+}_{J·,·} + J(dθ)^{J,−} + 2N_{JT} + θ∧Jθ − ‖θ‖²F`.
///
/// Holds on every structure in dimension 4; in higher dimension it needs `dF = θ∧F`.
pub fn formula_almost_hermitian<S: Scalar>(s: &AlmostHermitian<S>, t: &LeeTensors<S>) -> S {
    let two = S::from_i64(2);
    let f = s.f().as_matrix();
    let rhs = t
        .sym_j_plus_composed(s)
        .scale(&two)
        .add(&t.j_of_d_theta_minus(s))
        .add(&t.n_jt.scale(&two))
        .add(&t.theta_wedge_j_theta())
        .sub(&f.scale(&t.lee.norm_sq));
    t.d_j_theta.sub(&rhs).max_abs()
}

/// `D_X F = ½(X^♭∧Jθ + (JX)^♭∧θ) + 2N_{JX}` for every basis `X`.
///
/// Holds in dimension 4 for any structure, in general on LCS structures.
pub fn dj_expression<S: Scalar>(s: &AlmostHermitian<S>, t: &LeeTensors<S>) -> S {
    let d = s.dim();
    let f = s.f().as_matrix();
    let half = S::from_ratio(1, 2);
    let two = S::from_i64(2);
    let mut worst = S::zero();
    for x in 0..d {
        let e = unit(d, x);
        let lhs = s.levi_civita().covariant_tensor(x, &f);
        let xflat = s.flat(&e);
        let jxflat = s.flat(&s.apply_j(&e));
        let rhs = wedge_matrix(&xflat, &t.lee.j_theta)
            .add(&wedge_matrix(&jxflat, &t.lee.theta))
            .scale(&half)
            .add(&s.nijenhuis_form(&s.apply_j(&e)).scale(&two));
        worst = S::max_of(worst, lhs.sub(&rhs).max_abs());
    }
    worst
}

/// `γ⁰` from the curvature of the first canonical connection against `ρ* + Φ`.
pub fn chern_form<S: Scalar>(s: &AlmostHermitian<S>, t: &LeeTensors<S>) -> S {
    canonical_connection_forms(s, &t.lee.theta, S::zero()).chern_residual
}

/// Bochner formula for a 1-form `α`, all basis `X`:
/// `(δ(Dα)^{J,+} − δ(Dα)^{J,−})(X) = ρ*(α^♯,JX) − (n−1)Dα(JT,JX) − Σ Dα(Je_a,(D_{e_a}J)X)`.
pub fn bochner<S: Scalar>(s: &AlmostHermitian<S>, t: &LeeTensors<S>, alpha: &[S], rho: &Matrix<S>) -> S {
    let d = s.dim();
    let da = s.levi_civita().covariant_one_form(alpha);
    let parts = s.split_tensor(&da);
    let lhs: Vec<S> = s
        .codifferential_tensor(&parts.j_plus)
        .into_iter()
        .zip(s.codifferential_tensor(&parts.j_minus))
        .map(|(a, b)| a - b)
        .collect();
    let dj = covariant_j(s);
    let asharp = s.sharp(alpha);
    let nm1 = S::from_i64(s.n() as i64 - 1);
    let jcols: Vec<Vec<S>> = (0..d).map(|a| s.apply_j(&unit(d, a))).collect();
    let mut worst = S::zero();
    for x in 0..d {
        let e = unit(d, x);
        let jx = s.apply_j(&e);
        let mut rhs = dot(&rho.vec_mul(&asharp), &jx) - nm1.clone() * dot(&da.vec_mul(&t.lee.jt), &jx);
        for a in 0..d {
            for b in 0..d {
                let gab = &s.ginv()[(a, b)];
                if gab.is_zero() {
                    continue;
                }
                let y = dj[b].mul_vec(&e);
                rhs = rhs - gab.clone() * dot(&da.vec_mul(&jcols[a]), &y);
            }
        }
        worst = S::max_of(worst, (lhs[x].clone() - rhs).abs());
    }
    worst
}

/// `φ∧ψ∧F^{n−2} = (⟨φ,F⟩⟨ψ,F⟩ − ⟨φ,ψ⟩) F^n / (n(n−1))` for J-invariant `φ`.
pub fn j_invariant_formula<S: Scalar>(s: &AlmostHermitian<S>, phi: &KForm<S>, psi: &KForm<S>) -> S {
    let n = s.n();
    let f = s.f();
    let mut lhs = phi.wedge(psi).expect("same dimension");
    for _ in 0..n.saturating_sub(2) {
        lhs = lhs.wedge(f).expect("same dimension");
    }
    let gi = s.ginv();
    let coef = (phi.inner(f, gi).unwrap() * psi.inner(f, gi).unwrap() - phi.inner(psi, gi).unwrap())
        / S::from_i64((n * (n - 1)) as i64);
    // F^n = n! vol
    let mut fact = S::one();
    for m in 1..=n {
        fact = fact * S::from_i64(m as i64);
    }
    let rhs = volume_form(f).scale(&(coef * fact));
    lhs.sub(&rhs).max_abs()
}

/// `g(N(X,Y),Z) + g(N(Y,Z),X) + g(N(Z,X),Y)` over basis triples; vanishes on LCS structures.
pub fn cyclic_nijenhuis<S: Scalar>(s: &AlmostHermitian<S>) -> S {
    let d = s.dim();
    let table = s.nijenhuis_table();
    let lowered: Vec<Vec<Vec<S>>> =
        table.iter().map(|row| row.iter().map(|v| s.flat(v)).collect()).collect();
    let mut worst = S::zero();
    for x in 0..d {
        for y in 0..d {
            for z in 0..d {
                let v = lowered[x][y][z].clone() + lowered[y][z][x].clone() + lowered[z][x][y].clone();
                worst = S::max_of(worst, v.abs());
            }
        }
    }
    worst
}

/// `dJθ = −‖θ‖²F + θ∧Jθ + 2(Dθ)^{sym}_{J·,·} + g((L_T J)·,·)` on LCS structures.
pub fn cartan_lee_formula<S: Scalar>(s: &AlmostHermitian<S>, t: &LeeTensors<S>) -> S {
    let two = S::from_i64(2);
    let f = s.f().as_matrix();
    let ltj = s.lie_derivative_j(&t.lee.t);
    let rhs = f
        .scale(&t.lee.norm_sq)
        .neg()
        .add(&t.theta_wedge_j_theta())
        .add(&s.compose_j(&t.d_theta.symmetric_part()).scale(&two))
        .add(&ltj.transpose().mul(s.g()));
    t.d_j_theta.sub(&rhs).max_abs()
}

/// Value of the dimension-4 integrand
/// `(δθ)² − 2‖θ‖²δθ + ‖2N_{JT} + J(dθ)^{J,−}‖² − 4‖(Dθ)^{sym,J,+}_{J·,·}‖² + 2g([T,JT],JT)`,
/// norms taken as 2-forms. Vanishes pointwise on unimodular algebras.
pub fn dim4_integrand<S: Scalar>(s: &AlmostHermitian<S>, t: &LeeTensors<S>) -> S {
    let two = S::from_i64(2);
    let four = S::from_i64(4);
    let gi = s.ginv();
    let dt = t.delta_theta.clone();
    let sd = t.n_jt.scale(&two).add(&t.j_of_d_theta_minus(s));
    let asd = t.sym_j_plus_composed(s);
    let br = s.alg().bracket(&t.lee.t, &t.lee.jt);
    dt.clone() * dt.clone() - two.clone() * t.lee.norm_sq.clone() * dt + form_norm_sq(gi, &sd)
        - four * form_norm_sq(gi, &asd)
        + two * s.g_product(&br, &t.lee.jt)
}

/// `2‖(Dθ)^{J,+}_{J·,·}‖² + 4g(D_{JT}θ, Jθ)`, norm as a 2-form. Vanishes on unimodular
/// LCS structures with `T ⟂ Im N`.
pub fn unimodular_residue<S: Scalar>(s: &AlmostHermitian<S>, t: &LeeTensors<S>) -> S {
    let dplus = s.compose_j(&s.split_tensor(&t.d_theta).j_plus);
    let d_jt_theta = t.d_theta.vec_mul(&t.lee.jt);
    let g_term = dot(&d_jt_theta, &s.sharp(&t.lee.j_theta));
    S::from_i64(2) * form_norm_sq(s.ginv(), &dplus) + S::from_i64(4) * g_term
}

/// Dimension 4: the self-dual and anti-self-dual parts of `dJθ`, as projected by `⋆`,
/// against the closed-form split. Returns the max residual of both parts.
pub fn self_dual_split<S: Scalar>(s: &AlmostHermitian<S>, t: &LeeTensors<S>) -> S {
    let half = S::from_ratio(1, 2);
    let two = S::from_i64(2);
    let f = s.f().as_matrix();
    let vol = volume_form(s.f()).top_coeff();
    let djt = KForm::from_antisymmetric(&t.d_j_theta);
    let star = djt.hodge_star(s.ginv(), &vol).as_matrix();
    let sd = t.d_j_theta.add(&star).scale(&half);
    let asd = t.d_j_theta.sub(&star).scale(&half);
    let n2 = t.lee.norm_sq.clone();
    let dt = t.delta_theta.clone();
    let sd_formula = f
        .scale(&((dt.clone() + n2.clone()) * half.clone()))
        .neg()
        .add(&t.n_jt.scale(&two))
        .add(&t.j_of_d_theta_minus(s));
    let asd_formula = t
        .sym_j_plus_composed(s)
        .scale(&two)
        .add(&t.theta_wedge_j_theta())
        .add(&f.scale(&((dt - n2) * half)));
    S::max_of(sd.sub(&sd_formula).max_abs(), asd.sub(&asd_formula).max_abs())
}

/// `J δ^g F − (n−1) θ`, max-norm.
pub fn lee_normalisation<S: Scalar>(s: &AlmostHermitian<S>, t: &LeeTensors<S>) -> S {
    let jdf = s.j_on_one_form(&s.codifferential_form(s.f()).as_vector());
    let nm1 = S::from_i64(s.n() as i64 - 1);
    let v: Vec<S> = jdf.iter().zip(&t.lee.theta).map(|(a, b)| a.clone() - nm1.clone() * b.clone()).collect();
    crate::scalar::max_abs(v.iter())
}

/// `2‖(Dθ)^{J,+}_{J·,·}‖² + 4g(D_{JT}θ, Jθ) + 3g([T,JT],JT)`. Observed to vanish on
/// unimodular LCS structures with `T ⟂ Im N`, so the residue is zero exactly when
/// `g([T,JT],JT)` is.
pub fn unimodular_residue_bracket<S: Scalar>(s: &AlmostHermitian<S>, t: &LeeTensors<S>) -> S {
    let br = s.alg().bracket(&t.lee.t, &t.lee.jt);
    (unimodular_residue(s, t) + S::from_i64(3) * s.g_product(&br, &t.lee.jt)).abs()
}

/// Bundle of `ρ*` for callers evaluating several Bochner residuals.
pub fn star_ricci_matrix<S: Scalar>(s: &AlmostHermitian<S>) -> Matrix<S> {
    star_ricci(s)
}

/// Which hypotheses hold, for deciding where each identity applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Hypotheses {
    /// `dF = θ∧F` solvable (always in dimension 4).
    pub lee_exact: bool,
    pub lcs: bool,
    pub unimodular: bool,
    pub t_orthogonal_to_imn: bool,
    pub pluricanonical: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdentityCheck<S> {
    pub name: &'static str,
    pub applicable: bool,
    pub residual: S,
}

/// Evaluates every pointwise identity with its hypotheses. `alphas` are the
/// 1-forms fed to the Bochner formula (θ and the basis are always added).
pub fn battery<S: Scalar>(
    s: &AlmostHermitian<S>,
    t: &LeeTensors<S>,
    h: Hypotheses,
    alphas: &[Vec<S>],
) -> Vec<IdentityCheck<S>> {
    let d = s.dim();
    let dim4 = d == 4;
    let lc = s.levi_civita();
    let curv = crate::connection::Curvature::of_connection(s.alg(), lc.matrices());
    let mut out = vec![
        IdentityCheck { name: "levi_civita_torsion", applicable: true, residual: lc.torsion_residual(s.alg()) },
        IdentityCheck { name: "levi_civita_metric", applicable: true, residual: lc.metric_residual(s.g()) },
        IdentityCheck { name: "curvature_symmetries", applicable: true, residual: curv.symmetry_residuals(s.g()).max() },
        IdentityCheck { name: "chern_form", applicable: true, residual: chern_form(s, t) },
        IdentityCheck { name: "lee_normalisation", applicable: h.lee_exact, residual: lee_normalisation(s, t) },
        IdentityCheck {
            name: "formula_almost_hermitian",
            applicable: h.lee_exact,
            residual: formula_almost_hermitian(s, t),
        },
        IdentityCheck { name: "dj_expression", applicable: dim4 || h.lcs, residual: dj_expression(s, t) },
        IdentityCheck { name: "cyclic_nijenhuis", applicable: h.lcs, residual: cyclic_nijenhuis(s) },
        IdentityCheck { name: "cartan_lee_formula", applicable: h.lcs, residual: cartan_lee_formula(s, t) },
        IdentityCheck {
            name: "self_dual_split",
            applicable: dim4 && h.lcs,
            residual: if dim4 { self_dual_split(s, t) } else { S::zero() },
        },
        IdentityCheck {
            name: "dim4_integrand",
            applicable: dim4 && h.unimodular,
            residual: if dim4 { dim4_integrand(s, t).abs() } else { S::zero() },
        },
        IdentityCheck {
            name: "unimodular_residue",
            applicable: h.unimodular && h.pluricanonical,
            residual: unimodular_residue(s, t).abs(),
        },
        IdentityCheck {
            name: "unimodular_residue_bracket",
            applicable: h.unimodular && h.lcs && h.t_orthogonal_to_imn,
            residual: unimodular_residue_bracket(s, t),
        },
    ];
    let rho = star_ricci(s);
    let star_t_jt = dot(&rho.vec_mul(&t.lee.t), &t.lee.jt).abs();
    out.push(IdentityCheck {
        name: "star_ricci_t_jt",
        applicable: h.unimodular && h.pluricanonical,
        residual: star_t_jt,
    });
    let mut worst = S::zero();
    let basis = (0..d).map(|i| unit(d, i));
    for alpha in basis.chain(std::iter::once(t.lee.theta.clone())).chain(alphas.iter().cloned()) {
        worst = S::max_of(worst, bochner(s, t, &alpha, &rho));
    }
    out.push(IdentityCheck { name: "bochner", applicable: h.lee_exact, residual: worst });
    // φ over a basis of J-invariant 2-forms, ψ over all basis 2-forms
    let mut worst = S::zero();
    let inv = j_invariant_two_forms(s);
    for phi in &inv {
        for idx in crate::forms::combinations(d, 2) {
            worst = S::max_of(worst, j_invariant_formula(s, phi, &KForm::basis(d, &idx)));
        }
    }
    out.push(IdentityCheck { name: "j_invariant_formula", applicable: true, residual: worst });
    out
}

/// Basis of the 2-forms with `φ(J·,J·) = φ`.
pub fn j_invariant_two_forms<S: Scalar>(s: &AlmostHermitian<S>) -> Vec<KForm<S>> {
    let d = s.dim();
    let pairs = crate::forms::combinations(d, 2);
    let j = s.j();
    let cols: Vec<Vec<S>> = pairs
        .iter()
        .map(|p| {
            let wm = KForm::basis(d, p).as_matrix();
            KForm::from_antisymmetric(&j.transpose().mul(&wm).mul(j).sub(&wm)).dense()
        })
        .collect();
    let m = Matrix::from_fn(cols[0].len(), pairs.len(), |r, c| cols[c][r].clone());
    m.nullspace(&s.tol).into_iter().map(|v| KForm::from_dense(d, 2, &v)).collect()
}
