//! Levi-Civita connection, curvature, and the Ricci-type forms of the
//! canonical Hermitian connections.
//!
//! An invariant connection is a list of matrices `C[i]` with
//! `C[i][(k, j)]` the `e_k` component of `∇_{e_i} e_j`.
//! Curvature follows `R_{X,Y} = ∇_{[X,Y]} − [∇_X, ∇_Y]`.

use crate::algebra::LieAlgebra;
use crate::forms::KForm;
use crate::hermitian::{AlmostHermitian, Tensor2};
use crate::linalg::{dot, unit, Matrix};
use crate::scalar::Scalar;

/// Christoffel table of the Levi-Civita connection of a left-invariant metric.
#[derive(Debug, Clone, PartialEq)]
pub struct LeviCivita<S> {
    m: Vec<Matrix<S>>,
}

impl<S: Scalar> LeviCivita<S> {
    /// Koszul: `2g(D_X Y, Z) = g([X,Y],Z) − g([Y,Z],X) + g([Z,X],Y)`.
    pub fn new(alg: &LieAlgebra<S>, g: &Matrix<S>, ginv: &Matrix<S>) -> Self {
        let d = alg.dim();
        let half = S::from_ratio(1, 2);
        // gb[i][j] = g([e_i, e_j], ·) as a row
        let gb: Vec<Vec<Vec<S>>> =
            (0..d).map(|i| (0..d).map(|j| g.vec_mul(&alg.bracket_basis(i, j))).collect()).collect();
        let m = (0..d)
            .map(|i| {
                let mut mi = Matrix::zeros(d, d);
                for j in 0..d {
                    let rhs: Vec<S> = (0..d)
                        .map(|k| (gb[i][j][k].clone() - gb[j][k][i].clone() + gb[k][i][j].clone()) * half.clone())
                        .collect();
                    let col = ginv.mul_vec(&rhs);
                    for (k, v) in col.into_iter().enumerate() {
                        mi[(k, j)] = v;
                    }
                }
                mi
            })
            .collect();
        Self { m }
    }

    pub fn dim(&self) -> usize {
        self.m.len()
    }

    /// Matrix of `D_{e_i}`.
    pub fn matrix(&self, i: usize) -> &Matrix<S> {
        &self.m[i]
    }

    pub fn matrices(&self) -> &[Matrix<S>] {
        &self.m
    }

    /// Matrix of `D_X`.
    pub fn along(&self, x: &[S]) -> Matrix<S> {
        combine(&self.m, x)
    }

    /// `D_{e_i} e_j`.
    pub fn christoffel(&self, i: usize, j: usize) -> Vec<S> {
        self.m[i].col(j)
    }

    /// `D_{e_i} α` for a k-form.
    pub fn covariant_form(&self, i: usize, alpha: &KForm<S>) -> KForm<S> {
        alpha.derivation(&self.m[i]).neg()
    }

    /// Table `Dα[(i, j)] = (D_{e_i} α)(e_j)` of a 1-form.
    pub fn covariant_one_form(&self, alpha: &[S]) -> Tensor2<S> {
        let rows = self.m.iter().map(|mi| mi.vec_mul(alpha).into_iter().map(|v| -v).collect()).collect();
        Matrix::from_rows(rows)
    }

    /// `D_{e_i} φ` for a bilinear tensor: `−(Mᵀφ + φM)`.
    pub fn covariant_tensor(&self, i: usize, phi: &Tensor2<S>) -> Tensor2<S> {
        let mi = &self.m[i];
        mi.transpose().mul(phi).add(&phi.mul(mi)).neg()
    }

    /// `D_{e_i} A` for an endomorphism: `[M, A]`.
    pub fn covariant_endomorphism(&self, i: usize, a: &Matrix<S>) -> Matrix<S> {
        self.m[i].commutator(a)
    }

    /// Torsion `D_X Y − D_Y X − [X,Y]` on basis pairs, max-norm.
    pub fn torsion_residual(&self, alg: &LieAlgebra<S>) -> S {
        let d = self.dim();
        let mut worst = S::zero();
        for i in 0..d {
            for j in 0..d {
                let a = self.christoffel(i, j);
                let b = self.christoffel(j, i);
                let br = alg.bracket_basis(i, j);
                for k in 0..d {
                    worst = S::max_of(worst, (a[k].clone() - b[k].clone() - br[k].clone()).abs());
                }
            }
        }
        worst
    }

    /// `g(D_X Y, Z) + g(Y, D_X Z)` on basis triples, max-norm.
    pub fn metric_residual(&self, g: &Matrix<S>) -> S {
        let d = self.dim();
        let mut worst = S::zero();
        for i in 0..d {
            // gM + Mᵀg must vanish
            let gm = g.mul(&self.m[i]);
            worst = S::max_of(worst, gm.add(&gm.transpose()).max_abs());
        }
        worst
    }
}

fn combine<S: Scalar>(ms: &[Matrix<S>], x: &[S]) -> Matrix<S> {
    let d = ms[0].rows();
    let mut out = Matrix::zeros(d, d);
    for (xi, mi) in x.iter().zip(ms) {
        if !xi.is_zero() {
            out = out.add(&mi.scale(xi));
        }
    }
    out
}

/// Curvature endomorphisms `R[i][j] = R_{e_i, e_j}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Curvature<S> {
    r: Vec<Vec<Matrix<S>>>,
}

impl<S: Scalar> Curvature<S> {
    /// `R_{X,Y} = ∇_{[X,Y]} − [∇_X, ∇_Y]` for any invariant connection.
    pub fn of_connection(alg: &LieAlgebra<S>, conn: &[Matrix<S>]) -> Self {
        let d = alg.dim();
        let r = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| combine(conn, &alg.bracket_basis(i, j)).sub(&conn[i].commutator(&conn[j])))
                    .collect()
            })
            .collect();
        Self { r }
    }

    pub fn endomorphism(&self, i: usize, j: usize) -> &Matrix<S> {
        &self.r[i][j]
    }

    /// `R(e_i, e_j, e_k, e_l) = g(R_{e_i,e_j} e_k, e_l)`.
    pub fn component(&self, g: &Matrix<S>, i: usize, j: usize, k: usize, l: usize) -> S {
        let rk = self.r[i][j].col(k);
        dot(&g.vec_mul(&rk), &unit(g.rows(), l))
    }

    /// Max residual of the symmetries of a Riemannian curvature tensor:
    /// antisymmetry in each pair, pair symmetry, and the first Bianchi identity.
    pub fn symmetry_residuals(&self, g: &Matrix<S>) -> CurvatureSymmetries<S> {
        let d = self.r.len();
        let comp = |i, j, k, l| self.component(g, i, j, k, l);
        let mut anti_xy = S::zero();
        let mut anti_zw = S::zero();
        let mut pair = S::zero();
        let mut bianchi = S::zero();
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    for l in 0..d {
                        let v = comp(i, j, k, l);
                        anti_xy = S::max_of(anti_xy, (v.clone() + comp(j, i, k, l)).abs());
                        anti_zw = S::max_of(anti_zw, (v.clone() + comp(i, j, l, k)).abs());
                        pair = S::max_of(pair, (v.clone() - comp(k, l, i, j)).abs());
                        let cyc = v + comp(j, k, i, l) + comp(k, i, j, l);
                        bianchi = S::max_of(bianchi, cyc.abs());
                    }
                }
            }
        }
        CurvatureSymmetries { antisymmetry_xy: anti_xy, antisymmetry_zw: anti_zw, pair_symmetry: pair, bianchi }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureSymmetries<S> {
    pub antisymmetry_xy: S,
    pub antisymmetry_zw: S,
    pub pair_symmetry: S,
    pub bianchi: S,
}

impl<S: Scalar> CurvatureSymmetries<S> {
    pub fn max(&self) -> S {
        [&self.antisymmetry_xy, &self.antisymmetry_zw, &self.pair_symmetry, &self.bianchi]
            .into_iter()
            .fold(S::zero(), |a, b| S::max_of(a, b.clone()))
    }
}

/// `⟨A, B⟩ = Σ_a g(A f_a, B f_a)` over a g-orthonormal frame, written as `tr(g⁻¹ Aᵀ g B)`.
pub fn endomorphism_inner<S: Scalar>(g: &Matrix<S>, ginv: &Matrix<S>, a: &Matrix<S>, b: &Matrix<S>) -> S {
    ginv.mul(&a.transpose()).mul(g).mul(b).trace()
}

/// `½ Σ_a g(R_{X,Y} f_a, J f_a)` for every basis pair.
pub fn ricci_type_form<S: Scalar>(s: &AlmostHermitian<S>, curv: &Curvature<S>) -> Tensor2<S> {
    let d = s.dim();
    let half = S::from_ratio(1, 2);
    Matrix::from_fn(d, d, |i, j| endomorphism_inner(s.g(), s.ginv(), curv.endomorphism(i, j), s.j()) * half.clone())
}

/// Same contraction evaluated in an explicit g-orthogonal frame `f_a`:
/// `½ Σ_a g(R f_a, J f_a) / g(f_a, f_a)`. Serves as an independent check of the
/// frame-free trace.
pub fn ricci_type_form_in_frame<S: Scalar>(
    s: &AlmostHermitian<S>,
    curv: &Curvature<S>,
    frame: &[Vec<S>],
) -> Tensor2<S> {
    let d = s.dim();
    let half = S::from_ratio(1, 2);
    Matrix::from_fn(d, d, |i, j| {
        let r = curv.endomorphism(i, j);
        let mut total = S::zero();
        for f in frame {
            let num = s.g_product(&r.mul_vec(f), &s.apply_j(f));
            total = total + num / s.g_product(f, f);
        }
        total * half.clone()
    })
}

/// Gram–Schmidt without normalisation: a g-orthogonal basis with exact entries.
/// `start` picks the input basis (columns), e.g. the identity or a J-adapted basis.
pub fn orthogonal_frame<S: Scalar>(g: &Matrix<S>, start: &Matrix<S>) -> Vec<Vec<S>> {
    let mut out: Vec<Vec<S>> = Vec::new();
    for c in 0..start.cols() {
        let mut v = start.col(c);
        for f in &out {
            let gf = g.mul_vec(f);
            let coef = dot(&v, &gf) / dot(f, &gf);
            v = v.iter().zip(f).map(|(a, b)| a.clone() - coef.clone() * b.clone()).collect();
        }
        out.push(v);
    }
    out
}

/// Star-Ricci form `ρ*(X,Y) = ½ Σ g(R_{X,Y} f_a, J f_a)`.
pub fn star_ricci<S: Scalar>(s: &AlmostHermitian<S>) -> Tensor2<S> {
    let curv = Curvature::of_connection(s.alg(), s.levi_civita().matrices());
    ricci_type_form(s, &curv)
}

/// `D_{e_i} J` for every basis vector.
pub fn covariant_j<S: Scalar>(s: &AlmostHermitian<S>) -> Vec<Matrix<S>> {
    (0..s.dim()).map(|i| s.levi_civita().covariant_endomorphism(i, s.j())).collect()
}

/// First canonical connection `∇⁰_X = D_X − ½ J (D_X J)`.
pub fn first_canonical_connection<S: Scalar>(s: &AlmostHermitian<S>) -> Vec<Matrix<S>> {
    let half = S::from_ratio(1, 2);
    covariant_j(s)
        .into_iter()
        .enumerate()
        .map(|(i, dj)| s.levi_civita().matrix(i).sub(&s.j().mul(&dj).scale(&half)))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct RicciForms<S> {
    pub star_ricci: Tensor2<S>,
    pub phi: Tensor2<S>,
    /// γ⁰ from the curvature of ∇⁰.
    pub gamma0: Tensor2<S>,
    /// γ⁰ assembled as ρ* + Φ.
    pub gamma0_split: Tensor2<S>,
    /// γᵗ = γ⁰ − t(n−1)/2 · dJθ at the requested t.
    pub t: S,
    pub gamma_t: Tensor2<S>,
    /// γ⁰ − (ρ* + Φ), max-norm.
    pub chern_residual: S,
}

/// `Φ(X,Y) = ¼ ⟨J(D_X J), D_Y J⟩`.
pub fn phi_form<S: Scalar>(s: &AlmostHermitian<S>) -> Tensor2<S> {
    let dj = covariant_j(s);
    let quarter = S::from_ratio(1, 4);
    let jdj: Vec<Matrix<S>> = dj.iter().map(|m| s.j().mul(m)).collect();
    Matrix::from_fn(s.dim(), s.dim(), |i, j| endomorphism_inner(s.g(), s.ginv(), &jdj[i], &dj[j]) * quarter.clone())
}

/// Ricci forms of the canonical family, with `dJθ` supplied from the Lee form.
pub fn canonical_connection_forms<S: Scalar>(s: &AlmostHermitian<S>, theta: &[S], t: S) -> RicciForms<S> {
    let star = star_ricci(s);
    let phi = phi_form(s);
    let nabla0 = first_canonical_connection(s);
    let curv0 = Curvature::of_connection(s.alg(), &nabla0);
    let gamma0 = ricci_type_form(s, &curv0);
    let split = star.add(&phi);
    let chern_residual = gamma0.sub(&split).max_abs();
    let d_j_theta = KForm::one_form(&s.j_on_one_form(theta)).d(s.alg()).as_matrix();
    let coef = t.clone() * S::from_i64(s.n() as i64 - 1) / S::from_i64(2);
    let gamma_t = gamma0.sub(&d_j_theta.scale(&coef));
    RicciForms { star_ricci: star, phi, gamma0, gamma0_split: split, t, gamma_t, chern_residual }
}
