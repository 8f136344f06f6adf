//! Almost abelian Lie algebras 𝔫 ⋊ ℝe_{2n} with the adapted structure
//! `J e_i = e_{2n−i+1}`, `g` the identity, and the dimension-4 classification.
//!
//! ad_{e_{2n}} restricted to 𝔫 = span(e_1, 𝔫₁, e_{2n−1}…) is the block matrix
//!
//! ```text
//! [ a  bᵀ ]
//! [ v  A  ]
//! ```
//!
//! in the basis (e_1, 𝔫₁) with 𝔫₁ = span(e_2, …, e_{2n−1}).

use std::fmt;

use nalgebra::DMatrix;

use crate::algebra::{Bracket, LieAlgebra};
use crate::error::{Error, Result};
use crate::hermitian::AlmostHermitian;
use crate::linalg::{dot, Matrix};
use crate::scalar::{max_abs, Scalar, Tolerance};

#[derive(Debug, Clone, PartialEq)]
pub struct AlmostAbelianParams<S> {
    /// Half the dimension.
    pub n: usize,
    pub a: S,
    pub b: Vec<S>,
    pub v: Vec<S>,
    pub a_matrix: Matrix<S>,
}

impl<S: Scalar> AlmostAbelianParams<S> {
    pub fn new(n: usize, a: S, b: Vec<S>, v: Vec<S>, a_matrix: Matrix<S>) -> Result<Self> {
        if n < 2 {
            return Err(Error::PreconditionFailed(format!("n = {} but almost abelian data needs n ≥ 2", n)));
        }
        let m = 2 * n - 2;
        if b.len() != m || v.len() != m || a_matrix.rows() != m || a_matrix.cols() != m {
            return Err(Error::DimensionMismatch(format!(
                "n = {} needs b, v of length {} and A of size {}x{}, got {}, {} and {}x{}",
                n,
                m,
                m,
                m,
                b.len(),
                v.len(),
                a_matrix.rows(),
                a_matrix.cols()
            )));
        }
        Ok(Self { n, a, b, v, a_matrix })
    }

    /// Zero data in dimension `2n`.
    pub fn zero(n: usize) -> Self {
        let m = 2 * n - 2;
        Self { n, a: S::zero(), b: vec![S::zero(); m], v: vec![S::zero(); m], a_matrix: Matrix::zeros(m, m) }
    }

    /// Four-dimensional data from small integers, `A` row-major.
    pub fn dim4(a: i64, b: [i64; 2], v: [i64; 2], am: [[i64; 2]; 2]) -> Self {
        let f = S::from_i64;
        Self {
            n: 2,
            a: f(a),
            b: vec![f(b[0]), f(b[1])],
            v: vec![f(v[0]), f(v[1])],
            a_matrix: Matrix::from_i64(&[&am[0], &am[1]]),
        }
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    /// ad_{e_{2n}} on 𝔫 in the basis (e_1, …, e_{2n−1}).
    pub fn ad_block(&self) -> Matrix<S> {
        let m = 2 * self.n - 1;
        Matrix::from_fn(m, m, |r, c| match (r, c) {
            (0, 0) => self.a.clone(),
            (0, c) => self.b[c - 1].clone(),
            (r, 0) => self.v[r - 1].clone(),
            (r, c) => self.a_matrix[(r - 1, c - 1)].clone(),
        })
    }

    /// `tr ad_{e_{2n}} = a + tr A`; every other adjoint map is traceless.
    pub fn is_unimodular(&self) -> bool {
        (self.a.clone() + self.a_matrix.trace()).is_zero()
    }
}

/// `J e_i = e_{2n−i+1}` for i ≤ n.
pub fn adapted_j<S: Scalar>(n: usize) -> Matrix<S> {
    let d = 2 * n;
    let mut j = Matrix::zeros(d, d);
    for i in 0..n {
        j[(d - 1 - i, i)] = S::one();
        j[(i, d - 1 - i)] = -S::one();
    }
    j
}

pub fn build_algebra<S: Scalar>(p: &AlmostAbelianParams<S>) -> Result<LieAlgebra<S>> {
    let d = p.dim();
    let m = p.ad_block();
    let mut brackets = Vec::new();
    for col in 0..d - 1 {
        for row in 0..d - 1 {
            if !m[(row, col)].is_zero() {
                brackets.push(Bracket::new(d - 1, col, row, m[(row, col)].clone()));
            }
        }
    }
    LieAlgebra::new(d, brackets)
}

pub fn build_almost_abelian<S: Scalar>(p: &AlmostAbelianParams<S>, tol: Tolerance) -> Result<AlmostHermitian<S>> {
    AlmostHermitian::with_identity_metric(build_algebra(p)?, adapted_j(p.n), tol)
}

/// Recovers (a, b, v, A) when the structure is in almost abelian normal form:
/// identity metric, the adapted J, and every bracket of the form [e_{2n}, e_i].
pub fn params_from_structure<S: Scalar>(s: &AlmostHermitian<S>) -> Option<AlmostAbelianParams<S>> {
    let d = s.dim();
    if d < 4 || d % 2 != 0 || *s.g() != Matrix::identity(d) || *s.j() != adapted_j::<S>(d / 2) {
        return None;
    }
    let last = d - 1;
    for i in 0..last {
        for j in (i + 1)..last {
            if s.alg().bracket_basis(i, j).iter().any(|x| !x.is_zero()) {
                return None;
            }
        }
        if !s.alg().c(last, i, last).is_zero() {
            return None;
        }
    }
    // column i of ad_{e_{2n}} on 𝔫
    let m = Matrix::from_fn(last, last, |r, c| s.alg().c(last, c, r).clone());
    let n = d / 2;
    let a = m[(0, 0)].clone();
    let b = (1..last).map(|c| m[(0, c)].clone()).collect();
    let v = (1..last).map(|r| m[(r, 0)].clone()).collect();
    let am = Matrix::from_fn(last - 1, last - 1, |r, c| m[(r + 1, c + 1)].clone());
    AlmostAbelianParams::new(n, a, b, v, am).ok()
}

/// θ = (Jv)^♭ − (tr A) e^{2n}.
pub fn lee_form_aa<S: Scalar>(p: &AlmostAbelianParams<S>) -> Vec<S> {
    let d = p.dim();
    let mut v = vec![S::zero(); d];
    for (k, x) in p.v.iter().enumerate() {
        v[k + 1] = x.clone();
    }
    let mut theta = adapted_j::<S>(p.n).mul_vec(&v);
    theta[d - 1] = theta[d - 1].clone() - p.a_matrix.trace();
    theta
}

/// Residuals of the three dimension-4 systems.
#[derive(Debug, Clone, PartialEq)]
pub struct AaResiduals<S> {
    /// dθ = 0: `A₂₁v₁ − A₁₁v₂`, `A₂₂v₁ − A₁₂v₂`.
    pub closed: Vec<S>,
    /// Image of N orthogonal to T, JT: `A₁₁v₁ + A₂₁v₂ + ab₁`, `A₁₂v₁ + A₂₂v₂ + ab₂`.
    pub orthogonality: Vec<S>,
    /// Dθ J-anti-invariant: `a`, `A₂₂v₁ − A₂₁v₂`, `A₁₂v₁ − A₁₁v₂`.
    pub anti_invariance: Vec<S>,
}

impl<S: Scalar> AaResiduals<S> {
    pub fn max(&self) -> S {
        max_abs(self.closed.iter().chain(&self.orthogonality).chain(&self.anti_invariance))
    }

    pub fn vanish(&self, tol: &Tolerance) -> bool {
        tol.negligible(&self.max())
    }
}

pub fn pluricanonical_conditions_aa<S: Scalar>(p: &AlmostAbelianParams<S>) -> Result<AaResiduals<S>> {
    if p.n != 2 {
        return Err(Error::UnsupportedDimension(format!(
            "the condition systems are stated in dimension 4, got dimension {}",
            p.dim()
        )));
    }
    let am = |i: usize, j: usize| p.a_matrix[(i, j)].clone();
    let (v1, v2) = (p.v[0].clone(), p.v[1].clone());
    let (b1, b2) = (p.b[0].clone(), p.b[1].clone());
    let a = p.a.clone();
    Ok(AaResiduals {
        closed: vec![
            am(1, 0) * v1.clone() - am(0, 0) * v2.clone(),
            am(1, 1) * v1.clone() - am(0, 1) * v2.clone(),
        ],
        orthogonality: vec![
            am(0, 0) * v1.clone() + am(1, 0) * v2.clone() + a.clone() * b1,
            am(0, 1) * v1.clone() + am(1, 1) * v2.clone() + a.clone() * b2,
        ],
        anti_invariance: vec![a, am(1, 1) * v1.clone() - am(1, 0) * v2.clone(), am(0, 1) * v1 - am(0, 0) * v2],
    })
}

/// Eigenvalue signature of a real matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
    pub complex_pairs: usize,
}

#[allow(non_camel_case_types)]
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClassLabel {
    A4_1,
    A3_4PlusA1,
    A3_6PlusA1,
    Abelian,
    Other {
        dim: usize,
        /// Nilpotency index of ad_{e_{2n}} on 𝔫, when nilpotent.
        nilpotency_index: Option<usize>,
        signature: Signature,
        unimodular: bool,
    },
}

impl ClassLabel {
    pub fn name(&self) -> String {
        match self {
            ClassLabel::A4_1 => "A_4_1".into(),
            ClassLabel::A3_4PlusA1 => "A_3_4_plus_A1".into(),
            ClassLabel::A3_6PlusA1 => "A_3_6_plus_A1".into(),
            ClassLabel::Abelian => "abelian".into(),
            ClassLabel::Other { dim, nilpotency_index, signature: s, unimodular } => format!(
                "other(dim={}, nilpotency_index={}, eigenvalues=+{}/-{}/zero:{}/complex_pairs:{}, unimodular={})",
                dim,
                nilpotency_index.map(|k| k.to_string()).unwrap_or_else(|| "none".into()),
                s.positive,
                s.negative,
                s.zero,
                s.complex_pairs,
                unimodular
            ),
        }
    }

    pub fn is_target(&self) -> bool {
        matches!(self, ClassLabel::A4_1 | ClassLabel::A3_4PlusA1 | ClassLabel::A3_6PlusA1)
    }
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// Nilpotency index of a square matrix, or `None`.
pub fn nilpotency_index<S: Scalar>(m: &Matrix<S>) -> Option<usize> {
    let mut p = Matrix::identity(m.rows());
    for k in 0..=m.rows() {
        if p.is_zero() {
            return Some(k);
        }
        p = p.mul(m);
    }
    None
}

/// Eigenvalue signature. The zero count is exact; the rest comes from a float
/// eigen solve of the invertible part.
pub fn signature<S: Scalar>(m: &Matrix<S>, tol: &Tolerance) -> Signature {
    let n = m.rows();
    let mut kernel = 0;
    let mut p = Matrix::identity(n);
    // algebraic multiplicity of 0 is the stable kernel dimension of the powers
    for _ in 0..n {
        p = p.mul(m);
        kernel = n - p.rank(tol);
    }
    let na = DMatrix::from_fn(n, n, |i, j| m[(i, j)].to_f64());
    let mut eig: Vec<(f64, f64)> = na.complex_eigenvalues().iter().map(|z| (z.re, z.im)).collect();
    eig.sort_by(|x, y| x.0.abs().partial_cmp(&y.0.abs()).unwrap().then(x.1.abs().partial_cmp(&y.1.abs()).unwrap()));
    let rest = &eig[kernel.min(n)..];
    let scale = 1e-9 * (1.0 + m.max_abs().to_f64());
    let mut s = Signature { positive: 0, negative: 0, zero: kernel, complex_pairs: 0 };
    let mut complex = 0;
    for &(re, im) in rest {
        if im.abs() > scale {
            complex += 1;
        } else if re > 0.0 {
            s.positive += 1;
        } else {
            s.negative += 1;
        }
    }
    s.complex_pairs = complex / 2;
    s
}

/// Real Jordan type of ad_{e₄}|_𝔫 matched against the three canonical
/// matrices, independent of the b·v rule.
pub fn jordan_label<S: Scalar>(p: &AlmostAbelianParams<S>, tol: &Tolerance) -> ClassLabel {
    let m = p.ad_block();
    let nil = nilpotency_index(&m);
    let sig = signature(&m, tol);
    let other = ClassLabel::Other { dim: p.dim(), nilpotency_index: nil, signature: sig, unimodular: p.is_unimodular() };
    if p.dim() != 4 {
        return other;
    }
    match nil {
        Some(0) | Some(1) => return ClassLabel::Abelian,
        Some(3) => return ClassLabel::A4_1,
        Some(_) => return other,
        None => {}
    }
    // characteristic polynomial λ³ − tr λ² + c₂ λ − det
    let tr = m.trace();
    let det = m.det();
    let c2 = principal_minors_2(&m);
    if !(tol.negligible(&tr) && tol.negligible(&det)) {
        return other;
    }
    if c2.is_negative() {
        ClassLabel::A3_4PlusA1
    } else if c2.is_positive() {
        ClassLabel::A3_6PlusA1
    } else {
        other
    }
}

fn principal_minors_2<S: Scalar>(m: &Matrix<S>) -> S {
    let mut acc = S::zero();
    for i in 0..m.rows() {
        for j in i + 1..m.rows() {
            acc = acc + m[(i, i)].clone() * m[(j, j)].clone() - m[(i, j)].clone() * m[(j, i)].clone();
        }
    }
    acc
}

/// Result of the dimension-4 classification.
#[derive(Debug, Clone, PartialEq)]
pub struct Classification<S> {
    /// Label from the sign of b·v (b·v = 0 with ad nilpotent of index 2 is not 𝒜₄,₁).
    pub label: ClassLabel,
    /// Independent label from the real Jordan type.
    pub jordan: ClassLabel,
    pub b_dot_v: S,
    pub consistent: bool,
}

/// Classifies 4-dimensional pluricanonical almost abelian data by the sign of b·v.
pub fn classify_4d<S: Scalar>(p: &AlmostAbelianParams<S>, tol: &Tolerance) -> Result<Classification<S>> {
    let res = pluricanonical_conditions_aa(p)?;
    let v_zero = p.v.iter().all(|x| tol.negligible(x));
    let b_zero = p.b.iter().all(|x| tol.negligible(x));
    let a_zero = tol.negligible(&p.a) && tol.negligible(&p.a_matrix.max_abs());
    if v_zero && b_zero && a_zero {
        return Err(Error::Degenerate("v = 0 and b = 0: the algebra is abelian".into()));
    }
    if !res.vanish(tol) || !a_zero || v_zero || !p.is_unimodular() {
        return Err(Error::PreconditionFailed(format!(
            "classification needs a = 0, A = 0, v ≠ 0 and vanishing conditions (max residual {})",
            res.max().to_repr()
        )));
    }
    let bv = dot(&p.b, &p.v);
    let jordan = jordan_label(p, tol);
    let label = if bv.is_positive() && !tol.negligible(&bv) {
        ClassLabel::A3_4PlusA1
    } else if bv.is_negative() && !tol.negligible(&bv) {
        ClassLabel::A3_6PlusA1
    } else if b_zero {
        // ad² = 0 here: the Heisenberg algebra plus a line
        jordan
    } else {
        ClassLabel::A4_1
    };
    Ok(Classification { consistent: label == jordan, label, jordan, b_dot_v: bv })
}

/// Label by the sign of b·v alone, as in the three cases of the classification.
pub fn label_by_sign<S: Scalar>(bv: &S, tol: &Tolerance) -> ClassLabel {
    if tol.negligible(bv) {
        ClassLabel::A4_1
    } else if bv.is_positive() {
        ClassLabel::A3_4PlusA1
    } else {
        ClassLabel::A3_6PlusA1
    }
}
