//! Left-invariant differential forms on a Lie algebra.
//!
//! A k-form is stored by its coefficients on strictly increasing multi-indices,
//! so `e^{13}` is the key `[0, 2]`. Evaluation uses the determinant convention:
//! `e^{13}(e1, e3) = 1`.

use std::collections::BTreeMap;

use crate::algebra::LieAlgebra;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{max_abs, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct KForm<S> {
    dim: usize,
    degree: usize,
    coeffs: BTreeMap<Vec<usize>, S>,
}

/// Sorts `idx` in place and returns the permutation sign, or `None` on a repeated index.
pub fn sort_with_sign(idx: &mut [usize]) -> Option<i64> {
    let mut sign = 1;
    for a in 1..idx.len() {
        let mut b = a;
        while b > 0 && idx[b - 1] > idx[b] {
            idx.swap(b - 1, b);
            sign = -sign;
            b -= 1;
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(sign)
    }
}

/// All strictly increasing multi-indices of length `k` in `0..n`, lexicographic.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(0, n, k, &mut Vec::new(), &mut out);
    }
    out
}

/// Complement of a sorted multi-index in `0..n`.
pub fn complement(n: usize, idx: &[usize]) -> Vec<usize> {
    (0..n).filter(|i| !idx.contains(i)).collect()
}

fn signed<S: Scalar>(s: i64, v: S) -> S {
    if s < 0 {
        -v
    } else {
        v
    }
}

impl<S: Scalar> KForm<S> {
    pub fn zero(dim: usize, degree: usize) -> Self {
        Self { dim, degree, coeffs: BTreeMap::new() }
    }

    pub fn scalar(dim: usize, value: S) -> Self {
        let mut f = Self::zero(dim, 0);
        f.set(vec![], value);
        f
    }

    /// `c · e^{i_1 … i_k}`; indices may be unsorted (sign applied) and repeated (zero form).
    pub fn monomial(dim: usize, idx: &[usize], c: S) -> Self {
        let mut f = Self::zero(dim, idx.len());
        let mut key = idx.to_vec();
        if let Some(s) = sort_with_sign(&mut key) {
            f.set(key, signed(s, c));
        }
        f
    }

    pub fn basis(dim: usize, idx: &[usize]) -> Self {
        Self::monomial(dim, idx, S::one())
    }

    pub fn from_terms(dim: usize, degree: usize, terms: impl IntoIterator<Item = (Vec<usize>, S)>) -> Self {
        let mut f = Self::zero(dim, degree);
        for (idx, c) in terms {
            assert_eq!(idx.len(), degree, "term degree does not match form degree");
            f = f.add(&Self::monomial(dim, &idx, c));
        }
        f
    }

    pub fn one_form(coeffs: &[S]) -> Self {
        let dim = coeffs.len();
        Self::from_terms(dim, 1, coeffs.iter().enumerate().map(|(i, c)| (vec![i], c.clone())))
    }

    /// 2-form with `α(e_i, e_j) = m[(i, j)]`; only the strict upper triangle is read.
    pub fn from_antisymmetric(m: &Matrix<S>) -> Self {
        let d = m.rows();
        let mut f = Self::zero(d, 2);
        for i in 0..d {
            for j in i + 1..d {
                f.set(vec![i, j], m[(i, j)].clone());
            }
        }
        f
    }

    fn set(&mut self, key: Vec<usize>, value: S) {
        if value.is_zero() {
            self.coeffs.remove(&key);
        } else {
            self.coeffs.insert(key, value);
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &S)> {
        self.coeffs.iter()
    }

    /// Coefficient on a multi-index, with the sign of sorting applied.
    pub fn coeff(&self, idx: &[usize]) -> S {
        let mut key = idx.to_vec();
        match sort_with_sign(&mut key) {
            Some(s) => signed(s, self.coeffs.get(&key).cloned().unwrap_or_else(S::zero)),
            None => S::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn max_abs(&self) -> S {
        max_abs(self.coeffs.values())
    }

    /// Coefficient vector for a 1-form.
    pub fn as_vector(&self) -> Vec<S> {
        assert_eq!(self.degree, 1);
        (0..self.dim).map(|i| self.coeff(&[i])).collect()
    }

    /// Antisymmetric matrix `α(e_i, e_j)` for a 2-form.
    pub fn as_matrix(&self) -> Matrix<S> {
        assert_eq!(self.degree, 2);
        Matrix::from_fn(self.dim, self.dim, |i, j| self.coeff(&[i, j]))
    }

    /// Coefficient of `e^{1…dim}`.
    pub fn top_coeff(&self) -> S {
        let all: Vec<usize> = (0..self.dim).collect();
        self.coeff(&all)
    }

    /// Coefficients in the lexicographic order of [`combinations`].
    pub fn dense(&self) -> Vec<S> {
        combinations(self.dim, self.degree).iter().map(|i| self.coeff(i)).collect()
    }

    pub fn from_dense(dim: usize, degree: usize, values: &[S]) -> Self {
        Self::from_terms(dim, degree, combinations(dim, degree).into_iter().zip(values.iter().cloned()))
    }

    fn check_same(&self, other: &Self) {
        assert_eq!(self.dim, other.dim, "forms live on algebras of different dimension");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_same(other);
        assert_eq!(self.degree, other.degree, "adding forms of different degree");
        let mut out = self.clone();
        for (k, v) in &other.coeffs {
            let cur = out.coeffs.get(k).cloned().unwrap_or_else(S::zero);
            out.set(k.clone(), cur + v.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-S::one())
    }

    pub fn scale(&self, s: &S) -> Self {
        let mut out = Self::zero(self.dim, self.degree);
        if s.is_zero() {
            return out;
        }
        for (k, v) in &self.coeffs {
            out.set(k.clone(), v.clone() * s.clone());
        }
        out
    }

    /// Evaluation on `k` vectors: `Σ_I α_I det(v[j][I_a])`.
    pub fn eval(&self, vectors: &[Vec<S>]) -> S {
        assert_eq!(vectors.len(), self.degree, "wrong number of arguments");
        let k = self.degree;
        let mut total = S::zero();
        for (idx, c) in &self.coeffs {
            let m = Matrix::from_fn(k, k, |a, b| vectors[b][idx[a]].clone());
            let det = if k == 0 { S::one() } else { m.det() };
            if !det.is_zero() {
                total = total + c.clone() * det;
            }
        }
        total
    }

    /// Wedge product; result is zero when the degrees exceed the dimension.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(format!(
                "wedge of forms on dimensions {} and {}",
                self.dim, other.dim
            )));
        }
        let degree = self.degree + other.degree;
        let mut out = Self::zero(self.dim, degree);
        if degree > self.dim {
            return Ok(out);
        }
        for (a, x) in &self.coeffs {
            for (b, y) in &other.coeffs {
                let mut key: Vec<usize> = a.iter().chain(b.iter()).copied().collect();
                if let Some(s) = sort_with_sign(&mut key) {
                    let cur = out.coeffs.get(&key).cloned().unwrap_or_else(S::zero);
                    out.set(key, cur + signed(s, x.clone() * y.clone()));
                }
            }
        }
        Ok(out)
    }

    /// Interior product `ι_X α`.
    pub fn contract(&self, x: &[S]) -> Self {
        assert_eq!(x.len(), self.dim);
        if self.degree == 0 {
            return Self::zero(self.dim, 0);
        }
        let mut out = Self::zero(self.dim, self.degree - 1);
        for (idx, c) in &self.coeffs {
            for (pos, &i) in idx.iter().enumerate() {
                if x[i].is_zero() {
                    continue;
                }
                // moving e^i to the front costs (-1)^pos
                let mut rest = idx.clone();
                rest.remove(pos);
                let v = signed(if pos % 2 == 0 { 1 } else { -1 }, c.clone() * x[i].clone());
                let cur = out.coeffs.get(&rest).cloned().unwrap_or_else(S::zero);
                out.set(rest, cur + v);
            }
        }
        out
    }

    /// Chevalley–Eilenberg differential:
    /// `dα(X_0,…,X_k) = Σ_{a<b} (−1)^{a+b} α([X_a,X_b], X_0,…,X̂_a,…,X̂_b,…,X_k)`.
    pub fn d(&self, alg: &LieAlgebra<S>) -> Self {
        assert_eq!(alg.dim(), self.dim);
        let n = self.dim;
        let k = self.degree;
        let mut out = Self::zero(n, k + 1);
        if k + 1 > n || self.is_zero() || alg.is_abelian() {
            return out;
        }
        for idx in combinations(n, k + 1) {
            let mut total = S::zero();
            for a in 0..=k {
                for b in a + 1..=k {
                    let br = alg.bracket_basis(idx[a], idx[b]);
                    if br.iter().all(|v| v.is_zero()) {
                        continue;
                    }
                    let rest: Vec<usize> =
                        idx.iter().enumerate().filter(|&(p, _)| p != a && p != b).map(|(_, &i)| i).collect();
                    // α(Y, e_rest) = Σ_m Y_m α(e_m, e_rest)
                    let mut val = S::zero();
                    for (m, y) in br.iter().enumerate() {
                        if y.is_zero() {
                            continue;
                        }
                        let mut full = Vec::with_capacity(k);
                        full.push(m);
                        full.extend_from_slice(&rest);
                        let c = self.coeff(&full);
                        if !c.is_zero() {
                            val = val + y.clone() * c;
                        }
                    }
                    total = total + signed(if (a + b) % 2 == 0 { 1 } else { -1 }, val);
                }
            }
            out.set(idx, total);
        }
        out
    }

    /// Action of an endomorphism as a derivation: `(M·α)(Y_1,…) = Σ_i α(Y_1,…,M Y_i,…)`.
    pub fn derivation(&self, m: &Matrix<S>) -> Self {
        let n = self.dim;
        let mut out = Self::zero(n, self.degree);
        for (idx, c) in &self.coeffs {
            for pos in 0..idx.len() {
                // e^{I}(…, M e_j, …) at slot pos picks M[idx[pos], j]
                for j in 0..n {
                    let mij = &m[(idx[pos], j)];
                    if mij.is_zero() {
                        continue;
                    }
                    let mut key = idx.clone();
                    key[pos] = j;
                    if let Some(s) = sort_with_sign(&mut key) {
                        let cur = out.coeffs.get(&key).cloned().unwrap_or_else(S::zero);
                        out.set(key, cur + signed(s, c.clone() * mij.clone()));
                    }
                }
            }
        }
        out
    }

    /// Lie derivative through Cartan's formula `L_X = ι_X d + d ι_X`.
    pub fn lie_derivative(&self, alg: &LieAlgebra<S>, x: &[S]) -> Self {
        let a = self.d(alg).contract(x);
        if self.degree == 0 {
            return a;
        }
        a.add(&self.contract(x).d(alg))
    }

    /// Lie derivative from the definition on invariant forms:
    /// `(L_X α)(Y_1,…) = −Σ_i α(…,[X,Y_i],…)`.
    pub fn lie_derivative_direct(&self, alg: &LieAlgebra<S>, x: &[S]) -> Self {
        let ad = alg.ad(x).expect("vector length matches");
        self.derivation(&ad).neg()
    }

    /// Metric inner product `Σ α_I β_J det(g^{-1}[I,J])`.
    pub fn inner(&self, other: &Self, ginv: &Matrix<S>) -> Result<S> {
        if self.degree != other.degree || self.dim != other.dim {
            return Err(Error::DimensionMismatch("inner product of forms of different degree".into()));
        }
        let k = self.degree;
        let mut total = S::zero();
        for (a, x) in &self.coeffs {
            for (b, y) in &other.coeffs {
                let det = if k == 0 {
                    S::one()
                } else {
                    Matrix::from_fn(k, k, |p, q| ginv[(a[p], b[q])].clone()).det()
                };
                if !det.is_zero() {
                    total = total + x.clone() * y.clone() * det;
                }
            }
        }
        Ok(total)
    }

    pub fn norm_sq(&self, ginv: &Matrix<S>) -> S {
        self.inner(self, ginv).expect("same degree")
    }

    /// Hodge star relative to the volume form `vol_top · e^{1…dim}`, which must
    /// have unit length for `ginv`. Satisfies `α ∧ ⋆β = ⟨α,β⟩ vol`.
    pub fn hodge_star(&self, ginv: &Matrix<S>, vol_top: &S) -> Self {
        let n = self.dim;
        let mut out = Self::zero(n, n - self.degree);
        for idx in combinations(n, self.degree) {
            let basis = Self::basis(n, &idx);
            let ip = basis.inner(self, ginv).expect("same degree");
            if ip.is_zero() {
                continue;
            }
            let comp = complement(n, &idx);
            let mut full: Vec<usize> = idx.iter().chain(comp.iter()).copied().collect();
            let s = sort_with_sign(&mut full).expect("disjoint");
            let cur = out.coeffs.get(&comp).cloned().unwrap_or_else(S::zero);
            out.set(comp, cur + signed(s, ip * vol_top.clone()));
        }
        out
    }

    pub fn to_f64(&self) -> KForm<f64> {
        KForm {
            dim: self.dim,
            degree: self.degree,
            coeffs: self
                .coeffs
                .iter()
                .map(|(k, v)| (k.clone(), v.to_f64()))
                .filter(|(_, v)| *v != 0.0)
                .collect(),
        }
    }
}

/// `F^n / n!` for a nondegenerate 2-form on a `2n`-dimensional space.
pub fn volume_form<S: Scalar>(f: &KForm<S>) -> KForm<S> {
    let n = f.dim() / 2;
    let mut acc = KForm::scalar(f.dim(), S::one());
    let mut fact = S::one();
    for m in 1..=n {
        acc = acc.wedge(f).expect("same dimension");
        fact = fact * S::from_i64(m as i64);
    }
    acc.scale(&(S::one() / fact))
}

/// Orientation sign of `F^n/n!` relative to `e^{1…2n}`: `+1` or `−1` (0 if degenerate).
pub fn orientation<S: Scalar>(f: &KForm<S>) -> i32 {
    let t = volume_form(f).top_coeff();
    if t.is_positive() {
        1
    } else if t.is_negative() {
        -1
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    type Q = Rational;

    fn q(n: i64) -> Q {
        Q::from_i64(n)
    }

    fn a41() -> LieAlgebra<Q> {
        LieAlgebra::from_int_triples(4, &[(1, 3, 0, 1), (2, 3, 1, 1)]).unwrap()
    }

    fn a48() -> LieAlgebra<Q> {
        LieAlgebra::from_int_triples(4, &[(1, 2, 0, 1), (1, 3, 1, 1), (2, 3, 2, -1)]).unwrap()
    }

    fn e(idx: &[usize]) -> KForm<Q> {
        // 1-based labels as written in the examples
        let z: Vec<usize> = idx.iter().map(|i| i - 1).collect();
        KForm::basis(4, &z)
    }

    #[test]
    fn evaluation_convention() {
        let f = e(&[1, 3]);
        let e1 = vec![q(1), q(0), q(0), q(0)];
        let e3 = vec![q(0), q(0), q(1), q(0)];
        assert_eq!(f.eval(&[e1.clone(), e3.clone()]), q(1));
        assert_eq!(f.eval(&[e3, e1]), q(-1));
    }

    #[test]
    fn wedge_examples() {
        let f41 = e(&[1, 3]).add(&e(&[2, 4]));
        let theta = e(&[3]).neg();
        assert_eq!(theta.wedge(&f41).unwrap(), e(&[2, 3, 4]));
        let f48 = e(&[1, 4]).add(&e(&[2, 3]));
        let theta8 = e(&[4]).neg();
        assert_eq!(theta8.wedge(&f48).unwrap(), e(&[2, 3, 4]).neg());
        let a = KForm::one_form(&[q(1), q(-2), q(3), q(5)]);
        assert!(a.wedge(&a).unwrap().is_zero());
        // degrees beyond the dimension give zero
        assert!(e(&[1, 2, 3]).wedge(&e(&[1, 4])).unwrap().is_zero());
        let other: KForm<Q> = KForm::basis(6, &[0]);
        assert!(matches!(a.wedge(&other), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn contraction_examples() {
        let f41 = e(&[1, 3]).add(&e(&[2, 4]));
        let v = vec![q(-1), q(0), q(0), q(0)];
        assert_eq!(f41.contract(&v), e(&[3]).neg());
        let f48 = e(&[1, 4]).add(&e(&[2, 3]));
        assert_eq!(f48.contract(&v), e(&[4]).neg());
        let x = vec![q(1), q(2), q(0), q(-1)];
        assert!(f41.contract(&x).contract(&x).is_zero());
        let two = Q::from_i64(2);
        assert_eq!(f41.scale(&two).contract(&x), f41.contract(&x).scale(&two));
    }

    #[test]
    fn differential_examples() {
        let g = a41();
        let f41 = e(&[1, 3]).add(&e(&[2, 4]));
        assert_eq!(f41.d(&g), e(&[2, 3, 4]));
        assert_eq!(e(&[1]).d(&g), e(&[2, 4]).neg());
        let f48 = e(&[1, 4]).add(&e(&[2, 3]));
        assert_eq!(f48.d(&a48()), e(&[2, 3, 4]).neg());
        let ab = LieAlgebra::<Q>::abelian(4);
        assert!(f41.d(&ab).is_zero());
    }

    #[test]
    fn one_form_differential_is_minus_bracket() {
        let g = a48();
        let alpha = KForm::one_form(&[q(1), q(2), q(-1), q(3)]);
        let da = alpha.d(&g);
        for i in 0..4 {
            for j in 0..4 {
                let br = g.bracket_basis(i, j);
                let expected = -crate::linalg::dot(&alpha.as_vector(), &br);
                assert_eq!(da.coeff(&[i, j]), expected);
            }
        }
    }

    #[test]
    fn inner_products_and_star() {
        let id: Matrix<Q> = Matrix::identity(4);
        assert_eq!(e(&[1, 3]).inner(&e(&[1, 3]), &id).unwrap(), q(1));
        let f41 = e(&[1, 3]).add(&e(&[2, 4]));
        let vol = volume_form(&f41);
        assert_eq!(vol, e(&[1, 2, 3, 4]).neg());
        assert_eq!(orientation(&f41), -1);
        assert_eq!(f41.hodge_star(&id, &vol.top_coeff()), f41);
        assert_eq!(f41.norm_sq(&id), q(2));
        // dJθ = -e^{24}
        assert_eq!(e(&[2, 4]).neg().inner(&f41, &id).unwrap(), q(-1));
    }

    #[test]
    fn star_squares_to_sign() {
        let g: Matrix<Q> = Matrix::from_i64(&[&[2, 1, 0, 0], &[1, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]]);
        let ginv = g.inverse(&Default::default()).unwrap();
        // det g = 1 so ±e^{1234} has unit length
        let vol_top = q(1);
        for k in 0..=4usize {
            for idx in combinations(4, k) {
                let a: KForm<Q> = KForm::basis(4, &idx);
                let ss = a.hodge_star(&ginv, &vol_top).hodge_star(&ginv, &vol_top);
                let sign = if (k * (4 - k)) % 2 == 0 { q(1) } else { q(-1) };
                assert_eq!(ss, a.scale(&sign));
            }
        }
    }

    #[test]
    fn cartan_matches_direct() {
        let g = a48();
        let x = vec![q(1), q(-1), q(2), q(3)];
        let a = e(&[1, 4]).add(&e(&[2, 3]).scale(&q(3))).add(&e(&[1, 2]));
        assert_eq!(a.lie_derivative(&g, &x), a.lie_derivative_direct(&g, &x));
        let b = e(&[2, 3, 4]).add(&e(&[1, 2, 4]));
        assert_eq!(b.lie_derivative(&g, &x), b.lie_derivative_direct(&g, &x));
    }
}
