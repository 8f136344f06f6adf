//! Real Lie algebras given by structure constants in a fixed basis.

use crate::error::{Error, Result};
use crate::linalg::{unit, Matrix};
use crate::scalar::{max_abs, Scalar, Tolerance};

/// One structure constant: the coefficient of `e_k` in `[e_i, e_j]`, stored with `i < j`.
#[derive(Debug, Clone, PartialEq)]
pub struct Bracket<S> {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub value: S,
}

impl<S> Bracket<S> {
    pub fn new(i: usize, j: usize, k: usize, value: S) -> Self {
        Self { i, j, k, value }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LieAlgebraValidation<S> {
    pub antisymmetry_ok: bool,
    pub jacobi_residual: S,
    pub ok: bool,
}

/// Lie algebra with sparse structure constants and a dense cache `c[i][j][k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct LieAlgebra<S> {
    dim: usize,
    sparse: Vec<Bracket<S>>,
    dense: Vec<S>,
    pub basis_labels: Option<Vec<String>>,
}

impl<S: Scalar> LieAlgebra<S> {
    /// Builds the algebra from triples. Entries with `i > j` are folded onto `(j, i)`
    /// with a sign; `i == j` with a nonzero value breaks antisymmetry and is rejected.
    pub fn new(dim: usize, brackets: Vec<Bracket<S>>) -> Result<Self> {
        if dim < 2 {
            return Err(Error::DimensionMismatch(format!("dimension {} is below 2", dim)));
        }
        let mut dense = vec![S::zero(); dim * dim * dim];
        for b in &brackets {
            if b.i >= dim || b.j >= dim || b.k >= dim {
                return Err(Error::IndexOutOfRange { i: b.i, j: b.j, k: b.k, dim });
            }
            if b.i == b.j {
                if b.value.is_zero() {
                    continue;
                }
                return Err(Error::NotAntisymmetric { i: b.i, k: b.k });
            }
            let (i, j, v) = if b.i < b.j {
                (b.i, b.j, b.value.clone())
            } else {
                (b.j, b.i, -b.value.clone())
            };
            let p = (i * dim + j) * dim + b.k;
            dense[p] = dense[p].clone() + v.clone();
            let q = (j * dim + i) * dim + b.k;
            dense[q] = dense[q].clone() - v;
        }
        let mut sparse = Vec::new();
        for i in 0..dim {
            for j in i + 1..dim {
                for k in 0..dim {
                    let v = &dense[(i * dim + j) * dim + k];
                    if !v.is_zero() {
                        sparse.push(Bracket::new(i, j, k, v.clone()));
                    }
                }
            }
        }
        Ok(Self { dim, sparse, dense, basis_labels: None })
    }

    pub fn abelian(dim: usize) -> Self {
        Self::new(dim, Vec::new()).expect("dim >= 2")
    }

    /// Builds from integer triples `(i, j, k, value)`, 0-based.
    pub fn from_int_triples(dim: usize, triples: &[(usize, usize, usize, i64)]) -> Result<Self> {
        Self::new(dim, triples.iter().map(|&(i, j, k, v)| Bracket::new(i, j, k, S::from_i64(v))).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn brackets(&self) -> &[Bracket<S>] {
        &self.sparse
    }

    /// Coefficient of `e_k` in `[e_i, e_j]`.
    pub fn c(&self, i: usize, j: usize, k: usize) -> &S {
        &self.dense[(i * self.dim + j) * self.dim + k]
    }

    pub fn is_abelian(&self) -> bool {
        self.sparse.is_empty()
    }

    pub fn bracket(&self, x: &[S], y: &[S]) -> Vec<S> {
        let d = self.dim;
        let mut out = vec![S::zero(); d];
        for b in &self.sparse {
            let w = x[b.i].clone() * y[b.j].clone() - x[b.j].clone() * y[b.i].clone();
            if w.is_zero() {
                continue;
            }
            out[b.k] = out[b.k].clone() + w * b.value.clone();
        }
        out
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> Vec<S> {
        (0..self.dim).map(|k| self.c(i, j, k).clone()).collect()
    }

    /// Matrix of `ad_x = [x, ·]`, columns are images of basis vectors.
    pub fn ad(&self, x: &[S]) -> Result<Matrix<S>> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} for algebra of dimension {}",
                x.len(),
                self.dim
            )));
        }
        let d = self.dim;
        let mut m: Matrix<S> = Matrix::zeros(d, d);
        for b in &self.sparse {
            // [x, e_j] picks up x_i c_{ij}^k and, from the antisymmetric partner, -x_j c_{ij}^k on column i
            if !x[b.i].is_zero() {
                m[(b.k, b.j)] = m[(b.k, b.j)].clone() + x[b.i].clone() * b.value.clone();
            }
            if !x[b.j].is_zero() {
                m[(b.k, b.i)] = m[(b.k, b.i)].clone() - x[b.j].clone() * b.value.clone();
            }
        }
        Ok(m)
    }

    pub fn ad_basis(&self, i: usize) -> Matrix<S> {
        self.ad(&unit(self.dim, i)).expect("basis vector has the right length")
    }

    /// Max-norm of `[[e_i,e_j],e_k] + [[e_j,e_k],e_i] + [[e_k,e_i],e_j]` over all triples.
    pub fn jacobi_residual(&self) -> S {
        let d = self.dim;
        let mut worst = S::zero();
        for i in 0..d {
            for j in i + 1..d {
                for k in j + 1..d {
                    let ek = unit(d, k);
                    let ei = unit(d, i);
                    let ej = unit(d, j);
                    let a = self.bracket(&self.bracket_basis(i, j), &ek);
                    let b = self.bracket(&self.bracket_basis(j, k), &ei);
                    let c = self.bracket(&self.bracket_basis(k, i), &ej);
                    let sum: Vec<S> = (0..d).map(|m| a[m].clone() + b[m].clone() + c[m].clone()).collect();
                    worst = S::max_of(worst, max_abs(sum.iter()));
                }
            }
        }
        worst
    }

    /// Traces of `ad(e_i)` for every basis vector.
    pub fn ad_traces(&self) -> Vec<S> {
        (0..self.dim).map(|i| self.ad_basis(i).trace()).collect()
    }

    pub fn is_unimodular(&self, tol: &Tolerance) -> bool {
        self.ad_traces().iter().all(|t| tol.negligible(t))
    }

    /// The same algebra written in the basis `f_a = Σ_i P[i][a] e_i`.
    pub fn change_basis(&self, p: &Matrix<S>, tol: &Tolerance) -> Result<Self> {
        let d = self.dim;
        if p.rows() != d || !p.is_square() {
            return Err(Error::DimensionMismatch("basis change must be a square matrix".into()));
        }
        let pinv = p.inverse(tol).ok_or_else(|| Error::Degenerate("basis change is singular".into()))?;
        let mut brackets = Vec::new();
        for a in 0..d {
            for b in a + 1..d {
                let br = self.bracket(&p.col(a), &p.col(b));
                let coords = pinv.mul_vec(&br);
                for (k, v) in coords.into_iter().enumerate() {
                    if !v.is_zero() {
                        brackets.push(Bracket::new(a, b, k, v));
                    }
                }
            }
        }
        Self::new(d, brackets)
    }

    pub fn to_f64(&self) -> LieAlgebra<f64> {
        LieAlgebra {
            dim: self.dim,
            sparse: self.sparse.iter().map(|b| Bracket::new(b.i, b.j, b.k, b.value.to_f64())).collect(),
            dense: self.dense.iter().map(|v| v.to_f64()).collect(),
            basis_labels: self.basis_labels.clone(),
        }
    }
}

/// Checks raw constants: antisymmetry of the supplied table and the Jacobi identity.
///
/// Unlike [`LieAlgebra::new`], entries may be given with any index order; a
/// table containing both `(i,j,k)` and `(j,i,k)` must have opposite values.
pub fn validate_lie_algebra<S: Scalar>(
    dim: usize,
    constants: &[Bracket<S>],
    tol: &Tolerance,
) -> Result<LieAlgebraValidation<S>> {
    if dim < 2 {
        return Err(Error::DimensionMismatch(format!("dimension {} is below 2", dim)));
    }
    let mut table: Vec<Option<S>> = vec![None; dim * dim * dim];
    let mut antisymmetry_ok = true;
    for b in constants {
        if b.i >= dim || b.j >= dim || b.k >= dim {
            return Err(Error::IndexOutOfRange { i: b.i, j: b.j, k: b.k, dim });
        }
        if b.i == b.j && !b.value.is_zero() {
            antisymmetry_ok = false;
        }
        let p = (b.i * dim + b.j) * dim + b.k;
        table[p] = Some(match table[p].take() {
            Some(v) => v + b.value.clone(),
            None => b.value.clone(),
        });
    }
    for i in 0..dim {
        for j in i + 1..dim {
            for k in 0..dim {
                if let (Some(a), Some(b)) = (&table[(i * dim + j) * dim + k], &table[(j * dim + i) * dim + k]) {
                    if !(a.clone() + b.clone()).is_zero() {
                        antisymmetry_ok = false;
                    }
                }
            }
        }
    }
    // keep one representative per unordered pair for the Jacobi check
    let folded: Vec<Bracket<S>> = constants
        .iter()
        .filter(|b| b.i != b.j)
        .filter(|b| b.i < b.j || table[(b.j * dim + b.i) * dim + b.k].is_none())
        .cloned()
        .collect();
    let alg = LieAlgebra::new(dim, folded)?;
    let jacobi_residual = alg.jacobi_residual();
    let ok = antisymmetry_ok && tol.negligible(&jacobi_residual);
    Ok(LieAlgebraValidation { antisymmetry_ok, jacobi_residual, ok })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    type Q = Rational;

    fn qv(v: &[i64]) -> Vec<Q> {
        v.iter().map(|&x| Q::from_i64(x)).collect()
    }

    fn a41() -> LieAlgebra<Q> {
        // [e2,e4]=e1, [e3,e4]=e2 in 1-based labels
        LieAlgebra::from_int_triples(4, &[(1, 3, 0, 1), (2, 3, 1, 1)]).unwrap()
    }

    fn a48() -> LieAlgebra<Q> {
        LieAlgebra::from_int_triples(4, &[(1, 2, 0, 1), (1, 3, 1, 1), (2, 3, 2, -1)]).unwrap()
    }

    #[test]
    fn validation_examples() {
        let tol = Tolerance::default();
        let ok = validate_lie_algebra(4, a41().brackets(), &tol).unwrap();
        assert!(ok.ok && ok.antisymmetry_ok);
        assert_eq!(ok.jacobi_residual, Q::from_i64(0));

        let abelian = validate_lie_algebra::<Q>(4, &[], &tol).unwrap();
        assert!(abelian.ok);

        // [e1,e2]=e3, [e2,e3]=e1, [e3,e1]=e1
        let bad = vec![
            Bracket::new(0, 1, 2, Q::from_i64(1)),
            Bracket::new(1, 2, 0, Q::from_i64(1)),
            Bracket::new(2, 0, 0, Q::from_i64(1)),
        ];
        let r = validate_lie_algebra(3, &bad, &tol).unwrap();
        assert!(!r.ok);
        assert!(r.antisymmetry_ok);
        // [[e1,e2],e3] + [[e2,e3],e1] + [[e3,e1],e2] = 0 + 0 + [e1,e2] = e3
        assert_eq!(r.jacobi_residual, Q::from_i64(1));

        let oob = vec![Bracket::new(0, 5, 1, Q::from_i64(1))];
        assert!(matches!(validate_lie_algebra(4, &oob, &tol), Err(Error::IndexOutOfRange { .. })));

        let asym = vec![Bracket::new(0, 1, 2, Q::from_i64(1)), Bracket::new(1, 0, 2, Q::from_i64(1))];
        assert!(!validate_lie_algebra(3, &asym, &tol).unwrap().antisymmetry_ok);
    }

    #[test]
    fn ad_examples() {
        let g = a41();
        let m = g.ad(&qv(&[0, 0, 0, 1])).unwrap();
        // e2 -> -e1, e3 -> -e2
        assert_eq!(m.col(1), qv(&[-1, 0, 0, 0]));
        assert_eq!(m.col(2), qv(&[0, -1, 0, 0]));
        assert_eq!(m.col(0), qv(&[0, 0, 0, 0]));
        assert!(LieAlgebra::<Q>::abelian(4).ad(&qv(&[1, 2, 3, 4])).unwrap().is_zero());

        let m8 = a48().ad(&qv(&[0, 0, 0, 1])).unwrap();
        assert_eq!(m8.col(1), qv(&[0, -1, 0, 0]));
        assert_eq!(m8.col(2), qv(&[0, 0, 1, 0]));
        assert_eq!(m8.col(0), qv(&[0, 0, 0, 0]));

        assert!(matches!(g.ad(&qv(&[1, 2])), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn ad_reproduces_bracket() {
        let g = a48();
        let x = qv(&[1, -2, 3, 5]);
        let y = qv(&[2, 1, -1, 4]);
        assert_eq!(g.ad(&x).unwrap().mul_vec(&y), g.bracket(&x, &y));
    }

    #[test]
    fn unimodularity() {
        let tol = Tolerance::default();
        assert!(a41().is_unimodular(&tol));
        assert!(a48().is_unimodular(&tol));
        let b = LieAlgebra::<Q>::from_int_triples(2, &[(0, 1, 1, 1)]).unwrap();
        assert!(!b.is_unimodular(&tol));
        assert_eq!(b.ad_traces()[0], Q::from_i64(1));
    }

    #[test]
    fn change_of_basis_keeps_unimodularity() {
        let tol = Tolerance::default();
        let p: Matrix<Q> = Matrix::from_i64(&[&[1, 2, 0, 0], &[0, 1, 0, 3], &[1, 0, 1, 0], &[0, 0, 1, 1]]);
        let h = a48().change_basis(&p, &tol).unwrap();
        assert!(h.is_unimodular(&tol));
        assert_eq!(h.jacobi_residual(), Q::from_i64(0));
        let b = LieAlgebra::<Q>::from_int_triples(2, &[(0, 1, 1, 1)]).unwrap();
        let p2: Matrix<Q> = Matrix::from_i64(&[&[2, 1], &[1, 1]]);
        assert!(!b.change_basis(&p2, &tol).unwrap().is_unimodular(&tol));
    }
}
