//! Search for a left-invariant symplectic form compatible with `J`.
//!
//! Candidates are the J-invariant 2-forms ω with dω^{n−1} = 0. For n ≤ 2 that
//! condition is linear (dω = 0). For n ≥ 3 only the closed slice dω = 0 is
//! searched, which is a subset; the report says which slice was used.
//!
//! ω is compatible when S(ω) = ω(·, J·) is positive definite. The search
//! maximises λ_min of S(ω) in g-orthonormal coordinates over the subspace,
//! normalised by tr = 1, with projected supergradient ascent from seeded
//! restarts. Infeasibility is certified exactly when possible by a dual
//! matrix Z ⪰ 0, Z ≠ 0 with tr(Z S(ω)) = 0 for every candidate ω: then
//! tr(Z S) > 0 is impossible, so no S(ω) is positive definite.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::forms::{combinations, KForm};
use crate::hermitian::AlmostHermitian;
use crate::linalg::Matrix;
use crate::scalar::Scalar;

pub const RESTARTS: usize = 64;
const ITERATIONS: usize = 400;
const SEARCH_SEED: u64 = 0x5eed;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Feasible,
    Infeasible,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Feasible => "feasible",
            Verdict::Infeasible => "infeasible",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

/// Which linear space of candidate forms was searched.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Slice {
    /// n ≤ 2: dω^{n−1} = 0 is exactly dω = 0 (or empty).
    Exact,
    /// n ≥ 3: closed forms only, a subset of {dω^{n−1} = 0}.
    Closed,
}

impl Slice {
    pub fn as_str(&self) -> &'static str {
        match self {
            Slice::Exact => "J-invariant 2-forms with d(omega^(n-1)) = 0",
            Slice::Closed => "closed J-invariant 2-forms (subset of d(omega^(n-1)) = 0)",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalisation {
    /// tr S̃ = 1.
    Trace,
    /// ‖S̃‖_F = 1, used when the trace vanishes on the whole subspace.
    Sphere,
    /// Empty subspace.
    None,
}

#[derive(Debug, Clone)]
pub struct FeasibilityReport<S> {
    pub verdict: Verdict,
    pub slice: Slice,
    pub basis: Vec<KForm<S>>,
    pub witness: Option<KForm<S>>,
    /// λ_min of the witness in g-orthonormal coordinates.
    pub witness_min_eigenvalue: Option<f64>,
    /// Z with Z ⪰ 0, Z ≠ 0 and tr(Z S(ω)) = 0 on the subspace.
    pub certificate: Option<Matrix<S>>,
    /// Best λ_min found by the ascent, under [`Normalisation`].
    pub optimum: Option<f64>,
    /// Set when the optimum is known exactly: a certificate bounds it by 0 and
    /// a rounded candidate with S(ω) ⪰ 0 attains 0.
    pub exact_optimum: Option<S>,
    pub normalisation: Normalisation,
    pub restarts: usize,
}

/// `S(ω)[i][j] = ω(e_i, J e_j)`, i.e. `W J` for the matrix `W` of ω.
pub fn pairing<S: Scalar>(s: &AlmostHermitian<S>, omega: &KForm<S>) -> Matrix<S> {
    omega.as_matrix().mul(s.j())
}

/// Basis of the candidate subspace.
pub fn candidate_forms<S: Scalar>(s: &AlmostHermitian<S>) -> (Vec<KForm<S>>, Slice) {
    let d = s.dim();
    let pairs = combinations(d, 2);
    let j = s.j();
    let cols: Vec<Vec<S>> = pairs
        .iter()
        .map(|p| {
            let w = KForm::basis(d, p);
            let wm = w.as_matrix();
            let inv = KForm::from_antisymmetric(&j.transpose().mul(&wm).mul(j).sub(&wm));
            let mut col = inv.dense();
            col.extend(w.d(s.alg()).dense());
            col
        })
        .collect();
    let m = Matrix::from_fn(cols[0].len(), pairs.len(), |r, c| cols[c][r].clone());
    let basis = m.nullspace(&s.tol).into_iter().map(|v| KForm::from_dense(d, 2, &v)).collect();
    let slice = if s.n() <= 2 { Slice::Exact } else { Slice::Closed };
    (basis, slice)
}

/// `d(ω^{n−1})`, max-norm.
pub fn power_closedness<S: Scalar>(s: &AlmostHermitian<S>, omega: &KForm<S>) -> S {
    let mut p = KForm::scalar(s.dim(), S::one());
    for _ in 1..s.n() {
        p = p.wedge(omega).expect("same dimension");
    }
    p.d(s.alg()).max_abs()
}

fn to_na<S: Scalar>(m: &Matrix<S>) -> DMatrix<f64> {
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| m[(i, j)].to_f64())
}

/// `L⁻¹ M L⁻ᵀ` with `g = L Lᵀ`: the pairing in a g-orthonormal frame.
fn normalise(m: &DMatrix<f64>, linv: &DMatrix<f64>) -> DMatrix<f64> {
    let x = linv * m * linv.transpose();
    (&x + x.transpose()) * 0.5
}

fn min_eigen(m: &DMatrix<f64>) -> (f64, DVector<f64>) {
    let e = SymmetricEigen::new(m.clone());
    let mut k = 0;
    for i in 1..e.eigenvalues.len() {
        if e.eigenvalues[i] < e.eigenvalues[k] {
            k = i;
        }
    }
    (e.eigenvalues[k], e.eigenvectors.column(k).into_owned())
}

struct Ascent {
    /// Frobenius-orthonormal pairings `B_k`.
    b: Vec<DMatrix<f64>>,
    /// `c_w = to_w · c_b`.
    to_w: DMatrix<f64>,
    trace: DVector<f64>,
    mode: Normalisation,
}

impl Ascent {
    fn new(pairings: &[DMatrix<f64>]) -> Option<Self> {
        let m = pairings.len();
        let gram = DMatrix::from_fn(m, m, |a, b| pairings[a].dot(&pairings[b]));
        let r = gram.cholesky()?.l();
        let to_w = r.transpose().try_inverse()?;
        let b: Vec<DMatrix<f64>> = (0..m)
            .map(|k| {
                let mut acc = DMatrix::zeros(pairings[0].nrows(), pairings[0].ncols());
                for j in 0..m {
                    acc += &pairings[j] * to_w[(j, k)];
                }
                acc
            })
            .collect();
        let trace = DVector::from_iterator(m, b.iter().map(|x| x.trace()));
        let mode = if trace.norm() > 1e-10 { Normalisation::Trace } else { Normalisation::Sphere };
        Some(Self { b, to_w, trace, mode })
    }

    fn combine(&self, c: &DVector<f64>) -> DMatrix<f64> {
        let mut acc = DMatrix::zeros(self.b[0].nrows(), self.b[0].ncols());
        for (k, bk) in self.b.iter().enumerate() {
            acc += bk * c[k];
        }
        acc
    }

    fn project(&self, c: &DVector<f64>, g: &DVector<f64>) -> DVector<f64> {
        match self.mode {
            Normalisation::Trace => g - &self.trace * (self.trace.dot(g) / self.trace.norm_squared()),
            _ => g - c * c.dot(g),
        }
    }

    fn run(&self, seed: u64) -> (f64, DVector<f64>) {
        let m = self.b.len();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = DVector::from_fn(m, |_, _| rng.random_range(-1.0..1.0));
        let (mut c, step0) = match self.mode {
            Normalisation::Trace => {
                let base = &self.trace / self.trace.norm_squared();
                let scale = 1.0 / self.trace.norm();
                (&base + self.project(&base, &r) * scale, scale)
            }
            _ => (r.normalize(), 1.0),
        };
        let mut best = (f64::NEG_INFINITY, c.clone());
        for it in 0..ITERATIONS {
            let (lambda, q) = min_eigen(&self.combine(&c));
            if lambda > best.0 {
                best = (lambda, c.clone());
            }
            let grad = DVector::from_iterator(m, self.b.iter().map(|bk| q.dot(&(bk * &q))));
            let p = self.project(&c, &grad);
            let norm = p.norm();
            if norm < 1e-14 {
                break;
            }
            c += p * (0.5 * step0 / ((it + 1) as f64).sqrt() / norm);
            if self.mode == Normalisation::Sphere {
                c = c.normalize();
            }
        }
        best
    }
}

/// Rounds `v / max|v|` to multiples of `1/q` for growing `q`.
fn roundings<S: Scalar>(v: &[f64]) -> Vec<Vec<S>> {
    let top = v.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    if top == 0.0 || !top.is_finite() {
        return Vec::new();
    }
    let mut dens: Vec<i64> = (1..=12).collect();
    dens.extend((4..=20).map(|k| 1i64 << k));
    dens.iter()
        .map(|&q| v.iter().map(|x| S::from_ratio((x / top * q as f64).round() as i64, q)).collect())
        .collect()
}

fn combine_forms<S: Scalar>(basis: &[KForm<S>], c: &[S]) -> KForm<S> {
    let mut acc = KForm::zero(basis[0].dim(), 2);
    for (w, x) in basis.iter().zip(c) {
        acc = acc.add(&w.scale(x));
    }
    acc
}

fn is_certificate<S: Scalar>(s: &AlmostHermitian<S>, z: &Matrix<S>, pairings: &[Matrix<S>]) -> bool {
    !z.max_abs().is_zero()
        && z.is_symmetric()
        && z.is_positive_semidefinite(&s.tol)
        && pairings.iter().all(|p| s.tol.negligible(&z.mul(p).trace()))
}

fn outer<S: Scalar>(z: &[S]) -> Matrix<S> {
    Matrix::from_fn(z.len(), z.len(), |i, j| z[i].clone() * z[j].clone())
}

fn find_certificate<S: Scalar>(
    s: &AlmostHermitian<S>,
    pairings: &[Matrix<S>],
    kernel: &[Vec<S>],
    eigvecs: &[Vec<f64>],
) -> Option<Matrix<S>> {
    let d = s.dim();
    let mut cands: Vec<Matrix<S>> = vec![s.ginv().clone()];
    if !kernel.is_empty() {
        let p = Matrix::from_rows(kernel.to_vec());
        cands.push(p.transpose().mul(&p));
    }
    cands.extend(kernel.iter().map(|z| outer(z)));
    for v in eigvecs {
        cands.extend(roundings::<S>(v).iter().map(|z| outer(z)));
    }
    for i in 0..d {
        let ei: Vec<S> = crate::linalg::unit(d, i);
        cands.push(outer(&ei));
        for k in i + 1..d {
            for sign in [1, -1] {
                let mut z = ei.clone();
                z[k] = S::from_i64(sign);
                cands.push(outer(&z));
            }
        }
    }
    cands.into_iter().find(|z| is_certificate(s, z, pairings))
}

/// Decides whether a compatible invariant form exists on the candidate subspace.
pub fn symplectic_feasibility<S: Scalar>(s: &AlmostHermitian<S>) -> FeasibilityReport<S> {
    let (basis, slice) = candidate_forms(s);
    let mut rep = FeasibilityReport {
        verdict: Verdict::Inconclusive,
        slice,
        basis: basis.clone(),
        witness: None,
        witness_min_eigenvalue: None,
        certificate: None,
        optimum: None,
        exact_optimum: None,
        normalisation: Normalisation::None,
        restarts: 0,
    };
    if basis.is_empty() {
        rep.verdict = Verdict::Infeasible;
        rep.certificate = Some(Matrix::identity(s.dim()));
        return rep;
    }
    let g = to_na(s.g());
    let linv = match g.cholesky().and_then(|c| c.l().try_inverse()) {
        Some(l) => l,
        None => return rep,
    };
    let min_eig = |m: &Matrix<S>| min_eigen(&normalise(&to_na(m), &linv)).0;
    let accept = |w: &KForm<S>| {
        let p = pairing(s, w);
        p.is_symmetric() && p.is_positive_definite(&s.tol) && s.tol.negligible(&power_closedness(s, w))
    };

    // F itself is the expected witness on Kähler structures
    if accept(s.f()) {
        rep.verdict = Verdict::Feasible;
        rep.witness_min_eigenvalue = Some(min_eig(&pairing(s, s.f())));
        rep.witness = Some(s.f().clone());
        return rep;
    }

    let pairings: Vec<Matrix<S>> = basis.iter().map(|w| pairing(s, w)).collect();
    let normalised: Vec<DMatrix<f64>> = pairings.iter().map(|p| normalise(&to_na(p), &linv)).collect();
    let ascent = match Ascent::new(&normalised) {
        Some(a) => a,
        None => return rep,
    };
    rep.normalisation = ascent.mode;
    rep.restarts = RESTARTS;
    let runs: Vec<(f64, DVector<f64>)> =
        (0..RESTARTS as u64).into_par_iter().map(|r| ascent.run(SEARCH_SEED.wrapping_add(r))).collect();
    let (optimum, best) = runs
        .into_iter()
        .fold((f64::NEG_INFINITY, None), |acc, (v, c)| if v > acc.0 { (v, Some(c)) } else { acc });
    let best = best.expect("at least one restart");
    rep.optimum = Some(optimum);
    let cw = &ascent.to_w * &best;

    // exact candidates near the float optimum
    let mut psd_attainer: Option<Matrix<S>> = None;
    for c in roundings::<S>(cw.as_slice()) {
        let w = combine_forms(&basis, &c);
        if w.is_zero() {
            continue;
        }
        if accept(&w) {
            rep.verdict = Verdict::Feasible;
            rep.witness_min_eigenvalue = Some(min_eig(&pairing(s, &w)));
            rep.witness = Some(w);
            return rep;
        }
        let p = pairing(s, &w);
        if psd_attainer.is_none() && p.is_symmetric() && p.is_positive_semidefinite(&s.tol) {
            psd_attainer = Some(p);
        }
    }

    let kernel = psd_attainer.as_ref().map(|p| p.nullspace(&s.tol)).unwrap_or_default();
    let bopt = ascent.combine(&best);
    let e = SymmetricEigen::new(bopt);
    let lo = e.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
    let eigvecs: Vec<Vec<f64>> = (0..e.eigenvalues.len())
        .filter(|&k| e.eigenvalues[k] <= lo + 1e-3)
        .map(|k| (linv.transpose() * e.eigenvectors.column(k)).iter().cloned().collect())
        .collect();
    if let Some(z) = find_certificate(s, &pairings, &kernel, &eigvecs) {
        rep.verdict = Verdict::Infeasible;
        rep.certificate = Some(z);
        if psd_attainer.is_some() && ascent.mode == Normalisation::Trace {
            rep.exact_optimum = Some(S::zero());
        }
        return rep;
    }
    let tau = s.tol.tau;
    rep.verdict = if optimum <= -tau { Verdict::Infeasible } else { Verdict::Inconclusive };
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermitian::tests::{a41, a48, abelian};

    #[test]
    fn abelian_witness_is_f() {
        let s = abelian();
        let r = symplectic_feasibility(&s);
        assert_eq!(r.verdict, Verdict::Feasible);
        assert_eq!(r.witness.as_ref(), Some(s.f()));
        assert!(r.witness_min_eigenvalue.unwrap() > 0.0);
        // every J-invariant 2-form is closed on the abelian algebra
        assert_eq!(r.basis.len(), 4);
    }

    #[test]
    fn catalog_examples_are_certified_infeasible() {
        for s in [a41(), a48()] {
            let r = symplectic_feasibility(&s);
            assert_eq!(r.verdict, Verdict::Infeasible);
            let z = r.certificate.clone().unwrap();
            assert!(z.is_positive_semidefinite(&s.tol) && !z.is_zero());
            for w in &r.basis {
                assert!(z.mul(&pairing(&s, w)).trace().is_zero());
                assert!(w.d(s.alg()).is_zero());
            }
            // the supremum 0 is attained by a degenerate form
            assert_eq!(r.exact_optimum, Some(Scalar::zero()));
            assert!(r.optimum.unwrap().abs() < 1e-2);
        }
    }

    #[test]
    fn candidate_dimensions() {
        assert_eq!(candidate_forms(&a41()).0.len(), 2);
        assert_eq!(candidate_forms(&a48()).0.len(), 1);
    }

    #[test]
    fn search_finds_a_witness_when_f_is_not_closed() {
        use crate::algebra::LieAlgebra;
        use crate::hermitian::tests::j_from_pairs;
        use crate::scalar::Tolerance;
        // aff(R) ⊕ R² with a J-invariant metric whose F is not closed
        let alg = LieAlgebra::from_int_triples(4, &[(0, 1, 1, 1)]).unwrap();
        let g = Matrix::from_i64(&[&[2, 0, 1, 0], &[0, 2, 0, 1], &[1, 0, 2, 0], &[0, 1, 0, 2]]);
        let s = AlmostHermitian::new(alg, j_from_pairs(4, &[(0, 1), (2, 3)]), g, Tolerance::default()).unwrap();
        assert!(!s.f().d(s.alg()).is_zero());
        let r = symplectic_feasibility(&s);
        assert_eq!(r.verdict, Verdict::Feasible);
        let w = r.witness.unwrap();
        assert!(w.d(s.alg()).is_zero());
        assert!(pairing(&s, &w).is_positive_definite(&s.tol));
        assert!(r.witness_min_eigenvalue.unwrap() > 0.0);
    }

    #[test]
    fn float_mode_agrees() {
        let r = symplectic_feasibility(&a41().to_f64());
        assert_eq!(r.verdict, Verdict::Infeasible);
        let r = symplectic_feasibility(&abelian().to_f64());
        assert_eq!(r.verdict, Verdict::Feasible);
    }
}
