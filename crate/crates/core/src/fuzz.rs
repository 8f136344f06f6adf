//! Deterministic random structures and the checks run on each of them.
//!
//! Every sample has its own ChaCha8 stream seeded from `(seed, index)`, so a
//! batch gives the same summary whatever the thread count.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{Bracket, LieAlgebra};
use crate::almost_abelian::{build_almost_abelian, lee_form_aa, pluricanonical_conditions_aa, AlmostAbelianParams};
use crate::catalog::j_from_pairs;
use crate::conditions::{classify_metric, residual_scale, verify_equivalences};
use crate::hermitian::AlmostHermitian;
use crate::identities::{battery, Hypotheses, LeeTensors};
use crate::linalg::{unit, vec_sub, Matrix};
use crate::scalar::{max_abs, Rational, Scalar, Tolerance};

/// Relative residual accepted for pointwise identities in float mode.
pub const IDENTITY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    AlmostAbelian4d,
    RandomUnimodular,
    RandomHermitian,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::AlmostAbelian4d, Family::RandomUnimodular, Family::RandomHermitian];

    pub fn as_str(&self) -> &'static str {
        match self {
            Family::AlmostAbelian4d => "almost_abelian_4d",
            Family::RandomUnimodular => "random_unimodular",
            Family::RandomHermitian => "random_hermitian",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Family::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| format!("unknown family `{}` (expected almost_abelian_4d, random_unimodular or random_hermitian)", s))
    }
}

/// splitmix64 finalizer.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn sample_seed(seed: u64, index: usize) -> u64 {
    mix(mix(seed) ^ index as u64)
}

#[derive(Debug, Clone)]
pub struct Sample {
    pub index: usize,
    pub seed: u64,
    pub structure: AlmostHermitian<f64>,
    /// Set for almost abelian samples in normal form.
    pub params: Option<AlmostAbelianParams<f64>>,
}

fn small_int(rng: &mut ChaCha8Rng, r: i64) -> i64 {
    rng.random_range(-r..=r)
}

fn rational(rng: &mut ChaCha8Rng) -> Rational {
    let den = rng.random_range(1..=2);
    Rational::from_ratio(small_int(rng, 3), den)
}

/// Almost abelian data in dimension 4, drawn from four sub-families so that
/// pluricanonical, orthogonal and generic samples all occur.
pub fn random_aa_params(rng: &mut ChaCha8Rng) -> AlmostAbelianParams<Rational> {
    let r = |rng: &mut ChaCha8Rng| Rational::from_i64(small_int(rng, 2));
    let q = |rng: &mut ChaCha8Rng| rational(rng);
    let zero = Rational::zero();
    loop {
        let kind = rng.random_range(0..4);
        let b = vec![r(rng), r(rng)];
        let v = vec![r(rng), r(rng)];
        let (a, b, am) = match kind {
            // a = 0, A = 0: pluricanonical whenever v ≠ 0
            0 => (zero.clone(), b, Matrix::zeros(2, 2)),
            // unimodular with Im N ⟂ T, JT: a b = −Aᵀv
            1 => {
                let am = Matrix::from_fn(2, 2, |_, _| q(rng));
                let a = -am.trace();
                if a.is_zero() {
                    continue;
                }
                let atv = am.transpose().mul_vec(&v);
                let b = atv.iter().map(|x| -x.clone() / a.clone()).collect();
                (a, b, am)
            }
            // A = v wᵀ, a = −w·v: unimodular with dθ = 0
            2 => {
                let w = [r(rng), r(rng)];
                let am = Matrix::from_fn(2, 2, |i, j| v[i].clone() * w[j].clone());
                (-am.trace(), b, am)
            }
            _ => (q(rng), b, Matrix::from_fn(2, 2, |_, _| q(rng))),
        };
        return AlmostAbelianParams::new(2, a, b, v, am).expect("sizes");
    }
}

/// Sparse integer structure constants, optionally with traces projected to
/// zero, kept only if the Jacobi identity holds exactly.
fn sparse_algebra(rng: &mut ChaCha8Rng, dim: usize, unimodular: bool) -> Option<LieAlgebra<Rational>> {
    let nb = rng.random_range(1..=dim);
    let mut c: BTreeMap<(usize, usize, usize), i64> = BTreeMap::new();
    for _ in 0..nb {
        let i = rng.random_range(0..dim);
        let mut j = rng.random_range(0..dim - 1);
        if j >= i {
            j += 1;
        }
        let k = rng.random_range(0..dim);
        let v = small_int(rng, 2);
        let (i, j, v) = if i < j { (i, j, v) } else { (j, i, -v) };
        *c.entry((i, j, k)).or_insert(0) += v;
    }
    if unimodular {
        for i in 0..dim {
            // tr ad_{e_i} = Σ_j c_{ij}^j
            let tr: i64 = (0..dim)
                .filter(|&j| j != i)
                .map(|j| if i < j { c.get(&(i, j, j)).copied().unwrap_or(0) } else { -c.get(&(j, i, j)).copied().unwrap_or(0) })
                .sum();
            if tr != 0 {
                let mut j = rng.random_range(0..dim - 1);
                if j >= i {
                    j += 1;
                }
                if i < j {
                    *c.entry((i, j, j)).or_insert(0) -= tr;
                } else {
                    *c.entry((j, i, j)).or_insert(0) += tr;
                }
            }
        }
    }
    let brackets = c.into_iter().filter(|&(_, v)| v != 0).map(|((i, j, k), v)| Bracket::new(i, j, k, Rational::from_i64(v)));
    let alg = LieAlgebra::new(dim, brackets.collect()).ok()?;
    if alg.is_abelian() || !alg.jacobi_residual().is_zero() {
        return None;
    }
    Some(alg)
}

/// Random well-conditioned basis change, standard J, random J-invariant metric.
fn dress(rng: &mut ChaCha8Rng, alg: &LieAlgebra<Rational>) -> Option<AlmostHermitian<f64>> {
    let d = alg.dim();
    let tol = Tolerance::default();
    let p = Matrix::from_fn(d, d, |i, k| if i == k { 2.0 } else { 0.0 } + rng.random_range(-0.7..0.7));
    let alg = alg.to_f64().change_basis(&p, &tol).ok()?;
    let pairs: Vec<(usize, usize)> = (0..d / 2).map(|i| (2 * i, 2 * i + 1)).collect();
    let j: Matrix<f64> = j_from_pairs(d, &pairs);
    let b = Matrix::from_fn(d, d, |_, _| rng.random_range(-0.5..0.5));
    let g0 = b.transpose().mul(&b).add(&Matrix::identity(d));
    let g = g0.add(&j.transpose().mul(&g0).mul(&j)).scale(&0.5);
    AlmostHermitian::new(alg, j, g, tol).ok()
}

fn aa_sample(rng: &mut ChaCha8Rng) -> (AlmostHermitian<f64>, AlmostAbelianParams<f64>) {
    let p = random_aa_params(rng);
    let pf = AlmostAbelianParams::new(
        2,
        p.a.to_f64(),
        p.b.iter().map(Scalar::to_f64).collect(),
        p.v.iter().map(Scalar::to_f64).collect(),
        Matrix::from_fn(2, 2, |i, j| p.a_matrix[(i, j)].to_f64()),
    )
    .expect("sizes");
    (build_almost_abelian(&pf, Tolerance::default()).expect("almost abelian data is always valid"), pf)
}

/// Almost abelian algebra of dimension `dim` with random rational data, as an
/// abstract algebra to be dressed.
fn aa_algebra(rng: &mut ChaCha8Rng, dim: usize, unimodular: bool) -> LieAlgebra<Rational> {
    let n = dim / 2;
    let m = dim - 2;
    let b = (0..m).map(|_| rational(rng)).collect();
    let v = (0..m).map(|_| rational(rng)).collect();
    let am = Matrix::from_fn(m, m, |_, _| if rng.random_bool(0.5) { rational(rng) } else { Rational::zero() });
    let a = if unimodular { -am.trace() } else { rational(rng) };
    let p = AlmostAbelianParams::new(n, a, b, v, am).expect("sizes");
    crate::almost_abelian::build_algebra(&p).expect("valid")
}

pub fn generate(family: Family, seed: u64, index: usize, dims: &[usize]) -> Sample {
    let sseed = sample_seed(seed, index);
    let mut rng = ChaCha8Rng::seed_from_u64(sseed);
    let (structure, params) = match family {
        Family::AlmostAbelian4d => {
            let (s, p) = aa_sample(&mut rng);
            (s, Some(p))
        }
        Family::RandomUnimodular | Family::RandomHermitian => {
            let unimodular = family == Family::RandomUnimodular;
            let dim = dims[rng.random_range(0..dims.len())];
            let s = loop {
                let alg = if rng.random_bool(0.5) {
                    (0..200).find_map(|_| sparse_algebra(&mut rng, dim, unimodular))
                } else {
                    None
                };
                let alg = alg.unwrap_or_else(|| aa_algebra(&mut rng, dim, unimodular));
                if let Some(s) = dress(&mut rng, &alg) {
                    break s;
                }
            };
            (s, None)
        }
    };
    Sample { index, seed: sseed, structure, params }
}

/// One failed check, with enough data to rebuild the sample.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Failure {
    pub sample: usize,
    pub sample_seed: u64,
    pub check: String,
    pub residual: String,
    pub dim: usize,
    /// `[e_i,e_j] = c e_k` entries, 1-based.
    pub structure_constants: Vec<String>,
    pub j: Vec<Vec<String>>,
    pub g: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CheckCount {
    pub applicable: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FuzzSummary {
    pub family: String,
    pub seed: u64,
    pub samples: usize,
    pub checks: BTreeMap<String, CheckCount>,
    pub identity_failures: Vec<Failure>,
}

impl FuzzSummary {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("summary serializes")
    }

    pub fn count(&self, check: &str) -> CheckCount {
        self.checks.get(check).cloned().unwrap_or_default()
    }

    pub fn failures_of(&self, check: &str) -> Vec<&Failure> {
        self.identity_failures.iter().filter(|f| f.check == check).collect()
    }
}

/// Outcome of one named check on one sample.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub name: String,
    pub applicable: bool,
    pub passed: bool,
    pub residual: f64,
}

fn outcome(name: &str, applicable: bool, passed: bool, residual: f64) -> Outcome {
    Outcome { name: name.to_string(), applicable, passed, residual }
}

/// Every check on one sample: the identity battery (relative residual at most
/// [`IDENTITY_TOL`]), codifferentials of 1-forms on unimodular samples, the
/// equivalences, the report implications and, for almost abelian data, the
/// closed-form Lee form and condition systems.
pub fn check_sample(sample: &Sample) -> Vec<Outcome> {
    let s = &sample.structure;
    let d = s.dim();
    let tol = s.tol;
    let scale = residual_scale(s).max(1.0);
    let rel = |r: f64| r.abs() / scale;
    let t = LeeTensors::compute(s);
    let rep = classify_metric(s);
    let unimodular = s.alg().is_unimodular(&tol);
    let mut out = Vec::new();

    let mut rng = ChaCha8Rng::seed_from_u64(sample.seed ^ 0xa1fa);
    let alphas: Vec<Vec<f64>> = (0..10).map(|_| (0..d).map(|_| rng.random_range(-1.0..1.0)).collect()).collect();
    let hyp = Hypotheses {
        lee_exact: tol.negligible_scaled(&t.lee.residual, scale),
        lcs: rep.flags.is_lcs,
        unimodular,
        t_orthogonal_to_imn: rep.flags.t_orthogonal_to_imn,
        pluricanonical: rep.flags.pluricanonical,
    };
    for c in battery(s, &t, hyp, &alphas) {
        out.push(outcome(c.name, c.applicable, rel(c.residual) <= IDENTITY_TOL, rel(c.residual)));
    }

    let codiff = (0..d).map(|i| s.codifferential_form(&crate::forms::KForm::one_form(&unit(d, i))).max_abs());
    let codiff = codiff.fold(0.0, f64::max);
    out.push(outcome("codifferential_one_forms", unimodular, rel(codiff) <= IDENTITY_TOL, rel(codiff)));

    out.push(outcome("report_implications", true, rep.warnings.is_empty(), rep.warnings.len() as f64));

    if let Ok(eq) = verify_equivalences(s) {
        for e in eq.items {
            let r = e.residuals.values().fold(0.0, |m, x| f64::max(m, x.abs()));
            out.push(outcome(&format!("equivalence_{}", e.name), e.applicable, e.holds, r));
        }
    }

    if let Some(p) = &sample.params {
        let lee = max_abs(vec_sub(&lee_form_aa(p), &t.lee.theta).iter());
        out.push(outcome("lee_form_aa", true, tol.negligible_scaled(&lee, scale), lee));
        if p.is_unimodular() && rep.flags.is_lcs {
            let r = pluricanonical_conditions_aa(p).expect("dimension 4");
            let agree = r.vanish(&tol) == rep.flags.pluricanonical;
            out.push(outcome("aa_conditions_dual_oracle", true, agree, r.max()));
        }
    }
    out
}

fn failure(sample: &Sample, o: &Outcome) -> Failure {
    let s = &sample.structure;
    let rows = |m: &Matrix<f64>| m.to_rows().iter().map(|r| r.iter().map(|x| x.to_repr()).collect()).collect();
    Failure {
        sample: sample.index,
        sample_seed: sample.seed,
        check: o.name.clone(),
        residual: o.residual.to_repr(),
        dim: s.dim(),
        structure_constants: s
            .alg()
            .brackets()
            .iter()
            .map(|b| format!("[e{},e{}] e{} = {}", b.i + 1, b.j + 1, b.k + 1, b.value.to_repr()))
            .collect(),
        j: rows(s.j()),
        g: rows(s.g()),
    }
}

/// Runs `count` samples of a family in parallel and tallies every check.
pub fn fuzz(seed: u64, count: usize, family: Family) -> FuzzSummary {
    fuzz_dims(seed, count, family, &[4, 6])
}

/// As [`fuzz`], drawing dimensions from `dims` for the non almost abelian families.
pub fn fuzz_dims(seed: u64, count: usize, family: Family, dims: &[usize]) -> FuzzSummary {
    let results: Vec<(Sample, Vec<Outcome>)> = (0..count)
        .into_par_iter()
        .map(|i| {
            let sample = generate(family, seed, i, dims);
            let outcomes = check_sample(&sample);
            (sample, outcomes)
        })
        .collect();
    let mut checks: BTreeMap<String, CheckCount> = BTreeMap::new();
    let mut failures = Vec::new();
    for (sample, outcomes) in &results {
        for o in outcomes.iter().filter(|o| o.applicable) {
            let c = checks.entry(o.name.clone()).or_default();
            c.applicable += 1;
            if !o.passed {
                c.failed += 1;
                failures.push(failure(sample, o));
            }
        }
    }
    FuzzSummary { family: family.as_str().to_string(), seed, samples: count, checks, identity_failures: failures }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_names_round_trip() {
        for f in Family::ALL {
            assert_eq!(f.as_str().parse::<Family>().unwrap(), f);
        }
        assert!("nope".parse::<Family>().is_err());
    }

    #[test]
    fn seeds_are_per_sample() {
        assert_ne!(sample_seed(0, 0), sample_seed(0, 1));
        assert_ne!(sample_seed(0, 1), sample_seed(1, 0));
        let a = generate(Family::RandomHermitian, 5, 3, &[4, 6]);
        let b = generate(Family::RandomHermitian, 5, 3, &[4, 6]);
        assert_eq!(a.structure.alg(), b.structure.alg());
    }

    #[test]
    fn generated_unimodular_samples_are_unimodular_lie_algebras() {
        for i in 0..20 {
            let s = generate(Family::RandomUnimodular, 9, i, &[4, 6]).structure;
            assert!(s.alg().is_unimodular(&Tolerance::new(1e-9)));
            assert!(s.alg().jacobi_residual() < 1e-9);
        }
    }

    #[test]
    fn aa_subfamilies_hit_their_targets() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let p = random_aa_params(&mut rng);
            let s = build_almost_abelian(&p, Tolerance::default()).unwrap();
            assert!(s.alg().jacobi_residual().is_zero());
        }
    }

    #[test]
    fn small_batch_is_clean() {
        for f in Family::ALL {
            let sum = fuzz(11, 12, f);
            assert!(sum.identity_failures.is_empty(), "{}: {:#?}", f, sum.identity_failures);
        }
    }
}
