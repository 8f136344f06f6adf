//! Built-in structures.

use crate::algebra::LieAlgebra;
use crate::almost_abelian::{build_almost_abelian, AlmostAbelianParams};
use crate::hermitian::AlmostHermitian;
use crate::linalg::Matrix;
use crate::scalar::{Rational, Scalar, Tolerance};

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub description: &'static str,
    pub structure: AlmostHermitian<Rational>,
    /// Almost abelian data, when the entry is built from it.
    pub params: Option<AlmostAbelianParams<Rational>>,
}

pub const NAMES: [&str; 6] = ["A4_1", "A4_8", "abelian_kahler", "aa_A4_1", "aa_A3_4_plus_A1", "aa_A3_6_plus_A1"];

/// `J e_a = e_b`, `J e_b = −e_a` for each pair (0-based).
pub fn j_from_pairs<S: Scalar>(d: usize, pairs: &[(usize, usize)]) -> Matrix<S> {
    let mut j = Matrix::zeros(d, d);
    for &(a, b) in pairs {
        j[(b, a)] = S::one();
        j[(a, b)] = -S::one();
    }
    j
}

fn hermitian(triples: &[(usize, usize, usize, i64)], pairs: &[(usize, usize)]) -> AlmostHermitian<Rational> {
    let alg = LieAlgebra::from_int_triples(4, triples).expect("catalog brackets are valid");
    AlmostHermitian::with_identity_metric(alg, j_from_pairs(4, pairs), Tolerance::default())
        .expect("catalog structures are valid")
}

fn from_params(p: AlmostAbelianParams<Rational>) -> (AlmostHermitian<Rational>, Option<AlmostAbelianParams<Rational>>) {
    let s = build_almost_abelian(&p, Tolerance::default()).expect("catalog data is valid");
    (s, Some(p))
}

pub fn entry(name: &str) -> Option<CatalogEntry> {
    type P = AlmostAbelianParams<Rational>;
    let (name, description, (structure, params)) = match name {
        "A4_1" => (
            "A4_1",
            "[e2,e4] = e1, [e3,e4] = e2; J e1 = e3, J e2 = e4; g = identity",
            (hermitian(&[(1, 3, 0, 1), (2, 3, 1, 1)], &[(0, 2), (1, 3)]), None),
        ),
        "A4_8" => (
            "A4_8",
            "[e2,e3] = e1, [e2,e4] = e2, [e3,e4] = -e3; J e1 = e4, J e2 = e3; g = identity",
            (hermitian(&[(1, 2, 0, 1), (1, 3, 1, 1), (2, 3, 2, -1)], &[(0, 3), (1, 2)]), None),
        ),
        "abelian_kahler" => (
            "abelian_kahler",
            "R^4 abelian; J e1 = e3, J e2 = e4; g = identity",
            (hermitian(&[], &[(0, 2), (1, 3)]), None),
        ),
        "aa_A4_1" => (
            "aa_A4_1",
            "almost abelian (a, b, v, A) = (0, (1,0), (0,1), 0): ad nilpotent of index 3",
            from_params(P::dim4(0, [1, 0], [0, 1], [[0, 0], [0, 0]])),
        ),
        "aa_A3_4_plus_A1" => (
            "aa_A3_4_plus_A1",
            "almost abelian (a, b, v, A) = (0, (1,0), (1,0), 0): b.v > 0",
            from_params(P::dim4(0, [1, 0], [1, 0], [[0, 0], [0, 0]])),
        ),
        "aa_A3_6_plus_A1" => (
            "aa_A3_6_plus_A1",
            "almost abelian (a, b, v, A) = (0, (1,0), (-1,0), 0): b.v < 0",
            from_params(P::dim4(0, [1, 0], [-1, 0], [[0, 0], [0, 0]])),
        ),
        _ => return None,
    };
    Some(CatalogEntry { name, description, structure, params })
}

pub fn catalog() -> Vec<CatalogEntry> {
    NAMES.iter().map(|n| entry(n).expect("listed")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::validate_lie_algebra;
    use crate::almost_abelian::{classify_4d, ClassLabel};
    use crate::conditions::classify_metric;
    use crate::hermitian::validate_structure;

    #[test]
    fn entries_validate() {
        let tol = Tolerance::default();
        for e in catalog() {
            let s = &e.structure;
            assert!(validate_lie_algebra(s.dim(), s.alg().brackets(), &tol).unwrap().ok, "{}", e.name);
            assert!(validate_structure(s.dim(), s.j(), s.g(), &tol).unwrap().ok(), "{}", e.name);
        }
        assert!(entry("nope").is_none());
    }

    #[test]
    fn catalog_examples() {
        let r = classify_metric(&entry("A4_1").unwrap().structure);
        assert!(r.flags.pluricanonical && !r.flags.vaisman);
        let r = classify_metric(&entry("abelian_kahler").unwrap().structure);
        assert!(r.d_theta.is_zero());
        let s = entry("A4_8").unwrap().structure;
        let q = |v: &[i64]| v.iter().map(|&x| Rational::from_i64(x)).collect::<Vec<_>>();
        assert_eq!(s.image_of_n(), vec![q(&[0, 1, 0, 0]), q(&[0, 0, 1, 0])]);
    }

    #[test]
    fn almost_abelian_entries_are_pluricanonical_targets() {
        let tol = Tolerance::default();
        let want = [ClassLabel::A4_1, ClassLabel::A3_4PlusA1, ClassLabel::A3_6PlusA1];
        for (name, label) in NAMES[3..].iter().zip(want) {
            let e = entry(name).unwrap();
            let c = classify_4d(e.params.as_ref().unwrap(), &tol).unwrap();
            assert_eq!(c.label, label);
            assert!(c.consistent);
            assert!(classify_metric(&e.structure).flags.pluricanonical, "{}", name);
        }
    }
}
