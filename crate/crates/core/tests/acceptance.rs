//! The nine acceptance criteria. Prints one PASS/FAIL line each.
//!
//! A criterion whose literal statement is false for the mathematics (7 on b = 0
//! inputs, 8 on the sign of the optimum) prints FAIL with the measured values;
//! the process exits non-zero only when a mathematically valid part fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use lcak::almost_abelian::{classify_4d, AlmostAbelianParams, ClassLabel};
use lcak::catalog::entry;
use lcak::conditions::{classify_metric, residual_scale, verify_equivalences};
use lcak::feasibility::{symplectic_feasibility, Verdict};
use lcak::fuzz::{fuzz_dims, generate, Family, IDENTITY_TOL};
use lcak::identities::{dim4_integrand, LeeTensors};
use lcak::linalg::{unit, Matrix};
use lcak::report::form_strs;
use lcak::scalar::{Rational, Scalar, Tolerance};

/// Flag tolerance for float samples.
const TAU: f64 = 1e-9;
/// Absolute bound on the dimension-4 integrand.
const INTEGRAND_TOL: f64 = 1e-8;

type Q = Rational;

struct Outcome {
    /// The criterion as literally stated.
    literal: bool,
    /// Every part of it that is mathematically true holds.
    valid_parts: bool,
    detail: String,
}

impl Outcome {
    fn plain(ok: bool, detail: String) -> Self {
        Self { literal: ok, valid_parts: ok, detail }
    }
}

fn q(v: &[i64]) -> Vec<Q> {
    v.iter().map(|&x| Q::from_i64(x)).collect()
}

fn within(start: Instant, limit: Duration) -> (bool, String) {
    let t = start.elapsed();
    (t < limit, format!("{:.3}s (limit {}s)", t.as_secs_f64(), limit.as_secs_f64()))
}

fn sym_matrix(entries: &[(usize, usize, Q)]) -> Matrix<Q> {
    let mut m = Matrix::zeros(4, 4);
    for (i, j, v) in entries {
        m[(*i, *j)] = v.clone();
    }
    m
}

fn exact_example(
    name: &str,
    df: (&str, &str),
    theta: &[i64],
    n12: Vec<Q>,
    dtheta_sym: Matrix<Q>,
    image: Option<Vec<Vec<Q>>>,
) -> Outcome {
    let start = Instant::now();
    let s = entry(name).unwrap().structure;
    let mut bad = Vec::new();
    let got_df = form_strs(&s.f().d(s.alg()));
    if got_df.len() != 1 || got_df.get(df.0).map(String::as_str) != Some(df.1) {
        bad.push(format!("dF = {:?}", got_df));
    }
    let t = LeeTensors::compute(&s);
    if t.lee.theta != q(theta) {
        bad.push(format!("theta = {:?}", t.lee.theta));
    }
    if s.nijenhuis(&unit(4, 0), &unit(4, 1)) != n12 {
        bad.push("N(e1,e2)".into());
    }
    if t.d_theta.symmetric_part() != dtheta_sym {
        bad.push("(D theta)^sym".into());
    }
    if let Some(img) = image {
        if s.image_of_n() != img {
            bad.push("image of N".into());
        }
    }
    if !classify_metric(&s).flags.pluricanonical {
        bad.push("pluricanonical flag".into());
    }
    let (fast, time) = within(start, Duration::from_secs(1));
    if !fast {
        bad.push("runtime".into());
    }
    let ok = bad.is_empty();
    Outcome::plain(ok, if ok { format!("exact equality, {}", time) } else { format!("mismatch: {}; {}", bad.join(", "), time) })
}

fn criterion1() -> Outcome {
    let h = Q::from_ratio(1, 2);
    exact_example(
        "A4_1",
        ("e2^e3^e4", "1"),
        &[0, 0, -1, 0],
        vec![Q::zero(), Q::from_ratio(1, 4), Q::zero(), Q::zero()],
        sym_matrix(&[(1, 3, h.clone()), (3, 1, h)]),
        None,
    )
}

fn criterion2() -> Outcome {
    exact_example(
        "A4_8",
        ("e2^e3^e4", "-1"),
        &[0, 0, 0, -1],
        vec![Q::zero(), Q::zero(), Q::from_ratio(1, 2), Q::zero()],
        sym_matrix(&[(2, 2, Q::one()), (1, 1, -Q::one())]),
        Some(vec![q(&[0, 1, 0, 0]), q(&[0, 0, 1, 0])]),
    )
}

fn criterion3() -> Outcome {
    let start = Instant::now();
    let mut bad = 0;
    for name in ["A4_1", "A4_8"] {
        let eq = verify_equivalences(&entry(name).unwrap().structure).unwrap();
        let e = eq.get("first_kind_adapted").unwrap();
        if !(e.applicable && e.holds && e.lhs && e.rhs) {
            bad += 1;
        }
    }
    let rows: Vec<Option<(bool, bool)>> = (0..2000)
        .into_par_iter()
        .map(|i| {
            let s = generate(Family::AlmostAbelian4d, 3, i, &[4]).structure;
            let s = lcak::hermitian::AlmostHermitian::new(s.alg().clone(), s.j().clone(), s.g().clone(), Tolerance::new(TAU)).unwrap();
            let e = verify_equivalences(&s).ok()?;
            let a = e.get("first_kind_adapted").unwrap();
            a.applicable.then_some((a.lhs, a.rhs))
        })
        .collect();
    let tested: Vec<(bool, bool)> = rows.into_iter().flatten().collect();
    let disagree = tested.iter().filter(|(l, r)| l != r).count();
    let pluri = tested.iter().filter(|(l, _)| *l).count();
    let (fast, time) = within(start, Duration::from_secs(30));
    let ok = bad == 0 && disagree == 0 && tested.len() >= 500 && fast;
    Outcome::plain(
        ok,
        format!(
            "catalog LCS entries consistent: {}; {} fuzzed LCS samples ({} pluricanonical), {} disagreements; {}",
            bad == 0,
            tested.len(),
            pluri,
            disagree,
            time
        ),
    )
}

fn criterion4() -> Outcome {
    let rows: Vec<Option<(bool, bool)>> = (0..2000)
        .into_par_iter()
        .map(|i| {
            let s = generate(Family::AlmostAbelian4d, 4, i, &[4]).structure;
            let r = classify_metric(&s);
            if !(s.alg().is_unimodular(&s.tol) && r.flags.is_lcs && r.flags.t_orthogonal_to_imn) {
                return None;
            }
            let t = LeeTensors::compute(&s);
            let br = s.alg().bracket(&t.lee.t, &t.lee.jt);
            let g = s.g_product(&br, &t.lee.jt);
            let rhs = g.abs() <= TAU * residual_scale(&s).max(1.0);
            Some((r.flags.pluricanonical, rhs))
        })
        .collect();
    let tested: Vec<(bool, bool)> = rows.into_iter().flatten().collect();
    let disagree = tested.iter().filter(|(l, r)| l != r).count();
    let pluri = tested.iter().filter(|(l, _)| *l).count();
    let ok = tested.len() >= 500 && disagree == 0;
    Outcome::plain(
        ok,
        format!(
            "{} unimodular LCS samples with T orthogonal to Im N ({} pluricanonical, {} not), {} disagreements",
            tested.len(),
            pluri,
            tested.len() - pluri,
            disagree
        ),
    )
}

fn criterion5() -> Outcome {
    let start = Instant::now();
    let sum = fuzz_dims(5, 1500, Family::RandomHermitian, &[4, 6]);
    let names = [
        "formula_almost_hermitian",
        "dj_expression",
        "chern_form",
        "bochner",
        "j_invariant_formula",
        "cyclic_nijenhuis",
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for n in names {
        let c = sum.count(n);
        ok &= c.applicable >= 200 && c.failed == 0;
        parts.push(format!("{} {}/{}", n, c.applicable - c.failed, c.applicable));
        for f in sum.failures_of(n) {
            eprintln!("  criterion 5 failure: {:?}", f);
        }
    }
    let (fast, time) = within(start, Duration::from_secs(120));
    Outcome::plain(ok && fast, format!("relative tol {:e}; {}; {}", IDENTITY_TOL, parts.join(", "), time))
}

fn criterion6() -> Outcome {
    let rows: Vec<(f64, String)> = (0..300)
        .into_par_iter()
        .map(|i| {
            let s = generate(Family::RandomUnimodular, 6, i, &[4]).structure;
            let r = dim4_integrand(&s, &LeeTensors::compute(&s)).abs();
            (r, format!("{:?}", s.alg().brackets()))
        })
        .collect();
    let worst = rows.iter().map(|r| r.0).fold(0.0, f64::max);
    let bad: Vec<_> = rows.iter().filter(|r| !(r.0 <= INTEGRAND_TOL)).collect();
    for (r, c) in &bad {
        eprintln!("  criterion 6 violation: residual {:e}, structure constants {}", r, c);
    }
    Outcome::plain(
        rows.len() >= 200 && bad.is_empty(),
        format!("{} dim-4 unimodular samples, max |integrand| {:e} (tol {:e})", rows.len(), worst, INTEGRAND_TOL),
    )
}

fn criterion7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let tol = Tolerance::default();
    let (mut in_set, mut consistent, mut zero_b, mut zero_b_heisenberg) = (0, 0, 0, 0);
    for _ in 0..300 {
        let b = [rng.random_range(-3..=3), rng.random_range(-3..=3)];
        let v = loop {
            let v = [rng.random_range(-3..=3), rng.random_range(-3..=3)];
            if v != [0, 0] {
                break v;
            }
        };
        let p = AlmostAbelianParams::<Q>::dim4(0, b, v, [[0, 0], [0, 0]]);
        let c = classify_4d(&p, &tol).unwrap();
        let target = c.label.is_target();
        in_set += target as usize;
        consistent += (target && c.label == c.jordan) as usize;
        if b == [0, 0] {
            zero_b += 1;
            zero_b_heisenberg += matches!(c.jordan, ClassLabel::Other { nilpotency_index: Some(2), .. }) as usize;
        }
    }
    let literal = in_set == 300 && consistent == 300;
    Outcome {
        literal,
        valid_parts: consistent == 300 - zero_b && zero_b_heisenberg == zero_b,
        detail: format!(
            "{}/300 in the three classes, all {} matching the Jordan type; {} inputs with b = 0 have ad^2 = 0 (Heisenberg plus a line)",
            in_set, consistent, zero_b
        ),
    }
}

fn criterion8() -> Outcome {
    let mut literal = true;
    let mut valid = true;
    let mut parts = Vec::new();
    for name in ["A4_1", "A4_8"] {
        let f = symplectic_feasibility(&entry(name).unwrap().structure);
        let opt = f.optimum.unwrap_or(f64::NAN);
        literal &= f.verdict == Verdict::Infeasible && opt <= -TAU;
        valid &= f.verdict == Verdict::Infeasible
            && f.certificate.is_some()
            && f.exact_optimum.as_ref().is_some_and(Scalar::is_zero);
        parts.push(format!(
            "{} {} (certificate {}, optimum {:e}, exact optimum {})",
            name,
            f.verdict.as_str(),
            f.certificate.is_some(),
            opt,
            f.exact_optimum.map(|x| x.to_repr()).unwrap_or_else(|| "-".into())
        ));
    }
    let k = entry("abelian_kahler").unwrap().structure;
    let f = symplectic_feasibility(&k);
    let witness_f = f.verdict == Verdict::Feasible && f.witness.as_ref() == Some(k.f());
    literal &= witness_f;
    valid &= witness_f;
    parts.push(format!("abelian_kahler witness = F: {}", witness_f));
    Outcome { literal, valid_parts: valid, detail: parts.join("; ") }
}

fn criterion9() -> Outcome {
    let rows: Vec<Option<(bool, bool)>> = (0..1200)
        .into_par_iter()
        .map(|i| {
            let fam = if i % 2 == 0 { Family::AlmostAbelian4d } else { Family::RandomHermitian };
            let s = generate(fam, 9, i, &[4, 6]).structure;
            let r = classify_metric(&s);
            if !r.flags.is_lcs {
                return None;
            }
            let t = LeeTensors::compute(&s);
            let ltj = s.lie_derivative_j(&t.lee.t).max_abs();
            Some((r.flags.anti_pluricanonical, ltj <= TAU * residual_scale(&s).max(1.0)))
        })
        .collect();
    let tested: Vec<(bool, bool)> = rows.into_iter().flatten().collect();
    let disagree = tested.iter().filter(|(l, r)| l != r).count();
    let anti = tested.iter().filter(|(l, _)| *l).count();
    Outcome::plain(
        tested.len() >= 300 && disagree == 0,
        format!("{} LCS samples ({} anti-pluricanonical), {} disagreements", tested.len(), anti, disagree),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("exact example A4_1", criterion1),
        ("exact example A4_8", criterion2),
        ("first kind and adapted iff pluricanonical", criterion3),
        ("unimodular criterion", criterion4),
        ("identity fuzzing", criterion5),
        ("dimension-4 unimodular integrand", criterion6),
        ("almost abelian classification", criterion7),
        ("symplectic infeasibility", criterion8),
        ("anti-pluricanonical iff holomorphic Lee field", criterion9),
    ];
    let mut failed = false;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let o = f();
        let tag = if o.literal { "PASS" } else { "FAIL" };
        println!("criterion {} [{}]: {} - {}", i + 1, name, tag, o.detail);
        if !o.literal && o.valid_parts {
            println!("  literal statement unattainable; every mathematically valid part holds");
        }
        failed |= !o.valid_parts;
    }
    if failed {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
