//! Structure files in TOML.
//!
//! ```toml
//! name = "A4_1"
//! dim = 4
//! J = "standard"            # or "almost_abelian", { pairs = [[1, 3], [2, 4]] }, or rows
//! g = "identity"            # or rows
//!
//! [[brackets]]              # [e_i, e_j] = Σ_k c_k e_k, indices from 1
//! i = 2
//! j = 4
//! coefficients = { 1 = "1" }
//!
//! [options]
//! tolerance = 1e-9
//! arithmetic_mode = "exact" # or "float"
//! ```
//!
//! Numbers are integers, decimals or fraction strings such as `"-1/4"`.

use std::fmt;
use std::ops::Range;
use std::path::Path;

use toml::de::{DeTable, DeValue};
use toml::Spanned;

use crate::algebra::{validate_lie_algebra, Bracket, LieAlgebra};
use crate::error::Error;
use crate::hermitian::AlmostHermitian;
use crate::linalg::Matrix;
use crate::scalar::{parse_exact, Rational, Scalar, Tolerance, DEFAULT_TAU};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Parse,
    Validation,
}

/// Machine-readable load error with line and field context.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecError {
    pub kind: ErrorKind,
    pub code: String,
    pub field: Option<String>,
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for SpecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            ErrorKind::Parse => "parse error",
            ErrorKind::Validation => "validation error",
        };
        write!(f, "{} [{}]", kind, self.code)?;
        if let Some(l) = self.line {
            write!(f, " at line {}", l)?;
        }
        if let Some(field) = &self.field {
            write!(f, " in `{}`", field)?;
        }
        write!(f, ": {}", self.message)
    }
}

impl std::error::Error for SpecError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithmeticMode {
    Exact,
    Float,
}

impl ArithmeticMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            ArithmeticMode::Exact => "exact",
            ArithmeticMode::Float => "float",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpecOptions {
    pub tolerance: f64,
    pub mode: ArithmeticMode,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpecFile {
    pub name: Option<String>,
    pub dim: usize,
    pub brackets: Vec<Bracket<Rational>>,
    pub j: Matrix<Rational>,
    pub g: Matrix<Rational>,
    pub options: SpecOptions,
}

/// A built structure in the requested arithmetic.
#[derive(Debug, Clone)]
pub enum Loaded {
    Exact(AlmostHermitian<Rational>),
    Float(AlmostHermitian<f64>),
}

struct Ctx<'a> {
    text: &'a str,
}

impl Ctx<'_> {
    fn line(&self, span: &Range<usize>) -> usize {
        let end = span.start.min(self.text.len());
        self.text[..end].matches('\n').count() + 1
    }

    fn err(&self, code: &str, field: &str, span: &Range<usize>, message: impl Into<String>) -> SpecError {
        SpecError {
            kind: ErrorKind::Parse,
            code: code.into(),
            field: Some(field.into()),
            line: Some(self.line(span)),
            message: message.into(),
        }
    }

    fn scalar(&self, v: &Spanned<DeValue>, field: &str) -> Result<Rational, SpecError> {
        let parsed = match v.get_ref() {
            DeValue::Integer(i) => i64::from_str_radix(i.as_str(), i.radix()).ok().map(Rational::from_i64),
            DeValue::Float(x) => parse_exact(x.as_str()),
            DeValue::String(s) => parse_exact(s.trim()),
            _ => None,
        };
        parsed.ok_or_else(|| self.err("INVALID_NUMBER", field, &v.span(), "expected an integer, decimal or fraction string"))
    }

    fn index(&self, v: &Spanned<DeValue>, field: &str, dim: usize) -> Result<usize, SpecError> {
        let i = match v.get_ref() {
            DeValue::Integer(i) => i64::from_str_radix(i.as_str(), i.radix()).ok(),
            DeValue::String(s) => s.trim().parse::<i64>().ok(),
            _ => None,
        }
        .ok_or_else(|| self.err("INVALID_INDEX", field, &v.span(), "expected a basis index"))?;
        if i < 1 || i as usize > dim {
            return Err(self.err("INDEX_OUT_OF_RANGE", field, &v.span(), format!("index {} is outside 1..={}", i, dim)));
        }
        Ok(i as usize - 1)
    }

    fn matrix(&self, v: &Spanned<DeValue>, field: &str, dim: usize) -> Result<Matrix<Rational>, SpecError> {
        let rows = match v.get_ref() {
            DeValue::Array(a) => a,
            _ => return Err(self.err("INVALID_MATRIX", field, &v.span(), "expected a preset name or an array of rows")),
        };
        if rows.len() != dim {
            return Err(self.err(
                "DIMENSION_MISMATCH",
                field,
                &v.span(),
                format!("{} rows given for dimension {}", rows.len(), dim),
            ));
        }
        let mut out = Matrix::zeros(dim, dim);
        for (r, row) in rows.iter().enumerate() {
            let name = format!("{}[{}]", field, r + 1);
            let entries = match row.get_ref() {
                DeValue::Array(a) if a.len() == dim => a,
                _ => {
                    return Err(self.err("DIMENSION_MISMATCH", &name, &row.span(), format!("each row needs {} entries", dim)))
                }
            };
            for (c, x) in entries.iter().enumerate() {
                out[(r, c)] = self.scalar(x, &format!("{}[{}]", name, c + 1))?;
            }
        }
        Ok(out)
    }
}

fn get<'a, 'i>(t: &'a DeTable<'i>, key: &str) -> Option<&'a Spanned<DeValue<'i>>> {
    t.get(key)
}

/// `J e_i = e_{2n−i+1}`.
fn almost_abelian_j(dim: usize) -> Matrix<Rational> {
    crate::almost_abelian::adapted_j(dim / 2)
}

fn pairs_j(dim: usize, pairs: &[(usize, usize)]) -> Matrix<Rational> {
    crate::catalog::j_from_pairs(dim, pairs)
}

pub fn parse_spec(text: &str) -> Result<SpecFile, SpecError> {
    let cx = Ctx { text };
    let doc = DeTable::parse(text).map_err(|e| SpecError {
        kind: ErrorKind::Parse,
        code: "TOML_SYNTAX".into(),
        field: None,
        line: e.span().map(|s| cx.line(&s)),
        message: e.message().trim().to_string(),
    })?;
    let root = doc.get_ref();
    let whole = 0..0;

    for (k, _) in root.iter() {
        if !["name", "dim", "brackets", "J", "g", "options"].contains(&k.get_ref().as_ref()) {
            return Err(cx.err("UNKNOWN_FIELD", k.get_ref(), &k.span(), "unknown top-level key"));
        }
    }

    let name = match get(root, "name") {
        Some(v) => match v.get_ref() {
            DeValue::String(s) => Some(s.to_string()),
            _ => return Err(cx.err("INVALID_VALUE", "name", &v.span(), "expected a string")),
        },
        None => None,
    };

    let dv = get(root, "dim").ok_or_else(|| cx.err("MISSING_FIELD", "dim", &whole, "`dim` is required"))?;
    let dim = match dv.get_ref() {
        DeValue::Integer(i) => i64::from_str_radix(i.as_str(), i.radix()).ok(),
        _ => None,
    }
    .filter(|d| *d >= 2)
    .ok_or_else(|| cx.err("INVALID_VALUE", "dim", &dv.span(), "expected an integer ≥ 2"))? as usize;

    let mut brackets = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    if let Some(bv) = get(root, "brackets") {
        let arr = match bv.get_ref() {
            DeValue::Array(a) => a,
            _ => return Err(cx.err("INVALID_VALUE", "brackets", &bv.span(), "expected an array of tables")),
        };
        for (n, item) in arr.iter().enumerate() {
            let field = format!("brackets[{}]", n + 1);
            let t = match item.get_ref() {
                DeValue::Table(t) => t,
                _ => return Err(cx.err("INVALID_VALUE", &field, &item.span(), "expected a table")),
            };
            for (k, _) in t.iter() {
                if !["i", "j", "coefficients"].contains(&k.get_ref().as_ref()) {
                    return Err(cx.err("UNKNOWN_FIELD", &format!("{}.{}", field, k.get_ref()), &k.span(), "unknown key"));
                }
            }
            let need = |key: &str| {
                get(t, key).ok_or_else(|| {
                    cx.err("MISSING_FIELD", &format!("{}.{}", field, key), &item.span(), format!("`{}` is required", key))
                })
            };
            let iv = need("i")?;
            let jv = need("j")?;
            let i = cx.index(iv, &format!("{}.i", field), dim)?;
            let j = cx.index(jv, &format!("{}.j", field), dim)?;
            let cv = need("coefficients")?;
            let coeffs = match cv.get_ref() {
                DeValue::Table(c) => c,
                _ => return Err(cx.err("INVALID_VALUE", &format!("{}.coefficients", field), &cv.span(), "expected a table")),
            };
            if i == j && coeffs.iter().any(|(_, v)| cx.scalar(v, "").map(|x| !x.is_zero()).unwrap_or(true)) {
                return Err(cx.err("NOT_ANTISYMMETRIC", &field, &item.span(), "[e_i, e_i] must vanish"));
            }
            if !seen.insert((i.min(j), i.max(j))) {
                return Err(cx.err("DUPLICATE_BRACKET", &field, &item.span(), "this pair of basis vectors is already given"));
            }
            for (k, v) in coeffs.iter() {
                let kf = format!("{}.coefficients.{}", field, k.get_ref());
                let ks: Spanned<DeValue> = Spanned::new(k.span(), DeValue::String(k.get_ref().clone()));
                let kk = cx.index(&ks, &kf, dim)?;
                let value = cx.scalar(v, &kf)?;
                if !value.is_zero() {
                    brackets.push(Bracket::new(i, j, kk, value));
                }
            }
        }
    }

    let jv = get(root, "J").ok_or_else(|| cx.err("MISSING_FIELD", "J", &whole, "`J` is required"))?;
    let j = match jv.get_ref() {
        DeValue::String(s) => match s.as_ref() {
            "standard" if dim % 2 == 0 => pairs_j(dim, &(0..dim / 2).map(|k| (2 * k, 2 * k + 1)).collect::<Vec<_>>()),
            "almost_abelian" if dim % 2 == 0 => almost_abelian_j(dim),
            "standard" | "almost_abelian" => {
                return Err(cx.err("DIMENSION_MISMATCH", "J", &jv.span(), "presets need an even dimension"))
            }
            other => return Err(cx.err("UNKNOWN_PRESET", "J", &jv.span(), format!("unknown preset `{}`", other))),
        },
        DeValue::Table(t) => {
            let pv = get(t, "pairs").ok_or_else(|| cx.err("MISSING_FIELD", "J.pairs", &jv.span(), "`pairs` is required"))?;
            let arr = match pv.get_ref() {
                DeValue::Array(a) => a,
                _ => return Err(cx.err("INVALID_VALUE", "J.pairs", &pv.span(), "expected an array of [a, b] pairs")),
            };
            let mut pairs = Vec::new();
            for (n, p) in arr.iter().enumerate() {
                let f = format!("J.pairs[{}]", n + 1);
                match p.get_ref() {
                    DeValue::Array(ab) if ab.len() == 2 => {
                        pairs.push((cx.index(&ab[0], &f, dim)?, cx.index(&ab[1], &f, dim)?));
                    }
                    _ => return Err(cx.err("INVALID_VALUE", &f, &p.span(), "expected [a, b]")),
                }
            }
            pairs_j(dim, &pairs)
        }
        _ => cx.matrix(jv, "J", dim)?,
    };

    let g = match get(root, "g") {
        None => Matrix::identity(dim),
        Some(gv) => match gv.get_ref() {
            DeValue::String(s) if s.as_ref() == "identity" => Matrix::identity(dim),
            DeValue::String(s) => {
                return Err(cx.err("UNKNOWN_PRESET", "g", &gv.span(), format!("unknown preset `{}`", s)))
            }
            _ => cx.matrix(gv, "g", dim)?,
        },
    };

    let mut options = SpecOptions { tolerance: DEFAULT_TAU, mode: ArithmeticMode::Exact };
    if let Some(ov) = get(root, "options") {
        let t = match ov.get_ref() {
            DeValue::Table(t) => t,
            _ => return Err(cx.err("INVALID_VALUE", "options", &ov.span(), "expected a table")),
        };
        for (k, v) in t.iter() {
            let f = format!("options.{}", k.get_ref());
            match k.get_ref().as_ref() {
                "tolerance" => {
                    let x = cx.scalar(v, &f)?.to_f64();
                    if !(x > 0.0 && x.is_finite()) {
                        return Err(cx.err("INVALID_VALUE", &f, &v.span(), "tolerance must be positive"));
                    }
                    options.tolerance = x;
                }
                "arithmetic_mode" => {
                    options.mode = match v.get_ref() {
                        DeValue::String(s) if s.as_ref() == "exact" => ArithmeticMode::Exact,
                        DeValue::String(s) if s.as_ref() == "float" => ArithmeticMode::Float,
                        _ => return Err(cx.err("INVALID_VALUE", &f, &v.span(), "expected \"exact\" or \"float\"")),
                    }
                }
                _ => return Err(cx.err("UNKNOWN_FIELD", &f, &k.span(), "unknown option")),
            }
        }
    }

    Ok(SpecFile { name, dim, brackets, j, g, options })
}

pub fn load_spec(path: &Path) -> Result<SpecFile, SpecError> {
    let text = std::fs::read_to_string(path).map_err(|e| SpecError {
        kind: ErrorKind::Parse,
        code: "IO_ERROR".into(),
        field: None,
        line: None,
        message: format!("{}: {}", path.display(), e),
    })?;
    parse_spec(&text)
}

fn validation(code: &str, message: impl Into<String>) -> SpecError {
    SpecError { kind: ErrorKind::Validation, code: code.into(), field: None, line: None, message: message.into() }
}

fn map_error(e: Error) -> SpecError {
    match e {
        Error::InvalidStructure { code, message } => validation(&code, message),
        Error::NotAntisymmetric { .. } => validation("NOT_ANTISYMMETRIC", e.to_string()),
        Error::IndexOutOfRange { .. } => validation("INDEX_OUT_OF_RANGE", e.to_string()),
        Error::DegenerateMetric => validation("G_NOT_POSITIVE_DEFINITE", e.to_string()),
        other => validation("INVALID_STRUCTURE", other.to_string()),
    }
}

fn build<S: Scalar>(spec: &SpecFile, to: impl Fn(&Rational) -> S) -> Result<AlmostHermitian<S>, SpecError> {
    let tol = Tolerance::new(spec.options.tolerance);
    let brackets: Vec<Bracket<S>> = spec.brackets.iter().map(|b| Bracket::new(b.i, b.j, b.k, to(&b.value))).collect();
    let v = validate_lie_algebra(spec.dim, &brackets, &tol).map_err(map_error)?;
    if !v.ok {
        return Err(validation(
            "JACOBI_FAILED",
            format!("Jacobi identity fails with residual {}", v.jacobi_residual.to_repr()),
        ));
    }
    let alg = LieAlgebra::new(spec.dim, brackets).map_err(map_error)?;
    let j = Matrix::from_fn(spec.dim, spec.dim, |a, b| to(&spec.j[(a, b)]));
    let g = Matrix::from_fn(spec.dim, spec.dim, |a, b| to(&spec.g[(a, b)]));
    AlmostHermitian::new(alg, j, g, tol).map_err(map_error)
}

impl SpecFile {
    pub fn build_exact(&self) -> Result<AlmostHermitian<Rational>, SpecError> {
        build(self, |x| x.clone())
    }

    pub fn build_float(&self) -> Result<AlmostHermitian<f64>, SpecError> {
        build(self, |x| x.to_f64())
    }

    /// Builds in the arithmetic the file asks for, unless overridden.
    pub fn build(&self, mode: Option<ArithmeticMode>) -> Result<Loaded, SpecError> {
        match mode.unwrap_or(self.options.mode) {
            ArithmeticMode::Exact => self.build_exact().map(Loaded::Exact),
            ArithmeticMode::Float => self.build_float().map(Loaded::Float),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conditions::classify_metric;

    const A41: &str = r#"
name = "A4_1"
dim = 4
J = { pairs = [[1, 3], [2, 4]] }
g = "identity"

[[brackets]]
i = 2
j = 4
coefficients = { 1 = "1" }

[[brackets]]
i = 3
j = 4
coefficients = { 2 = 1 }
"#;

    #[test]
    fn a41_text_is_pluricanonical() {
        let spec = parse_spec(A41).unwrap();
        assert_eq!(spec.name.as_deref(), Some("A4_1"));
        let s = spec.build_exact().unwrap();
        assert!(classify_metric(&s).flags.pluricanonical);
        let f = spec.build_float().unwrap();
        assert!(classify_metric(&f).flags.pluricanonical);
    }

    #[test]
    fn empty_brackets_are_vaisman() {
        let s = parse_spec("dim = 4\nJ = \"standard\"\ng = \"identity\"\n").unwrap().build_exact().unwrap();
        assert!(classify_metric(&s).flags.vaisman);
    }

    #[test]
    fn j_not_acs() {
        let text = "dim = 2\nJ = [[0, 1], [1, 0]]\n";
        let e = parse_spec(text).unwrap().build_exact().unwrap_err();
        assert_eq!(e.kind, ErrorKind::Validation);
        assert_eq!(e.code, "J_NOT_ACS");
    }

    #[test]
    fn values_and_presets() {
        let text = "dim = 4\nJ = \"almost_abelian\"\n[[brackets]]\ni = 4\nj = 1\ncoefficients = { 2 = \"-1/4\", 3 = 0.5 }\n[options]\narithmetic_mode = \"float\"\ntolerance = \"1e-10\"\n";
        let spec = parse_spec(text).unwrap();
        assert_eq!(spec.options.mode, ArithmeticMode::Float);
        assert_eq!(spec.options.tolerance, 1e-10);
        assert_eq!(spec.brackets.len(), 2);
        assert_eq!(spec.brackets[0].value, Rational::from_ratio(-1, 4));
        assert_eq!(spec.brackets[1].value, Rational::from_ratio(1, 2));
        assert_eq!(spec.j, crate::almost_abelian::adapted_j(2));
        assert!(matches!(spec.build(None).unwrap(), Loaded::Float(_)));
        assert!(matches!(spec.build(Some(ArithmeticMode::Exact)).unwrap(), Loaded::Exact(_)));
    }

    #[test]
    fn parse_errors_carry_context() {
        let e = parse_spec("dim = 4\nJ = \"standard\"\n[[brackets]]\ni = 2\nj = 9\ncoefficients = { 1 = 1 }\n").unwrap_err();
        assert_eq!((e.code.as_str(), e.line, e.field.as_deref()), ("INDEX_OUT_OF_RANGE", Some(5), Some("brackets[1].j")));
        let e = parse_spec("dim = 4\nJ = \"standard\"\n[[brackets]]\ni = 1\nj = 2\ncoefficients = { 1 = \"x/2\" }\n").unwrap_err();
        assert_eq!((e.code.as_str(), e.line), ("INVALID_NUMBER", Some(6)));
        let e = parse_spec("dim = 4\nJ = [[0, 1], [1, 0]]\n").unwrap_err();
        assert_eq!((e.code.as_str(), e.line, e.field.as_deref()), ("DIMENSION_MISMATCH", Some(2), Some("J")));
        let e = parse_spec("dim = 4\nJ = \"fancy\"\n").unwrap_err();
        assert_eq!(e.code, "UNKNOWN_PRESET");
        let e = parse_spec("dim = 4\n").unwrap_err();
        assert_eq!((e.code.as_str(), e.field.as_deref()), ("MISSING_FIELD", Some("J")));
        let e = parse_spec("dim = 4\nJ = \"standard\"\ncolour = 1\n").unwrap_err();
        assert_eq!((e.code.as_str(), e.line), ("UNKNOWN_FIELD", Some(3)));
        let e = parse_spec("dim = = 4\n").unwrap_err();
        assert_eq!((e.code.as_str(), e.line), ("TOML_SYNTAX", Some(1)));
        assert!(e.to_string().starts_with("parse error [TOML_SYNTAX] at line 1"));
        let e = parse_spec("dim = 4\nJ = \"standard\"\n[[brackets]]\ni = 1\nj = 2\ncoefficients = { 1 = 1 }\n[[brackets]]\ni = 2\nj = 1\ncoefficients = { 1 = 1 }\n").unwrap_err();
        assert_eq!(e.code, "DUPLICATE_BRACKET");
    }

    #[test]
    fn jacobi_failure_is_a_validation_error() {
        // [e1,e2] = e3, [e2,e3] = e1, [e3,e1] = e1 fails Jacobi
        let text = "dim = 4\nJ = \"standard\"\n[[brackets]]\ni = 1\nj = 2\ncoefficients = { 3 = 1 }\n[[brackets]]\ni = 2\nj = 3\ncoefficients = { 1 = 1 }\n[[brackets]]\ni = 3\nj = 1\ncoefficients = { 1 = 1 }\n";
        let e = parse_spec(text).unwrap().build_exact().unwrap_err();
        assert_eq!((e.kind, e.code.as_str()), (ErrorKind::Validation, "JACOBI_FAILED"));
    }

    #[test]
    fn non_invariant_metric() {
        let text = "dim = 4\nJ = { pairs = [[2, 4], [1, 3]] }\ng = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 4]]\n";
        let e = parse_spec(text).unwrap().build_exact().unwrap_err();
        assert_eq!(e.code, "G_NOT_J_INVARIANT");
    }
}
