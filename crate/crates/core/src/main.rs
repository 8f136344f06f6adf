use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use lcak::almost_abelian::{classify_4d, pluricanonical_conditions_aa, AlmostAbelianParams};
use lcak::catalog::{self, NAMES};
use lcak::fuzz::{fuzz, Family};
use lcak::linalg::Matrix;
use lcak::report::{conventions, run_report, Report, ReportOptions};
use lcak::scalar::{parse_exact, Rational, Scalar, Tolerance};
use lcak::spec_file::{load_spec, ArithmeticMode, Loaded};

const PASS: u8 = 0;
const CHECK_FAILED: u8 = 1;
const INPUT_ERROR: u8 = 2;

#[derive(Parser)]
#[command(name = "lcak", about = "Checks locally conformally symplectic and pluricanonical structures on Lie algebras")]
#[command(disable_version_flag = true)]
struct Cli {
    /// Print the crate version and the sign conventions.
    #[arg(long)]
    version: bool,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Run every check on a structure file.
    Check {
        file: PathBuf,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, conflicts_with = "float")]
        exact: bool,
        #[arg(long)]
        float: bool,
        /// Flag that must hold, e.g. `pluricanonical` (repeatable).
        #[arg(long)]
        require: Vec<String>,
        /// Also search for a compatible symplectic form.
        #[arg(long)]
        feasibility: bool,
    },
    /// List the built-in structures, or report on one.
    Catalog {
        name: Option<String>,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        float: bool,
    },
    /// Classify four-dimensional almost abelian data (a, b, v, A).
    #[command(name = "classify-aa")]
    ClassifyAa {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        #[arg(long, allow_hyphen_values = true)]
        v: String,
        /// Rows separated by `;`.
        #[arg(long = "A", allow_hyphen_values = true)]
        a_matrix: String,
        #[arg(long)]
        json: bool,
    },
    /// Check identities on deterministic random samples.
    Fuzz {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long)]
        family: String,
    },
}

fn print_report(r: &Report, json: bool) -> ExitCode {
    if json {
        println!("{}", r.to_json());
    } else {
        print!("{}", r.to_text());
    }
    ExitCode::from(if r.passed() { PASS } else { CHECK_FAILED })
}

fn input_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {}", msg);
    ExitCode::from(INPUT_ERROR)
}

fn scalar(s: &str) -> Result<Rational, String> {
    parse_exact(s).ok_or_else(|| format!("`{}` is not a number", s))
}

fn vector(s: &str, len: usize) -> Result<Vec<Rational>, String> {
    let v = s.split(',').map(scalar).collect::<Result<Vec<_>, _>>()?;
    if v.len() != len {
        return Err(format!("`{}` should have {} entries", s, len));
    }
    Ok(v)
}

fn classify_aa(a: &str, b: &str, v: &str, am: &str, json: bool) -> ExitCode {
    let parsed = (|| -> Result<AlmostAbelianParams<Rational>, String> {
        let rows = am.split(';').map(|r| vector(r, 2)).collect::<Result<Vec<_>, _>>()?;
        if rows.len() != 2 {
            return Err(format!("`{}` should have 2 rows", am));
        }
        AlmostAbelianParams::new(2, scalar(a)?, vector(b, 2)?, vector(v, 2)?, Matrix::from_rows(rows))
            .map_err(|e| e.to_string())
    })();
    let p = match parsed {
        Ok(p) => p,
        Err(e) => return input_error(e),
    };
    let res = pluricanonical_conditions_aa(&p).expect("dimension 4");
    let c = classify_4d(&p, &Tolerance::default());
    let strs = |v: &[Rational]| v.iter().map(Scalar::to_repr).collect::<Vec<_>>();
    let out = match &c {
        Ok(c) => serde_json::json!({
            "label": c.label.name(),
            "jordan": c.jordan.name(),
            "b_dot_v": c.b_dot_v.to_repr(),
            "consistent": c.consistent,
        }),
        Err(e) => serde_json::json!({ "error": e.to_string() }),
    };
    let out = serde_json::json!({
        "classification": out,
        "conditions": {
            "closed": strs(&res.closed),
            "orthogonality": strs(&res.orthogonality),
            "anti_invariance": strs(&res.anti_invariance),
        },
    });
    if json {
        println!("{}", serde_json::to_string_pretty(&out).expect("json"));
    } else {
        match &c {
            Ok(c) => println!("{} (Jordan type: {}, b.v = {})", c.label, c.jordan, c.b_dot_v.to_repr()),
            Err(e) => println!("not classified: {}", e),
        }
    }
    ExitCode::from(match c {
        Ok(c) if c.consistent => PASS,
        _ => CHECK_FAILED,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.version {
        println!("lcak {}", env!("CARGO_PKG_VERSION"));
        println!("{}", serde_json::to_string_pretty(&conventions()).expect("json"));
        return ExitCode::from(PASS);
    }
    let Some(command) = cli.command else {
        return input_error("no command given (try --help)");
    };
    match command {
        Command::Check { file, json, tol, exact, float, require, feasibility } => {
            let mut spec = match load_spec(&file) {
                Ok(s) => s,
                Err(e) => return input_error(e),
            };
            if let Some(t) = tol {
                if !(t.is_finite() && t > 0.0) {
                    return input_error(format!("tolerance {} must be positive", t));
                }
                spec.options.tolerance = t;
            }
            let mode = if exact {
                Some(ArithmeticMode::Exact)
            } else if float {
                Some(ArithmeticMode::Float)
            } else {
                None
            };
            let name = spec.name.clone().unwrap_or_else(|| file.display().to_string());
            let opts = ReportOptions { feasibility, require };
            let r = match spec.build(mode) {
                Ok(Loaded::Exact(s)) => run_report(&s, &name, &opts),
                Ok(Loaded::Float(s)) => run_report(&s, &name, &opts),
                Err(e) => return input_error(e),
            };
            print_report(&r, json)
        }
        Command::Catalog { name: None, .. } => {
            for e in catalog::catalog() {
                println!("{:<18} {}", e.name, e.description);
            }
            ExitCode::from(PASS)
        }
        Command::Catalog { name: Some(name), json, float } => {
            let Some(e) = catalog::entry(&name) else {
                return input_error(format!("unknown catalog entry `{}` (known: {})", name, NAMES.join(", ")));
            };
            let opts = ReportOptions { feasibility: true, require: Vec::new() };
            let r = if float {
                run_report(&e.structure.to_f64(), e.name, &opts)
            } else {
                run_report(&e.structure, e.name, &opts)
            };
            print_report(&r, json)
        }
        Command::ClassifyAa { a, b, v, a_matrix, json } => classify_aa(&a, &b, &v, &a_matrix, json),
        Command::Fuzz { seed, count, family } => {
            let family: Family = match family.parse() {
                Ok(f) => f,
                Err(e) => return input_error(e),
            };
            let summary = fuzz(seed, count, family);
            println!("{}", summary.to_json());
            ExitCode::from(if summary.identity_failures.is_empty() { PASS } else { CHECK_FAILED })
        }
    }
}
