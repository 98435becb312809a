//! The subcommands, separated from argument parsing so tests can call them.

use std::io::Write;
use std::path::{Path, PathBuf};

use jetcalc_core::approxalg::double_commutant_check;
use jetcalc_core::approxalg::SharpMembership;
use jetcalc_core::family::{pw_membership_triple, Setting};
use jetcalc_core::jetfun::{jet, kernel_alpha_bar};
use jetcalc_core::poly::text::{format_polynomial, parse_exppoly};
use jetcalc_core::{ExpScalar, Matrix, Vector};
use serde_json::{json, Value};

use crate::files::{
    parse_point, read_json, show, show_matrix, AlgebraFile, CandidateFile, FamilyFile, JetResult, ModuleFile,
};
use crate::report::Report;
use crate::suites::{self, Caps};
use crate::InputError;

/// Process exit codes.
pub const PASS: i32 = 0;
pub const FAIL: i32 = 1;
pub const USAGE: i32 = 2;

/// Seed used when neither `--seed` nor the environment variable is set.
pub const DEFAULT_SEED: u64 = 20240601;
pub const SEED_ENV: &str = "JETCALC_SEED";

pub fn default_seed() -> Result<u64, InputError> {
    match std::env::var(SEED_ENV) {
        Ok(s) => s.trim().parse().map_err(|_| InputError::Invalid(format!("{SEED_ENV}={s:?} is not a 64-bit integer"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

fn write_out(path: &Path, text: &str) -> Result<(), InputError> {
    std::fs::write(path, text).map_err(|e| InputError::Io(path.display().to_string(), e))
}

/// Prints `value` and, if asked, also writes it to `json`.
fn emit(value: &Value, json: Option<&PathBuf>) -> Result<(), InputError> {
    let text = serde_json::to_string_pretty(value).expect("plain data");
    println!("{text}");
    if let Some(p) = json {
        write_out(p, &(serde_json::to_string(value).expect("plain data") + "\n"))?;
    }
    Ok(())
}

fn status(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "fail"
    }
}

pub fn verify(seed: u64, caps: &Caps, suites: &[String], json: Option<&PathBuf>) -> Result<(Report, i32), InputError> {
    if let Some(s) = suites.iter().find(|s| !suites::SUITES.contains(&s.as_str())) {
        return Err(InputError::Invalid(format!("unknown suite {s:?}; expected one of {:?}", suites::SUITES)));
    }
    let report = suites::run(seed, caps, suites);
    let text = report.to_jsonl();
    match json {
        Some(p) => {
            write_out(p, &text)?;
            let s = report.summary();
            println!("{} instances, {} passed, {} failed", s.total, s.passed, s.failed);
            for r in report.failures() {
                println!("FAIL {} {}", r.check_id, r.instance_digest);
            }
        }
        None => {
            std::io::stdout().write_all(text.as_bytes()).map_err(|e| InputError::Io("stdout".into(), e))?;
        }
    }
    let code = if report.all_pass() { PASS } else { FAIL };
    Ok((report, code))
}

fn show_entry(c: &ExpScalar) -> String {
    c.as_scalar().map_or_else(|| c.to_string(), |s| s.to_string())
}

pub fn jet_cmd(module: &str, nvars: usize, poly: &str, points: &[String], json: Option<&PathBuf>) -> Result<i32, InputError> {
    let e = crate::files::module_spec(module, nvars)?;
    let f = parse_exppoly(poly, nvars)?;
    let family = jet(&f, &e)?;
    let mut evaluation_points = Vec::new();
    let mut matrices = Vec::new();
    for p in points {
        let point = parse_point(p)?;
        if point.len() != nvars {
            return Err(InputError::Invalid(format!("point {p:?} needs {nvars} coordinates")));
        }
        let m: Matrix<ExpScalar> = family.eval(&point)?;
        matrices.push(m.to_rows().iter().map(|r| r.iter().map(show_entry).collect()).collect());
        evaluation_points.push(show(&point));
    }
    let rows = (0..family.rows())
        .map(|r| (0..family.cols()).map(|c| jetcalc_core::poly::text::format_exppoly(family.get(r, c))).collect())
        .collect();
    let result = JetResult { module: ModuleFile::from_module(&e), family: rows, evaluation_points, matrices };
    emit(&serde_json::to_value(result).expect("plain data"), json)?;
    Ok(PASS)
}

/// `lambdas` is `v;v;...` with each `v` comma-separated.
pub fn kernel_cmd(lambdas: &str, degree: u32, json: Option<&PathBuf>) -> Result<i32, InputError> {
    let ls = lambdas.split(';').map(|t| parse_point(t).map(Vector::new)).collect::<Result<Vec<_>, _>>()?;
    let k = kernel_alpha_bar(&ls, degree)?;
    let value = json!({
        "check": "kernel",
        "status": status(k.agree()),
        "lambdas": ls.iter().map(|l| show(l.coords())).collect::<Vec<_>>(),
        "degree": degree,
        "truncated": k.truncated,
        "dims": {"characterization": k.characterization.dim(), "direct": k.direct.dim()},
        "kernel": k.basis().iter().map(format_polynomial).collect::<Vec<_>>(),
    });
    emit(&value, json)?;
    Ok(if k.agree() { PASS } else { FAIL })
}

pub fn dcomm_cmd(file: &Path, json: Option<&PathBuf>) -> Result<i32, InputError> {
    let m = read_json::<AlgebraFile>(file)?.to_module()?;
    let r = double_commutant_check(&m)?;
    let ok = r.equal() && r.image_in_sharp;
    let mut value = json!({
        "check": "double_commutant",
        "status": status(ok),
        "dims": {"image": r.image.dim(), "sharp": r.sharp.dim(), "end_zero": r.end_zero_dim},
    });
    if let Some(f) = &r.separating {
        value["witness"] = json!({"separating_functional": show(f)});
    }
    emit(&value, json)?;
    Ok(if ok { PASS } else { FAIL })
}

pub struct PwArgs<'a> {
    pub family: &'a Path,
    pub candidate: &'a Path,
    pub module: &'a str,
    pub labels: &'a [String],
    /// `p;p;...` with each `p` comma-separated.
    pub points: &'a str,
    pub json: Option<&'a PathBuf>,
}

pub fn pw_cmd(a: &PwArgs<'_>) -> Result<i32, InputError> {
    let family = read_json::<FamilyFile>(a.family)?.to_family()?;
    let phi = read_json::<CandidateFile>(a.candidate)?.to_candidate(&family)?;
    let e = crate::files::module_spec(a.module, family.nvars())?;
    let points = a.points.split(';').map(parse_point).collect::<Result<Vec<_>, _>>()?;
    if let Some(p) = points.iter().find(|p| p.len() != family.nvars()) {
        return Err(InputError::Invalid(format!("point {:?} needs {} coordinates", show(p), family.nvars())));
    }
    let labels = if a.labels.is_empty() {
        family.reps().iter().map(|r| r.label().to_string()).collect()
    } else {
        a.labels.to_vec()
    };
    let setting = Setting::new(e, labels, points);
    let r = pw_membership_triple(&family, &phi, &setting)?;
    let mut value = json!({
        "check": "pw_triple",
        "status": status(r.unanimous()),
        "verdicts": {"annihilator": r.annihilator, "algebra": r.algebra, "sharp": r.sharp},
        "unanimous": r.unanimous(),
        "dims": {"algebra": r.algebra_dim, "blocks": setting.total_dim(&family)?},
    });
    let mut witness = serde_json::Map::new();
    if let Some(psi) = &r.separating {
        witness.insert("separating_functional".into(), json!(show_matrix(psi)));
    }
    if let Some(c) = &r.combination {
        witness.insert("word_coefficients".into(), json!(show(c)));
    }
    if let SharpMembership::Escapes { vector, image, .. } = &r.sharp_witness {
        witness.insert("escaping_vector".into(), json!(show(vector)));
        witness.insert("escaping_image".into(), json!(show(image)));
    }
    if !witness.is_empty() {
        value["witness"] = Value::Object(witness);
    }
    emit(&value, a.json)?;
    Ok(if r.unanimous() { PASS } else { FAIL })
}

const DEMO_FAMILY: &str = include_str!("../fixtures/reducible_family.json");
const DEMO_ESCAPING: &str = include_str!("../fixtures/escaping_candidate.json");
const DEMO_WORDS: &str = include_str!("../fixtures/word_candidate.json");

/// A short tour through the library on fixed inputs.
pub fn demo() -> Result<i32, InputError> {
    let e = crate::files::module_spec("dual:1", 1)?;
    let f = parse_exppoly("x1^2", 1)?;
    let j = jet(&f, &e)?;
    println!("jet of x1^2 over the dual numbers:");
    for r in 0..j.rows() {
        let row: Vec<String> = (0..j.cols()).map(|c| jetcalc_core::poly::text::format_exppoly(j.get(r, c))).collect();
        println!("  [{}]", row.join(", "));
    }
    let at3 = j.eval_numeric(&[jetcalc_core::Scalar::from_int(3)])?;
    println!("  at x1 = 3: {:?}", show_matrix(&at3));

    let g = parse_exppoly("exp[1]*(1)", 1)?;
    let jg = jet(&g, &e)?.eval(&[jetcalc_core::Scalar::from_int(2)])?;
    let row: Vec<String> = jg.to_rows().iter().flatten().map(show_entry).collect();
    println!("jet of e^x1 over the dual numbers at x1 = 2: {row:?}");

    let k = kernel_alpha_bar(&[Vector::from_ints(&[1]), Vector::from_ints(&[1])], 3)?;
    let basis: Vec<String> = k.basis().iter().map(format_polynomial).collect();
    println!("kernel of the reduced coproduct for two unit directions, degree <= 3: {basis:?} (agree: {})", k.agree());

    let family = serde_json::from_str::<FamilyFile>(DEMO_FAMILY).expect("shipped fixture").to_family()?;
    let setting = Setting::new(crate::files::module_spec("dual:1", 1)?, vec!["a".into()], vec![vec![jetcalc_core::Scalar::from_int(0)]]);
    for (name, text) in [("word combination", DEMO_WORDS), ("escaping candidate", DEMO_ESCAPING)] {
        let phi = serde_json::from_str::<CandidateFile>(text).expect("shipped fixture").to_candidate(&family)?;
        let r = pw_membership_triple(&family, &phi, &setting)?;
        println!(
            "{name}: annihilator {}, algebra {}, End^# {} (algebra dim {})",
            r.annihilator, r.algebra, r.sharp, r.algebra_dim
        );
    }
    Ok(PASS)
}
