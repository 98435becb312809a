//! Randomized and exhaustive checks, grouped by the module they exercise.
//!
//! A check draws its `i`-th instance from `Gen::new(seed, id, i)`, so the
//! report depends only on the seed, the caps and the instance limit.

mod approxalg;
mod family;
mod jetfun;
mod localmod;
mod poly;

use serde_json::{json, Value};

use crate::random::Gen;
use crate::report::{digest, Record, Report, Status};

/// Size caps shared by all checks. Each check further clamps them to the
/// bounds it is specified for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Caps {
    pub nmax: usize,
    pub kmax: u32,
    pub dimmax: usize,
    pub words: usize,
    /// Upper bound on instances per check.
    pub limit: Option<usize>,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { nmax: 3, kmax: 3, dimmax: 6, words: 6, limit: None }
    }
}

/// The data of one instance and, if it failed, why.
pub struct Instance {
    pub data: Value,
    pub failure: Option<String>,
}

impl Instance {
    pub fn new(data: Value, result: Result<(), String>) -> Self {
        Instance { data, failure: result.err() }
    }
}

/// Number of instances: a fixed count of random draws, or one instance per
/// case of an enumeration bounded by the caps.
#[derive(Clone, Copy)]
pub enum Count {
    Random(usize),
    Exhaustive(fn(&Caps) -> usize),
}

pub struct Check {
    pub id: &'static str,
    pub property: &'static str,
    pub count: Count,
    pub run: fn(&mut Gen, &Caps, usize) -> Instance,
}

impl Check {
    pub fn count(&self, caps: &Caps) -> usize {
        let n = match self.count {
            Count::Random(n) => n,
            Count::Exhaustive(f) => f(caps),
        };
        caps.limit.map_or(n, |l| n.min(l))
    }

    pub fn suite(&self) -> &'static str {
        self.id.split('.').next().unwrap_or(self.id)
    }

    pub fn records(&self, seed: u64, caps: &Caps) -> Vec<Record> {
        (0..self.count(caps))
            .map(|i| {
                let mut g = Gen::new(seed, self.id, i as u64);
                let inst = (self.run)(&mut g, caps, i);
                let status = if inst.failure.is_some() { Status::Fail } else { Status::Pass };
                let witness = inst.failure.as_ref().map(|why| json!({"seed": seed, "index": i, "instance": inst.data, "reason": why}));
                Record {
                    check_id: self.id.into(),
                    property: self.property.into(),
                    instance_digest: digest(&inst.data),
                    status,
                    witness,
                }
            })
            .collect()
    }
}

pub const SUITES: [&str; 5] = ["poly", "localmod", "jetfun", "approxalg", "family"];

pub fn all_checks() -> Vec<Check> {
    let mut v = poly::checks();
    v.extend(localmod::checks());
    v.extend(jetfun::checks());
    v.extend(approxalg::checks());
    v.extend(family::checks());
    v
}

pub fn check(id: &str) -> Option<Check> {
    all_checks().into_iter().find(|c| c.id == id)
}

/// Runs the selected suites (all when `suites` is empty) on worker threads.
/// `dimmax = 0` selects nothing.
pub fn run(seed: u64, caps: &Caps, suites: &[String]) -> Report {
    if caps.dimmax == 0 {
        return Report::new(Vec::new(), seed);
    }
    let checks: Vec<Check> =
        all_checks().into_iter().filter(|c| suites.is_empty() || suites.iter().any(|s| s == c.suite())).collect();
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(checks.len().max(1));
    let next = std::sync::atomic::AtomicUsize::new(0);
    let records = std::thread::scope(|s| {
        let handles: Vec<_> = (0..workers)
            .map(|_| {
                s.spawn(|| {
                    let mut out = Vec::new();
                    loop {
                        let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                        let Some(c) = checks.get(i) else { break };
                        out.extend(c.records(seed, caps));
                    }
                    out
                })
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("check panicked")).collect()
    });
    Report::new(records, seed)
}

/// `Ok` when `ok`, else `Err(msg)`.
pub(crate) fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

pub(crate) fn core<T>(r: jetcalc_core::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

pub(crate) mod show {
    use jetcalc_core::jetfun::MatPolyFamily;
    use jetcalc_core::localmod::FinMod;
    use jetcalc_core::poly::text::{format_diffop, format_exppoly, format_polynomial};
    use jetcalc_core::{DiffOp, ExpPoly, Matrix, Polynomial, Scalar};
    use serde_json::{json, Value};

    use crate::files::{show, show_matrix, ModuleFile};

    pub fn point(v: &[Scalar]) -> Value {
        json!(show(v))
    }

    pub fn poly(p: &Polynomial) -> Value {
        json!(format_polynomial(p))
    }

    pub fn exppoly(f: &ExpPoly) -> Value {
        json!(format_exppoly(f))
    }

    pub fn diffop(u: &DiffOp) -> Value {
        json!(format_diffop(u))
    }

    pub fn matrix(m: &Matrix) -> Value {
        json!(show_matrix(m))
    }

    pub fn family(f: &MatPolyFamily) -> Value {
        let rows: Vec<Vec<String>> =
            (0..f.rows()).map(|r| (0..f.cols()).map(|c| format_exppoly(f.get(r, c))).collect()).collect();
        json!(rows)
    }

    pub fn module(e: &FinMod) -> Value {
        serde_json::to_value(ModuleFile::from_module(e)).expect("plain data")
    }
}
