//! JSON-lines reports: one record per checked instance, sorted by check and
//! instance digest, then a summary line.

use std::collections::BTreeMap;
use std::io::{self, Write};

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// One checked instance. A failing record carries the serialized instance
/// and the reason, enough to reproduce it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Record {
    pub check_id: String,
    pub property: String,
    pub instance_digest: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

/// First 16 hex digits of the SHA-256 of the compact JSON text.
pub fn digest(instance: &Value) -> String {
    let h = Sha256::digest(instance.to_string().as_bytes());
    hex::encode(&h[..8])
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct CheckCount {
    pub pass: usize,
    pub fail: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub summary: bool,
    pub seed: u64,
    pub generator: &'static str,
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub checks: BTreeMap<String, CheckCount>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub records: Vec<Record>,
    pub seed: u64,
}

impl Report {
    /// Sorts by `(check_id, instance_digest)`, so the order in which checks
    /// finished does not matter.
    pub fn new(mut records: Vec<Record>, seed: u64) -> Self {
        records.sort_by(|a, b| (&a.check_id, &a.instance_digest, a.status).cmp(&(&b.check_id, &b.instance_digest, b.status)));
        Report { records, seed }
    }

    pub fn all_pass(&self) -> bool {
        self.records.iter().all(|r| r.status == Status::Pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Record> {
        self.records.iter().filter(|r| r.status == Status::Fail)
    }

    pub fn summary(&self) -> Summary {
        let mut checks: BTreeMap<String, CheckCount> = BTreeMap::new();
        for r in &self.records {
            let c = checks.entry(r.check_id.clone()).or_default();
            match r.status {
                Status::Pass => c.pass += 1,
                Status::Fail => c.fail += 1,
            }
        }
        let failed = self.failures().count();
        Summary {
            summary: true,
            seed: self.seed,
            generator: crate::random::GENERATOR,
            total: self.records.len(),
            passed: self.records.len() - failed,
            failed,
            checks,
        }
    }

    pub fn write_jsonl(&self, out: &mut impl Write) -> io::Result<()> {
        for r in &self.records {
            serde_json::to_writer(&mut *out, r)?;
            out.write_all(b"\n")?;
        }
        serde_json::to_writer(&mut *out, &self.summary())?;
        out.write_all(b"\n")
    }

    pub fn to_jsonl(&self) -> String {
        let mut buf = Vec::new();
        self.write_jsonl(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("JSON is UTF-8")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(id: &str, d: &str, status: Status) -> Record {
        Record { check_id: id.into(), property: String::new(), instance_digest: d.into(), status, witness: None }
    }

    #[test]
    fn records_are_sorted_and_counted() {
        let r = Report::new(vec![rec("b", "1", Status::Pass), rec("a", "2", Status::Fail), rec("a", "0", Status::Pass)], 5);
        let ids: Vec<_> = r.records.iter().map(|x| (x.check_id.as_str(), x.instance_digest.as_str())).collect();
        assert_eq!(ids, [("a", "0"), ("a", "2"), ("b", "1")]);
        let s = r.summary();
        assert_eq!((s.total, s.passed, s.failed), (3, 2, 1));
        assert!(!r.all_pass());
        assert_eq!(r.to_jsonl().lines().count(), 4);
    }

    #[test]
    fn digest_is_stable() {
        let v = serde_json::json!({"a": [1, 2]});
        assert_eq!(digest(&v), digest(&v.clone()));
        assert_eq!(digest(&v).len(), 16);
    }
}
