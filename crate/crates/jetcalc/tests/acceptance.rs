use jetcalc::commands::DEFAULT_SEED;
use jetcalc::report::Status;
use jetcalc::suites::{self, Caps};

const CRITERIA: [(&str, &[&str]); 12] = [
    ("perfect pairing", &["localmod.perfect_pairing"]),
    ("jet homomorphism", &["jetfun.homomorphism"]),
    ("iterated derivatives", &["jetfun.iterated_jets"]),
    ("dual-number equivalence", &["jetfun.delorme_kappa"]),
    ("dual correspondences", &["jetfun.functional_to_operator", "jetfun.operator_to_functional"]),
    ("kernel characterization", &["jetfun.kernel_characterization"]),
    ("subquotient construction", &["jetfun.subquotient_construction"]),
    ("double commutant", &["approxalg.double_commutant"]),
    ("AC reformulation", &["family.ac_reformulation"]),
    ("membership triple", &["family.pw_triple", "family.pw_fixtures", "family.delorme_conditions"]),
    ("family multiplicativity", &["jetfun.family_multiplicativity"]),
    ("formal-exponential example", &["jetfun.exponential_example"]),
];

#[test]
fn acceptance() {
    let caps = Caps::default();
    let mut failed = Vec::new();
    for (n, (name, ids)) in CRITERIA.iter().enumerate() {
        let mut total = 0;
        let mut bad = Vec::new();
        for id in *ids {
            let check = suites::check(id).unwrap_or_else(|| panic!("unknown check {id}"));
            for r in check.records(DEFAULT_SEED, &caps) {
                total += 1;
                if r.status == Status::Fail {
                    bad.push(r);
                }
            }
        }
        let verdict = if bad.is_empty() && total > 0 { "PASS" } else { "FAIL" };
        println!("{verdict} criterion {:>2} {name}: {} of {total} instances exact (tolerance 0)", n + 1, total - bad.len());
        for r in bad.iter().take(3) {
            println!("    {} {}", r.check_id, r.witness.as_ref().map_or(String::new(), |w| w.to_string()));
        }
        if verdict == "FAIL" {
            failed.push(n + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
