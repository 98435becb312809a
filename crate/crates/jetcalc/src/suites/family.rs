use jetcalc_core::family::{
    ac_pairing, ac_to_functional, assemble_phi, assemble_pi, delorme_condition_check, functional_to_ac,
    is_ac_sequence, pw_membership_triple, spanned_algebra, ACDatum, DelormeDatum, Family, PWCandidate, PwReport,
    Setting, Word,
};
use jetcalc_core::approxalg::{ApproxAlgebra, SharpMembership};
use jetcalc_core::jetfun::delorme_module;
use jetcalc_core::linalg::dot;
use jetcalc_core::localmod::{direct_sum, dual_number_module, FinMod};
use jetcalc_core::{Matrix, Scalar, Vector};
use serde_json::{json, Value};

use super::{core, ensure, show, Caps, Check, Count, Instance};
use crate::files::{format_word, module_spec, parse_point, CandidateFile, FamilyFile};
use crate::random::Gen;

pub fn checks() -> Vec<Check> {
    vec![
        Check {
            id: "family.word_multiplicativity",
            property: "the assembled representation is multiplicative on words",
            count: Count::Random(50),
            run: word_multiplicativity,
        },
        Check {
            id: "family.ac_reformulation",
            property: "a candidate satisfies every Arthur-Campoli relation iff it lies in the double annihilator",
            count: Count::Random(50),
            run: ac_reformulation,
        },
        Check {
            id: "family.ac_translations",
            property: "relations and functionals translate into each other with equal pairings",
            count: Count::Random(20),
            run: ac_translations,
        },
        Check {
            id: "family.pw_triple",
            property: "double annihilator, algebra image and End^# membership agree",
            count: Count::Random(50),
            run: pw_triple,
        },
        Check {
            id: "family.delorme_conditions",
            property: "the intertwining conditions for Delorme derivatives agree with End^# membership over E_eta",
            count: Count::Random(50),
            run: delorme_conditions,
        },
        Check {
            id: "family.pw_fixtures",
            property: "the shipped reducible family gives the expected unanimous verdicts",
            count: Count::Exhaustive(|_| FIXTURE_CASES.len() * 2),
            run: pw_fixtures,
        },
        Check {
            id: "family.subquotient_stability",
            property: "membership for an enlarged setting implies membership for the smaller one",
            count: Count::Random(20),
            run: subquotient_stability,
        },
    ]
}

const GENERATORS: usize = 2;

struct Toy {
    family: Family,
    setting: Setting,
}

fn setting_data(family: &Family, s: &Setting) -> Value {
    json!({
        "family": serde_json::to_value(FamilyFile::from_family(family)).expect("plain data"),
        "module": show::module(&s.module),
        "labels": s.labels,
        "points": s.points.iter().map(|p| show::point(p)).collect::<Vec<_>>(),
    })
}

fn candidate_data(phi: &PWCandidate) -> Value {
    serde_json::to_value(CandidateFile::from_candidate(phi)).expect("plain data")
}

/// A random family and setting with block dimension at most `cap`.
fn toy(g: &mut Gen, c: &Caps, cap: usize) -> Toy {
    let n = g.size(1, c.nmax.clamp(1, 2));
    for _ in 0..64 {
        let dims: Vec<usize> = (0..g.size(1, 2)).map(|_| *g.pick(&[1, 2, 2])).collect();
        let module = match g.below(3) {
            0 => FinMod::trivial(n),
            1 => dual_number_module(&g.direction(n)).expect("nonzero direction"),
            _ => g.module(n, 2, 1),
        };
        let points: Vec<Vec<Scalar>> = (0..g.size(1, 2)).map(|_| g.int_point(n, 2)).collect();
        let used: Vec<usize> = (0..dims.len()).filter(|_| g.coin(2, 3)).collect();
        let used = if used.is_empty() { vec![0] } else { used };
        let total = module.dim() * used.iter().map(|&i| dims[i]).sum::<usize>() * points.len();
        if total > cap {
            continue;
        }
        let family = g.family(n, &dims, GENERATORS);
        let labels = used.iter().map(|&i| family.reps()[i].label().to_string()).collect();
        return Toy { family, setting: Setting::new(module, labels, points) };
    }
    let family = g.family(n, &[1], GENERATORS);
    Toy { family, setting: Setting::new(FinMod::trivial(n), vec!["r1".into()], vec![vec![Scalar::from_int(0); n]]) }
}

fn word_multiplicativity(g: &mut Gen, c: &Caps, _: usize) -> Instance {
    let t = toy(g, c, c.dimmax.min(6));
    let (x, y) = (g.word(GENERATORS, c.words), g.word(GENERATORS, c.words));
    let data = json!({"setting": setting_data(&t.family, &t.setting), "x": format_word(&x), "y": format_word(&y)});
    let result = (|| {
        let pi = core(assemble_pi(&t.family, &t.setting))?;
        let xy: Word = x.iter().chain(&y).copied().collect();
        ensure(core(pi.eval(&xy))? == core(pi.eval(&x))?.mul(&core(pi.eval(&y))?), "pi(xy) differs from pi(x) pi(y)")?;
        let direct = core(assemble_phi(&t.family, &core(PWCandidate::from_words(&t.family, &[(Scalar::from_int(1), xy.clone())]))?, &t.setting))?;
        ensure(direct == core(pi.eval(&xy))?, "assembled word family differs from the product of letters")
    })();
    Instance::new(data, result)
}

fn ac_reformulation(g: &mut Gen, c: &Caps, _: usize) -> Instance {
    let t = toy(g, c, c.dimmax.min(6));
    let (phi, _) = g.candidate(&t.family, c.words);
    let data = json!({"setting": setting_data(&t.family, &t.setting), "candidate": candidate_data(&phi)});
    let result = (|| {
        let pi = core(assemble_pi(&t.family, &t.setting))?;
        let span = spanned_algebra(&pi);
        let target = core(assemble_phi(&t.family, &phi, &t.setting))?;
        let d = target.rows();
        let perp = span.space.orthogonal_basis();
        let in_double_annihilator = perp.iter().all(|f| dot(f, target.data()) == Scalar::from_int(0));
        let mut satisfies_all = true;
        for (i, f) in perp.iter().enumerate() {
            let psi = Matrix::from_vec(d, d, f.clone()).expect("square functional");
            let tr = core(functional_to_ac(&t.family, &t.setting, &psi))?;
            ensure(core(is_ac_sequence(&t.family, &tr.data))?, "translated functional is not an AC sequence")?;
            if i < 2 {
                // the relation itself, word by word
                for w in &span.words {
                    let word = core(PWCandidate::from_words(&t.family, &[(Scalar::from_int(1), w.clone())]))?;
                    ensure(core(ac_pairing(&t.family, &word, &tr.data))? == Scalar::from_int(0), "a word violates the relation")?;
                }
            }
            let value = core(ac_pairing(&t.family, &phi, &tr.data))?;
            ensure(value == psi.pair(&target), "relation value differs from the functional pairing")?;
            satisfies_all &= value == Scalar::from_int(0);
        }
        ensure(satisfies_all == in_double_annihilator, "AC satisfaction differs from double annihilator membership")?;
        ensure(in_double_annihilator == span.space.contains(target.data()), "double annihilator differs from the span")
    })();
    Instance::new(data, result)
}

fn ac_translations(g: &mut Gen, c: &Caps, _: usize) -> Instance {
    let t = toy(g, c, c.dimmax.min(6));
    let (phi, _) = g.candidate(&t.family, c.words);
    let n = t.family.nvars();
    let data_ac: Vec<ACDatum> = (0..g.size(1, 3))
        .map(|_| {
            let rep = g.pick(t.family.reps()).clone();
            ACDatum {
                label: rep.label().into(),
                psi: g.matrix(rep.dim(), rep.dim()),
                point: g.int_point(n, 2),
                u: g.diffop(n, 2),
            }
        })
        .collect();
    let total: usize = core(t.setting.total_dim(&t.family)).unwrap_or(0);
    let psi = g.matrix(total, total);
    let data = json!({
        "setting": setting_data(&t.family, &t.setting),
        "candidate": candidate_data(&phi),
        "functional": show::matrix(&psi),
        "relations": data_ac.iter().map(|d| json!({
            "label": d.label, "psi": show::matrix(&d.psi), "point": show::point(&d.point), "u": show::diffop(&d.u),
        })).collect::<Vec<_>>(),
    });
    let result = (|| {
        let f = core(ac_to_functional(&t.family, &data_ac))?;
        let target = core(assemble_phi(&t.family, &phi, &f.setting))?;
        ensure(f.psi.pair(&target) == core(ac_pairing(&t.family, &phi, &data_ac))?, "relation to functional changes the value")?;
        let tr = core(functional_to_ac(&t.family, &t.setting, &psi))?;
        let target = core(assemble_phi(&t.family, &phi, &t.setting))?;
        ensure(core(ac_pairing(&t.family, &phi, &tr.data))? == psi.pair(&target), "functional to relation changes the value")
    })();
    Instance::new(data, result)
}

/// Checks the certificates in a report against the assembled matrices.
fn certificates(family: &Family, phi: &PWCandidate, setting: &Setting, r: &PwReport) -> Result<(), String> {
    let pi = core(assemble_pi(family, setting))?;
    let span = spanned_algebra(&pi);
    let target = core(assemble_phi(family, phi, setting))?;
    if let Some(psi) = &r.separating {
        ensure(span.basis.iter().all(|b| psi.pair(b) == Scalar::from_int(0)), "separating functional does not annihilate the span")?;
        ensure(psi.pair(&target) != Scalar::from_int(0), "separating functional does not detect the candidate")?;
    }
    if let Some(coeffs) = &r.combination {
        let d = target.rows();
        let sum = span.basis.iter().zip(coeffs).fold(Matrix::zeros(d, d), |acc, (b, c)| acc.add(&b.scale(c)));
        ensure(sum == target, "word combination does not reproduce the candidate")?;
    }
    sharp_certificate(&span.basis, &target, &r.sharp_witness)
}

/// A member comes with `a` such that `π(a) = φ`; a non-member with an
/// invariant subspace of `V^{×n}` that `φ^{×n}` moves a vector out of.
fn sharp_certificate(span: &[Matrix], target: &Matrix, w: &SharpMembership) -> Result<(), String> {
    let d = target.rows();
    match w {
        SharpMembership::Member { preimage, .. } => {
            let (_, basis) = core(ApproxAlgebra::from_matrices(span, &[Matrix::identity(d)]))?;
            let sum = basis.iter().zip(preimage).fold(Matrix::zeros(d, d), |acc, (b, c)| acc.add(&b.scale(c)));
            ensure(sum == *target, "preimage does not map to the candidate")
        }
        SharpMembership::Escapes { submodule, vector, image, .. } => {
            let blockwise = |m: &Matrix, v: &[Scalar]| -> Vec<Scalar> { v.chunks(d).flat_map(|c| m.apply(c)).collect() };
            ensure(submodule.contains(vector), "escaping vector is outside the submodule")?;
            ensure(!submodule.contains(image), "image stays inside the submodule")?;
            ensure(blockwise(target, vector) == *image, "image is not the candidate applied to the vector")?;
            for b in span {
                for v in submodule.basis() {
                    ensure(submodule.contains(&blockwise(b, v)), "witness subspace is not invariant")?;
                }
            }
            Ok(())
        }
    }
}

fn pw_triple(g: &mut Gen, c: &Caps, _: usize) -> Instance {
    let t = toy(g, c, c.dimmax.min(6));
    let (phi, pure) = g.candidate(&t.family, c.words);
    let data = json!({"setting": setting_data(&t.family, &t.setting), "candidate": candidate_data(&phi)});
    let result = (|| {
        let r = core(pw_membership_triple(&t.family, &phi, &t.setting))?;
        ensure(r.unanimous(), format!("verdicts differ: {} {} {}", r.annihilator, r.algebra, r.sharp))?;
        ensure(!pure || r.sharp, "a combination of words was rejected")?;
        certificates(&t.family, &phi, &t.setting, &r)
    })();
    Instance::new(data, result)
}

fn delorme_conditions(g: &mut Gen, c: &Caps, _: usize) -> Instance {
    let cap = c.dimmax.min(6);
    let n = g.size(1, c.nmax.clamp(1, 2));
    let dims: Vec<usize> = (0..g.size(1, 2)).map(|_| *g.pick(&[1, 2, 2])).collect();
    let most = if 4 * dims[0] <= cap { 2 } else { 1 };
    let etas: Vec<Vector> = (0..g.size(1, most)).map(|_| g.direction(n)).collect();
    let e_dim = 1usize << etas.len();
    let family = g.family(n, &dims, GENERATORS);
    let (phi, _) = g.candidate(&family, c.words);
    let mut labels = vec![family.reps()[0].label().to_string()];
    let mut width = dims[0];
    if dims.len() > 1 && e_dim * (width + dims[1]) <= cap && g.coin(1, 2) {
        labels.push(family.reps()[1].label().into());
        width += dims[1];
    }
    let mut points = vec![g.int_point(n, 2)];
    if e_dim * width * 2 <= cap && g.coin(1, 2) {
        points.push(g.int_point(n, 2));
    }
    let data_d: Vec<DelormeDatum> = labels
        .iter()
        .flat_map(|l| points.iter().map(|p| DelormeDatum { label: l.clone(), point: p.clone(), etas: etas.clone() }))
        .collect();
    let data = json!({
        "family": serde_json::to_value(FamilyFile::from_family(&family)).expect("plain data"),
        "candidate": candidate_data(&phi),
        "labels": labels,
        "points": points.iter().map(|p| show::point(p)).collect::<Vec<_>>(),
        "etas": etas.iter().map(|e| show::point(e.coords())).collect::<Vec<_>>(),
    });
    let result = (|| {
        let rep = core(delorme_condition_check(&family, &phi, &data_d))?;
        let setting = Setting::new(core(delorme_module(&etas))?, labels.clone(), points.clone());
        let pw = core(pw_membership_triple(&family, &phi, &setting))?;
        ensure(rep.dim == e_dim * width * points.len(), "wrong total dimension")?;
        ensure(rep.graph_consistent, "graph test and direct commutation disagree")?;
        ensure(rep.condition_a == pw.sharp, "condition (a) differs from End^# membership over E_eta")?;
        ensure(!rep.condition_a || rep.condition_b, "condition (a) holds but (b) fails")?;
        ensure(pw.unanimous(), "membership verdicts differ")
    })();
    Instance::new(data, result)
}

const FAMILY: &str = include_str!("../../fixtures/reducible_family.json");
const ESCAPING: &str = include_str!("../../fixtures/escaping_candidate.json");
const WORDS: &str = include_str!("../../fixtures/word_candidate.json");

/// `(module, points)` for the fixture runs.
const FIXTURE_CASES: [(&str, &str); 5] =
    [("trivial", "0"), ("trivial", "1"), ("trivial", "0;2"), ("dual:1", "0"), ("dual:1", "3")];

fn pw_fixtures(_: &mut Gen, _: &Caps, i: usize) -> Instance {
    let (spec, pts) = FIXTURE_CASES[i / 2];
    let (name, text, expected) = if i % 2 == 0 { ("escaping", ESCAPING, false) } else { ("words", WORDS, true) };
    let data = json!({"candidate": name, "module": spec, "points": pts});
    let result = (|| {
        let family = serde_json::from_str::<FamilyFile>(FAMILY).map_err(|e| e.to_string())?.to_family().map_err(|e| e.to_string())?;
        let phi = serde_json::from_str::<CandidateFile>(text)
            .map_err(|e| e.to_string())?
            .to_candidate(&family)
            .map_err(|e| e.to_string())?;
        let module = module_spec(spec, 1).map_err(|e| e.to_string())?;
        let points = pts.split(';').map(parse_point).collect::<Result<Vec<_>, _>>().map_err(|e| e.to_string())?;
        let setting = Setting::new(module, vec!["a".into()], points);
        let r = core(pw_membership_triple(&family, &phi, &setting))?;
        ensure(r.unanimous(), "verdicts differ")?;
        ensure(r.sharp == expected, format!("expected membership {expected}"))?;
        certificates(&family, &phi, &setting, &r)
    })();
    Instance::new(data, result)
}

fn subquotient_stability(g: &mut Gen, c: &Caps, _: usize) -> Instance {
    let t = toy(g, c, c.dimmax.min(3));
    let (phi, _) = g.candidate(&t.family, c.words);
    let n = t.family.nvars();
    let small = t.setting.clone();
    let big = match g.below(3) {
        0 => {
            let mut s = small.clone();
            s.points.push(g.int_point(n, 2));
            s
        }
        1 => {
            let extra = g.module(n, 1, 1);
            let mut s = small.clone();
            s.module = core(direct_sum(&small.module, &extra)).expect("same arity");
            s
        }
        _ => {
            let mut s = small.clone();
            if let Some(r) = t.family.reps().iter().find(|r| !s.labels.iter().any(|l| l == r.label())) {
                s.labels.push(r.label().into());
            } else {
                s.points.push(g.int_point(n, 2));
            }
            s
        }
    };
    let data = json!({
        "family": serde_json::to_value(FamilyFile::from_family(&t.family)).expect("plain data"),
        "candidate": candidate_data(&phi),
        "small": setting_data(&t.family, &small),
        "big": setting_data(&t.family, &big),
    });
    let result = (|| {
        let rs = core(pw_membership_triple(&t.family, &phi, &small))?;
        let rb = core(pw_membership_triple(&t.family, &phi, &big))?;
        ensure(rs.unanimous() && rb.unanimous(), "verdicts differ")?;
        ensure(!rb.sharp || rs.sharp, "member of the enlarged setting fails for the smaller one")
    })();
    Instance::new(data, result)
}
