use jetcalc_core::approxalg::{
    double_commutant_check, end_sharp_membership, end_zero, preserves_generated, ApproxAlgebra, ApproxModule,
};
use jetcalc_core::family::{
    assemble_pi, pw_membership_triple, Family, Letter, PWCandidate, RepFamily, Setting, Word,
};
use jetcalc_core::jetfun::{jet, jet_family, MatPolyFamily};
use jetcalc_core::linalg::unit_vector;
use jetcalc_core::localmod::{
    annihilator, cyclic_quotient, direct_sum, dual_number_module, quotient_module, submodule_generated, tensor,
    tensor_unit_witness, CofiniteIdeal, FinMod,
};
use jetcalc_core::poly::{coproduct, pairing};
use jetcalc_core::scalar::{ExpScalar, Scalar};
use jetcalc_core::{Covector, DiffOp, ExpPoly, Matrix, Monomial, Polynomial, Vector};
use proptest::prelude::*;

fn scalar() -> impl Strategy<Value = Scalar> {
    prop_oneof![
        4 => (-3i64..=3, 1i64..=3).prop_map(|(n, d)| Scalar::ratio(n, d)),
        1 => (-2i64..=2, -2i64..=2).prop_map(|(a, b)| Scalar::complex((a, 1), (b, 2))),
    ]
}

fn point(n: usize) -> impl Strategy<Value = Vec<Scalar>> {
    prop::collection::vec(scalar(), n)
}

fn polynomial(n: usize, deg: u32) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((prop::collection::vec(0..=deg, n), scalar()), 0..5).prop_map(move |terms| {
        Polynomial::from_terms(
            n,
            terms
                .into_iter()
                .filter(|(e, _)| e.iter().sum::<u32>() <= deg)
                .map(|(e, c)| (Monomial::new(e), c)),
        )
    })
}

fn exppoly(n: usize) -> impl Strategy<Value = ExpPoly> {
    (polynomial(n, 3), polynomial(n, 2), prop::collection::vec(-2i64..=2, n)).prop_map(move |(p, q, xi)| {
        ExpPoly::from_poly(&p) + ExpPoly::exp(&Covector::from_ints(&xi)) * ExpPoly::from_poly(&q)
    })
}

fn diffop(n: usize) -> impl Strategy<Value = DiffOp> {
    polynomial(n, 2).prop_map(DiffOp::new)
}

/// `O₀/I` with `I ⊇ M^(k+1)` plus a few extra generators without constant term.
fn cyclic_module(n: usize) -> impl Strategy<Value = FinMod> {
    (1u32..=2, prop::collection::vec(polynomial(n, 2), 0..3)).prop_map(move |(k, extra)| {
        let mut gens: Vec<Polynomial> = Monomial::of_degree(n, k + 1)
            .into_iter()
            .map(|m| Polynomial::term(m, Scalar::from_int(1)))
            .collect();
        for p in extra {
            let c = p.coeff(&Monomial::one(n));
            gens.push(p - Polynomial::constant(n, c));
        }
        cyclic_quotient(&CofiniteIdeal::new(n, k, gens).unwrap()).module
    })
}

fn small_module(n: usize) -> impl Strategy<Value = FinMod> {
    prop_oneof![
        cyclic_module(n).prop_filter("dim <= 4", |e| e.dim() <= 4),
        prop::collection::vec(-2i64..=2, n)
            .prop_filter("nonzero", |v| v.iter().any(|&c| c != 0))
            .prop_map(|v| dual_number_module(&Vector::from_ints(&v)).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn translation_is_multiplicative(p in polynomial(2, 3), q in polynomial(2, 3), mu in point(2)) {
        prop_assert_eq!((p.clone() * q.clone()).translate(&mu), p.translate(&mu) * q.translate(&mu));
    }

    #[test]
    fn operator_product_is_composition(f in exppoly(2), u in diffop(2), v in diffop(2)) {
        let lhs = f.diff(&(u.clone() * v.clone())).unwrap();
        let rhs = f.diff(&v).unwrap().diff(&u).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn coproduct_evaluates_to_sum(p in polynomial(2, 3), mu in point(2), nu in point(2)) {
        let c = coproduct(&p, 2).unwrap();
        let joined: Vec<Scalar> = mu.iter().chain(&nu).cloned().collect();
        let sum: Vec<Scalar> = mu.iter().zip(&nu).map(|(a, b)| a + b).collect();
        prop_assert_eq!(c.eval(&joined), p.eval(&sum));
    }

    #[test]
    fn leibniz_for_exponential_polynomials(f in exppoly(2), g in exppoly(2), j in 0usize..2) {
        let lhs = (f.clone() * g.clone()).partial(j);
        let rhs = f.partial(j) * g.clone() + f * g.partial(j);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn annihilator_recovers_cyclic_ideal(e in cyclic_module(2)) {
        let ideal = annihilator(&e);
        let back = cyclic_quotient(&ideal);
        prop_assert_eq!(back.module.dim(), e.dim());
        prop_assert!(annihilator(&back.module).same_as(&ideal));
    }

    #[test]
    fn tensor_unit_and_associativity(a in small_module(2), b in small_module(2), c in small_module(2)) {
        prop_assert!(tensor_unit_witness(&a).unwrap().is_isomorphism());
        let left = tensor(&[tensor(&[a.clone(), b.clone()]).unwrap(), c.clone()]).unwrap();
        let right = tensor(&[a.clone(), tensor(&[b, c]).unwrap()]).unwrap();
        prop_assert_eq!(left.action(), right.action());
    }

    #[test]
    fn jet_is_multiplicative(f in exppoly(2), g in exppoly(2), e in small_module(2)) {
        let lhs = jet(&(f.clone() * g.clone()), &e).unwrap();
        let rhs = jet(&f, &e).unwrap().mul(&jet(&g, &e).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn jet_commutes_with_translation(f in exppoly(2), e in small_module(2), mu in prop::collection::vec(-2i64..=2, 2)) {
        let mu = Vector::from_ints(&mu);
        let lhs = jet(&f.translate(&mu).unwrap(), &e).unwrap();
        let rhs = jet(&f, &e).unwrap().translate(&mu).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn jets_compose_over_tensor_products(f in exppoly(2), a in small_module(2), b in small_module(2)) {
        let nested = jet_family(&jet(&f, &b).unwrap(), &a).unwrap();
        let direct = jet(&f, &tensor(&[a, b]).unwrap()).unwrap();
        prop_assert_eq!(nested, direct);
    }

    #[test]
    fn module_maps_intertwine_jets(f in exppoly(2), e in small_module(2), mu in point(2), pick in 0usize..4) {
        // submodule generated by one basis vector and the quotient by it
        let v = unit_vector(e.dim(), pick % e.dim());
        let sub = submodule_generated(&e, &[v]).unwrap();
        let (q, proj) = quotient_module(&e, &sub.space).unwrap();
        let at = |m: &FinMod| jet(&f, m).unwrap().eval(&mu).unwrap();
        let lift = |m: &Matrix| m.lift::<ExpScalar>();
        let inc = lift(&sub.inclusion.matrix);
        prop_assert_eq!(at(&e).mul(&inc), inc.mul(&at(&sub.module)));
        let pr = lift(&proj.matrix);
        prop_assert_eq!(pr.mul(&at(&e)), at(&q).mul(&pr));
        // exactness of 0 → S → E → E/S → 0
        let s = sub.inclusion.matrix.clone();
        let p = proj.matrix.clone();
        prop_assert!(p.mul(&s).is_zero());
        prop_assert_eq!(s.rank(), sub.module.dim());
        prop_assert_eq!(p.rank(), q.dim());
        prop_assert_eq!(sub.module.dim() + q.dim(), e.dim());
    }

    #[test]
    fn direct_sums_give_block_jets(f in exppoly(1), a in small_module(1), b in small_module(1)) {
        let sum = jet(&f, &direct_sum(&a, &b).unwrap()).unwrap();
        let blocks = MatPolyFamily::block_diag(1, &[jet(&f, &a).unwrap(), jet(&f, &b).unwrap()]).unwrap();
        prop_assert_eq!(sum, blocks);
    }
}

#[test]
fn taylor_monomials_are_dual_to_scaled_operators() {
    for n in 1..=3 {
        for k in 0..=3 {
            let basis = Monomial::up_to_degree(n, k);
            for beta in &basis {
                for gamma in &basis {
                    let u = DiffOp::monomial(gamma.clone()).scale(&gamma.factorial().inv().unwrap());
                    let f = ExpPoly::from_poly(&Polynomial::term(beta.clone(), Scalar::from_int(1)));
                    let expected = Scalar::from_int(i64::from(beta == gamma));
                    assert_eq!(pairing(&f, &u).unwrap(), ExpScalar::from(expected));
                }
            }
        }
    }
}

/// `A = ⊕ P_j X P_j` style algebra: nested coordinate projections conjugated by `s`.
fn nested_module(sizes: &[usize], gens: &[Matrix], s: &Matrix) -> Option<ApproxModule> {
    let d = *sizes.last()?;
    let s_inv = s.inverse()?;
    let proj = |m: usize| Matrix::from_fn(d, d, |r, c| Scalar::from_int(i64::from(r == c && r < m)));
    let conj = |m: &Matrix| s.mul(m).mul(&s_inv);
    let chain: Vec<Matrix> = sizes.iter().map(|&m| conj(&proj(m))).collect();
    let mut spanning: Vec<Matrix> = chain.clone();
    for (i, g) in gens.iter().enumerate() {
        let p = &chain[i % chain.len()];
        spanning.push(p.mul(&conj(g)).mul(p));
    }
    let closed = jetcalc_core::approxalg::algebra_closure(&spanning);
    let (alg, basis) = ApproxAlgebra::from_matrices(&closed, &chain).ok()?;
    ApproxModule::new(alg, d, basis).ok()
}

fn int_matrix(d: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(-1i64..=1, d * d)
        .prop_map(move |v| Matrix::from_vec(d, d, v.into_iter().map(Scalar::from_int).collect()).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 32, ..ProptestConfig::default() })]

    #[test]
    fn double_commutant_on_nested_chains(
        d in 2usize..=4,
        cut in 1usize..=3,
        gens in prop::collection::vec(int_matrix(4), 1..3),
        s in int_matrix(4),
    ) {
        let gens: Vec<Matrix> = gens.iter().map(|g| g.block(0, 0, d, d)).collect();
        let s = s.block(0, 0, d, d).add(&Matrix::identity(d));
        let sizes = if cut < d { vec![cut, d] } else { vec![d] };
        let Some(m) = nested_module(&sizes, &gens, &s) else { return Ok(()); };
        let report = double_commutant_check(&m).unwrap();
        prop_assert!(report.equal());
        prop_assert!(report.image_in_sharp);
        prop_assert!(end_zero(&m).agree());
        for j in 0..sizes.len() {
            let a = m.alpha(j);
            prop_assert_eq!(a.mul(&a), a.clone());
            prop_assert!(m.splits_at(j));
        }
        // enlarging the tuple never turns a member into a non-member
        for b in m.action() {
            if end_sharp_membership(&m, b).unwrap().is_member() {
                let mut tuple: Vec<Vec<Scalar>> = m.corner_space(sizes.len() - 1).basis().to_vec();
                tuple.push(vec![Scalar::from_int(1); d]);
                prop_assert!(preserves_generated(&m, b, &tuple));
            }
        }
    }
}

fn unipotent_family() -> Family {
    let p = |s: &str| jetcalc_core::poly::text::parse_polynomial(s, 1).unwrap();
    let g = |e: [&str; 4]| MatPolyFamily::from_polynomials(1, 2, 2, e.iter().map(|s| p(s)).collect()).unwrap();
    let a = RepFamily::new("a", 1, 2, vec![g(["1", "x1", "0", "1"]), g(["1", "0", "x1+1", "1"])]).unwrap();
    let b = RepFamily::new("b", 1, 2, vec![g(["1", "x1^2", "0", "1"]), g(["2", "0", "0", "1/2"])]).unwrap();
    Family::new(1, vec![a, b]).unwrap()
}

fn word() -> impl Strategy<Value = Word> {
    prop::collection::vec((0usize..2, any::<bool>()).prop_map(|(g, i)| Letter::new(g, i)), 0..=6)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 32, ..ProptestConfig::default() })]

    #[test]
    fn assembled_representation_is_multiplicative(x in word(), y in word(), lam in -2i64..=2) {
        let f = unipotent_family();
        let e = dual_number_module(&Vector::from_ints(&[1])).unwrap();
        let setting = Setting::new(e, vec!["a".into(), "b".into()], vec![vec![Scalar::from_int(lam)]]);
        let pi = assemble_pi(&f, &setting).unwrap();
        let xy: Word = x.iter().chain(&y).copied().collect();
        prop_assert_eq!(pi.eval(&xy).unwrap(), pi.eval(&x).unwrap().mul(&pi.eval(&y).unwrap()));
    }

    #[test]
    fn membership_is_stable_under_shrinking(x in word(), c in -2i64..=2, lam in -2i64..=2) {
        let f = unipotent_family();
        // a word candidate plus a multiple of a fixed non-word perturbation in block "b"
        let mut phi = PWCandidate::from_words(&f, &[(Scalar::from_int(1), x)]).unwrap();
        let mut comps = phi.components().clone();
        let bump = MatPolyFamily::constant(1, &Matrix::from_rows(vec![
            vec![Scalar::from_int(0), Scalar::from_int(0)],
            vec![Scalar::from_int(c), Scalar::from_int(0)],
        ]).unwrap());
        let cur = comps.get("b").unwrap().add(&bump).unwrap();
        comps.insert("b".into(), cur);
        phi = PWCandidate::new(1, comps).unwrap();
        let lam = vec![Scalar::from_int(lam)];
        let dual = dual_number_module(&Vector::from_ints(&[1])).unwrap();
        let small = Setting::new(FinMod::trivial(1), vec!["a".into()], vec![lam.clone()]);
        let rs = pw_membership_triple(&f, &phi, &small).unwrap();
        prop_assert!(rs.unanimous());
        let enlargements = [
            Setting::new(dual, vec!["a".into()], vec![lam.clone()]),
            Setting::new(FinMod::trivial(1), vec!["a".into(), "b".into()], vec![lam.clone()]),
            Setting::new(FinMod::trivial(1), vec!["a".into()], vec![lam, vec![Scalar::from_int(3)]]),
        ];
        for big in &enlargements {
            let rb = pw_membership_triple(&f, &phi, big).unwrap();
            prop_assert!(rb.unanimous());
            if rb.sharp {
                prop_assert!(rs.sharp);
            }
        }
    }
}

#[test]
fn word_candidates_are_members() {
    let f = unipotent_family();
    let e = tensor(&[dual_number_module(&Vector::from_ints(&[1])).unwrap(), FinMod::trivial(1)]).unwrap();
    let setting = Setting::new(e, vec!["a".into(), "b".into()], vec![vec![Scalar::from_int(1)]]);
    let phi = PWCandidate::from_words(
        &f,
        &[
            (Scalar::from_int(2), vec![Letter::new(0, false), Letter::new(1, true)]),
            (Scalar::ratio(-1, 3), vec![Letter::new(1, false)]),
        ],
    )
    .unwrap();
    let r = pw_membership_triple(&f, &phi, &setting).unwrap();
    assert!(r.unanimous() && r.annihilator && r.algebra && r.sharp);
}
