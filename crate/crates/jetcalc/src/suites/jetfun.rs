use jetcalc_core::jetfun::{
    apply_functional, delorme_module, diffop_to_module, exponential_jet_sides, functional_to_diffop,
    functional_to_diffop_direct, iterated_delorme, jet, jet_family, jet_ideal, kappa_push, kappa_sequence,
    kernel_alpha_bar, pair_quotient, subquotient_lambdas,
};
use jetcalc_core::linalg::unit_vector;
use jetcalc_core::localmod::{annihilator_dual, dual_number_iso, quotient_module, submodule_generated, tensor, FinMod};
use jetcalc_core::poly::pairing;
use jetcalc_core::{DiffOp, ExpPoly, ExpScalar, Matrix, Monomial, Polynomial, Scalar, Vector};
use serde_json::json;

use super::{core, ensure, show, Caps, Check, Count, Instance};
use crate::random::Gen;

pub fn checks() -> Vec<Check> {
    vec![
        Check {
            id: "jetfun.homomorphism",
            property: "f -> f^(E) is multiplicative: (fg)^(E) = f^(E) g^(E)",
            count: Count::Random(500),
            run: homomorphism,
        },
        Check {
            id: "jetfun.translation_equivariance",
            property: "jets commute with translation: (T_m f)^(E) = T_m f^(E)",
            count: Count::Random(50),
            run: translation_equivariance,
        },
        Check {
            id: "jetfun.iterated_jets",
            property: "successive jets over E_1, ..., E_n equal the jet over E_1 ⊗ ... ⊗ E_n",
            count: Count::Random(100),
            run: iterated_jets,
        },
        Check {
            id: "jetfun.naturality_exactness",
            property: "module maps intertwine jets and short exact sequences stay exact",
            count: Count::Random(50),
            run: naturality_exactness,
        },
        Check {
            id: "jetfun.delorme_kappa",
            property: "iterated Delorme derivatives conjugated by kappa equal the jet over E_eta",
            count: Count::Random(100),
            run: delorme_kappa,
        },
        Check {
            id: "jetfun.functional_to_operator",
            property: "a functional eta on End(E) gives u with eta(f^(E)) = d_u f on monomials up to degree k+1",
            count: Count::Random(50),
            run: functional_to_operator,
        },
        Check {
            id: "jetfun.operator_to_functional",
            property: "operators u give (E, eta_u) with eta_u(f^(E)) = d_u f, and the operator is recovered",
            count: Count::Random(20),
            run: operator_to_functional,
        },
        Check {
            id: "jetfun.kernel_characterization",
            property: "the kernel of the reduced coproduct equals its derivative characterization",
            count: Count::Exhaustive(|c| c.nmax.min(2) * 3 * 4 * 2),
            run: kernel_characterization,
        },
        Check {
            id: "jetfun.subquotient_construction",
            property: "the directions built from I put the reduced coproduct kernel inside I",
            count: Count::Random(50),
            run: subquotient_construction,
        },
        Check {
            id: "jetfun.family_multiplicativity",
            property: "jets of matrix families are multiplicative: (TS)^(E) = T^(E) S^(E)",
            count: Count::Random(100),
            run: family_multiplicativity,
        },
        Check {
            id: "jetfun.exponential_example",
            property: "pairings and jets of e^xi carry the formal unit e^(xi(m))",
            count: Count::Random(50),
            run: exponential_example,
        },
    ]
}

fn two_vars(g: &mut Gen, c: &Caps) -> usize {
    g.size(1, c.nmax.clamp(1, 2))
}

fn homomorphism(g: &mut Gen, c: &Caps, _: usize) -> Instance {
    let n = two_vars(g, c);
    let (f, h) = (g.exppoly(n, 4), g.exppoly(n, 4));
    let e = g.module(n, c.dimmax.min(4), c.kmax.max(1));
    let data = json!({"f": show::exppoly(&f), "g": show::exppoly(&h), "module": show::module(&e)});
    let result = (|| {
        let lhs = core(jet(&(f.clone() * h.clone()), &e))?;
        let rhs = core(core(jet(&f, &e))?.mul(&core(jet(&h, &e))?))?;
        ensure(lhs == rhs, "(fg)^(E) differs from f^(E) g^(E)")
    })();
    Instance::new(data, result)
}

fn translation_equivariance(g: &mut Gen, c: &Caps, _: usize) -> Instance {
    let n = two_vars(g, c);
    let f = g.exppoly(n, 3);
    let e = g.module(n, c.dimmax.min(4), c.kmax.max(1));
    let mu = Vector::new(g.point(n));
    let data = json!({"f": show::exppoly(&f), "module": show::module(&e), "mu": show::point(mu.coords())});
    let result = (|| {
        let lhs = core(jet(&core(f.translate(&mu))?, &e))?;
        let rhs = core(core(jet(&f, &e))?.translate(&mu))?;
        ensure(lhs == rhs, "jet does not commute with translation")
    })();
    Instance::new(data, result)
}

fn iterated_jets(g: &mut Gen, c: &Caps, _: usize) -> Instance {
    let n = two_vars(g, c);
    let count = g.size(2, 3);
    let f = g.exppoly(n, 3);
    let mods: Vec<FinMod> = (0..count).map(|_| g.module(n, c.dimmax.min(3), 2)).collect();
    let data = json!({"f": show::exppoly(&f), "modules": mods.iter().map(show::module).collect::<Vec<_>>()});
    let result = (|| {
        let last = mods.last().expect("at least two modules");
        let mut nested = core(jet(&f, last))?;
        for e in mods[..count - 1].iter().rev() {
            nested = core(jet_family(&nested, e))?;
        }
        let whole = core(tensor(&mods))?;
        ensure(whole.k() == mods.iter().map(FinMod::k).sum::<u32>(), "tensor k is not additive")?;
        ensure(nested == core(jet(&f, &whole))?, "successive jets differ from the jet over the tensor product")
    })();
    Instance::new(data, result)
}

fn naturality_exactness(g: &mut Gen, c: &Caps, _: usize) -> Instance {
    let n = two_vars(g, c);
    let f = g.exppoly(n, 3);
    let e = g.module(n, c.dimmax.min(4), 2);
    let pick = g.below(e.dim());
    let mu = g.point(n);
    let lambda = g.direction(n);
    let data = json!({
        "f": show::exppoly(&f), "module": show::module(&e), "vector": pick,
        "mu": show::point(&mu), "lambda": show::point(lambda.coords()),
    });
    let result = (|| {
        let at = |m: &FinMod| core(core(jet(&f, m))?.eval(&mu));
        let lift = |m: &Matrix| m.lift::<ExpScalar>();
        let sub = core(submodule_generated(&e, &[unit_vector(e.dim(), pick)]))?;
        let (q, proj) = core(quotient_module(&e, &sub.space))?;
        let inc = lift(&sub.inclusion.matrix);
        ensure(at(&e)?.mul(&inc) == inc.mul(&at(&sub.module)?), "inclusion does not intertwine jets")?;
        let pr = lift(&proj.matrix);
        ensure(pr.mul(&at(&e)?) == at(&q)?.mul(&pr), "projection does not intertwine jets")?;
        let iso = core(dual_number_iso(&lambda))?;
        let t = lift(&iso.matrix);
        ensure(t.mul(&at(&iso.source)?) == at(&iso.target)?.mul(&t), "isomorphism does not intertwine jets")?;
        let (s, p) = (&sub.inclusion.matrix, &proj.matrix);
        ensure(p.mul(s).is_zero(), "composite of the sequence is nonzero")?;
        ensure(s.rank() == sub.module.dim() && p.rank() == q.dim(), "sequence is not exact at the ends")?;
        ensure(sub.module.dim() + q.dim() == e.dim(), "sequence is not exact in the middle")
    })();
    Instance::new(data, result)
}

fn delorme_kappa(g: &mut Gen, c: &Caps, _: usize) -> Instance {
    let n = two_vars(g, c);
    let r = g.size(1, 2);
    let phi = g.mat_family(n, r, r, 3);
    let etas: Vec<Vector> = (0..g.size(1, 2)).map(|_| g.direction(n)).collect();
    let data = json!({
        "phi": show::family(&phi),
        "etas": etas.iter().map(|e| show::point(e.coords())).collect::<Vec<_>>(),
    });
    let result = (|| {
        let lhs = core(kappa_push(&core(kappa_sequence(&etas))?, &core(iterated_delorme(&phi, &etas))?, r))?;
        let rhs = core(jet_family(&phi, &core(delorme_module(&etas))?))?;
        ensure(lhs == rhs, "kappa-conjugated Delorme derivative differs from the jet over E_eta")
    })();
    Instance::new(data, result)
}

fn monomials_through(n: usize, k: u32) -> Vec<ExpPoly> {
    Monomial::up_to_degree(n, k).into_iter().map(|m| ExpPoly::from_poly(&Polynomial::term(m, Scalar::from_int(1)))).collect()
}

fn functional_to_operator(g: &mut Gen, c: &Caps, _: usize) -> Instance {
    let n = two_vars(g, c);
    let e = g.module(n, c.dimmax.min(4), c.kmax.max(1));
    let eta = g.matrix(e.dim(), e.dim());
    let data = json!({"module": show::module(&e), "eta": show::matrix(&eta)});
    let result = (|| {
        let u = core(functional_to_diffop(&e, &eta))?;
        ensure(u == functional_to_diffop_direct(&e, &eta), "annihilator and closed-form operators differ")?;
        for f in monomials_through(n, e.k() + 1) {
            let lhs = core(apply_functional(&eta, &core(jet(&f, &e))?))?;
            ensure(lhs == core(f.diff(&u))?, "eta(f^(E)) differs from d_u f")?;
        }
        Ok(())
    })();
    Instance::new(data, result)
}

fn operator_to_functional(g: &mut Gen, c: &Caps, _: usize) -> Instance {
    let n = two_vars(g, c);
    let deg = c.kmax.clamp(1, 2);
    let ops: Vec<DiffOp> = (0..g.size(1, 3)).map(|_| g.diffop(n, deg)).collect();
    let data = json!({"operators": ops.iter().map(show::diffop).collect::<Vec<_>>()});
    let result = (|| {
        let (e, etas) = core(diffop_to_module(n, &ops))?;
        for (u, eta) in ops.iter().zip(&etas) {
            for f in monomials_through(n, e.k() + 1) {
                let lhs = core(apply_functional(eta, &core(jet(&f, &e))?))?;
                ensure(lhs == core(f.diff(u))?, "eta_u(f^(E)) differs from d_u f")?;
            }
            ensure(core(functional_to_diffop(&e, eta))? == *u, "operator not recovered from its functional")?;
        }
        Ok(())
    })();
    Instance::new(data, result)
}

fn kernel_characterization(g: &mut Gen, _: &Caps, i: usize) -> Instance {
    let nv = i / 24 + 1;
    let n = (i / 8) % 3 + 1;
    let d = ((i / 2) % 4 + 1) as u32;
    let lambdas: Vec<Vector> = (0..n).map(|_| g.direction(nv)).collect();
    let data = json!({
        "nvars": nv, "degree": d,
        "lambdas": lambdas.iter().map(|l| show::point(l.coords())).collect::<Vec<_>>(),
    });
    let result = (|| {
        let k = core(kernel_alpha_bar(&lambdas, d))?;
        ensure(k.agree(), "direct kernel differs from the characterization")?;
        ensure(k.truncated == ((d as usize) < n + 1), "truncation flag is wrong")?;
        for (c, m) in k.monomials.iter().enumerate() {
            if m.degree() as usize > n {
                ensure(k.direct.contains(&unit_vector(k.monomials.len(), c)), format!("{m:?} is not in the kernel"))?;
            }
        }
        Ok(())
    })();
    Instance::new(data, result)
}

fn subquotient_construction(g: &mut Gen, c: &Caps, _: usize) -> Instance {
    let n = two_vars(g, c);
    let k = g.int(1, i64::from(c.kmax.clamp(1, 2))) as u32;
    let ideal = g.ideal(n, k);
    let data = json!({"generators": ideal.generators().iter().map(show::poly).collect::<Vec<_>>(), "k": k});
    let result = (|| {
        let w = core(subquotient_lambdas(&ideal))?;
        ensure(w.lambdas.len() == k as usize * n, "wrong number of directions")?;
        ensure(w.kernel.iter().all(|p| ideal.contains(p)), "a kernel element lies outside I")?;
        ensure(w.contained, "containment flag is false")
    })();
    Instance::new(data, result)
}

fn family_multiplicativity(g: &mut Gen, c: &Caps, _: usize) -> Instance {
    let n = two_vars(g, c);
    let (r, s, t) = (g.size(1, 2), g.size(1, 2), g.size(1, 2));
    let (a, b) = (g.mat_family(n, r, s, 2), g.mat_family(n, s, t, 2));
    let e = g.module(n, c.dimmax.min(3), 2);
    let data = json!({"t": show::family(&a), "s": show::family(&b), "module": show::module(&e)});
    let result = (|| {
        let lhs = core(jet_family(&core(a.mul(&b))?, &e))?;
        let rhs = core(core(jet_family(&a, &e))?.mul(&core(jet_family(&b, &e))?))?;
        ensure(lhs == rhs, "(TS)^(E) differs from T^(E) S^(E)")
    })();
    Instance::new(data, result)
}

fn exponential_example(g: &mut Gen, c: &Caps, _: usize) -> Instance {
    let n = two_vars(g, c);
    let xi = g.covector(n);
    let k = g.int(1, i64::from(c.kmax.clamp(1, 2))) as u32;
    let ideal = g.ideal(n, k);
    let mu = Vector::new(g.point(n));
    let extra = g.diffop(n, k);
    let data = json!({
        "xi": show::point(xi.coords()), "k": k, "mu": show::point(mu.coords()),
        "generators": ideal.generators().iter().map(show::poly).collect::<Vec<_>>(),
        "u": show::diffop(&extra),
    });
    let result = (|| {
        let f = ExpPoly::exp(&xi);
        let shifted = core(f.translate(&mu))?;
        let class = core(jet_ideal(&f, &ideal, &mu))?;
        let duals = annihilator_dual(&ideal);
        for u in duals.iter().chain(std::iter::once(&extra)) {
            let expected = ExpScalar::term(core(u.eval_at(&xi))?, xi.pair(&mu));
            ensure(core(pairing(&shifted, u))? == expected, "pairing of the translate is not u(xi) e^(xi(m))")?;
        }
        for u in &duals {
            let expected = ExpScalar::term(core(u.eval_at(&xi))?, xi.pair(&mu));
            ensure(pair_quotient(&ideal, &class, u) == expected, "jet class pairs wrongly with the annihilator")?;
        }
        let (lhs, rhs) = core(exponential_jet_sides(&xi, &ideal, &mu))?;
        ensure(lhs == rhs && lhs == class, "J_I e^xi(m) differs from e^(xi(m)) pr_I(taylor e^xi)")
    })();
    Instance::new(data, result)
}
