use jetcalc_core::poly::text::{format_diffop, format_exppoly, parse_diffop, parse_exppoly};
use jetcalc_core::poly::{coproduct, pairing};
use jetcalc_core::{DiffOp, ExpPoly, ExpScalar, Monomial, Polynomial, Scalar};
use serde_json::json;

use super::{core, ensure, show, Caps, Check, Count, Instance};
use crate::random::Gen;

pub fn checks() -> Vec<Check> {
    vec![
        Check {
            id: "poly.translation_homomorphism",
            property: "translation by a point is an algebra homomorphism of polynomials",
            count: Count::Random(50),
            run: translation_homomorphism,
        },
        Check {
            id: "poly.operator_composition",
            property: "the operator of a product uv is the composition of the operators of u and v",
            count: Count::Random(50),
            run: operator_composition,
        },
        Check {
            id: "poly.taylor_duality",
            property: "monomials x^b pair with X^c/c! to the identity matrix",
            count: Count::Exhaustive(|c| c.nmax.min(3) * (c.kmax.min(3) as usize + 1)),
            run: taylor_duality,
        },
        Check {
            id: "poly.coproduct_evaluation",
            property: "the coproduct of p evaluated at (m1, ..., mn) is p(m1 + ... + mn)",
            count: Count::Random(50),
            run: coproduct_evaluation,
        },
        Check {
            id: "poly.leibniz",
            property: "partial derivatives of exponential polynomials obey the Leibniz rule",
            count: Count::Random(50),
            run: leibniz,
        },
        Check {
            id: "poly.text_round_trip",
            property: "printing and parsing exponential polynomials and operators are inverse",
            count: Count::Random(50),
            run: text_round_trip,
        },
    ]
}

fn nvars(g: &mut Gen, c: &Caps) -> usize {
    g.size(1, c.nmax.clamp(1, 3))
}

fn translation_homomorphism(g: &mut Gen, c: &Caps, _: usize) -> Instance {
    let n = nvars(g, c);
    let (p, q, mu) = (g.polynomial(n, 3, 4), g.polynomial(n, 3, 4), g.point(n));
    let data = json!({"p": show::poly(&p), "q": show::poly(&q), "mu": show::point(&mu)});
    let lhs = (p.clone() * q.clone()).translate(&mu);
    let rhs = p.translate(&mu) * q.translate(&mu);
    Instance::new(data, ensure(lhs == rhs, "T(pq) differs from T(p)T(q)"))
}

fn operator_composition(g: &mut Gen, c: &Caps, _: usize) -> Instance {
    let n = nvars(g, c);
    let (f, u, v) = (g.exppoly(n, 3), g.diffop(n, 2), g.diffop(n, 2));
    let data = json!({"f": show::exppoly(&f), "u": show::diffop(&u), "v": show::diffop(&v)});
    let result = (|| {
        let lhs = core(f.diff(&(u.clone() * v.clone())))?;
        let rhs = core(core(f.diff(&v))?.diff(&u))?;
        ensure(lhs == rhs, "d_(uv) f differs from d_u d_v f")
    })();
    Instance::new(data, result)
}

fn taylor_duality(_: &mut Gen, c: &Caps, i: usize) -> Instance {
    let ks = c.kmax.min(3) as usize + 1;
    let (n, k) = (i / ks + 1, (i % ks) as u32);
    let data = json!({"nvars": n, "k": k});
    let basis = Monomial::up_to_degree(n, k);
    let result = (|| {
        for beta in &basis {
            let f = ExpPoly::from_poly(&Polynomial::term(beta.clone(), Scalar::from_int(1)));
            for gamma in &basis {
                let inv = gamma.factorial().inv().expect("nonzero factorial");
                let u = DiffOp::monomial(gamma.clone()).scale(&inv);
                let expected = ExpScalar::from(Scalar::from_int(i64::from(beta == gamma)));
                ensure(core(pairing(&f, &u))? == expected, format!("pairing of {beta:?} with {gamma:?}"))?;
            }
        }
        Ok(())
    })();
    Instance::new(data, result)
}

fn coproduct_evaluation(g: &mut Gen, c: &Caps, _: usize) -> Instance {
    let n = nvars(g, c);
    let copies = g.size(2, 3);
    let p = g.polynomial(n, 3, 4);
    let points: Vec<Vec<Scalar>> = (0..copies).map(|_| g.point(n)).collect();
    let data = json!({"p": show::poly(&p), "points": points.iter().map(|v| show::point(v)).collect::<Vec<_>>()});
    let result = (|| {
        let cp = core(coproduct(&p, copies))?;
        let joined: Vec<Scalar> = points.concat();
        let sum: Vec<Scalar> =
            (0..n).map(|j| points.iter().fold(Scalar::from_int(0), |acc, v| &acc + &v[j])).collect();
        ensure(cp.eval(&joined) == p.eval(&sum), "coproduct evaluation differs from p at the sum")
    })();
    Instance::new(data, result)
}

fn leibniz(g: &mut Gen, c: &Caps, _: usize) -> Instance {
    let n = nvars(g, c);
    let (f, h) = (g.exppoly(n, 3), g.exppoly(n, 3));
    let j = g.below(n);
    let data = json!({"f": show::exppoly(&f), "g": show::exppoly(&h), "j": j});
    let lhs = (f.clone() * h.clone()).partial(j);
    let rhs = f.partial(j) * h.clone() + f * h.partial(j);
    Instance::new(data, ensure(lhs == rhs, "Leibniz rule fails"))
}

fn text_round_trip(g: &mut Gen, c: &Caps, _: usize) -> Instance {
    let n = nvars(g, c);
    let f = g.exppoly(n, 3);
    let mu = g.int_point(n, 2);
    let f = core(f.translate(&jetcalc_core::Vector::new(mu))).unwrap_or(f);
    let u = g.diffop(n, 3);
    let data = json!({"f": show::exppoly(&f), "u": show::diffop(&u)});
    let result = (|| {
        ensure(core(parse_exppoly(&format_exppoly(&f), n))? == f, "exponential polynomial does not round trip")?;
        ensure(core(parse_diffop(&format_diffop(&u), n))? == u, "operator does not round trip")
    })();
    Instance::new(data, result)
}
