use jetcalc_core::jetfun::pair_quotient;
use jetcalc_core::linalg::unit_vector;
use jetcalc_core::localmod::{
    annihilator, cyclic_quotient, dual_number_iso, quotient_module, submodule_generated, tensor, tensor_unit_witness,
    CofiniteIdeal, FinMod, ModuleMap,
};
use jetcalc_core::{DiffOp, Matrix, Monomial, Scalar};
use serde_json::json;

use super::{core, ensure, show, Caps, Check, Count, Instance};
use crate::random::Gen;

pub fn checks() -> Vec<Check> {
    vec![
        Check {
            id: "localmod.perfect_pairing",
            property: "the pairing of P_k modulo M^(k+1) with S_k has full rank C(N+k, N)",
            count: Count::Exhaustive(|c| c.nmax.min(3) * (c.kmax.min(3) as usize + 1)),
            run: perfect_pairing,
        },
        Check {
            id: "localmod.module_axioms",
            property: "constructed modules have commuting actions killed by every product of k+1 of them",
            count: Count::Random(50),
            run: module_axioms,
        },
        Check {
            id: "localmod.annihilator_round_trip",
            property: "the cyclic quotient by the annihilator of a cyclic module is isomorphic to it",
            count: Count::Random(50),
            run: annihilator_round_trip,
        },
        Check {
            id: "localmod.tensor_laws",
            property: "tensoring with the trivial module is the identity and tensor products are associative",
            count: Count::Random(50),
            run: tensor_laws,
        },
        Check {
            id: "localmod.maps_intertwine",
            property: "inclusions, quotient maps and dual-number isomorphisms intertwine the actions",
            count: Count::Random(50),
            run: maps_intertwine,
        },
    ]
}

fn binomial(n: usize, k: usize) -> usize {
    (1..=k).fold(1u128, |acc, i| acc * (n - k + i) as u128 / i as u128) as usize
}

fn perfect_pairing(_: &mut Gen, c: &Caps, i: usize) -> Instance {
    let ks = c.kmax.min(3) as usize + 1;
    let (n, k) = (i / ks + 1, (i % ks) as u32);
    let data = json!({"nvars": n, "k": k});
    let ideal = CofiniteIdeal::maximal_power(n, k);
    let standard = ideal.quotient_basis().to_vec();
    let ops: Vec<DiffOp> = Monomial::up_to_degree(n, k).into_iter().map(DiffOp::monomial).collect();
    let gram = Matrix::from_fn(standard.len(), ops.len(), |r, c| {
        pair_quotient(&ideal, &unit_vector(standard.len(), r), &ops[c])
    });
    let expected = binomial(n + k as usize, n);
    let result = ensure(
        gram.rank() == expected && standard.len() == expected && ops.len() == expected,
        format!("rank {} of a {}x{} Gram matrix, expected {expected}", gram.rank(), standard.len(), ops.len()),
    );
    Instance::new(data, result)
}

/// Every product of `len` matrices from `action`.
fn products(action: &[Matrix], dim: usize, len: u32) -> Vec<Matrix> {
    let mut level = vec![Matrix::identity(dim)];
    for _ in 0..len {
        level = level.iter().flat_map(|p| action.iter().map(move |a| a.mul(p))).collect();
    }
    level
}

fn module_axioms(g: &mut Gen, c: &Caps, _: usize) -> Instance {
    let n = g.size(1, c.nmax.clamp(1, 3));
    let e = g.module(n, c.dimmax.min(6), c.kmax.max(1));
    let data = json!({"module": show::module(&e)});
    let result = (|| {
        let a = e.action();
        for (i, x) in a.iter().enumerate() {
            for y in &a[i + 1..] {
                ensure(x.mul(y) == y.mul(x), "action matrices do not commute")?;
            }
        }
        ensure(products(a, e.dim(), e.k() + 1).iter().all(Matrix::is_zero), "a product of k+1 actions is nonzero")?;
        core(FinMod::with_dim(n, e.k(), e.dim(), a.to_vec())).map(|_| ())
    })();
    Instance::new(data, result)
}

fn annihilator_round_trip(g: &mut Gen, c: &Caps, _: usize) -> Instance {
    let n = g.size(1, c.nmax.clamp(1, 2));
    let k = g.int(1, i64::from(c.kmax.clamp(1, 3))) as u32;
    let ideal = g.ideal(n, k);
    let e = cyclic_quotient(&ideal).module;
    let data = json!({"generators": ideal.generators().iter().map(show::poly).collect::<Vec<_>>(), "k": k});
    let result = (|| {
        let ann = annihilator(&e);
        ensure(ann.same_as(&ideal), "annihilator differs from the defining ideal")?;
        let back = cyclic_quotient(&ann).module;
        ensure(back.dim() == e.dim(), "dimension changed")?;
        let iso = core(ModuleMap::new(back, e.clone(), Matrix::identity(e.dim())))?;
        ensure(iso.is_isomorphism(), "witness is not invertible")
    })();
    Instance::new(data, result)
}

fn tensor_laws(g: &mut Gen, c: &Caps, _: usize) -> Instance {
    let n = g.size(1, c.nmax.clamp(1, 2));
    let cap = c.dimmax.min(4);
    let (a, b, d) = (g.module(n, cap, 2), g.module(n, 2, 1), g.module(n, 2, 1));
    let data = json!({"a": show::module(&a), "b": show::module(&b), "c": show::module(&d)});
    let result = (|| {
        ensure(core(tensor_unit_witness(&a))?.is_isomorphism(), "unit witness is singular")?;
        let ab = core(tensor(&[a.clone(), b.clone()]))?;
        ensure(ab.dim() == a.dim() * b.dim(), "tensor dimension is not multiplicative")?;
        let left = core(tensor(&[ab, d.clone()]))?;
        let right = core(tensor(&[a.clone(), core(tensor(&[b.clone(), d.clone()]))?]))?;
        ensure(left.action() == right.action(), "tensor product is not associative")
    })();
    Instance::new(data, result)
}

fn maps_intertwine(g: &mut Gen, c: &Caps, _: usize) -> Instance {
    let n = g.size(1, c.nmax.clamp(1, 3));
    let e = g.module(n, c.dimmax.min(4), 2);
    let pick = g.below(e.dim());
    let lambda = g.direction(n);
    let data = json!({"module": show::module(&e), "vector": pick, "lambda": show::point(lambda.coords())});
    let intertwines = |m: &ModuleMap| {
        m.source.action().iter().zip(m.target.action()).all(|(s, t)| m.matrix.mul(s) == t.mul(&m.matrix))
    };
    let result = (|| {
        let sub = core(submodule_generated(&e, &[unit_vector(e.dim(), pick)]))?;
        ensure(intertwines(&sub.inclusion), "inclusion does not intertwine")?;
        let (_, proj) = core(quotient_module(&e, &sub.space))?;
        ensure(intertwines(&proj), "projection does not intertwine")?;
        ensure(proj.matrix.mul(&sub.inclusion.matrix).is_zero(), "projection does not kill the submodule")?;
        let iso = core(dual_number_iso(&lambda))?;
        ensure(intertwines(&iso) && iso.is_isomorphism(), "dual-number map is not an isomorphism")?;
        let one: Vec<Scalar> = unit_vector(e.dim(), pick);
        ensure(sub.space.contains(&one), "generator missing from its submodule")
    })();
    Instance::new(data, result)
}

#[cfg(test)]
mod tests {
    #[test]
    fn binomials() {
        assert_eq!(super::binomial(6, 3), 20);
        assert_eq!(super::binomial(4, 0), 1);
        assert_eq!(super::binomial(5, 5), 1);
    }
}
