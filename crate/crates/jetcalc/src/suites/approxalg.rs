use jetcalc_core::approxalg::{
    corner_identity_check, double_commutant_check, end_sharp_membership, end_zero, exhaustive_sharp_check,
    preserves_generated, ApproxModule,
};
use jetcalc_core::{Matrix, Scalar};
use serde_json::{json, Value};

use super::{core, ensure, show, Caps, Check, Count, Instance};
use crate::files::AlgebraFile;
use crate::random::Gen;

/// Largest `n · dim V` for the exhaustive submodule enumeration.
const SPOT_DIM: usize = 6;

pub fn checks() -> Vec<Check> {
    vec![
        Check {
            id: "approxalg.double_commutant",
            property: "pi(A) equals End(pi)^#, and the tuple decision matches exhaustive submodule enumeration",
            count: Count::Random(200),
            run: double_commutant,
        },
        Check {
            id: "approxalg.corners",
            property: "pi(a1 A a2) = pi(a1) pi(A) pi(a2) for all pairs of chain idempotents",
            count: Count::Random(50),
            run: corners,
        },
        Check {
            id: "approxalg.end_zero_and_splitting",
            property: "End(V)_0 is computed consistently, closed under composition and the A-bimodule action, \
                       every V_j splits off, and membership survives enlarging the tuple",
            count: Count::Random(50),
            run: end_zero_and_splitting,
        },
    ]
}

fn module_data(m: &ApproxModule) -> Value {
    serde_json::to_value(AlgebraFile::from_module(m)).expect("plain data")
}

fn as_matrix(d: usize, v: &[Scalar]) -> Matrix {
    Matrix::from_vec(d, d, v.to_vec()).expect("square")
}

fn double_commutant(g: &mut Gen, c: &Caps, _: usize) -> Instance {
    let m = g.approx_module(c.dimmax.min(6));
    let d = m.dim();
    let chain_len = m.algebra().chain().len();
    let mut candidates: Vec<Matrix> = m.generators().to_vec();
    for _ in 0..2 {
        let a = m.alpha(g.below(chain_len));
        candidates.push(a.mul(&g.small_int_matrix(d, d)).mul(&a));
    }
    let data = json!({
        "module": module_data(&m),
        "candidates": candidates.iter().map(show::matrix).collect::<Vec<_>>(),
    });
    let result = (|| {
        let report = core(double_commutant_check(&m))?;
        ensure(report.image_in_sharp, "some pi(e_l) failed the End^# test")?;
        ensure(
            report.equal(),
            format!("dim pi(A) = {}, dim End^# = {}", report.image.dim(), report.sharp.dim()),
        )?;
        ensure(report.separating.is_none(), "a separating functional was reported for equal sides")?;
        let sharp_basis = report.sharp.basis().iter().map(|v| as_matrix(d, v));
        for phi in candidates.iter().cloned().chain(sharp_basis) {
            let verdict = core(end_sharp_membership(&m, &phi))?.is_member();
            ensure(verdict == report.image.contains(phi.data()), "End^# verdict disagrees with pi(A)")?;
            if let Some(full) = core(exhaustive_sharp_check(&m, &phi, SPOT_DIM))? {
                ensure(full == verdict, "exhaustive enumeration disagrees with the tuple decision")?;
            }
        }
        Ok(())
    })();
    Instance::new(data, result)
}

fn corners(g: &mut Gen, c: &Caps, _: usize) -> Instance {
    let m = g.approx_module(c.dimmax.min(6));
    let data = json!({"module": module_data(&m)});
    let len = m.algebra().chain().len();
    let result = (|| {
        for j1 in 0..len {
            for j2 in 0..len {
                ensure(core(corner_identity_check(&m, j1, j2))?.equal(), format!("corner identity fails at ({j1}, {j2})"))?;
            }
        }
        Ok(())
    })();
    Instance::new(data, result)
}

fn end_zero_and_splitting(g: &mut Gen, c: &Caps, _: usize) -> Instance {
    let m = g.approx_module(c.dimmax.min(6));
    let d = m.dim();
    let extra: Vec<Scalar> = (0..d).map(|_| Scalar::from_int(g.int(-1, 1))).collect();
    let data = json!({"module": module_data(&m), "extra_vector": show::point(&extra)});
    let len = m.algebra().chain().len();
    let result = (|| {
        let ez = end_zero(&m);
        ensure(ez.agree(), "End(V)_0 from rank-one maps differs from the union of corners")?;
        let basis: Vec<Matrix> = ez.via_corners.basis().iter().map(|v| as_matrix(d, v)).collect();
        for x in &basis {
            for y in &basis {
                ensure(ez.via_corners.contains(x.mul(y).data()), "End(V)_0 is not closed under composition")?;
            }
            for a in m.action() {
                for b in m.action() {
                    ensure(ez.via_corners.contains(a.mul(x).mul(b).data()), "End(V)_0 is not an A-bimodule")?;
                }
            }
        }
        for j in 0..len {
            let a = m.alpha(j);
            ensure(a.mul(&a) == a, format!("pi(alpha_{j}) is not idempotent"))?;
            ensure(m.splits_at(j), format!("V does not split at {j}"))?;
            if j + 1 < len {
                ensure(m.corner_space(j).is_subspace_of(&m.corner_space(j + 1)), "corners are not nested")?;
            }
        }
        for b in m.action() {
            if core(end_sharp_membership(&m, b))?.is_member() {
                let j = m.corner_of(b).expect("member lies in a corner");
                let mut tuple = m.corner_space(j).basis().to_vec();
                tuple.push(extra.clone());
                ensure(preserves_generated(&m, b, &tuple), "enlarging the tuple flipped a member")?;
            }
        }
        Ok(())
    })();
    Instance::new(data, result)
}
