//! Algebras with an approximate identity, their admissible modules and the
//! double commutant `π(A) = End(π)^#`.
//!
//! An algebra is given by structure constants on a finite basis together with
//! an increasing chain of idempotents `α_1 ≤ ··· ≤ α_m`. Endomorphisms of `V`
//! are compared as subspaces of `End(V)`, flattened row-major.

use alloc::format;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{unit_vector, Matrix, Subspace};
use crate::scalar::Scalar;

/// `e_i e_j = Σ_l c[i][j][l] e_l`, with an idempotent chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApproxAlgebra {
    dim: usize,
    structure: Vec<Vec<Vec<Scalar>>>,
    chain: Vec<Vec<Scalar>>,
}

impl ApproxAlgebra {
    pub fn new(structure: Vec<Vec<Vec<Scalar>>>, chain: Vec<Vec<Scalar>>) -> Result<Self> {
        let dim = structure.len();
        let shape_ok = structure.iter().all(|r| r.len() == dim && r.iter().all(|c| c.len() == dim));
        if !shape_ok {
            return Err(Error::Shape(format!("structure constants are not {dim}x{dim}x{dim}")));
        }
        if chain.iter().any(|a| a.len() != dim) {
            return Err(Error::Shape("idempotent of the wrong length".into()));
        }
        let alg = ApproxAlgebra { dim, structure, chain };
        alg.validate_associativity()?;
        alg.validate_chain()?;
        Ok(alg)
    }

    fn validate_associativity(&self) -> Result<()> {
        for i in 0..self.dim {
            for j in 0..self.dim {
                let ij = self.basis_product(i, j);
                for l in 0..self.dim {
                    let e_l = unit_vector(self.dim, l);
                    let left = self.mul(&ij, &e_l);
                    let right = self.mul(&unit_vector(self.dim, i), &self.basis_product(j, l));
                    if left != right {
                        return Err(Error::InvalidAlgebra(format!("(e{i} e{j}) e{l} != e{i} (e{j} e{l})")));
                    }
                }
            }
        }
        Ok(())
    }

    fn validate_chain(&self) -> Result<()> {
        for (p, a) in self.chain.iter().enumerate() {
            for b in &self.chain[p..] {
                if self.mul(a, b) != *a || self.mul(b, a) != *a {
                    return Err(Error::InvalidAlgebra(format!("idempotent {p} is not absorbed by a later one")));
                }
            }
        }
        for i in 0..self.dim {
            let e = unit_vector(self.dim, i);
            if !self.chain.iter().any(|a| self.mul(a, &e) == e && self.mul(&e, a) == e) {
                return Err(Error::InvalidAlgebra(format!("no idempotent in the chain fixes e{i}")));
            }
        }
        Ok(())
    }

    /// The algebra spanned by `spanning` (which must be closed under
    /// products), in the row-reduced basis of that span. Associativity is
    /// inherited from matrix multiplication and not re-checked.
    pub fn from_matrices(spanning: &[Matrix], chain: &[Matrix]) -> Result<(Self, Vec<Matrix>)> {
        let Some(first) = spanning.first().or(chain.first()) else {
            return Ok((ApproxAlgebra { dim: 0, structure: Vec::new(), chain: Vec::new() }, Vec::new()));
        };
        let (r, c) = (first.rows(), first.cols());
        let span = Subspace::from_vectors(r * c, spanning.iter().map(|m| m.data().to_vec()));
        let basis: Vec<Matrix> = span
            .basis()
            .iter()
            .map(|v| Matrix::from_vec(r, c, v.clone()).expect("flattened matrix"))
            .collect();
        let coords = |m: &Matrix| -> Result<Vec<Scalar>> {
            span.coordinates(m.data())
                .ok_or_else(|| Error::InvalidAlgebra("span is not closed under multiplication".into()))
        };
        let mut structure = Vec::with_capacity(basis.len());
        for a in &basis {
            let mut row = Vec::with_capacity(basis.len());
            for b in &basis {
                row.push(coords(&a.mul(b))?);
            }
            structure.push(row);
        }
        let chain = chain.iter().map(coords).collect::<Result<Vec<_>>>()?;
        let alg = ApproxAlgebra { dim: basis.len(), structure, chain };
        alg.validate_chain()?;
        Ok((alg, basis))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn structure(&self) -> &[Vec<Vec<Scalar>>] {
        &self.structure
    }

    pub fn chain(&self) -> &[Vec<Scalar>] {
        &self.chain
    }

    pub fn alpha(&self, j: usize) -> &[Scalar] {
        &self.chain[j]
    }

    fn basis_product(&self, i: usize, j: usize) -> Vec<Scalar> {
        self.structure[i][j].clone()
    }

    pub fn mul(&self, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        let mut out = alloc::vec![Scalar::zero(); self.dim];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let xy = x * y;
                for (o, c) in out.iter_mut().zip(&self.structure[i][j]) {
                    if !c.is_zero() {
                        *o += &(&xy * c);
                    }
                }
            }
        }
        out
    }
}

/// An admissible approximately unital module: `π(e_i)` for every basis element.
#[derive(Clone, Debug)]
pub struct ApproxModule {
    algebra: ApproxAlgebra,
    dim: usize,
    action: Vec<Matrix>,
    /// A few `π(e_l)` generating `π(A)` as an algebra.
    generators: Vec<Matrix>,
}

impl ApproxModule {
    pub fn new(algebra: ApproxAlgebra, dim: usize, action: Vec<Matrix>) -> Result<Self> {
        if action.len() != algebra.dim() {
            return Err(Error::Shape(format!("{} action matrices for an algebra of dim {}", action.len(), algebra.dim())));
        }
        if action.iter().any(|m| m.rows() != dim || m.cols() != dim) {
            return Err(Error::Shape(format!("action matrices must be {dim}x{dim}")));
        }
        let generators = generating_subset(dim, &action);
        let module = ApproxModule { algebra, dim, action, generators };
        for i in 0..module.algebra.dim() {
            for j in 0..module.algebra.dim() {
                let lhs = module.action[i].mul(&module.action[j]);
                if lhs != module.pi(&module.algebra.basis_product(i, j)) {
                    return Err(Error::InvalidModule(format!("pi(e{i}) pi(e{j}) != pi(e{i} e{j})")));
                }
            }
        }
        // with a finite chain, ∪ V_j = V_m, so α_m has to act as the identity
        let top = match module.algebra.chain().last() {
            Some(a) => module.pi(a),
            None => Matrix::zeros(dim, dim),
        };
        if top != Matrix::identity(dim) {
            return Err(Error::InvalidModule("module is not approximately unital".into()));
        }
        Ok(module)
    }

    pub fn algebra(&self) -> &ApproxAlgebra {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn action(&self) -> &[Matrix] {
        &self.action
    }

    pub fn generators(&self) -> &[Matrix] {
        &self.generators
    }

    /// `π(a)`.
    pub fn pi(&self, a: &[Scalar]) -> Matrix {
        let mut out = Matrix::zeros(self.dim, self.dim);
        for (c, m) in a.iter().zip(&self.action) {
            if !c.is_zero() {
                out = out.add(&m.scale(c));
            }
        }
        out
    }

    /// `π(α_j)`.
    pub fn alpha(&self, j: usize) -> Matrix {
        self.pi(self.algebra.alpha(j))
    }

    /// `V_j = π(α_j) V`.
    pub fn corner_space(&self, j: usize) -> Subspace {
        self.alpha(j).column_space()
    }

    /// `V = ker π(α_j) ⊕ V_j`, checked by dimensions and a zero intersection.
    pub fn splits_at(&self, j: usize) -> bool {
        let a = self.alpha(j);
        if a.mul(&a) != a {
            return false;
        }
        let image = a.column_space();
        let kernel = Subspace::from_vectors(self.dim, a.nullspace());
        image.dim() + kernel.dim() == self.dim && image.intersection(&kernel).dim() == 0
    }

    /// `π(A)` inside `End(V)`.
    pub fn image(&self) -> Subspace {
        Subspace::from_vectors(self.dim * self.dim, self.action.iter().map(|m| m.data().to_vec()))
    }

    /// `End(V)_j = π(α_j) End(V) π(α_j)`.
    pub fn end_corner(&self, j: usize) -> Subspace {
        let a = self.alpha(j);
        let d = self.dim;
        Subspace::from_vectors(
            d * d,
            (0..d * d).map(|t| {
                let e = Matrix::from_vec(d, d, unit_vector(d * d, t)).expect("unit matrix");
                a.mul(&e).mul(&a).into_data()
            }),
        )
    }

    /// Smallest `j` with `π(α_j) φ π(α_j) = φ`.
    pub fn corner_of(&self, phi: &Matrix) -> Option<usize> {
        (0..self.algebra.chain().len()).find(|&j| {
            let a = self.alpha(j);
            a.mul(phi).mul(&a) == *phi
        })
    }

    /// `π(g)^{×n}` for the generators `g`.
    fn block_action(&self, n: usize) -> Vec<Matrix> {
        self.generators
            .iter().map(|m| Matrix::block_diag(&alloc::vec![m.clone(); n])).collect()
    }
}

/// Smallest subspace containing `seeds` and invariant under `mats`.
pub fn invariant_closure(ambient: usize, mats: &[Matrix], seeds: &[Vec<Scalar>]) -> Subspace {
    let mut space = Subspace::zero(ambient);
    let mut queue: Vec<Vec<Scalar>> = Vec::new();
    for v in seeds {
        if space.insert(v.clone()) {
            queue.push(v.clone());
        }
    }
    while let Some(v) = queue.pop() {
        for m in mats {
            let w = m.apply(&v);
            if space.insert(w.clone()) {
                queue.push(w);
            }
        }
    }
    space
}

/// Basis of the span of all nonempty products of `gens`.
pub fn algebra_closure(gens: &[Matrix]) -> Vec<Matrix> {
    let Some(first) = gens.first() else {
        return Vec::new();
    };
    let (r, c) = (first.rows(), first.cols());
    let mut span = Subspace::zero(r * c);
    let mut found: Vec<Matrix> = Vec::new();
    let mut queue: Vec<Matrix> = Vec::new();
    for g in gens {
        if span.insert(g.data().to_vec()) {
            found.push(g.clone());
            queue.push(g.clone());
        }
    }
    while let Some(m) = queue.pop() {
        for g in gens {
            let p = g.mul(&m);
            if span.insert(p.data().to_vec()) {
                found.push(p.clone());
                queue.push(p);
            }
        }
    }
    found
}

/// `End(V)_0` computed as the image of `V ⊗ V^∨` and as `∪_j End(V)_j`.
#[derive(Clone, Debug)]
pub struct EndZero {
    pub via_rank_ones: Subspace,
    pub via_corners: Subspace,
}

impl EndZero {
    pub fn agree(&self) -> bool {
        self.via_rank_ones == self.via_corners
    }
}

pub fn end_zero(m: &ApproxModule) -> EndZero {
    let d = m.dim();
    let mut via_rank_ones = Subspace::zero(d * d);
    let mut via_corners = Subspace::zero(d * d);
    for j in 0..m.algebra().chain().len() {
        // V^∨ = ∪_j {f ∘ π(α_j)}: the rows of π(α_j) span the j-th piece
        let a = m.alpha(j);
        for f in a.row_space().basis() {
            for i in 0..d {
                let v = unit_vector(d, i);
                let rank_one = Matrix::from_fn(d, d, |r, c| &v[r] * &f[c]);
                via_rank_ones.insert(rank_one.into_data());
            }
        }
        via_corners = via_corners.sum(&m.end_corner(j));
    }
    EndZero { via_rank_ones, via_corners }
}

/// Outcome of the `End^#` membership test for one endomorphism.
#[derive(Clone, Debug)]
pub enum SharpMembership {
    /// `φ = π(a)`; `preimage` holds the coordinates of `a`.
    Member { corner: usize, preimage: Vec<Scalar> },
    /// `φ^{×n}` moves `vector ∈ submodule` to `image ∉ submodule`.
    Escapes { corner: usize, submodule: Subspace, vector: Vec<Scalar>, image: Vec<Scalar> },
}

impl SharpMembership {
    pub fn is_member(&self) -> bool {
        matches!(self, SharpMembership::Member { .. })
    }
}

fn tuple_of(basis: &[Vec<Scalar>]) -> Vec<Scalar> {
    basis.iter().flat_map(|u| u.iter().cloned()).collect()
}

fn apply_blockwise(phi: &Matrix, v: &[Scalar]) -> Vec<Scalar> {
    let d = phi.cols();
    v.chunks(d.max(1)).flat_map(|c| phi.apply(c)).collect()
}

/// The submodule of `V^{×n}` generated by the basis tuple `(u_1, ..., u_n)` of `V_j`.
pub fn tuple_submodule(m: &ApproxModule, j: usize) -> (Vec<Vec<Scalar>>, Subspace) {
    let u: Vec<Vec<Scalar>> = m.corner_space(j).basis().to_vec();
    let n = u.len();
    let w = invariant_closure(n * m.dim(), &m.block_action(n), &[tuple_of(&u)]);
    (u, w)
}

/// Whether `φ^{×n}` preserves the submodule of `V^{×n}` generated by `tuple`.
pub fn preserves_generated(m: &ApproxModule, phi: &Matrix, tuple: &[Vec<Scalar>]) -> bool {
    let n = tuple.len();
    let w = invariant_closure(n * m.dim(), &m.block_action(n), &[tuple_of(tuple)]);
    w.basis().iter().all(|v| w.contains(&apply_blockwise(phi, v)))
}

/// Decides `φ ∈ End(π)^#` with the single submodule generated by a basis
/// tuple of `V_j`, then confirms a positive answer by exhibiting `a` with
/// `π(a) = φ`.
pub fn end_sharp_membership(m: &ApproxModule, phi: &Matrix) -> Result<SharpMembership> {
    if phi.rows() != m.dim() || phi.cols() != m.dim() {
        return Err(Error::Shape(format!("endomorphism must be {0}x{0}", m.dim())));
    }
    let j = m.corner_of(phi).ok_or(Error::NotFinite)?;
    let (u, w) = tuple_submodule(m, j);
    decide(m, phi, j, &u, &w)
}

fn decide(m: &ApproxModule, phi: &Matrix, j: usize, u: &[Vec<Scalar>], w: &Subspace) -> Result<SharpMembership> {
    for v in w.basis() {
        let image = apply_blockwise(phi, v);
        if !w.contains(&image) {
            return Ok(SharpMembership::Escapes { corner: j, submodule: w.clone(), vector: v.clone(), image });
        }
    }
    // φ^{×n}(u) ∈ W gives a with φ u_i = π(a) u_i; then φ = π(a α_j)
    let target = tuple_of(&u.iter().map(|x| phi.apply(x)).collect::<Vec<_>>());
    let columns: Vec<Vec<Scalar>> = m
        .action()
        .iter()
        .map(|p| tuple_of(&u.iter().map(|x| p.apply(x)).collect::<Vec<_>>()))
        .collect();
    let system = Matrix::from_fn(target.len(), columns.len(), |r, c| columns[c][r].clone());
    let a = system
        .solve(&target)
        .ok_or_else(|| Error::Inconsistent("tuple image lies in the submodule but has no preimage".into()))?;
    let preimage = m.algebra().mul(&a, m.algebra().alpha(j));
    if m.pi(&preimage) != *phi {
        return Err(Error::Inconsistent("recovered algebra element does not reproduce the endomorphism".into()));
    }
    Ok(SharpMembership::Member { corner: j, preimage })
}

/// Both sides of `π(A) = End(π)^#`.
#[derive(Clone, Debug)]
pub struct DcommReport {
    pub image: Subspace,
    pub sharp: Subspace,
    pub end_zero_dim: usize,
    /// Every `π(e_l)` passed [`end_sharp_membership`] on its own.
    pub image_in_sharp: bool,
    /// A functional on `End(V)` vanishing on one side and not the other.
    pub separating: Option<Vec<Scalar>>,
}

impl DcommReport {
    pub fn equal(&self) -> bool {
        self.image == self.sharp
    }
}

/// `End(π)^# ∩ End(V)_j = {φ ∈ End(V)_j : (φ u_i)_i ∈ W_j}`, as a subspace.
pub fn end_sharp_at(m: &ApproxModule, j: usize) -> Subspace {
    let (u, w) = tuple_submodule(m, j);
    sharp_in_corner(m, j, &u, &w)
}

fn sharp_in_corner(m: &ApproxModule, j: usize, u: &[Vec<Scalar>], w: &Subspace) -> Subspace {
    let d = m.dim();
    let corner = m.end_corner(j);
    let reduced: Vec<Vec<Scalar>> = corner
        .basis()
        .iter()
        .map(|psi| {
            let psi = Matrix::from_vec(d, d, psi.clone()).expect("flattened matrix");
            w.reduce(&tuple_of(&u.iter().map(|x| psi.apply(x)).collect::<Vec<_>>()))
        })
        .collect();
    let len = w.ambient();
    let system = Matrix::from_fn(len, reduced.len(), |r, c| reduced[c][r].clone());
    Subspace::from_vectors(
        d * d,
        system.nullspace().into_iter().map(|coeffs| {
            let mut v = alloc::vec![Scalar::zero(); d * d];
            for (c, b) in coeffs.iter().zip(corner.basis()) {
                if !c.is_zero() {
                    for (x, y) in v.iter_mut().zip(b) {
                        *x += &(c * y);
                    }
                }
            }
            v
        }),
    )
}

/// Computes `π(A)` and `End(π)^#` independently and compares them; every
/// basis vector of `End(π)^#` is re-checked with [`end_sharp_membership`].
pub fn double_commutant_check(m: &ApproxModule) -> Result<DcommReport> {
    let d = m.dim();
    let image = m.image();
    let tuples: Vec<(Vec<Vec<Scalar>>, Subspace)> =
        (0..m.algebra().chain().len()).map(|j| tuple_submodule(m, j)).collect();
    let mut sharp = Subspace::zero(d * d);
    for (j, (u, w)) in tuples.iter().enumerate() {
        sharp = sharp.sum(&sharp_in_corner(m, j, u, w));
    }
    let member = |phi: &Matrix| -> Result<bool> {
        let j = m.corner_of(phi).ok_or(Error::NotFinite)?;
        Ok(decide(m, phi, j, &tuples[j].0, &tuples[j].1)?.is_member())
    };
    for b in sharp.basis() {
        if !member(&Matrix::from_vec(d, d, b.clone())?)? {
            return Err(Error::Inconsistent("linear End^# contains a non-member".into()));
        }
    }
    let separating = if image == sharp {
        None
    } else {
        let (small, big) = if image.is_subspace_of(&sharp) { (&image, &sharp) } else { (&sharp, &image) };
        let big_rows = big.basis();
        small
            .orthogonal_basis()
            .into_iter()
            .find(|f| big_rows.iter().any(|b| !crate::linalg::dot(f, b).is_zero()))
    };
    let end_zero_dim = end_zero(m).via_corners.dim();
    let mut image_in_sharp = true;
    for b in m.action() {
        image_in_sharp &= member(b)?;
    }
    Ok(DcommReport { image, sharp, end_zero_dim, image_in_sharp, separating })
}

/// Both sides of `π(α_{j1} A α_{j2}) = π(α_{j1}) π(A) π(α_{j2})`.
#[derive(Clone, Debug)]
pub struct CornerReport {
    pub via_algebra: Subspace,
    pub via_matrices: Subspace,
}

impl CornerReport {
    pub fn equal(&self) -> bool {
        self.via_algebra == self.via_matrices
    }
}

pub fn corner_identity_check(m: &ApproxModule, j1: usize, j2: usize) -> Result<CornerReport> {
    let len = m.algebra().chain().len();
    if j1 >= len || j2 >= len {
        return Err(Error::Degenerate(format!("chain has {len} idempotents")));
    }
    let alg = m.algebra();
    let d = m.dim();
    let (a1, a2) = (alg.alpha(j1), alg.alpha(j2));
    let via_algebra = Subspace::from_vectors(
        d * d,
        (0..alg.dim()).map(|l| {
            let e = unit_vector(alg.dim(), l);
            m.pi(&alg.mul(&alg.mul(a1, &e), a2)).into_data()
        }),
    );
    let (p1, p2) = (m.alpha(j1), m.alpha(j2));
    let via_matrices = Subspace::from_vectors(d * d, m.action().iter().map(|x| p1.mul(x).mul(&p2).into_data()));
    Ok(CornerReport { via_algebra, via_matrices })
}

/// Spot check of the full `End^#` quantifier: every submodule of `V^{×n}`
/// generated by one vector with entries in `{-1, 0, 1}`, for every `n` with
/// `n · dim V ≤ max_dim`, plus the basis-tuple submodule.
///
/// Returns `None` when the basis tuple itself does not fit under `max_dim`.
pub fn exhaustive_sharp_check(m: &ApproxModule, phi: &Matrix, max_dim: usize) -> Result<Option<bool>> {
    let d = m.dim();
    let j = m.corner_of(phi).ok_or(Error::NotFinite)?;
    let nj = m.corner_space(j).dim();
    if d == 0 || nj * d > max_dim {
        return Ok(None);
    }
    let gens = m.generators();
    for n in 1..=max_dim / d {
        let len = n * d;
        let mats: Vec<Matrix> = gens.iter().map(|g| Matrix::block_diag(&alloc::vec![g.clone(); n])).collect();
        let preserves = |w: &Subspace| w.basis().iter().all(|v| w.contains(&apply_blockwise(phi, v)));
        let mut seen: Vec<Subspace> = Vec::new();
        for v in sign_grid(len) {
            let w = invariant_closure(len, &mats, &[v]);
            if seen.contains(&w) {
                continue;
            }
            if !preserves(&w) {
                return Ok(Some(false));
            }
            seen.push(w);
        }
        if n == nj {
            let (_, w) = tuple_submodule(m, j);
            if !preserves(&w) {
                return Ok(Some(false));
            }
        }
    }
    Ok(Some(true))
}

/// Greedy subset of `action` whose products span the span of `action`.
fn generating_subset(dim: usize, action: &[Matrix]) -> Vec<Matrix> {
    let target = Subspace::from_vectors(dim * dim, action.iter().map(|m| m.data().to_vec()));
    let mut gens: Vec<Matrix> = Vec::new();
    let mut reached = Subspace::zero(dim * dim);
    for b in action {
        if reached == target {
            break;
        }
        if reached.contains(b.data()) {
            continue;
        }
        gens.push(b.clone());
        reached = Subspace::from_vectors(dim * dim, algebra_closure(&gens).iter().map(|x| x.data().to_vec()));
    }
    gens
}

/// Nonzero vectors in `{-1, 0, 1}^len` whose first nonzero entry is `1`.
fn sign_grid(len: usize) -> Vec<Vec<Scalar>> {
    let total = 3usize.pow(len as u32);
    let mut out = Vec::new();
    for code in 1..total {
        let mut c = code;
        let mut v = Vec::with_capacity(len);
        for _ in 0..len {
            v.push(Scalar::from_int((c % 3) as i64 - 1));
            c /= 3;
        }
        if v.iter().find(|x| !x.is_zero()) == Some(&Scalar::one()) {
            out.push(v);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    fn unit(d: usize, r: usize, c: usize) -> Matrix {
        let mut m = Matrix::zeros(d, d);
        m.set(r, c, s(1));
        m
    }

    fn matrix_module(spanning: &[Matrix], chain: &[Matrix]) -> ApproxModule {
        let (alg, basis) = ApproxAlgebra::from_matrices(spanning, chain).unwrap();
        let d = basis[0].rows();
        ApproxModule::new(alg, d, basis).unwrap()
    }

    #[test]
    fn diagonal_algebra_rejects_off_diagonal_unit() {
        let m = matrix_module(&[unit(2, 0, 0), unit(2, 1, 1)], &[Matrix::identity(2)]);
        match end_sharp_membership(&m, &unit(2, 0, 1)).unwrap() {
            SharpMembership::Escapes { submodule, .. } => assert_eq!(submodule.dim(), 2),
            other => panic!("unexpected {other:?}"),
        }
        assert!(end_sharp_membership(&m, &unit(2, 1, 1)).unwrap().is_member());
        assert_eq!(exhaustive_sharp_check(&m, &unit(2, 0, 1), 6).unwrap(), Some(false));
    }

    #[test]
    fn upper_triangular_double_commutant() {
        let m = matrix_module(&[unit(2, 0, 0), unit(2, 0, 1), unit(2, 1, 1)], &[Matrix::identity(2)]);
        let r = double_commutant_check(&m).unwrap();
        assert!(r.equal());
        assert_eq!(r.sharp.dim(), 3);
    }

    #[test]
    fn scalars_on_three_space() {
        let m = matrix_module(&[Matrix::identity(3)], &[Matrix::identity(3)]);
        let r = double_commutant_check(&m).unwrap();
        assert!(r.equal());
        assert_eq!(r.sharp.dim(), 1);
        assert_eq!(r.end_zero_dim, 9);
    }

    #[test]
    fn chain_with_two_corners() {
        // block algebra M_1 ⊕ M_2 with α_1 the unit of the first block
        let mut spanning = alloc::vec![unit(3, 0, 0)];
        for r in 1..3 {
            for c in 1..3 {
                spanning.push(unit(3, r, c));
            }
        }
        let m = matrix_module(&spanning, &[unit(3, 0, 0), Matrix::identity(3)]);
        assert!(end_zero(&m).agree());
        assert_eq!(m.end_corner(0).dim(), 1);
        assert!(m.splits_at(0) && m.splits_at(1));
        assert!(double_commutant_check(&m).unwrap().equal());
        assert!(corner_identity_check(&m, 0, 1).unwrap().equal());
    }

    #[test]
    fn structure_constants_are_checked() {
        // k[ε]/ε² on the basis (1, ε)
        let one = alloc::vec![s(1), s(0)];
        let eps = alloc::vec![s(0), s(1)];
        let zero = alloc::vec![s(0), s(0)];
        let table = alloc::vec![
            alloc::vec![one.clone(), eps.clone()],
            alloc::vec![eps.clone(), zero.clone()],
        ];
        let alg = ApproxAlgebra::new(table, alloc::vec![one.clone()]).unwrap();
        assert_eq!(alg.mul(&eps, &eps), zero);
        // (e_1 e_0) e_1 = e_0 but e_1 (e_0 e_1) = 0
        let bad = alloc::vec![
            alloc::vec![one.clone(), zero.clone()],
            alloc::vec![eps.clone(), one.clone()],
        ];
        assert!(ApproxAlgebra::new(bad, alloc::vec![one]).is_err());
    }

    #[test]
    fn enlarging_the_tuple_keeps_members() {
        let m = matrix_module(&[unit(2, 0, 0), unit(2, 0, 1), unit(2, 1, 1)], &[Matrix::identity(2)]);
        let phi = m.pi(&[s(2), s(-1), s(3)]);
        let e = |i| unit_vector(2, i);
        assert!(preserves_generated(&m, &phi, &[e(0), e(1)]));
        assert!(preserves_generated(&m, &phi, &[e(0), e(1), alloc::vec![s(1), s(1)]]));
    }

    #[test]
    fn broken_chain_is_rejected() {
        // e_11 alone does not fix e_22
        let r = ApproxAlgebra::from_matrices(&[unit(2, 0, 0), unit(2, 1, 1)], &[unit(2, 0, 0)]);
        assert!(matches!(r, Err(Error::InvalidAlgebra(_))));
        let (alg, basis) = ApproxAlgebra::from_matrices(&[unit(2, 0, 0)], &[unit(2, 0, 0)]).unwrap();
        // π(α_m) = e_11 is not the identity on k²
        assert!(ApproxModule::new(alg, 2, basis).is_err());
    }
}
