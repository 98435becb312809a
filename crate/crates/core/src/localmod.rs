//! Cofinite ideals of the local ring `O₀` of germs at the origin and the
//! finite-dimensional `O₀`-modules they produce.
//!
//! A cofinite ideal `I` contains `M^(k+1)` for some `k`, so everything about it
//! is visible inside `P_{≤k} ≅ O₀/M^(k+1)`; that is where all computations
//! happen. A finite module is given by the commuting nilpotent matrices by
//! which the coordinate functions `x1..xN` act. Matrices act on column
//! vectors.

use alloc::format;
use alloc::vec::Vec;

use num_traits::One;

use crate::error::{Error, Result};
use crate::linalg::{unit_vector, Matrix, Subspace};
use crate::poly::{Covector, DiffOp, Monomial, Polynomial, Vector};
use crate::scalar::{Ring, Scalar};

/// A cofinite ideal of `O₀`, known through polynomial generators and a
/// certified `k` with `M^(k+1) ⊆ I`.
#[derive(Clone, Debug)]
pub struct CofiniteIdeal {
    nvars: usize,
    k: u32,
    generators: Vec<Polynomial>,
    /// `P_{≤k}` monomials, highest first; the coordinate order of `reduced`.
    columns: Vec<Monomial>,
    reduced: Subspace,
    /// Monomials outside the leading terms of `reduced`, lowest first.
    standard: Vec<Monomial>,
}

impl CofiniteIdeal {
    /// Fails with [`Error::NotCofinite`] unless the generators produce every
    /// degree `k+1` monomial.
    pub fn new(nvars: usize, k: u32, generators: Vec<Polynomial>) -> Result<Self> {
        for g in &generators {
            if g.nvars() != nvars {
                return Err(Error::Arity { expected: nvars, found: g.nvars() });
            }
        }
        // M^(k+1) ⊆ I + M^(k+2) suffices, by Nakayama's lemma.
        let wide = truncated_span(nvars, k + 1, &generators);
        let wide_cols = descending(nvars, k + 1);
        for m in Monomial::of_degree(nvars, k + 1) {
            if !wide.contains(&Polynomial::term(m, Scalar::one()).coefficients(&wide_cols)) {
                return Err(Error::NotCofinite { k });
            }
        }
        let columns = descending(nvars, k);
        let reduced = truncated_span(nvars, k, &generators);
        let mut standard: Vec<Monomial> =
            reduced.free_positions().into_iter().map(|c| columns[c].clone()).collect();
        standard.sort();
        Ok(CofiniteIdeal { nvars, k, generators, columns, reduced, standard })
    }

    /// `M^(k+1)`.
    pub fn maximal_power(nvars: usize, k: u32) -> Self {
        let gens = Monomial::of_degree(nvars, k + 1)
            .into_iter()
            .map(|m| Polynomial::term(m, Scalar::one()))
            .collect();
        CofiniteIdeal::new(nvars, k, gens).expect("powers of the maximal ideal are cofinite")
    }

    /// `I_λ = {φ : φ(0) = 0, ∂_λ φ(0) = 0}`, generated by `M²` and the linear
    /// forms vanishing at `λ`.
    pub fn at_direction(lambda: &Vector) -> Result<Self> {
        if lambda.is_zero() {
            return Err(Error::ZeroDirection);
        }
        let n = lambda.nvars();
        let mut gens: Vec<Polynomial> = Monomial::of_degree(n, 2)
            .into_iter()
            .map(|m| Polynomial::term(m, Scalar::one()))
            .collect();
        let lam = Matrix::from_vec(1, n, lambda.coords().to_vec())?;
        for xi in lam.nullspace() {
            gens.push(Polynomial::linear(&Covector::new(xi)));
        }
        CofiniteIdeal::new(n, 1, gens)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    /// `dim O₀/I`.
    pub fn codim(&self) -> usize {
        self.standard.len()
    }

    /// Monomials whose classes form the basis of `O₀/I`, lowest first.
    pub fn quotient_basis(&self) -> &[Monomial] {
        &self.standard
    }

    /// Row-reduced basis of `I ∩ P_{≤k}`, as polynomials.
    pub fn reduced_basis(&self) -> Vec<Polynomial> {
        self.reduced
            .basis()
            .iter()
            .map(|r| Polynomial::from_coefficients(self.nvars, &self.columns, r))
            .collect()
    }

    /// The subspace `I ∩ P_{≤k}` in coordinates over [`CofiniteIdeal::columns`].
    pub fn reduced_space(&self) -> &Subspace {
        &self.reduced
    }

    /// `P_{≤k}` monomials in the coordinate order used by [`CofiniteIdeal::reduced_space`].
    pub fn columns(&self) -> &[Monomial] {
        &self.columns
    }

    pub fn contains(&self, p: &Polynomial) -> bool {
        assert_eq!(p.nvars(), self.nvars, "ideal arity mismatch");
        self.reduced.contains(&p.coefficients(&self.columns))
    }

    /// Coordinates of the class of `p` in `O₀/I`, against [`CofiniteIdeal::quotient_basis`].
    pub fn normal_form<C: Ring>(&self, p: &Polynomial<C>) -> Vec<C> {
        assert_eq!(p.nvars(), self.nvars, "ideal arity mismatch");
        let mut v = p.coefficients(&self.columns);
        self.reduced.reduce_in_place(&mut v);
        self.standard
            .iter()
            .map(|m| {
                let c = self.columns.iter().position(|x| x == m).expect("standard monomial is a column");
                v[c].clone()
            })
            .collect()
    }

    /// Same ideal of `O₀`, regardless of generators or `k`.
    pub fn same_as(&self, other: &CofiniteIdeal) -> bool {
        self.nvars == other.nvars
            && self.generators.iter().all(|g| other.contains(g))
            && other.generators.iter().all(|g| self.contains(g))
    }

    /// Whether `self ⊆ other`.
    pub fn is_subset_of(&self, other: &CofiniteIdeal) -> bool {
        self.generators.iter().all(|g| other.contains(g))
    }
}

fn descending(nvars: usize, k: u32) -> Vec<Monomial> {
    let mut v = Monomial::up_to_degree(nvars, k);
    v.reverse();
    v
}

/// Span of `truncate_k(m·g)` over generators `g` and monomials `deg m ≤ k`.
fn truncated_span(nvars: usize, k: u32, generators: &[Polynomial]) -> Subspace {
    let cols = descending(nvars, k);
    let mut s = Subspace::zero(cols.len());
    for g in generators {
        for m in Monomial::up_to_degree(nvars, k) {
            if s.dim() == cols.len() {
                return s;
            }
            let t = g.mul_ref(&Polynomial::term(m, Scalar::one())).truncate(k);
            if !t.is_empty() {
                s.insert(t.coefficients(&cols));
            }
        }
    }
    s
}

/// Finite-dimensional `O₀`-module: commuting matrices `M_j = m_E(x_j)` with
/// every product of `k+1` of them zero.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FinMod {
    nvars: usize,
    k: u32,
    dim: usize,
    action: Vec<Matrix>,
}

impl FinMod {
    pub fn new(nvars: usize, k: u32, action: Vec<Matrix>) -> Result<Self> {
        if action.len() != nvars {
            return Err(Error::Arity { expected: nvars, found: action.len() });
        }
        let dim = action.first().map_or(0, Matrix::rows);
        FinMod::with_dim(nvars, k, dim, action)
    }

    /// Like [`FinMod::new`], but also works with `nvars = 0`.
    pub fn with_dim(nvars: usize, k: u32, dim: usize, action: Vec<Matrix>) -> Result<Self> {
        if action.len() != nvars {
            return Err(Error::Arity { expected: nvars, found: action.len() });
        }
        for m in &action {
            if m.rows() != dim || m.cols() != dim {
                return Err(Error::Shape(format!("action matrix is {}x{}, expected {dim}x{dim}", m.rows(), m.cols())));
            }
        }
        let e = FinMod { nvars, k, dim, action };
        e.validate()?;
        Ok(e)
    }

    fn validate(&self) -> Result<()> {
        for i in 0..self.nvars {
            for j in i + 1..self.nvars {
                if !self.action[i].commutes_with(&self.action[j]) {
                    return Err(Error::InvalidModule(format!("x{} and x{} act by non-commuting matrices", i + 1, j + 1)));
                }
            }
        }
        for (beta, m) in self.powers_of_degree(self.k + 1) {
            if !m.is_zero() {
                return Err(Error::InvalidModule(format!("monomial {beta:?} acts nontrivially although k = {}", self.k)));
            }
        }
        Ok(())
    }

    /// The zero module.
    pub fn zero(nvars: usize) -> Self {
        FinMod { nvars, k: 0, dim: 0, action: alloc::vec![Matrix::zeros(0, 0); nvars] }
    }

    /// `O₀/M`: one dimension, every `x_j` acting by zero.
    pub fn trivial(nvars: usize) -> Self {
        FinMod { nvars, k: 0, dim: 1, action: alloc::vec![Matrix::zeros(1, 1); nvars] }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn action(&self) -> &[Matrix] {
        &self.action
    }

    /// `M^β` for a single monomial.
    pub fn monomial_action(&self, beta: &Monomial) -> Matrix {
        let mut acc = Matrix::identity(self.dim);
        for (j, &e) in beta.exponents().iter().enumerate() {
            for _ in 0..e {
                acc = self.action[j].mul(&acc);
            }
        }
        acc
    }

    /// `(β, M^β)` for all `|β| ≤ k`, lowest first; higher monomials act by zero.
    pub fn power_table(&self) -> Vec<(Monomial, Matrix)> {
        let mut table: Vec<(Monomial, Matrix)> = alloc::vec![(Monomial::one(self.nvars), Matrix::identity(self.dim))];
        let mut level = table.clone();
        for _ in 0..self.k {
            level = self.next_level(&level);
            table.extend(level.iter().cloned());
        }
        table
    }

    fn next_level(&self, level: &[(Monomial, Matrix)]) -> Vec<(Monomial, Matrix)> {
        let mut out: Vec<(Monomial, Matrix)> = Vec::new();
        for (beta, m) in level {
            for j in 0..self.nvars {
                let b = beta.raise(j);
                if out.iter().all(|(c, _)| *c != b) {
                    out.push((b, self.action[j].mul(m)));
                }
            }
        }
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }

    fn powers_of_degree(&self, d: u32) -> Vec<(Monomial, Matrix)> {
        let mut level: Vec<(Monomial, Matrix)> = alloc::vec![(Monomial::one(self.nvars), Matrix::identity(self.dim))];
        for _ in 0..d {
            level = self.next_level(&level);
        }
        level
    }

    /// `m_E(p) = Σ p_β M^β`.
    pub fn act<C: Ring>(&self, p: &Polynomial<C>) -> Matrix<C> {
        assert_eq!(p.nvars(), self.nvars, "module arity mismatch");
        let mut out = Matrix::<C>::zeros(self.dim, self.dim);
        for (beta, c) in p.terms() {
            if beta.degree() > self.k {
                continue;
            }
            let m = self.monomial_action(beta);
            out = out.add(&m.lift::<C>().times(c));
        }
        out
    }

    /// Whether `t` (target.dim × self.dim) intertwines the two actions.
    pub fn intertwines(&self, target: &FinMod, t: &Matrix) -> bool {
        self.nvars == target.nvars
            && t.rows() == target.dim
            && t.cols() == self.dim
            && self.action.iter().zip(&target.action).all(|(a, b)| t.mul(a) == b.mul(t))
    }

    /// Whether `s` is invariant under every `M_j`.
    pub fn is_invariant(&self, s: &Subspace) -> bool {
        s.ambient() == self.dim
            && s.basis().iter().all(|v| self.action.iter().all(|m| s.contains(&m.apply(v))))
    }
}

/// A module homomorphism `source → target`, checked on construction.
#[derive(Clone, Debug)]
pub struct ModuleMap {
    pub source: FinMod,
    pub target: FinMod,
    pub matrix: Matrix,
}

impl ModuleMap {
    pub fn new(source: FinMod, target: FinMod, matrix: Matrix) -> Result<Self> {
        if matrix.rows() != target.dim() || matrix.cols() != source.dim() {
            return Err(Error::Shape(format!(
                "map is {}x{}, modules have dims {} -> {}",
                matrix.rows(),
                matrix.cols(),
                source.dim(),
                target.dim()
            )));
        }
        if !source.intertwines(&target, &matrix) {
            return Err(Error::NotIntertwining);
        }
        Ok(ModuleMap { source, target, matrix })
    }

    pub fn identity(e: &FinMod) -> Self {
        ModuleMap { source: e.clone(), target: e.clone(), matrix: Matrix::identity(e.dim()) }
    }

    pub fn is_isomorphism(&self) -> bool {
        self.matrix.inverse().is_some()
    }
}

/// `O₀/I` with the class of `1` as distinguished generator.
#[derive(Clone, Debug)]
pub struct CyclicModule {
    pub module: FinMod,
    pub generator: Vec<Scalar>,
    pub ideal: CofiniteIdeal,
}

/// `O₀/I` in the basis of standard monomials; `x_j` acts by multiplication
/// followed by normal form.
pub fn cyclic_quotient(ideal: &CofiniteIdeal) -> CyclicModule {
    let n = ideal.nvars();
    let basis = ideal.quotient_basis();
    let d = basis.len();
    let action = (0..n)
        .map(|j| {
            let mut m = Matrix::zeros(d, d);
            for (c, s) in basis.iter().enumerate() {
                let img = ideal.normal_form(&Polynomial::term(s.raise(j), Scalar::one()));
                for (r, v) in img.into_iter().enumerate() {
                    m.set(r, c, v);
                }
            }
            m
        })
        .collect();
    let module = FinMod::with_dim(n, ideal.k(), d, action).expect("quotient by a cofinite ideal is a finite module");
    let generator = ideal.normal_form(&Polynomial::one(n));
    CyclicModule { module, generator, ideal: ideal.clone() }
}

/// `E_λ = O₀/I_λ` in the basis `(ℓ̄, 1̄)`, where `ℓ` is any linear form with
/// `ℓ(λ) = 1`; a linear form `ξ` acts by `[[0, ξ(λ)], [0, 0]]`, so a germ
/// `φ` acts by `[[φ(0), ∂_λ φ(0)], [0, φ(0)]]`.
pub fn dual_number_module(lambda: &Vector) -> Result<FinMod> {
    if lambda.is_zero() {
        return Err(Error::ZeroDirection);
    }
    let action = lambda
        .coords()
        .iter()
        .map(|c| {
            let mut m = Matrix::zeros(2, 2);
            m.set(0, 1, c.clone());
            m
        })
        .collect();
    FinMod::with_dim(lambda.nvars(), 1, 2, action)
}

/// Isomorphism from `cyclic_quotient(I_λ)` onto [`dual_number_module`].
pub fn dual_number_iso(lambda: &Vector) -> Result<ModuleMap> {
    let ideal = CofiniteIdeal::at_direction(lambda)?;
    let q = cyclic_quotient(&ideal);
    let target = dual_number_module(lambda)?;
    let mut t = Matrix::zeros(2, 2);
    for (c, s) in ideal.quotient_basis().iter().enumerate() {
        if s.is_one() {
            t.set(1, c, Scalar::one());
        } else {
            // x_j ≡ λ_j ℓ modulo I_λ
            t.set(0, c, s.eval(lambda.coords()));
        }
    }
    ModuleMap::new(q.module, target, t)
}

/// Basis of `S_I(v) = {u ∈ S_k(v) : ⟨p, u⟩ = 0 for all p ∈ I}`.
pub fn annihilator_dual(ideal: &CofiniteIdeal) -> Vec<DiffOp> {
    let n = ideal.nvars();
    let cols = ideal.columns();
    // ⟨x^β, X^γ⟩ = β! δ_βγ
    let rows: Vec<Vec<Scalar>> = ideal
        .reduced_space()
        .basis()
        .iter()
        .map(|r| r.iter().zip(cols).map(|(c, m)| c * &m.factorial()).collect())
        .collect();
    Subspace::from_vectors(cols.len(), rows)
        .orthogonal_basis()
        .into_iter()
        .map(|u| DiffOp::new(Polynomial::from_coefficients(n, cols, &u)))
        .collect()
}

pub fn direct_sum(e: &FinMod, f: &FinMod) -> Result<FinMod> {
    if e.nvars() != f.nvars() {
        return Err(Error::Arity { expected: e.nvars(), found: f.nvars() });
    }
    let action = e
        .action()
        .iter()
        .zip(f.action())
        .map(|(a, b)| Matrix::block_diag(&[a.clone(), b.clone()]))
        .collect();
    FinMod::with_dim(e.nvars(), e.k().max(f.k()), e.dim() + f.dim(), action)
}

/// `E₁ ⊗ ··· ⊗ Eₙ` with `x_j` acting by the Leibniz sum; Kronecker ordering,
/// first factor outermost, and `k = Σ k_i`.
pub fn tensor(factors: &[FinMod]) -> Result<FinMod> {
    let Some(first) = factors.first() else {
        return Err(Error::Degenerate("tensor product of no modules".into()));
    };
    let n = first.nvars();
    let mut acc = first.clone();
    for f in &factors[1..] {
        if f.nvars() != n {
            return Err(Error::Arity { expected: n, found: f.nvars() });
        }
        let ia = Matrix::identity(acc.dim());
        let ib = Matrix::identity(f.dim());
        let action = acc
            .action()
            .iter()
            .zip(f.action())
            .map(|(a, b)| a.kron(&ib).add(&ia.kron(b)))
            .collect();
        acc = FinMod::with_dim(n, acc.k() + f.k(), acc.dim() * f.dim(), action)?;
    }
    Ok(acc)
}

/// The canonical isomorphism `(O₀/M) ⊗ E → E`.
pub fn tensor_unit_witness(e: &FinMod) -> Result<ModuleMap> {
    let t = tensor(&[FinMod::trivial(e.nvars()), e.clone()])?;
    ModuleMap::new(t, e.clone(), Matrix::identity(e.dim()))
}

/// A submodule with its basis (rows of `space`) and inclusion map.
#[derive(Clone, Debug)]
pub struct Submodule {
    pub space: Subspace,
    pub module: FinMod,
    pub inclusion: ModuleMap,
}

/// The smallest invariant subspace containing `vectors`.
pub fn submodule_generated(e: &FinMod, vectors: &[Vec<Scalar>]) -> Result<Submodule> {
    let mut space = Subspace::zero(e.dim());
    let mut queue: Vec<Vec<Scalar>> = Vec::new();
    for v in vectors {
        if v.len() != e.dim() {
            return Err(Error::Shape(format!("vector of length {} in a module of dim {}", v.len(), e.dim())));
        }
        if space.insert(v.clone()) {
            queue.push(v.clone());
        }
    }
    while let Some(v) = queue.pop() {
        for m in e.action() {
            let w = m.apply(&v);
            if space.insert(w.clone()) {
                queue.push(w);
            }
        }
    }
    submodule_of(e, space)
}

/// Wraps an invariant subspace as a module.
pub fn submodule_of(e: &FinMod, space: Subspace) -> Result<Submodule> {
    if !e.is_invariant(&space) {
        return Err(Error::NotInvariant);
    }
    let d = space.dim();
    let action = e
        .action()
        .iter()
        .map(|m| {
            let mut a = Matrix::zeros(d, d);
            for (c, b) in space.basis().iter().enumerate() {
                let coords = space.coordinates(&m.apply(b)).expect("subspace is invariant");
                for (r, v) in coords.into_iter().enumerate() {
                    a.set(r, c, v);
                }
            }
            a
        })
        .collect();
    let module = FinMod::with_dim(e.nvars(), e.k(), d, action)?;
    let mut inc = Matrix::zeros(e.dim(), d);
    for (c, b) in space.basis().iter().enumerate() {
        for (r, v) in b.iter().enumerate() {
            inc.set(r, c, v.clone());
        }
    }
    let inclusion = ModuleMap::new(module.clone(), e.clone(), inc)?;
    Ok(Submodule { space, module, inclusion })
}

/// `E/S` in the basis of unit vectors at the non-pivot positions of `S`.
pub fn quotient_module(e: &FinMod, s: &Subspace) -> Result<(FinMod, ModuleMap)> {
    if s.ambient() != e.dim() {
        return Err(Error::Shape(format!("subspace of dim-{} space in a module of dim {}", s.ambient(), e.dim())));
    }
    if !e.is_invariant(s) {
        return Err(Error::NotInvariant);
    }
    let free = s.free_positions();
    let d = free.len();
    let project = |v: &[Scalar]| -> Vec<Scalar> {
        let r = s.reduce(v);
        free.iter().map(|&f| r[f].clone()).collect()
    };
    let action = e
        .action()
        .iter()
        .map(|m| {
            let mut a = Matrix::zeros(d, d);
            for (c, &f) in free.iter().enumerate() {
                for (r, v) in project(&m.col(f)).into_iter().enumerate() {
                    a.set(r, c, v);
                }
            }
            a
        })
        .collect();
    let q = FinMod::with_dim(e.nvars(), e.k(), d, action)?;
    let mut p = Matrix::zeros(d, e.dim());
    for c in 0..e.dim() {
        for (r, v) in project(&unit_vector(e.dim(), c)).into_iter().enumerate() {
            p.set(r, c, v);
        }
    }
    let proj = ModuleMap::new(e.clone(), q.clone(), p)?;
    Ok((q, proj))
}

/// The polynomial trace of `ann_{O₀}(E)`, with the module's `k`.
pub fn annihilator(e: &FinMod) -> CofiniteIdeal {
    let n = e.nvars();
    let table = e.power_table();
    // columns: coefficients p_β; rows: matrix entries of Σ p_β M^β
    let cols: Vec<Monomial> = table.iter().map(|(b, _)| b.clone()).collect();
    let entries = e.dim() * e.dim();
    let system = Matrix::from_fn(entries, table.len(), |r, c| table[c].1.data()[r].clone());
    let mut gens: Vec<Polynomial> = system
        .nullspace()
        .into_iter()
        .map(|p| Polynomial::from_coefficients(n, &cols, &p))
        .collect();
    gens.extend(Monomial::of_degree(n, e.k() + 1).into_iter().map(|m| Polynomial::term(m, Scalar::one())));
    CofiniteIdeal::new(n, e.k(), gens).expect("annihilator contains M^(k+1)")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::text::parse_polynomial;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    #[test]
    fn quotient_by_maximal_power() {
        let m2 = CofiniteIdeal::maximal_power(2, 1);
        let q = cyclic_quotient(&m2);
        assert_eq!(q.module.dim(), 3);
        assert_eq!(q.generator, alloc::vec![s(1), s(0), s(0)]);
        let m = CofiniteIdeal::maximal_power(2, 0);
        let t = cyclic_quotient(&m);
        assert_eq!(t.module, FinMod::trivial(2));
    }

    #[test]
    fn non_cofinite_generators_are_rejected() {
        let g = alloc::vec![parse_polynomial("x1", 2).unwrap()];
        assert_eq!(CofiniteIdeal::new(2, 3, g).unwrap_err(), Error::NotCofinite { k: 3 });
        let g = alloc::vec![parse_polynomial("x1^2", 1).unwrap()];
        assert!(CofiniteIdeal::new(1, 0, g.clone()).is_err());
        assert!(CofiniteIdeal::new(1, 1, g).is_ok());
    }

    #[test]
    fn unit_ideal_has_codim_zero() {
        let i = CofiniteIdeal::new(2, 0, alloc::vec![parse_polynomial("1 + x1", 2).unwrap()]).unwrap();
        assert_eq!(i.codim(), 0);
        assert_eq!(cyclic_quotient(&i).module.dim(), 0);
        assert!(annihilator_dual(&i).is_empty());
    }

    #[test]
    fn direction_ideal_has_codim_two() {
        let lam = Vector::from_ints(&[1, 2]);
        let i = CofiniteIdeal::at_direction(&lam).unwrap();
        assert_eq!(i.codim(), 2);
        assert!(i.contains(&parse_polynomial("2*x1 - x2", 2).unwrap()));
        assert!(!i.contains(&parse_polynomial("x1", 2).unwrap()));
        assert!(dual_number_iso(&lam).unwrap().is_isomorphism());
        assert_eq!(CofiniteIdeal::at_direction(&Vector::zero(2)).unwrap_err(), Error::ZeroDirection);
    }

    #[test]
    fn dual_number_action_of_a_germ() {
        let lam = Vector::from_ints(&[3]);
        let e = dual_number_module(&lam).unwrap();
        // φ = 2 + 5x + x²: φ(0) = 2, ∂_λ φ(0) = 15
        let m = e.act(&parse_polynomial("2 + 5*x1 + x1^2", 1).unwrap());
        assert_eq!(m, Matrix::from_rows(alloc::vec![alloc::vec![s(2), s(15)], alloc::vec![s(0), s(2)]]).unwrap());
    }

    #[test]
    fn annihilator_dual_of_direction_ideal() {
        let lam = Vector::from_ints(&[1, -1]);
        let i = CofiniteIdeal::at_direction(&lam).unwrap();
        let basis = annihilator_dual(&i);
        let span = Subspace::from_vectors(
            i.columns().len(),
            basis.iter().map(|u| u.coefficients(i.columns())),
        );
        let expected = Subspace::from_vectors(
            i.columns().len(),
            [DiffOp::one(2), DiffOp::direction(&lam)].iter().map(|u| u.coefficients(i.columns())),
        );
        assert_eq!(span, expected);
    }

    #[test]
    fn quotient_of_square_ideal_by_linear_class() {
        let q = cyclic_quotient(&CofiniteIdeal::maximal_power(1, 1));
        // basis (1, x); the span of x̄ is invariant
        let line = Subspace::from_vectors(2, [alloc::vec![s(0), s(1)]]);
        let (e, p) = quotient_module(&q.module, &line).unwrap();
        assert_eq!((e.dim(), e.action()), (1, FinMod::trivial(1).action()));
        assert_eq!(p.matrix.rows(), 1);
        let not_inv = Subspace::from_vectors(2, [alloc::vec![s(1), s(0)]]);
        assert_eq!(quotient_module(&q.module, &not_inv).unwrap_err(), Error::NotInvariant);
    }

    #[test]
    fn annihilator_recovers_ideal() {
        let lam = Vector::from_ints(&[2, 1]);
        let e = dual_number_module(&lam).unwrap();
        assert!(annihilator(&e).same_as(&CofiniteIdeal::at_direction(&lam).unwrap()));
        assert!(annihilator(&FinMod::trivial(2)).same_as(&CofiniteIdeal::maximal_power(2, 0)));
    }

    #[test]
    fn tensor_square_of_dual_numbers() {
        let e = dual_number_module(&Vector::from_ints(&[1])).unwrap();
        let t = tensor(&[e.clone(), e]).unwrap();
        let m = &t.action()[0];
        assert!(!m.mul(m).is_zero());
        assert!(m.mul(m).mul(m).is_zero());
        assert!(tensor(&[]).is_err());
    }
}
