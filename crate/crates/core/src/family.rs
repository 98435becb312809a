//! Toy holomorphic families of representations and the Paley-Wiener
//! membership tests built on them.
//!
//! A family assigns to each label `ξ` a representation of the free group on
//! `g` generators by unimodular polynomial matrices in `λ`. For a module `E`,
//! labels `Ξ` and points `Λ` the assembled representation is
//! `⊕_{(ξ,λ) ∈ Ξ×Λ} π_ξ^(E)(λ)`, blocks ordered with `ξ` outer and `λ` inner.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::approxalg::{
    algebra_closure, end_sharp_membership, invariant_closure, ApproxAlgebra, ApproxModule, SharpMembership,
};
use crate::error::{Error, Result};
use crate::jetfun::{diffop_to_module, functional_to_diffop, iterated_delorme, jet_family, MatPolyFamily};
use crate::linalg::{Matrix, Subspace};
use crate::localmod::FinMod;
use crate::poly::{DiffOp, Polynomial, Vector};
use crate::scalar::Scalar;

/// A generator or its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Self {
        Letter { generator, inverse }
    }

    pub fn inv(self) -> Self {
        Letter { generator: self.generator, inverse: !self.inverse }
    }
}

pub type Word = Vec<Letter>;

/// `det` of a square polynomial matrix, by cofactor expansion along the first row.
fn poly_det(m: &[Vec<Polynomial>], nvars: usize) -> Polynomial {
    let n = m.len();
    if n == 0 {
        return Polynomial::one(nvars);
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = Polynomial::zero(nvars);
    for c in 0..n {
        if m[0][c].is_empty() {
            continue;
        }
        let minor = poly_minor(m, 0, c);
        let term = m[0][c].mul_ref(&poly_det(&minor, nvars));
        acc = if c % 2 == 0 { acc + term } else { acc - term };
    }
    acc
}

fn poly_minor(m: &[Vec<Polynomial>], r: usize, c: usize) -> Vec<Vec<Polynomial>> {
    m.iter()
        .enumerate()
        .filter(|(i, _)| *i != r)
        .map(|(_, row)| row.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, p)| p.clone()).collect())
        .collect()
}

/// One representation `λ ↦ π_ξ(·)(λ)` of the free group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepFamily {
    label: String,
    nvars: usize,
    dim: usize,
    generators: Vec<MatPolyFamily>,
    inverses: Vec<MatPolyFamily>,
}

impl RepFamily {
    /// Checks that every generator has a nonzero constant determinant and
    /// builds its inverse as `adj(g)/det(g)`.
    pub fn new(label: impl Into<String>, nvars: usize, dim: usize, generators: Vec<MatPolyFamily>) -> Result<Self> {
        let label = label.into();
        let mut inverses = Vec::with_capacity(generators.len());
        for (gi, g) in generators.iter().enumerate() {
            if g.nvars() != nvars {
                return Err(Error::Arity { expected: nvars, found: g.nvars() });
            }
            if (g.rows(), g.cols()) != (dim, dim) {
                return Err(Error::Shape(format!("generator {gi} of {label:?} is not {dim}x{dim}")));
            }
            let rows: Vec<Vec<Polynomial>> = (0..dim)
                .map(|r| {
                    (0..dim)
                        .map(|c| {
                            g.get(r, c).as_polynomial().ok_or_else(|| {
                                Error::NotUnimodular(format!("generator {gi} of {label:?} has exponential entries"))
                            })
                        })
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            let det = poly_det(&rows, nvars);
            let inv_det = match det.degree() {
                Some(0) => det.coeff(&crate::poly::Monomial::one(nvars)).inv(),
                _ => None,
            }
            .ok_or_else(|| Error::NotUnimodular(format!("generator {gi} of {label:?} has a non-constant determinant")))?;
            let mut entries = Vec::with_capacity(dim * dim);
            for r in 0..dim {
                for c in 0..dim {
                    let cof = poly_det(&poly_minor(&rows, c, r), nvars).scale(&inv_det);
                    entries.push(if (r + c) % 2 == 0 { cof } else { -cof });
                }
            }
            let inv = MatPolyFamily::from_polynomials(nvars, dim, dim, entries)?;
            if g.mul(&inv)? != MatPolyFamily::identity(nvars, dim) {
                return Err(Error::NotUnimodular(format!("adjugate of generator {gi} of {label:?} is not an inverse")));
            }
            inverses.push(inv);
        }
        Ok(RepFamily { label, nvars, dim, generators, inverses })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[MatPolyFamily] {
        &self.generators
    }

    pub fn inverses(&self) -> &[MatPolyFamily] {
        &self.inverses
    }

    pub fn letter(&self, l: Letter) -> Result<&MatPolyFamily> {
        let table = if l.inverse { &self.inverses } else { &self.generators };
        table
            .get(l.generator)
            .ok_or_else(|| Error::Degenerate(format!("{:?} has no generator {}", self.label, l.generator)))
    }

    /// `λ ↦ π_ξ(x)(λ)` as a polynomial family.
    pub fn word_family(&self, word: &[Letter]) -> Result<MatPolyFamily> {
        word.iter()
            .try_fold(MatPolyFamily::identity(self.nvars, self.dim), |acc, &l| acc.mul(self.letter(l)?))
    }
}

/// All representations, sharing the number of variables and of generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Family {
    nvars: usize,
    generators: usize,
    reps: Vec<RepFamily>,
}

impl Family {
    pub fn new(nvars: usize, reps: Vec<RepFamily>) -> Result<Self> {
        let generators = reps.first().map_or(0, |r| r.generators.len());
        for r in &reps {
            if r.nvars != nvars {
                return Err(Error::Arity { expected: nvars, found: r.nvars });
            }
            if r.generators.len() != generators {
                return Err(Error::Shape(format!(
                    "{:?} has {} generators, expected {generators}",
                    r.label,
                    r.generators.len()
                )));
            }
        }
        for (i, r) in reps.iter().enumerate() {
            if reps[..i].iter().any(|s| s.label == r.label) {
                return Err(Error::Shape(format!("duplicate label {:?}", r.label)));
            }
        }
        Ok(Family { nvars, generators, reps })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn generator_count(&self) -> usize {
        self.generators
    }

    pub fn reps(&self) -> &[RepFamily] {
        &self.reps
    }

    pub fn rep(&self, label: &str) -> Result<&RepFamily> {
        self.reps
            .iter()
            .find(|r| r.label == label)
            .ok_or_else(|| Error::UnknownLabel(label.into()))
    }

    /// All letters `g_1, g_1^{-1}, g_2, ...`.
    pub fn letters(&self) -> Vec<Letter> {
        (0..self.generators).flat_map(|g| [Letter::new(g, false), Letter::new(g, true)]).collect()
    }
}

/// `(E, Ξ, Λ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Setting {
    pub module: FinMod,
    pub labels: Vec<String>,
    pub points: Vec<Vec<Scalar>>,
}

impl Setting {
    pub fn new(module: FinMod, labels: Vec<String>, points: Vec<Vec<Scalar>>) -> Self {
        Setting { module, labels, points }
    }

    /// `(label, point, offset, size)` per block.
    pub fn blocks<'f>(&self, family: &'f Family) -> Result<Vec<(&'f RepFamily, &[Scalar], usize, usize)>> {
        let mut out = Vec::new();
        let mut offset = 0;
        for label in &self.labels {
            let rep = family.rep(label)?;
            for p in &self.points {
                if p.len() != family.nvars() {
                    return Err(Error::Arity { expected: family.nvars(), found: p.len() });
                }
                let size = self.module.dim() * rep.dim();
                out.push((rep, p.as_slice(), offset, size));
                offset += size;
            }
        }
        if self.module.nvars() != family.nvars() {
            return Err(Error::Arity { expected: family.nvars(), found: self.module.nvars() });
        }
        Ok(out)
    }

    pub fn total_dim(&self, family: &Family) -> Result<usize> {
        Ok(self.blocks(family)?.iter().map(|b| b.3).sum())
    }
}

/// `π_{E,Ξ,Λ}` on the letters; words are evaluated by multiplication.
#[derive(Clone, Debug)]
pub struct PiAssembly {
    dim: usize,
    letters: BTreeMap<Letter, Matrix>,
}

impl PiAssembly {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn letter(&self, l: Letter) -> Result<&Matrix> {
        self.letters
            .get(&l)
            .ok_or_else(|| Error::Degenerate(format!("no generator {}", l.generator)))
    }

    pub fn letters(&self) -> impl Iterator<Item = (&Letter, &Matrix)> {
        self.letters.iter()
    }

    pub fn eval(&self, word: &[Letter]) -> Result<Matrix> {
        word.iter().try_fold(Matrix::identity(self.dim), |acc, &l| Ok(acc.mul(self.letter(l)?)))
    }
}

pub fn assemble_pi(family: &Family, setting: &Setting) -> Result<PiAssembly> {
    let blocks = setting.blocks(family)?;
    let dim = blocks.iter().map(|b| b.3).sum();
    let mut letters = BTreeMap::new();
    for l in family.letters() {
        let parts = blocks
            .iter()
            .map(|(rep, point, _, _)| jet_family(rep.letter(l)?, &setting.module)?.eval_numeric(point))
            .collect::<Result<Vec<_>>>()?;
        letters.insert(l, Matrix::block_diag(&parts));
    }
    Ok(PiAssembly { dim, letters })
}

/// `φ_ξ(λ)` for finitely many labels; missing labels are zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PWCandidate {
    nvars: usize,
    components: BTreeMap<String, MatPolyFamily>,
}

impl PWCandidate {
    pub fn zero(nvars: usize) -> Self {
        PWCandidate { nvars, components: BTreeMap::new() }
    }

    pub fn new(nvars: usize, components: BTreeMap<String, MatPolyFamily>) -> Result<Self> {
        for (label, f) in &components {
            if f.nvars() != nvars {
                return Err(Error::Arity { expected: nvars, found: f.nvars() });
            }
            if f.rows() != f.cols() {
                return Err(Error::Shape(format!("component {label:?} is not square")));
            }
        }
        Ok(PWCandidate { nvars, components })
    }

    /// `φ_ξ = Σ c_t π_ξ(x_t)` for every label of the family.
    pub fn from_words(family: &Family, words: &[(Scalar, Word)]) -> Result<Self> {
        let mut components = BTreeMap::new();
        for rep in family.reps() {
            let mut acc = MatPolyFamily::zeros(family.nvars(), rep.dim(), rep.dim());
            for (c, w) in words {
                acc = acc.add(&rep.word_family(w)?.scale(c))?;
            }
            components.insert(rep.label().into(), acc);
        }
        Ok(PWCandidate { nvars: family.nvars(), components })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn components(&self) -> &BTreeMap<String, MatPolyFamily> {
        &self.components
    }

    /// `φ_ξ`, zero when absent.
    pub fn component(&self, rep: &RepFamily) -> Result<MatPolyFamily> {
        match self.components.get(rep.label()) {
            Some(f) if (f.rows(), f.cols()) != (rep.dim(), rep.dim()) => Err(Error::Shape(format!(
                "component {:?} is {}x{}, representation has dim {}",
                rep.label(),
                f.rows(),
                f.cols(),
                rep.dim()
            ))),
            Some(f) => Ok(f.clone()),
            None => Ok(MatPolyFamily::zeros(self.nvars, rep.dim(), rep.dim())),
        }
    }
}

/// `φ_{E,Ξ,Λ} = ⊕ φ_ξ^(E)(λ)`.
pub fn assemble_phi(family: &Family, phi: &PWCandidate, setting: &Setting) -> Result<Matrix> {
    let parts = setting
        .blocks(family)?
        .iter()
        .map(|(rep, point, _, _)| jet_family(&phi.component(rep)?, &setting.module)?.eval_numeric(point))
        .collect::<Result<Vec<_>>>()?;
    Ok(Matrix::block_diag(&parts))
}

/// A basis of `span{π_{E,Ξ,Λ}(x)}` made of word images, with the words.
#[derive(Clone, Debug)]
pub struct SpannedAlgebra {
    pub basis: Vec<Matrix>,
    pub words: Vec<Word>,
    pub space: Subspace,
}

impl SpannedAlgebra {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Closure of `{1}` under left multiplication by the letters.
pub fn spanned_algebra(pi: &PiAssembly) -> SpannedAlgebra {
    let d = pi.dim();
    let mut space = Subspace::zero(d * d);
    let mut basis = Vec::new();
    let mut words: Vec<Word> = Vec::new();
    let one = Matrix::identity(d);
    space.insert(one.data().to_vec());
    basis.push(one);
    words.push(Vec::new());
    let mut next = 0;
    while next < basis.len() {
        let (m, w) = (basis[next].clone(), words[next].clone());
        next += 1;
        for (&l, g) in pi.letters() {
            let p = g.mul(&m);
            if space.insert(p.data().to_vec()) {
                let mut lw = Vec::with_capacity(w.len() + 1);
                lw.push(l);
                lw.extend_from_slice(&w);
                basis.push(p);
                words.push(lw);
            }
        }
    }
    SpannedAlgebra { basis, words, space }
}

/// `(ξ, ψ, λ, u)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ACDatum {
    pub label: String,
    pub psi: Matrix,
    pub point: Vec<Scalar>,
    pub u: DiffOp,
}

/// `⟨φ_{ξ,λ;u}, ψ⟩ = ⟨(∂_u φ_ξ)(λ), ψ⟩`.
pub fn datum_pairing(family: &Family, phi: &PWCandidate, datum: &ACDatum) -> Result<Scalar> {
    let rep = family.rep(&datum.label)?;
    if (datum.psi.rows(), datum.psi.cols()) != (rep.dim(), rep.dim()) {
        return Err(Error::Shape(format!("functional on End of {:?} must be {1}x{1}", datum.label, rep.dim())));
    }
    let value = phi.component(rep)?.diff(&datum.u)?.eval_numeric(&datum.point)?;
    Ok(value.pair(&datum.psi))
}

/// `Σ_i ⟨φ_{ξ_i,λ_i;u_i}, ψ_i⟩`.
pub fn ac_pairing(family: &Family, phi: &PWCandidate, data: &[ACDatum]) -> Result<Scalar> {
    data.iter()
        .try_fold(Scalar::zero(), |acc, d| Ok(acc + datum_pairing(family, phi, d)?))
}

/// `(E, Ξ, Λ, Ψ)` with `⟨φ_{E,Ξ,Λ}, Ψ⟩ = Σ_i ⟨φ_{ξ_i,λ_i;u_i}, ψ_i⟩`.
#[derive(Clone, Debug)]
pub struct ACFunctional {
    pub setting: Setting,
    pub psi: Matrix,
}

/// `E = ⊕_i O₀/M^(ord u_i + 1)` and `Ψ = Σ_i pr*_{ξ_i,λ_i}(η_{u_i} ⊗ ψ_i)`.
pub fn ac_to_functional(family: &Family, data: &[ACDatum]) -> Result<ACFunctional> {
    let ops: Vec<DiffOp> = data.iter().map(|d| d.u.clone()).collect();
    let (module, etas) = diffop_to_module(family.nvars(), &ops)?;
    let mut labels: Vec<String> = Vec::new();
    let mut points: Vec<Vec<Scalar>> = Vec::new();
    for d in data {
        family.rep(&d.label)?;
        if !labels.contains(&d.label) {
            labels.push(d.label.clone());
        }
        if !points.contains(&d.point) {
            points.push(d.point.clone());
        }
    }
    let setting = Setting::new(module, labels, points);
    let blocks = setting.blocks(family)?;
    let total: usize = blocks.iter().map(|b| b.3).sum();
    let mut psi = Matrix::zeros(total, total);
    for (d, eta) in data.iter().zip(&etas) {
        let (rep, _, offset, size) = blocks
            .iter()
            .find(|(rep, p, _, _)| rep.label() == d.label && *p == d.point.as_slice())
            .expect("every datum has a block");
        if (d.psi.rows(), d.psi.cols()) != (rep.dim(), rep.dim()) {
            return Err(Error::Shape(format!("functional on End of {:?} has the wrong size", d.label)));
        }
        let piece = eta.kron(&d.psi);
        let current = psi.block(*offset, *offset, *size, *size);
        psi.set_block(*offset, *offset, &current.add(&piece));
    }
    Ok(ACFunctional { setting, psi })
}

/// The data of a functional, plus whether off-diagonal blocks were dropped.
#[derive(Clone, Debug)]
pub struct ACTranslation {
    pub data: Vec<ACDatum>,
    /// `Ψ` had nonzero entries outside the diagonal blocks; those annihilate
    /// every `φ_{E,Ξ,Λ}` and were discarded.
    pub discarded_cross_terms: bool,
}

/// Splits each diagonal block of `Ψ` as `Σ_{a,b} e*_{ab} ⊗ ψ^{ab}` and turns
/// each `e*_{ab}` into a differential operator.
pub fn functional_to_ac(family: &Family, setting: &Setting, psi: &Matrix) -> Result<ACTranslation> {
    let blocks = setting.blocks(family)?;
    let total: usize = blocks.iter().map(|b| b.3).sum();
    if (psi.rows(), psi.cols()) != (total, total) {
        return Err(Error::Shape(format!("functional must be {total}x{total}")));
    }
    let e = &setting.module;
    let d = e.dim();
    let mut data = Vec::new();
    let mut diagonal = Matrix::zeros(total, total);
    for (rep, point, offset, size) in &blocks {
        let block = psi.block(*offset, *offset, *size, *size);
        diagonal.set_block(*offset, *offset, &block);
        let n = rep.dim();
        for a in 0..d {
            for b in 0..d {
                let piece = block.block(a * n, b * n, n, n);
                if piece.is_zero() {
                    continue;
                }
                let mut eta = Matrix::zeros(d, d);
                eta.set(a, b, Scalar::one());
                data.push(ACDatum {
                    label: rep.label().into(),
                    psi: piece,
                    point: point.to_vec(),
                    u: functional_to_diffop(e, &eta)?,
                });
            }
        }
    }
    Ok(ACTranslation { data, discarded_cross_terms: diagonal != *psi })
}

/// `Σ_i ⟨π_{ξ_i,λ_i;u_i}(x), ψ_i⟩ = 0` for every word `x`, decided on a
/// spanning set of word images.
pub fn is_ac_sequence(family: &Family, data: &[ACDatum]) -> Result<bool> {
    if data.is_empty() {
        return Ok(true);
    }
    let f = ac_to_functional(family, data)?;
    let span = spanned_algebra(&assemble_pi(family, &f.setting)?);
    Ok(span.basis.iter().all(|m| m.pair(&f.psi).is_zero()))
}

/// Whether `φ` satisfies the relation of an Arthur-Campoli sequence.
pub fn ac_check(family: &Family, phi: &PWCandidate, data: &[ACDatum]) -> Result<bool> {
    if !is_ac_sequence(family, data)? {
        return Err(Error::NotArthurCampoli);
    }
    Ok(ac_pairing(family, phi, data)?.is_zero())
}

/// The three membership verdicts for `φ_{E,Ξ,Λ}`.
#[derive(Clone, Debug)]
pub struct PwReport {
    /// `φ_{E,Ξ,Λ} ∈ (span^⊥)^⊥`.
    pub annihilator: bool,
    /// `φ_{E,Ξ,Λ} = Σ c_t π(x_t)` solved against the spanning words.
    pub algebra: bool,
    /// `φ_{E,Ξ,Λ} ∈ End(π_{E,Ξ,Λ})^#`.
    pub sharp: bool,
    pub algebra_dim: usize,
    /// A `Ψ ⊥ span` with `⟨φ, Ψ⟩ ≠ 0`.
    pub separating: Option<Matrix>,
    /// Coefficients over the spanning words.
    pub combination: Option<Vec<Scalar>>,
    pub sharp_witness: SharpMembership,
}

impl PwReport {
    pub fn unanimous(&self) -> bool {
        self.annihilator == self.algebra && self.algebra == self.sharp
    }
}

pub fn pw_membership_triple(family: &Family, phi: &PWCandidate, setting: &Setting) -> Result<PwReport> {
    let pi = assemble_pi(family, setting)?;
    let target = assemble_phi(family, phi, setting)?;
    let d = pi.dim();
    let span = spanned_algebra(&pi);

    let perp = span.space.orthogonal_basis();
    let separating = perp
        .iter()
        .find(|f| !crate::linalg::dot(f, target.data()).is_zero())
        .map(|f| Matrix::from_vec(d, d, f.clone()).expect("flattened functional"));

    let system = Matrix::from_fn(d * d, span.basis.len(), |r, c| span.basis[c].data()[r].clone());
    let combination = system.solve(target.data());

    let (alg, basis) = ApproxAlgebra::from_matrices(&span.basis, &[Matrix::identity(d)])?;
    let module = ApproxModule::new(alg, d, basis)?;
    let sharp_witness = end_sharp_membership(&module, &target)?;

    Ok(PwReport {
        annihilator: separating.is_none(),
        algebra: combination.is_some(),
        sharp: sharp_witness.is_member(),
        algebra_dim: span.dim(),
        separating,
        combination,
        sharp_witness,
    })
}

/// `(ξ, λ, η_1, ..., η_n)` for one summand of `π_δ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DelormeDatum {
    pub label: String,
    pub point: Vec<Scalar>,
    pub etas: Vec<Vector>,
}

/// Outcome of the intertwining conditions for `φ_δ`.
#[derive(Clone, Debug)]
pub struct DelormeReport {
    /// `φ_δ` preserves the submodule generated by the basis tuple.
    pub condition_a: bool,
    /// `φ_δ` intertwines every computed intertwiner `U → V` with `U` cyclic or `V`.
    pub condition_b: bool,
    /// For every such intertwiner the graph test and direct commutation agreed.
    pub graph_consistent: bool,
    pub dim: usize,
}

/// Intertwiners `T: U → V` of the restricted action, `U` given by a basis.
fn intertwiners(gens: &[Matrix], u: &Subspace) -> Vec<Matrix> {
    let d = gens.first().map_or(0, |g| g.rows());
    let ub = u.basis();
    let m = ub.len();
    // g restricted to U in the basis of U
    let restricted: Vec<Matrix> = gens
        .iter()
        .map(|g| {
            let cols: Vec<Vec<Scalar>> = ub.iter().map(|b| u.coordinates(&g.apply(b)).expect("U is invariant")).collect();
            Matrix::from_fn(m, m, |r, c| cols[c][r].clone())
        })
        .collect();
    // unknown T (d×m), row-major; equations T g_U - g T = 0
    let unknowns = d * m;
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for (g, gu) in gens.iter().zip(&restricted) {
        for r in 0..d {
            for c in 0..m {
                let mut eq = alloc::vec![Scalar::zero(); unknowns];
                for s in 0..m {
                    eq[r * m + s] += gu.get(s, c);
                }
                for s in 0..d {
                    eq[s * m + c] -= g.get(r, s);
                }
                rows.push(eq);
            }
        }
    }
    let kernel = if rows.is_empty() {
        (0..unknowns).map(|i| crate::linalg::unit_vector(unknowns, i)).collect()
    } else {
        Matrix::from_rows(rows).expect("rectangular system").nullspace()
    };
    kernel
        .into_iter()
        .map(|v| Matrix::from_vec(d, m, v).expect("intertwiner shape"))
        .collect()
}

pub fn delorme_condition_check(family: &Family, phi: &PWCandidate, data: &[DelormeDatum]) -> Result<DelormeReport> {
    let mut letter_blocks: BTreeMap<Letter, Vec<Matrix>> = BTreeMap::new();
    let mut phi_blocks = Vec::new();
    for datum in data {
        let rep = family.rep(&datum.label)?;
        if datum.point.len() != family.nvars() {
            return Err(Error::Arity { expected: family.nvars(), found: datum.point.len() });
        }
        for l in family.letters() {
            let m = iterated_delorme(rep.letter(l)?, &datum.etas)?.eval_numeric(&datum.point)?;
            letter_blocks.entry(l).or_default().push(m);
        }
        phi_blocks.push(iterated_delorme(&phi.component(rep)?, &datum.etas)?.eval_numeric(&datum.point)?);
    }
    let target = Matrix::block_diag(&phi_blocks);
    let dim = target.rows();
    let mut gens: Vec<Matrix> = letter_blocks.values().map(|b| Matrix::block_diag(b)).collect();
    gens.push(Matrix::identity(dim));
    let algebra = algebra_closure(&gens);

    // (a): the submodule of V^{×dim} generated by (e_1, ..., e_dim)
    let n = dim;
    let big: Vec<Matrix> = algebra.iter().map(|a| Matrix::block_diag(&alloc::vec![a.clone(); n])).collect();
    let tuple: Vec<Scalar> = (0..n).flat_map(|i| crate::linalg::unit_vector(dim, i)).collect();
    let w = invariant_closure(n * dim, &big, &[tuple]);
    let phi_big = Matrix::block_diag(&alloc::vec![target.clone(); n]);
    let condition_a = w.basis().iter().all(|v| w.contains(&phi_big.apply(v)));

    // (b): intertwiners U → V for U = V and every cyclic submodule A e_i
    let mut sources = alloc::vec![Subspace::full(dim)];
    for i in 0..dim {
        let u = invariant_closure(dim, &gens, &[crate::linalg::unit_vector(dim, i)]);
        if !sources.contains(&u) {
            sources.push(u);
        }
    }
    let mut condition_b = true;
    let mut graph_consistent = true;
    for u in &sources {
        let preserves_u = u.basis().iter().all(|b| u.contains(&target.apply(b)));
        for t in intertwiners(&gens, u) {
            let ub = u.basis();
            // T ∘ φ|_U = φ ∘ T, with φ|_U in U-coordinates
            let commutes = preserves_u
                && ub.iter().enumerate().all(|(c, b)| {
                    let phi_b = u.coordinates(&target.apply(b)).expect("φ preserves U");
                    let lhs = t.apply(&phi_b);
                    let rhs = target.apply(&t.col(c));
                    lhs == rhs
                });
            // graph {(x, T x)} ⊆ V ⊕ V is π⊕π-invariant; test φ⊕φ on it
            let graph = Subspace::from_vectors(
                2 * dim,
                ub.iter().enumerate().map(|(c, b)| b.iter().cloned().chain(t.col(c)).collect()),
            );
            let phi2 = Matrix::block_diag(&[target.clone(), target.clone()]);
            let graph_ok = graph.basis().iter().all(|v| graph.contains(&phi2.apply(v)));
            graph_consistent &= graph_ok == commutes;
            condition_b &= commutes;
        }
    }
    Ok(DelormeReport { condition_a, condition_b, graph_consistent, dim })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localmod::{cyclic_quotient, CofiniteIdeal};
    use crate::poly::text::parse_polynomial;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    fn fam(nvars: usize, rows: &[&str]) -> MatPolyFamily {
        let n = (rows.len() as f64).sqrt() as usize;
        let entries = rows.iter().map(|t| parse_polynomial(t, nvars).unwrap()).collect();
        MatPolyFamily::from_polynomials(nvars, n, n, entries).unwrap()
    }

    fn reducible() -> Family {
        let a = fam(1, &["1", "x1", "0", "1"]);
        let b = fam(1, &["2", "0", "0", "1/2"]);
        Family::new(1, alloc::vec![RepFamily::new("xi", 1, 2, alloc::vec![a, b]).unwrap()]).unwrap()
    }

    fn trivial_setting(points: Vec<Vec<Scalar>>) -> Setting {
        Setting::new(FinMod::trivial(1), alloc::vec!["xi".into()], points)
    }

    #[test]
    fn inverses_are_polynomial() {
        let f = reducible();
        let rep = f.rep("xi").unwrap();
        assert_eq!(rep.inverses()[0], fam(1, &["1", "-x1", "0", "1"]));
        assert!(RepFamily::new("bad", 1, 2, alloc::vec![fam(1, &["x1", "0", "0", "1"])]).is_err());
        assert!(matches!(f.rep("nope"), Err(Error::UnknownLabel(_))));
    }

    #[test]
    fn words_multiply() {
        let f = reducible();
        let pi = assemble_pi(&f, &trivial_setting(alloc::vec![alloc::vec![s(3)]])).unwrap();
        let w1 = alloc::vec![Letter::new(0, false), Letter::new(1, true)];
        let w2 = alloc::vec![Letter::new(1, false), Letter::new(0, false), Letter::new(0, true)];
        let joined: Word = w1.iter().chain(&w2).copied().collect();
        assert_eq!(pi.eval(&joined).unwrap(), pi.eval(&w1).unwrap().mul(&pi.eval(&w2).unwrap()));
        assert_eq!(pi.eval(&[]).unwrap(), Matrix::identity(2));
    }

    #[test]
    fn dual_number_block_has_derivative_corner() {
        let f = reducible();
        let e = cyclic_quotient(&CofiniteIdeal::at_direction(&Vector::from_ints(&[1])).unwrap()).module;
        let pi = assemble_pi(&f, &Setting::new(e, alloc::vec!["xi".into()], alloc::vec![alloc::vec![s(3)]])).unwrap();
        let g = pi.letter(Letter::new(0, false)).unwrap();
        assert_eq!(g.rows(), 4);
        // π(g)(3) = [[1,3],[0,1]], ∂π(g) = [[0,1],[0,0]]
        let mut value = [g.block(0, 0, 2, 2), g.block(0, 2, 2, 2), g.block(2, 0, 2, 2), g.block(2, 2, 2, 2)];
        value.sort_by_key(|m| m.data().iter().filter(|x| !x.is_zero()).count());
        assert!(value[0].is_zero());
        assert_eq!(value[1], Matrix::from_rows(alloc::vec![alloc::vec![s(0), s(1)], alloc::vec![s(0), s(0)]]).unwrap());
    }

    #[test]
    fn triple_on_reducible_family() {
        let f = reducible();
        let setting = trivial_setting(alloc::vec![alloc::vec![s(1)], alloc::vec![s(2)]]);
        let word = PWCandidate::from_words(&f, &[(s(1), alloc::vec![Letter::new(0, false), Letter::new(1, false)])]).unwrap();
        let r = pw_membership_triple(&f, &word, &setting).unwrap();
        assert!(r.unanimous() && r.sharp);

        let mut comps = BTreeMap::new();
        comps.insert("xi".into(), fam(1, &["0", "0", "1", "0"]));
        let escape = PWCandidate::new(1, comps).unwrap();
        let r = pw_membership_triple(&f, &escape, &setting).unwrap();
        assert!(r.unanimous() && !r.sharp);
        assert!(r.separating.is_some());
    }

    #[test]
    fn ac_translations_agree() {
        let f = reducible();
        let psi = Matrix::from_rows(alloc::vec![alloc::vec![s(1), s(2)], alloc::vec![s(0), s(-1)]]).unwrap();
        let data = alloc::vec![
            ACDatum { label: "xi".into(), psi: psi.clone(), point: alloc::vec![s(1)], u: DiffOp::one(1) },
            ACDatum {
                label: "xi".into(),
                psi,
                point: alloc::vec![s(1)],
                u: crate::poly::text::parse_diffop("X1^2 - 3*X1", 1).unwrap(),
            },
        ];
        let func = ac_to_functional(&f, &data).unwrap();
        let phi = PWCandidate::from_words(&f, &[(s(2), alloc::vec![Letter::new(0, false)]), (s(1), alloc::vec![Letter::new(1, true)])])
            .unwrap();
        let lhs = assemble_phi(&f, &phi, &func.setting).unwrap().pair(&func.psi);
        assert_eq!(lhs, ac_pairing(&f, &phi, &data).unwrap());
        let back = functional_to_ac(&f, &func.setting, &func.psi).unwrap();
        assert!(!back.discarded_cross_terms);
        assert_eq!(ac_pairing(&f, &phi, &back.data).unwrap(), lhs);
    }

    #[test]
    fn delorme_conditions() {
        let f = reducible();
        let data = alloc::vec![DelormeDatum { label: "xi".into(), point: alloc::vec![s(1)], etas: alloc::vec![Vector::from_ints(&[1])] }];
        let word = PWCandidate::from_words(&f, &[(s(1), alloc::vec![Letter::new(0, false)])]).unwrap();
        let r = delorme_condition_check(&f, &word, &data).unwrap();
        assert!(r.condition_a && r.condition_b && r.graph_consistent);
        let mut comps = BTreeMap::new();
        comps.insert("xi".into(), fam(1, &["0", "0", "1", "0"]));
        let escape = PWCandidate::new(1, comps).unwrap();
        let r = delorme_condition_check(&f, &escape, &data).unwrap();
        assert!(!r.condition_a && r.graph_consistent);
    }
}
