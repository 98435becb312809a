//! The derivation functor `f ↦ f^(E)` and the machinery around it.
//!
//! For a finite module `E` and a germ `f`, `f^(E)(μ) = m_E(γ₀(T_μ^* f))`. By
//! Taylor's formula this is `Σ_{|β|≤k} ∂^β f(μ)/β! · M^β`, which is how it is
//! computed. Families of matrices are polynomial (or exponential-polynomial)
//! in `λ`, so every identity below is an identity of such families.
//!
//! Index conventions: `E ⊗ V` uses index `a·dim V + v`, so the module factor
//! is outermost, matching [`Matrix::kron`] and [`crate::localmod::tensor`].

use alloc::format;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Subspace};
use crate::localmod::{
    annihilator_dual, cyclic_quotient, dual_number_iso, tensor, CofiniteIdeal, FinMod,
};
use crate::poly::{coproduct, Covector, DiffOp, ExpPoly, Monomial, Polynomial, Vector};
use crate::scalar::{ExpScalar, Ring, Scalar};

/// A `rows × cols` matrix whose entries are exponential polynomials in `λ`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MatPolyFamily {
    nvars: usize,
    rows: usize,
    cols: usize,
    entries: Vec<ExpPoly>,
}

impl MatPolyFamily {
    pub fn new(nvars: usize, rows: usize, cols: usize, entries: Vec<ExpPoly>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Shape(format!("{} entries for a {rows}x{cols} family", entries.len())));
        }
        if let Some(e) = entries.iter().find(|e| e.nvars() != nvars) {
            return Err(Error::Arity { expected: nvars, found: e.nvars() });
        }
        Ok(MatPolyFamily { nvars, rows, cols, entries })
    }

    pub fn from_polynomials(nvars: usize, rows: usize, cols: usize, entries: Vec<Polynomial>) -> Result<Self> {
        MatPolyFamily::new(nvars, rows, cols, entries.iter().map(ExpPoly::from_poly).collect())
    }

    pub fn zeros(nvars: usize, rows: usize, cols: usize) -> Self {
        MatPolyFamily { nvars, rows, cols, entries: alloc::vec![ExpPoly::zero(nvars); rows * cols] }
    }

    pub fn identity(nvars: usize, n: usize) -> Self {
        MatPolyFamily::constant(nvars, &Matrix::identity(n))
    }

    pub fn constant(nvars: usize, m: &Matrix) -> Self {
        let entries = m
            .data()
            .iter()
            .map(|c| ExpPoly::constant(nvars, ExpScalar::from(c.clone())))
            .collect();
        MatPolyFamily { nvars, rows: m.rows(), cols: m.cols(), entries }
    }

    /// A scalar function as a `1 × 1` family.
    pub fn scalar(f: ExpPoly) -> Self {
        MatPolyFamily { nvars: f.nvars(), rows: 1, cols: 1, entries: alloc::vec![f] }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &ExpPoly {
        &self.entries[i * self.cols + j]
    }

    pub fn entries(&self) -> &[ExpPoly] {
        &self.entries
    }

    pub fn map(&self, f: impl Fn(&ExpPoly) -> ExpPoly) -> Self {
        MatPolyFamily {
            nvars: self.nvars,
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    /// The matrix `F(λ)`, with formal exponential units where they occur.
    pub fn eval(&self, point: &[Scalar]) -> Result<Matrix<ExpScalar>> {
        let data = self.entries.iter().map(|e| e.eval(point)).collect::<Result<Vec<_>>>()?;
        Matrix::from_vec(self.rows, self.cols, data)
    }

    /// `F(λ)` as a plain scalar matrix; fails on formal exponential units.
    pub fn eval_numeric(&self, point: &[Scalar]) -> Result<Matrix> {
        let m = self.eval(point)?;
        let data = m.data().iter().map(|c| c.as_scalar().ok_or(Error::NotNumeric)).collect::<Result<Vec<_>>>()?;
        Matrix::from_vec(self.rows, self.cols, data)
    }

    fn check_same(&self, rhs: &MatPolyFamily) -> Result<()> {
        if self.nvars != rhs.nvars {
            return Err(Error::Arity { expected: self.nvars, found: rhs.nvars });
        }
        if (self.rows, self.cols) != (rhs.rows, rhs.cols) {
            return Err(Error::Shape(format!(
                "{}x{} against {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(())
    }

    pub fn add(&self, rhs: &MatPolyFamily) -> Result<Self> {
        self.check_same(rhs)?;
        let entries = self.entries.iter().zip(&rhs.entries).map(|(a, b)| a.clone() + b.clone()).collect();
        Ok(MatPolyFamily { entries, ..self.clone() })
    }

    pub fn sub(&self, rhs: &MatPolyFamily) -> Result<Self> {
        self.check_same(rhs)?;
        let entries = self.entries.iter().zip(&rhs.entries).map(|(a, b)| a.clone() - b.clone()).collect();
        Ok(MatPolyFamily { entries, ..self.clone() })
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        self.map(|e| e.scale(s))
    }

    /// Pointwise product `(TS)(λ) = T(λ) S(λ)`.
    pub fn mul(&self, rhs: &MatPolyFamily) -> Result<Self> {
        if self.nvars != rhs.nvars {
            return Err(Error::Arity { expected: self.nvars, found: rhs.nvars });
        }
        if self.cols != rhs.rows {
            return Err(Error::Shape(format!("{}x{} times {}x{}", self.rows, self.cols, rhs.rows, rhs.cols)));
        }
        let mut entries = Vec::with_capacity(self.rows * rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc = ExpPoly::zero(self.nvars);
                for l in 0..self.cols {
                    let a = self.get(i, l);
                    let b = rhs.get(l, j);
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc + a.clone() * b.clone();
                    }
                }
                entries.push(acc);
            }
        }
        Ok(MatPolyFamily { nvars: self.nvars, rows: self.rows, cols: rhs.cols, entries })
    }

    /// `A · F` for a constant matrix `A`.
    pub fn left_mul(&self, a: &Matrix) -> Result<Self> {
        MatPolyFamily::constant(self.nvars, a).mul(self)
    }

    /// `F · A` for a constant matrix `A`.
    pub fn right_mul(&self, a: &Matrix) -> Result<Self> {
        self.mul(&MatPolyFamily::constant(self.nvars, a))
    }

    /// `λ ↦ F(λ + μ)`.
    pub fn translate(&self, mu: &Vector) -> Result<Self> {
        let entries = self.entries.iter().map(|e| e.translate(mu)).collect::<Result<Vec<_>>>()?;
        Ok(MatPolyFamily { entries, ..self.clone() })
    }

    /// Entrywise `∂_u`.
    pub fn diff(&self, u: &DiffOp) -> Result<Self> {
        let entries = self.entries.iter().map(|e| e.diff(u)).collect::<Result<Vec<_>>>()?;
        Ok(MatPolyFamily { entries, ..self.clone() })
    }

    pub fn block_diag(nvars: usize, blocks: &[MatPolyFamily]) -> Result<Self> {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = MatPolyFamily::zeros(nvars, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            if b.nvars != nvars {
                return Err(Error::Arity { expected: nvars, found: b.nvars });
            }
            out.set_block(r0, c0, b);
            r0 += b.rows;
            c0 += b.cols;
        }
        Ok(out)
    }

    fn set_block(&mut self, r0: usize, c0: usize, b: &MatPolyFamily) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self.entries[(r0 + i) * self.cols + c0 + j] = b.get(i, j).clone();
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(self.get(r0 + i, c0 + j).clone());
            }
        }
        MatPolyFamily { nvars: self.nvars, rows, cols, entries }
    }
}

/// `η(F) = Σ H_ij F_ij` for a functional given by its matrix `H`.
pub fn apply_functional(h: &Matrix, f: &MatPolyFamily) -> Result<ExpPoly> {
    if (h.rows(), h.cols()) != (f.rows(), f.cols()) {
        return Err(Error::Shape(format!("functional {}x{} on a {}x{} family", h.rows(), h.cols(), f.rows(), f.cols())));
    }
    let mut acc = ExpPoly::zero(f.nvars());
    for (c, e) in h.data().iter().zip(f.entries()) {
        if !c.is_zero() {
            acc = acc + e.scale(c);
        }
    }
    Ok(acc)
}

fn check_module_arity(nvars: usize, e: &FinMod) -> Result<()> {
    if e.nvars() != nvars {
        return Err(Error::Arity { expected: e.nvars(), found: nvars });
    }
    Ok(())
}

/// `J_I f(μ) = pr_I(γ₀(T_μ^* f))`, in coordinates over the quotient basis.
pub fn jet_ideal(f: &ExpPoly, ideal: &CofiniteIdeal, mu: &Vector) -> Result<Vec<ExpScalar>> {
    if f.nvars() != ideal.nvars() {
        return Err(Error::Arity { expected: ideal.nvars(), found: f.nvars() });
    }
    let germ = f.translate(mu)?.taylor(ideal.k());
    Ok(ideal.normal_form(&germ))
}

/// `⟨c, u⟩` for a class `c ∈ O₀/I` given in quotient coordinates.
pub fn pair_quotient<C: Ring>(ideal: &CofiniteIdeal, class: &[C], u: &DiffOp) -> C {
    ideal
        .quotient_basis()
        .iter()
        .zip(class)
        .fold(C::zero(), |acc, (s, c)| acc + c.scale(&(&s.factorial() * &u.symbol().coeff(s))))
}

/// `f^(E)`, computed as `Σ_{|β|≤k} ∂^β f/β! ⊗ M^β`.
pub fn jet(f: &ExpPoly, e: &FinMod) -> Result<MatPolyFamily> {
    jet_family(&MatPolyFamily::scalar(f.clone()), e)
}

/// `T^(E)` on `E ⊗ V₁ → E ⊗ V₂`; entry `(a·r₁ + r, b·c₁ + c)` is `(T_rc)^(E)_ab`.
pub fn jet_family(t: &MatPolyFamily, e: &FinMod) -> Result<MatPolyFamily> {
    check_module_arity(t.nvars(), e)?;
    let d = e.dim();
    let (r1, c1) = (t.rows(), t.cols());
    let mut out = MatPolyFamily::zeros(t.nvars(), d * r1, d * c1);
    let table = e.power_table();
    for (beta, m) in &table {
        if m.is_zero() {
            continue;
        }
        let inv = beta.factorial().inv().expect("factorial is nonzero");
        for r in 0..r1 {
            for c in 0..c1 {
                let entry = t.get(r, c);
                if entry.is_zero() {
                    continue;
                }
                let der = entry.diff_monomial(beta).scale(&inv);
                if der.is_zero() {
                    continue;
                }
                for a in 0..d {
                    for b in 0..d {
                        let w = m.get(a, b);
                        if w.is_zero() {
                            continue;
                        }
                        let idx = (a * r1 + r) * out.cols + b * c1 + c;
                        let cur = core::mem::replace(&mut out.entries[idx], ExpPoly::zero(t.nvars()));
                        out.entries[idx] = cur + der.scale(w);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Delorme's derivative `Φ^(η) = [[Φ, ∂_η Φ], [0, Φ]]` on `V ⊕ V ≅ C² ⊗ V`.
pub fn delorme_derivative(phi: &MatPolyFamily, eta: &Vector) -> Result<MatPolyFamily> {
    if eta.nvars() != phi.nvars() {
        return Err(Error::Arity { expected: phi.nvars(), found: eta.nvars() });
    }
    let d = phi.diff(&DiffOp::direction(eta))?;
    let (r, c) = (phi.rows(), phi.cols());
    let mut out = MatPolyFamily::zeros(phi.nvars(), 2 * r, 2 * c);
    out.set_block(0, 0, phi);
    out.set_block(0, c, &d);
    out.set_block(r, c, phi);
    Ok(out)
}

/// `(···(Φ^(η_N))^(η_{N-1})···)^(η_1)`: `η_N` is applied first, `η_1` last,
/// so the `C²` factor of `η_1` is outermost.
pub fn iterated_delorme(phi: &MatPolyFamily, etas: &[Vector]) -> Result<MatPolyFamily> {
    etas.iter().rev().try_fold(phi.clone(), |acc, eta| delorme_derivative(&acc, eta))
}

/// `κ: C² → O₀/I_η`, `(z₁, z₂) ↦ z₁ ℓ̄ + z₂ 1̄` with `ℓ(η) = 1`, as a matrix
/// into the standard-monomial basis of `cyclic_quotient(I_η)`.
pub fn kappa(eta: &Vector) -> Result<Matrix> {
    let iso = dual_number_iso(eta)?;
    iso.matrix.inverse().ok_or_else(|| Error::Inconsistent("dual number isomorphism is singular".into()))
}

/// `κ₁ ⊗ ··· ⊗ κ_N`.
pub fn kappa_sequence(etas: &[Vector]) -> Result<Matrix> {
    etas.iter().try_fold(Matrix::identity(1), |acc, eta| Ok(acc.kron(&kappa(eta)?)))
}

/// `E_η = O₀/I_{η₁} ⊗ ··· ⊗ O₀/I_{η_N}`, each factor as `cyclic_quotient(I_η)`.
pub fn delorme_module(etas: &[Vector]) -> Result<FinMod> {
    let factors = etas
        .iter()
        .map(|eta| Ok(cyclic_quotient(&CofiniteIdeal::at_direction(eta)?).module))
        .collect::<Result<Vec<_>>>()?;
    if factors.is_empty() {
        return Err(Error::Degenerate("empty direction sequence".into()));
    }
    tensor(&factors)
}

/// `κ_*(A) = (K ⊗ 1_V) A (K ⊗ 1_V)^{-1}` for a family on `C^{2^N} ⊗ V`.
pub fn kappa_push(k: &Matrix, family: &MatPolyFamily, dim_v: usize) -> Result<MatPolyFamily> {
    let big = k.kron(&Matrix::identity(dim_v));
    let inv = big.inverse().ok_or_else(|| Error::Degenerate("kappa is not invertible".into()))?;
    family.left_mul(&big)?.right_mul(&inv)
}

/// The `u ∈ S(v)` with `η ∘ f^(E) = ∂_u f` for every germ `f`.
///
/// `η = Σ_j e*_j ⊗ e_j` with `e_j` the basis vectors; each term is a
/// functional on `O₀/ann(e_j)`, matched with the annihilator `S_ann(e_j)`.
pub fn functional_to_diffop(e: &FinMod, eta: &Matrix) -> Result<DiffOp> {
    let d = e.dim();
    if (eta.rows(), eta.cols()) != (d, d) {
        return Err(Error::Shape(format!("functional {}x{} on End of a dim-{d} module", eta.rows(), eta.cols())));
    }
    let n = e.nvars();
    let table = e.power_table();
    let mut u = DiffOp::zero(n);
    for j in 0..d {
        let estar = eta.col(j);
        if estar.iter().all(Zero::is_zero) {
            continue;
        }
        // ann(e_j) ∩ P_{≤k}: kernel of p ↦ m(p) e_j
        let cols: Vec<Monomial> = table.iter().map(|(b, _)| b.clone()).collect();
        let system = Matrix::from_fn(d, table.len(), |r, c| table[c].1.get(r, j).clone());
        let mut gens: Vec<Polynomial> = system
            .nullspace()
            .into_iter()
            .map(|p| Polynomial::from_coefficients(n, &cols, &p))
            .collect();
        gens.extend(Monomial::of_degree(n, e.k() + 1).into_iter().map(|m| Polynomial::term(m, Scalar::one())));
        let ideal = CofiniteIdeal::new(n, e.k(), gens)?;
        let dual = annihilator_dual(&ideal);
        let standard = ideal.quotient_basis();
        // Σ_i c_i ⟨x^s, u_i⟩ = e*(M^s e_j) for every standard monomial s
        let gram = Matrix::from_fn(standard.len(), dual.len(), |r, c| {
            &standard[r].factorial() * &dual[c].symbol().coeff(&standard[r])
        });
        let target: Vec<Scalar> = standard
            .iter()
            .map(|s| {
                let m = e.monomial_action(s);
                crate::linalg::dot(&estar, &m.col(j))
            })
            .collect();
        let c = gram
            .solve(&target)
            .ok_or_else(|| Error::Inconsistent("annihilator pairing is not perfect".into()))?;
        for (ci, ui) in c.iter().zip(&dual) {
            u = u + ui.scale(ci);
        }
    }
    Ok(u)
}

/// `u_β = η(M^β)/β!`, the closed form of [`functional_to_diffop`].
pub fn functional_to_diffop_direct(e: &FinMod, eta: &Matrix) -> DiffOp {
    let terms = e.power_table().into_iter().map(|(beta, m)| {
        let c = &eta.pair(&m) / &beta.factorial();
        (beta, c)
    });
    DiffOp::new(Polynomial::from_terms(e.nvars(), terms))
}

/// For each `u ∈ F`: `E = ⊕_u O₀/M^(ord u + 1)` and `η_u = e*_u ⊗ e_u` with
/// `e_u` the class of `1` in block `u` and `e*_u(x^β) = β! u_β`.
pub fn diffop_to_module(nvars: usize, ops: &[DiffOp]) -> Result<(FinMod, Vec<Matrix>)> {
    if let Some(u) = ops.iter().find(|u| u.nvars() != nvars) {
        return Err(Error::Arity { expected: nvars, found: u.nvars() });
    }
    let blocks: Vec<(CofiniteIdeal, FinMod)> = ops
        .iter()
        .map(|u| {
            let ideal = CofiniteIdeal::maximal_power(nvars, u.order());
            let m = cyclic_quotient(&ideal).module;
            (ideal, m)
        })
        .collect();
    let mut e = FinMod::zero(nvars);
    for (_, m) in &blocks {
        e = crate::localmod::direct_sum(&e, m)?;
    }
    let d = e.dim();
    let mut functionals = Vec::new();
    let mut offset = 0;
    for ((ideal, m), u) in blocks.iter().zip(ops) {
        let mut h = Matrix::zeros(d, d);
        let one_at = offset
            + ideal
                .quotient_basis()
                .iter()
                .position(Monomial::is_one)
                .expect("1 is a standard monomial of a proper ideal");
        for (r, s) in ideal.quotient_basis().iter().enumerate() {
            h.set(offset + r, one_at, &s.factorial() * &u.symbol().coeff(s));
        }
        functionals.push(h);
        offset += m.dim();
    }
    Ok((e, functionals))
}

/// `ker ᾱ_n^* ∩ P_{≤d}` computed twice.
#[derive(Clone, Debug)]
pub struct AlphaKernel {
    /// `P_{≤d}` monomials, highest first; coordinate order of the subspaces.
    pub monomials: Vec<Monomial>,
    /// `{p : p(0) = 0 and ∂_{λ_J} p(0) = 0 for every nonempty J}`.
    pub characterization: Subspace,
    /// Kernel of `p ↦ ⊗_i pr_{I_{λ_i}}` applied to `α_n^*(p)`.
    pub direct: Subspace,
    /// Set when `d < n + 1`: the kernel is then only seen in low degrees.
    pub truncated: bool,
}

impl AlphaKernel {
    pub fn agree(&self) -> bool {
        self.characterization == self.direct
    }

    pub fn basis(&self) -> Vec<Polynomial> {
        let n = self.monomials.first().map_or(0, Monomial::nvars);
        self.direct
            .basis()
            .iter()
            .map(|r| Polynomial::from_coefficients(n, &self.monomials, r))
            .collect()
    }
}

pub fn kernel_alpha_bar(lambdas: &[Vector], d: u32) -> Result<AlphaKernel> {
    let Some(first) = lambdas.first() else {
        return Err(Error::Degenerate("need at least one direction".into()));
    };
    let nv = first.nvars();
    if let Some(l) = lambdas.iter().find(|l| l.nvars() != nv) {
        return Err(Error::Arity { expected: nv, found: l.nvars() });
    }
    if lambdas.iter().any(Vector::is_zero) {
        return Err(Error::ZeroDirection);
    }
    let n = lambdas.len();
    let mut monomials = Monomial::up_to_degree(nv, d);
    monomials.reverse();

    // characterization: one row per condition, ⟨x^β, u⟩ = β! u_β
    let mut conditions = alloc::vec![DiffOp::one(nv)];
    for mask in 1u32..(1 << n) {
        let dirs: Vec<&Vector> = (0..n).filter(|i| mask & (1 << i) != 0).map(|i| &lambdas[i]).collect();
        conditions.push(DiffOp::directions(nv, &dirs));
    }
    let rows: Vec<Vec<Scalar>> = conditions
        .iter()
        .map(|u| monomials.iter().map(|m| &m.factorial() * &u.symbol().coeff(m)).collect())
        .collect();
    let characterization = Subspace::from_vectors(monomials.len(), rows).orthogonal();

    // direct: coproduct, then normal form in each dual-number factor
    let ideals = lambdas.iter().map(CofiniteIdeal::at_direction).collect::<Result<Vec<_>>>()?;
    let width = 1usize << n;
    let mut image = Matrix::zeros(width, monomials.len());
    for (c, m) in monomials.iter().enumerate() {
        let cp = coproduct(&Polynomial::term(m.clone(), Scalar::one()), n)?;
        let mut col = alloc::vec![Scalar::zero(); width];
        'terms: for (big, coeff) in cp.terms() {
            let mut v = alloc::vec![Scalar::one()];
            for (i, ideal) in ideals.iter().enumerate() {
                let part = Monomial::new(big.exponents()[i * nv..(i + 1) * nv].to_vec());
                if part.degree() > 1 {
                    continue 'terms;
                }
                let nf = ideal.normal_form(&Polynomial::term(part, Scalar::one()));
                v = kron_vec(&v, &nf);
            }
            for (x, y) in col.iter_mut().zip(&v) {
                *x += &(coeff * y);
            }
        }
        for (r, x) in col.into_iter().enumerate() {
            image.set(r, c, x);
        }
    }
    let direct = Subspace::from_vectors(monomials.len(), image.nullspace());
    Ok(AlphaKernel { monomials, characterization, direct, truncated: (d as usize) < n + 1 })
}

fn kron_vec(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect()
}

/// Directions `λ_1..λ_n` (`n = kN`, each basis vector repeated `k` times)
/// with `ker ᾱ_n^* ⊆ I`, plus the kernel used as certificate.
#[derive(Clone, Debug)]
pub struct SubquotientWitness {
    pub lambdas: Vec<Vector>,
    /// Basis of `ker ᾱ_n^*` modulo `M^(n+1)`.
    pub kernel: Vec<Polynomial>,
    pub contained: bool,
}

pub fn subquotient_lambdas(ideal: &CofiniteIdeal) -> Result<SubquotientWitness> {
    let nv = ideal.nvars();
    let k = ideal.k() as usize;
    if k == 0 || nv == 0 {
        return Ok(SubquotientWitness { lambdas: Vec::new(), kernel: Vec::new(), contained: true });
    }
    let mut lambdas = Vec::with_capacity(k * nv);
    for j in 0..nv {
        for _ in 0..k {
            lambdas.push(Vector::basis(nv, j));
        }
    }
    let n = lambdas.len();
    let kernel = kernel_alpha_bar(&lambdas, n as u32)?;
    if !kernel.agree() {
        return Err(Error::Inconsistent("kernel computations disagree".into()));
    }
    let basis = kernel.basis();
    let contained = basis.iter().all(|p| ideal.contains(p));
    Ok(SubquotientWitness { lambdas, kernel: basis, contained })
}

/// `e^ξ` seen through `J_I`: both sides of `J_I e^ξ(μ) = e^{ξ(μ)} pr_I(γ₀(e^ξ))`.
pub fn exponential_jet_sides(
    xi: &Covector,
    ideal: &CofiniteIdeal,
    mu: &Vector,
) -> Result<(Vec<ExpScalar>, Vec<ExpScalar>)> {
    let f = ExpPoly::exp(xi);
    let lhs = jet_ideal(&f, ideal, mu)?;
    let unit = ExpScalar::unit(xi.pair(mu));
    let rhs = ideal
        .normal_form(&f.taylor(ideal.k()))
        .into_iter()
        .map(|c| c * unit.clone())
        .collect();
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localmod::dual_number_module;
    use crate::poly::text::{parse_exppoly, parse_polynomial};

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    fn poly(t: &str, n: usize) -> ExpPoly {
        parse_exppoly(t, n).unwrap()
    }

    #[test]
    fn jet_over_dual_numbers() {
        let e = dual_number_module(&Vector::from_ints(&[1])).unwrap();
        let j = jet(&poly("x1^2", 1), &e).unwrap();
        let expected = MatPolyFamily::new(
            1,
            2,
            2,
            alloc::vec![poly("x1^2", 1), poly("2*x1", 1), poly("0", 1), poly("x1^2", 1)],
        )
        .unwrap();
        assert_eq!(j, expected);
        assert_eq!(
            j.eval_numeric(&[s(3)]).unwrap(),
            Matrix::from_rows(alloc::vec![alloc::vec![s(9), s(6)], alloc::vec![s(0), s(9)]]).unwrap()
        );
    }

    #[test]
    fn jet_ideal_of_square() {
        let i = CofiniteIdeal::maximal_power(1, 1);
        let v = jet_ideal(&poly("x1^2", 1), &i, &Vector::from_ints(&[3])).unwrap();
        assert_eq!(v, alloc::vec![ExpScalar::from(s(9)), ExpScalar::from(s(6))]);
    }

    #[test]
    fn delorme_matches_jet_under_kappa() {
        let eta = Vector::from_ints(&[1, 2]);
        let square = MatPolyFamily::new(
            2,
            2,
            2,
            alloc::vec![poly("x1*x2", 2), poly("x2^2 + 1", 2), poly("x1", 2), poly("3", 2)],
        )
        .unwrap();
        let lhs = kappa_push(&kappa(&eta).unwrap(), &delorme_derivative(&square, &eta).unwrap(), 2).unwrap();
        let rhs = jet_family(&square, &delorme_module(core::slice::from_ref(&eta)).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn top_right_functional_is_directional_derivative() {
        let eta = Vector::from_ints(&[2, -1]);
        let e = dual_number_module(&eta).unwrap();
        let mut h = Matrix::zeros(2, 2);
        h.set(0, 1, s(1));
        let u = functional_to_diffop(&e, &h).unwrap();
        assert_eq!(u, DiffOp::direction(&eta));
        assert_eq!(functional_to_diffop(&e, &Matrix::zeros(2, 2)).unwrap(), DiffOp::zero(2));
    }

    #[test]
    fn diffop_module_for_first_derivative() {
        let u = DiffOp::direction(&Vector::from_ints(&[1]));
        let (e, hs) = diffop_to_module(1, core::slice::from_ref(&u)).unwrap();
        assert_eq!(e.dim(), 2);
        for t in ["1", "x1", "x1^2", "x1^3"] {
            let f = poly(t, 1);
            assert_eq!(apply_functional(&hs[0], &jet(&f, &e).unwrap()).unwrap(), f.diff(&u).unwrap());
        }
    }

    #[test]
    fn kernel_for_two_unit_directions_in_one_variable() {
        let l = Vector::from_ints(&[1]);
        let k = kernel_alpha_bar(&[l.clone(), l], 3).unwrap();
        assert!(k.agree());
        assert!(!k.truncated);
        assert_eq!(k.basis(), alloc::vec![parse_polynomial("x1^3", 1).unwrap()]);
        assert_eq!(kernel_alpha_bar(&[Vector::zero(1)], 2).unwrap_err(), Error::ZeroDirection);
    }

    #[test]
    fn subquotient_for_square_ideal() {
        let w = subquotient_lambdas(&CofiniteIdeal::maximal_power(1, 2)).unwrap();
        assert_eq!(w.lambdas.len(), 2);
        assert!(w.contained);
        assert!(subquotient_lambdas(&CofiniteIdeal::maximal_power(2, 0)).unwrap().lambdas.is_empty());
    }
}
