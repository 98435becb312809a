//! Seeded random instances.
//!
//! Every instance gets its own ChaCha8 stream, seeded with
//! `SHA-256(GENERATOR || seed || check_id || index)`, so an instance depends
//! only on the run seed, the check and its index.
//!
//! Distributions: scalars have numerator uniform in `[-4, 4]` and
//! denominator uniform in `[1, 3]`, with an imaginary part of the same kind
//! one time in five; module dimensions are uniform in `[1, dim_max]`.

use jetcalc_core::approxalg::{algebra_closure, ApproxAlgebra, ApproxModule};
use jetcalc_core::family::{Family, Letter, PWCandidate, RepFamily, Word};
use jetcalc_core::jetfun::MatPolyFamily;
use jetcalc_core::localmod::{cyclic_quotient, direct_sum, dual_number_module, tensor, CofiniteIdeal, FinMod};
use jetcalc_core::scalar::Scalar;
use jetcalc_core::{Covector, DiffOp, ExpPoly, Matrix, Monomial, Polynomial, Vector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

/// Name and version of the generator; part of every seed.
pub const GENERATOR: &str = "chacha8-v1";

pub struct Gen {
    rng: ChaCha8Rng,
}

impl Gen {
    pub fn new(seed: u64, check: &str, index: u64) -> Self {
        let mut h = Sha256::new();
        h.update(GENERATOR.as_bytes());
        h.update(seed.to_le_bytes());
        h.update(check.as_bytes());
        h.update(index.to_le_bytes());
        let bytes: [u8; 32] = h.finalize().into();
        Gen { rng: ChaCha8Rng::from_seed(bytes) }
    }

    /// Uniform in `lo..=hi`.
    pub fn int(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    /// Uniform in `lo..=hi`.
    pub fn size(&mut self, lo: usize, hi: usize) -> usize {
        self.rng.gen_range(lo..=hi)
    }

    pub fn coin(&mut self, num: u32, den: u32) -> bool {
        self.rng.gen_ratio(num, den)
    }

    pub fn pick<'a, T>(&mut self, items: &'a [T]) -> &'a T {
        &items[self.below(items.len())]
    }

    fn ratio(&mut self) -> Scalar {
        let n = self.int(-4, 4);
        let d = self.int(1, 3);
        Scalar::ratio(n, d)
    }

    pub fn scalar(&mut self) -> Scalar {
        let re = self.ratio();
        if self.coin(1, 5) {
            let im = self.ratio();
            Scalar::new(re.re().clone(), im.re().clone())
        } else {
            re
        }
    }

    pub fn nonzero_scalar(&mut self) -> Scalar {
        loop {
            let s = self.scalar();
            if s != Scalar::from_int(0) {
                return s;
            }
        }
    }

    pub fn point(&mut self, n: usize) -> Vec<Scalar> {
        (0..n).map(|_| self.scalar()).collect()
    }

    pub fn int_point(&mut self, n: usize, bound: i64) -> Vec<Scalar> {
        (0..n).map(|_| Scalar::from_int(self.int(-bound, bound))).collect()
    }

    /// Nonzero integer vector with entries in `[-2, 2]`.
    pub fn direction(&mut self, n: usize) -> Vector {
        loop {
            let v: Vec<i64> = (0..n).map(|_| self.int(-2, 2)).collect();
            if v.iter().any(|&c| c != 0) {
                return Vector::from_ints(&v);
            }
        }
    }

    pub fn covector(&mut self, n: usize) -> Covector {
        let v: Vec<i64> = (0..n).map(|_| self.int(-2, 2)).collect();
        Covector::from_ints(&v)
    }

    pub fn monomial(&mut self, n: usize, deg: u32) -> Monomial {
        let d = self.int(0, deg as i64) as u32;
        let all = Monomial::of_degree(n, d);
        self.pick(&all).clone()
    }

    /// Up to `terms` random terms of degree at most `deg`.
    pub fn polynomial(&mut self, n: usize, deg: u32, terms: usize) -> Polynomial {
        let count = self.size(0, terms);
        let parts: Vec<(Monomial, Scalar)> = (0..count).map(|_| (self.monomial(n, deg), self.scalar())).collect();
        Polynomial::from_terms(n, parts)
    }

    /// `p + e^ξ q` with `q` present half of the time.
    pub fn exppoly(&mut self, n: usize, deg: u32) -> ExpPoly {
        let p = ExpPoly::from_poly(&self.polynomial(n, deg, 4));
        if self.coin(1, 2) {
            let xi = self.covector(n);
            p + ExpPoly::exp(&xi) * ExpPoly::from_poly(&self.polynomial(n, deg.min(2), 2))
        } else {
            p
        }
    }

    pub fn diffop(&mut self, n: usize, deg: u32) -> DiffOp {
        DiffOp::new(self.polynomial(n, deg, 3))
    }

    /// Each entry zero half of the time.
    pub fn matrix(&mut self, rows: usize, cols: usize) -> Matrix {
        Matrix::from_fn(rows, cols, |_, _| if self.coin(1, 2) { Scalar::from_int(0) } else { self.scalar() })
    }

    pub fn small_int_matrix(&mut self, rows: usize, cols: usize) -> Matrix {
        Matrix::from_fn(rows, cols, |_, _| Scalar::from_int(self.int(-1, 1)))
    }

    /// `I ⊇ M^(k+1)`, plus up to two random generators without constant term.
    pub fn ideal(&mut self, n: usize, k: u32) -> CofiniteIdeal {
        let mut gens: Vec<Polynomial> =
            Monomial::of_degree(n, k + 1).into_iter().map(|m| Polynomial::term(m, Scalar::from_int(1))).collect();
        for _ in 0..self.size(0, 2) {
            let p = self.polynomial(n, k, 3);
            let c = p.coeff(&Monomial::one(n));
            gens.push(p - Polynomial::constant(n, c));
        }
        CofiniteIdeal::new(n, k, gens).expect("contains the maximal ideal power")
    }

    /// `x_j` acting by `p_j(J)` for a nilpotent Jordan block `J` of size `d`.
    fn jordan_module(&mut self, n: usize, d: usize) -> FinMod {
        let jordan = Matrix::from_fn(d, d, |r, c| Scalar::from_int(i64::from(c == r + 1)));
        let mut powers = vec![jordan.clone()];
        for _ in 2..d {
            let next = powers.last().expect("nonempty").mul(&jordan);
            powers.push(next);
        }
        let action = (0..n)
            .map(|_| {
                let mut m = Matrix::zeros(d, d);
                for p in &powers {
                    if self.coin(2, 3) {
                        m = m.add(&p.scale(&self.scalar()));
                    }
                }
                m
            })
            .collect();
        FinMod::with_dim(n, d.saturating_sub(1) as u32, d, action).expect("polynomials in one nilpotent block commute")
    }

    /// A module of dimension exactly `d`.
    pub fn module_of_dim(&mut self, n: usize, d: usize, kmax: u32) -> FinMod {
        if d == 0 {
            return FinMod::zero(n);
        }
        if d == 1 {
            return FinMod::trivial(n);
        }
        match self.below(5) {
            0 => self.jordan_module(n, d),
            1 => {
                for _ in 0..20 {
                    let k = self.int(1, kmax.max(1) as i64) as u32;
                    let e = cyclic_quotient(&self.ideal(n, k)).module;
                    if e.dim() == d {
                        return e;
                    }
                }
                self.jordan_module(n, d)
            }
            2 => {
                let a = self.size(1, d - 1);
                let left = self.module_of_dim(n, a, kmax);
                let right = self.module_of_dim(n, d - a, kmax);
                direct_sum(&left, &right).expect("same arity")
            }
            3 => match (2..d).find(|a| d % a == 0) {
                Some(a) => {
                    let left = self.module_of_dim(n, a, kmax);
                    let right = self.module_of_dim(n, d / a, kmax);
                    tensor(&[left, right]).expect("same arity")
                }
                None => self.jordan_module(n, d),
            },
            _ if d == 2 => dual_number_module(&self.direction(n)).expect("nonzero direction"),
            _ => self.jordan_module(n, d),
        }
    }

    /// Dimension uniform in `[1, dim_max]`.
    pub fn module(&mut self, n: usize, dim_max: usize, kmax: u32) -> FinMod {
        let d = self.size(1, dim_max.max(1));
        self.module_of_dim(n, d, kmax)
    }

    pub fn mat_family(&mut self, n: usize, rows: usize, cols: usize, deg: u32) -> MatPolyFamily {
        let entries = (0..rows * cols).map(|_| self.exppoly(n, deg)).collect();
        MatPolyFamily::new(n, rows, cols, entries).expect("consistent shape")
    }

    pub fn poly_family(&mut self, n: usize, rows: usize, cols: usize, deg: u32) -> MatPolyFamily {
        let entries = (0..rows * cols).map(|_| self.polynomial(n, deg, 3)).collect();
        MatPolyFamily::from_polynomials(n, rows, cols, entries).expect("consistent shape")
    }

    /// Product of elementary matrices `1 + p e_ij` and a constant diagonal;
    /// with `upper` only `i < j` occurs, so the result is upper triangular.
    pub fn unimodular(&mut self, n: usize, dim: usize, upper: bool) -> MatPolyFamily {
        let diag: Vec<Scalar> = (0..dim).map(|_| Scalar::ratio(*self.pick(&[1, -1, 2, -2]), *self.pick(&[1, 2]))).collect();
        let mut acc = MatPolyFamily::constant(n, &Matrix::from_fn(dim, dim, |r, c| {
            if r == c {
                diag[r].clone()
            } else {
                Scalar::from_int(0)
            }
        }));
        if dim < 2 {
            return acc;
        }
        for _ in 0..self.size(1, 3) {
            let (i, j) = loop {
                let i = self.below(dim);
                let j = (i + 1 + self.below(dim - 1)) % dim;
                if !upper || i < j {
                    break (i, j);
                }
            };
            let p = self.polynomial(n, 1, 2);
            let mut entries = Vec::with_capacity(dim * dim);
            for r in 0..dim {
                for c in 0..dim {
                    entries.push(if r == c {
                        Polynomial::one(n)
                    } else if (r, c) == (i, j) {
                        p.clone()
                    } else {
                        Polynomial::zero(n)
                    });
                }
            }
            let e = MatPolyFamily::from_polynomials(n, dim, dim, entries).expect("square");
            acc = acc.mul(&e).expect("square");
        }
        acc
    }

    pub fn rep_family(&mut self, label: &str, n: usize, dim: usize, generators: usize, upper: bool) -> RepFamily {
        let gens = (0..generators).map(|_| self.unimodular(n, dim, upper)).collect();
        RepFamily::new(label, n, dim, gens).expect("unimodular by construction")
    }

    /// Each representation is upper triangular (so it has an invariant line)
    /// with odds 1/2, otherwise generic or a constant conjugate of an earlier
    /// one of the same dimension.
    pub fn family(&mut self, n: usize, dims: &[usize], generators: usize) -> Family {
        let mut reps: Vec<RepFamily> = Vec::new();
        for (i, &d) in dims.iter().enumerate() {
            let label = format!("r{}", i + 1);
            let rep = match self.below(4) {
                0 | 1 => self.rep_family(&label, n, d, generators, true),
                2 if reps.iter().any(|r| r.dim() == d) => {
                    let base = reps.iter().find(|r| r.dim() == d).expect("checked").clone();
                    let s = self.invertible(d);
                    let s_inv = s.inverse().expect("invertible");
                    let gens = base
                        .generators()
                        .iter()
                        .map(|g| g.left_mul(&s).and_then(|x| x.right_mul(&s_inv)).expect("square"))
                        .collect();
                    RepFamily::new(label, n, d, gens).expect("conjugates stay unimodular")
                }
                _ => self.rep_family(&label, n, d, generators, false),
            };
            reps.push(rep);
        }
        Family::new(n, reps).expect("consistent labels")
    }

    pub fn word(&mut self, generators: usize, max_len: usize) -> Word {
        let len = self.size(0, max_len);
        (0..len).map(|_| Letter::new(self.below(generators), self.coin(1, 2))).collect()
    }

    /// A combination of words, perturbed by a random constant matrix with
    /// nonzero entries in one label half of the time. The flag is set for an unperturbed combination.
    pub fn candidate(&mut self, family: &Family, max_len: usize) -> (PWCandidate, bool) {
        let terms: Vec<(Scalar, Word)> =
            (0..self.size(1, 3)).map(|_| (self.scalar(), self.word(family.generator_count(), max_len))).collect();
        let base = PWCandidate::from_words(family, &terms).expect("labels come from the family");
        if self.coin(1, 2) {
            return (base, true);
        }
        let rep = self.pick(family.reps()).clone();
        let dense = Matrix::from_fn(rep.dim(), rep.dim(), |_, _| self.nonzero_scalar());
        let bump = MatPolyFamily::constant(family.nvars(), &dense);
        let mut comps = base.components().clone();
        let cur = comps.remove(rep.label()).expect("every label present");
        comps.insert(rep.label().into(), cur.add(&bump).expect("same shape"));
        (PWCandidate::new(family.nvars(), comps).expect("consistent"), false)
    }

    /// Invertible `d×d` with entries in `{-1, 0, 1}` plus the identity.
    pub fn invertible(&mut self, d: usize) -> Matrix {
        loop {
            let s = self.small_int_matrix(d, d).add(&Matrix::identity(d));
            if s.inverse().is_some() {
                return s;
            }
        }
    }

    /// Nested projections `P_1 ≤ ··· ≤ P_m = 1` in `M_d`, conjugated by a
    /// random `S`; generators `P_j X P_j`; `V = k^d ⊗ k^r` acted on by `a ⊗ 1_r`.
    pub fn approx_module(&mut self, dim_max: usize) -> ApproxModule {
        let d = self.size(1, dim_max.clamp(1, 4));
        let r = self.size(1, (dim_max / d).max(1));
        let s = self.invertible(d);
        let s_inv = s.inverse().expect("invertible");
        let mut sizes: Vec<usize> = (1..d).filter(|_| self.coin(1, 3)).collect();
        sizes.push(d);
        let proj = |m: usize| Matrix::from_fn(d, d, |i, j| Scalar::from_int(i64::from(i == j && i < m)));
        let chain: Vec<Matrix> = sizes.iter().map(|&m| s.mul(&proj(m)).mul(&s_inv)).collect();
        let mut gens = chain.clone();
        for _ in 0..self.size(1, 3) {
            let mut x = self.small_int_matrix(d, d);
            if self.coin(1, 2) {
                x = Matrix::from_fn(d, d, |i, j| if i <= j { x.get(i, j).clone() } else { Scalar::from_int(0) });
            }
            let p = &chain[self.below(chain.len())];
            gens.push(p.mul(&s.mul(&x).mul(&s_inv)).mul(p));
        }
        let closed = algebra_closure(&gens);
        let (alg, basis) = ApproxAlgebra::from_matrices(&closed, &chain).expect("chain of nested idempotents");
        let action = basis.iter().map(|b| b.kron(&Matrix::identity(r))).collect();
        ApproxModule::new(alg, d * r, action).expect("faithful matrix module")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible() {
        let a: Vec<i64> = { let mut g = Gen::new(7, "x", 3); (0..8).map(|_| g.int(-100, 100)).collect() };
        let b: Vec<i64> = { let mut g = Gen::new(7, "x", 3); (0..8).map(|_| g.int(-100, 100)).collect() };
        let c: Vec<i64> = { let mut g = Gen::new(7, "x", 4); (0..8).map(|_| g.int(-100, 100)).collect() };
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn modules_have_the_requested_dimension() {
        let mut g = Gen::new(1, "modules", 0);
        for d in 1..=6 {
            for _ in 0..5 {
                assert_eq!(g.module_of_dim(2, d, 2).dim(), d);
            }
        }
    }

    #[test]
    fn approx_modules_are_valid() {
        let mut g = Gen::new(1, "approx", 0);
        for _ in 0..10 {
            let m = g.approx_module(6);
            assert!(m.dim() <= 6);
        }
    }
}
