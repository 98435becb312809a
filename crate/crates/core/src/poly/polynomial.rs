use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::Monomial;
use crate::error::{Error, Result};
use crate::scalar::{Ring, Scalar};

/// Sparse polynomial in `nvars` variables with coefficients in `C`.
///
/// No zero coefficient is ever stored, so the representation is canonical.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Polynomial<C = Scalar> {
    nvars: usize,
    terms: BTreeMap<Monomial, C>,
}

impl<C: Ring> Polynomial<C> {
    pub fn zero(nvars: usize) -> Self {
        Polynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Polynomial::constant(nvars, C::one())
    }

    pub fn constant(nvars: usize, c: C) -> Self {
        Polynomial::term(Monomial::one(nvars), c)
    }

    pub fn var(nvars: usize, j: usize) -> Self {
        Polynomial::term(Monomial::var(nvars, j), C::one())
    }

    pub fn term(m: Monomial, c: C) -> Self {
        let mut p = Polynomial::zero(m.nvars());
        p.add_term(m, c);
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, C)>) -> Self {
        let mut p = Polynomial::zero(nvars);
        for (m, c) in terms {
            assert_eq!(m.nvars(), nvars, "monomial arity mismatch");
            p.add_term(m, c);
        }
        p
    }

    /// `Σ c_i m_i` over a list of monomials.
    pub fn from_coefficients(nvars: usize, monomials: &[Monomial], coeffs: &[C]) -> Self {
        Polynomial::from_terms(nvars, monomials.iter().cloned().zip(coeffs.iter().cloned()))
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    /// Coefficients against a fixed monomial list; terms outside it are dropped.
    pub fn coefficients(&self, monomials: &[Monomial]) -> Vec<C> {
        monomials.iter().map(|m| self.coeff(m)).collect()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Lowest total degree of a term; `None` for the zero polynomial.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).min()
    }

    pub fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&m) {
            Some(old) => {
                let s = old + c;
                if !s.is_zero() {
                    self.terms.insert(m, s);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        Polynomial::from_terms(self.nvars, self.terms.iter().map(|(m, c)| (m.clone(), c.scale(s))))
    }

    pub fn times(&self, c: &C) -> Self {
        Polynomial::from_terms(
            self.nvars,
            self.terms.iter().map(|(m, d)| (m.clone(), d.clone() * c.clone())),
        )
    }

    pub fn map_coeffs<D: Ring>(&self, f: impl Fn(&C) -> D) -> Polynomial<D> {
        Polynomial::from_terms(self.nvars, self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    fn check_arity(&self, other: &Self) {
        assert_eq!(self.nvars, other.nvars, "polynomial arity mismatch");
    }

    /// `∂/∂x_j`.
    pub fn partial(&self, j: usize) -> Self {
        let mut out = Polynomial::zero(self.nvars);
        for (m, c) in &self.terms {
            if let Some(lower) = m.lower(j) {
                out.add_term(lower, c.scale(&Scalar::from_int(i64::from(m.exponents()[j]))));
            }
        }
        out
    }

    /// `∂^β`.
    pub fn diff_monomial(&self, beta: &Monomial) -> Self {
        let mut out = self.clone();
        for (j, &e) in beta.exponents().iter().enumerate() {
            for _ in 0..e {
                out = out.partial(j);
            }
        }
        out
    }

    pub fn eval(&self, point: &[Scalar]) -> C {
        assert_eq!(point.len(), self.nvars, "evaluation point arity mismatch");
        self.terms
            .iter()
            .fold(C::zero(), |acc, (m, c)| acc + c.scale(&m.eval(point)))
    }

    /// Keep only the terms of total degree at most `k`.
    pub fn truncate(&self, k: u32) -> Self {
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() <= k)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// `p ∘ T_μ`, i.e. `x ↦ p(x + μ)`, expanded binomially.
    pub fn translate(&self, mu: &[Scalar]) -> Self {
        assert_eq!(mu.len(), self.nvars, "translation arity mismatch");
        let mut out = Polynomial::zero(self.nvars);
        for (m, c) in &self.terms {
            // Π_j Σ_t C(e_j, t) μ_j^(e_j - t) x_j^t
            let mut partial: Vec<(Vec<u32>, Scalar)> = alloc::vec![(Vec::new(), Scalar::one())];
            for (j, &e) in m.exponents().iter().enumerate() {
                let mut next = Vec::new();
                for (exps, coeff) in &partial {
                    let mut binom = Scalar::one();
                    for t in 0..=e {
                        let w = &(&binom * &mu[j].pow(e - t)) * coeff;
                        if !w.is_zero() {
                            let mut ex = exps.clone();
                            ex.push(t);
                            next.push((ex, w));
                        }
                        // C(e, t+1) = C(e, t) (e - t) / (t + 1)
                        binom = &(&binom * &Scalar::from_int(i64::from(e - t)))
                            / &Scalar::from_int(i64::from(t + 1));
                    }
                }
                partial = next;
            }
            for (exps, w) in partial {
                out.add_term(Monomial::new(exps), c.scale(&w));
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Polynomial::one(self.nvars);
        for _ in 0..e {
            acc = acc.mul_ref(self);
        }
        acc
    }

    /// `p(q_1, ..., q_N)`; all `q_j` share one arity, which the result takes.
    pub fn substitute(&self, images: &[Polynomial<C>]) -> Polynomial<C> {
        assert_eq!(images.len(), self.nvars, "substitution arity mismatch");
        let target = images.first().map_or(0, |q| q.nvars);
        let mut powers: Vec<Vec<Polynomial<C>>> = images.iter().map(|q| alloc::vec![Polynomial::one(q.nvars)]).collect();
        let mut out = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(target, c.clone());
            for (j, &e) in m.exponents().iter().enumerate() {
                while powers[j].len() <= e as usize {
                    let next = powers[j].last().unwrap().mul_ref(&images[j]);
                    powers[j].push(next);
                }
                if e > 0 {
                    t = t.mul_ref(&powers[j][e as usize]);
                }
            }
            out = out + t;
        }
        out
    }

    pub fn add_ref(&self, rhs: &Self) -> Self {
        self.check_arity(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub_ref(&self, rhs: &Self) -> Self {
        self.check_arity(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn mul_ref(&self, rhs: &Self) -> Self {
        self.check_arity(rhs);
        let mut out = Polynomial::zero(self.nvars);
        for (a, c) in &self.terms {
            for (b, d) in &rhs.terms {
                out.add_term(a.mul(b), c.clone() * d.clone());
            }
        }
        out
    }
}

impl Polynomial<Scalar> {
    /// The linear form `ξ` as a polynomial.
    pub fn linear(xi: &super::Covector) -> Self {
        let n = xi.nvars();
        Polynomial::from_terms(n, xi.coords().iter().enumerate().map(|(j, c)| (Monomial::var(n, j), c.clone())))
    }
}

impl<C: Ring> Add for Polynomial<C> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.add_ref(&rhs)
    }
}

impl<C: Ring> Sub for Polynomial<C> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.sub_ref(&rhs)
    }
}

impl<C: Ring> Mul for Polynomial<C> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.mul_ref(&rhs)
    }
}

impl<C: Ring> Neg for Polynomial<C> {
    type Output = Self;
    fn neg(self) -> Self {
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect(),
        }
    }
}

/// `α_n^*(p)`: the pull-back of `p` along `(μ_1, ..., μ_n) ↦ μ_1 + ··· + μ_n`.
///
/// The result lives in `P^{⊗n}`, identified with polynomials in `n·N`
/// variables; variable `i·N + j` is coordinate `j` of the `i`-th factor.
pub fn coproduct(p: &Polynomial<Scalar>, n: usize) -> Result<Polynomial<Scalar>> {
    if n == 0 {
        return Err(Error::Degenerate("coproduct needs n >= 1".into()));
    }
    let big = n * p.nvars();
    let images: Vec<Polynomial> = (0..p.nvars())
        .map(|j| {
            (0..n).fold(Polynomial::zero(big), |acc, i| acc + Polynomial::var(big, i * p.nvars() + j))
        })
        .collect();
    if p.nvars() == 0 {
        return Ok(p.clone());
    }
    Ok(p.substitute(&images))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    fn x(n: usize, j: usize) -> Polynomial {
        Polynomial::var(n, j)
    }

    #[test]
    fn translate_linear_form() {
        // ξ = 2x1 - x2, μ = (1, 3): ξ(ν + μ) = ξ(ν) + ξ(μ) = ξ(ν) - 1
        let xi = x(2, 0).scale(&s(2)) - x(2, 1);
        let t = xi.translate(&[s(1), s(3)]);
        assert_eq!(t, xi.clone() + Polynomial::constant(2, s(-1)));
        assert_eq!(Polynomial::constant(2, s(5)).translate(&[s(1), s(3)]), Polynomial::constant(2, s(5)));
    }

    #[test]
    fn translate_back_and_forth() {
        let p = x(2, 0).pow(3) * x(2, 1) + x(2, 1).pow(2).scale(&Scalar::ratio(1, 2));
        let mu = [Scalar::complex((1, 2), (1, 1)), s(-2)];
        let neg: Vec<Scalar> = mu.iter().map(|c| -c).collect();
        assert_eq!(p.translate(&mu).translate(&neg), p);
    }

    #[test]
    fn coproduct_of_linear_and_square() {
        let xi = x(1, 0);
        assert_eq!(coproduct(&xi, 2).unwrap(), x(2, 0) + x(2, 1));
        let sq = xi.pow(2);
        let expected = x(2, 0).pow(2) + (x(2, 0) * x(2, 1)).scale(&s(2)) + x(2, 1).pow(2);
        assert_eq!(coproduct(&sq, 2).unwrap(), expected);
        assert_eq!(coproduct(&sq, 1).unwrap(), sq);
        assert!(coproduct(&sq, 0).is_err());
    }

    #[test]
    fn coproduct_of_square_on_a_grid() {
        // evaluating α_2^*(ξ²) at (μ, ν) must give (μ + ν)² on a 3x3 grid
        let sq = x(1, 0).pow(2);
        let cp = coproduct(&sq, 2).unwrap();
        for mu in -1..=1 {
            for nu in -1..=1 {
                assert_eq!(cp.eval(&[s(mu), s(nu)]), s((mu + nu) * (mu + nu)));
            }
        }
    }

    #[test]
    fn second_derivative_of_square() {
        let p = x(1, 0).pow(2);
        assert_eq!(p.diff_monomial(&Monomial::new(vec![2])), Polynomial::constant(1, s(2)));
        assert!(p.diff_monomial(&Monomial::new(vec![3])).is_empty());
    }
}
