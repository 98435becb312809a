use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use super::{Covector, DiffOp, Monomial, Polynomial, Vector};
use crate::error::{Error, Result};
use crate::scalar::{ExpScalar, Ring, Scalar};

/// Finite sum `Σ_ξ e^ξ · p_ξ` of exponential polynomials.
///
/// The polynomial parts carry [`ExpScalar`] coefficients so that constants
/// such as `e^{ξ(μ)}` produced by translation stay exact.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ExpPoly {
    nvars: usize,
    summands: BTreeMap<Covector, Polynomial<ExpScalar>>,
}

impl ExpPoly {
    pub fn zero(nvars: usize) -> Self {
        ExpPoly { nvars, summands: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        ExpPoly::from_poly(&Polynomial::one(nvars))
    }

    pub fn constant(nvars: usize, c: ExpScalar) -> Self {
        ExpPoly::with_frequency(Covector::zero(nvars), Polynomial::constant(nvars, c))
    }

    /// `e^ξ`.
    pub fn exp(xi: &Covector) -> Self {
        ExpPoly::with_frequency(xi.clone(), Polynomial::one(xi.nvars()))
    }

    pub fn from_poly(p: &Polynomial) -> Self {
        ExpPoly::with_frequency(Covector::zero(p.nvars()), p.map_coeffs(|c| ExpScalar::from(c.clone())))
    }

    /// `e^ξ · p`.
    pub fn with_frequency(xi: Covector, p: Polynomial<ExpScalar>) -> Self {
        assert_eq!(xi.nvars(), p.nvars(), "frequency arity mismatch");
        let mut out = ExpPoly::zero(p.nvars());
        out.add_summand(xi, p);
        out
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn summands(&self) -> impl Iterator<Item = (&Covector, &Polynomial<ExpScalar>)> {
        self.summands.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.summands.is_empty()
    }

    fn add_summand(&mut self, xi: Covector, p: Polynomial<ExpScalar>) {
        if p.is_empty() {
            return;
        }
        let sum = match self.summands.remove(&xi) {
            Some(old) => old + p,
            None => p,
        };
        if !sum.is_empty() {
            self.summands.insert(xi, sum);
        }
    }

    fn check_arity(&self, found: usize) -> Result<()> {
        if self.nvars != found {
            return Err(Error::Arity { expected: self.nvars, found });
        }
        Ok(())
    }

    /// The plain polynomial, if there is no exponential factor of any kind.
    pub fn as_polynomial(&self) -> Option<Polynomial> {
        if self.summands.is_empty() {
            return Some(Polynomial::zero(self.nvars));
        }
        if self.summands.len() != 1 {
            return None;
        }
        let p = self.summands.get(&Covector::zero(self.nvars))?;
        let mut terms = Vec::new();
        for (m, c) in p.terms() {
            terms.push((m.clone(), c.as_scalar()?));
        }
        Some(Polynomial::from_terms(self.nvars, terms))
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        self.times(&ExpScalar::from(s.clone()))
    }

    pub fn times(&self, c: &ExpScalar) -> Self {
        let mut out = ExpPoly::zero(self.nvars);
        for (xi, p) in &self.summands {
            out.add_summand(xi.clone(), p.times(c));
        }
        out
    }

    /// `∂/∂x_j`, by `∂_j(e^ξ p) = ξ_j e^ξ p + e^ξ ∂_j p`.
    pub fn partial(&self, j: usize) -> Self {
        let mut out = ExpPoly::zero(self.nvars);
        for (xi, p) in &self.summands {
            let d = p.scale(&xi.coords()[j]) + p.partial(j);
            out.add_summand(xi.clone(), d);
        }
        out
    }

    pub fn diff_monomial(&self, beta: &Monomial) -> Self {
        let mut out = self.clone();
        for (j, &e) in beta.exponents().iter().enumerate() {
            for _ in 0..e {
                out = out.partial(j);
            }
        }
        out
    }

    /// `∂_u f`.
    pub fn diff(&self, u: &DiffOp) -> Result<Self> {
        self.check_arity(u.nvars())?;
        let mut out = ExpPoly::zero(self.nvars);
        for (beta, c) in u.symbol().terms() {
            out = out + self.diff_monomial(beta).scale(c);
        }
        Ok(out)
    }

    /// `f ∘ T_μ`, i.e. `ν ↦ f(ν + μ)`; `e^ξ` picks up the formal unit `e^{ξ(μ)}`.
    pub fn translate(&self, mu: &Vector) -> Result<Self> {
        self.check_arity(mu.nvars())?;
        let mut out = ExpPoly::zero(self.nvars);
        for (xi, p) in &self.summands {
            let shifted = p.translate(mu.coords());
            let unit = xi.pair(mu);
            let shifted = if unit.is_zero() { shifted } else { shifted.times(&ExpScalar::unit(unit)) };
            out.add_summand(xi.clone(), shifted);
        }
        Ok(out)
    }

    pub fn eval(&self, point: &[Scalar]) -> Result<ExpScalar> {
        self.check_arity(point.len())?;
        let mut acc = ExpScalar::zero();
        for (xi, p) in &self.summands {
            let v = p.eval(point);
            let unit = crate::linalg::dot(xi.coords(), point);
            acc = acc + if unit.is_zero() { v } else { v * ExpScalar::unit(unit) };
        }
        Ok(acc)
    }

    /// `γ₀(f)` truncated at degree `k`: `Σ_{|β|≤k} ∂^β f(0)/β! · x^β`.
    pub fn taylor(&self, k: u32) -> Polynomial<ExpScalar> {
        let zero = alloc::vec![Scalar::zero(); self.nvars];
        let mut out = Polynomial::zero(self.nvars);
        for beta in Monomial::up_to_degree(self.nvars, k) {
            let c = self
                .diff_monomial(&beta)
                .eval(&zero)
                .expect("arity checked");
            let c = c.scale(&beta.factorial().inv().expect("factorial is nonzero"));
            out.add_term(beta, c);
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(ExpPoly::one(self.nvars), |acc, _| acc * self.clone())
    }
}

impl From<Polynomial> for ExpPoly {
    fn from(p: Polynomial) -> Self {
        ExpPoly::from_poly(&p)
    }
}

impl Add for ExpPoly {
    type Output = ExpPoly;
    fn add(mut self, rhs: ExpPoly) -> ExpPoly {
        assert_eq!(self.nvars, rhs.nvars, "exp-polynomial arity mismatch");
        for (xi, p) in rhs.summands {
            self.add_summand(xi, p);
        }
        self
    }
}

impl Neg for ExpPoly {
    type Output = ExpPoly;
    fn neg(self) -> ExpPoly {
        ExpPoly {
            nvars: self.nvars,
            summands: self.summands.into_iter().map(|(xi, p)| (xi, -p)).collect(),
        }
    }
}

impl Sub for ExpPoly {
    type Output = ExpPoly;
    fn sub(self, rhs: ExpPoly) -> ExpPoly {
        self + (-rhs)
    }
}

impl Mul for ExpPoly {
    type Output = ExpPoly;
    fn mul(self, rhs: ExpPoly) -> ExpPoly {
        assert_eq!(self.nvars, rhs.nvars, "exp-polynomial arity mismatch");
        let mut out = ExpPoly::zero(self.nvars);
        for (a, p) in &self.summands {
            for (b, q) in &rhs.summands {
                out.add_summand(a.add(b), p.mul_ref(q));
            }
        }
        out
    }
}

/// `⟨f, u⟩ = (∂_u f)(0)`.
pub fn pairing(f: &ExpPoly, u: &DiffOp) -> Result<ExpScalar> {
    let d = f.diff(u)?;
    d.eval(&alloc::vec![Scalar::zero(); f.nvars()])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    #[test]
    fn derivative_of_exponential_is_symbol_at_frequency() {
        let xi = Covector::from_ints(&[2, -1]);
        let u = DiffOp::direction(&Vector::from_ints(&[3, 1]));
        let f = ExpPoly::exp(&xi);
        assert_eq!(f.diff(&u).unwrap(), f.scale(&s(5)));
        assert_eq!(pairing(&f, &u).unwrap(), ExpScalar::from(s(5)));
    }

    #[test]
    fn translation_of_exponential_keeps_a_formal_unit() {
        let xi = Covector::from_ints(&[1, 2]);
        let mu = Vector::from_ints(&[1, 1]);
        let f = ExpPoly::exp(&xi);
        let expected = f.times(&ExpScalar::unit(s(3)));
        assert_eq!(f.translate(&mu).unwrap(), expected);
        let back = f.translate(&mu).unwrap().translate(&mu.neg()).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn arity_is_checked() {
        let f = ExpPoly::one(2);
        assert!(f.diff(&DiffOp::one(1)).is_err());
        assert!(f.translate(&Vector::zero(3)).is_err());
    }

    #[test]
    fn taylor_of_exponential() {
        // e^{2x} = 1 + 2x + 2x² + ...
        let f = ExpPoly::exp(&Covector::from_ints(&[2]));
        let t = f.taylor(2);
        let one = |e: u32| Monomial::new(alloc::vec![e]);
        assert_eq!(t.coeff(&one(0)), ExpScalar::from(s(1)));
        assert_eq!(t.coeff(&one(1)), ExpScalar::from(s(2)));
        assert_eq!(t.coeff(&one(2)), ExpScalar::from(s(2)));
        assert_eq!(t.len(), 3);
    }
}
