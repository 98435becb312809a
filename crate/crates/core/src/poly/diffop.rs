use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use super::{Covector, ExpPoly, Monomial, Polynomial, Vector};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Constant-coefficient differential operator `∂_u`, `u ∈ S(v)`.
///
/// Stored as a polynomial in `X1..XN`; the monomial `X^β` acts as `∂^β`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct DiffOp(Polynomial);

impl DiffOp {
    pub fn new(symbol: Polynomial) -> Self {
        DiffOp(symbol)
    }

    pub fn zero(nvars: usize) -> Self {
        DiffOp(Polynomial::zero(nvars))
    }

    pub fn one(nvars: usize) -> Self {
        DiffOp(Polynomial::one(nvars))
    }

    /// `∂_X` for a direction `X ∈ v`.
    pub fn direction(x: &Vector) -> Self {
        let n = x.nvars();
        DiffOp(Polynomial::from_terms(
            n,
            x.coords().iter().enumerate().map(|(j, c)| (Monomial::var(n, j), c.clone())),
        ))
    }

    /// `∂^β`.
    pub fn monomial(beta: Monomial) -> Self {
        DiffOp(Polynomial::term(beta, Scalar::from_int(1)))
    }

    /// `∂_{v_1} ∘ ... ∘ ∂_{v_l}`.
    pub fn directions(nvars: usize, vs: &[&Vector]) -> Self {
        vs.iter().fold(DiffOp::one(nvars), |acc, v| acc.compose(&DiffOp::direction(v)))
    }

    pub fn symbol(&self) -> &Polynomial {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.nvars()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Highest total degree; `0` for the zero operator.
    pub fn order(&self) -> u32 {
        self.0.degree().unwrap_or(0)
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        DiffOp(self.0.scale(s))
    }

    /// `∂_{uv} = ∂_u ∘ ∂_v`.
    pub fn compose(&self, other: &DiffOp) -> Self {
        DiffOp(self.0.mul_ref(&other.0))
    }

    /// `∂_u f`.
    pub fn apply(&self, f: &ExpPoly) -> Result<ExpPoly> {
        f.diff(self)
    }

    /// `u(ξ)`, i.e. the symbol evaluated at a linear form.
    pub fn eval_at(&self, xi: &Covector) -> Result<Scalar> {
        if xi.nvars() != self.nvars() {
            return Err(Error::Arity { expected: self.nvars(), found: xi.nvars() });
        }
        Ok(self.0.eval(xi.coords()))
    }

    /// Coefficients against a list of monomials `X^β`.
    pub fn coefficients(&self, monomials: &[Monomial]) -> Vec<Scalar> {
        self.0.coefficients(monomials)
    }
}

impl Add for DiffOp {
    type Output = DiffOp;
    fn add(self, rhs: DiffOp) -> DiffOp {
        DiffOp(self.0 + rhs.0)
    }
}

impl Sub for DiffOp {
    type Output = DiffOp;
    fn sub(self, rhs: DiffOp) -> DiffOp {
        DiffOp(self.0 - rhs.0)
    }
}

impl Mul for DiffOp {
    type Output = DiffOp;
    fn mul(self, rhs: DiffOp) -> DiffOp {
        self.compose(&rhs)
    }
}

impl Neg for DiffOp {
    type Output = DiffOp;
    fn neg(self) -> DiffOp {
        DiffOp(-self.0)
    }
}
