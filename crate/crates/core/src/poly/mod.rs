//! Exact polynomials, exponential polynomials and constant-coefficient
//! differential operators on `C^N`, restricted to `Q(i)` coefficients.
//!
//! Variables are the coordinate functions `x1, ..., xN` (the dual basis of
//! the standard basis `X1, ..., XN`). A [`DiffOp`] is a polynomial in the
//! `X`'s, acting by `X^β -> ∂^β`.

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_traits::{One, Zero};

use crate::scalar::Scalar;

mod diffop;
mod exppoly;
mod polynomial;
pub mod text;

pub use diffop::DiffOp;
pub use exppoly::{pairing, ExpPoly};
pub use polynomial::{coproduct, Polynomial};

/// Exponent vector `β` of `x^β = x1^β1 ··· xN^βN`.
///
/// Ordered graded-lexicographically: total degree first, then the exponent
/// of `x1`, then `x2`, and so on.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(alloc::vec![0; nvars])
    }

    pub fn var(nvars: usize, j: usize) -> Self {
        let mut e = alloc::vec![0; nvars];
        e[j] = 1;
        Monomial(e)
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.nvars(), other.nvars());
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `β! = β1! ··· βN!`.
    pub fn factorial(&self) -> Scalar {
        self.0.iter().fold(Scalar::one(), |acc, &e| &acc * &Scalar::factorial(e))
    }

    pub fn eval(&self, point: &[Scalar]) -> Scalar {
        let mut acc = Scalar::one();
        for (e, x) in self.0.iter().zip(point) {
            if *e > 0 {
                acc = &acc * &x.pow(*e);
            }
        }
        acc
    }

    /// `self - e_j`, when the exponent of `x_j` is positive.
    pub fn lower(&self, j: usize) -> Option<Monomial> {
        if self.0[j] == 0 {
            return None;
        }
        let mut e = self.0.clone();
        e[j] -= 1;
        Some(Monomial(e))
    }

    pub fn raise(&self, j: usize) -> Monomial {
        let mut e = self.0.clone();
        e[j] += 1;
        Monomial(e)
    }

    /// All monomials of total degree exactly `d`, ascending.
    pub fn of_degree(nvars: usize, d: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut cur = alloc::vec![0u32; nvars];
        fill(&mut cur, 0, d, &mut out);
        out.sort();
        out
    }

    /// All monomials of total degree at most `k`, ascending.
    pub fn up_to_degree(nvars: usize, k: u32) -> Vec<Monomial> {
        (0..=k).flat_map(|d| Monomial::of_degree(nvars, d)).collect()
    }
}

fn fill(cur: &mut Vec<u32>, j: usize, left: u32, out: &mut Vec<Monomial>) {
    if cur.is_empty() {
        if left == 0 {
            out.push(Monomial(Vec::new()));
        }
        return;
    }
    if j == cur.len() - 1 {
        cur[j] = left;
        out.push(Monomial(cur.clone()));
        return;
    }
    for e in 0..=left {
        cur[j] = e;
        fill(cur, j + 1, left - e, out);
    }
    cur[j] = 0;
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

macro_rules! coordinate_type {
    ($(#[$doc:meta])* $name:ident) => {
        $(#[$doc])*
        #[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub struct $name(Vec<Scalar>);

        impl $name {
            pub fn new(coords: Vec<Scalar>) -> Self {
                $name(coords)
            }

            pub fn zero(nvars: usize) -> Self {
                $name(alloc::vec![Scalar::zero(); nvars])
            }

            pub fn basis(nvars: usize, j: usize) -> Self {
                let mut c = alloc::vec![Scalar::zero(); nvars];
                c[j] = Scalar::one();
                $name(c)
            }

            pub fn from_ints(coords: &[i64]) -> Self {
                $name(coords.iter().map(|&c| Scalar::from_int(c)).collect())
            }

            pub fn nvars(&self) -> usize {
                self.0.len()
            }

            pub fn coords(&self) -> &[Scalar] {
                &self.0
            }

            pub fn is_zero(&self) -> bool {
                self.0.iter().all(Zero::is_zero)
            }

            pub fn add(&self, other: &Self) -> Self {
                $name(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
            }

            pub fn neg(&self) -> Self {
                $name(self.0.iter().map(|a| -a).collect())
            }

            pub fn scale(&self, s: &Scalar) -> Self {
                $name(self.0.iter().map(|a| a * s).collect())
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{:?}", self.0)
            }
        }
    };
}

coordinate_type!(
    /// A point or direction in `C^N` (coordinates in the basis `X1..XN`).
    Vector
);
coordinate_type!(
    /// A linear form `ξ` on `C^N` (coordinates in the basis `x1..xN`).
    Covector
);

impl Covector {
    /// `ξ(v)`.
    pub fn pair(&self, v: &Vector) -> Scalar {
        crate::linalg::dot(&self.0, &v.0)
    }
}
