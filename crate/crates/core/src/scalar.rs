//! Gaussian rationals and the formal exponential coefficient ring.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use core::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// The operations every coefficient ring in this crate supports.
///
/// All rings here are algebras over `Q(i)`, hence [`Ring::scale`].
pub trait Ring:
    Clone
    + PartialEq
    + fmt::Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn scale(&self, s: &Scalar) -> Self;

    fn from_scalar(s: Scalar) -> Self;
}

/// An element `re + im·i` of `Q(i)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Scalar {
    re: BigRational,
    im: BigRational,
}

impl Scalar {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Scalar { re, im }
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::real(BigRational::from_integer(BigInt::from(n)))
    }

    /// `num / den`; panics when `den == 0`.
    pub fn ratio(num: i64, den: i64) -> Self {
        Scalar::real(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn real(re: BigRational) -> Self {
        Scalar { re, im: BigRational::zero() }
    }

    pub fn complex(re: (i64, i64), im: (i64, i64)) -> Self {
        Scalar {
            re: BigRational::new(re.0.into(), re.1.into()),
            im: BigRational::new(im.0.into(), im.1.into()),
        }
    }

    pub fn i() -> Self {
        Scalar { re: BigRational::zero(), im: BigRational::one() }
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Scalar { re: self.re.clone(), im: -self.im.clone() }
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if self.is_real() {
            return Some(Scalar::real(self.re.recip()));
        }
        let n = &self.re * &self.re + &self.im * &self.im;
        Some(Scalar { re: &self.re / &n, im: -(&self.im / &n) })
    }

    pub fn factorial(n: u32) -> Self {
        let mut acc = BigInt::one();
        for j in 2..=n {
            acc *= BigInt::from(j);
        }
        Scalar::real(BigRational::from_integer(acc))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Scalar::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

impl Zero for Scalar {
    fn zero() -> Self {
        Scalar { re: BigRational::zero(), im: BigRational::zero() }
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for Scalar {
    fn one() -> Self {
        Scalar { re: BigRational::one(), im: BigRational::zero() }
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        Scalar { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        Scalar { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self.im.is_zero(), rhs.im.is_zero()) {
            (true, true) => Scalar::real(&self.re * &rhs.re),
            (true, false) => Scalar { re: &self.re * &rhs.re, im: &self.re * &rhs.im },
            (false, true) => Scalar { re: &self.re * &rhs.re, im: &self.im * &rhs.re },
            (false, false) => Scalar {
                re: &self.re * &rhs.re - &self.im * &rhs.im,
                im: &self.re * &rhs.im + &self.im * &rhs.re,
            },
        }
    }
}

impl<'a> Neg for &'a Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { re: -self.re.clone(), im: -self.im.clone() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { re: -self.re, im: -self.im }
    }
}

/// Panics on division by zero, like the rational type underneath.
impl Div<Scalar> for Scalar {
    type Output = Scalar;
    fn div(self, rhs: Scalar) -> Scalar {
        &self * &rhs.inv().expect("division by zero scalar")
    }
}

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        self * &rhs.inv().expect("division by zero scalar")
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl Ring for Scalar {
    fn scale(&self, s: &Scalar) -> Self {
        self * s
    }

    fn from_scalar(s: Scalar) -> Self {
        s
    }
}

fn fmt_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        alloc::format!("{}/{}", q.numer(), q.denom())
    }
}

/// Canonical text form `a/b+c/d*i`; zero parts are omitted.
impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return f.write_str(&fmt_rational(&self.re));
        }
        if !self.re.is_zero() {
            f.write_str(&fmt_rational(&self.re))?;
            if self.im.is_positive() {
                f.write_str("+")?;
            }
        }
        write!(f, "{}*i", fmt_rational(&self.im))
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_rational(s: &str, offset: usize) -> Result<BigRational> {
    let err = |msg: &str| Error::Parse { pos: offset, msg: alloc::format!("{msg}: {s:?}") };
    if s.is_empty() {
        return Err(err("empty rational"));
    }
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let valid = |t: &str, signed: bool| {
        let t = if signed { t.strip_prefix(['+', '-']).unwrap_or(t) } else { t };
        !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit())
    };
    if !valid(num, true) || !valid(den, false) {
        return Err(err("malformed rational"));
    }
    let n: BigInt = num.parse().map_err(|_| err("malformed numerator"))?;
    let d: BigInt = den.parse().map_err(|_| err("malformed denominator"))?;
    if d.is_zero() {
        return Err(err("zero denominator"));
    }
    Ok(BigRational::new(n, d))
}

fn parse_imag(s: &str, offset: usize) -> Result<BigRational> {
    let body = s
        .strip_suffix("*i")
        .or_else(|| s.strip_suffix('i'))
        .ok_or_else(|| Error::Parse { pos: offset, msg: "expected imaginary unit".into() })?;
    match body {
        "" | "+" => Ok(BigRational::one()),
        "-" => Ok(-BigRational::one()),
        _ => parse_rational(body, offset),
    }
}

/// Accepts the canonical form plus shorthands such as `i`, `-i`, `2i`.
impl FromStr for Scalar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse { pos: 0, msg: "empty scalar".into() });
        }
        if !s.ends_with('i') {
            return Ok(Scalar::real(parse_rational(s, 0)?));
        }
        let split = s
            .char_indices()
            .skip(1)
            .filter(|&(_, c)| c == '+' || c == '-')
            .map(|(j, _)| j)
            .last();
        match split {
            Some(j) => Ok(Scalar { re: parse_rational(&s[..j], 0)?, im: parse_imag(&s[j..], j)? }),
            None => Ok(Scalar { re: BigRational::zero(), im: parse_imag(s, 0)? }),
        }
    }
}

/// Element of the group algebra of `(Q(i), +)` over `Q(i)`: a finite sum
/// `Σ c_a e^a` of formal exponential units, with `e^a e^b = e^(a+b)`.
///
/// `e^a` is never evaluated numerically, and `e^a = 1` only for `a = 0`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ExpScalar {
    terms: BTreeMap<Scalar, Scalar>,
}

impl ExpScalar {
    /// The formal unit `e^a`.
    pub fn unit(a: Scalar) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(a, Scalar::one());
        ExpScalar { terms }
    }

    pub fn term(coeff: Scalar, exponent: Scalar) -> Self {
        let mut out = ExpScalar::default();
        out.add_term(exponent, coeff);
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Scalar, &Scalar)> {
        self.terms.iter()
    }

    /// The plain scalar, if only the unit `e^0` occurs.
    pub fn as_scalar(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(Scalar::zero()),
            1 => self.terms.get(&Scalar::zero()).cloned(),
            _ => None,
        }
    }

    pub fn is_numeric(&self) -> bool {
        self.as_scalar().is_some()
    }

    fn add_term(&mut self, exponent: Scalar, coeff: Scalar) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&exponent) {
            Some(c) => {
                *c += &coeff;
                if c.is_zero() {
                    self.terms.remove(&exponent);
                }
            }
            None => {
                self.terms.insert(exponent, coeff);
            }
        }
    }
}

impl From<Scalar> for ExpScalar {
    fn from(s: Scalar) -> Self {
        ExpScalar::term(s, Scalar::zero())
    }
}

impl Zero for ExpScalar {
    fn zero() -> Self {
        ExpScalar::default()
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for ExpScalar {
    fn one() -> Self {
        ExpScalar::unit(Scalar::zero())
    }
}

impl Add for ExpScalar {
    type Output = ExpScalar;
    fn add(mut self, rhs: ExpScalar) -> ExpScalar {
        for (a, c) in rhs.terms {
            self.add_term(a, c);
        }
        self
    }
}

impl Neg for ExpScalar {
    type Output = ExpScalar;
    fn neg(self) -> ExpScalar {
        ExpScalar { terms: self.terms.into_iter().map(|(a, c)| (a, -c)).collect() }
    }
}

impl Sub for ExpScalar {
    type Output = ExpScalar;
    fn sub(self, rhs: ExpScalar) -> ExpScalar {
        self + (-rhs)
    }
}

impl Mul for ExpScalar {
    type Output = ExpScalar;
    fn mul(self, rhs: ExpScalar) -> ExpScalar {
        let mut out = ExpScalar::default();
        for (a, c) in &self.terms {
            for (b, d) in &rhs.terms {
                out.add_term(a + b, c * d);
            }
        }
        out
    }
}

impl Ring for ExpScalar {
    fn scale(&self, s: &Scalar) -> Self {
        if s.is_zero() {
            return ExpScalar::zero();
        }
        ExpScalar { terms: self.terms.iter().map(|(a, c)| (a.clone(), c * s)).collect() }
    }

    fn from_scalar(s: Scalar) -> Self {
        s.into()
    }
}

impl fmt::Debug for ExpScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `(c)` for the plain part and `(c)*e^(a)` for the others, joined by ` + `.
impl fmt::Display for ExpScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(a, c)| {
                if a.is_zero() {
                    alloc::format!("({c})")
                } else {
                    alloc::format!("({c})*e^({a})")
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn scalar_text_round_trip() {
        for s in ["0", "3", "-1/2", "2*i", "-1/3*i", "1/2+3/4*i", "-5-1*i"] {
            let v: Scalar = s.parse().unwrap();
            assert_eq!(v.to_string().parse::<Scalar>().unwrap(), v);
        }
        assert_eq!("i".parse::<Scalar>().unwrap(), Scalar::i());
        assert_eq!("-i".parse::<Scalar>().unwrap(), -Scalar::i());
        assert_eq!("2/4".parse::<Scalar>().unwrap().to_string(), "1/2");
        assert_eq!(Scalar::complex((1, 2), (-3, 4)).to_string(), "1/2-3/4*i");
    }

    #[test]
    fn scalar_rejects_garbage() {
        assert!("1/0".parse::<Scalar>().is_err());
        assert!("abc".parse::<Scalar>().is_err());
        assert!("".parse::<Scalar>().is_err());
        assert!("1//2".parse::<Scalar>().is_err());
    }

    #[test]
    fn gaussian_arithmetic() {
        let a = Scalar::complex((1, 1), (2, 1));
        let b = Scalar::complex((3, 1), (-1, 1));
        // (1+2i)(3-i) = 3 - i + 6i + 2 = 5 + 5i
        assert_eq!(&a * &b, Scalar::complex((5, 1), (5, 1)));
        assert_eq!(&(&a * &b) / &b, a);
        assert_eq!(&Scalar::i() * &Scalar::i(), -Scalar::one());
        assert!(Scalar::zero().inv().is_none());
    }

    #[test]
    fn formal_units_multiply_by_exponent_addition() {
        let e2 = ExpScalar::unit(Scalar::from_int(2));
        let e3 = ExpScalar::unit(Scalar::from_int(3));
        assert_eq!(e2.clone() * e3, ExpScalar::unit(Scalar::from_int(5)));
        assert!(!e2.is_numeric());
        let em2 = ExpScalar::unit(Scalar::from_int(-2));
        assert_eq!(e2.clone() * em2, ExpScalar::one());
        assert_eq!((e2.clone() - e2).as_scalar(), Some(Scalar::zero()));
    }
}
