//! Text form of polynomials, exponential polynomials and differential operators.
//!
//! Printing gives one term per monomial and formal unit, highest monomial
//! first: `(c)*e^(a)*x1^2*x2`, joined by ` + `; the `e^(a)` factor is left
//! out when `a = 0`. An exponential polynomial prints its plain part first and
//! then one `exp[c1,...,cN]*(...)` block per frequency. Differential operators
//! use the letters `X1..XN`.
//!
//! The parser reads general expressions built from numbers, `i`, variables,
//! `exp[...]`, `e^(...)`, parentheses, `+`, `-`, `*`, `^` with a natural
//! exponent, and `/` by a nonzero constant, so printed output parses back to
//! the same value.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_traits::Zero;

use super::{Covector, DiffOp, ExpPoly, Monomial, Polynomial};
use crate::error::{Error, Result};
use crate::scalar::{ExpScalar, Scalar};

fn monomial_factors(m: &Monomial, letter: char) -> String {
    let mut out = String::new();
    for (j, &e) in m.exponents().iter().enumerate() {
        match e {
            0 => {}
            1 => out.push_str(&format!("*{letter}{}", j + 1)),
            _ => out.push_str(&format!("*{letter}{}^{e}", j + 1)),
        }
    }
    out
}

fn format_with(p: &Polynomial<ExpScalar>, letter: char) -> String {
    let mut parts = Vec::new();
    for (m, c) in p.terms().rev() {
        for (a, coeff) in c.terms() {
            let unit = if a.is_zero() { String::new() } else { format!("*e^({a})") };
            parts.push(format!("({coeff}){unit}{}", monomial_factors(m, letter)));
        }
    }
    if parts.is_empty() {
        return "0".into();
    }
    parts.join(" + ")
}

pub fn format_polynomial(p: &Polynomial) -> String {
    format_with(&p.map_coeffs(|c| ExpScalar::from(c.clone())), 'x')
}

pub fn format_exp_coeff_polynomial(p: &Polynomial<ExpScalar>) -> String {
    format_with(p, 'x')
}

pub fn format_diffop(u: &DiffOp) -> String {
    format_with(&u.symbol().map_coeffs(|c| ExpScalar::from(c.clone())), 'X')
}

pub fn format_covector(xi: &Covector) -> String {
    let coords: Vec<String> = xi.coords().iter().map(ToString::to_string).collect();
    format!("[{}]", coords.join(","))
}

pub fn format_exppoly(f: &ExpPoly) -> String {
    let zero = Covector::zero(f.nvars());
    let mut parts = Vec::new();
    for (_, p) in f.summands().filter(|(xi, _)| **xi == zero) {
        parts.push(format_with(p, 'x'));
    }
    for (xi, p) in f.summands().filter(|(xi, _)| **xi != zero) {
        parts.push(format!("exp{}*({})", format_covector(xi), format_with(p, 'x')));
    }
    if parts.is_empty() {
        return "0".into();
    }
    parts.join(" + ")
}

pub fn parse_exppoly(s: &str, nvars: usize) -> Result<ExpPoly> {
    let mut p = Parser { src: s.as_bytes(), pos: 0, nvars, letter: b'x' };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(v)
}

/// Parses a plain polynomial; exponential factors are rejected.
pub fn parse_polynomial(s: &str, nvars: usize) -> Result<Polynomial> {
    parse_exppoly(s, nvars)?
        .as_polynomial()
        .ok_or(Error::Parse { pos: 0, msg: "expected a polynomial without exponential factors".into() })
}

pub fn parse_diffop(s: &str, nvars: usize) -> Result<DiffOp> {
    let mut p = Parser { src: s.as_bytes(), pos: 0, nvars, letter: b'X' };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    let poly = v
        .as_polynomial()
        .ok_or(Error::Parse { pos: 0, msg: "differential operator has exponential factors".into() })?;
    Ok(DiffOp::new(poly))
}

/// A constant expression such as `1/2-3/4*i`.
pub fn parse_scalar_expr(s: &str) -> Result<Scalar> {
    let v = parse_exppoly(s, 0)?;
    v.as_polynomial()
        .map(|p| p.coeff(&Monomial::one(0)))
        .ok_or(Error::Parse { pos: 0, msg: "expected a plain constant".into() })
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    nvars: usize,
    letter: u8,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse { pos: self.pos, msg: msg.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, b: u8) -> Result<()> {
        if self.eat(b) {
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", b as char)))
        }
    }

    fn expr(&mut self) -> Result<ExpPoly> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = acc + self.term()?;
            } else if self.eat(b'-') {
                acc = acc - self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<ExpPoly> {
        let mut acc = self.factor()?;
        loop {
            if self.eat(b'*') {
                acc = acc * self.factor()?;
            } else if self.peek() == Some(b'/') {
                let at = self.pos;
                self.pos += 1;
                let d = self.factor()?;
                let c = d
                    .as_polynomial()
                    .filter(|p| p.degree().unwrap_or(0) == 0)
                    .map(|p| p.coeff(&Monomial::one(self.nvars)))
                    .and_then(|c| c.inv())
                    .ok_or(Error::Parse { pos: at, msg: "division by a non-constant or zero".into() })?;
                acc = acc.scale(&c);
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<ExpPoly> {
        if self.eat(b'-') {
            return Ok(-self.factor()?);
        }
        if self.eat(b'+') {
            return self.factor();
        }
        let base = self.atom()?;
        if self.eat(b'^') {
            let e = self.natural()?;
            if e > 256 {
                return Err(self.err("exponent too large"));
            }
            return Ok(base.pow(e as u32));
        }
        Ok(base)
    }

    fn natural(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a natural number"));
        }
        core::str::from_utf8(&self.src[start..self.pos])
            .expect("ascii digits")
            .parse()
            .map_err(|_| Error::Parse { pos: start, msg: "number too large".into() })
    }

    fn constant(&self, c: Scalar) -> ExpPoly {
        ExpPoly::constant(self.nvars, ExpScalar::from(c))
    }

    fn constant_expr(&mut self) -> Result<Scalar> {
        let at = self.pos;
        let v = self.expr()?;
        v.as_polynomial()
            .filter(|p| p.degree().unwrap_or(0) == 0)
            .map(|p| p.coeff(&Monomial::one(self.nvars)))
            .ok_or(Error::Parse { pos: at, msg: "expected a plain constant".into() })
    }

    fn atom(&mut self) -> Result<ExpPoly> {
        let Some(b) = self.peek() else {
            return Err(self.err("unexpected end of input"));
        };
        if b == b'(' {
            self.pos += 1;
            let v = self.expr()?;
            self.expect(b')')?;
            return Ok(v);
        }
        if b.is_ascii_digit() {
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let text = core::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
            let c: Scalar = text.parse().map_err(|_| Error::Parse { pos: start, msg: "bad number".into() })?;
            return Ok(self.constant(c));
        }
        if !b.is_ascii_alphabetic() {
            return Err(self.err(&format!("unexpected character '{}'", b as char)));
        }
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphabetic() {
            self.pos += 1;
        }
        let word = &self.src[start..self.pos];
        match word {
            b"i" => Ok(self.constant(Scalar::i())),
            b"exp" => {
                self.expect(b'[')?;
                let mut coords = Vec::new();
                if !self.eat(b']') {
                    loop {
                        coords.push(self.constant_expr()?);
                        if self.eat(b']') {
                            break;
                        }
                        self.expect(b',')?;
                    }
                }
                if coords.len() != self.nvars {
                    return Err(Error::Parse {
                        pos: start,
                        msg: format!("frequency has {} coordinates, expected {}", coords.len(), self.nvars),
                    });
                }
                Ok(ExpPoly::exp(&Covector::new(coords)))
            }
            b"e" => {
                self.expect(b'^')?;
                self.expect(b'(')?;
                let a = self.constant_expr()?;
                self.expect(b')')?;
                Ok(ExpPoly::constant(self.nvars, ExpScalar::unit(a)))
            }
            [l] if *l == self.letter => {
                let at = self.pos;
                let j = self.natural()?;
                if j == 0 || j as usize > self.nvars {
                    return Err(Error::Parse {
                        pos: at,
                        msg: format!("variable index {j} outside 1..={}", self.nvars),
                    });
                }
                Ok(ExpPoly::from_poly(&Polynomial::var(self.nvars, j as usize - 1)))
            }
            _ => Err(Error::Parse {
                pos: start,
                msg: format!("unknown identifier {:?}", core::str::from_utf8(word).unwrap_or("?")),
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn printing_is_descending_and_parses_back() {
        let p = parse_polynomial("x1^2 + 3*x1*x2 - 1/2", 2).unwrap();
        let text = format_polynomial(&p);
        assert_eq!(text, "(1)*x1^2 + (3)*x1*x2 + (-1/2)");
        assert_eq!(parse_polynomial(&text, 2).unwrap(), p);
    }

    #[test]
    fn exponential_text_round_trip() {
        let f = parse_exppoly("2 + exp[1,i]*(x1 - e^(1/3)) + exp[-1,0]", 2).unwrap();
        let text = format_exppoly(&f);
        assert!(text.starts_with("(2)"));
        assert_eq!(parse_exppoly(&text, 2).unwrap(), f);
    }

    #[test]
    fn errors_carry_positions() {
        match parse_polynomial("x1 + x3", 2) {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 6),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_polynomial("x1 +", 1), Err(Error::Parse { pos: 4, .. })));
        assert!(parse_polynomial("x1 / x1", 1).is_err());
        assert!(parse_polynomial("exp[1]", 1).is_err());
    }

    #[test]
    fn diffop_text() {
        let u = parse_diffop("X1^2 - 2*X2", 2).unwrap();
        assert_eq!(format_diffop(&u), "(1)*X1^2 + (-2)*X2");
        assert!(parse_diffop("x1", 2).is_err());
    }

    #[test]
    fn gaussian_coefficient_text() {
        let p = parse_polynomial("(1/2-3/4*i)*x1", 1).unwrap();
        assert_eq!(format_polynomial(&p), "(1/2-3/4*i)*x1");
    }
}
