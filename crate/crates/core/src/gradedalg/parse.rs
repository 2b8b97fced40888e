//! Polynomial strings: `+ - * ^`, parentheses, generator names and rational
//! coefficients written `p/q`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::cdga::{CdgaElement, KoszulCdga};
use super::poly::MultiPoly;
use crate::error::{Error, Result};

struct Parser<'a, F> {
    text: &'a str,
    bytes: &'a [u8],
    pos: usize,
    n_even: usize,
    resolve: F,
}

impl<'a, F: Fn(&str) -> Option<CdgaElement>> Parser<'a, F> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse { text: self.text.to_string(), position: self.pos, message: message.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<CdgaElement> {
        let mut acc = CdgaElement::zero(self.n_even);
        let mut first = true;
        loop {
            let sign = match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    1
                }
                Some(b'-') => {
                    self.pos += 1;
                    -1
                }
                _ if first => 1,
                _ => break,
            };
            first = false;
            let t = self.term()?;
            acc = acc.add(&if sign < 0 { t.neg() } else { t });
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<CdgaElement> {
        let mut acc = self.unary()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let f = self.unary()?;
            acc = acc.mul(&f);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<CdgaElement> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<CdgaElement> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let n = self.integer()?;
            let n: u32 = match n.try_into() {
                Ok(n) => n,
                Err(_) => return self.err("exponent must be a small non-negative integer"),
            };
            let mut acc = CdgaElement::one(self.n_even);
            for _ in 0..n {
                acc = acc.mul(&base);
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected an integer");
        }
        Ok(self.text[start..self.pos].parse().expect("digits"))
    }

    fn atom(&mut self) -> Result<CdgaElement> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.integer()?;
                let mut den = BigInt::one();
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    self.skip_ws();
                    den = self.integer()?;
                    if den == BigInt::from(0) {
                        return self.err("zero denominator");
                    }
                }
                Ok(CdgaElement::scalar(self.n_even, BigRational::new(num, den)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.bytes.len()
                    && (self.bytes[self.pos].is_ascii_alphanumeric() || self.bytes[self.pos] == b'_' || self.bytes[self.pos] == b'\'')
                {
                    self.pos += 1;
                }
                let name = &self.text[start..self.pos];
                match (self.resolve)(name) {
                    Some(e) => Ok(e),
                    None => {
                        self.pos = start;
                        self.err(format!("unknown generator {name:?}"))
                    }
                }
            }
            Some(_) => self.err("unexpected character"),
            None => self.err("unexpected end of input"),
        }
    }
}

fn parse_with<F: Fn(&str) -> Option<CdgaElement>>(text: &str, n_even: usize, resolve: F) -> Result<CdgaElement> {
    let mut p = Parser { text, bytes: text.as_bytes(), pos: 0, n_even, resolve };
    if p.peek().is_none() {
        return p.err("empty polynomial");
    }
    let e = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(e)
}

/// Parses a polynomial in named even variables.
pub fn parse_poly(text: &str, names: &[String]) -> Result<MultiPoly> {
    let n = names.len();
    let e = parse_with(text, n, |name| {
        names.iter().position(|s| s == name).map(|i| CdgaElement::from_poly(&MultiPoly::var(n, i)))
    })?;
    let mut p = MultiPoly::zero(n);
    for (m, c) in e.terms() {
        debug_assert_eq!(m.odd, 0);
        p.add_term(m.even.clone(), c.clone());
    }
    Ok(p)
}

/// Parses an element of the CDGA; odd generators multiply in the order written.
pub fn parse_element(text: &str, base: &KoszulCdga) -> Result<CdgaElement> {
    parse_with(text, base.n_even(), |name| {
        if let Some(i) = base.even().iter().position(|g| g.name == name) {
            return Some(base.x(i));
        }
        base.odd().iter().position(|g| g.name == name).map(|j| base.u(j))
    })
}
