//! Recursive-descent parser for the polynomial grammar
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := coeff ('*' factor)* | factor ('*' factor)*
//! factor := var ('^' uint)?
//! var    := 'x' uint
//! coeff  := int | int '/' uint
//! ```
//!
//! Whitespace between tokens is ignored. `int` may carry a leading `-`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::{Monomial, MultiPoly};
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    nvars: usize,
    field: Field,
}

pub(super) fn parse_poly(text: &str, nvars: usize, field: Field) -> Result<MultiPoly> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        nvars,
        field,
    };
    p.expr()
}

impl Parser<'_> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            pos: self.pos,
            msg: msg.into(),
        })
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

    fn digits(&mut self) -> Result<&str> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected digits");
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits"))
    }

    fn uint<T: std::str::FromStr>(&mut self) -> Result<T> {
        self.skip_ws();
        let start = self.pos;
        let d = self.digits()?;
        d.parse().or_else(|_| {
            self.pos = start;
            self.err("integer too large")
        })
    }

    fn expr(&mut self) -> Result<MultiPoly> {
        let mut acc = MultiPoly::zero(self.field, self.nvars);
        let (m, c) = self.term()?;
        acc.add_term(m, c);
        loop {
            match self.peek() {
                None => return Ok(acc),
                Some(b'+') => {
                    self.pos += 1;
                    let (m, c) = self.term()?;
                    acc.add_term(m, c);
                }
                Some(b'-') => {
                    self.pos += 1;
                    let (m, c) = self.term()?;
                    acc.add_term(m, -c);
                }
                Some(_) => return self.err("expected '+', '-' or end of input"),
            }
        }
    }

    fn term(&mut self) -> Result<(Monomial, Scalar)> {
        let mut mono = Monomial::one(self.nvars);
        let coeff = match self.peek() {
            Some(b) if b.is_ascii_digit() || b == b'-' => {
                let c = self.coeff()?;
                while self.peek() == Some(b'*') {
                    self.pos += 1;
                    mono = mono.mul(&self.factor()?);
                }
                c
            }
            Some(b'x') => {
                mono = self.factor()?;
                while self.peek() == Some(b'*') {
                    self.pos += 1;
                    mono = mono.mul(&self.factor()?);
                }
                self.field.one()
            }
            Some(_) => return self.err("expected a coefficient or a variable"),
            None => return self.err("unexpected end of input"),
        };
        Ok((mono, coeff))
    }

    fn coeff(&mut self) -> Result<Scalar> {
        self.skip_ws();
        let start = self.pos;
        let negative = self.src.get(self.pos) == Some(&b'-');
        if negative {
            self.pos += 1;
        }
        let mut num: BigInt = self.digits()?.parse().expect("digits parse");
        if negative {
            num = -num;
        }
        if self.peek() != Some(b'/') {
            return Ok(self.field.from_bigint(&num));
        }
        self.pos += 1;
        self.skip_ws();
        let den_pos = self.pos;
        let den: BigInt = self.digits()?.parse().expect("digits parse");
        if self.field != Field::Rational {
            return Err(Error::CoefficientNotInField {
                coeff: String::from_utf8_lossy(&self.src[start..self.pos]).into_owned(),
                field: self.field,
            });
        }
        if den.is_zero() {
            self.pos = den_pos;
            return self.err("zero denominator");
        }
        Ok(Scalar::Rational(BigRational::new(num, den)))
    }

    fn factor(&mut self) -> Result<Monomial> {
        if self.peek() != Some(b'x') {
            return self.err("expected a variable");
        }
        self.pos += 1;
        let start = self.pos;
        let index: usize = {
            let d = self.digits()?;
            match d.parse() {
                Ok(i) => i,
                Err(_) => {
                    self.pos = start;
                    return self.err("variable index too large");
                }
            }
        };
        if index >= self.nvars {
            return Err(Error::UnknownVariable {
                index,
                nvars: self.nvars,
            });
        }
        let mut exp = 1u32;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            exp = self.uint()?;
        }
        let mut e = vec![0; self.nvars];
        e[index] = exp;
        Ok(Monomial::new(e))
    }
}
