//! Recursive-descent parser for polynomial expressions.
//!
//! Grammar (whitespace ignored):
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ('^' uint)?
//! atom   := uint ('/' uint)? | name | '(' expr ')'
//! ```

use num_bigint::BigInt;

use super::{PolyError, WPoly};
use crate::Rat;

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    names: &'a [&'a str],
}

pub(super) fn parse(src: &str, names: &[&str]) -> Result<WPoly, PolyError> {
    let mut p = Parser { src: src.as_bytes(), pos: 0, names };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(out)
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> PolyError {
        PolyError::Parse { pos: self.pos, msg: msg.to_string() }
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

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn nvars(&self) -> usize {
        self.names.len()
    }

    fn expr(&mut self) -> Result<WPoly, PolyError> {
        let mut acc = if self.eat(b'-') {
            -&self.term()?
        } else {
            self.eat(b'+');
            self.term()?
        };
        loop {
            if self.eat(b'+') {
                acc = &acc + &self.term()?;
            } else if self.eat(b'-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<WPoly, PolyError> {
        let mut acc = self.factor()?;
        while self.eat(b'*') {
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<WPoly, PolyError> {
        let base = self.atom()?;
        if self.eat(b'^') {
            let n = self.uint()?;
            let n = u32::try_from(&n).map_err(|_| self.error("exponent too large"))?;
            Ok(base.pow(n))
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<WPoly, PolyError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.error("expected ')'"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.uint()?;
                let den = if self.eat(b'/') { self.uint()? } else { BigInt::from(1) };
                if den == BigInt::from(0) {
                    return Err(self.error("zero denominator"));
                }
                Ok(WPoly::constant(self.nvars(), Rat::new(num, den)))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                match self.names.iter().position(|n| *n == name) {
                    Some(i) => Ok(WPoly::var(self.nvars(), i)),
                    None => {
                        self.pos = start;
                        Err(self.error(&format!("unknown variable '{name}'")))
                    }
                }
            }
            _ => Err(self.error("expected a number, a variable or '('")),
        }
    }

    fn uint(&mut self) -> Result<BigInt, PolyError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an unsigned integer"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        Ok(digits.parse().expect("digit string"))
    }
}

#[cfg(test)]
mod tests {
    use crate::{rat, ratio, WPoly};

    #[test]
    fn parses_terms_and_rationals() {
        let h = WPoly::parse("3*x^2*y - 1/2*y^3 + 7", 2).unwrap();
        assert_eq!(h.coeff(&[2, 1]), rat(3));
        assert_eq!(h.coeff(&[0, 3]), ratio(-1, 2));
        assert_eq!(h.constant_term(), rat(7));
    }

    #[test]
    fn parses_parenthesized_powers() {
        let h = WPoly::parse("(y^2 - x^3)^2", 2).unwrap();
        assert_eq!(h, WPoly::parse("y^4 - 2*x^3*y^2 + x^6", 2).unwrap());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(WPoly::parse("x + w", 2).is_err());
        assert!(WPoly::parse("x^", 2).is_err());
        assert!(WPoly::parse("1/0", 2).is_err());
        assert!(WPoly::parse("x y", 2).is_err());
    }
}
