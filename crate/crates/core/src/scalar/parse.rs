//! Text grammar for scalars.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | '+' unary | power
//! power  := atom ('^' integer)?
//! atom   := integer | 'y' | '(' expr ')'
//! ```
//!
//! `3/2*y^4` therefore parses as `(3/2)*y^4`, and `(1 - y)/(1 + y)` as a
//! quotient. Terms may appear in any order and repeat.

use num_bigint::BigInt;

use super::poly::IntPoly;
use super::ratfunc::RatFunc;
use super::ScalarError;

pub fn parse_ratfunc(src: &str) -> Result<RatFunc, ScalarError> {
    let mut p = Parser { src: src.as_bytes(), pos: 0 };
    p.skip_ws();
    if p.at_end() {
        return Err(p.error("empty expression"));
    }
    let v = p.expr()?;
    p.skip_ws();
    if !p.at_end() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(v)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> ScalarError {
        ScalarError::Parse { pos: self.pos, msg: msg.to_string() }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(|c| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<RatFunc, ScalarError> {
        let mut acc = self.term()?;
        while let Some(c) = self.peek() {
            match c {
                b'+' => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                b'-' => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RatFunc, ScalarError> {
        let mut acc = self.unary()?;
        while let Some(c) = self.peek() {
            match c {
                b'*' => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                b'/' => {
                    self.pos += 1;
                    let at = self.pos;
                    let d = self.unary()?;
                    acc = acc.checked_div(&d).map_err(|_| ScalarError::Parse {
                        pos: at,
                        msg: "division by zero".into(),
                    })?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<RatFunc, ScalarError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<RatFunc, ScalarError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let k = self.integer()?;
            let k: u32 = k.try_into().map_err(|_| self.error("exponent too large"))?;
            return Ok(base.pow(k));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<RatFunc, ScalarError> {
        match self.peek() {
            Some(b'y') => {
                self.pos += 1;
                Ok(RatFunc::y())
            }
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(RatFunc::from_poly(IntPoly::constant(n)))
            }
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn integer(&mut self) -> Result<BigInt, ScalarError> {
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected integer"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(digits.parse::<BigInt>().expect("validated digits"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ok(s: &str) -> RatFunc {
        parse_ratfunc(s).unwrap_or_else(|e| panic!("{s}: {e}"))
    }

    #[test]
    fn grammar_examples() {
        assert_eq!(ok("1 - y^2").to_string(), "1 - y^2");
        assert_eq!(ok("3/2*y^4").to_string(), "3/2*y^4");
        assert_eq!(ok("y^2 + 1 - 2*y^2").to_string(), "1 - y^2");
        assert_eq!(ok("(1-y^2)/(1+y)").to_string(), "1 - y");
        assert_eq!(ok("-y").to_string(), "-y");
        assert_eq!(ok("0").to_string(), "0");
    }

    #[test]
    fn errors_carry_position() {
        assert!(matches!(parse_ratfunc("1 +"), Err(ScalarError::Parse { .. })));
        assert!(matches!(parse_ratfunc("x"), Err(ScalarError::Parse { pos: 0, .. })));
        assert!(matches!(parse_ratfunc("1/(y-y)"), Err(ScalarError::Parse { .. })));
        assert!(parse_ratfunc("").is_err());
    }
}
