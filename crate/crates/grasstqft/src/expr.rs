//! Textual mini-language for integrand polynomials.
//!
//! Atoms: `x<i>` (Chern-root variables), `e<i>` (elementary symmetric),
//! `a<i>` as an alias for `e<i>` (the i-th Chern class is the i-th elementary
//! symmetric polynomial in the Chern roots), `s[a,b,...]` (Schur), and
//! nonnegative integer literals. Operators `+ - * ^` with `^` binding
//! tightest, then `*`, then `+ -`; parentheses group; whitespace is
//! insignificant.
//!
//! Grammar:
//!   expr   := term (('+'|'-') term)*
//!   term   := factor ('*' factor)*
//!   factor := base ('^' uint)?
//!   base   := atom | '(' expr ')'

use crate::error::{Error, Result};
use crate::partitions::Partition;
use crate::rational::rat_int;
use crate::sympoly::{elementary, schur_poly, SymPoly};

/// Parse an expression into a polynomial in r variables.
pub fn parse_poly(text: &str, r: usize) -> Result<SymPoly> {
    let mut parser = Parser {
        bytes: text.as_bytes(),
        pos: 0,
        r,
    };
    parser.skip_ws();
    let poly = parser.expr()?;
    parser.skip_ws();
    if parser.pos != parser.bytes.len() {
        return Err(Error::parse(
            parser.pos,
            format!("unexpected {:?}", parser.rest_preview()),
        ));
    }
    Ok(poly)
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    r: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|b| b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn rest_preview(&self) -> String {
        let rest = &self.bytes[self.pos.min(self.bytes.len())..];
        String::from_utf8_lossy(&rest[..rest.len().min(12)]).into_owned()
    }

    fn expect(&mut self, b: u8) -> Result<()> {
        if self.peek() == Some(b) {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::parse(
                self.pos,
                format!("expected {:?}", b as char),
            ))
        }
    }

    fn uint(&mut self) -> Result<u32> {
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(Error::parse(start, "expected an unsigned integer"));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| Error::parse(start, "integer literal out of range"))
    }

    fn expr(&mut self) -> Result<SymPoly> {
        let mut acc = self.term()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    self.skip_ws();
                    acc = acc.checked_add(&self.term()?)?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    self.skip_ws();
                    acc = acc.checked_sub(&self.term()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<SymPoly> {
        let mut acc = self.factor()?;
        loop {
            self.skip_ws();
            if self.peek() == Some(b'*') {
                self.pos += 1;
                self.skip_ws();
                acc = acc.checked_mul(&self.factor()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<SymPoly> {
        let base = self.base()?;
        self.skip_ws();
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let e = self.uint()?;
            Ok(base.pow(e))
        } else {
            Ok(base)
        }
    }

    fn base(&mut self) -> Result<SymPoly> {
        self.skip_ws();
        let at = self.pos;
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                self.skip_ws();
                let inner = self.expr()?;
                self.skip_ws();
                self.expect(b')')?;
                Ok(inner)
            }
            Some(b'x') => {
                self.pos += 1;
                let i = self.uint()? as usize;
                SymPoly::var(self.r, i).map_err(|_| {
                    Error::parse(at, format!("variable x{i} outside x1..x{}", self.r))
                })
            }
            Some(b'e') | Some(b'a') => {
                self.pos += 1;
                let i = self.uint()?;
                elementary(i, self.r).map_err(|_| {
                    Error::parse(at, format!("elementary index {i} outside 0..={}", self.r))
                })
            }
            Some(b's') => {
                self.pos += 1;
                self.skip_ws();
                self.expect(b'[')?;
                let mut rows = Vec::new();
                self.skip_ws();
                if self.peek() != Some(b']') {
                    loop {
                        self.skip_ws();
                        rows.push(self.uint()?);
                        self.skip_ws();
                        match self.peek() {
                            Some(b',') => {
                                self.pos += 1;
                            }
                            Some(b']') => break,
                            _ => {
                                return Err(Error::parse(self.pos, "expected ',' or ']'"));
                            }
                        }
                    }
                }
                self.expect(b']')?;
                let lambda = Partition::new(rows)
                    .map_err(|e| Error::parse(at, format!("bad partition: {e}")))?;
                schur_poly(&lambda, self.r).map_err(|e| {
                    Error::parse(at, format!("Schur label does not fit: {e}"))
                })
            }
            Some(b) if b.is_ascii_digit() => {
                let v = self.uint()?;
                Ok(SymPoly::constant(self.r, rat_int(v as i64)))
            }
            _ => Err(Error::parse(
                at,
                format!("expected an atom, found {:?}", self.rest_preview()),
            )),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn x(r: usize, i: usize) -> SymPoly {
        SymPoly::var(r, i).unwrap()
    }

    #[test]
    fn atoms_and_aliases() {
        assert_eq!(parse_poly("x1", 2).unwrap(), x(2, 1));
        assert_eq!(parse_poly("e1", 2).unwrap(), elementary(1, 2).unwrap());
        assert_eq!(parse_poly("a2", 2).unwrap(), elementary(2, 2).unwrap());
        assert_eq!(
            parse_poly("s[2,1]", 3).unwrap(),
            schur_poly(&Partition::new(vec![2, 1]).unwrap(), 3).unwrap()
        );
        assert_eq!(parse_poly("s[]", 2).unwrap(), SymPoly::one(2));
        assert_eq!(parse_poly("7", 1).unwrap(), SymPoly::constant(1, rat(7, 1)));
    }

    #[test]
    fn precedence_and_grouping() {
        // ^ binds tightest, then *, then + -.
        let lhs = parse_poly("x1 + x2 * x1 ^ 2", 2).unwrap();
        let rhs = x(2, 1)
            .checked_add(&x(2, 2).checked_mul(&x(2, 1).pow(2)).unwrap())
            .unwrap();
        assert_eq!(lhs, rhs);

        let grouped = parse_poly("(x1 + x2) ^ 2", 2).unwrap();
        assert_eq!(grouped, elementary(1, 2).unwrap().pow(2));

        let diff = parse_poly("e1^2 - 2*e2", 2).unwrap();
        let power_sum = &(&x(2, 1) * &x(2, 1)) + &(&x(2, 2) * &x(2, 2));
        assert_eq!(diff, power_sum);

        assert_eq!(parse_poly("  a1 ^ 5 ", 1).unwrap(), x(1, 1).pow(5));
    }

    #[test]
    fn parse_errors_carry_position() {
        match parse_poly("x1 +", 2) {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 4),
            other => panic!("expected parse error, got {other:?}"),
        }
        match parse_poly("x9", 2) {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 0),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(parse_poly("(x1", 2).is_err());
        assert!(parse_poly("s[1,2]", 3).is_err());
        assert!(parse_poly("s[1,1,1,1]", 3).is_err());
        assert!(parse_poly("x1 x2", 2).is_err());
        assert!(parse_poly("-1", 2).is_err());
        assert!(parse_poly("x1^e1", 2).is_err());
    }

    #[test]
    fn parsing_is_deterministic() {
        let a = parse_poly("s[2,1]*e1 - 3*x2^2", 3).unwrap();
        let b = parse_poly("s[2,1]*e1 - 3*x2^2", 3).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_string(), b.to_string());
    }
}
