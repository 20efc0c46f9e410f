//! Recursive-descent parser.

use super::{Expr, Func};
use crate::clifford::BasisIndex;
use crate::error::{Error, Result};

/// Largest accepted integer exponent.
const MAX_POWER: u32 = 64;

/// Parses `src` as an expression over `Cl_n`.
pub fn parse(src: &str, n: usize) -> Result<Expr> {
    let mut p = Parser { src: src.as_bytes(), pos: 0, n };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    n: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Syntax { pos: self.pos, msg: msg.into() }
    }

    fn skip_ws(&mut self) {
        while matches!(self.src.get(self.pos), Some(c) if c.is_ascii_whitespace()) {
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

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", c as char)))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(b'+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(b'-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat(b'*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.peek() == Some(b'/') {
                let at = self.pos;
                self.pos += 1;
                let rhs = self.unary()?;
                if !rhs.is_scalar() {
                    return Err(Error::Syntax { pos: at, msg: "divisor must be a scalar expression".into() });
                }
                lhs = Expr::Div(Box::new(lhs), Box::new(rhs));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat(b'-') {
            Ok(Expr::Neg(Box::new(self.unary()?)))
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        self.skip_ws();
        let start = self.pos;
        while matches!(self.src.get(self.pos), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii slice");
        let k: u32 = digits
            .parse()
            .map_err(|_| Error::Syntax { pos: start, msg: "exponent must be a nonnegative integer".into() })?;
        if k > MAX_POWER {
            return Err(Error::Syntax { pos: start, msg: format!("exponent exceeds {MAX_POWER}") });
        }
        Ok(Expr::Pow(Box::new(base), k))
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => {
                let coeff = self.number()?;
                let blade = if self.src.get(self.pos) == Some(&b'e')
                    && matches!(self.src.get(self.pos + 1), Some(c) if c.is_ascii_digit())
                {
                    self.pos += 1;
                    self.blade()?
                } else {
                    BasisIndex::SCALAR
                };
                Ok(Expr::Literal { coeff, blade })
            }
            Some(c) if c.is_ascii_alphabetic() => self.word(),
            Some(_) => Err(self.error("expected a number, blade, 'z', function or '('")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn word(&mut self) -> Result<Expr> {
        let start = self.pos;
        if self.src[start] == b'e' && matches!(self.src.get(start + 1), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
            let blade = self.blade()?;
            if matches!(self.src.get(self.pos), Some(c) if c.is_ascii_alphabetic()) {
                return Err(self.error("unexpected letter after blade"));
            }
            return Ok(Expr::Literal { coeff: 1.0, blade });
        }
        while matches!(self.src.get(self.pos), Some(c) if c.is_ascii_alphanumeric()) {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii slice");
        if name == "z" {
            return Ok(Expr::Var);
        }
        let Some(func) = Func::from_name(name) else {
            return Err(Error::Syntax { pos: start, msg: format!("unknown identifier {name:?}") });
        };
        self.expect(b'(')?;
        let arg = self.expr()?;
        self.expect(b')')?;
        if !arg.is_scalar() {
            return Err(Error::Syntax { pos: start, msg: format!("argument of {name} must be a scalar expression") });
        }
        Ok(Expr::Call(func, Box::new(arg)))
    }

    fn number(&mut self) -> Result<f64> {
        let start = self.pos;
        while matches!(self.src.get(self.pos), Some(c) if c.is_ascii_digit() || *c == b'.') {
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii slice");
        text.parse()
            .map_err(|_| Error::Syntax { pos: start, msg: format!("bad number {text:?}") })
    }

    /// Generator digits after an `e`.
    fn blade(&mut self) -> Result<BasisIndex> {
        let start = self.pos;
        while matches!(self.src.get(self.pos), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        let key = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii slice");
        if key.contains('0') {
            return Err(Error::Syntax { pos: start, msg: "generators are numbered from 1".into() });
        }
        let blade = BasisIndex::from_key(key).map_err(|e| Error::Syntax { pos: start, msg: e.to_string() })?;
        if let Some(index) = blade.generators().find(|&j| j > self.n) {
            return Err(Error::RankViolation { index, n: self.n });
        }
        Ok(blade)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lit(coeff: f64, key: &str) -> Expr {
        Expr::Literal { coeff, blade: BasisIndex::from_key(key).unwrap() }
    }

    #[test]
    fn precedence() {
        let e = parse("-z^2", 0).unwrap();
        assert_eq!(e, Expr::Neg(Box::new(Expr::Pow(Box::new(Expr::Var), 2))));
        let e = parse("1 - 2*z / 3", 0).unwrap();
        let rhs = Expr::Div(Box::new(Expr::Mul(Box::new(Expr::number(2.0)), Box::new(Expr::Var))), Box::new(Expr::number(3.0)));
        assert_eq!(e, Expr::Sub(Box::new(Expr::number(1.0)), Box::new(rhs)));
    }

    #[test]
    fn literals_and_blades() {
        assert_eq!(parse("2.5e13", 3).unwrap(), lit(2.5, "13"));
        assert_eq!(parse("e12", 2).unwrap(), lit(1.0, "12"));
        assert!(parse("z^2 + (1+2e1)*z - e12", 2).is_ok());
        assert!(parse("exp(3*z)", 0).is_ok());
        assert_eq!(parse("e5", 4), Err(Error::RankViolation { index: 5, n: 4 }));
    }

    #[test]
    fn rejects_bad_input() {
        for (src, pos) in [("z +", 3), ("2 ** z", 3), ("log(z)", 0), ("(z", 2), ("z z", 2), ("e21", 1)] {
            match parse(src, 2) {
                Err(Error::Syntax { pos: p, .. }) => assert_eq!(p, pos, "{src}"),
                other => panic!("{src}: {other:?}"),
            }
        }
        assert!(matches!(parse("z / e1", 2), Err(Error::Syntax { pos: 2, .. })));
        assert!(matches!(parse("exp(e1*z)", 2), Err(Error::Syntax { pos: 0, .. })));
        assert!(parse("z^65", 0).is_err());
    }
}
