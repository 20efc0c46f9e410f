//! Text and JSON encodings of multivectors.
//!
//! Text: signed terms `c`, `c e<digits>` or `e<digits>`, e.g. `1 - 2.5e13 + e2`.
//! Blade digits are single generator indices, so the text and JSON forms cover `n <= 9`.
//!
//! JSON: `{"n": 2, "coeffs": {"": 1.0, "13": -2.5}}`; complex coefficients are `[re, im]`.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex;
use serde_json::{json, Map, Value};

use super::basis::BasisIndex;
use super::multivector::{CMultivector, Multivector, Paravector};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Parses the text format into a multivector of rank `n`.
pub fn parse_multivector<T: Real>(src: &str, n: usize) -> Result<Multivector<T>> {
    let mut out = Multivector::zero(n);
    let mut lx = TermLexer { src: src.as_bytes(), pos: 0 };
    lx.skip_ws();
    if lx.peek().is_none() {
        return Err(Error::Syntax { pos: 0, msg: "empty multivector".into() });
    }
    let mut first = true;
    while lx.peek().is_some() {
        let mut sign = 1.0;
        match lx.peek() {
            Some(b'+') => {
                lx.pos += 1;
            }
            Some(b'-') => {
                lx.pos += 1;
                sign = -1.0;
            }
            _ if !first => return Err(lx.error("expected '+' or '-'")),
            _ => {}
        }
        lx.skip_ws();
        let (coeff, blade) = lx.term()?;
        blade.check(n).map_err(|_| rank_violation(blade, n))?;
        out.coeffs_mut()[blade.index()] += T::lit(sign * coeff);
        lx.skip_ws();
        first = false;
    }
    Ok(out)
}

/// Parses the text format and requires a paravector (grades 0 and 1 only).
pub fn parse_paravector<T: Real>(src: &str, n: usize) -> Result<Paravector<T>> {
    let m = parse_multivector::<T>(src, n)?;
    Paravector::from_multivector(&m, T::zero())
}

fn rank_violation(blade: BasisIndex, n: usize) -> Error {
    let index = blade.generators().last().unwrap_or(0);
    Error::RankViolation { index, n }
}

struct TermLexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl TermLexer<'_> {
    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn error(&self, msg: &str) -> Error {
        Error::Syntax { pos: self.pos, msg: msg.into() }
    }

    fn term(&mut self) -> Result<(f64, BasisIndex)> {
        let coeff = match self.peek() {
            Some(c) if c.is_ascii_digit() || c == b'.' => Some(self.number()?),
            Some(b'e') => None,
            _ => return Err(self.error("expected a number or a blade")),
        };
        self.skip_ws();
        if self.peek() == Some(b'*') {
            self.pos += 1;
            self.skip_ws();
            if self.peek() != Some(b'e') {
                return Err(self.error("expected a blade after '*'"));
            }
        }
        let blade = if self.peek() == Some(b'e') {
            self.pos += 1;
            self.blade()?
        } else {
            BasisIndex::SCALAR
        };
        Ok((coeff.unwrap_or(1.0), blade))
    }

    fn number(&mut self) -> Result<f64> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit() || c == b'.') {
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii slice");
        text.parse::<f64>()
            .map_err(|_| Error::Syntax { pos: start, msg: format!("bad number {text:?}") })
    }

    fn blade(&mut self) -> Result<BasisIndex> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        let key = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii slice");
        if key.is_empty() {
            return Err(Error::Syntax { pos: start, msg: "blade needs generator digits".into() });
        }
        if key.contains('0') {
            return Err(Error::Syntax { pos: start, msg: "generators are numbered from 1".into() });
        }
        BasisIndex::from_key(key).map_err(|e| Error::Syntax { pos: start, msg: e.to_string() })
    }
}

fn write_terms<T: Real>(f: &mut fmt::Formatter<'_>, terms: impl Iterator<Item = (BasisIndex, T)>) -> fmt::Result {
    let mut any = false;
    for (blade, c) in terms {
        let (neg, mag) = (c < T::zero(), c.abs());
        match (any, neg) {
            (false, true) => f.write_str("-")?,
            (true, true) => f.write_str(" - ")?,
            (true, false) => f.write_str(" + ")?,
            (false, false) => {}
        }
        if blade == BasisIndex::SCALAR {
            write!(f, "{mag}")?;
        } else if mag == T::one() {
            write!(f, "{blade}")?;
        } else {
            write!(f, "{mag}{blade}")?;
        }
        any = true;
    }
    if !any {
        f.write_str("0")?;
    }
    Ok(())
}

impl<T: Real> fmt::Display for Multivector<T> {
    /// Writes the text format; re-parsing the output gives back the same value.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.terms())
    }
}

impl<T: Real> fmt::Display for Paravector<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.to_multivector().terms())
    }
}

impl<T: Real> fmt::Display for CMultivector<T> {
    /// Writes `a + i(b)` with `a`, `b` in text format, or just `a` when `b = 0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = (self.real_part(), self.imag_part());
        write!(f, "{a}")?;
        if b.coeffs().iter().any(|c| !c.is_zero()) {
            write!(f, " + i({b})")?;
        }
        Ok(())
    }
}

fn f64_value<T: Real>(x: T) -> Value {
    json!(x.to_f64_lossy())
}

/// `{"n": .., "coeffs": {...}}` with zero coefficients omitted.
pub fn multivector_to_json<T: Real>(m: &Multivector<T>) -> Value {
    let coeffs: BTreeMap<String, Value> = m.terms().map(|(b, c)| (b.key(), f64_value(c))).collect();
    json!({ "n": m.rank(), "coeffs": coeffs })
}

pub fn cmultivector_to_json<T: Real>(m: &CMultivector<T>) -> Value {
    let coeffs: BTreeMap<String, Value> = m
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.re.is_zero() || !c.im.is_zero())
        .map(|(mask, c)| (BasisIndex(mask as u32).key(), complex_to_json(*c)))
        .collect();
    json!({ "n": m.rank(), "coeffs": coeffs })
}

pub fn complex_to_json<T: Real>(z: Complex<T>) -> Value {
    json!([z.re.to_f64_lossy(), z.im.to_f64_lossy()])
}

pub fn complex_from_json<T: Real>(v: &Value) -> Result<Complex<T>> {
    match v {
        Value::Number(x) => Ok(Complex::new(T::lit(number(x)?), T::zero())),
        Value::Array(pair) if pair.len() == 2 => {
            let re = pair[0].as_f64().ok_or_else(|| invalid_json("complex real part"))?;
            let im = pair[1].as_f64().ok_or_else(|| invalid_json("complex imaginary part"))?;
            Ok(Complex::new(T::lit(re), T::lit(im)))
        }
        _ => Err(invalid_json("expected a number or [re, im]")),
    }
}

fn number(x: &serde_json::Number) -> Result<f64> {
    x.as_f64().ok_or_else(|| invalid_json("number out of range"))
}

fn invalid_json(what: &str) -> Error {
    Error::Invalid(format!("malformed JSON: {what}"))
}

fn json_header(v: &Value) -> Result<(usize, &Map<String, Value>)> {
    let n = v
        .get("n")
        .and_then(Value::as_u64)
        .ok_or_else(|| invalid_json("missing rank \"n\""))? as usize;
    let coeffs = v
        .get("coeffs")
        .and_then(Value::as_object)
        .ok_or_else(|| invalid_json("missing \"coeffs\" object"))?;
    Ok((n, coeffs))
}

/// Reads a real multivector; complex entries are rejected.
pub fn multivector_from_json<T: Real>(v: &Value) -> Result<Multivector<T>> {
    let (n, coeffs) = json_header(v)?;
    let mut m = Multivector::zero(n);
    for (key, value) in coeffs {
        let blade = BasisIndex::from_key(key)?.check(n)?;
        let x = value.as_f64().ok_or_else(|| invalid_json("real coefficient expected"))?;
        m.coeffs_mut()[blade.index()] = T::lit(x);
    }
    Ok(m)
}

/// Reads a complexified multivector; plain numbers are taken as real coefficients.
pub fn cmultivector_from_json<T: Real>(v: &Value) -> Result<CMultivector<T>> {
    let (n, coeffs) = json_header(v)?;
    let mut m = CMultivector::zero(n);
    for (key, value) in coeffs {
        let blade = BasisIndex::from_key(key)?.check(n)?;
        m.coeffs_mut()[blade.index()] = complex_from_json(value)?;
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_the_documented_example() {
        let m = parse_multivector::<f64>("1 - 2.5e13 + e2", 3).unwrap();
        assert_eq!(m.coeff(BasisIndex::SCALAR), 1.0);
        assert_eq!(m.coeff(BasisIndex::from_generators(&[1, 3]).unwrap()), -2.5);
        assert_eq!(m.coeff(BasisIndex::generator(2)), 1.0);
    }

    #[test]
    fn rejects_generators_beyond_rank() {
        assert_eq!(
            parse_multivector::<f64>("e5", 4),
            Err(Error::RankViolation { index: 5, n: 4 })
        );
    }

    #[test]
    fn rejects_unsorted_and_malformed_blades() {
        assert!(parse_multivector::<f64>("e21", 3).is_err());
        assert!(parse_multivector::<f64>("1 2", 3).is_err());
        assert!(parse_multivector::<f64>("", 3).is_err());
        assert!(parse_multivector::<f64>("e", 3).is_err());
    }

    #[test]
    fn display_round_trips() {
        for src in ["1 - 2.5e13 + e2", "-e1", "0.5 + 3e123", "0"] {
            let m = parse_multivector::<f64>(src, 3).unwrap();
            assert_eq!(parse_multivector::<f64>(&m.to_string(), 3).unwrap(), m);
        }
    }

    #[test]
    fn json_round_trips() {
        let m = parse_multivector::<f64>("1 - 2.5e13", 3).unwrap();
        let v = multivector_to_json(&m);
        assert_eq!(v, json!({"n": 3, "coeffs": {"": 1.0, "13": -2.5}}));
        assert_eq!(multivector_from_json::<f64>(&v).unwrap(), m);

        let c = CMultivector::from_parts(&m, &m.scale(2.0)).unwrap();
        assert_eq!(cmultivector_from_json::<f64>(&cmultivector_to_json(&c)).unwrap(), c);
    }

    #[test]
    fn paravector_text() {
        let p = parse_paravector::<f64>("1+2e1+2e2", 2).unwrap();
        assert_eq!(p.components(), &[1.0, 2.0, 2.0]);
        assert!(parse_paravector::<f64>("e12", 2).is_err());
    }
}
