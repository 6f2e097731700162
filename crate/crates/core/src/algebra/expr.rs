//! Canonical textual form for classes over a model, and its parser.
//!
//! Grammar:
//!   expr   := ['-'] term (('+' | '-') term)*
//!   term   := factor ('*' factor)*
//!   factor := atom ('^' uint)?
//!   atom   := rational | generator | '(' expr ')'
//!
//! Rationals print as `p` or `p/q`; terms print in graded-lex monomial order,
//! e.g. `1 + 2*h - 3/2*h^2`.

use std::sync::Arc;

use crate::algebra::chow::{ChowClass, ChowModel, Monomial};
use crate::algebra::rational::{is_integer, rat_int, rat_to_string, Rational};
use crate::algebra::ring::RatRing;
use crate::error::{Error, Result};

/// Render a rational-coefficient class in the canonical textual form.
pub fn class_to_string(class: &ChowClass<RatRing>) -> String {
    if class.terms.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (mono, coeff) in &class.terms {
        let neg = coeff < &rat_int(0);
        let mag = if neg { -coeff.clone() } else { coeff.clone() };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        out.push_str(&monomial_with_coeff(&class.model, mono, &mag));
    }
    out
}

pub fn monomial_to_string(model: &ChowModel, mono: &Monomial) -> String {
    let parts: Vec<String> = mono
        .exps
        .iter()
        .zip(&model.generators)
        .filter(|(e, _)| **e > 0)
        .map(|(e, g)| {
            if *e == 1 {
                g.name.clone()
            } else {
                format!("{}^{}", g.name, e)
            }
        })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

fn monomial_with_coeff(model: &ChowModel, mono: &Monomial, mag: &Rational) -> String {
    let m = monomial_to_string(model, mono);
    if m == "1" {
        rat_to_string(mag)
    } else if mag == &rat_int(1) {
        m
    } else if is_integer(mag) {
        format!("{}*{}", mag.numer(), m)
    } else {
        format!("{}*{}", rat_to_string(mag), m)
    }
}

/// Parse an expression into a rational-coefficient class over `model`.
pub fn parse_class(model: &Arc<ChowModel>, input: &str) -> Result<ChowClass<RatRing>> {
    let mut p = Parser {
        model,
        bytes: input.as_bytes(),
        pos: 0,
    };
    let class = p.expr()?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return Err(p.err("trailing input"));
    }
    Ok(class)
}

/// Parse an expression that must be a single monomial with coefficient one.
pub fn parse_monomial(model: &Arc<ChowModel>, input: &str) -> Result<Monomial> {
    let class = parse_class(model, input)?;
    if class.terms.len() != 1 {
        return Err(Error::InvalidData(format!(
            "`{input}` is not a single monomial"
        )));
    }
    let (mono, coeff) = class.terms.into_iter().next().unwrap();
    if coeff != rat_int(1) {
        return Err(Error::InvalidData(format!(
            "`{input}` carries a coefficient; expected a bare monomial"
        )));
    }
    Ok(mono)
}

struct Parser<'a> {
    model: &'a Arc<ChowModel>,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, message: &str) -> Error {
        Error::Parse {
            position: self.pos,
            message: message.into(),
        }
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

    fn expr(&mut self) -> Result<ChowClass<RatRing>> {
        let mut acc = ChowClass::zero(&RatRing, self.model);
        let mut sign = 1i64;
        if self.peek() == Some(b'-') {
            self.pos += 1;
            sign = -1;
        } else if self.peek() == Some(b'+') {
            self.pos += 1;
        }
        loop {
            let t = self.term()?;
            acc = acc.add(&t.scale_rat(&rat_int(sign)));
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    sign = 1;
                }
                Some(b'-') => {
                    self.pos += 1;
                    sign = -1;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<ChowClass<RatRing>> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = acc.mul(&self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<ChowClass<RatRing>> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let n = self.uint()?;
            Ok(base.pow(n))
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<ChowClass<RatRing>> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let r = self.rational()?;
                Ok(ChowClass::constant(&RatRing, self.model, r))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let name = self.ident();
                ChowClass::generator(&RatRing, self.model, &name).map_err(|_| Error::Parse {
                    position: self.pos,
                    message: format!("unknown generator `{name}`"),
                })
            }
            _ => Err(self.err("expected a number, generator, or `(`")),
        }
    }

    fn ident(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len()
            && (self.bytes[self.pos].is_ascii_alphanumeric() || self.bytes[self.pos] == b'_')
        {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.bytes[start..self.pos]).into_owned()
    }

    fn uint(&mut self) -> Result<u32> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an integer"));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.err("integer out of range"))
    }

    fn rational(&mut self) -> Result<Rational> {
        let p = self.uint()? as i64;
        if self.peek() == Some(b'/') {
            self.pos += 1;
            let q = self.uint()? as i64;
            if q == 0 {
                return Err(self.err("zero denominator"));
            }
            Ok(crate::algebra::rational::rat(p, q))
        } else {
            Ok(rat_int(p))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::chow::Generator;

    fn model() -> Arc<ChowModel> {
        ChowModel::new(
            vec![
                Generator {
                    name: "h".into(),
                    degree: 1,
                },
                Generator {
                    name: "k".into(),
                    degree: 1,
                },
            ],
            3,
        )
        .unwrap()
    }

    #[test]
    fn parse_print_round_trip() {
        let m = model();
        for s in ["0", "1", "2*h", "h*k", "1 + 2*h - 3/2*h^2", "h^2*k - 4"] {
            let c = parse_class(&m, s).unwrap();
            let printed = class_to_string(&c);
            let reparsed = parse_class(&m, &printed).unwrap();
            assert!(c.eq(&reparsed), "{s} -> {printed}");
        }
    }

    #[test]
    fn rejects_junk() {
        let m = model();
        assert!(parse_class(&m, "q + 1").is_err());
        assert!(parse_class(&m, "h +").is_err());
        assert!(parse_class(&m, "(h").is_err());
        // beyond the truncation degree the ring itself kills the term
        assert!(parse_class(&m, "h^4").unwrap().is_zero());
    }

    #[test]
    fn monomials() {
        let m = model();
        assert_eq!(parse_monomial(&m, "h^2*k").unwrap().degree, 3);
        assert!(parse_monomial(&m, "2*h").is_err());
        assert!(parse_monomial(&m, "h + k").is_err());
    }
}
