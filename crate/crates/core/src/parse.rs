//! Expression parser for the printed form of [`NCPoly`].
//!
//! ```text
//! expr   := term (("+" | "-") term)*
//! term   := unary (("*" | "/") unary)*
//! unary  := "-" unary | factor
//! factor := atom ("^" int)?
//! atom   := rational | "q" | "s" | gen | "(" expr ")"
//! gen    := name ("(" index ("," index)* ")")?
//! ```
//!
//! Division and negative exponents are only defined for scalars.

use crate::error::{Error, Result};
use crate::ncalg::gen::{Class, Gen};
use crate::ncalg::NCPoly;
use crate::qscalar::{QScalar, Rational};

/// A generator index as written: `+`, `-`, or a signed integer.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Index {
    Plus,
    Minus,
    Int(i64),
}

/// Expands names outside the base generator set, such as abbreviations.
/// Returns `Ok(None)` for names it does not know.
pub type Resolver<'a> = &'a dyn Fn(&str, &[Index]) -> Result<Option<NCPoly>>;

pub fn parse_expr(text: &str) -> Result<NCPoly> {
    parse_with(text, &|_, _| Ok(None))
}

pub fn parse_with(text: &str, resolve: Resolver<'_>) -> Result<NCPoly> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, text, resolve };
    p.skip_ws();
    let v = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error(&format!("unexpected `{}`", p.src[p.pos] as char)));
    }
    Ok(v)
}

/// The base generators by printed name.
pub fn base_generator(name: &str, idx: &[Index]) -> Result<Gen> {
    let unknown = || Error::UnknownName(render_call(name, idx));
    let spinor = |i: &Index| match i {
        Index::Int(v @ 1..=2) => Ok(*v as u8),
        _ => Err(unknown()),
    };
    let sign = |i: &Index| match i {
        Index::Plus | Index::Int(1) => Ok(1i8),
        Index::Minus | Index::Int(-1) => Ok(-1i8),
        _ => Err(unknown()),
    };
    match (name, idx) {
        ("u", [i, a]) => Ok(Gen::u(spinor(i)?, sign(a)?)),
        ("t", [p]) => match p {
            Index::Int(0) => Ok(Gen::theta(0)),
            Index::Int(2) => Ok(Gen::theta(2)),
            Index::Int(-2) => Ok(Gen::theta(-2)),
            _ => Err(unknown()),
        },
        ("x", [i, a]) => Ok(Gen::x(spinor(i)?, spinor(a)?)),
        ("dx", [i, a]) => Ok(Gen::dx(spinor(i)?, spinor(a)?)),
        ("d", [a, i]) => Ok(Gen::d(spinor(a)?, spinor(i)?)),
        ("tau", []) => Ok(Gen::tau()),
        ("taui", []) => Ok(Gen::tau_inv()),
        ("c", []) => Ok(Gen::c()),
        ("g", [Index::Int(n @ 0..=127)]) => Ok(Gen::g(*n as i8)),
        _ => Err(unknown()),
    }
}

fn render_call(name: &str, idx: &[Index]) -> String {
    if idx.is_empty() {
        return name.into();
    }
    let parts: Vec<String> = idx
        .iter()
        .map(|i| match i {
            Index::Plus => "+".into(),
            Index::Minus => "-".into(),
            Index::Int(v) => v.to_string(),
        })
        .collect();
    format!("{name}({})", parts.join(","))
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    text: &'a str,
    resolve: Resolver<'a>,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        let before = &self.text[..self.pos.min(self.text.len())];
        let line = before.matches('\n').count() + 1;
        let col = before.rfind('\n').map_or(before.len(), |n| before.len() - n - 1) + 1;
        Error::Parse { line, col, msg: msg.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            self.skip_ws();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("expected `{}`", c as char)))
        }
    }

    fn expr(&mut self) -> Result<NCPoly> {
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

    fn term(&mut self) -> Result<NCPoly> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                acc = &acc * &self.unary()?;
            } else if self.peek() == Some(b'/') {
                let at = self.pos;
                self.eat(b'/');
                let d = self.unary()?;
                let c = self.as_scalar(&d, at)?;
                acc = acc.scale(&QScalar::one().checked_div(&c)?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<NCPoly> {
        if self.eat(b'-') {
            return Ok(-self.unary()?);
        }
        self.factor()
    }

    fn as_scalar(&self, p: &NCPoly, at: usize) -> Result<QScalar> {
        if p.terms().all(|(w, _)| w.is_empty()) {
            Ok(p.constant_term())
        } else {
            let here = Parser { src: self.src, pos: at, text: self.text, resolve: self.resolve };
            Err(here.error("only scalars can divide or take negative powers"))
        }
    }

    fn factor(&mut self) -> Result<NCPoly> {
        let base = self.atom()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        let at = self.pos;
        let k = self.int()?;
        if k >= 0 {
            let mut acc = NCPoly::one();
            for _ in 0..k {
                acc = &acc * &base;
            }
            return Ok(acc);
        }
        let c = self.as_scalar(&base, at)?;
        Ok(NCPoly::scalar(c.pow(k as i32)?))
    }

    fn int(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.peek(), Some(b'-' | b'+')) {
            self.pos += 1;
        }
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let t = &self.text[start..self.pos];
        let v = t.parse::<i64>().map_err(|_| {
            self.pos = start;
            self.error("expected an integer")
        })?;
        self.skip_ws();
        Ok(v)
    }

    fn atom(&mut self) -> Result<NCPoly> {
        self.skip_ws();
        match self.peek() {
            None => Err(self.error("unexpected end of input")),
            Some(b'(') => {
                self.pos += 1;
                self.skip_ws();
                let v = self.expr()?;
                self.expect(b')')?;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                    self.pos += 1;
                }
                let n: Rational = self.text[start..self.pos]
                    .parse::<num_bigint::BigInt>()
                    .map(Rational::from_integer)
                    .map_err(|_| self.error("bad number"))?;
                self.skip_ws();
                Ok(NCPoly::scalar(QScalar::rational(n)))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.peek().is_some_and(|c| c.is_ascii_alphanumeric() || c == b'_') {
                    self.pos += 1;
                }
                let name = &self.text[start..self.pos];
                let name_at = start;
                self.skip_ws();
                match name {
                    "s" => return Ok(NCPoly::scalar(QScalar::s_pow(1))),
                    "q" => return Ok(NCPoly::scalar(QScalar::q_pow(1))),
                    _ => {}
                }
                let idx = if self.peek() == Some(b'(') && takes_indices(name) {
                    self.pos += 1;
                    self.indices()?
                } else {
                    Vec::new()
                };
                if let Some(p) = (self.resolve)(name, &idx)? {
                    return Ok(p);
                }
                base_generator(name, &idx).map(NCPoly::gen).map_err(|e| match e {
                    Error::UnknownName(n) => Error::UnknownName(n),
                    other => {
                        let here = Parser { src: self.src, pos: name_at, text: self.text, resolve: self.resolve };
                        here.error(&other.to_string())
                    }
                })
            }
            Some(c) => Err(self.error(&format!("unexpected `{}`", c as char))),
        }
    }

    fn indices(&mut self) -> Result<Vec<Index>> {
        let mut out = Vec::new();
        loop {
            self.skip_ws();
            let sign = match self.peek() {
                Some(b'+') => Some(1),
                Some(b'-') => Some(-1),
                _ => None,
            };
            if let Some(sg) = sign {
                self.pos += 1;
                self.skip_ws();
                if self.peek().is_some_and(|c| c.is_ascii_digit()) {
                    out.push(Index::Int(sg * self.int()?));
                } else {
                    out.push(if sg > 0 { Index::Plus } else { Index::Minus });
                }
            } else {
                out.push(Index::Int(self.int()?));
            }
            if self.eat(b',') {
                continue;
            }
            self.expect(b')')?;
            return Ok(out);
        }
    }
}

fn takes_indices(name: &str) -> bool {
    !matches!(name, "tau" | "taui" | "c")
}

/// Checks that every generator of `p` belongs to a class in `allowed`.
pub fn require_classes(p: &NCPoly, allowed: &[Class], algebra: &str) -> Result<()> {
    for g in p.generators() {
        if !allowed.contains(&g.class) {
            return Err(Error::UnknownGenerator(g.to_string(), algebra.into()));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn word_and_sum() {
        let p = parse_expr("u(1,+) * u(2,+)").unwrap();
        assert_eq!(p, NCPoly::word(&[Gen::u(1, 1), Gen::u(2, 1)]));
        assert_eq!(p.to_string(), "u(1,+) * u(2,+)");
    }

    #[test]
    fn q_is_s_squared() {
        assert!(parse_expr("q*t(0) - s^2*t(0)").unwrap().is_zero());
    }

    #[test]
    fn unknown_generator() {
        assert!(matches!(parse_expr("u(3,+)"), Err(Error::UnknownName(_))));
        assert!(matches!(parse_expr("w(1)"), Err(Error::UnknownName(_))));
    }

    #[test]
    fn syntax_error_position() {
        match parse_expr("x(1,1) *\n  * x(1,2)") {
            Err(Error::Parse { line, col, .. }) => assert_eq!((line, col), (2, 3)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn scalars() {
        let p = parse_expr("(s^4 - 1)/(s^2 + 1) * tau").unwrap();
        assert_eq!(p, parse_expr("(s^2 - 1) * tau").unwrap());
        assert_eq!(parse_expr("s^-3 * c").unwrap().to_string(), "s^-3 * c");
        assert_eq!(parse_expr("-3/2 * t(+2)").unwrap().to_string(), "-3/2 * t(+2)");
        assert!(parse_expr("x(1,1)^-1").is_err());
    }

    #[test]
    fn round_trip_printed_forms() {
        for t in [
            "-s * t(-2) * dx(1,1) * u(2,+) + s^3 * t(-2) * dx(2,1) * u(1,+)",
            "(s^10 - s^2) * dx(1,2) * dx(2,2) * u(1,-) * u(1,+)",
            "-(1 + s^-4) * dx(1,1) * c * g(0) + taui * d(1,2)",
        ] {
            assert_eq!(parse_expr(t).unwrap().to_string(), t);
        }
    }
}
