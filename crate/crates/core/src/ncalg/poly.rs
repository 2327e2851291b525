use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use super::gen::{word_charge, word_grade, word_text, Gen, Word};
use crate::error::Result;
use crate::qscalar::{QScalar, Rational};

/// A finite Q(s)-linear combination of words. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct NCPoly {
    terms: BTreeMap<Word, QScalar>,
}

impl NCPoly {
    pub fn zero() -> Self {
        NCPoly::default()
    }

    pub fn one() -> Self {
        NCPoly::scalar(QScalar::one())
    }

    pub fn scalar(c: QScalar) -> Self {
        NCPoly::term(Word::new(), c)
    }

    pub fn gen(g: Gen) -> Self {
        NCPoly::term(std::iter::once(g).collect(), QScalar::one())
    }

    pub fn word(w: &[Gen]) -> Self {
        NCPoly::term(w.iter().copied().collect(), QScalar::one())
    }

    pub fn term(w: Word, c: QScalar) -> Self {
        let mut p = NCPoly::zero();
        p.add_term(w, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &QScalar)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Word, QScalar)> {
        self.terms.into_iter()
    }

    pub fn coeff(&self, w: &[Gen]) -> QScalar {
        self.terms.get(w).cloned().unwrap_or_else(QScalar::zero)
    }

    /// Coefficient of the empty word.
    pub fn constant_term(&self) -> QScalar {
        self.coeff(&[])
    }

    pub fn add_term(&mut self, w: Word, c: QScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let v = e.get() + &c;
                if v.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
    }

    pub fn add_scaled(&mut self, p: &NCPoly, c: &QScalar) {
        if c.is_zero() {
            return;
        }
        let unit = c.is_one();
        for (w, v) in &p.terms {
            self.add_term(w.clone(), if unit { v.clone() } else { v * c });
        }
    }

    pub fn scale(&self, c: &QScalar) -> NCPoly {
        let mut out = NCPoly::zero();
        out.add_scaled(self, c);
        out
    }

    /// Concatenation product (no reduction).
    pub fn mul(&self, o: &NCPoly) -> NCPoly {
        let mut out = NCPoly::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &o.terms {
                let mut w = a.clone();
                w.extend(b.iter().copied());
                out.add_term(w, ca * cb);
            }
        }
        out
    }

    /// Left-multiply every word by the word `w`.
    pub fn lmul_word(&self, w: &[Gen]) -> NCPoly {
        let mut out = NCPoly::zero();
        for (a, c) in &self.terms {
            let mut v: Word = w.iter().copied().collect();
            v.extend(a.iter().copied());
            out.add_term(v, c.clone());
        }
        out
    }

    pub fn rmul_word(&self, w: &[Gen]) -> NCPoly {
        let mut out = NCPoly::zero();
        for (a, c) in &self.terms {
            let mut v = a.clone();
            v.extend(w.iter().copied());
            out.add_term(v, c.clone());
        }
        out
    }

    pub fn generators(&self) -> impl Iterator<Item = Gen> + '_ {
        self.terms.keys().flat_map(|w| w.iter().copied())
    }

    /// Grades of the terms that occur.
    pub fn grades(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self.terms.keys().map(|w| word_grade(w)).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn charges(&self) -> Vec<i32> {
        let mut v: Vec<i32> = self.terms.keys().map(|w| word_charge(w)).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn max_len(&self) -> usize {
        self.terms.keys().map(|w| w.len()).max().unwrap_or(0)
    }

    pub fn map_coeffs(&self, f: impl Fn(&QScalar) -> Result<QScalar>) -> Result<NCPoly> {
        let mut out = NCPoly::zero();
        for (w, c) in &self.terms {
            out.add_term(w.clone(), f(c)?);
        }
        Ok(out)
    }

    /// Specialize all coefficients at `s = s0`.
    pub fn specialize(&self, s0: &Rational) -> Result<NCPoly> {
        self.map_coeffs(|c| c.specialize(s0))
    }

    /// Keep only the terms selected by `keep`.
    pub fn filter(&self, keep: impl Fn(&Word) -> bool) -> NCPoly {
        NCPoly { terms: self.terms.iter().filter(|(w, _)| keep(w)).map(|(w, c)| (w.clone(), c.clone())).collect() }
    }

    /// Canonical text: terms in word order, `coef * gen * ...` joined by ` + ` / ` - `.
    pub fn render(&self, q_display: bool) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (w, c)) in self.terms.iter().enumerate() {
            let (neg, mag) = if c.has_negative_lead() { (true, -c) } else { (false, c.clone()) };
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let ctext = mag.render(q_display);
            let ctext = if mag.num_terms() > 1 && mag.is_laurent() { format!("({ctext})") } else { ctext };
            if w.is_empty() {
                out.push_str(&ctext);
            } else if mag.is_one() {
                out.push_str(&word_text(w));
            } else {
                out.push_str(&ctext);
                out.push_str(" * ");
                out.push_str(&word_text(w));
            }
        }
        out
    }
}

impl fmt::Display for NCPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(false))
    }
}

impl From<Gen> for NCPoly {
    fn from(g: Gen) -> Self {
        NCPoly::gen(g)
    }
}

impl From<QScalar> for NCPoly {
    fn from(c: QScalar) -> Self {
        NCPoly::scalar(c)
    }
}

impl<'a> Add<&'a NCPoly> for &'a NCPoly {
    type Output = NCPoly;
    fn add(self, o: &NCPoly) -> NCPoly {
        let mut out = self.clone();
        out.add_scaled(o, &QScalar::one());
        out
    }
}

impl<'a> Sub<&'a NCPoly> for &'a NCPoly {
    type Output = NCPoly;
    fn sub(self, o: &NCPoly) -> NCPoly {
        let mut out = self.clone();
        out.add_scaled(o, &QScalar::int(-1));
        out
    }
}

impl<'a> Mul<&'a NCPoly> for &'a NCPoly {
    type Output = NCPoly;
    fn mul(self, o: &NCPoly) -> NCPoly {
        NCPoly::mul(self, o)
    }
}

impl Neg for &NCPoly {
    type Output = NCPoly;
    fn neg(self) -> NCPoly {
        self.scale(&QScalar::int(-1))
    }
}

macro_rules! owned {
    ($tr:ident, $m:ident) => {
        impl $tr<NCPoly> for NCPoly {
            type Output = NCPoly;
            fn $m(self, o: NCPoly) -> NCPoly {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a NCPoly> for NCPoly {
            type Output = NCPoly;
            fn $m(self, o: &NCPoly) -> NCPoly {
                (&self).$m(o)
            }
        }
    };
}
owned!(Add, add);
owned!(Sub, sub);
owned!(Mul, mul);

impl Neg for NCPoly {
    type Output = NCPoly;
    fn neg(self) -> NCPoly {
        -&self
    }
}

impl std::iter::Sum for NCPoly {
    fn sum<I: Iterator<Item = NCPoly>>(it: I) -> NCPoly {
        let mut out = NCPoly::zero();
        for p in it {
            out.add_scaled(&p, &QScalar::one());
        }
        out
    }
}

/// `c * p` shorthand.
pub fn sc(c: &QScalar, p: &NCPoly) -> NCPoly {
    p.scale(c)
}

pub fn is_rational_zero(c: &Rational) -> bool {
    c.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_is_concatenation() {
        let a = NCPoly::gen(Gen::u(1, 1));
        let b = NCPoly::gen(Gen::u(2, 1));
        let p = &a * &b;
        assert_eq!(p.len(), 1);
        assert_eq!(p.coeff(&[Gen::u(1, 1), Gen::u(2, 1)]), QScalar::one());
        assert_eq!(&NCPoly::one() * &p, p);
    }

    #[test]
    fn zero_coefficients_dropped() {
        let a = NCPoly::gen(Gen::x(1, 1));
        assert!((&a - &a).is_zero());
    }

    #[test]
    fn theta_square_is_a_grade_two_word() {
        let t = NCPoly::gen(Gen::theta(2));
        let p = &t * &t;
        assert_eq!(p.grades(), vec![2]);
        assert!(!p.is_zero());
    }

    #[test]
    fn render_signs() {
        let p = NCPoly::gen(Gen::u(1, 1)) - NCPoly::gen(Gen::u(2, 1)).scale(&QScalar::q());
        assert_eq!(p.render(false), "u(1,+) - s^2 * u(2,+)");
    }
}
