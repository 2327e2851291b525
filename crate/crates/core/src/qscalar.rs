//! Exact arithmetic in the field Q(s) of rational functions in `s`, where
//! `s` is the square root of the deformation parameter `q`.
//!
//! A [`QScalar`] is stored as `s^shift * num(s) / den(s)` with `num`, `den`
//! ordinary polynomials over the rationals. The canonical form has
//! `num(0) != 0` (or `num == 0`), `den` monic with `den(0) != 0`, and
//! `gcd(num, den) == 1`, so structural equality is field equality.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Dense univariate polynomial over Q, coefficients low to high, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly(Vec<Rational>);

impl Poly {
    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn one() -> Self {
        Poly(vec![Rational::one()])
    }

    pub fn constant(c: Rational) -> Self {
        Poly(vec![c]).trimmed()
    }

    pub fn from_coeffs(c: Vec<Rational>) -> Self {
        Poly(c).trimmed()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    fn trimmed(mut self) -> Self {
        while self.0.last().is_some_and(|c| c.is_zero()) {
            self.0.pop();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.0.len() == 1 && self.0[0].is_one()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&Rational> {
        self.0.last()
    }

    /// Number of leading zero coefficients (the power of `s` dividing the polynomial).
    fn low_order(&self) -> usize {
        self.0.iter().take_while(|c| c.is_zero()).count()
    }

    fn shift_down(mut self, k: usize) -> Self {
        self.0.drain(..k);
        self
    }

    fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![Rational::zero(); k];
        v.extend(self.0.iter().cloned());
        Poly(v)
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.0.get(i);
            let b = o.0.get(i);
            v.push(match (a, b) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            });
        }
        Poly(v).trimmed()
    }

    pub fn neg(&self) -> Poly {
        Poly(self.0.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        if o.is_one() {
            return self.clone();
        }
        if self.is_one() {
            return o.clone();
        }
        let mut v = vec![Rational::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        Poly(v).trimmed()
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly(self.0.iter().map(|x| x * c).collect())
    }

    /// Euclidean division; `d` must be nonzero.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by zero polynomial");
        let lc = d.lead().unwrap().clone();
        let mut r = self.0.clone();
        if r.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut q = vec![Rational::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] / &lc;
            if !c.is_zero() {
                for (j, dj) in d.0.iter().enumerate() {
                    r[k + j] -= &c * dj;
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        (Poly(q).trimmed(), Poly(r).trimmed())
    }

    pub fn monic(&self) -> Poly {
        match self.lead() {
            None => Poly::zero(),
            Some(lc) if lc.is_one() => self.clone(),
            Some(lc) => {
                let inv = lc.recip();
                self.scale(&inv)
            }
        }
    }

    /// Monic gcd.
    pub fn gcd(&self, o: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }
}

/// An element of Q(s).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QScalar {
    num: Poly,
    shift: i32,
    den: Poly,
}

impl Default for QScalar {
    fn default() -> Self {
        QScalar::zero()
    }
}

fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

impl QScalar {
    pub fn zero() -> Self {
        QScalar { num: Poly::zero(), shift: 0, den: Poly::one() }
    }

    pub fn one() -> Self {
        QScalar::int(1)
    }

    pub fn int(n: i64) -> Self {
        QScalar::rational(rat(n))
    }

    pub fn frac(n: i64, d: i64) -> Self {
        QScalar::rational(Rational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn rational(c: Rational) -> Self {
        QScalar { num: Poly::constant(c), shift: 0, den: Poly::one() }
    }

    /// `s^k`.
    pub fn s_pow(k: i32) -> Self {
        QScalar { num: Poly::one(), shift: k, den: Poly::one() }
    }

    pub fn s() -> Self {
        QScalar::s_pow(1)
    }

    pub fn q() -> Self {
        QScalar::s_pow(2)
    }

    /// `q^k = s^(2k)`.
    pub fn q_pow(k: i32) -> Self {
        QScalar::s_pow(2 * k)
    }

    /// `lambda = q - 1/q`.
    pub fn lambda() -> Self {
        QScalar::q() - QScalar::q_pow(-1)
    }

    /// Monomial `c * s^k`.
    pub fn monomial(c: Rational, k: i32) -> Self {
        if c.is_zero() {
            return QScalar::zero();
        }
        QScalar { num: Poly::constant(c), shift: k, den: Poly::one() }
    }

    /// Laurent polynomial from `(exponent, coefficient)` pairs.
    pub fn laurent(terms: &[(i32, i64)]) -> Self {
        terms
            .iter()
            .map(|&(k, c)| QScalar::monomial(rat(c), k))
            .fold(QScalar::zero(), |a, b| a + b)
    }

    /// Canonical representative of `(s^num_shift num) / (s^den_shift den)`.
    pub fn normalize(num: Poly, num_shift: i32, den: Poly, den_shift: i32) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(QScalar::zero());
        }
        let nl = num.low_order();
        let dl = den.low_order();
        let num = num.shift_down(nl);
        let den = den.shift_down(dl);
        let shift = num_shift - den_shift + nl as i32 - dl as i32;
        Ok(Self::reduce(num, shift, den))
    }

    /// Both polynomials have nonzero constant term here.
    fn reduce(mut num: Poly, shift: i32, mut den: Poly) -> Self {
        if num.is_zero() {
            return QScalar::zero();
        }
        if den.degree() != Some(0) {
            let g = num.gcd(&den);
            if !g.is_one() {
                num = num.div_rem(&g).0;
                den = den.div_rem(&g).0;
            }
        }
        let lc = den.lead().unwrap().clone();
        if !lc.is_one() {
            let inv = lc.recip();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        QScalar { num, shift, den }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.shift == 0 && self.num.is_one() && self.den.is_one()
    }

    /// True when the value is a rational constant (no `s` dependence).
    pub fn as_rational(&self) -> Option<Rational> {
        if self.is_zero() {
            return Some(Rational::zero());
        }
        if self.shift == 0 && self.num.degree() == Some(0) && self.den.is_one() {
            Some(self.num.coeffs()[0].clone())
        } else {
            None
        }
    }

    /// `Some((c, k))` when the value is a single monomial `c * s^k`.
    pub fn as_monomial(&self) -> Option<(Rational, i32)> {
        if self.num.degree() == Some(0) && self.den.is_one() {
            Some((self.num.coeffs()[0].clone(), self.shift))
        } else {
            None
        }
    }

    pub fn is_laurent(&self) -> bool {
        self.den.is_one()
    }

    pub fn numerator(&self) -> (&Poly, i32) {
        (&self.num, self.shift)
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduce(self.den.clone(), -self.shift, self.num.clone()))
    }

    pub fn checked_div(&self, o: &QScalar) -> Result<Self> {
        Ok(self * &o.inv()?)
    }

    pub fn pow(&self, k: i32) -> Result<Self> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut acc = QScalar::one();
        for _ in 0..k.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    /// Exact value at `s = s0`.
    pub fn evaluate(&self, s0: &Rational) -> Result<Rational> {
        if s0.is_zero() {
            return Err(Error::ZeroSpecialization);
        }
        let d = self.den.eval(s0);
        if d.is_zero() {
            return Err(Error::Pole { s0: s0.to_string(), factor: poly_text(&self.den, 0, false) });
        }
        let p = pow_rat(s0, self.shift);
        Ok(self.num.eval(s0) * p / d)
    }

    /// The constant scalar obtained by specializing at `s0`.
    pub fn specialize(&self, s0: &Rational) -> Result<Self> {
        Ok(QScalar::rational(self.evaluate(s0)?))
    }

    /// Sign of the highest-degree numerator coefficient.
    pub fn has_negative_lead(&self) -> bool {
        self.num.lead().is_some_and(|c| c.is_negative())
    }

    /// Canonical text; `q_display` prints even powers of `s` as powers of `q`.
    pub fn render(&self, q_display: bool) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let n = poly_text(&self.num, self.shift, q_display);
        if self.den.is_one() {
            return n;
        }
        let n = if self.num.coeffs().iter().filter(|c| !c.is_zero()).count() > 1 {
            format!("({n})")
        } else {
            n
        };
        format!("{n}/({})", poly_text(&self.den, 0, q_display))
    }

    /// Number of nonzero numerator terms.
    pub fn num_terms(&self) -> usize {
        self.num.coeffs().iter().filter(|c| !c.is_zero()).count()
    }
}

fn pow_rat(x: &Rational, k: i32) -> Rational {
    let mut acc = Rational::one();
    let b = if k < 0 { x.recip() } else { x.clone() };
    for _ in 0..k.unsigned_abs() {
        acc *= &b;
    }
    acc
}

fn var_text(k: i32, q_display: bool) -> String {
    if q_display && k % 2 == 0 {
        let e = k / 2;
        if e == 1 {
            "q".into()
        } else {
            format!("q^{e}")
        }
    } else if k == 1 {
        "s".into()
    } else {
        format!("s^{k}")
    }
}

fn poly_text(p: &Poly, shift: i32, q_display: bool) -> String {
    let mut out = String::new();
    let terms: Vec<(i32, &Rational)> = p
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (i as i32 + shift, c))
        .rev()
        .collect();
    for (idx, (k, c)) in terms.iter().enumerate() {
        let neg = c.is_negative();
        let a = c.abs();
        if idx == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let ctext = if a.is_integer() { a.to_integer().to_string() } else { format!("{}/{}", a.numer(), a.denom()) };
        if *k == 0 {
            out.push_str(&ctext);
        } else if a.is_one() {
            out.push_str(&var_text(*k, q_display));
        } else {
            out.push_str(&ctext);
            out.push('*');
            out.push_str(&var_text(*k, q_display));
        }
    }
    out
}

impl fmt::Display for QScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(false))
    }
}

impl<'a> Add<&'a QScalar> for &'a QScalar {
    type Output = QScalar;
    fn add(self, o: &QScalar) -> QScalar {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let k = self.shift.min(o.shift);
        let a = self.num.shift_up((self.shift - k) as usize);
        let b = o.num.shift_up((o.shift - k) as usize);
        if self.den == o.den {
            let n = a.add(&b);
            if n.is_zero() {
                return QScalar::zero();
            }
            let l = n.low_order();
            let n = n.shift_down(l);
            if self.den.is_one() {
                return QScalar { num: n, shift: k + l as i32, den: Poly::one() };
            }
            return QScalar::reduce(n, k + l as i32, self.den.clone());
        }
        let n = a.mul(&o.den).add(&b.mul(&self.den));
        if n.is_zero() {
            return QScalar::zero();
        }
        let l = n.low_order();
        QScalar::reduce(n.shift_down(l), k + l as i32, self.den.mul(&o.den))
    }
}

impl<'a> Mul<&'a QScalar> for &'a QScalar {
    type Output = QScalar;
    fn mul(self, o: &QScalar) -> QScalar {
        if self.is_zero() || o.is_zero() {
            return QScalar::zero();
        }
        let num = self.num.mul(&o.num);
        let shift = self.shift + o.shift;
        if self.den.is_one() && o.den.is_one() {
            return QScalar { num, shift, den: Poly::one() };
        }
        QScalar::reduce(num, shift, self.den.mul(&o.den))
    }
}

impl<'a> Sub<&'a QScalar> for &'a QScalar {
    type Output = QScalar;
    fn sub(self, o: &QScalar) -> QScalar {
        self + &(-o)
    }
}

impl Neg for &QScalar {
    type Output = QScalar;
    fn neg(self) -> QScalar {
        QScalar { num: self.num.neg(), shift: self.shift, den: self.den.clone() }
    }
}

impl Neg for QScalar {
    type Output = QScalar;
    fn neg(self) -> QScalar {
        -&self
    }
}

macro_rules! owned_ops {
    ($tr:ident, $m:ident) => {
        impl $tr<QScalar> for QScalar {
            type Output = QScalar;
            fn $m(self, o: QScalar) -> QScalar {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a QScalar> for QScalar {
            type Output = QScalar;
            fn $m(self, o: &QScalar) -> QScalar {
                (&self).$m(o)
            }
        }
        impl $tr<QScalar> for &QScalar {
            type Output = QScalar;
            fn $m(self, o: QScalar) -> QScalar {
                self.$m(&o)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

impl AddAssign<&QScalar> for QScalar {
    fn add_assign(&mut self, o: &QScalar) {
        *self = &*self + o;
    }
}

impl SubAssign<&QScalar> for QScalar {
    fn sub_assign(&mut self, o: &QScalar) {
        *self = &*self - o;
    }
}

impl MulAssign<&QScalar> for QScalar {
    fn mul_assign(&mut self, o: &QScalar) {
        *self = &*self * o;
    }
}

impl From<i64> for QScalar {
    fn from(n: i64) -> Self {
        QScalar::int(n)
    }
}

/// Total order used only for deterministic output; not a field order.
impl PartialOrd for QScalar {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for QScalar {
    fn cmp(&self, o: &Self) -> Ordering {
        self.render(false).cmp(&o.render(false))
    }
}

/// Parse a rational literal such as `3`, `-2/5`.
pub fn parse_rational(t: &str) -> Option<Rational> {
    let t = t.trim();
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(Rational::new(n, d))
    } else {
        Some(Rational::from_integer(t.parse().ok()?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> QScalar {
        QScalar::q()
    }

    #[test]
    fn polynomial_division_cancels() {
        // (q^2 - 1)/(q - 1) = q + 1
        let num = q() * q() - QScalar::one();
        let den = q() - QScalar::one();
        let v = num.checked_div(&den).unwrap();
        assert_eq!(v, q() + QScalar::one());
        assert!(v.is_laurent());
    }

    #[test]
    fn lambda_canonical() {
        let l = QScalar::s_pow(2) - QScalar::s_pow(-2);
        let p = Poly::from_coeffs(vec![rat(-1), rat(0), rat(0), rat(0), rat(1)]);
        let n = QScalar::normalize(p, 0, Poly::one(), 2).unwrap();
        assert_eq!(l, n);
        assert_eq!(l, QScalar::lambda());
    }

    #[test]
    fn determinant_prefactor_has_monic_denominator() {
        let v = (-q()).checked_div(&(QScalar::one() + q() * q())).unwrap();
        assert!(v.denominator().lead().unwrap().is_one());
        assert_eq!(v.render(true), "-q/(q^2 + 1)");
    }

    #[test]
    fn zero_denominator_rejected() {
        assert_eq!(QScalar::normalize(Poly::one(), 0, Poly::zero(), 0), Err(Error::DivisionByZero));
        assert!(QScalar::one().checked_div(&QScalar::zero()).is_err());
    }

    #[test]
    fn evaluation() {
        let one = Rational::one();
        assert_eq!(QScalar::lambda().evaluate(&one).unwrap(), Rational::zero());
        let v = q() + QScalar::q_pow(-1);
        assert_eq!(v.evaluate(&one).unwrap(), rat(2));
        let inv = QScalar::lambda().inv().unwrap();
        match inv.evaluate(&one) {
            Err(Error::Pole { factor, .. }) => assert!(factor.contains("s^4")),
            other => panic!("expected pole, got {other:?}"),
        }
        assert_eq!(QScalar::one().evaluate(&Rational::zero()), Err(Error::ZeroSpecialization));
    }

    #[test]
    fn normalize_idempotent() {
        let v = (q() + QScalar::int(3)).checked_div(&(q() * q() - QScalar::int(9))).unwrap();
        let (n, k) = v.numerator();
        let w = QScalar::normalize(n.clone(), k, v.denominator().clone(), 0).unwrap();
        assert_eq!(v, w);
        assert_eq!(v, QScalar::one().checked_div(&(q() - QScalar::int(3))).unwrap());
    }

    #[test]
    fn render_forms() {
        assert_eq!(QScalar::s_pow(-1).render(false), "s^-1");
        assert_eq!(QScalar::lambda().render(false), "s^2 - s^-2");
        assert_eq!(QScalar::lambda().render(true), "q - q^-1");
        assert_eq!(QScalar::frac(-3, 2).render(false), "-3/2");
    }
}
