//! Generators of the noncommutative algebras.
//!
//! The universe of symbols is closed: every algebra in the crate draws its
//! generators from [`Class`], so a generator is a 3-byte `Copy` value and
//! words can be hashed and compared without an interner.

use std::fmt;

use smallvec::SmallVec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Class {
    /// Left-invariant 1-forms on the quantum sphere, index 0, +2 or -2.
    Theta,
    /// Coordinate differentials dx^i_alpha.
    Dx,
    /// Coordinates x^i_alpha.
    X,
    /// Harmonics u^i_a, a = +1/-1.
    U,
    /// Formal inverse of the interval.
    TauInv,
    /// Central interval (kept atomic).
    Tau,
    /// Central periodic parameter.
    C,
    /// Inverse tower g_n = (c + q^{2n} tau)^{-1}.
    G,
    /// Derivatives d^alpha_i (stored as [alpha, i]).
    D,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gen {
    pub class: Class,
    pub idx: [i8; 2],
}

pub type Word = SmallVec<[Gen; 8]>;

impl Gen {
    pub const fn new(class: Class, a: i8, b: i8) -> Self {
        Gen { class, idx: [a, b] }
    }

    pub const fn theta(p: i8) -> Self {
        Gen::new(Class::Theta, p, 0)
    }

    /// u^i_a with `a` = +1 or -1.
    pub const fn u(i: u8, a: i8) -> Self {
        Gen::new(Class::U, i as i8, a)
    }

    pub const fn x(i: u8, alpha: u8) -> Self {
        Gen::new(Class::X, i as i8, alpha as i8)
    }

    pub const fn dx(i: u8, alpha: u8) -> Self {
        Gen::new(Class::Dx, i as i8, alpha as i8)
    }

    /// The derivative d^alpha_i.
    pub const fn d(alpha: u8, i: u8) -> Self {
        Gen::new(Class::D, alpha as i8, i as i8)
    }

    pub const fn tau() -> Self {
        Gen::new(Class::Tau, 0, 0)
    }

    pub const fn tau_inv() -> Self {
        Gen::new(Class::TauInv, 0, 0)
    }

    pub const fn c() -> Self {
        Gen::new(Class::C, 0, 0)
    }

    pub const fn g(n: i8) -> Self {
        Gen::new(Class::G, n, 0)
    }

    /// Form degree.
    pub fn grade(&self) -> u8 {
        match self.class {
            Class::Theta | Class::Dx => 1,
            _ => 0,
        }
    }

    /// U(1) charge.
    pub fn charge(&self) -> i32 {
        match self.class {
            Class::U => self.idx[1] as i32,
            Class::Theta => self.idx[0] as i32,
            _ => 0,
        }
    }
}

/// `+1 -> 1`, `-1 -> 2`: the U(1) label as a spinor index.
pub fn charge_index(a: i8) -> u8 {
    if a > 0 {
        1
    } else {
        2
    }
}

/// Inverse of [`charge_index`].
pub fn index_charge(i: u8) -> i8 {
    if i == 1 {
        1
    } else {
        -1
    }
}

fn sign_text(a: i8) -> &'static str {
    if a > 0 {
        "+"
    } else {
        "-"
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b] = self.idx;
        match self.class {
            Class::Theta => match a {
                0 => write!(f, "t(0)"),
                p => write!(f, "t({p:+})"),
            },
            Class::Dx => write!(f, "dx({a},{b})"),
            Class::X => write!(f, "x({a},{b})"),
            Class::U => write!(f, "u({a},{})", sign_text(b)),
            Class::TauInv => write!(f, "taui"),
            Class::Tau => write!(f, "tau"),
            Class::C => write!(f, "c"),
            Class::G => write!(f, "g({a})"),
            Class::D => write!(f, "d({a},{b})"),
        }
    }
}

pub fn word_grade(w: &[Gen]) -> u32 {
    w.iter().map(|g| g.grade() as u32).sum()
}

pub fn word_charge(w: &[Gen]) -> i32 {
    w.iter().map(Gen::charge).sum()
}

pub fn word_text(w: &[Gen]) -> String {
    if w.is_empty() {
        return "1".into();
    }
    w.iter().map(|g| g.to_string()).collect::<Vec<_>>().join(" * ")
}

pub const SPINOR: [u8; 2] = [1, 2];
pub const CHARGES: [i8; 2] = [1, -1];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grades_and_charges() {
        assert_eq!(Gen::u(1, 1).charge(), 1);
        assert_eq!(Gen::u(2, -1).charge(), -1);
        assert_eq!(Gen::theta(-2).charge(), -2);
        assert_eq!(Gen::theta(2).grade(), 1);
        assert_eq!(Gen::dx(1, 2).grade(), 1);
        assert_eq!(Gen::x(1, 2).grade(), 0);
        let w: Word = [Gen::u(1, 1), Gen::theta(2), Gen::u(2, -1)].into_iter().collect();
        assert_eq!(word_charge(&w), 2);
        assert_eq!(word_grade(&w), 1);
    }

    #[test]
    fn display() {
        assert_eq!(Gen::u(1, 1).to_string(), "u(1,+)");
        assert_eq!(Gen::theta(-2).to_string(), "t(-2)");
        assert_eq!(Gen::theta(2).to_string(), "t(+2)");
        assert_eq!(Gen::d(2, 1).to_string(), "d(2,1)");
    }
}
