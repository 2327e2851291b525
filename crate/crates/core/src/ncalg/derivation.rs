use std::collections::HashMap;

use super::gen::{word_grade, word_text, Gen};
use super::poly::NCPoly;
use super::rewrite::RewriteSystem;
use crate::error::{Error, Result};
use crate::qscalar::{QScalar, Rational};

/// A linear map defined on generators and extended by the graded Leibniz
/// rule `D(a b) = D(a) b + (-1)^{|a| deg D} a D(b)`.
#[derive(Clone, Debug)]
pub struct GradedDerivation {
    pub name: String,
    /// Degree of the map: 1 for exterior derivatives, 0 for even derivations.
    pub degree: u32,
    images: HashMap<Gen, NCPoly>,
}

impl GradedDerivation {
    pub fn new(name: &str, degree: u32) -> Self {
        GradedDerivation { name: name.into(), degree, images: HashMap::new() }
    }

    pub fn set(&mut self, g: Gen, image: NCPoly) -> &mut Self {
        self.images.insert(g, image);
        self
    }

    pub fn image(&self, g: Gen) -> Option<&NCPoly> {
        self.images.get(&g)
    }

    pub fn defined_on(&self) -> Vec<Gen> {
        let mut v: Vec<Gen> = self.images.keys().copied().collect();
        v.sort();
        v
    }

    pub fn specialize(&self, s0: &Rational) -> Result<GradedDerivation> {
        let mut out = GradedDerivation::new(&self.name, self.degree);
        for (g, p) in &self.images {
            out.set(*g, p.specialize(s0)?);
        }
        Ok(out)
    }

    /// Leibniz expansion without reduction.
    pub fn expand(&self, p: &NCPoly) -> Result<NCPoly> {
        let mut out = NCPoly::zero();
        for (w, c) in p.terms() {
            for k in 0..w.len() {
                let img = self.images.get(&w[k]).ok_or_else(|| Error::NoImage(w[k].to_string()))?;
                let sign = if self.degree % 2 == 1 && word_grade(&w[..k]) % 2 == 1 { -1 } else { 1 };
                let t = img.lmul_word(&w[..k]).rmul_word(&w[k + 1..]);
                out.add_scaled(&t, &(c * &QScalar::int(sign)));
            }
        }
        Ok(out)
    }

    pub fn apply(&self, sys: &RewriteSystem, p: &NCPoly) -> Result<NCPoly> {
        sys.normal_form(&self.expand(p)?)
    }

    /// `D` respects every rule: `NF(D(lhs) - D(rhs)) = 0`. Returns the
    /// offending rules with their residues.
    pub fn compatibility(&self, sys: &RewriteSystem) -> Result<Vec<(String, NCPoly)>> {
        self.compatibility_avoiding(sys, &[])
    }

    /// [`Self::compatibility`] restricted to rules that do not mention `skip`.
    pub fn compatibility_avoiding(&self, sys: &RewriteSystem, skip: &[Gen]) -> Result<Vec<(String, NCPoly)>> {
        let mut bad = Vec::new();
        for r in sys.rules() {
            let mentioned = skip.contains(&r.lhs.0) || skip.contains(&r.lhs.1) || r.rhs.generators().any(|g| skip.contains(&g));
            if mentioned {
                continue;
            }
            let lhs = NCPoly::word(&[r.lhs.0, r.lhs.1]);
            let diff = self.expand(&(&lhs - &r.rhs))?;
            let res = sys.normal_form(&diff)?;
            if !res.is_zero() {
                bad.push((word_text(&[r.lhs.0, r.lhs.1]), res));
            }
        }
        Ok(bad)
    }

    /// `D(D(g))` for every generator in the domain; returns the non-zero ones.
    pub fn square_on_generators(&self, sys: &RewriteSystem) -> Result<Vec<(Gen, NCPoly)>> {
        let mut bad = Vec::new();
        for g in self.defined_on() {
            let once = self.apply(sys, &NCPoly::gen(g))?;
            let twice = self.apply(sys, &once)?;
            if !twice.is_zero() {
                bad.push((g, twice));
            }
        }
        Ok(bad)
    }
}

/// Components of a 1-form along the three left-invariant forms.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ThetaParts {
    /// Coefficient of `t(0)`.
    pub zero: NCPoly,
    /// Coefficient of `t(-2)`: the `D(+2)` image.
    pub plus: NCPoly,
    /// Coefficient of `t(+2)`: the `D(-2)` image.
    pub minus: NCPoly,
}

/// Split a grade-1 polynomial as `t(0) c0 + t(-2) cP2 + t(+2) cM2` after
/// reduction (theta generators sort leftmost).
pub fn theta_project(sys: &RewriteSystem, p: &NCPoly) -> Result<ThetaParts> {
    let nf = sys.normal_form(p)?;
    let mut out = ThetaParts::default();
    for (w, c) in nf.terms() {
        let ok = w.first().is_some_and(|g| g.class == super::gen::Class::Theta) && word_grade(&w[1..]) == 0;
        if !ok {
            return Err(Error::NotThetaSpan(nf.to_string()));
        }
        let rest = NCPoly::term(w[1..].iter().copied().collect(), c.clone());
        let slot = match w[0].idx[0] {
            0 => &mut out.zero,
            -2 => &mut out.plus,
            _ => &mut out.minus,
        };
        *slot = &*slot + &rest;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncalg::rewrite::SystemBuilder;

    #[test]
    fn leibniz_sign() {
        let (t, x) = (Gen::theta(0), Gen::x(1, 1));
        let mut b = SystemBuilder::new("toy");
        b.gen(t, 1, 0).gen(x, 1, 0);
        b.rule(t, t, NCPoly::zero()).unwrap();
        let sys = b.build();
        let mut d = GradedDerivation::new("d", 1);
        d.set(x, NCPoly::gen(t)).set(t, NCPoly::zero());
        // d(t x) = dt x - t dx = -t t = 0
        let r = d.apply(&sys, &NCPoly::word(&[t, x])).unwrap();
        assert!(r.is_zero());
        // d(x x) = t x + x t
        let r = d.apply(&sys, &NCPoly::word(&[x, x])).unwrap();
        assert_eq!(r, NCPoly::word(&[t, x]) + NCPoly::word(&[x, t]));
        assert!(d.compatibility(&sys).unwrap().is_empty());
    }

    #[test]
    fn missing_image() {
        let d = GradedDerivation::new("d", 1);
        assert!(matches!(d.expand(&NCPoly::gen(Gen::c())), Err(Error::NoImage(_))));
    }
}
