//! The quantum Euclidean space E_q(4): coordinates `x^i_alpha`, their
//! differentials, the central interval `tau` with its formal inverse, the
//! involution and the right-invariant forms `omega = dx S(x)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::ncalg::gen::{Gen, Word, SPINOR};
use crate::ncalg::{GradedDerivation, NCPoly, RewriteSystem, SystemBuilder};
use crate::qscalar::{QScalar, Rational};
use crate::qtensor::{epsilon, r_matrix};
use crate::report::{check, CheckResult};

pub fn x(i: u8, a: u8) -> Gen {
    Gen::x(i, a)
}

pub fn dx(i: u8, a: u8) -> Gen {
    Gen::dx(i, a)
}

pub const TAU: Gen = Gen::tau();
pub const TAU_INV: Gen = Gen::tau_inv();

/// Off-diagonal entries first: `(1,2) < (2,1) < (1,1) < (2,2)`.
pub const PBW_ORDER: [(u8, u8); 4] = [(1, 2), (2, 1), (1, 1), (2, 2)];

/// Plain lexicographic order; the 2-form relations are not confluent when
/// both off-diagonal differentials come first.
pub const DX_ORDER: [(u8, u8); 4] = [(1, 1), (1, 2), (2, 1), (2, 2)];

pub fn register_dx(b: &mut SystemBuilder) {
    for (i, a) in DX_ORDER {
        b.gen(dx(i, a), 1, 0);
    }
}

pub fn register_x(b: &mut SystemBuilder) {
    for (i, a) in PBW_ORDER {
        b.gen(x(i, a), 1, 0);
    }
}

pub fn register_tau(b: &mut SystemBuilder) {
    b.gen(TAU_INV, 1, 0).gen(TAU, 1, 0);
}

/// `-q/(1+q^2) eps^{ba} eps_{ki} x^i_a x^k_b`, unreduced.
pub fn tau_expansion() -> NCPoly {
    let pre = -(QScalar::q().checked_div(&(QScalar::one() + QScalar::q_pow(2))).expect("nonzero"));
    let mut p = NCPoly::zero();
    for i in SPINOR {
        for k in SPINOR {
            for a in SPINOR {
                for b in SPINOR {
                    let c = epsilon(false, b, a) * epsilon(true, k, i);
                    if !c.is_zero() {
                        p.add_scaled(&NCPoly::word(&[x(i, a), x(k, b)]), &(c * &pre));
                    }
                }
            }
        }
    }
    p
}

/// Component `(i,k,a,b)` of `R x x' - x x' R` for a two-index family `f`.
pub fn exchange_component(f: impl Fn(u8, u8) -> Gen, i: u8, k: u8, a: u8, b: u8) -> NCPoly {
    let mut p = NCPoly::zero();
    for l in SPINOR {
        for m in SPINOR {
            p.add_scaled(&NCPoly::word(&[f(l, a), f(m, b)]), &r_matrix(i, k, l, m));
        }
    }
    for g in SPINOR {
        for r in SPINOR {
            p.add_scaled(&NCPoly::word(&[f(i, g), f(k, r)]), &-r_matrix(g, r, a, b));
        }
    }
    p
}

/// `R^{ik}_{lm} u^l_g v^m_r R^{gr}_{ab}` for two families `u`, `v`.
pub fn sandwich(u: impl Fn(u8, u8) -> Gen, v: impl Fn(u8, u8) -> Gen, i: u8, k: u8, a: u8, b: u8) -> NCPoly {
    let mut p = NCPoly::zero();
    for l in SPINOR {
        for m in SPINOR {
            let r1 = r_matrix(i, k, l, m);
            if r1.is_zero() {
                continue;
            }
            for g in SPINOR {
                for r in SPINOR {
                    let r2 = r_matrix(g, r, a, b);
                    if !r2.is_zero() {
                        p.add_scaled(&NCPoly::word(&[u(l, g), v(m, r)]), &(&r1 * &r2));
                    }
                }
            }
        }
    }
    p
}

pub fn quad() -> Vec<(u8, u8, u8, u8)> {
    let mut v = Vec::new();
    for i in SPINOR {
        for k in SPINOR {
            for a in SPINOR {
                for b in SPINOR {
                    v.push((i, k, a, b));
                }
            }
        }
    }
    v
}

/// Coordinate exchange, the interval, `x dx` exchange, `dx dx` exchange and
/// the `tau` rules. Generators must already be registered.
pub fn euclid_rules(b: &mut SystemBuilder) -> Result<()> {
    let mut rels: Vec<NCPoly> = quad().into_iter().map(|(i, k, a, c)| exchange_component(x, i, k, a, c)).collect();
    rels.push(NCPoly::gen(TAU) - tau_expansion());
    b.relations(&rels)?;
    for (i, k, a, c) in quad() {
        b.rule(x(i, a), dx(k, c), sandwich(dx, x, i, k, a, c))?;
    }
    let forms: Vec<NCPoly> =
        quad().into_iter().map(|(i, k, a, c)| NCPoly::word(&[dx(i, a), dx(k, c)]) + sandwich(dx, dx, i, k, a, c)).collect();
    b.relations(&forms)?;
    for (i, a) in PBW_ORDER {
        b.rule(TAU, x(i, a), NCPoly::word(&[x(i, a), TAU]))?;
        b.rule(TAU_INV, x(i, a), NCPoly::word(&[x(i, a), TAU_INV]))?;
        b.rule(TAU, dx(i, a), NCPoly::word(&[dx(i, a), TAU]).scale(&QScalar::q_pow(2)))?;
        b.rule(TAU_INV, dx(i, a), NCPoly::word(&[dx(i, a), TAU_INV]).scale(&QScalar::q_pow(-2)))?;
    }
    b.rule(TAU, TAU_INV, NCPoly::one())?;
    b.rule(TAU_INV, TAU, NCPoly::one())?;
    b.record_inverse(TAU_INV, NCPoly::gen(TAU));
    Ok(())
}

/// `d x = dx`, `d dx = 0`, `d tau = d(tau(x))`, `d tau^-1 = -tau^-1 d tau tau^-1`.
pub fn euclid_derivation() -> GradedDerivation {
    let mut d = GradedDerivation::new("d_x", 1);
    let mut dtau = NCPoly::zero();
    for (w, c) in tau_expansion().terms() {
        dtau.add_scaled(&(NCPoly::gen(Gen::dx(w[0].idx[0] as u8, w[0].idx[1] as u8)) * NCPoly::gen(w[1])), c);
        dtau.add_scaled(&(NCPoly::gen(w[0]) * NCPoly::gen(Gen::dx(w[1].idx[0] as u8, w[1].idx[1] as u8))), c);
    }
    for (i, a) in PBW_ORDER {
        d.set(x(i, a), NCPoly::gen(dx(i, a)));
        d.set(dx(i, a), NCPoly::zero());
    }
    d.set(TAU_INV, -(NCPoly::gen(TAU_INV) * &dtau * NCPoly::gen(TAU_INV)));
    d.set(TAU, dtau);
    d
}

#[derive(Clone, Debug)]
pub struct Euclid {
    pub sys: RewriteSystem,
    pub d: GradedDerivation,
    pub s0: Option<Rational>,
}

pub fn build_espace() -> Result<Euclid> {
    let mut b = SystemBuilder::new("espace");
    register_dx(&mut b);
    register_x(&mut b);
    register_tau(&mut b);
    euclid_rules(&mut b)?;
    let sys = b.build();
    let rep = sys.check_local_confluence(3)?;
    if !rep.is_confluent() {
        return Err(Error::NotConfluent(rep.describe()));
    }
    Ok(Euclid { sys, d: euclid_derivation(), s0: None })
}

impl Euclid {
    pub fn specialize(&self, s0: &Rational) -> Result<Euclid> {
        Ok(Euclid { sys: self.sys.specialize(s0)?, d: self.d.specialize(s0)?, s0: Some(s0.clone()) })
    }

    pub fn k(&self, c: QScalar) -> QScalar {
        match &self.s0 {
            Some(s0) => c.specialize(s0).expect("no pole at the specialization point"),
            None => c,
        }
    }

    pub fn kp(&self, p: &NCPoly) -> NCPoly {
        match &self.s0 {
            Some(s0) => p.specialize(s0).expect("no pole at the specialization point"),
            None => p.clone(),
        }
    }

    pub fn nf(&self, p: &NCPoly) -> Result<NCPoly> {
        self.sys.normal_form(p)
    }

    pub fn dx_of(&self, p: &NCPoly) -> Result<NCPoly> {
        self.d.apply(&self.sys, p)
    }

    /// `S^a_i = eps_{il} x^l_b eps^{ba} tau^-1`.
    pub fn s_matrix(&self, a: u8, i: u8) -> NCPoly {
        let mut p = NCPoly::zero();
        for l in SPINOR {
            for b in SPINOR {
                let c = epsilon(true, i, l) * epsilon(false, b, a);
                if !c.is_zero() {
                    p.add_scaled(&NCPoly::word(&[x(l, b), TAU_INV]), &self.k(c));
                }
            }
        }
        p
    }

    /// `omega^i_k = dx^i_a S^a_k`.
    pub fn omega(&self, i: u8, k: u8) -> Result<NCPoly> {
        let p: NCPoly = SPINOR.iter().map(|&a| &NCPoly::gen(dx(i, a)) * &self.s_matrix(a, k)).sum();
        self.nf(&p)
    }

    /// `xi = D^k_i omega^i_k` with `D = diag(q^-1, q)`.
    pub fn xi(&self) -> Result<NCPoly> {
        let m = crate::qtensor::metric();
        let mut p = NCPoly::zero();
        for i in SPINOR {
            for k in SPINOR {
                let c = m.get(&[k, i]);
                if !c.is_zero() {
                    p.add_scaled(&self.omega(i, k)?, &self.k(c));
                }
            }
        }
        Ok(p)
    }

    /// The involution on coordinates and the interval.
    pub fn conj(&self, g: Gen) -> Result<NCPoly> {
        match g.class {
            crate::ncalg::Class::X => {
                let (i, a) = (g.idx[0] as u8, g.idx[1] as u8);
                let mut p = NCPoly::zero();
                for k in SPINOR {
                    for b in SPINOR {
                        let c = epsilon(true, i, k) * epsilon(false, b, a);
                        if !c.is_zero() {
                            p.add_scaled(&NCPoly::gen(x(k, b)), &self.k(c));
                        }
                    }
                }
                Ok(p)
            }
            crate::ncalg::Class::Tau | crate::ncalg::Class::TauInv => Ok(NCPoly::gen(g)),
            _ => Err(Error::ConjDomain(g.to_string())),
        }
    }

    /// Extend the involution linearly to polynomials in `x` and `tau`.
    /// Products are reversed when `anti` is set.
    pub fn conj_poly(&self, p: &NCPoly, anti: bool) -> Result<NCPoly> {
        let mut out = NCPoly::zero();
        for (w, c) in p.terms() {
            let mut acc = NCPoly::one();
            let gens: Vec<Gen> = if anti { w.iter().rev().copied().collect() } else { w.to_vec() };
            for g in gens {
                acc = &acc * &self.conj(g)?;
            }
            out.add_scaled(&acc, c);
        }
        self.nf(&out)
    }

    pub fn coordinates(&self) -> Vec<Gen> {
        PBW_ORDER.iter().map(|&(i, a)| x(i, a)).collect()
    }

    pub fn differentials(&self) -> Vec<Gen> {
        PBW_ORDER.iter().map(|&(i, a)| dx(i, a)).collect()
    }
}

/// Random words over `gens` of length `1..=maxlen`.
pub fn random_words(gens: &[Gen], count: usize, maxlen: usize, seed: u64) -> Vec<Word> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(1..=maxlen);
            (0..n).map(|_| gens[rng.gen_range(0..gens.len())]).collect()
        })
        .collect()
}

fn residual(p: NCPoly) -> Option<String> {
    if p.is_zero() {
        None
    } else {
        Some(p.to_string())
    }
}

fn first_nonzero(items: Vec<Result<NCPoly>>) -> Result<Option<String>> {
    for it in items {
        if let Some(r) = residual(it?) {
            return Ok(Some(r));
        }
    }
    Ok(None)
}

pub fn verify_espace_suite(e: &Euclid, seed: u64) -> Vec<CheckResult> {
    let coords = e.coordinates();
    let diffs = e.differentials();
    let q2l = e.k(QScalar::q_pow(2) * QScalar::lambda());
    let q = e.k(QScalar::q());
    vec![
        check("espace.confluence", "all length-3 overlaps of the E_q(4) rules resolve", || {
            let r = e.sys.check_local_confluence(3)?;
            Ok(if r.is_confluent() { None } else { Some(r.describe()) })
        }),
        check("espace.x-exchange", "R x x' = x x' R (16 components)", || {
            first_nonzero(quad().into_iter().map(|(i, k, a, b)| e.nf(&e.kp(&exchange_component(x, i, k, a, b)))).collect())
        }),
        check("espace.x-dx-exchange", "x dx' = R dx x' R (16 components)", || {
            first_nonzero(
                quad()
                    .into_iter()
                    .map(|(i, k, a, b)| e.nf(&(NCPoly::word(&[x(i, a), dx(k, b)]) - e.kp(&sandwich(dx, x, i, k, a, b)))))
                    .collect(),
            )
        }),
        check("espace.dx-dx-consistent", "d(x dx' - R dx x' R) = 0, i.e. dx dx' = -R dx dx' R", || {
            first_nonzero(
                quad()
                    .into_iter()
                    .map(|(i, k, a, b)| {
                        let rel = NCPoly::word(&[x(i, a), dx(k, b)]) - e.kp(&sandwich(dx, x, i, k, a, b));
                        e.dx_of(&rel)
                    })
                    .collect(),
            )
        }),
        check("espace.d-respects-rules", "d_x(lhs - rhs) = 0 for every rule", || {
            let bad = e.d.compatibility(&e.sys)?;
            Ok(bad.first().map(|(w, r)| format!("{w}: {r}")))
        }),
        check("espace.tau-expansion", "tau = -q/(1+q^2) eps^{ba} eps_{ki} x^i_a x^k_b", || {
            Ok(residual(e.nf(&(NCPoly::gen(TAU) - e.kp(&tau_expansion())))?))
        }),
        check("espace.tau-central", "[tau(x), x^i_a] = 0", || {
            let t = e.kp(&tau_expansion());
            first_nonzero(coords.iter().map(|&g| e.nf(&(&t * &NCPoly::gen(g) - &NCPoly::gen(g) * &t))).collect())
        }),
        check("espace.tau-dx", "tau(x) dx = q^2 dx tau(x)", || {
            let t = e.kp(&tau_expansion());
            let q2 = e.k(QScalar::q_pow(2));
            first_nonzero(
                diffs.iter().map(|&g| e.nf(&(&t * &NCPoly::gen(g) - (&NCPoly::gen(g) * &t).scale(&q2)))).collect(),
            )
        }),
        check("espace.d2", "d_x d_x = 0 on generators and 200 random words of length <= 5", || {
            if let Some((g, r)) = e.d.square_on_generators(&e.sys)?.into_iter().next() {
                return Ok(Some(format!("{g}: {r}")));
            }
            let mut gens = coords.clone();
            gens.extend(diffs.iter().copied());
            let words = random_words(&gens, 200, 5, seed);
            first_nonzero(words.iter().map(|w| e.dx_of(&e.dx_of(&NCPoly::word(w))?)).collect())
        }),
        check("espace.inverse", "S(x) x = x S(x) = 1", || {
            let mut items = Vec::new();
            for a in SPINOR {
                for b in SPINOR {
                    let p: NCPoly = SPINOR.iter().map(|&i| &e.s_matrix(a, i) * &NCPoly::gen(x(i, b))).sum();
                    items.push(e.nf(&if a == b { p - NCPoly::one() } else { p }));
                }
            }
            for i in SPINOR {
                for k in SPINOR {
                    let p: NCPoly = SPINOR.iter().map(|&a| &NCPoly::gen(x(i, a)) * &e.s_matrix(a, k)).sum();
                    items.push(e.nf(&if i == k { p - NCPoly::one() } else { p }));
                }
            }
            first_nonzero(items)
        }),
        check("espace.conj-involutive", "conj(conj(x)) = x, conj(tau) = tau", || {
            let mut items: Vec<Result<NCPoly>> = coords
                .iter()
                .map(|&g| Ok(e.conj_poly(&e.conj(g)?, false)? - NCPoly::gen(g)))
                .collect();
            items.push(Ok(e.conj(TAU)? - NCPoly::gen(TAU)));
            first_nonzero(items)
        }),
        check("espace.conj-inverse", "conj(x^i_a) = tau S^a_i", || {
            first_nonzero(
                coords
                    .iter()
                    .map(|&g| {
                        let (i, a) = (g.idx[0] as u8, g.idx[1] as u8);
                        e.nf(&(e.conj(g)? - NCPoly::gen(TAU) * e.s_matrix(a, i)))
                    })
                    .collect(),
            )
        }),
        check("espace.conj-domain", "conj rejects differentials", || {
            Ok(match e.conj(dx(1, 1)) {
                Err(Error::ConjDomain(_)) => None,
                _ => Some("conj accepted dx".into()),
            })
        }),
        check("espace.xi-square", "xi^2 = 0", || {
            let xi = e.xi()?;
            Ok(residual(e.nf(&(&xi * &xi))?))
        }),
        check("espace.xi-closed", "d xi = 0", || Ok(residual(e.dx_of(&e.xi()?)?))),
        check("espace.dx-commutator", "q^2 lambda dx = [x, xi]", || {
            let xi = e.xi()?;
            first_nonzero(
                coords
                    .iter()
                    .map(|&g| {
                        let gx = NCPoly::gen(g);
                        let dg = NCPoly::gen(dx(g.idx[0] as u8, g.idx[1] as u8));
                        e.nf(&(dg.scale(&q2l) - (&gx * &xi - &xi * &gx)))
                    })
                    .collect(),
            )
        }),
        check("espace.dtau", "q d tau = xi tau", || {
            let xi = e.xi()?;
            Ok(residual(e.nf(&(e.dx_of(&NCPoly::gen(TAU))?.scale(&q) - &xi * &NCPoly::gen(TAU)))?))
        }),
        check("espace.dx-omega", "dx = omega x", || {
            let mut items = Vec::new();
            for i in SPINOR {
                for a in SPINOR {
                    let mut p = -NCPoly::gen(dx(i, a));
                    for k in SPINOR {
                        p = p + &e.omega(i, k)? * &NCPoly::gen(x(k, a));
                    }
                    items.push(e.nf(&p));
                }
            }
            first_nonzero(items)
        }),
        check("espace.omega-structure", "d omega = omega^2 = -(q^2 lambda)^-1 {xi, omega}", || {
            let xi = e.xi()?;
            let inv = q2l.inv()?;
            let mut items = Vec::new();
            for i in SPINOR {
                for k in SPINOR {
                    let w = e.omega(i, k)?;
                    let mut sq = NCPoly::zero();
                    for j in SPINOR {
                        sq = sq + &e.omega(i, j)? * &e.omega(j, k)?;
                    }
                    items.push(e.nf(&(e.dx_of(&w)? - &sq)));
                    items.push(e.nf(&(&sq + &(&xi * &w + &w * &xi).scale(&inv))));
                }
            }
            first_nonzero(items)
        }),
    ]
}

/// At `s = 1` coordinates commute, differentials anticommute and `x dx = dx x`.
pub fn verify_classical_limit(e: &Euclid) -> Vec<CheckResult> {
    let one = Rational::from_integer(1.into());
    let spec = e.specialize(&one);
    let pairs = |f: &dyn Fn(Gen, Gen) -> NCPoly| -> Result<Option<String>> {
        let c = spec.as_ref().map_err(Clone::clone)?;
        let mut items = Vec::new();
        for (i, a) in PBW_ORDER {
            for (k, b) in PBW_ORDER {
                items.push(c.nf(&f(x(i, a), x(k, b))));
            }
        }
        first_nonzero(items)
    };
    vec![
        check("espace.classical-x", "s = 1: x x' = x' x", || {
            pairs(&|g, h| NCPoly::word(&[g, h]) - NCPoly::word(&[h, g]))
        }),
        check("espace.classical-dx", "s = 1: dx dx' = -dx' dx", || {
            pairs(&|g, h| {
                let (dg, dh) = (dx(g.idx[0] as u8, g.idx[1] as u8), dx(h.idx[0] as u8, h.idx[1] as u8));
                NCPoly::word(&[dg, dh]) + NCPoly::word(&[dh, dg])
            })
        }),
        check("espace.classical-x-dx", "s = 1: x dx' = dx' x", || {
            pairs(&|g, h| {
                let dh = dx(h.idx[0] as u8, h.idx[1] as u8);
                NCPoly::word(&[g, dh]) - NCPoly::word(&[dh, g])
            })
        }),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_counts() {
        let e = build_espace().unwrap();
        let dxdx = e.sys.rules().iter().filter(|r| r.lhs.0.class == crate::ncalg::Class::Dx).count();
        let xx = e.sys.rules().iter().filter(|r| r.lhs.0.class == crate::ncalg::Class::X && r.lhs.1.class == crate::ncalg::Class::X).count();
        assert_eq!(dxdx, 10);
        assert_eq!(xx, 7);
    }

    #[test]
    fn determinant_words_reduce_to_tau() {
        let e = build_espace().unwrap();
        let ad = NCPoly::word(&[x(1, 1), x(2, 2)]);
        let nf = e.nf(&ad).unwrap();
        assert_eq!(nf.coeff(&[TAU]), QScalar::one());
    }

    #[test]
    fn conj_outside_domain() {
        let e = build_espace().unwrap();
        assert!(matches!(e.conj(dx(1, 2)), Err(Error::ConjDomain(_))));
    }
}
