//! Harmonic space E_q(4) x S^2_q: mixed coordinate-harmonic relations,
//! derivative symbols, covariant analytic 1-forms and the d1/d2 split of d_x.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::espace::{dx, random_words, euclid_derivation, euclid_rules, quad, tau_expansion, x, DX_ORDER, PBW_ORDER, TAU, TAU_INV};
use crate::ncalg::gen::{charge_index, word_text, Class, Gen, Word, CHARGES, SPINOR};
use crate::ncalg::{GradedDerivation, NCPoly, RewriteSystem, SystemBuilder};
use crate::qgauge::{
    build_instanton, curvature, extend_derivation, g, gauge_rules, register_gauge, tower_numerator, GaugeAlgebra,
    GaugeForm, C,
};
use crate::qscalar::{QScalar, Rational};
use crate::qsphere::{
    harmonic_derivative, harmonic_relations, harmonics, mc_coefficient, theta_matrix, theta_rules, u, words_up_to, DOp,
    Sphere, THETAS,
};
use crate::qtensor::{epsilon, r_inverse, r_matrix};
use crate::report::{check, explore, CheckResult};

/// Tower depth used inside harmonic space.
pub const TOWER: i8 = 4;

pub fn partial(alpha: u8, i: u8) -> Gen {
    Gen::d(alpha, i)
}

pub fn partials() -> Vec<Gen> {
    let mut v = Vec::new();
    for a in SPINOR {
        for i in SPINOR {
            v.push(partial(a, i));
        }
    }
    v
}

/// `R^{ij}_{kl} R^{ar}_{bg} f^l_r d^g_j`, the reordered part of `d^a_k f^i_b`.
pub fn rr_sandwich(f: impl Fn(u8, u8) -> Gen, alpha: u8, k: u8, i: u8, beta: u8) -> NCPoly {
    sandwich_with(r_matrix, f, alpha, k, i, beta)
}

pub fn sandwich_with(
    rm: fn(u8, u8, u8, u8) -> QScalar,
    f: impl Fn(u8, u8) -> Gen,
    alpha: u8,
    k: u8,
    i: u8,
    beta: u8,
) -> NCPoly {
    let mut p = NCPoly::zero();
    for j in SPINOR {
        for l in SPINOR {
            let r1 = rm(i, j, k, l);
            if r1.is_zero() {
                continue;
            }
            for r in SPINOR {
                for gm in SPINOR {
                    let r2 = rm(alpha, r, beta, gm);
                    if !r2.is_zero() {
                        p.add_scaled(&NCPoly::word(&[f(l, r), partial(gm, j)]), &(&r1 * &r2));
                    }
                }
            }
        }
    }
    p
}

fn delta(a: u8, b: u8) -> QScalar {
    if a == b {
        QScalar::one()
    } else {
        QScalar::zero()
    }
}

/// Harmonic label of the analytic coordinates `x_{a c}` and of the summand
/// `d1 = kappa^c_a d^a_c`.
pub const ANALYTIC: i8 = -1;

/// The sphere operator that annihilates analytic functions.
pub const ANALYTIC_DELTA: DOp = DOp::Minus;

/// Generators and every rule except those of the derivative symbols. The
/// gauge tower is included when `tower` is set.
fn base_builder(name: &str, tower: Option<i8>) -> Result<SystemBuilder> {
    let mut b = SystemBuilder::new(name);
    for t in THETAS {
        b.gen(t, 1, 0);
    }
    for (i, a) in DX_ORDER {
        b.gen(dx(i, a), 1, 0);
    }
    for (i, a) in PBW_ORDER {
        b.gen(x(i, a), 1, 0);
    }
    b.gen(u(1, -1), 1, 0).gen(u(2, 1), 1, 0).gen(u(1, 1), 1, 0).gen(u(2, -1), 1, 0);
    b.gen(TAU_INV, 1, 0).gen(TAU, 1, 0);
    if let Some(n) = tower {
        register_gauge(&mut b, n);
    }
    for d in partials() {
        b.gen(d, 3, 0);
    }
    b.relations(&harmonic_relations())?;
    theta_rules(&mut b)?;
    euclid_rules(&mut b)?;
    let su = mixed_scale();
    for h in harmonics() {
        let (i, a) = (h.idx[0] as u8, h.idx[1]);
        for (k, be) in PBW_ORDER {
            let mut xr = NCPoly::zero();
            let mut dr = NCPoly::zero();
            for l in SPINOR {
                for m in SPINOR {
                    let r = r_matrix(i, k, l, m);
                    if !r.is_zero() {
                        xr.add_scaled(&NCPoly::word(&[x(l, be), u(m, a)]), &(&r * &su));
                        dr.add_scaled(&NCPoly::word(&[dx(l, be), u(m, a)]), &(&r * &su));
                    }
                }
            }
            b.rule(h, x(k, be), xr)?;
            b.rule(h, dx(k, be), dr)?;
        }
        b.rule(TAU, h, NCPoly::word(&[h, TAU]))?;
        b.rule(TAU_INV, h, NCPoly::word(&[h, TAU_INV]))?;
    }
    for t in THETAS {
        for (i, a) in PBW_ORDER {
            b.rule(x(i, a), t, NCPoly::word(&[t, x(i, a)]))?;
            b.rule(dx(i, a), t, -NCPoly::word(&[t, dx(i, a)]))?;
        }
        b.rule(TAU, t, NCPoly::word(&[t, TAU]))?;
        b.rule(TAU_INV, t, NCPoly::word(&[t, TAU_INV]))?;
    }
    if let Some(n) = tower {
        let mut commuting: Vec<Gen> = THETAS.to_vec();
        commuting.extend(PBW_ORDER.iter().map(|&(i, a)| x(i, a)));
        commuting.extend(harmonics());
        commuting.extend([TAU_INV, TAU]);
        gauge_rules(&mut b, n, &commuting)?;
    }
    Ok(b)
}

/// Scale of the harmonic-coordinate exchange `u x = s^-1 R x u`; the
/// determinant of `u` is central only for this value.
pub fn mixed_scale() -> QScalar {
    QScalar::s_pow(-1)
}

/// Rules moving `d^a_i` to the right: the twisted Heisenberg relation with
/// `x`, `d dx = R^-1 R^-1 dx d`, `d u = s^-1 R u d`, inert forms and `c`,
/// and the derived passage through `tau`, `tau^-1` and the tower.
fn add_partial_rules(b: &mut SystemBuilder, tower: Option<i8>) -> Result<()> {
    let su = mixed_scale();
    for (al, k, i, be) in quad() {
        let rhs = NCPoly::scalar(delta(al, be) * delta(i, k)) + rr_sandwich(x, al, k, i, be);
        b.rule(partial(al, k), x(i, be), rhs)?;
        b.rule(partial(al, k), dx(i, be), sandwich_with(r_inverse, dx, al, k, i, be))?;
    }
    for d in partials() {
        let (al, i) = (d.idx[0] as u8, d.idx[1] as u8);
        for h in harmonics() {
            let (l, a) = (h.idx[0] as u8, h.idx[1]);
            let mut p = NCPoly::zero();
            for m in SPINOR {
                for k in SPINOR {
                    let r = r_matrix(l, m, i, k);
                    if !r.is_zero() {
                        p.add_scaled(&NCPoly::word(&[u(k, a), partial(al, m)]), &(&r * &su));
                    }
                }
            }
            b.rule(d, h, p)?;
        }
        for t in THETAS {
            b.rule(d, t, NCPoly::word(&[t, d]))?;
        }
        if tower.is_some() {
            b.rule(d, C, NCPoly::word(&[C, d]))?;
        }
        b.annihilator(d);
    }
    let tmp = b.build();
    for d in partials() {
        let img = tmp.normal_form(&(NCPoly::gen(d) * tau_expansion()))?;
        let scale = img.coeff(&[TAU, d]);
        let v = img.filter(|w| !w.contains(&d));
        let rest = img.filter(|w| w.contains(&d) && w.as_slice() != [TAU, d]);
        if !rest.is_zero() || scale != QScalar::q_pow(2) {
            return Err(Error::RuleDerivation(format!("{d} tau = {img}")));
        }
        b.rule(d, TAU, img.clone())?;
        let tinv = NCPoly::gen(TAU_INV);
        let rhs = (&tinv * &NCPoly::gen(d)) - &(&tinv * &v) * &tinv;
        b.rule(d, TAU_INV, rhs.scale(&QScalar::q_pow(-2)))?;
        if let Some(top) = tower {
            // d (c + k tau) = (c + q^2 k tau) d + k v
            for n in 0..top {
                let k = QScalar::q_pow(2 * n as i32);
                let tail = &(&NCPoly::gen(g(n + 1)) * &v) * &NCPoly::gen(g(n));
                b.rule(d, g(n), NCPoly::word(&[g(n + 1), d]) - tail.scale(&k))?;
            }
        }
    }
    Ok(())
}

/// `d_x`: `x -> dx`, harmonics and forms inert, `tau` and the tower as in
/// the gauge layer.
pub fn hspace_derivation(tower: i8) -> GradedDerivation {
    let mut d = euclid_derivation();
    extend_derivation(&mut d, tower);
    for t in THETAS {
        d.set(t, NCPoly::zero());
    }
    for h in harmonics() {
        d.set(h, NCPoly::zero());
    }
    d
}

/// `d_u` extended by zero to coordinates, differentials and the tower.
fn harmonic_part(tower: i8) -> (GradedDerivation, Vec<Gen>) {
    let mut d = harmonic_derivative(&mc_coefficient());
    let mut inert: Vec<Gen> = Vec::new();
    inert.extend(PBW_ORDER.iter().map(|&(i, a)| x(i, a)));
    inert.extend(PBW_ORDER.iter().map(|&(i, a)| dx(i, a)));
    inert.extend([TAU, TAU_INV, C]);
    inert.extend((0..=tower).map(g));
    for &h in &inert {
        d.set(h, NCPoly::zero());
    }
    (d, inert)
}

/// `d = d_x + d_u`.
fn total_derivation(dx_: &GradedDerivation, du: &GradedDerivation) -> GradedDerivation {
    let mut d = GradedDerivation::new("d", 1);
    for h in dx_.defined_on() {
        let a = dx_.image(h).cloned().unwrap_or_default();
        let b = du.image(h).cloned().unwrap_or_default();
        d.set(h, a + b);
    }
    for h in du.defined_on() {
        if dx_.image(h).is_none() {
            d.set(h, du.image(h).cloned().unwrap_or_default());
        }
    }
    d
}

#[derive(Clone, Debug)]
pub struct HarmonicSpace {
    /// Coordinates, harmonics, forms, `tau` and derivative symbols.
    pub sys: RewriteSystem,
    /// The same with the central `c` and the inverse tower, carrying `d_x`.
    pub ext: GaugeAlgebra,
    /// Sphere operators over `ext`.
    pub sph: Sphere,
    /// `ext` without the derivative rules; home of `d = d_x + d_u`.
    pub forms: RewriteSystem,
    pub total: GradedDerivation,
    pub s0: Option<Rational>,
}

pub fn build_hspace() -> Result<HarmonicSpace> {
    let mut b = base_builder("hspace", None)?;
    add_partial_rules(&mut b, None)?;
    let sys = b.build();
    let rep = sys.check_local_confluence(3)?;
    if !rep.is_confluent() {
        return Err(Error::NotConfluent(rep.describe()));
    }
    let forms = base_builder("hspace-forms", Some(TOWER))?.build();
    let mut e = base_builder("hspace+tower", Some(TOWER))?;
    add_partial_rules(&mut e, Some(TOWER))?;
    let ext_sys = e.build();
    let dx_ = hspace_derivation(TOWER);
    let (du, inert) = harmonic_part(TOWER);
    let total = total_derivation(&dx_, &du);
    let sph = Sphere::embedded(ext_sys.clone(), du, None, &inert);
    let ext = GaugeAlgebra { sys: ext_sys, d: dx_, s0: None, tower: TOWER };
    Ok(HarmonicSpace { sys, ext, sph, forms, total, s0: None })
}

impl HarmonicSpace {
    pub fn specialize(&self, s0: &Rational) -> Result<HarmonicSpace> {
        Ok(HarmonicSpace {
            sys: self.sys.specialize(s0)?,
            ext: self.ext.specialize(s0)?,
            sph: self.sph.specialize(s0)?,
            forms: self.forms.specialize(s0)?,
            total: self.total.specialize(s0)?,
            s0: Some(s0.clone()),
        })
    }

    pub fn k(&self, c: QScalar) -> QScalar {
        self.ext.k(c)
    }

    pub fn nf(&self, p: &NCPoly) -> Result<NCPoly> {
        self.ext.nf(p)
    }

    /// `p` with its coefficients evaluated at the specialization point.
    pub fn kp(&self, p: &NCPoly) -> Result<NCPoly> {
        match &self.s0 {
            Some(s0) => p.specialize(s0),
            None => Ok(p.clone()),
        }
    }

    /// `x_{a c} = eps_{ik} x^k_a u^i_c`.
    pub fn x_lower(&self, al: u8, c: i8) -> Result<NCPoly> {
        let mut p = NCPoly::zero();
        for i in SPINOR {
            for k in SPINOR {
                let e = epsilon(true, i, k);
                if !e.is_zero() {
                    p.add_scaled(&NCPoly::word(&[x(k, al), u(i, c)]), &self.k(e));
                }
            }
        }
        self.nf(&p)
    }

    /// `d^a_c = u^i_c d^a_i`.
    pub fn partial_h(&self, al: u8, c: i8) -> NCPoly {
        SPINOR.iter().map(|&i| NCPoly::word(&[u(i, c), partial(al, i)])).sum()
    }

    /// `kappa_{a c} = eps_{ki} dx^i_a u^k_c`.
    pub fn kappa_lower(&self, al: u8, c: i8) -> Result<NCPoly> {
        let mut p = NCPoly::zero();
        for i in SPINOR {
            for k in SPINOR {
                let e = epsilon(true, k, i);
                if !e.is_zero() {
                    p.add_scaled(&NCPoly::word(&[dx(i, al), u(k, c)]), &self.k(e));
                }
            }
        }
        self.nf(&p)
    }

    /// `kappa^c_a = eps^{cb} kappa_{a b}`.
    pub fn kappa_upper(&self, c: i8, al: u8) -> Result<NCPoly> {
        let mut p = NCPoly::zero();
        for b in CHARGES {
            let e = epsilon(false, charge_index(c), charge_index(b));
            if !e.is_zero() {
                p.add_scaled(&self.kappa_lower(al, b)?, &self.k(e));
            }
        }
        Ok(p)
    }

    /// `d^a_c f` for a function `f`: the derivative symbol acting on the unit.
    pub fn deriv(&self, al: u8, c: i8, f: &NCPoly) -> Result<NCPoly> {
        self.ext.sys.act_on_unit(&(&self.partial_h(al, c) * f))
    }

    /// `kappa^c_a d^a_c` acting on `Theta f` as `(-1)^{|Theta|} Theta kappa^c_a d^a_c f`.
    pub fn d_part(&self, c: i8, p: &NCPoly) -> Result<NCPoly> {
        let nf = self.nf(p)?;
        let kap: Vec<NCPoly> = SPINOR.iter().map(|&al| self.kappa_upper(c, al)).collect::<Result<_>>()?;
        let mut out = NCPoly::zero();
        for (w, coeff) in nf.terms() {
            let cut = w.iter().take_while(|h| h.grade() == 1).count();
            if w[cut..].iter().any(|h| h.grade() == 1) {
                return Err(Error::FormResidue(crate::ncalg::gen::word_text(w)));
            }
            let f = NCPoly::word(&w[cut..]);
            let mut df = NCPoly::zero();
            for (k, &al) in SPINOR.iter().enumerate() {
                df = df + &kap[k] * &self.deriv(al, c, &f)?;
            }
            let sign = QScalar::int(if cut % 2 == 1 { -1 } else { 1 });
            out.add_scaled(&df.lmul_word(&w[..cut]), &(coeff * &sign));
        }
        self.nf(&out)
    }

    /// The operator `kappa^c_a d^a_c` as an algebra element acting on the unit.
    pub fn d_op(&self, c: i8, p: &NCPoly) -> Result<NCPoly> {
        let mut op = NCPoly::zero();
        for al in SPINOR {
            op = op + &self.kappa_upper(c, al)? * &self.partial_h(al, c);
        }
        self.nf(&self.ext.sys.act_on_unit(&(&op * p))?)
    }

    /// `d1`, the summand carrying the derivative along the analytic harmonic.
    pub fn d1(&self, p: &NCPoly) -> Result<NCPoly> {
        self.d_part(ANALYTIC, p)
    }

    /// `d2`, the complementary summand.
    pub fn d2(&self, p: &NCPoly) -> Result<NCPoly> {
        self.d_part(-ANALYTIC, p)
    }

    pub fn dx_of(&self, p: &NCPoly) -> Result<NCPoly> {
        self.ext.dx_of(p)
    }

    /// Functions of `x` and `u`: all words up to `maxlen`.
    pub fn function_words(&self, maxlen: usize) -> Vec<Word> {
        let mut gens: Vec<Gen> = PBW_ORDER.iter().map(|&(i, a)| x(i, a)).collect();
        gens.extend(harmonics());
        words_up_to(&gens, maxlen)
    }

    /// Monomials in `x_{1+}` and `x_{2+}` of degree `1..=maxdeg`.
    pub fn analytic_monomials(&self, maxdeg: usize) -> Result<Vec<NCPoly>> {
        let base = [self.x_lower(1, ANALYTIC)?, self.x_lower(2, ANALYTIC)?];
        let mut out = Vec::new();
        let mut layer = vec![NCPoly::one()];
        for _ in 0..maxdeg {
            let mut next = Vec::new();
            for p in &layer {
                for b in &base {
                    next.push(self.nf(&(p * b))?);
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        Ok(out)
    }

    /// Splits a 1-form `sum dx^i_a w^a_i` as `sum kappa^c_a (u^i_c w^a_i)` and
    /// returns the `kappa^c` coefficients, keyed by `(c, a)`.
    pub fn kappa_components(&self, p: &NCPoly) -> Result<BTreeMap<(i8, u8), NCPoly>> {
        let nf = self.nf(p)?;
        let mut w: BTreeMap<(u8, u8), NCPoly> = BTreeMap::new();
        for (word, c) in nf.terms() {
            let ok = word.first().is_some_and(|h| h.class == Class::Dx) && word[1..].iter().all(|h| h.grade() == 0);
            if !ok {
                return Err(Error::NotKappaPlus(crate::ncalg::gen::word_text(word)));
            }
            let key = (word[0].idx[0] as u8, word[0].idx[1] as u8);
            w.entry(key).or_default().add_term(word[1..].iter().copied().collect(), c.clone());
        }
        let mut out = BTreeMap::new();
        for c in CHARGES {
            for al in SPINOR {
                let mut acc = NCPoly::zero();
                for i in SPINOR {
                    if let Some(f) = w.get(&(i, al)) {
                        acc = acc + NCPoly::gen(u(i, c)) * f.clone();
                    }
                }
                out.insert((c, al), self.nf(&acc)?);
            }
        }
        Ok(out)
    }

    /// The analytic part `a_1 = kappa^c_a A^a_c` of a gauge 1-form.
    pub fn analytic_part(&self, a: &GaugeForm) -> Result<GaugeForm> {
        let mut out = GaugeForm::zero(1);
        for (&key, p) in &a.entries {
            let comps = self.kappa_components(p)?;
            let mut acc = NCPoly::zero();
            for al in SPINOR {
                acc = acc + &self.kappa_upper(ANALYTIC, al)? * &comps[&(ANALYTIC, al)];
            }
            out.entries.insert(key, self.nf(&acc)?);
        }
        Ok(out)
    }

    /// Errors unless every entry of `a1` lies in the analytic `kappa` span.
    pub fn require_analytic(&self, a1: &GaugeForm) -> Result<()> {
        for p in a1.entries.values() {
            for ((c, al), f) in self.kappa_components(p)? {
                if c != ANALYTIC && !tower_numerator(&self.ext, &f).is_zero() {
                    return Err(Error::NotKappaPlus(format!("kappa^-_{al} coefficient {f}")));
                }
            }
        }
        Ok(())
    }

    /// `d1 a1 - a1 a1`, entry by entry.
    pub fn zero_curvature(&self, a1: &GaugeForm) -> Result<GaugeForm> {
        self.require_analytic(a1)?;
        let mut out = GaugeForm::zero(2);
        for (&(i, k), p) in &a1.entries {
            let mut acc = self.d1(p)?;
            for j in SPINOR {
                acc = acc - a1.get(i, j) * a1.get(j, k);
            }
            out.entries.insert((i, k), self.nf(&acc)?);
        }
        Ok(out)
    }

    /// `{delta_X, d1} p`.
    pub fn delta_d1(&self, op: DOp, p: &NCPoly) -> Result<NCPoly> {
        let a = self.sph.delta(op, &self.d1(p)?)?;
        let b = self.d1(&self.sph.delta(op, p)?)?;
        self.nf(&(a + b))
    }
}

fn quad_free() -> impl Iterator<Item = (u8, u8)> {
    SPINOR.into_iter().flat_map(|a| SPINOR.into_iter().map(move |i| (a, i)))
}

fn residual(p: NCPoly) -> Option<String> {
    if p.is_zero() {
        None
    } else {
        Some(p.to_string())
    }
}

fn scan(items: impl IntoIterator<Item = (String, Result<NCPoly>)>) -> Result<Option<String>> {
    for (label, r) in items {
        if let Some(v) = residual(r?) {
            return Ok(Some(format!("{label}: {v}")));
        }
    }
    Ok(None)
}

/// First function word with `d2^2 w != 0`.
pub fn d2_squared_witness(hs: &HarmonicSpace, maxlen: usize) -> Result<Option<(Word, NCPoly)>> {
    for w in hs.function_words(maxlen) {
        let r = hs.d2(&hs.d2(&NCPoly::word(&w))?)?;
        if !r.is_zero() {
            return Ok(Some((w, r)));
        }
    }
    Ok(None)
}

pub fn verify_nilpotency(hs: &HarmonicSpace, maxlen: usize) -> Vec<CheckResult> {
    let words = hs.function_words(maxlen);
    let mut out = vec![
        check("hspace.d1-squared", "d1^2 = 0 on functions of x, u", || {
            scan(words.par_iter().map(|w| {
                let p = NCPoly::word(w);
                (word_text(w), hs.d1(&p).and_then(|a| hs.d1(&a)))
            }).collect::<Vec<_>>())
        }),
        check("hspace.d2-anticommutator", "d2^2 + {d1, d2} = 0 on functions of x, u", || {
            scan(words.par_iter().map(|w| {
                let p = NCPoly::word(w);
                let r = (|| {
                    let a = hs.d2(&hs.d2(&p)?)?;
                    let b = hs.d1(&hs.d2(&p)?)?;
                    let c = hs.d2(&hs.d1(&p)?)?;
                    hs.nf(&(a + b + c))
                })();
                (word_text(w), r)
            }).collect::<Vec<_>>())
        }),
    ];
    if hs.s0.as_ref().is_some_and(|s| *s == Rational::from_integer(1.into())) {
        out.push(check("hspace.d2-squared-classical", "d2^2 = 0 at s = 1", || {
            Ok(d2_squared_witness(hs, maxlen)?.map(|(w, r)| format!("{}: {r}", word_text(&w))))
        }));
    } else if hs.s0.is_some() {
        out.push(check("hspace.d2-squared-witness", "d2^2 != 0 on some word", || {
            Ok(d2_squared_witness(hs, maxlen)?.is_none().then(|| "no witness".into()))
        }));
    } else {
        out.push(check("hspace.d2-squared-witness", "d2^2 != 0 on some word, and 0 on it at s = 1", || {
            let Some((w, _)) = d2_squared_witness(hs, maxlen)? else {
                return Ok(Some("no witness".into()));
            };
            let classical = hs.specialize(&Rational::from_integer(1.into()))?;
            let r = classical.d2(&classical.d2(&NCPoly::word(&w))?)?;
            Ok(residual(r).map(|r| format!("{} at s = 1: {r}", word_text(&w))))
        }));
    }
    out
}

pub fn verify_analyticity_preservation(hs: &HarmonicSpace, maxdeg: usize) -> Vec<CheckResult> {
    vec![
        check("hspace.d1-analytic", "d1 annihilates analytic polynomials", || {
            let mons = hs.analytic_monomials(maxdeg)?;
            scan(mons.iter().map(|m| (m.to_string(), hs.d1(m))).collect::<Vec<_>>())
        }),
        check("hspace.d-analytic", "the analytic derivative annihilates analytic polynomials", || {
            let mons = hs.analytic_monomials(maxdeg)?;
            let mut items = Vec::new();
            for m in &mons {
                for al in SPINOR {
                    items.push((m.to_string(), hs.deriv(al, ANALYTIC, m)));
                }
            }
            scan(items)
        }),
        check("hspace.analyticity-preserved", "{delta0, d1} L = {deltabar, d1} L = 0 for analytic L", || {
            let mons = hs.analytic_monomials(maxdeg)?;
            let mut items = Vec::new();
            for m in &mons {
                for op in [DOp::Zero, ANALYTIC_DELTA] {
                    items.push((format!("{} {m}", op.name()), hs.delta_d1(op, m)));
                }
            }
            scan(items)
        }),
        explore("hspace.analyticity-witness", "{deltabar, d1} L' for non-analytic L'", || {
            let mut found = None;
            for al in SPINOR {
                let l = hs.x_lower(al, -ANALYTIC)?;
                let r = hs.delta_d1(ANALYTIC_DELTA, &l)?;
                if !r.is_zero() {
                    found = Some(format!("x_({al},{}): {r}", -ANALYTIC));
                    break;
                }
            }
            Ok(found)
        }),
    ]
}

/// The literal instanton in harmonic variables and its analytic part.
pub fn instanton_a1(hs: &HarmonicSpace) -> Result<(GaugeForm, GaugeForm)> {
    let a = build_instanton(&hs.ext)?;
    let a1 = hs.analytic_part(&a)?;
    Ok((a, a1))
}

/// `A^a_b = eps^{ag} eps_{ki} x^k_g dx^i_b g0`: the connection whose gauge
/// index sits on the Greek spinor.
pub fn conjugate_instanton(hs: &HarmonicSpace) -> Result<GaugeForm> {
    let mut out = GaugeForm::zero(1);
    for al in SPINOR {
        for be in SPINOR {
            let mut p = NCPoly::zero();
            for gm in SPINOR {
                for k in SPINOR {
                    for i in SPINOR {
                        let c = epsilon(true, al, gm) * epsilon(true, k, i);
                        if !c.is_zero() {
                            p.add_scaled(&NCPoly::word(&[x(k, gm), dx(i, be), g(0)]), &hs.k(c));
                        }
                    }
                }
            }
            out.entries.insert((al, be), hs.nf(&p)?);
        }
    }
    Ok(out)
}

fn conjugate_residual(hs: &HarmonicSpace) -> Result<Option<String>> {
    let a1 = hs.analytic_part(&conjugate_instanton(hs)?)?;
    Ok(form_residual(hs, &hs.zero_curvature(&a1)?))
}

fn form_residual(hs: &HarmonicSpace, f: &GaugeForm) -> Option<String> {
    f.entries.iter().find_map(|((a, b), p)| {
        let n = tower_numerator(&hs.ext, p);
        (!n.is_zero()).then(|| format!("({a},{b}): {n}"))
    })
}

pub fn check_zero_curvature(hs: &HarmonicSpace, id: &str, a1: &GaugeForm) -> CheckResult {
    check(id, "d1 a1 - a1^2 = 0", || Ok(form_residual(hs, &hs.zero_curvature(a1)?)))
}

pub fn verify_zero_curvature(hs: &HarmonicSpace) -> Vec<CheckResult> {
    let mut out = vec![
        check("hspace.instanton-kappa-split", "A = sum_c kappa^c A_c", || {
            let (a, _) = instanton_a1(hs)?;
            let mut items = Vec::new();
            for (&key, p) in &a.entries {
                let comps = hs.kappa_components(p)?;
                let mut acc = NCPoly::zero();
                for c in CHARGES {
                    for al in SPINOR {
                        acc = acc + &hs.kappa_upper(c, al)? * &comps[&(c, al)];
                    }
                }
                items.push((format!("{key:?}"), hs.nf(&(acc - p.clone()))));
            }
            scan(items)
        }),
        check("hspace.zero-curvature-trivial", "a1 = 0 gives d1 a1 - a1^2 = 0", || {
            Ok(form_residual(hs, &hs.zero_curvature(&GaugeForm::zero(1))?))
        }),
        check("hspace.zero-curvature-negative", "a probe analytic-sector form fails d1 a1 - a1^2 = 0", || {
            let mut probe = GaugeForm::zero(1);
            let p = &hs.kappa_upper(ANALYTIC, 1)? * &NCPoly::gen(x(2, 2));
            probe.entries.insert((1, 1), hs.nf(&p)?);
            Ok(match form_residual(hs, &hs.zero_curvature(&probe)?) {
                Some(_) => None,
                None => Some("probe satisfied the equation".into()),
            })
        }),
        check("hspace.kappa-plus-required", "a form outside the analytic kappa sector is rejected", || {
            let mut probe = GaugeForm::zero(1);
            probe.entries.insert((1, 1), hs.kappa_upper(-ANALYTIC, 1)?);
            Ok(match hs.zero_curvature(&probe) {
                Err(Error::NotKappaPlus(_)) => None,
                _ => Some("accepted".into()),
            })
        }),
    ];
    out.push(check("hspace.conjugate-zero-curvature-classical", "s = 1: the conjugate instanton satisfies d1 a1 - a1^2 = 0", || {
        conjugate_residual(&hs.specialize(&Rational::from_integer(1.into()))?)
    }));
    out.push(explore("hspace.conjugate-zero-curvature", "the conjugate instanton at generic s", || conjugate_residual(hs)));
    out.push(explore("hspace.instanton-zero-curvature-classical", "s = 1: the instanton's analytic part", || {
        let c = hs.specialize(&Rational::from_integer(1.into()))?;
        let (_, a1) = instanton_a1(&c)?;
        Ok(form_residual(&c, &c.zero_curvature(&a1)?))
    }));
    match instanton_a1(hs) {
        Ok((_, a1)) => out.push(check_zero_curvature(hs, "hspace.instanton-zero-curvature", &a1)),
        Err(e) => out.push(check("hspace.instanton-zero-curvature", "d1 a1 - a1^2 = 0", || Err(e))),
    }
    out
}

/// `eps_{ki} u^i_c u^k_c = 0` and its product with every instanton
/// curvature entry.
pub fn qgsde_integrability(hs: &HarmonicSpace) -> Vec<CheckResult> {
    let contraction = |c: i8| -> NCPoly {
        let mut p = NCPoly::zero();
        for i in SPINOR {
            for k in SPINOR {
                let e = epsilon(true, k, i);
                if !e.is_zero() {
                    p.add_scaled(&NCPoly::word(&[u(i, c), u(k, c)]), &hs.k(e));
                }
            }
        }
        p
    };
    vec![
        check("hspace.eps-uu", "eps_{ki} u^i_+ u^k_+ = eps_{ki} u^i_- u^k_- = 0", || {
            scan(CHARGES.iter().map(|&c| (format!("{c}"), hs.nf(&contraction(c)))).collect::<Vec<_>>())
        }),
        check("hspace.qgsde-integrability", "eps_{ki} u^i_+ u^k_+ F^{ba} = 0 for the instanton", || {
            let f = curvature(&hs.ext, &build_instanton(&hs.ext)?)?;
            let mut items = Vec::new();
            for c in CHARGES {
                for (k, p) in &f.entries {
                    items.push((format!("{c} {k:?}"), hs.nf(&(&contraction(c) * p))));
                }
            }
            scan(items)
        }),
    ]
}

/// Structural identities of the mixed algebra.
pub fn verify_structure(hs: &HarmonicSpace) -> Vec<CheckResult> {
    vec![
        check("hspace.confluence", "all length-3 overlaps of the harmonic-space rules resolve", || {
            let r = hs.sys.check_local_confluence(3)?;
            Ok(if r.is_confluent() { None } else { Some(r.describe()) })
        }),
        check("hspace.dx-respects-rules", "d_x(lhs - rhs) = 0 up to partial fractions, rules below the tower top", || {
            let bad = hs.ext.d.compatibility_avoiding(&hs.forms, &[g(TOWER)])?;
            Ok(bad.iter().find(|(_, r)| !tower_numerator(&hs.ext, r).is_zero()).map(|(w, r)| format!("{w}: {r}")))
        }),
        check("hspace.du-respects-rules", "d_u(lhs - rhs) = 0 for every rule", || {
            let bad = hs.sph.d.compatibility(&hs.forms)?;
            Ok(bad.first().map(|(w, r)| format!("{w}: {r}")))
        }),
        check("hspace.d-total-squared", "(d_x + d_u)^2 = 0 on generators", || {
            let bad = hs.total.square_on_generators(&hs.forms)?;
            Ok(bad.first().map(|(g, r)| format!("{g}: {r}")))
        }),
        check("hspace.analytic-exchange", "R^{cd}_{ab} x_{a c} x_{b d} = R^{gr}_{ab} x_{g a} x_{r b}", || {
            let mut items = Vec::new();
            for a in CHARGES {
                for b in CHARGES {
                    for al in SPINOR {
                        for be in SPINOR {
                            let mut p = NCPoly::zero();
                            for c in CHARGES {
                                for d in CHARGES {
                                    let r = r_matrix(charge_index(c), charge_index(d), charge_index(a), charge_index(b));
                                    if !r.is_zero() {
                                        p = p + (&hs.x_lower(al, c)? * &hs.x_lower(be, d)?).scale(&hs.k(r));
                                    }
                                }
                            }
                            for gm in SPINOR {
                                for rh in SPINOR {
                                    let r = r_matrix(gm, rh, al, be);
                                    if !r.is_zero() {
                                        p = p - (&hs.x_lower(gm, a)? * &hs.x_lower(rh, b)?).scale(&hs.k(r));
                                    }
                                }
                            }
                            items.push((format!("{a}{b}{al}{be}"), hs.nf(&p)));
                        }
                    }
                }
            }
            scan(items)
        }),
        check("hspace.analytic-derivative", "d^a_c x_{b e} = delta^a_b eps_{ji} u^i_c u^j_e on the unit", || {
            let mut items = Vec::new();
            for c in CHARGES {
                for e in CHARGES {
                    let mut expect = NCPoly::zero();
                    for i in SPINOR {
                        for j in SPINOR {
                            let v = epsilon(true, j, i);
                            if !v.is_zero() {
                                expect.add_scaled(&NCPoly::word(&[u(i, c), u(j, e)]), &hs.k(v));
                            }
                        }
                    }
                    for al in SPINOR {
                        for be in SPINOR {
                            let lhs = hs.deriv(al, c, &hs.x_lower(be, e)?)?;
                            let rhs = if al == be { expect.clone() } else { NCPoly::zero() };
                            items.push((format!("{al}{c}{be}{e}"), hs.nf(&(lhs - rhs))));
                        }
                    }
                }
            }
            scan(items)
        }),
        check("hspace.kappa-definition", "kappa_{a c} = d x_{a c} - x_{a b} theta^b_c", || {
            let mut items = Vec::new();
            for al in SPINOR {
                for c in CHARGES {
                    let mut p = hs.total.apply(&hs.ext.sys, &hs.x_lower(al, c)?)?;
                    for b in CHARGES {
                        p = p - &hs.x_lower(al, b)? * &hs.kp(&theta_matrix(b, c))?;
                    }
                    items.push((format!("{al}{c}"), hs.nf(&(hs.kappa_lower(al, c)? - p))));
                }
            }
            scan(items)
        }),
        check("hspace.kappa-closed", "d_x kappa = 0 and dx^i_a d^a_i kappa + kappa dx^i_a d^a_i = 0", || {
            let op: NCPoly = quad_free().map(|(al, i)| NCPoly::word(&[dx(i, al), partial(al, i)])).sum();
            let mut items = Vec::new();
            for al in SPINOR {
                for c in CHARGES {
                    let k = hs.kappa_upper(c, al)?;
                    items.push((format!("d_x {al}{c}"), hs.dx_of(&k)));
                    items.push((format!("{{D, k}} {al}{c}"), hs.nf(&(&op * &k + &k * &op))));
                }
            }
            scan(items)
        }),
        explore("hspace.kappa-total-d", "(d_x + d_u) kappa", || {
            let mut found = None;
            for al in SPINOR {
                for c in CHARGES {
                    let r = hs.total.apply(&hs.forms, &hs.kappa_lower(al, c)?)?;
                    if !r.is_zero() {
                        found = Some(format!("{al}{c}: {r}"));
                        break;
                    }
                }
            }
            Ok(found)
        }),
        check("hspace.kappa-exchange", "kappa^a_al kappa^b_be + R^{ba}_{dc} kappa^c_g kappa^d_r R^{gr}_{al be} = 0", || {
            let mut kap = BTreeMap::new();
            for c in CHARGES {
                for al in SPINOR {
                    kap.insert((c, al), hs.kappa_upper(c, al)?);
                }
            }
            let mut items = Vec::new();
            for a in CHARGES {
                for b in CHARGES {
                    for al in SPINOR {
                        for be in SPINOR {
                            let mut p = &kap[&(a, al)] * &kap[&(b, be)];
                            for c in CHARGES {
                                for d in CHARGES {
                                    let r1 = r_matrix(charge_index(b), charge_index(a), charge_index(d), charge_index(c));
                                    if r1.is_zero() {
                                        continue;
                                    }
                                    for gm in SPINOR {
                                        for rh in SPINOR {
                                            let r2 = r_matrix(gm, rh, al, be);
                                            if !r2.is_zero() {
                                                p = p + (&kap[&(c, gm)] * &kap[&(d, rh)]).scale(&hs.k(&r1 * &r2));
                                            }
                                        }
                                    }
                                }
                            }
                            items.push((format!("{a}{b}{al}{be}"), hs.nf(&p)));
                        }
                    }
                }
            }
            scan(items)
        }),
        check("hspace.d-split", "d_x f = d1 f + d2 f on functions of x, u of length <= 2", || {
            scan(hs.function_words(2).iter().map(|w| {
                let p = NCPoly::word(w);
                let r = (|| hs.nf(&(hs.dx_of(&p)? - hs.d1(&p)? - hs.d2(&p)?)))();
                (word_text(w), r)
            }).collect::<Vec<_>>())
        }),
    ]
}

/// At `s = 1` the derivative symbols satisfy `[d^a_k, x^i_b] = delta delta`.
pub fn verify_classical_heisenberg(hs: &HarmonicSpace) -> CheckResult {
    check("hspace.classical-heisenberg", "s = 1: d x - x d = delta delta", || {
        let c = hs.specialize(&Rational::from_integer(1.into()))?;
        let mut items = Vec::new();
        for (al, k, i, be) in quad() {
            let p = NCPoly::word(&[partial(al, k), x(i, be)]) - NCPoly::word(&[x(i, be), partial(al, k)]);
            let expect = NCPoly::scalar(delta(al, be) * delta(i, k));
            items.push((format!("{al}{k}{i}{be}"), c.sys.normal_form(&(p - expect))));
        }
        scan(items)
    })
}

/// Memoized, leftmost and rightmost reduction agree on seeded random words.
pub fn verify_strategies(hs: &HarmonicSpace, count: usize, maxlen: usize, seed: u64) -> CheckResult {
    check("hspace.strategy-agreement", "normal forms are independent of the reduction order", || {
        let words = random_words(&hs.sys.gens(), count, maxlen, seed);
        Ok(hs.sys.strategy_disagreement(&words)?.map(|w| word_text(&w)))
    })
}

pub fn verify_hspace_suite(hs: &HarmonicSpace, maxlen: usize) -> Vec<CheckResult> {
    let mut out = verify_structure(hs);
    out.push(verify_strategies(hs, 1000, 6, 7));
    out.push(verify_classical_heisenberg(hs));
    out.extend(verify_nilpotency(hs, maxlen));
    out.extend(verify_analyticity_preservation(hs, maxlen));
    out.extend(verify_zero_curvature(hs));
    out.extend(qgsde_integrability(hs));
    out
}
