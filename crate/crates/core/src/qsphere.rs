//! The quantum sphere SU_q(2)/U(1): harmonics `u^i_{+-}`, the three
//! left-invariant forms, the harmonic derivative `d_u`, its split into
//! `delta0 + delta + deltabar`, and the operators `D0`, `D(+2)`, `D(-2)`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::ncalg::gen::{charge_index, index_charge, word_charge, Gen, Word, CHARGES, SPINOR};
use crate::ncalg::{theta_project, GradedDerivation, NCPoly, RewriteSystem, SystemBuilder, ThetaParts};
use crate::qscalar::{QScalar, Rational};
use crate::qtensor::{epsilon, projector, Sign};

pub mod checks;

pub const T0: Gen = Gen::theta(0);
pub const TP: Gen = Gen::theta(2);
pub const TM: Gen = Gen::theta(-2);
pub const THETAS: [Gen; 3] = [T0, TM, TP];

pub fn u(i: u8, a: i8) -> Gen {
    Gen::u(i, a)
}

/// All four harmonics.
pub fn harmonics() -> [Gen; 4] {
    [u(1, 1), u(1, -1), u(2, 1), u(2, -1)]
}

/// The eight component equations of the harmonic relations, each `= 0`:
/// `eps_{ki} u^i_a u^k_b - eps_{ba}` and `eps^{ba} u^i_a u^k_b - eps^{ki}`.
pub fn harmonic_relations() -> Vec<NCPoly> {
    let mut out = Vec::new();
    for a in CHARGES {
        for b in CHARGES {
            let mut p = NCPoly::scalar(-epsilon(true, charge_index(b), charge_index(a)));
            for i in SPINOR {
                for k in SPINOR {
                    p.add_scaled(&NCPoly::word(&[u(i, a), u(k, b)]), &epsilon(true, k, i));
                }
            }
            out.push(p);
        }
    }
    for i in SPINOR {
        for k in SPINOR {
            let mut p = NCPoly::scalar(-epsilon(false, k, i));
            for a in CHARGES {
                for b in CHARGES {
                    let e = epsilon(false, charge_index(b), charge_index(a));
                    p.add_scaled(&NCPoly::word(&[u(i, a), u(k, b)]), &e);
                }
            }
            out.push(p);
        }
    }
    out
}

/// The Maurer-Cartan coefficient `q^2 (1 + q^2)`.
pub fn mc_coefficient() -> QScalar {
    QScalar::q_pow(2) * (QScalar::one() + QScalar::q_pow(2))
}

/// Knobs for negative controls.
#[derive(Clone, Debug)]
pub struct SphereOptions {
    pub mc_coefficient: QScalar,
    pub drop_determinant: bool,
}

impl Default for SphereOptions {
    fn default() -> Self {
        SphereOptions { mc_coefficient: mc_coefficient(), drop_determinant: false }
    }
}

/// Generators, harmonic rules, theta passage and theta exchange.
pub fn sphere_builder(name: &str) -> Result<SystemBuilder> {
    let mut b = SystemBuilder::new(name);
    for t in THETAS {
        b.gen(t, 1, 0);
    }
    // off-diagonal harmonics sort first; the diagonal ones carry secondary
    // weight so the determinant words sort above u(1,-) u(2,+)
    b.gen(u(1, -1), 1, 0).gen(u(2, 1), 1, 0).gen(u(1, 1), 1, 1).gen(u(2, -1), 1, 1);
    b.relations(&harmonic_relations())?;
    theta_rules(&mut b)?;
    Ok(b)
}

/// `u_{+-} t(0) = q^{+-2} t(0) u_{+-}`, `u_{+-} t(p) = q^{+-1} t(p) u_{+-}`,
/// `t(p)^2 = 0`, `t(+2) t(-2) = -q^2 t(-2) t(+2)`, `t(+-2) t(0) = -q^{+-4} t(0) t(+-2)`.
pub fn theta_rules(b: &mut SystemBuilder) -> Result<()> {
    for g in harmonics() {
        let a = g.idx[1] as i32;
        b.rule(g, T0, NCPoly::word(&[T0, g]).scale(&QScalar::q_pow(2 * a)))?;
        for t in [TM, TP] {
            b.rule(g, t, NCPoly::word(&[t, g]).scale(&QScalar::q_pow(a)))?;
        }
    }
    for t in THETAS {
        b.rule(t, t, NCPoly::zero())?;
    }
    b.rule(TP, TM, NCPoly::word(&[TM, TP]).scale(&-QScalar::q_pow(2)))?;
    b.rule(TP, T0, NCPoly::word(&[T0, TP]).scale(&-QScalar::q_pow(4)))?;
    b.rule(TM, T0, NCPoly::word(&[T0, TM]).scale(&-QScalar::q_pow(-4)))?;
    Ok(())
}

/// `theta^a_b` in terms of the three independent forms (`theta^-_- = -q^2 t(0)`).
pub fn theta_matrix(a: i8, b: i8) -> NCPoly {
    match (a, b) {
        (1, 1) => NCPoly::gen(T0),
        (-1, 1) => NCPoly::gen(TP),
        (1, -1) => NCPoly::gen(TM),
        _ => NCPoly::gen(T0).scale(&-QScalar::q_pow(2)),
    }
}

/// `d_u u^i_b = u^i_a theta^a_b` and the Maurer-Cartan images of the forms.
pub fn harmonic_derivative(k: &QScalar) -> GradedDerivation {
    let mut d = GradedDerivation::new("d_u", 1);
    for i in SPINOR {
        for b in CHARGES {
            let img: NCPoly = CHARGES.iter().map(|&a| theta_matrix(a, b).lmul_word(&[u(i, a)])).sum();
            d.set(u(i, b), img);
        }
    }
    d.set(T0, -NCPoly::word(&[TM, TP]));
    d.set(TP, NCPoly::word(&[T0, TP]).scale(k));
    d.set(TM, NCPoly::word(&[TM, T0]).scale(k));
    d
}

/// The three D-operators, named by the form that carries them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum DOp {
    /// `D0`, along `t(0)`.
    Zero,
    /// `D(+2)`, along `t(-2)`.
    Plus,
    /// `D(-2)`, along `t(+2)`.
    Minus,
}

pub const DOPS: [DOp; 3] = [DOp::Zero, DOp::Plus, DOp::Minus];

impl DOp {
    pub fn theta(self) -> Gen {
        match self {
            DOp::Zero => T0,
            DOp::Plus => TM,
            DOp::Minus => TP,
        }
    }

    pub fn pick(self, parts: ThetaParts) -> NCPoly {
        match self {
            DOp::Zero => parts.zero,
            DOp::Plus => parts.plus,
            DOp::Minus => parts.minus,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            DOp::Zero => "delta0",
            DOp::Plus => "delta",
            DOp::Minus => "deltabar",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Sphere {
    pub sys: RewriteSystem,
    pub d: GradedDerivation,
    pub s0: Option<Rational>,
    /// Action of each `delta` on the forms themselves.
    theta_split: BTreeMap<DOp, GradedDerivation>,
}

/// Builds the sphere and verifies confluence.
pub fn build_sphere() -> Result<Sphere> {
    build_sphere_with(&SphereOptions::default())
}

pub fn build_sphere_with(opts: &SphereOptions) -> Result<Sphere> {
    let mut b = sphere_builder("sphere")?;
    if opts.drop_determinant {
        // keep only the homogeneous part of the determinant rule
        let rhs = b.rule_rhs(u(1, 1), u(2, -1)).cloned().unwrap_or_default();
        b.override_rule(u(1, 1), u(2, -1), rhs.filter(|w| !w.is_empty()));
    }
    let sys = b.build();
    let report = sys.check_local_confluence(3)?;
    if !report.is_confluent() && !opts.drop_determinant {
        return Err(Error::NotConfluent(report.describe()));
    }
    let d = harmonic_derivative(&opts.mc_coefficient);
    Ok(Sphere::assemble(sys, d, None))
}

impl Sphere {
    fn assemble(sys: RewriteSystem, d: GradedDerivation, s0: Option<Rational>) -> Sphere {
        // delta0 carries all of d t(+-2); delta and deltabar share d t(0)
        let half = QScalar::frac(1, 2);
        let img = |t: Gen, c: &QScalar| d.image(t).expect("form image").scale(c);
        let mut theta_split = BTreeMap::new();
        for op in DOPS {
            let mut g = GradedDerivation::new(op.name(), 1);
            for t in THETAS {
                let v = match (op, t == T0) {
                    (DOp::Zero, true) | (DOp::Plus | DOp::Minus, false) => NCPoly::zero(),
                    (DOp::Zero, false) => img(t, &QScalar::one()),
                    (_, true) => img(t, &half),
                };
                g.set(t, v);
            }
            theta_split.insert(op, g);
        }
        Sphere { sys, d, s0, theta_split }
    }

    /// The sphere operators over a larger algebra in which `constants` are
    /// inert under `d_u` and every `delta`.
    pub fn embedded(sys: RewriteSystem, d: GradedDerivation, s0: Option<Rational>, constants: &[Gen]) -> Sphere {
        let mut sph = Sphere::assemble(sys, d, s0);
        for split in sph.theta_split.values_mut() {
            for &g in constants {
                split.set(g, NCPoly::zero());
            }
        }
        sph
    }

    pub fn specialize(&self, s0: &Rational) -> Result<Sphere> {
        let mut sph = Sphere::assemble(self.sys.specialize(s0)?, self.d.specialize(s0)?, Some(s0.clone()));
        for (op, split) in &self.theta_split {
            let target = sph.theta_split.get_mut(op).expect("same operators");
            for g in split.defined_on() {
                if !THETAS.contains(&g) {
                    target.set(g, NCPoly::zero());
                }
            }
        }
        Ok(sph)
    }

    /// A scalar in this sphere's coefficient field.
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

    pub fn du(&self, p: &NCPoly) -> Result<NCPoly> {
        self.d.apply(&self.sys, p)
    }

    /// `(D0 p, D(+2) p, D(-2) p)` read off from `d_u p`.
    pub fn d_operators(&self, p: &NCPoly) -> Result<ThetaParts> {
        theta_project(&self.sys, &self.d.expand(p)?)
    }

    pub fn d_op(&self, op: DOp, p: &NCPoly) -> Result<NCPoly> {
        Ok(op.pick(self.d_operators(p)?))
    }

    /// Apply a sequence of D-operators, rightmost first.
    pub fn d_chain(&self, ops: &[DOp], p: &NCPoly) -> Result<NCPoly> {
        let mut acc = p.clone();
        for &op in ops.iter().rev() {
            acc = self.d_op(op, &acc)?;
        }
        Ok(acc)
    }

    /// `ubar^a_i = eps_{ik} u^k_b eps^{ba}`.
    pub fn ubar(&self, a: i8, i: u8) -> NCPoly {
        let mut p = NCPoly::zero();
        for k in SPINOR {
            for b in CHARGES {
                let c = epsilon(true, i, k) * epsilon(false, charge_index(b), charge_index(a));
                p.add_scaled(&NCPoly::gen(u(k, b)), &self.k(c));
            }
        }
        p
    }

    /// `delta_X` on a form `Theta f`: `delta_X(Theta) f + (-1)^{|Theta|} Theta t_X D_X f`.
    pub fn delta(&self, op: DOp, p: &NCPoly) -> Result<NCPoly> {
        self.delta_with(&self.theta_split[&op], op, p)
    }

    /// The even split in which every form's derivative is shared equally by
    /// the two operators other than its own carrier, e.g.
    /// `2 delta0 t(+2) = 2 deltabar t(+2) = d t(+2)`.
    pub fn half_split(&self, op: DOp) -> GradedDerivation {
        let half = QScalar::frac(1, 2);
        let mut g = GradedDerivation::new(op.name(), 1);
        for t in THETAS {
            let killed = match t {
                TP => DOp::Plus,
                TM => DOp::Minus,
                _ => DOp::Zero,
            };
            let img = if op == killed { NCPoly::zero() } else { self.d.image(t).expect("form image").scale(&half) };
            g.set(t, img);
        }
        g
    }

    pub fn delta_with(&self, split: &GradedDerivation, op: DOp, p: &NCPoly) -> Result<NCPoly> {
        let nf = self.nf(p)?;
        let mut out = NCPoly::zero();
        for (w, c) in nf.terms() {
            let cut = w.iter().take_while(|g| g.grade() == 1).count();
            let (theta, f): (&[Gen], &[Gen]) = (&w[..cut], &w[cut..]);
            if f.iter().any(|g| g.grade() == 1) {
                return Err(Error::NotThetaSpan(nf.to_string()));
            }
            let fpoly = NCPoly::word(f);
            let head = split.expand(&NCPoly::word(theta))?.rmul_word(f);
            out.add_scaled(&head, c);
            let df = self.d_op(op, &fpoly)?;
            let sign = if theta.len() % 2 == 1 { -1 } else { 1 };
            let mut tw: Word = theta.iter().copied().collect();
            tw.push(op.theta());
            out.add_scaled(&df.lmul_word(&tw), &(c * &QScalar::int(sign)));
        }
        self.nf(&out)
    }

    /// `q^2 (1 - q^{2p}) / (1 - q^2)`: the `D0` eigenvalue on charge `p`.
    pub fn d0_eigenvalue(&self, p: i32) -> QScalar {
        let q2 = QScalar::q_pow(2);
        let v = (q2.clone() * (QScalar::one() - QScalar::q_pow(2 * p)))
            .checked_div(&(QScalar::one() - q2))
            .expect("1 - q^2 is nonzero");
        self.k(v)
    }
}

/// All words of length `1..=maxlen` over `gens`.
pub fn words_up_to(gens: &[Gen], maxlen: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let mut layer: Vec<Word> = vec![Word::new()];
    for _ in 0..maxlen {
        let mut next = Vec::new();
        for w in &layer {
            for &g in gens {
                let mut v = w.clone();
                v.push(g);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Harmonic monomials of degree `1..=maxdeg`, deduplicated to their normal words.
pub fn monomial_basis(sph: &Sphere, maxdeg: usize) -> Result<Vec<Word>> {
    let mut set = std::collections::BTreeSet::new();
    for w in words_up_to(&harmonics(), maxdeg) {
        for (v, _) in sph.nf(&NCPoly::word(&w))?.terms() {
            if !v.is_empty() {
                set.insert(v.clone());
            }
        }
    }
    Ok(set.into_iter().collect())
}

/// An irreducible harmonic polynomial: components indexed by the `r + s`
/// spinor indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HarmonicPolynomial {
    pub r: usize,
    pub s: usize,
    pub components: BTreeMap<Vec<u8>, NCPoly>,
}

impl HarmonicPolynomial {
    pub fn get(&self, idx: &[u8]) -> NCPoly {
        self.components.get(idx).cloned().unwrap_or_default()
    }

    /// Residual of `P+_{k,k+1} Phi - Phi`, or `None` when symmetric.
    pub fn projector_residual(&self, sph: &Sphere, k: usize) -> Result<Option<String>> {
        let pp = projector(Sign::Plus);
        for (idx, comp) in &self.components {
            let mut acc = -comp;
            for l in SPINOR {
                for m in SPINOR {
                    let c = sph.k(pp.get(&[idx[k], idx[k + 1], l, m]));
                    if c.is_zero() {
                        continue;
                    }
                    let mut j = idx.clone();
                    j[k] = l;
                    j[k + 1] = m;
                    acc.add_scaled(&self.get(&j), &c);
                }
            }
            let acc = sph.nf(&acc)?;
            if !acc.is_zero() {
                return Ok(Some(format!("{idx:?}: {acc}")));
            }
        }
        Ok(None)
    }

    pub fn charges_ok(&self) -> bool {
        let p = self.r as i32 - self.s as i32;
        self.components.values().all(|c| c.terms().all(|(w, _)| word_charge(w) == p))
    }
}

fn index_tuples(n: usize) -> Vec<Vec<u8>> {
    crate::qtensor::all_indices(n)
}

/// `u^{i1}_a1 ... u^{in}_an` in normal form.
pub fn harmonic_product(sph: &Sphere, idx: &[u8], charges: &[i8]) -> Result<NCPoly> {
    let w: Word = idx.iter().zip(charges).map(|(&i, &a)| u(i, a)).collect();
    sph.nf(&NCPoly::word(&w))
}

/// `Phi^{(r,s)}`: the q-symmetrized product of `r` harmonics `u_+` and `s`
/// harmonics `u_-`, obtained as `D(-2)^s` of `(u_+)^{r+s}` and normalized so
/// that the all-ones component is `(u^1_+)^r (u^1_-)^s`.
pub fn build_phi(sph: &Sphere, r: usize, s: usize) -> Result<HarmonicPolynomial> {
    let n = r + s;
    if n == 0 {
        return Err(Error::Config("build_phi needs r + s >= 1".into()));
    }
    let plus = vec![1i8; n];
    let mut components = BTreeMap::new();
    for idx in index_tuples(n) {
        let mut p = harmonic_product(sph, &idx, &plus)?;
        for _ in 0..s {
            p = sph.d_op(DOp::Minus, &p)?;
        }
        components.insert(idx, p);
    }
    let ones = vec![1u8; n];
    let charges: Vec<i8> = (0..n).map(|k| if k < r { 1 } else { -1 }).collect();
    let target = harmonic_product(sph, &ones, &charges)?;
    let (tw, tc) = target.terms().next().map(|(w, c)| (w.clone(), c.clone())).expect("nonzero monomial");
    let have = components[&ones].coeff(&tw);
    let norm = tc.checked_div(&have)?;
    for v in components.values_mut() {
        *v = v.scale(&norm);
    }
    Ok(HarmonicPolynomial { r, s, components })
}

/// The naive ordered product `u_+ ... u_+ u_- ... u_-` without symmetrization.
pub fn naive_phi(sph: &Sphere, r: usize, s: usize) -> Result<HarmonicPolynomial> {
    let charges: Vec<i8> = (0..r + s).map(|k| if k < r { 1 } else { -1 }).collect();
    let mut components = BTreeMap::new();
    for idx in index_tuples(r + s) {
        components.insert(idx.clone(), harmonic_product(sph, &idx, &charges)?);
    }
    Ok(HarmonicPolynomial { r, s, components })
}

pub fn charge_of_index(i: u8) -> i8 {
    index_charge(i)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sph() -> Sphere {
        build_sphere().unwrap()
    }

    #[test]
    fn seven_harmonic_rules() {
        let b = sphere_builder("s").unwrap();
        let (a, bb, c, d) = (u(1, 1), u(1, -1), u(2, 1), u(2, -1));
        for (x, y) in [(a, bb), (a, c), (c, bb), (d, bb), (d, c), (d, a), (a, d)] {
            assert!(b.has_rule(x, y), "missing rule {x} {y}");
        }
        assert_eq!(b.rule_rhs(a, c).unwrap(), &NCPoly::word(&[c, a]).scale(&QScalar::q()));
    }

    #[test]
    fn normal_form_examples() {
        let s = sph();
        let p = NCPoly::word(&[u(2, 1), u(1, 1)]) - NCPoly::word(&[u(1, 1), u(2, 1)]).scale(&QScalar::q_pow(-1));
        assert!(s.nf(&p).unwrap().is_zero());
        let t = NCPoly::word(&[TP, TM]) + NCPoly::word(&[TM, TP]).scale(&QScalar::q_pow(2));
        assert!(s.nf(&t).unwrap().is_zero());
    }

    #[test]
    fn d_operators_on_u_plus() {
        let s = sph();
        let parts = s.d_operators(&NCPoly::gen(u(1, 1))).unwrap();
        assert_eq!(parts.zero, NCPoly::gen(u(1, 1)).scale(&QScalar::q_pow(2)));
        assert!(parts.plus.is_zero());
        assert_eq!(parts.minus, NCPoly::gen(u(1, -1)).scale(&QScalar::q_pow(-1)));
    }

    #[test]
    fn ubar_inverts_u() {
        let s = sph();
        for a in CHARGES {
            for b in CHARGES {
                let p: NCPoly = SPINOR.iter().map(|&i| &s.ubar(a, i) * &NCPoly::gen(u(i, b))).sum();
                let expect = if a == b { NCPoly::one() } else { NCPoly::zero() };
                assert_eq!(s.nf(&p).unwrap(), expect);
            }
        }
    }

    #[test]
    fn phi_one_zero() {
        let s = sph();
        let phi = build_phi(&s, 1, 0).unwrap();
        assert_eq!(phi.get(&[1]), NCPoly::gen(u(1, 1)));
        assert_eq!(phi.get(&[2]), NCPoly::gen(u(2, 1)));
    }

    #[test]
    fn determinant_drop_breaks_confluence() {
        let opts = SphereOptions { drop_determinant: true, ..Default::default() };
        let s = build_sphere_with(&opts).unwrap();
        assert!(!s.sys.check_local_confluence(3).unwrap().is_confluent());
    }
}
