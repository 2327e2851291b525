//! U_q(2) gauge fields on E_q(4): connection and curvature forms, the
//! projector split of 2-forms, duality checks and the deformed instanton.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::espace::{
    dx, euclid_derivation, euclid_rules, quad, register_dx, register_tau, register_x, x, PBW_ORDER, TAU, TAU_INV,
};
use crate::ncalg::gen::{Class, Gen, Word, SPINOR};
use crate::ncalg::{GradedDerivation, NCPoly, RewriteSystem, SystemBuilder};
use crate::qscalar::{QScalar, Rational};
use crate::qtensor::{epsilon, metric, projector, r_matrix, Sign};
use crate::report::{check, explore, CheckResult};

/// Highest level of the inverse tower `g_n = (c + q^{2n} tau)^-1`.
pub const TOWER: i8 = 4;

pub const C: Gen = Gen::c();

pub fn g(n: i8) -> Gen {
    Gen::g(n)
}

pub fn register_gauge(b: &mut SystemBuilder, tower: i8) {
    b.gen(C, 1, 0);
    for n in 0..=tower {
        b.gen(g(n), 1, 0);
    }
}

/// `c` is central; `g_n` commutes with `commuting` and with `c`, and
/// `g_n dx = dx g_{n+1}`. Partial fractions between tower levels are not
/// rewritten; see [`tower_numerator`].
pub fn gauge_rules(b: &mut SystemBuilder, tower: i8, commuting: &[Gen]) -> Result<()> {
    for &h in commuting {
        b.rule(C, h, NCPoly::word(&[h, C]))?;
    }
    for (i, a) in PBW_ORDER {
        b.rule(C, dx(i, a), NCPoly::word(&[dx(i, a), C]))?;
    }
    for n in 0..=tower {
        for &h in commuting {
            b.rule(g(n), h, NCPoly::word(&[h, g(n)]))?;
        }
        b.rule(g(n), C, NCPoly::word(&[C, g(n)]))?;
        for m in 0..n {
            b.rule(g(n), g(m), NCPoly::word(&[g(m), g(n)]))?;
        }
        if n < tower {
            for (i, a) in PBW_ORDER {
                b.rule(g(n), dx(i, a), NCPoly::word(&[dx(i, a), g(n + 1)]))?;
            }
        }
    }
    Ok(())
}

/// `d c = 0`, `d g_n = -q^{2n} d tau g_{n+1} g_n`.
pub fn extend_derivation(d: &mut GradedDerivation, tower: i8) {
    let dtau = d.image(TAU).cloned().expect("tau image set");
    d.set(C, NCPoly::zero());
    for n in 0..tower {
        let img = (&dtau * &NCPoly::word(&[g(n + 1), g(n)])).scale(&-QScalar::q_pow(2 * n as i32));
        d.set(g(n), img);
    }
}

#[derive(Clone, Debug)]
pub struct GaugeAlgebra {
    pub sys: RewriteSystem,
    pub d: GradedDerivation,
    pub s0: Option<Rational>,
    pub tower: i8,
}

pub fn build_gauge_algebra() -> Result<GaugeAlgebra> {
    let mut b = SystemBuilder::new("gauge");
    register_dx(&mut b);
    register_x(&mut b);
    register_tau(&mut b);
    register_gauge(&mut b, TOWER);
    euclid_rules(&mut b)?;
    let mut commuting: Vec<Gen> = PBW_ORDER.iter().map(|&(i, a)| x(i, a)).collect();
    commuting.extend([TAU_INV, TAU]);
    gauge_rules(&mut b, TOWER, &commuting)?;
    let mut d = euclid_derivation();
    extend_derivation(&mut d, TOWER);
    Ok(GaugeAlgebra { sys: b.build(), d, s0: None, tower: TOWER })
}

impl GaugeAlgebra {
    pub fn specialize(&self, s0: &Rational) -> Result<GaugeAlgebra> {
        Ok(GaugeAlgebra {
            sys: self.sys.specialize(s0)?,
            d: self.d.specialize(s0)?,
            s0: Some(s0.clone()),
            tower: self.tower,
        })
    }

    pub fn k(&self, c: QScalar) -> QScalar {
        match &self.s0 {
            Some(s0) => c.specialize(s0).expect("no pole at the specialization point"),
            None => c,
        }
    }

    pub fn nf(&self, p: &NCPoly) -> Result<NCPoly> {
        self.sys.normal_form(p)
    }

    pub fn dx_of(&self, p: &NCPoly) -> Result<NCPoly> {
        self.d.apply(&self.sys, p)
    }

    /// Overlaps whose reductions stay below the top of the tower, i.e.
    /// with every level `n <= tower - 2`.
    pub fn confluence_below_top(&self) -> Result<Option<String>> {
        let rep = self.sys.check_local_confluence(3)?;
        let near_top = |h: &Gen| h.class == Class::G && h.idx[0] > self.tower - 2;
        let bad: Vec<_> = rep.unresolved.iter().filter(|c| !c.word.iter().any(near_top)).collect();
        Ok(bad.first().map(|c| format!("{}: {}", crate::ncalg::gen::word_text(&c.word), c.difference)))
    }
}

/// Form-valued 2x2 matrix over gauge indices.
#[derive(Clone, Debug, PartialEq)]
pub struct GaugeForm {
    pub degree: u8,
    pub entries: BTreeMap<(u8, u8), NCPoly>,
}

impl GaugeForm {
    pub fn zero(degree: u8) -> Self {
        let entries = SPINOR.iter().flat_map(|&a| SPINOR.iter().map(move |&b| ((a, b), NCPoly::zero()))).collect();
        GaugeForm { degree, entries }
    }

    pub fn get(&self, a: u8, b: u8) -> &NCPoly {
        &self.entries[&(a, b)]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.values().all(NCPoly::is_zero)
    }

    pub fn nonzero_entries(&self) -> usize {
        self.entries.values().filter(|p| !p.is_zero()).count()
    }
}

/// `A^a_b = dx^a_alpha eps_{bk} x^k_beta eps^{beta alpha} g_0`.
pub fn build_instanton(ga: &GaugeAlgebra) -> Result<GaugeForm> {
    if ga.tower < 2 {
        return Err(Error::TowerExhausted(ga.tower as i32));
    }
    let mut out = GaugeForm::zero(1);
    for a in SPINOR {
        for b in SPINOR {
            let mut p = NCPoly::zero();
            for al in SPINOR {
                for k in SPINOR {
                    for be in SPINOR {
                        let c = epsilon(true, b, k) * epsilon(false, be, al);
                        if !c.is_zero() {
                            p.add_scaled(&NCPoly::word(&[dx(a, al), x(k, be), g(0)]), &ga.k(c));
                        }
                    }
                }
            }
            out.entries.insert((a, b), ga.nf(&p)?);
        }
    }
    Ok(out)
}

/// The pure gauge `omega^i_k = dx^i_a S^a_k`, with `S = eps x eps tau^-1`.
pub fn pure_gauge(ga: &GaugeAlgebra) -> Result<GaugeForm> {
    let mut out = GaugeForm::zero(1);
    for i in SPINOR {
        for k in SPINOR {
            let mut p = NCPoly::zero();
            for a in SPINOR {
                for l in SPINOR {
                    for b in SPINOR {
                        let c = epsilon(true, k, l) * epsilon(false, b, a);
                        if !c.is_zero() {
                            p.add_scaled(&NCPoly::word(&[dx(i, a), x(l, b), TAU_INV]), &ga.k(c));
                        }
                    }
                }
            }
            out.entries.insert((i, k), ga.nf(&p)?);
        }
    }
    Ok(out)
}

/// `F = d A - A A`.
pub fn curvature(ga: &GaugeAlgebra, a: &GaugeForm) -> Result<GaugeForm> {
    let keys: Vec<(u8, u8)> = a.entries.keys().copied().collect();
    let entries: Result<BTreeMap<(u8, u8), NCPoly>> = keys
        .par_iter()
        .map(|&(i, k)| {
            let mut p = ga.d.expand(a.get(i, k))?;
            for j in SPINOR {
                p = p - a.get(i, j) * a.get(j, k);
            }
            Ok(((i, k), ga.nf(&p)?))
        })
        .collect();
    Ok(GaugeForm { degree: a.degree + 1, entries: entries? })
}

pub type TwoFormComponents = BTreeMap<(u8, u8, u8, u8), NCPoly>;

/// Coefficients `F^{ba}_{ki}` of `dx^i_a dx^k_b` with the 2-form in its
/// normal form, keyed by `(i, k, a, b)`.
pub fn two_form_components(p: &NCPoly) -> Result<TwoFormComponents> {
    let mut out = TwoFormComponents::new();
    for (w, c) in p.terms() {
        let ok = w.len() >= 2
            && w[0].class == Class::Dx
            && w[1].class == Class::Dx
            && w[2..].iter().all(|h| h.class != Class::Dx);
        if !ok {
            return Err(Error::FormResidue(crate::ncalg::gen::word_text(w)));
        }
        let key = (w[0].idx[0] as u8, w[1].idx[0] as u8, w[0].idx[1] as u8, w[1].idx[1] as u8);
        out.entry(key).or_insert_with(NCPoly::zero).add_term(w[2..].iter().copied().collect(), c.clone());
    }
    out.retain(|_, v| !v.is_zero());
    Ok(out)
}

/// Applies `P_latin dx dx' P_greek` to the leading `dx` pair of every term.
pub fn project(ga: &GaugeAlgebra, p: &NCPoly, latin: Sign, greek: Sign) -> Result<NCPoly> {
    let pl = projector(latin);
    let pg = projector(greek);
    let comps = two_form_components(p)?;
    let mut out = NCPoly::zero();
    for ((i, k, a, b), coeff) in comps {
        for l in SPINOR {
            for m in SPINOR {
                let cl = pl.get(&[i, k, l, m]);
                if cl.is_zero() {
                    continue;
                }
                for ga_ in SPINOR {
                    for r in SPINOR {
                        let cg = pg.get(&[ga_, r, a, b]);
                        if !cg.is_zero() {
                            let w = NCPoly::word(&[dx(l, ga_), dx(m, r)]);
                            out.add_scaled(&(&w * &coeff), &ga.k(&cl * &cg));
                        }
                    }
                }
            }
        }
    }
    ga.nf(&out)
}

/// Numerator of `p` after clearing the tower denominators `c + q^{2n} tau`
/// in each group of terms sharing the same `dx`/`x` prefix. Zero exactly
/// when `p` vanishes as a function of `c` and `tau`.
pub fn tower_numerator(ga: &GaugeAlgebra, p: &NCPoly) -> NCPoly {
    type Comm = BTreeMap<(i32, u32), QScalar>;
    fn mul(a: &Comm, b: &Comm) -> Comm {
        let mut out = Comm::new();
        for ((t1, c1), v1) in a {
            for ((t2, c2), v2) in b {
                let e = out.entry((t1 + t2, c1 + c2)).or_insert_with(QScalar::zero);
                *e = &*e + &(v1 * v2);
            }
        }
        out.retain(|_, v| !v.is_zero());
        out
    }
    let split = |w: &Word| {
        let cut = w.iter().position(|h| matches!(h.class, Class::Tau | Class::TauInv | Class::C | Class::G)).unwrap_or(w.len());
        let (mut t, mut c, mut gs) = (0i32, 0u32, BTreeMap::<i8, u32>::new());
        for h in &w[cut..] {
            match h.class {
                Class::Tau => t += 1,
                Class::TauInv => t -= 1,
                Class::C => c += 1,
                _ => *gs.entry(h.idx[0]).or_default() += 1,
            }
        }
        (w[..cut].to_vec(), t, c, gs)
    };
    type Exponents = (i32, u32, BTreeMap<i8, u32>, QScalar);
    let mut groups: BTreeMap<Vec<Gen>, Vec<Exponents>> = BTreeMap::new();
    for (w, v) in p.terms() {
        let (pre, t, c, gs) = split(w);
        groups.entry(pre).or_default().push((t, c, gs, v.clone()));
    }
    let mut out = NCPoly::zero();
    for (pre, terms) in groups {
        let mut top: BTreeMap<i8, u32> = BTreeMap::new();
        for (_, _, gs, _) in &terms {
            for (&n, &e) in gs {
                let cur = top.entry(n).or_default();
                *cur = (*cur).max(e);
            }
        }
        let mut num = Comm::new();
        for (t, c, gs, v) in terms {
            let mut term = Comm::from([((t, c), v)]);
            for (&n, &e) in &top {
                let lin = Comm::from([((0, 1), QScalar::one()), ((1, 0), ga.k(QScalar::q_pow(2 * n as i32)))]);
                for _ in 0..(e - gs.get(&n).copied().unwrap_or(0)) {
                    term = mul(&term, &lin);
                }
            }
            for (key, val) in term {
                let e = num.entry(key).or_insert_with(QScalar::zero);
                *e = &*e + &val;
            }
        }
        for ((t, c), v) in num {
            if v.is_zero() {
                continue;
            }
            let mut w = pre.clone();
            let tg = if t >= 0 { TAU } else { TAU_INV };
            w.extend(std::iter::repeat_n(tg, t.unsigned_abs() as usize));
            w.extend(std::iter::repeat_n(C, c as usize));
            out.add_term(w.into_iter().collect(), v);
        }
    }
    out
}

fn tower_residual(ga: &GaugeAlgebra, p: &NCPoly) -> Option<String> {
    let n = tower_numerator(ga, p);
    if n.is_zero() {
        None
    } else {
        Some(n.to_string())
    }
}

fn form_residual(ga: &GaugeAlgebra, f: &GaugeForm) -> Option<String> {
    f.entries.iter().find_map(|((a, b), p)| tower_residual(ga, p).map(|r| format!("({a},{b}): {r}")))
}

/// The two mixed channels of a 2-form, `P- dx dx' P+` and `P+ dx dx' P-`.
pub fn channels(ga: &GaugeAlgebra, f: &GaugeForm) -> Result<(GaugeForm, GaugeForm)> {
    let mut latin_single = GaugeForm::zero(2);
    let mut greek_single = GaugeForm::zero(2);
    for (&k, p) in &f.entries {
        latin_single.entries.insert(k, project(ga, p, Sign::Minus, Sign::Plus)?);
        greek_single.entries.insert(k, project(ga, p, Sign::Plus, Sign::Minus)?);
    }
    Ok((latin_single, greek_single))
}

/// Duality checks for a curvature 2-form:
/// `bracket`: `F` lies in a single mixed channel, `F = [P+ F P-]`, so its
/// `P+` projection on the Greek spinor pair vanishes;
/// `latin`: `F^{ba}_{ki} = eps_{ki} F^{ba}`, i.e. the `P+` projection on the
/// Latin pair vanishes.
pub fn check_anti_self_dual(ga: &GaugeAlgebra, prefix: &str, f: &GaugeForm) -> Vec<CheckResult> {
    let ch = channels(ga, f);
    let ch2 = ch.clone();
    let ch3 = ch.clone();
    vec![
        check(&format!("{prefix}.asd"), "F = [P+ F P-]: P+ on the Greek pair of F^{ba}_{ki} vanishes", move || {
            let (latin_single, _) = ch?;
            Ok(form_residual(ga, &latin_single))
        }),
        explore(&format!("{prefix}.asd-latin"), "F^{ba}_{ki} = eps_{ki} F^{ba}: P+ on the Latin pair vanishes", move || {
            let (_, greek_single) = ch2?;
            Ok(form_residual(ga, &greek_single))
        }),
        check(&format!("{prefix}.channel-split"), "P- F P+ + P+ F P- = F", move || {
            let (a, b) = ch3?;
            let mut bad = None;
            for (&k, p) in &f.entries {
                let r = ga.nf(&(a.entries[&k].clone() + b.entries[&k].clone() - p.clone()))?;
                if !r.is_zero() {
                    bad = Some(r.to_string());
                    break;
                }
            }
            Ok(bad)
        }),
    ]
}

/// `Tr_q M = D^b_a M^a_b`.
pub fn q_trace(ga: &GaugeAlgebra, f: &GaugeForm) -> Result<NCPoly> {
    let m = metric();
    let mut p = NCPoly::zero();
    for a in SPINOR {
        for b in SPINOR {
            let c = m.get(&[b, a]);
            if !c.is_zero() {
                p.add_scaled(f.get(a, b), &ga.k(c));
            }
        }
    }
    ga.nf(&p)
}

pub fn check_traces(ga: &GaugeAlgebra, a: &GaugeForm, f: &GaugeForm) -> Vec<CheckResult> {
    vec![
        check("instanton.trace-F", "Tr_q F = 0", || Ok(tower_residual(ga, &q_trace(ga, f)?))),
        check("instanton.trace-dA", "d Tr_q A = 0", || Ok(tower_residual(ga, &ga.dx_of(&q_trace(ga, a)?)?))),
    ]
}

/// `A_1 R A_1 + R A_1 R A_1 R` with `A_1 = A (x) 1`, as 4x4 matrices.
pub fn ara_residual(ga: &GaugeAlgebra, a: &GaugeForm) -> Result<Vec<NCPoly>> {
    let idx: Vec<(u8, u8)> = SPINOR.iter().flat_map(|&i| SPINOR.iter().map(move |&k| (i, k))).collect();
    let n = idx.len();
    let rm: Vec<Vec<NCPoly>> = idx
        .iter()
        .map(|&(i, k)| idx.iter().map(|&(l, m)| NCPoly::scalar(ga.k(r_matrix(i, k, l, m)))).collect())
        .collect();
    let am: Vec<Vec<NCPoly>> = idx
        .iter()
        .map(|&(i, k)| {
            idx.iter().map(|&(l, m)| if k == m { a.get(i, l).clone() } else { NCPoly::zero() }).collect()
        })
        .collect();
    let mm = |x: &Vec<Vec<NCPoly>>, y: &Vec<Vec<NCPoly>>| -> Vec<Vec<NCPoly>> {
        (0..n)
            .map(|r| (0..n).map(|c| (0..n).map(|j| &x[r][j] * &y[j][c]).sum()).collect())
            .collect()
    };
    let ara = mm(&mm(&am, &rm), &am);
    let rarar = mm(&mm(&mm(&mm(&rm, &am), &rm), &am), &rm);
    let mut out = Vec::new();
    for r in 0..n {
        for c in 0..n {
            out.push(ga.nf(&(ara[r][c].clone() + rarar[r][c].clone()))?);
        }
    }
    Ok(out)
}

/// Highest tower index occurring in `f`.
pub fn max_tower_index(f: &GaugeForm) -> i8 {
    f.entries
        .values()
        .flat_map(|p| p.generators().filter(|h| h.class == Class::G).map(|h| h.idx[0]).collect::<Vec<_>>())
        .max()
        .unwrap_or(0)
}

/// Canonical text of every nonzero component of `F`.
pub fn dump_components(f: &GaugeForm) -> Result<String> {
    let mut out = String::new();
    for ((a, b), p) in &f.entries {
        for ((i, k, al, be), c) in two_form_components(p)? {
            out.push_str(&format!("F[{a},{b}] dx({i},{al}) dx({k},{be}): {c}\n"));
        }
    }
    Ok(out)
}

/// A 2-form purely in the Latin-singlet channel, used as a negative control.
pub fn self_dual_probe(ga: &GaugeAlgebra) -> Result<GaugeForm> {
    let w = NCPoly::word(&[dx(1, 1), dx(2, 2), g(0)]);
    let mut f = GaugeForm::zero(2);
    f.entries.insert((1, 1), project(ga, &ga.nf(&w)?, Sign::Minus, Sign::Plus)?);
    Ok(f)
}

pub fn verify_gauge_suite(ga: &GaugeAlgebra) -> Vec<CheckResult> {
    vec![
        check("gauge.confluence", "overlaps with tower levels n <= top - 2 resolve", || ga.confluence_below_top()),
        check("gauge.d-respects-rules", "d_x(lhs - rhs) = 0 up to partial fractions, rules below the tower top", || {
            let bad = ga.d.compatibility_avoiding(&ga.sys, &[g(ga.tower)])?;
            Ok(bad.iter().find(|(_, r)| !tower_numerator(ga, r).is_zero()).map(|(w, r)| format!("{w}: {r}")))
        }),
        check("gauge.curvature-zero", "curvature(0) = 0", || {
            Ok(if curvature(ga, &GaugeForm::zero(1))?.is_zero() { None } else { Some("nonzero".into()) })
        }),
        check("gauge.pure-gauge-flat", "F(omega) = d omega - omega^2 = 0", || {
            Ok(form_residual(ga, &curvature(ga, &pure_gauge(ga)?)?))
        }),
        check("gauge.decomposition", "P- dx dx' P+ + P+ dx dx' P- = dx dx' on all 16 pairs", || {
            for (i, k, a, b) in quad() {
                let w = ga.nf(&NCPoly::word(&[dx(i, a), dx(k, b)]))?;
                let r = ga.nf(&(project(ga, &w, Sign::Minus, Sign::Plus)? + project(ga, &w, Sign::Plus, Sign::Minus)? - w))?;
                if !r.is_zero() {
                    return Ok(Some(format!("({i},{k},{a},{b}): {r}")));
                }
            }
            Ok(None)
        }),
        check("gauge.components-leibniz", "components of d(x dx') match dx dx'", || {
            let p = ga.dx_of(&NCPoly::word(&[x(1, 1), dx(2, 2)]))?;
            let q = ga.nf(&NCPoly::word(&[dx(1, 1), dx(2, 2)]))?;
            Ok(if two_form_components(&p)? == two_form_components(&q)? { None } else { Some(p.to_string()) })
        }),
        check("gauge.trace-negative", "Tr_q of a probe 2-form is nonzero", || {
            let mut f = GaugeForm::zero(2);
            f.entries.insert((1, 1), ga.nf(&NCPoly::word(&[dx(1, 1), dx(2, 2)]))?);
            Ok(if q_trace(ga, &f)?.is_zero() { Some("trace vanished".into()) } else { None })
        }),
    ]
}

pub fn verify_instanton_suite(ga: &GaugeAlgebra) -> Vec<CheckResult> {
    let built = build_instanton(ga).and_then(|a| curvature(ga, &a).map(|f| (a, f)));
    let (a, f) = match built {
        Ok(v) => v,
        Err(e) => return vec![check("instanton.build", "A and F = dA - A^2", || Err(e))],
    };
    let mut out = vec![
        check("instanton.shape", "A has 4 grade-1 entries, each linear in dx and x with one g_0", || {
            for ((i, k), p) in &a.entries {
                let ok = !p.is_zero()
                    && p.terms().all(|(w, _)| {
                        w.len() == 3 && w[0].class == Class::Dx && w[1].class == Class::X && w[2] == g(0)
                    });
                if !ok {
                    return Ok(Some(format!("({i},{k}): {p}")));
                }
            }
            Ok(None)
        }),
        check("instanton.curvature-nonzero", "F != 0", || {
            Ok(if f.nonzero_entries() > 0 { None } else { Some("F vanished".into()) })
        }),
        check("instanton.tower-bound", "F uses tower levels n <= 2", || {
            let n = max_tower_index(&f);
            Ok(if n <= 2 { None } else { Some(format!("level {n}")) })
        }),
        check("instanton.asd-negative-control", "a Latin-singlet probe fails the duality check", || {
            let probe = self_dual_probe(ga)?;
            let (l, _) = channels(ga, &probe)?;
            Ok(if form_residual(ga, &l).is_some() { None } else { Some("probe passed".into()) })
        }),
        explore("instanton.ara", "A R A + R A R A R = 0", || {
            let r = ara_residual(ga, &a)?;
            let bad = r.iter().filter(|p| !tower_numerator(ga, p).is_zero()).count();
            Ok(if bad == 0 { None } else { Some(format!("{bad} of 16 components nonzero")) })
        }),
    ];
    out.extend(check_anti_self_dual(ga, "instanton", &f));
    out.extend(check_traces(ga, &a, &f));
    out
}

/// Instanton curvature at the given point, for `--dump-F`.
pub fn instanton_curvature(ga: &GaugeAlgebra) -> Result<GaugeForm> {
    curvature(ga, &build_instanton(ga)?)
}

/// Check names with pass/fail, labelled by evaluation point.
pub type Verdicts = Vec<(String, Vec<(String, bool)>)>;

/// Verdicts of the instanton suite at several points must agree.
pub fn verdicts(ga: &GaugeAlgebra, points: &[i64]) -> Result<Verdicts> {
    let mut out = vec![("generic".to_string(), summarize(&verify_instanton_suite(ga)))];
    for &s in points {
        let sp = ga.specialize(&Rational::from_integer(s.into()))?;
        out.push((s.to_string(), summarize(&verify_instanton_suite(&sp))));
    }
    Ok(out)
}

fn summarize(v: &[CheckResult]) -> Vec<(String, bool)> {
    let mut s: Vec<(String, bool)> =
        v.iter().map(|c| (c.id.clone(), c.status == crate::report::Status::Pass || c.residual.as_deref() == Some("0"))).collect();
    s.sort();
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tower_numerator_partial_fraction() {
        let ga = build_gauge_algebra().unwrap();
        let lhs = NCPoly::gen(g(0)) - NCPoly::gen(g(1));
        let rhs = NCPoly::word(&[TAU, g(0), g(1)]).scale(&(QScalar::q_pow(2) - QScalar::one()));
        assert!(tower_numerator(&ga, &ga.nf(&(lhs - rhs)).unwrap()).is_zero());
        assert!(!tower_numerator(&ga, &NCPoly::gen(g(0))).is_zero());
    }

    #[test]
    fn g_shifts_through_dx() {
        let ga = build_gauge_algebra().unwrap();
        let p = ga.nf(&NCPoly::word(&[g(0), dx(1, 1)])).unwrap();
        assert_eq!(p, NCPoly::word(&[dx(1, 1), g(1)]));
    }

    #[test]
    fn components_reject_functions() {
        assert!(matches!(two_form_components(&NCPoly::gen(x(1, 1))), Err(Error::FormResidue(_))));
    }

    #[test]
    fn instanton_without_tower() {
        let mut ga = build_gauge_algebra().unwrap();
        ga.tower = 1;
        assert!(matches!(build_instanton(&ga), Err(Error::TowerExhausted(_))));
    }
}
