//! Identity checks for the sphere calculus.

use rayon::prelude::*;

use super::*;
use crate::report::{check, explore, CheckResult};

fn residual(p: NCPoly) -> Option<String> {
    if p.is_zero() {
        None
    } else {
        Some(p.to_string())
    }
}

/// First nonzero residual over a family of polynomials (computed in parallel).
pub fn first_nonzero<T: Sync>(items: &[T], f: impl Fn(&T) -> Result<NCPoly> + Sync) -> Result<Option<String>> {
    let found = items
        .par_iter()
        .map(|x| f(x).map(residual))
        .find_first(|r| !matches!(r, Ok(None)));
    match found {
        None => Ok(None),
        Some(r) => r,
    }
}

pub fn verify_harmonic_relations(sph: &Sphere) -> CheckResult {
    check("sphere.harmonic-relations", "eps_ki u^i_a u^k_b = eps_ba, eps^ba u^i_a u^k_b = eps^ki (8 components)", || {
        first_nonzero(&harmonic_relations(), |p| sph.nf(&sph.kp(p)))
    })
}

pub fn verify_ubar(sph: &Sphere) -> CheckResult {
    check("sphere.ubar-inverse", "ubar^a_i u^i_b = delta^a_b, u^i_a ubar^a_k = delta^i_k", || {
        let mut items = Vec::new();
        for a in CHARGES {
            for b in CHARGES {
                let p: NCPoly = SPINOR.iter().map(|&i| &sph.ubar(a, i) * &NCPoly::gen(u(i, b))).sum();
                items.push(if a == b { p - NCPoly::one() } else { p });
            }
        }
        for i in SPINOR {
            for k in SPINOR {
                let p: NCPoly = CHARGES.iter().map(|&a| &NCPoly::gen(u(i, a)) * &sph.ubar(a, k)).sum();
                items.push(if i == k { p - NCPoly::one() } else { p });
            }
        }
        first_nonzero(&items, |p| sph.nf(p))
    })
}

pub fn verify_derivation_compatible(sph: &Sphere) -> CheckResult {
    check("sphere.d-respects-rules", "d_u(lhs - rhs) = 0 for every rule", || {
        let bad = sph.d.compatibility(&sph.sys)?;
        Ok(bad.first().map(|(w, r)| format!("{w}: {r}")))
    })
}

/// `theta^a_b = ubar^a_i d u^i_b` and `d theta^a_b = -theta^a_c theta^c_b`.
pub fn verify_theta_definition(sph: &Sphere) -> Vec<CheckResult> {
    let th = |a: i8, b: i8| sph.kp(&theta_matrix(a, b));
    vec![
        check("sphere.theta-from-harmonics", "theta^a_b = ubar^a_i d u^i_b, Tr_q theta = 0", || {
            let mut items = Vec::new();
            for a in CHARGES {
                for b in CHARGES {
                    let mut p = -&th(a, b);
                    for i in SPINOR {
                        let du = sph.d.expand(&NCPoly::gen(u(i, b)))?;
                        p = p + &sph.ubar(a, i) * &du;
                    }
                    items.push(p);
                }
            }
            first_nonzero(&items, |p| sph.nf(p))
        }),
        check("sphere.maurer-cartan-matrix", "d theta^a_b = -theta^a_c theta^c_b", || {
            let mut items = Vec::new();
            for a in CHARGES {
                for b in CHARGES {
                    let mut p = sph.d.expand(&th(a, b))?;
                    for c in CHARGES {
                        p = p + &th(a, c) * &th(c, b);
                    }
                    items.push(p);
                }
            }
            first_nonzero(&items, |p| sph.nf(p))
        }),
    ]
}

pub fn verify_maurer_cartan(sph: &Sphere) -> Vec<CheckResult> {
    let k = sph.k(mc_coefficient());
    let dt = |t: Gen| sph.du(&NCPoly::gen(t));
    vec![
        check("sphere.mc.theta0", "d t(0) + t(-2) t(+2) = 0", || {
            Ok(residual(sph.nf(&(dt(T0)? + NCPoly::word(&[TM, TP])))?))
        }),
        check("sphere.mc.theta+2", "d t(+2) - q^2 (1 + q^2) t(0) t(+2) = 0", || {
            Ok(residual(sph.nf(&(dt(TP)? - NCPoly::word(&[T0, TP]).scale(&k)))?))
        }),
        check("sphere.mc.theta-2", "d t(-2) - q^2 (1 + q^2) t(-2) t(0) = 0", || {
            Ok(residual(sph.nf(&(dt(TM)? - NCPoly::word(&[TM, T0]).scale(&k)))?))
        }),
    ]
}

pub fn verify_d_squared(sph: &Sphere, maxlen: usize) -> Vec<CheckResult> {
    let mut gens: Vec<Gen> = THETAS.to_vec();
    gens.extend(harmonics());
    vec![
        check("sphere.d2.generators", "d_u d_u g = 0 on every generator", || {
            let bad = sph.d.square_on_generators(&sph.sys)?;
            Ok(bad.first().map(|(g, r)| format!("{g}: {r}")))
        }),
        check("sphere.d2.words", &format!("d_u d_u w = 0 on all words of length <= {maxlen}"), || {
            let words = words_up_to(&gens, maxlen);
            first_nonzero(&words, |w| sph.du(&sph.du(&NCPoly::word(w))?))
        }),
    ]
}

/// The explicit action of the three `delta` operators on harmonics.
pub fn verify_delta_on_harmonics(sph: &Sphere) -> CheckResult {
    check(
        "sphere.delta-on-harmonics",
        "delta0 u_+ = u_+ t(0), delta u_+ = 0, deltabar u_+ = u_- t(+2), delta0 u_- = -t(0) u_-, delta u_- = u_+ t(-2), deltabar u_- = 0",
        || {
            let mut items = Vec::new();
            for i in SPINOR {
                let (up, um) = (NCPoly::gen(u(i, 1)), NCPoly::gen(u(i, -1)));
                let w = |a: Gen, b: Gen| NCPoly::word(&[a, b]);
                items.push(sph.delta(DOp::Zero, &up)? - w(u(i, 1), T0));
                items.push(sph.delta(DOp::Plus, &up)?);
                items.push(sph.delta(DOp::Minus, &up)? - w(u(i, -1), TP));
                items.push(sph.delta(DOp::Zero, &um)? + w(T0, u(i, -1)));
                items.push(sph.delta(DOp::Plus, &um)? - w(u(i, 1), TM));
                items.push(sph.delta(DOp::Minus, &um)?);
            }
            first_nonzero(&items, |p| sph.nf(p))
        },
    )
}

/// Test forms for the delta identities: harmonic monomials of degree
/// `<= maxdeg`, and the same multiplied on the left by each form.
fn delta_test_forms(sph: &Sphere, maxdeg: usize) -> Result<Vec<NCPoly>> {
    let basis = monomial_basis(sph, maxdeg)?;
    let mut out: Vec<NCPoly> = basis.iter().map(|w| NCPoly::word(w)).collect();
    for t in THETAS {
        for w in &basis {
            out.push(NCPoly::word(w).lmul_word(&[t]));
        }
    }
    Ok(out)
}

fn anticommutator_sum(sph: &Sphere, split: &dyn Fn(DOp) -> GradedDerivation, f: &NCPoly) -> Result<(NCPoly, NCPoly)> {
    let splits: Vec<GradedDerivation> = DOPS.iter().map(|&o| split(o)).collect();
    let apply = |k: usize, p: &NCPoly| sph.delta_with(&splits[k], DOPS[k], p);
    let mut squares = NCPoly::zero();
    let mut mixed = NCPoly::zero();
    for x in 0..3 {
        let fx = apply(x, f)?;
        for y in 0..3 {
            let v = apply(y, &fx)?;
            if x == y {
                squares = squares + v;
            } else {
                mixed = mixed + v;
            }
        }
    }
    Ok((squares, mixed))
}

/// Nilpotency of each `delta` and the vanishing of the sum of their
/// pairwise anticommutators.
pub fn verify_delta_identities(sph: &Sphere, maxdeg: usize) -> Vec<CheckResult> {
    let own = |o: DOp| sph.theta_split[&o].clone();
    let literal = |o: DOp| sph.half_split(o);
    let forms = delta_test_forms(sph, maxdeg);
    let forms2 = forms.clone();
    vec![
        check(
            "sphere.delta-nilpotent",
            &format!("delta0^2 = delta^2 = deltabar^2 = 0 on forms of degree <= {maxdeg}"),
            || {
                let forms = forms?;
                first_nonzero(&forms, |f| {
                    for o in DOPS {
                        let r = sph.delta(o, &sph.delta(o, f)?)?;
                        if !r.is_zero() {
                            return Ok(r);
                        }
                    }
                    Ok(NCPoly::zero())
                })
            },
        ),
        check(
            "sphere.delta-anticommutators",
            &format!("{{delta0,delta}} + {{delta0,deltabar}} + {{delta,deltabar}} = 0 on forms of degree <= {maxdeg}"),
            || {
                let forms = forms2?;
                first_nonzero(&forms, |f| Ok(anticommutator_sum(sph, &own, f)?.1))
            },
        ),
        check("sphere.delta-on-forms", "2 delta t(0) = 2 deltabar t(0) = d t(0), delta0 t(+-2) = d t(+-2)", || {
            let mut items = Vec::new();
            for (op, t, c) in [(DOp::Plus, T0, 2), (DOp::Minus, T0, 2), (DOp::Zero, TP, 1), (DOp::Zero, TM, 1)] {
                let v = sph.delta(op, &NCPoly::gen(t))?.scale(&QScalar::int(c));
                items.push(v - sph.du(&NCPoly::gen(t))?);
            }
            first_nonzero(&items, |p| sph.nf(p))
        }),
        explore(
            "sphere.delta-even-split",
            "splitting every d t equally between two operators: delta^2 t(0)",
            || {
                let t0 = NCPoly::gen(T0);
                let split = literal(DOp::Plus);
                let once = sph.delta_with(&split, DOp::Plus, &t0)?;
                Ok(residual(sph.delta_with(&split, DOp::Plus, &once)?))
            },
        ),
    ]
}

/// The three deformed Lie algebra relations on every harmonic monomial of
/// degree `<= maxdeg`.
pub fn verify_lie_algebra(sph: &Sphere, maxdeg: usize) -> Vec<CheckResult> {
    use DOp::*;
    let basis = monomial_basis(sph, maxdeg);
    let q2 = sph.k(QScalar::q_pow(2));
    let q4 = sph.k(QScalar::q_pow(4));
    let k = sph.k(mc_coefficient());
    let rel = |id: &str, text: &str, f: &(dyn Fn(&NCPoly) -> Result<NCPoly> + Sync)| {
        check(id, &format!("{text} on monomials of degree <= {maxdeg}"), || {
            let basis = basis.clone()?;
            first_nonzero(&basis, |w| sph.nf(&f(&NCPoly::word(w))?))
        })
    };
    vec![
        rel("lie.plus-minus", "q^2 D(+2) D(-2) - D(-2) D(+2) = D0", &|m| {
            Ok(sph.d_chain(&[Plus, Minus], m)?.scale(&q2) - sph.d_chain(&[Minus, Plus], m)? - sph.d_op(Zero, m)?)
        }),
        rel("lie.zero-plus", "D0 D(+2) - q^4 D(+2) D0 = q^2 (1 + q^2) D(+2)", &|m| {
            Ok(sph.d_chain(&[Zero, Plus], m)? - sph.d_chain(&[Plus, Zero], m)?.scale(&q4) - sph.d_op(Plus, m)?.scale(&k))
        }),
        rel("lie.minus-zero", "D(-2) D0 - q^4 D0 D(-2) = q^2 (1 + q^2) D(-2)", &|m| {
            Ok(sph.d_chain(&[Minus, Zero], m)? - sph.d_chain(&[Zero, Minus], m)?.scale(&q4) - sph.d_op(Minus, m)?.scale(&k))
        }),
    ]
}

/// `D0 m = q^2 (1 - q^{2p}) / (1 - q^2) m` on charge-`p` monomials, and `D0`
/// vanishes exactly on the neutral ones.
pub fn verify_d0_spectrum(sph: &Sphere, maxdeg: usize) -> Vec<CheckResult> {
    let basis = monomial_basis(sph, maxdeg);
    let b2 = basis.clone();
    vec![
        check("lie.d0-eigenvalue", &format!("D0 = q^2 (1 - q^2p)/(1 - q^2) on charge p in -2..2, degree <= {maxdeg}"), || {
            let basis: Vec<Word> = basis?.into_iter().filter(|w| word_charge(w).abs() <= 2).collect();
            first_nonzero(&basis, |w| {
                let m = NCPoly::word(w);
                Ok(sph.d_op(DOp::Zero, &m)? - m.scale(&sph.d0_eigenvalue(word_charge(w))))
            })
        }),
        check("lie.d0-kernel", "D0 f = 0 exactly for neutral f", || {
            let basis = b2?;
            for w in &basis {
                let zero = sph.d_op(DOp::Zero, &NCPoly::word(w))?.is_zero();
                if zero != (word_charge(w) == 0) {
                    return Ok(Some(format!("{}: D0 vanishing = {zero}", crate::ncalg::gen::word_text(w))));
                }
            }
            Ok(None)
        }),
    ]
}

pub fn verify_phi(sph: &Sphere, maxn: usize) -> Vec<CheckResult> {
    vec![
        check("sphere.phi-symmetric", &format!("P+_(k,k+1) Phi^(r,s) = Phi^(r,s) for r + s <= {maxn}"), || {
            for n in 1..=maxn {
                for s in 0..=n {
                    let phi = build_phi(sph, n - s, s)?;
                    if !phi.charges_ok() {
                        return Ok(Some(format!("Phi^({},{s}) has mixed charge", n - s)));
                    }
                    for k in 0..n.saturating_sub(1) {
                        if let Some(r) = phi.projector_residual(sph, k)? {
                            return Ok(Some(format!("Phi^({},{s}) slot {k}: {r}", n - s)));
                        }
                    }
                }
            }
            Ok(None)
        }),
        check("sphere.phi-naive-not-symmetric", "the unsymmetrized u_+ u_- is not P+-invariant", || {
            let naive = naive_phi(sph, 1, 1)?;
            Ok(match naive.projector_residual(sph, 0)? {
                Some(_) => None,
                None => Some("naive product is symmetric".into()),
            })
        }),
    ]
}

/// Every check of the sphere calculus.
pub fn verify_sphere_suite(sph: &Sphere, maxdeg: usize) -> Vec<CheckResult> {
    let mut out = vec![
        check("sphere.confluence", "all length-3 overlaps of the sphere rules resolve", || {
            let r = sph.sys.check_local_confluence(3)?;
            Ok(if r.is_confluent() { None } else { Some(r.describe()) })
        }),
        verify_harmonic_relations(sph),
        verify_ubar(sph),
        verify_derivation_compatible(sph),
        verify_delta_on_harmonics(sph),
    ];
    out.extend(verify_theta_definition(sph));
    out.extend(verify_maurer_cartan(sph));
    out.extend(verify_d_squared(sph, maxdeg.min(4)));
    out.extend(verify_delta_identities(sph, maxdeg.min(3)));
    out.extend(verify_lie_algebra(sph, maxdeg));
    out.extend(verify_d0_spectrum(sph, maxdeg));
    out.extend(verify_phi(sph, maxdeg.min(3)));
    out
}
