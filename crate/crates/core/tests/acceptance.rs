//! Acceptance criteria 1 to 9, one line per criterion.

use std::time::{Duration, Instant};

use qgv_core::espace::{build_espace, random_words, verify_classical_limit, verify_espace_suite};
use qgv_core::hspace::{build_hspace, verify_hspace_suite};
use qgv_core::ncalg::{Class, Gen, NCPoly, RewriteSystem, Strategy};
use qgv_core::parse::parse_expr;
use qgv_core::qgauge::{build_gauge_algebra, g, tower_numerator, verdicts, verify_instanton_suite};
use qgv_core::qscalar::QScalar;
use qgv_core::qsphere::build_sphere;
use qgv_core::qsphere::checks::{
    verify_d0_spectrum, verify_d_squared, verify_delta_identities, verify_harmonic_relations, verify_lie_algebra,
    verify_maurer_cartan, verify_theta_definition,
};
use qgv_core::qtensor::{r_matrix, verify_tensor_suite, TensorSet};
use qgv_core::report::CheckResult;
use qgv_core::Rational;

/// Sub-checks that fail by construction; see the README.
const KNOWN_FAILURES: [&str; 1] = ["hspace.instanton-zero-curvature"];

struct Outcome {
    failed: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome { failed: Vec::new() }
    }

    fn require(&mut self, checks: &[CheckResult], ids: &[&str]) {
        for id in ids {
            match checks.iter().find(|c| c.id == *id) {
                Some(c) if c.passed() => {}
                Some(c) => self.failed.push(format!("{id}: {}", c.residual.clone().unwrap_or_default())),
                None => self.failed.push(format!("{id}: missing")),
            }
        }
    }

    fn require_prefix(&mut self, checks: &[CheckResult], prefix: &str) {
        let hits: Vec<&CheckResult> = checks.iter().filter(|c| c.id.starts_with(prefix)).collect();
        if hits.is_empty() {
            self.failed.push(format!("{prefix}*: missing"));
        }
        for c in hits {
            if !c.passed() {
                self.failed.push(c.id.clone());
            }
        }
    }

    fn fail(&mut self, what: String) {
        self.failed.push(what);
    }
}

fn one() -> Rational {
    Rational::from_integer(1.into())
}

fn int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn run(n: usize, title: &str, budget: Duration, f: impl FnOnce(&mut Outcome)) -> Vec<String> {
    let start = Instant::now();
    let mut o = Outcome::new();
    f(&mut o);
    let took = start.elapsed();
    if took > budget {
        o.fail(format!("runtime {took:?} exceeds {budget:?}"));
    }
    let known = !o.failed.is_empty() && o.failed.iter().all(|f| KNOWN_FAILURES.iter().any(|k| f.starts_with(k)));
    let status = if o.failed.is_empty() { "PASS" } else { "FAIL" };
    let note = if known { " (known failure)" } else { "" };
    println!("criterion {n}: {status}{note}  {title}  [{:.2?}]", took);
    for f in &o.failed {
        println!("    {}", f.lines().next().unwrap_or("").chars().take(160).collect::<String>());
    }
    o.failed
}

/// `a b = (-1)^{|a||b|} b a` in `sys` for every generator pair not in `skip`,
/// with residuals passed through `reduce`.
fn graded_commutative(
    sys: &RewriteSystem,
    skip: impl Fn(Gen, Gen) -> bool,
    reduce: impl Fn(&NCPoly) -> NCPoly,
) -> Option<String> {
    let gens = sys.gens();
    for &a in &gens {
        for &b in &gens {
            if skip(a, b) {
                continue;
            }
            let sign = if a.grade() == 1 && b.grade() == 1 { -1 } else { 1 };
            let p = NCPoly::word(&[a, b]) - NCPoly::word(&[b, a]).scale(&QScalar::int(sign));
            match sys.normal_form(&p) {
                Ok(r) if reduce(&r).is_zero() => {}
                Ok(r) => return Some(format!("{}: {a} {b} -> {r}", sys.name())),
                Err(e) => return Some(format!("{}: {e}", sys.name())),
            }
        }
    }
    None
}

#[test]
fn acceptance() {
    let mut failures: Vec<String> = Vec::new();

    failures.extend(run(1, "tensor identities over generic s", Duration::from_secs(1), |o| {
        let checks = verify_tensor_suite(&TensorSet::generic());
        o.require(&checks, &[
            "tensor.hecke",
            "tensor.inverse",
            "tensor.proj-idem-plus",
            "tensor.proj-idem-minus",
            "tensor.proj-orth",
            "tensor.proj-complete",
            "tensor.spectral",
            "tensor.eps-contract",
            "tensor.yang-baxter",
        ]);
        o.require_prefix(&checks, "tensor.");
    }));

    failures.extend(run(2, "confluence of the sphere, E_q(4) and harmonic-space rules", Duration::from_secs(30), |o| {
        for (name, sys) in [
            ("sphere", build_sphere().map(|s| s.sys)),
            ("espace", build_espace().map(|e| e.sys)),
            ("hspace", build_hspace().map(|h| h.sys)),
        ] {
            match sys.and_then(|s| s.check_local_confluence(3)) {
                Ok(r) if r.is_confluent() => {}
                Ok(r) => o.fail(format!("{name}: {}", r.describe())),
                Err(e) => o.fail(format!("{name}: {e}")),
            }
        }
    }));

    let sph = build_sphere().unwrap();

    failures.extend(run(3, "sphere calculus", Duration::from_secs(120), |o| {
        let mut checks = vec![verify_harmonic_relations(&sph)];
        checks.extend(verify_d_squared(&sph, 4));
        checks.extend(verify_maurer_cartan(&sph));
        checks.extend(verify_theta_definition(&sph));
        checks.extend(verify_delta_identities(&sph, 3));
        o.require(&checks, &[
            "sphere.harmonic-relations",
            "sphere.d2.generators",
            "sphere.d2.words",
            "sphere.maurer-cartan-matrix",
            "sphere.mc.theta0",
            "sphere.mc.theta+2",
            "sphere.mc.theta-2",
            "sphere.delta-anticommutators",
        ]);
    }));

    failures.extend(run(4, "deformed Lie algebra and D0 spectrum", Duration::from_secs(120), |o| {
        let mut checks = verify_lie_algebra(&sph, 4);
        checks.extend(verify_d0_spectrum(&sph, 4));
        o.require(&checks, &["lie.plus-minus", "lie.zero-plus", "lie.minus-zero", "lie.d0-eigenvalue", "lie.d0-kernel"]);
    }));

    failures.extend(run(5, "E_q(4) calculus", Duration::from_secs(60), |o| {
        let e = build_espace().unwrap();
        let checks = verify_espace_suite(&e, 7);
        o.require(&checks, &[
            "espace.d2",
            "espace.tau-central",
            "espace.conj-involutive",
            "espace.conj-inverse",
            "espace.xi-square",
            "espace.xi-closed",
            "espace.dx-commutator",
            "espace.dtau",
        ]);
    }));

    failures.extend(run(6, "instanton: ASD projection and q-traces at generic s, s = 2, s = 3", Duration::from_secs(600), |o| {
        let ga = build_gauge_algebra().unwrap();
        let checks = verify_instanton_suite(&ga);
        o.require(&checks, &["instanton.asd", "instanton.trace-F", "instanton.trace-dA", "instanton.curvature-nonzero"]);
        match verdicts(&ga, &[2, 3]) {
            Ok(v) => {
                for (pt, verdict) in &v[1..] {
                    if verdict != &v[0].1 {
                        o.fail(format!("verdicts at s = {pt} differ from generic"));
                    }
                }
            }
            Err(e) => o.fail(e.to_string()),
        }
    }));

    failures.extend(run(7, "classical limit s = 1", Duration::from_secs(60), |o| {
        for i in 1..=2u8 {
            for k in 1..=2u8 {
                for l in 1..=2u8 {
                    for m in 1..=2u8 {
                        let v = r_matrix(i, k, l, m).evaluate(&one()).unwrap();
                        let p = if i == m && k == l { int(1) } else { int(0) };
                        if v != p {
                            o.fail(format!("R^{i}{k}_{l}{m} = {v} at s = 1"));
                        }
                    }
                }
            }
        }
        let sph = build_sphere().unwrap().specialize(&one()).unwrap();
        let e = build_espace().unwrap();
        let ga = build_gauge_algebra().unwrap().specialize(&one()).unwrap();
        let hs = build_hspace().unwrap().specialize(&one()).unwrap();
        let function_of_x = |h: Gen| matches!(h.class, Class::X | Class::Tau | Class::TauInv);
        let heisenberg = |a: Gen, b: Gen| {
            (a.class == Class::D && (function_of_x(b) || b.class == Class::D)) || (function_of_x(a) && b.class == Class::D)
        };
        let top = |a: Gen, b: Gen| [a, b].iter().any(|h| (2..=4).any(|n| *h == g(n)));
        let plain = |p: &NCPoly| p.clone();
        let es = e.specialize(&one()).unwrap();
        for sys in [&sph.sys, &es.sys] {
            if let Some(r) = graded_commutative(sys, |_, _| false, plain) {
                o.fail(r);
            }
        }
        if let Some(r) = graded_commutative(&ga.sys, top, |p| tower_numerator(&ga, p)) {
            o.fail(r);
        }
        if let Some(r) = graded_commutative(&hs.sys, heisenberg, plain) {
            o.fail(r);
        }
        o.require_prefix(&verify_classical_limit(&e), "espace.classical");
        let hs_checks = verify_hspace_suite(&hs, 2);
        o.require(&hs_checks, &["hspace.classical-heisenberg"]);
        o.require(&verify_instanton_suite(&ga), &["instanton.asd", "instanton.trace-F", "instanton.trace-dA"]);
    }));

    failures.extend(run(8, "harmonic space: nilpotency, analyticity, zero curvature", Duration::from_secs(600), |o| {
        let hs = build_hspace().unwrap();
        let checks = verify_hspace_suite(&hs, 3);
        o.require(&checks, &[
            "hspace.d1-squared",
            "hspace.d2-anticommutator",
            "hspace.d2-squared-witness",
            "hspace.analyticity-preserved",
            "hspace.d1-analytic",
            "hspace.instanton-zero-curvature",
        ]);
        let classical = verify_hspace_suite(&hs.specialize(&one()).unwrap(), 3);
        o.require(&classical, &["hspace.d2-squared-classical"]);
    }));

    failures.extend(run(9, "engine: strategies, specialization, parser round-trip on 1000 seeded words", Duration::from_secs(60), |o| {
        let systems: Vec<RewriteSystem> = vec![
            build_sphere().unwrap().sys,
            build_espace().unwrap().sys,
            build_hspace().unwrap().sys,
        ];
        let points = [int(2), int(3), Rational::new(1.into(), 2.into())];
        for (n, sys) in systems.iter().enumerate() {
            let words = random_words(&sys.gens(), 1000, 6, 1234 + n as u64);
            let specialized: Vec<RewriteSystem> = points.iter().map(|s| sys.specialize(s).unwrap()).collect();
            for w in &words {
                let p = NCPoly::word(w);
                let nf = sys.normal_form(&p).unwrap();
                for st in [Strategy::Leftmost, Strategy::Rightmost] {
                    if sys.normal_form_naive(&p, st).unwrap() != nf {
                        o.fail(format!("{}: strategies disagree on {p}", sys.name()));
                    }
                }
                for (s0, sp) in points.iter().zip(&specialized) {
                    if nf.specialize(s0).unwrap() != sp.normal_form(&p).unwrap() {
                        o.fail(format!("{}: specialization at {s0} does not commute on {p}", sys.name()));
                    }
                }
                let text = nf.to_string();
                match parse_expr(&text) {
                    Ok(back) if back.to_string() == text => {}
                    _ => o.fail(format!("{}: round trip fails on {text}", sys.name())),
                }
            }
        }
    }));

    let unexpected: Vec<&String> =
        failures.iter().filter(|f| !KNOWN_FAILURES.iter().any(|k| f.starts_with(k))).collect();
    assert!(unexpected.is_empty(), "unexpected failures: {unexpected:?}");
    for k in KNOWN_FAILURES {
        assert!(failures.iter().any(|f| f.starts_with(k)), "{k} now passes; update the known failures");
    }
}
