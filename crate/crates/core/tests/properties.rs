use std::sync::OnceLock;

use proptest::prelude::*;
use qgv_core::espace::{build_espace, Euclid};
use qgv_core::hspace::{build_hspace, HarmonicSpace};
use qgv_core::ncalg::gen::{word_charge, word_grade};
use qgv_core::ncalg::{Gen, NCPoly, RewriteSystem, Strategy as Reduction};
use qgv_core::parse::parse_expr;
use qgv_core::qgauge::{build_gauge_algebra, g, GaugeAlgebra};
use qgv_core::qsphere::{build_sphere, Sphere};
use qgv_core::{QScalar, Rational};

fn sphere() -> &'static Sphere {
    static S: OnceLock<Sphere> = OnceLock::new();
    S.get_or_init(|| build_sphere().unwrap())
}

fn euclid() -> &'static Euclid {
    static S: OnceLock<Euclid> = OnceLock::new();
    S.get_or_init(|| build_espace().unwrap())
}

fn gauge() -> &'static GaugeAlgebra {
    static S: OnceLock<GaugeAlgebra> = OnceLock::new();
    S.get_or_init(|| build_gauge_algebra().unwrap())
}

fn hspace() -> &'static HarmonicSpace {
    static S: OnceLock<HarmonicSpace> = OnceLock::new();
    S.get_or_init(|| build_hspace().unwrap())
}

/// Each rewrite system with the generators its random words draw from. The
/// gauge words stay below the top of the inverse tower.
fn systems() -> Vec<(&'static RewriteSystem, Vec<Gen>)> {
    let low_tower: Vec<Gen> = gauge().sys.gens().into_iter().filter(|h| !(2..=4).any(|n| *h == g(n))).collect();
    vec![
        (&sphere().sys, sphere().sys.gens()),
        (&euclid().sys, euclid().sys.gens()),
        (&gauge().sys, low_tower),
        (&hspace().sys, hspace().sys.gens()),
    ]
}

fn word_in(maxlen: usize) -> impl Strategy<Value = (usize, Vec<Gen>)> {
    (0usize..4).prop_flat_map(move |k| {
        let gens = systems()[k].1.clone();
        let n = gens.len();
        (Just(k), prop::collection::vec(0..n, 0..=maxlen)).prop_map(move |(k, idx)| (k, idx.iter().map(|&i| gens[i]).collect()))
    })
}

fn laurent() -> impl Strategy<Value = QScalar> {
    prop::collection::vec((-6i64..=6, -4i32..=4), 1..4).prop_map(|ts| {
        ts.into_iter().fold(QScalar::zero(), |acc, (c, k)| &acc + &QScalar::monomial(Rational::from_integer(c.into()), k))
    })
}

fn scalar() -> impl Strategy<Value = QScalar> {
    (laurent(), laurent()).prop_map(|(n, d)| if d.is_zero() { n } else { n.checked_div(&d).unwrap() })
}

fn point() -> impl Strategy<Value = Rational> {
    prop_oneof![
        Just(Rational::from_integer(1.into())),
        Just(Rational::from_integer(2.into())),
        Just(Rational::from_integer(3.into())),
        Just(Rational::from_integer((-1).into())),
        Just(Rational::new(1.into(), 2.into())),
        Just(Rational::new((-2).into(), 3.into())),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, ..ProptestConfig::default() })]

    #[test]
    fn field_axioms(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        if !a.is_zero() {
            prop_assert!((&a.inv().unwrap() * &a).is_one());
        }
    }

    #[test]
    fn canonical_form_is_stable(a in scalar()) {
        let text = NCPoly::scalar(a.clone()).to_string();
        let back = parse_expr(&text).unwrap();
        prop_assert_eq!(back.constant_term(), a);
    }

    #[test]
    fn evaluation_is_a_ring_homomorphism(a in scalar(), b in scalar(), s0 in point()) {
        if let (Ok(x), Ok(y)) = (a.evaluate(&s0), b.evaluate(&s0)) {
            prop_assert_eq!((&a + &b).evaluate(&s0).unwrap(), &x + &y);
            prop_assert_eq!((&a * &b).evaluate(&s0).unwrap(), &x * &y);
        }
    }

    #[test]
    fn strategies_agree((k, w) in word_in(6)) {
        let sys = systems()[k].0;
        let p = NCPoly::word(&w);
        let nf = sys.normal_form(&p).unwrap();
        prop_assert_eq!(&sys.normal_form_naive(&p, Reduction::Leftmost).unwrap(), &nf);
        prop_assert_eq!(&sys.normal_form_naive(&p, Reduction::Rightmost).unwrap(), &nf);
    }

    #[test]
    fn reduction_conserves_grade_and_charge((k, w) in word_in(8)) {
        let nf = systems()[k].0.normal_form(&NCPoly::word(&w)).unwrap();
        for (t, _) in nf.terms() {
            prop_assert_eq!(word_grade(t), word_grade(&w));
            prop_assert_eq!(word_charge(t), word_charge(&w));
        }
    }

    #[test]
    fn normal_form_is_multiplicative((k, a) in word_in(4), split in 0usize..5, extra in prop::collection::vec(0usize..64, 0..4)) {
        let (sys, gens) = &systems()[k];
        let b: Vec<Gen> = extra.iter().map(|&i| gens[i % gens.len()]).collect();
        let (a, b) = (NCPoly::word(&a[..split.min(a.len())]), NCPoly::word(&b));
        let direct = sys.normal_form(&(&a * &b)).unwrap();
        let staged = sys.normal_form(&(&sys.normal_form(&a).unwrap() * &sys.normal_form(&b).unwrap())).unwrap();
        prop_assert_eq!(direct, staged);
    }

    #[test]
    fn specialization_commutes((k, w) in word_in(5), s0 in point()) {
        let sys = systems()[k].0;
        let p = NCPoly::word(&w);
        let generic = sys.normal_form(&p).unwrap().specialize(&s0).unwrap();
        let special = sys.specialize(&s0).unwrap().normal_form(&p).unwrap();
        prop_assert_eq!(generic, special);
    }

    #[test]
    fn printed_forms_round_trip((k, w) in word_in(5)) {
        let nf = systems()[k].0.normal_form(&NCPoly::word(&w)).unwrap();
        let text = nf.to_string();
        let back = parse_expr(&text).unwrap();
        prop_assert_eq!(back.to_string(), text);
        prop_assert_eq!(back, nf);
    }

    #[test]
    fn derivations_raise_grade((k, w) in word_in(4)) {
        let (sys, d) = match k {
            0 => (&sphere().sys, &sphere().d),
            1 => (&euclid().sys, &euclid().d),
            _ => return Ok(()),
        };
        let img = d.apply(sys, &NCPoly::word(&w)).unwrap();
        for (t, _) in img.terms() {
            prop_assert_eq!(word_grade(t), word_grade(&w) + 1);
            prop_assert_eq!(word_charge(t), word_charge(&w));
        }
    }

    #[test]
    fn d_squared_vanishes_on_euclid_words(idx in prop::collection::vec(0usize..64, 0..=5)) {
        let e = euclid();
        let gens = e.sys.gens();
        let w: Vec<Gen> = idx.iter().map(|&i| gens[i % gens.len()]).collect();
        let once = e.d.apply(&e.sys, &NCPoly::word(&w)).unwrap();
        prop_assert!(e.d.apply(&e.sys, &once).unwrap().is_zero());
    }

    #[test]
    fn d_squared_vanishes_on_sphere_words(idx in prop::collection::vec(0usize..64, 0..=5)) {
        let s = sphere();
        let gens = s.sys.gens();
        let w: Vec<Gen> = idx.iter().map(|&i| gens[i % gens.len()]).collect();
        let once = s.d.apply(&s.sys, &NCPoly::word(&w)).unwrap();
        prop_assert!(s.d.apply(&s.sys, &once).unwrap().is_zero());
    }
}

#[test]
fn mixed_rules_conserve_grade_and_charge() {
    for (sys, _) in systems() {
        for r in sys.rules() {
            let lhs = [r.lhs.0, r.lhs.1];
            for (t, _) in r.rhs.terms() {
                assert_eq!(word_grade(t), word_grade(&lhs), "{} rule {:?}", sys.name(), lhs);
                assert_eq!(word_charge(t), word_charge(&lhs), "{} rule {:?}", sys.name(), lhs);
            }
        }
    }
}

#[test]
fn abbreviation_charges() {
    let hs = hspace();
    for al in [1u8, 2] {
        for c in [1i8, -1] {
            assert_eq!(hs.x_lower(al, c).unwrap().charges(), vec![c as i32]);
            assert_eq!(hs.kappa_lower(al, c).unwrap().charges(), vec![c as i32]);
            assert_eq!(hs.kappa_upper(c, al).unwrap().charges(), vec![-(c as i32)]);
        }
    }
}
