use qgv_core::espace::{build_espace, verify_espace_suite};
use qgv_core::report::{Format, Report};

#[test]
fn espace_suite_generic() {
    let e = build_espace().unwrap();
    let r = Report::new("espace", "generic".into(), verify_espace_suite(&e, 7));
    println!("{}", r.emit(Format::Text));
    assert!(r.all_passed());
}

#[test]
fn espace_classical_limit() {
    let e = build_espace().unwrap();
    let r = Report::new("espace-classical", "1".into(), qgv_core::espace::verify_classical_limit(&e));
    println!("{}", r.emit(Format::Text));
    assert!(r.all_passed());
}

#[test]
fn espace_suite_specialized() {
    let e = build_espace().unwrap();
    for s0 in [2i64, 3] {
        let sp = e.specialize(&qgv_core::Rational::from_integer(s0.into())).unwrap();
        let r = Report::new("espace", s0.to_string(), verify_espace_suite(&sp, 11));
        assert!(r.all_passed(), "{}", r.emit(Format::Text));
    }
}
