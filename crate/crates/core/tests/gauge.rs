use qgv_core::qgauge::{build_gauge_algebra, verify_gauge_suite, verify_instanton_suite};
use qgv_core::report::{Format, Report};

#[test]
fn gauge_suite_generic() {
    let ga = build_gauge_algebra().unwrap();
    let r = Report::new("gauge", "generic".into(), verify_gauge_suite(&ga));
    println!("{}", r.emit(Format::Text));
    assert!(r.all_passed());
}

#[test]
fn instanton_suite_generic() {
    let ga = build_gauge_algebra().unwrap();
    let r = Report::new("instanton", "generic".into(), verify_instanton_suite(&ga));
    println!("{}", r.emit(Format::Text));
    assert!(r.all_passed());
}

#[test]
fn instanton_verdicts_agree_across_points() {
    let ga = build_gauge_algebra().unwrap();
    let v = qgv_core::qgauge::verdicts(&ga, &[1, 2, 3]).unwrap();
    for (pt, verdict) in &v[1..] {
        assert_eq!(verdict, &v[0].1, "verdicts differ at s = {pt}");
    }
}
