use qgv_core::qsphere::checks::verify_sphere_suite;
use qgv_core::qsphere::build_sphere;
use qgv_core::report::{Format, Report};

#[test]
fn sphere_suite_generic() {
    let sph = build_sphere().unwrap();
    let r = Report::new("sphere", "generic".into(), verify_sphere_suite(&sph, 4));
    println!("{}", r.emit(Format::Text));
    assert!(r.all_passed());
}
