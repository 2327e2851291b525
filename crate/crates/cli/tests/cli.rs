use std::process::{Command, Output};

fn qgv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qgv")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn tensor_suite_passes() {
    let o = qgv(&["verify", "tensor"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("0 failed"));
}

#[test]
fn json_report_schema() {
    let o = qgv(&["verify", "tensor", "--format", "json", "--q", "2"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["suite"], "tensor");
    assert_eq!(v["q"], "s=2");
    for c in v["checks"].as_array().unwrap() {
        assert_eq!(c["status"], "pass");
        assert!(c["residual"].is_null());
        for key in ["id", "paper_eq", "ms"] {
            assert!(!c[key].is_null());
        }
    }
}

#[test]
fn json_is_deterministic_up_to_timing() {
    let strip = |o: Output| {
        let mut v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
        for c in v["checks"].as_array_mut().unwrap() {
            c.as_object_mut().unwrap().remove("ms");
        }
        v.to_string()
    };
    let args = ["verify", "espace", "--format", "json", "--seed", "11"];
    assert_eq!(strip(qgv(&args)), strip(qgv(&args)));
}

#[test]
fn tap_has_plan_and_one_line_per_check() {
    let o = qgv(&["verify", "instanton", "--format", "tap"]);
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().filter(|l| !l.is_empty()).collect();
    let plan: usize = lines[0].trim_start_matches("1..").parse().unwrap();
    assert_eq!(lines.len(), plan + 1);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn corrupted_sphere_fails_with_named_check() {
    let o = qgv(&["verify", "sphere", "--corrupt"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL sphere.confluence"));
}

#[test]
fn failing_suite_reports_residual() {
    let o = qgv(&["verify", "hspace", "--format", "json"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let failed: Vec<&serde_json::Value> = v["checks"].as_array().unwrap().iter().filter(|c| c["status"] == "fail").collect();
    assert!(!failed.is_empty());
    assert!(failed.iter().all(|c| c["residual"].as_str().is_some_and(|r| !r.is_empty())));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(qgv(&["verify", "bogus"]).status.code(), Some(2));
    assert_eq!(qgv(&["verify", "tensor", "--q", "0"]).status.code(), Some(2));
    assert_eq!(qgv(&["verify", "tensor", "--format", "xml"]).status.code(), Some(2));
    assert_eq!(qgv(&["nf", "--algebra", "sphere", "u(3,+)"]).status.code(), Some(2));
    assert_eq!(qgv(&["nf", "--algebra", "espace", "x(1,1) * (x(1,2)"]).status.code(), Some(2));
}

#[test]
fn nf_prints_normal_form() {
    let o = qgv(&["nf", "--algebra", "sphere", "q*t(0) - s^2*t(0)"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "0");
    let o = qgv(&["nf", "--algebra", "espace", "x(1,1) * x(2,2) - q^-1 * x(1,2) * x(2,1) - s^-2 * x(2,1) * x(1,2)"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn dump_f_lists_components() {
    let o = qgv(&["verify", "instanton", "--dump-F"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().count() > 12);
}
