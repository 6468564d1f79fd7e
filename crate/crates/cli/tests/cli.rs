use std::process::{Command, Output};

use euler_sums::symbolic::lookup;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_euler-sums")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json_lines(o: &Output) -> Vec<serde_json::Value> {
    stdout(o).lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

#[test]
fn eval_examples() {
    let o = run(&["eval", "S", "1,1", "@1/2"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("= 8.22467033424113218236207583323012594609474950603399218867779114685003735201600436916"), "{}", stdout(&o));

    let o = run(&["eval", "zeta", "3"]);
    assert!(stdout(&o).contains("= 1.2020569031595942853997381615114499907649862923404988817922715553"));

    let o = run(&["eval", "S", "1", "4", "@-1", "--format", "json"]);
    let v = &json_lines(&o)[0];
    assert!(v["value"].as_str().unwrap().starts_with("-9.2318337339694024"), "{v}");
}

#[test]
fn eval_errors_exit_two() {
    assert_eq!(run(&["eval", "S", "1", "1", "@1"]).status.code(), Some(2));
    assert_eq!(run(&["eval", "S", "0", "2", "@1/2"]).status.code(), Some(2));
    assert_eq!(run(&["eval", "zeta", "3", "--prec-bits", "16"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn discover_examples() {
    let o = run(&["discover", "S", "0-depth", "p=4", "@1/2"]);
    assert!(o.status.success());
    assert!(stdout(&o).trim_end().ends_with("= 1/1 * li4"), "{}", stdout(&o));

    let o = run(&["discover", "S", "2", "3", "@1/2", "--format", "json"]);
    let v = &json_lines(&o)[0];
    let expected = lookup("5.2").unwrap().closed_form().unwrap().to_string();
    assert_eq!(v["closed_form"], expected.as_str());

    let o = run(&["discover", "S", "1", "5", "@1/2", "--weight", "6", "--format", "json"]);
    let v = &json_lines(&o)[0];
    let expected = lookup("5.12").unwrap().closed_form().unwrap().to_string();
    assert_eq!(v["closed_form"], expected.as_str());
    assert!(expected.contains("zb5_1"));
}

#[test]
fn discover_exit_codes() {
    // the x = 1/2 basis does not contain sums at x = 1/4
    let o = run(&["discover", "S", "1", "2", "@1/4"]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    assert!(stdout(&o).contains("no relation"));
    let o = run(&["discover", "S", "1", "5", "@1/2", "--weight", "5"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["discover", "zeta", "3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_by_tag() {
    let o = run(&["verify", "--tag", "4.*", "--format", "json", "--stable"]);
    assert!(o.status.success(), "{}", stdout(&o));
    let rows = json_lines(&o);
    assert!(rows.len() >= 26);
    for r in &rows {
        for f in ["id", "lhs", "rhs", "status", "abs_diff", "radius", "millis"] {
            assert!(r.get(f).is_some(), "missing {f}");
        }
        assert_eq!(r["status"], "verified");
        assert_eq!(r["millis"], 0);
        assert!(r["id"].as_str().unwrap().starts_with("4."));
    }
    let ids: Vec<&str> = rows.iter().map(|r| r["id"].as_str().unwrap()).collect();
    assert_eq!(ids[0], "4.1[m=1]");
    assert!(ids.iter().position(|&i| i == "4.3") < ids.iter().position(|&i| i == "4.12"));
}

#[test]
fn verify_weight_filter() {
    let o = run(&["verify", "--tag", "weight-*", "--weight<=5"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.trim_end().ends_with("21/21 verified"), "{out}");
}

#[test]
fn no_match_exits_two() {
    let o = run(&["verify", "--tag", "bogus"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("no entries matched"));
}

#[test]
fn findings_only_with_explicit_tag() {
    let o = run(&["verify", "--tag", "w4.*", "--format", "json"]);
    assert_eq!(o.status.code(), Some(1));
    let rows = json_lines(&o);
    assert!(rows.iter().any(|r| r["id"] == "w4.7.literal" && r["status"] == "failed"));
    let o = run(&["verify", "--weight", "4", "--format", "json"]);
    assert!(json_lines(&o).iter().all(|r| !r["id"].as_str().unwrap().ends_with(".literal")));
}

#[test]
fn stable_output_is_byte_identical() {
    let args = ["verify", "--tag", "5.1*", "--format", "json", "--stable", "--jobs", "2"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn tables() {
    for (w, n) in [(2, 1), (4, 10), (5, 11)] {
        let o = run(&["table", &w.to_string(), "--format", "json"]);
        assert!(o.status.success());
        assert_eq!(json_lines(&o).len(), n, "weight {w}");
    }
    let o = run(&["table", "4"]);
    assert!(stdout(&o).contains("Weight <= 4"));
    assert_eq!(run(&["table", "9"]).status.code(), Some(2));
}
