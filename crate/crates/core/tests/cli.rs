//! End-to-end runs of the binary.

use std::process::Command;

use serde_json::Value;

fn jacpoly(args: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_jacpoly"))
        .args(args)
        .output()
        .expect("binary runs");
    let json = serde_json::from_slice(&out.stdout).expect("stdout is JSON");
    (out.status.code().expect("exit code"), json)
}

#[test]
fn depend_prints_the_relation() {
    let (code, j) = jacpoly(&["depend", "--f", "y^2", "--g", "y^3+y"]);
    assert_eq!(code, 0);
    assert_eq!(j["poly"], "G^2 - F^3 - 2*F^2 - F");
}

#[test]
fn pair_from_file() {
    let path = std::env::temp_dir().join(format!("jacpoly-pair-{}.txt", std::process::id()));
    std::fs::write(&path, "# elementary automorphism\nf = x + y^2\ng = y\n").unwrap();
    let (code, j) = jacpoly(&["depend", "--file", path.to_str().unwrap()]);
    std::fs::remove_file(&path).ok();
    assert_eq!(code, 0);
    assert_eq!(j["poly"], "G^2 - F + x");
}

#[test]
fn exit_codes() {
    assert_eq!(jacpoly(&["charpair", "--params", "1,2,2,3"]).0, 0);
    // known-good pairs fail counterexample-only checks
    assert_eq!(jacpoly(&["audit", "--f", "x + y^2", "--g", "y"]).0, 1);
    let (code, j) = jacpoly(&["bounds", "--params", "3,3,2,3"]);
    assert_eq!(code, 2);
    assert_eq!(j["error"]["message"], "n > m violated");
}

#[test]
fn puiseux_decreasing() {
    let (code, j) = jacpoly(&["puiseux", "--f", "y^2-x", "--dir", "dec", "--order", "5"]);
    assert_eq!(code, 0);
    assert_eq!(j["branches"].as_array().unwrap().len(), 2);
}
