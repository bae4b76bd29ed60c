use super::*;

fn run_args(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut all = vec!["supergroup"];
    all.extend_from_slice(args);
    let code = run(all, &mut out);
    (code, String::from_utf8(out).unwrap())
}

#[test]
fn check_passes_on_osp() {
    let (code, out) = run_args(&["check", "--triples", "5"]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(out.contains("PASS lie/super-jacobi"));
}

#[test]
fn center_of_osp_has_no_odd_part() {
    let (code, out) = run_args(&["center", "--json"]);
    assert_eq!(code, EXIT_OK, "{out}");
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["odd_dim"], 0);
    assert_eq!(v["lie_dim"], 0);
}

#[test]
fn normalizer_of_borel() {
    let (code, out) = run_args(&["normalizer", "--sub", "borel"]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(out.contains("odd part (dim 1): span{x}"), "{out}");
}

#[test]
fn product_with_inverse_is_identity() {
    let p = r#"{"g": [["1","1"],["0","1"]], "a": ["t1", "t2 + t1*t2*t3"]}"#;
    let (code, inv) = run_args(&["inv", p]);
    assert_eq!(code, EXIT_OK, "{inv}");
    let (code, prod) = run_args(&["mul", p, inv.trim()]);
    assert_eq!(code, EXIT_OK, "{prod}");
    let v: Value = serde_json::from_str(&prod).unwrap();
    assert_eq!(v, json!({"g": [["1", "0"], ["0", "1"]], "a": ["0", "0"]}));
}

#[test]
fn input_errors_exit_with_two() {
    assert_eq!(run_args(&["--fixture", "no-such-fixture", "check"]).0, EXIT_INPUT);
    assert_eq!(run_args(&["mul", "{", "{}"]).0, EXIT_INPUT);
    assert_eq!(run_args(&["inv", r#"{"g": [["2","0"],["0","1"]]}"#]).0, EXIT_INPUT);
    assert_eq!(run_args(&["normalizer", "--sub", "missing"]).0, EXIT_INPUT);
    assert_eq!(run_args(&["frobnicate"]).0, EXIT_INPUT);
}

#[test]
fn pairing_table_and_fixture_list() {
    let (code, out) = run_args(&["pairing-table", "--rank", "2", "--json"]);
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["tables"]["deformed"][3][3], "-1");
    let (_, out) = run_args(&["fixtures"]);
    assert!(out.lines().any(|l| l == "gl11"));
}

#[test]
fn roundtrip_and_short_oracle() {
    assert_eq!(run_args(&["roundtrip", "--fixture", "gl11"]).0, EXIT_OK);
    assert_eq!(run_args(&["oracle", "--max-len", "2", "--fixture", "torus2"]).0, EXIT_OK);
}

#[test]
fn output_is_deterministic_for_a_seed() {
    let a = run_args(&["check", "--triples", "3", "--seed", "9", "--json", "--fixture", "abelian"]);
    let b = run_args(&["check", "--triples", "3", "--seed", "9", "--json", "--fixture", "abelian"]);
    assert_eq!(a, b);
}
