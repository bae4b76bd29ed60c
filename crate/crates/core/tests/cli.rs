use std::process::Command;

fn supergroup(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_supergroup")).args(args).output().expect("binary runs");
    let mut text = String::from_utf8_lossy(&out.stdout).into_owned();
    text.push_str(&String::from_utf8_lossy(&out.stderr));
    (out.status.code().unwrap_or(-1), text)
}

#[test]
fn check_on_bundled_fixture_exits_zero() {
    let (code, out) = supergroup(&["check", "--fixture", "gl11", "--triples", "4"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("PASS"));
    assert!(!out.contains("FAIL"));
}

#[test]
fn fixture_file_path_is_accepted() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/torus2.json");
    let (code, out) = supergroup(&["roundtrip", "--fixture", path]);
    assert_eq!(code, 0, "{out}");
}

#[test]
fn broken_fixture_exits_two() {
    let dir = std::env::temp_dir().join(format!("supergroup-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("broken.json");
    std::fs::write(&path, "{\"name\": \"broken\"").unwrap();
    let (code, out) = supergroup(&["check", "--fixture", path.to_str().unwrap()]);
    assert_eq!(code, 2, "{out}");
    let (code, _) = supergroup(&["check", "--bogus-flag"]);
    assert_eq!(code, 2);
}

#[test]
fn centralizer_json_reports_dimensions() {
    let (code, out) = supergroup(&["centralizer", "--sub", "torus", "--json"]);
    assert_eq!(code, 0, "{out}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(v["lie_dim"].as_u64().is_some());
    assert_eq!(v["report"]["ok"], true, "{v}");
}
