use kh_core::cli::{main_with_args, EXIT_INPUT, EXIT_OK, EXIT_PROPERTY};

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut full = vec!["kh"];
    full.extend_from_slice(args);
    let code = main_with_args(full, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> serde_json::Value {
    let (code, out, err) = run(args);
    assert_eq!(code, EXIT_OK, "{err}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn compute_trefoil_text() {
    let (code, out, _) = run(&["compute", "trefoil_left", "--oracle"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("oracle: agree"), "{out}");
    assert!(out.contains("two-line: K = -2"), "{out}");
}

#[test]
fn compute_json_over_integers_has_torsion() {
    let v = json(&["compute", "trefoil_left", "--json"]);
    assert_eq!(v["ring"], "z");
    let rows = v["homology"]["rows"].as_array().unwrap();
    let torsion: Vec<_> = rows
        .iter()
        .flat_map(|r| r["cells"].as_array().unwrap().iter().map(move |c| (r["j"].clone(), c["i"].clone(), c["torsion"].clone())))
        .filter(|(_, _, t)| !t.as_array().unwrap().is_empty())
        .collect();
    assert_eq!(torsion.len(), 1);
    assert_eq!(torsion[0].0, -7);
    assert_eq!(torsion[0].1, -2);
    assert_eq!(torsion[0].2, serde_json::json!([2]));
}

#[test]
fn inline_pd_is_accepted() {
    let v = json(&["compute", "X(1,4,2,3) X(3,2,4,1)", "--ring", "q", "--json"]);
    assert_eq!(v["crossings"], 2);
    assert_eq!(v["ring"], "q");
}

#[test]
fn compute_rejects_open_tangle() {
    let (code, _, err) = run(&["compute", "tangle_01"]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("open edges"));
}

#[test]
fn bad_input_exits_with_input_error() {
    assert_eq!(run(&["compute", "X(1,2,3"]).0, EXIT_INPUT);
    assert_eq!(run(&["compute", "no_such_entry"]).0, EXIT_INPUT);
    assert_eq!(run(&["compute", "X(1,2,3,4)"]).0, EXIT_INPUT);
    assert_eq!(run(&["frobnicate"]).0, EXIT_INPUT);
    assert_eq!(run(&["compute", "unknot", "--ring", "f2"]).0, EXIT_INPUT);
}

#[test]
fn torus_diagram_is_an_input_error() {
    let (code, _, err) = run(&["compute", "X(1,4,2,3) X(3,6,4,5) X(5,2,6,1)"]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("planar"), "{err}");
}

#[test]
fn crossings_are_coherently_diagonal() {
    for (name, c) in [("negative_crossing", -1), ("positive_crossing", -2)] {
        let v = json(&["check-diagonal", name, "--coherent", "--json"]);
        assert_eq!(v["verdict"]["status"], "coherent", "{v}");
        assert_eq!(v["verdict"]["constant"], c, "{v}");
    }
}

#[test]
fn incoherent_complex_violates_property() {
    let (code, out, _) = run(&["check-diagonal", "omega3"]);
    assert_eq!(code, EXIT_OK, "{out}");
    let (code, out, _) = run(&["check-diagonal", "omega3", "--coherent", "--json"]);
    assert_eq!(code, EXIT_PROPERTY);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["verdict"]["status"], "not_coherent");
}

#[test]
fn reduce_round_trips_through_json() {
    let (code, out, _) = run(&["reduce", "tangle_02", "--json"]);
    assert_eq!(code, EXIT_OK);
    let dir = std::env::temp_dir().join(format!("kh-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("reduced.json");
    std::fs::write(&path, &out).unwrap();
    let (code, again, _) = run(&["reduce", path.to_str().unwrap(), "--json"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, again);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn output_is_deterministic() {
    let a = run(&["reduce", "borromean", "--json"]);
    let b = run(&["reduce", "borromean", "--json"]);
    assert_eq!(a, b);
    let a = run(&["selftest", "--seed", "5", "--json"]);
    let b = run(&["selftest", "--seed", "5", "--json"]);
    assert_eq!(a, b);
}

#[test]
fn selftest_passes() {
    let (code, out, err) = run(&["selftest"]);
    assert_eq!(code, EXIT_OK, "{out}{err}");
}
