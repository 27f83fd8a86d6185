use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use hankel_border::border::normal_form;
use hankel_border::fixtures;
use hankel_border::io::{from_json, DecompositionJson, ResultJson, VanishingJson};
use hankel_border::{border_basis, mult_matrices, BorderOptions, FieldSpec, MonomialOrder};
use serde_json::Value;

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "data", name].iter().collect();
    p.to_str().unwrap().to_string()
}

fn hbb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hbb")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn ok(args: &[&str]) -> String {
    let o = hbb(args);
    assert_eq!(o.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    stdout(&o)
}

#[test]
fn borderbasis_ex4_gives_locators() {
    let out = ok(&["borderbasis", "--input", &data("ex4_syndromes.json"), "--order", "deglex"]);
    let res = from_json::<ResultJson>(&out).unwrap().build().unwrap();
    assert_eq!(res.k, fixtures::ex4_locators());
    assert_eq!(res.rank(), 2);
}

#[test]
fn borderbasis_with_tables() {
    let out = ok(&["borderbasis", "--input", &data("ex2_sequence.json"), "--tables"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    let m1 = &v["tables"]["matrices"][0];
    assert_eq!(m1[1][1], "91/20");
    assert_eq!(m1[0][0], "5/4");
    assert_eq!(v["result"]["certified"], true);
}

#[test]
fn tensor_ex3() {
    let out = ok(&["tensor", "--input", &data("ex3_tensor.json")]);
    let dec = from_json::<DecompositionJson>(&out).unwrap().build().unwrap();
    assert_eq!(dec, fixtures::ex3_decomposition());
}

#[test]
fn decompose_and_prony_ex2() {
    for cmd in ["decompose", "prony"] {
        for seed in ["0", "17"] {
            let out = ok(&[cmd, "--input", &data("ex2_sequence.json"), "--seed", seed]);
            let dec = from_json::<DecompositionJson>(&out).unwrap().build().unwrap();
            assert_eq!(dec, fixtures::ex2_decomposition());
        }
    }
}

#[test]
fn field_override_needs_exhaustive_search() {
    let args = ["decompose", "--input", &data("ex2_sequence.json"), "--field", "prime:32003"];
    let o = hbb(&args);
    assert_eq!(o.status.code(), Some(1));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["error"]["kind"], "UnsupportedField");
    let out = ok(&[&args[..], &["--exhaustive-fp"]].concat());
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["rank"], 3);
    assert_eq!(v["terms"][0]["weight"], "2");
    assert_eq!(v["terms"][2]["weight"], "32002");
}

#[test]
fn decode_ex4() {
    let out = ok(&["decode", "--input", &data("ex4_code.json"), "--word", "0,3,3,3,0,0,-6,-2,0,-1,0"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    let f = fixtures::ex4_field();
    let corrected: Vec<String> = fixtures::ex4_codeword().iter().map(|c| c.to_string()).collect();
    assert_eq!(v["corrected"], serde_json::json!(corrected));
    assert_eq!(v["errors"][0], serde_json::json!({"position": 5, "value": "1"}));
    assert_eq!(v["errors"][1], serde_json::json!({"position": 10, "value": f.from_i64(-1).to_string()}));
    assert_eq!(v["errors"].as_array().unwrap().len(), 2);
}

#[test]
fn decode_rejects_wrong_length() {
    let o = hbb(&["decode", "--input", &data("ex4_code.json"), "--word", "1,2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn vanishing_ex3_points() {
    let out = ok(&["vanishing", "--input", &data("ex3_points.json")]);
    let v: VanishingJson = from_json(&out).unwrap();
    let k: Vec<_> = v.k.iter().map(|t| hankel_border::io::poly_from_json(FieldSpec::Rational, 2, t).unwrap()).collect();
    assert_eq!(k, fixtures::ex3_relations());
    assert_eq!(v.interpolants.len(), 3);
    let o = hbb(&["vanishing", "--input", &data("ex3_points.json"), "--degree", "2"]);
    assert_eq!(o.status.code(), Some(1));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["error"]["kind"], "NotCertified");
}

#[test]
fn interpolate_sparse() {
    let out = ok(&["interpolate", "--input", &data("sparse_samples.json"), "--zeta", "2,3"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(
        v["terms"],
        serde_json::json!([
            {"exponent": [0, 0], "weight": "2"},
            {"exponent": [1, 1], "weight": "3"},
            {"exponent": [2, 0], "weight": "-1"}
        ])
    );
    let o = hbb(&["interpolate", "--input", &data("sparse_samples.json"), "--zeta", "4,3"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn uncertified_is_a_domain_error() {
    let o = hbb(&["decompose", "--input", &data("ex4_syndromes.json")]);
    assert_eq!(o.status.code(), Some(1));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["error"]["kind"], "NotCertified");
    assert!(v["error"]["message"].as_str().unwrap().contains("x1^2"));
    let o = hbb(&["borderbasis", "--input", &data("ex4_syndromes.json"), "--require-certified"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"nvars\": 2").unwrap();
    let wrong_prime = dir.path().join("p.json");
    std::fs::write(&wrong_prime, r#"{"nvars":1,"field":{"type":"prime","p":10},"moments":[]}"#).unwrap();
    let cases: Vec<Vec<String>> = vec![
        vec!["borderbasis".into(), "--input".into(), data("empty.json")],
        vec!["borderbasis".into(), "--input".into(), bad.to_str().unwrap().into()],
        vec!["borderbasis".into(), "--input".into(), wrong_prime.to_str().unwrap().into()],
        vec!["borderbasis".into(), "--input".into(), dir.path().join("missing.json").to_str().unwrap().into()],
        vec!["borderbasis".into()],
        vec!["borderbasis".into(), "--input".into(), data("ex2_sequence.json"), "--order".into(), "lex".into()],
        vec!["borderbasis".into(), "--input".into(), data("ex2_sequence.json"), "--field".into(), "prime:9".into()],
        vec!["frobnicate".into()],
        vec!["bench".into(), "--ranks".into(), "0".into()],
        vec!["bench".into(), "--field".into(), "rational".into()],
    ];
    for args in cases {
        let refs: Vec<&str> = args.iter().map(|s| s.as_str()).collect();
        assert_eq!(hbb(&refs).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn output_file_and_stdin() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("res.json");
    let o = hbb(&["borderbasis", "--input", &data("ex2_sequence.json"), "--output", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let written = std::fs::read_to_string(&out).unwrap();

    let mut child = Command::new(env!("CARGO_BIN_EXE_hbb"))
        .args(["borderbasis", "--input", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    let input = std::fs::read(data("ex2_sequence.json")).unwrap();
    child.stdin.take().unwrap().write_all(&input).unwrap();
    let piped = child.wait_with_output().unwrap();
    assert_eq!(String::from_utf8(piped.stdout).unwrap(), written);

    let res = from_json::<ResultJson>(&written).unwrap().build().unwrap();
    let s = fixtures::ex2_sequence();
    assert_eq!(res, border_basis(&s, &MonomialOrder::deglex(2), BorderOptions::default()).unwrap());
}

#[test]
fn degrevlex_result_reduces_consistently() {
    let out = ok(&["borderbasis", "--input", &data("ex2_sequence.json"), "--order", "degrevlex"]);
    let res = from_json::<ResultJson>(&out).unwrap().build().unwrap();
    assert_eq!(res.order, MonomialOrder::degrevlex(2));
    let s = fixtures::ex2_sequence();
    let t = mult_matrices(&s, &res).unwrap();
    for k in &res.k {
        assert!(normal_form(&res, &t, k).unwrap().is_zero());
    }
}

#[test]
fn bench_csv_is_reproducible() {
    let run = |extra: &[&str]| {
        let out = ok(&[
            &["bench", "--csv", "--ranks", "5,12", "--nvars", "2,3", "--repetitions", "1", "--seed", "42"],
            extra,
        ]
        .concat());
        // Every column except the wall time.
        out.lines()
            .map(|l| l.split(',').enumerate().filter(|(i, _)| *i != 4).map(|(_, c)| c.to_string()).collect::<Vec<_>>())
            .collect::<Vec<_>>()
    };
    let seq = run(&[]);
    assert_eq!(seq[0], ["n", "r", "D", "s", "certified"]);
    assert_eq!(seq.len(), 5);
    assert!(seq[1..].iter().all(|row| row[4] == "true"));
    assert_eq!(seq, run(&["--parallel-trials"]));
    assert_eq!(seq, run(&[]));
}

#[test]
fn bench_json_rows() {
    let out = ok(&["bench", "--ranks", "1", "--nvars", "3", "--repetitions", "1"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v[0]["r"], 1);
    assert_eq!(v[0]["D"], 2);
    assert_eq!(v[0]["certified"], true);
}
