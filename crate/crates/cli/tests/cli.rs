use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn hkm(args: &str) -> Output {
    hkm_env(args, &[])
}

fn hkm_env(args: &str, env: &[(&str, &str)]) -> Output {
    let mut c = Command::new(env!("CARGO_BIN_EXE_hkm"));
    c.args(args.split_whitespace());
    c.env_remove("FORGE_THREADS");
    for (k, v) in env {
        c.env(k, v);
    }
    c.output().expect("hkm runs")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{}: {}", e, String::from_utf8_lossy(&o.stdout)))
}

fn schema(name: &str) -> jsonschema::JSONSchema {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../schemas").join(format!("{}.json", name));
    let s: Value = serde_json::from_str(&std::fs::read_to_string(&p).unwrap()).unwrap();
    jsonschema::JSONSchema::compile(&s).unwrap()
}

fn assert_valid(name: &str, v: &Value) {
    let s = schema(name);
    let msgs: Vec<String> = match s.validate(v) {
        Ok(()) => return,
        Err(errs) => errs.map(|e| format!("{} at {}", e, e.instance_path)).collect(),
    };
    panic!("{} output does not match its schema: {:?}", name, msgs);
}

#[test]
fn basis_reproduces_f1_at_twelve() {
    let o = hkm("basis --disc 12 --m 1 --prec 20");
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_valid("basis", &v);
    let got: Vec<(i64, String)> = v["result"]["coefficients"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| (c["n"].as_i64().unwrap(), c["a"].as_str().unwrap().to_string()))
        .collect();
    let want = [(-1, "1"), (0, "1"), (2, "2"), (3, "1"), (6, "-2"), (8, "-2"), (12, "4"), (14, "4"), (15, "-1"), (18, "-6")];
    assert_eq!(got, want.iter().map(|(n, a)| (*n, a.to_string())).collect::<Vec<_>>());
    assert_eq!(v["metadata"]["parameters"]["prec"], 20);
}

#[test]
fn existence_flags_at_eight() {
    let v = json(&hkm("existence --disc 8 --max 8"));
    assert_valid("existence", &v);
    let flags: Vec<bool> = v["result"]["forms"].as_array().unwrap().iter().map(|f| f["exists"].as_bool().unwrap()).collect();
    assert_eq!(flags, [true, true, false, true, false, true, true, true]);
    assert_eq!(v["result"]["residues"], serde_json::json!([0, 1, 2, 4, 6, 7]));
    let csv = String::from_utf8(hkm("existence --disc 8 --max 3 --format csv").stdout).unwrap();
    assert_eq!(csv, "m,exists\n1,true\n2,true\n3,false\n");
}

#[test]
fn missing_form_is_a_structured_error() {
    let o = hkm("basis --disc 12 --m 2");
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    assert_valid("error", &v);
    assert_eq!(v["error"]["code"], "does_not_exist");
    assert_eq!(v["error"]["message"], "f_2 does not exist for N=12");
}

#[test]
fn config_errors_exit_with_two() {
    for (args, env) in [
        ("basis --disc 9 --m 1", None),
        ("basis --disc 12 --m 0", None),
        ("sturm --disc 12 --format csv", None),
        ("asympt --disc 13 --m 1", None),
        ("asympt --disc 12 --m 12 --from 5 --to 2", None),
        ("borcherds --disc 12 --grade-bound -1", None),
        ("basis --disc 12", None),
        ("frobnicate", None),
        ("dim --disc 12 --weight 2", Some(("FORGE_THREADS", "zero"))),
    ] {
        let o = hkm_env(args, env.as_slice());
        assert_eq!(o.status.code(), Some(2), "{}", args);
        let v = json(&o);
        assert_valid("error", &v);
        assert_eq!(v["error"]["code"], "config", "{}", args);
    }
}

#[test]
fn outputs_match_their_schemas() {
    for (name, args) in [
        ("basis", "basis --disc 8 --m 9 --prec 30"),
        ("sturm", "sturm --disc 12"),
        ("eisenstein", "eisenstein --disc 12"),
        ("dim", "dim --disc 12 --weight 24"),
        ("weilrep", "weilrep --disc 21"),
        ("weyl", "weyl --disc 8"),
        ("weyl", "weyl --disc 12 --m 4"),
        ("borcherds", "borcherds --disc 8"),
        ("borcherds", "borcherds --disc 12 --m 4 --grade-bound 3"),
        ("multtable", "multtable --disc 12"),
        ("asympt", "asympt --disc 8 --m 8 --to 40 --positivity"),
    ] {
        let o = hkm(args);
        assert_eq!(o.status.code(), Some(0), "{}: {}", args, String::from_utf8_lossy(&o.stdout));
        assert_valid(name, &json(&o));
    }
}

#[test]
fn defaults_are_recorded() {
    let v = json(&hkm("borcherds --disc 12"));
    let meta = &v["metadata"];
    assert_eq!(meta["parameters"]["grade_bound"], "6");
    assert_eq!(meta["parameters"]["prec"], 200);
    assert_eq!(meta["defaulted"], serde_json::json!(["m", "prec", "grade_bound", "format"]));
    assert_eq!(v["result"]["antisymmetry"]["passed"], true);
    assert_eq!(v["result"]["sum_side"]["passed"], true);
    assert_eq!(v["result"]["weyl_vector"]["display"], "1/4 + (1/12)√3");
    let v = json(&hkm("multtable --disc 8"));
    assert_eq!(v["metadata"]["parameters"]["grade_bound"], "7");
}

#[test]
fn output_is_deterministic() {
    let a = hkm("borcherds --disc 8").stdout;
    let b = hkm_env("borcherds --disc 8", &[("FORGE_THREADS", "1")]).stdout;
    let c = hkm_env("borcherds --disc 8", &[("FORGE_THREADS", "3")]).stdout;
    assert_eq!(a, b);
    assert_eq!(a, c);
    let p = std::env::temp_dir().join(format!("hkm-cli-test-{}.csv", std::process::id()));
    let o = hkm(&format!("asympt --disc 12 --m 12 --to 20 --format csv --output {}", p.display()));
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let file = std::fs::read_to_string(&p).unwrap();
    std::fs::remove_file(&p).ok();
    assert_eq!(file.as_bytes(), hkm("asympt --disc 12 --m 12 --to 20 --format csv").stdout.as_slice());
    let mut lines = file.lines();
    assert_eq!(lines.next(), Some("n,exact,main,relerr,bound"));
    let row18 = file.lines().find(|l| l.starts_with("18,")).unwrap();
    assert!(row18.starts_with("18,177246,177366.1"), "{}", row18);
}

#[test]
fn plain_format_lists_scalars() {
    let s = String::from_utf8(hkm("dim --disc 12 --weight 24 --format plain").stdout).unwrap();
    assert!(s.contains("result.dim_modular: 48\n"));
    assert!(s.contains("metadata.command: dim\n"));
}
