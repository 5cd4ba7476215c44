use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

fn brank(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_brank")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "bad JSON ({e}): {}\nstderr: {}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn write(dir: &TempDir, name: &str, value: &Value) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, value.to_string()).unwrap();
    path.to_str().unwrap().to_string()
}

fn matrix(rows: &[[i64; 2]; 2]) -> Value {
    let entries: Vec<Vec<String>> = rows.iter().map(|r| r.iter().map(i64::to_string).collect()).collect();
    json!({ "rows": 2, "cols": 2, "entries": entries })
}

/// `[[x0, -x1], [x2, x3]]`, whose determinant is perm_2.
fn perm2_representation() -> Value {
    json!({
        "n": 2,
        "num_vars": 4,
        "constant": matrix(&[[0, 0], [0, 0]]),
        "coefficients": [
            matrix(&[[1, 0], [0, 0]]),
            matrix(&[[0, -1], [0, 0]]),
            matrix(&[[0, 0], [1, 0]]),
            matrix(&[[0, 0], [0, 1]]),
        ],
    })
}

fn xy() -> Value {
    json!({ "num_vars": 2, "terms": [{ "exp": [1, 1], "num": "1", "den": "1" }] })
}

#[test]
fn hessian_reports() {
    let out = brank(&["hessian", "-d", "3"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["rank"], 9);
    assert_eq!(v["n_minus_bound"], 5);
    assert_eq!(v["signature"], json!([4, 5, 0]));

    let v = stdout_json(&brank(&["hessian", "-d", "2"]));
    assert_eq!(v["n_minus_bound"], 2);
    assert!(v["block_analysis"].is_null());

    assert_eq!(code(&brank(&["hessian", "-d", "1"])), 1);
}

#[test]
fn output_is_deterministic() {
    let a = brank(&["hessian", "-d", "4"]);
    let b = brank(&["hessian", "-d", "4"]);
    assert_eq!(a.stdout, b.stdout);
    let a = brank(&["--seed", "9", "mv-det", "--random", "3"]);
    let b = brank(&["mv-det", "--random", "3", "--seed", "9"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let v = stdout_json(&a);
    assert_eq!(v["top_matches_det"], true);
    assert_eq!(v["seed"], 9);
    let c = brank(&["mv-det", "--random", "3", "--seed", "10"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn build_systems() {
    let dir = TempDir::new().unwrap();
    let out = brank(&["build", "--kind", "z2k", "-d", "3", "-k", "1"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["eqs"].as_array().unwrap().len(), 6);
    assert_eq!(v["pair"], true);
    assert_eq!(v["alpha"], "-1/2");

    let poly = write(&dir, "xy.json", &xy());
    let export = dir.path().join("cs.json");
    let out = brank(&["build", "--kind", "xp", "--poly", &poly, "--export-cs", export.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["eqs"].as_array().unwrap().len(), 3);
    let exported: Value = serde_json::from_str(&std::fs::read_to_string(&export).unwrap()).unwrap();
    assert_eq!(exported, v);

    assert_eq!(code(&brank(&["build", "--kind", "z2k", "-d", "2", "-k", "1"])), 1);
    assert_eq!(code(&brank(&["build", "--kind", "xp"])), 1);
}

#[test]
fn decompose_pipeline() {
    let dir = TempDir::new().unwrap();
    let q = write(&dir, "q.json", &perm2_representation());
    let out = brank(&["decompose", "--q", &q, "--x0", "sigma", "-k", "1"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert!(v["num_pairs"].as_u64().unwrap() <= 2);
    assert_eq!(v["verified"], true);
    assert_eq!(v["decomposition"]["pairs"].as_array().unwrap().len() as u64, v["num_pairs"].as_u64().unwrap());

    let same = brank(&["decompose", "--q", &q, "--x0", "1,1,1,-1", "-k", "1"]);
    assert_eq!(same.stdout, out.stdout);

    // perm_2(I) = 1, so the identity is not a zero.
    assert_eq!(code(&brank(&["decompose", "--q", &q, "--x0", "1,0,0,1", "-k", "1"])), 1);
    assert_eq!(code(&brank(&["decompose", "--q", &q, "--x0", "1,1", "-k", "1"])), 1);

    let diag = json!({
        "n": 2,
        "num_vars": 2,
        "constant": matrix(&[[0, 0], [0, 0]]),
        "coefficients": [matrix(&[[1, 0], [0, 0]]), matrix(&[[0, 0], [0, 1]])],
    });
    let q = write(&dir, "diag.json", &diag);
    let dec_path = dir.path().join("dec.json");
    let out = brank(&["decompose", "--q", &q, "--x0", "0,0", "-k", "1", "--decomposition", dec_path.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(stdout_json(&out)["num_pairs"], 1);
    let dec: Value = serde_json::from_str(&std::fs::read_to_string(dec_path).unwrap()).unwrap();
    assert_eq!(dec["pairs"].as_array().unwrap().len(), 1);
}

#[test]
fn brank_intervals() {
    let dir = TempDir::new().unwrap();
    let poly = write(&dir, "xy.json", &xy());
    let v = stdout_json(&brank(&["brank-interval", "--poly", &poly]));
    assert_eq!(v["interval"]["lower"], 1);
    assert_eq!(v["interval"]["upper"], 1);

    let v = stdout_json(&brank(&["brank-interval", "--perm", "2", "-k", "1"]));
    assert_eq!(v["interval"]["lower"], 2);
    assert_eq!(v["interval"]["upper"], 2);

    assert_eq!(code(&brank(&["brank-interval", "--perm", "2", "-k", "1", "--budget", "2"])), 1);
    assert_eq!(code(&brank(&["brank-interval", "--perm", "3", "-k", "2"])), 1);
}

fn certify(dir: &TempDir, input: &Value, r: &str) -> Output {
    let path = write(dir, "vertices.json", input);
    brank(&["certify", "--vertices", &path, "-r", r])
}

#[test]
fn certify_exit_codes() {
    let dir = TempDir::new().unwrap();
    let identity = json!([[[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]]);
    let out = certify(&dir, &identity, "2");
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["accepted"], true);
    assert_eq!(v["conclusion"], "minrank > 2");
    assert!(v["assumption"].as_str().unwrap().contains("convex hull"));

    let singular = json!({ "vertices": [[[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 0.0]]] });
    assert_eq!(code(&certify(&dir, &singular, "1")), 0);
    let out = certify(&dir, &singular, "2");
    assert_eq!(code(&out), 2);
    assert_eq!(stdout_json(&out)["rejection"]["vertex"], 0);

    let path = dir.path().join("broken.json");
    std::fs::write(&path, "{ not json").unwrap();
    assert_eq!(code(&brank(&["certify", "--vertices", path.to_str().unwrap(), "-r", "1"])), 1);
    assert_eq!(code(&certify(&dir, &identity, "3")), 1);
}

#[test]
fn certify_pairs() {
    let dir = TempDir::new().unwrap();
    let mut pairs = Vec::new();
    for a in [0.0, 1.0] {
        for c in [0.0, 0.5] {
            pairs.push(json!([[[a, c], [c, a]], [[a, c - 0.5], [c - 0.5, a]]]));
        }
    }
    let input = json!({ "polynomial": xy(), "pairs": pairs });
    let out = certify(&dir, &input, "1");
    assert_eq!(code(&out), 2);
    let v = stdout_json(&out);
    assert_eq!(v["accepted"], false);
    assert!(v["residuals"].as_array().unwrap().iter().all(|r| r.as_f64().unwrap() < 1e-12));

    let square = json!({ "num_vars": 1, "terms": [{ "exp": [2], "num": "1", "den": "1" }] });
    let input = json!({
        "polynomial": square,
        "pairs": [[[[1.0]], [[0.0]]], [[[2.0]], [[1.0]]]],
        "duals": [{ "Z": [[0.0, 0.0], [0.0, 1.0]], "z": 1.0, "l": 2 }, { "Z": [[0.0, 0.0], [0.0, 0.0]], "z": 1.0, "l": 2 }],
    });
    let out = certify(&dir, &input, "0");
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(stdout_json(&out)["method"], "dual certificates");
}

#[test]
fn bounds_and_output_file() {
    let dir = TempDir::new().unwrap();
    let out_path = dir.path().join("bounds.json");
    let out =
        brank(&["bounds", "-k", "2", "--vars", "16", "--brank", "100", "-n", "4", "-o", out_path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(Path::new(&out_path)).unwrap()).unwrap();
    assert_eq!(v["generic_brank_floor"], "32/3");
    assert_eq!(v["dc_bound_from_brank"], "-7");
    assert_eq!(v["dc_pipeline_pair_bound"], "144");
    assert_eq!(v["p_pair_bound_by_r"]["0"], "6");
    assert_eq!(code(&brank(&["bounds", "-k", "0", "--vars", "4"])), 1);
}

#[test]
fn usage_errors() {
    assert_eq!(code(&brank(&[])), 1);
    assert_eq!(code(&brank(&["frobnicate"])), 1);
    assert_eq!(code(&brank(&["--help"])), 0);
    assert_eq!(code(&brank(&["certify", "--help"])), 0);
}
