//! Exit codes and outputs of every subcommand.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const T3: &str = "cosh(tanh(u)*arcosh(2*cosh(u))) < exp(u*tanh(u))";
const RATIO: &str = "cosh(tanh(u)*arcosh(2*cosh(u)))/exp(u*tanh(u))";

fn hypercert(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hypercert")).args(args).output().unwrap()
}

fn code(args: &[&str]) -> i32 {
    hypercert(args).status.code().unwrap()
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

#[test]
fn verify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = path(dir.path(), "t3.cert");
    assert_eq!(code(&["verify", T3, "--var", "u=0.3:3", "--out", &out]), 0);
    assert_eq!(code(&["validate", &out]), 0);
    assert_eq!(code(&["verify", "u < u", "--var", "u=0:1", "--leaf-budget", "2000"]), 2);
    assert_eq!(code(&["verify", "ln(u) < u", "--var", "u=-1:1"]), 1);
    assert_eq!(code(&["verify", "x*y < x + y + 1", "--var", "x=0:1", "--var", "y=0:1"]), 0);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(code(&[]), 1);
    assert_eq!(code(&["frobnicate"]), 1);
    assert_eq!(code(&["verify", T3]), 1);
    assert_eq!(code(&["verify", T3, "--var", "u=3"]), 1);
    assert_eq!(code(&["verify", T3, "--var", "u=3:0.3"]), 1);
    assert_eq!(code(&["verify", "u <", "--var", "u=0:1"]), 1);
    assert_eq!(code(&["verify", "v < v + 1", "--var", "u=0:1"]), 1);
    assert_eq!(code(&["verify", T3, "--var", "u=0.3:3", "--precision", "1"]), 1);
    assert_eq!(code(&["verify", T3, "--var", "u=0.3:3", "--threads", "0"]), 1);
    assert_eq!(code(&["infimum", RATIO, "--var", "u=0.15:3", "--target-width", "-1"]), 1);
    assert_eq!(code(&["validate", "/nonexistent/file.cert"]), 1);
    assert_eq!(code(&["--help"]), 0);
}

#[test]
fn corpus_exit_codes() {
    assert_eq!(code(&["corpus", "L1S"]), 0);
    assert_eq!(code(&["corpus", "no-such-id"]), 1);
    let out = hypercert(&["corpus", "T3-full", "--leaf-budget", "10"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stdout).contains("not proved: compact"));
}

#[test]
fn corpus_writes_components_by_hash() {
    let dir = tempfile::tempdir().unwrap();
    let out = hypercert(&["corpus", "T3-full", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let composite = fs::read_to_string(dir.path().join("T3-full.cert")).unwrap();
    let mut components = 0;
    for entry in fs::read_dir(dir.path()).unwrap() {
        let p = entry.unwrap().path();
        let name = p.file_stem().unwrap().to_str().unwrap().to_string();
        assert_eq!(code(&["validate", p.to_str().unwrap()]), 0, "{name}");
        if name.len() == 64 {
            assert!(composite.contains(&name));
            components += 1;
        }
    }
    assert_eq!(components, 3);
}

#[test]
fn infimum_and_scan() {
    let dir = tempfile::tempdir().unwrap();
    let result = path(dir.path(), "inf.cert");
    let out = hypercert(&["infimum", RATIO, "--var", "u=0.15:3", "--out", &result]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("inf in [0.9723"));
    assert_eq!(code(&["validate", &result]), 0);

    let csv = path(dir.path(), "f.csv");
    assert_eq!(code(&["scan", RATIO, "--var", "u=0:6", "--points", "601", "--out", &csv]), 0);
    let text = fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("u,lo,hi"));
    let row: Vec<f64> = lines.next().unwrap().split(',').map(|x| x.parse().unwrap()).collect();
    assert!(row[0] == 0.0 && row[1] <= 1.0 && 1.0 <= row[2]);
    assert_eq!(text.lines().count(), 602);

    let out = hypercert(&["scan", "ln(u)", "--var", "u=-1:1", "--points", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("-1,invalid,invalid"));
    assert_eq!(code(&["scan", RATIO, "--var", "u=0:6", "--points", "1"]), 1);
}

#[test]
fn validate_rejects_tampering_with_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let good = path(dir.path(), "good.cert");
    assert_eq!(code(&["verify", T3, "--var", "u=0.3:3", "--out", &good]), 0);
    let text = fs::read_to_string(&good).unwrap();

    // Shift one recorded bound to another valid hex scalar.
    let at = text.find("\"lhs_upper\": \"0x1.").unwrap() + "\"lhs_upper\": \"0x".len();
    let mut forged = text.clone();
    forged.replace_range(at..at + 1, "0");
    let bad = path(dir.path(), "bad.cert");
    fs::write(&bad, forged).unwrap();
    assert_eq!(code(&["validate", &bad]), 2);

    fs::write(&bad, text.replace("u*tanh(u)", "u*tanh(u)*2")).unwrap();
    assert_eq!(code(&["validate", &bad]), 2);
    fs::write(&bad, "{}").unwrap();
    assert_eq!(code(&["validate", &bad]), 2);

    let open = path(dir.path(), "open.cert");
    assert_eq!(code(&["verify", "u < u", "--var", "u=0:1", "--leaf-budget", "100", "--out", &open]), 2);
    assert_eq!(code(&["validate", &open]), 2);
}

#[test]
fn outputs_do_not_depend_on_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    let mut files = Vec::new();
    for threads in ["1", "3", "8"] {
        let cert = path(dir.path(), &format!("t{threads}.cert"));
        let inf = path(dir.path(), &format!("i{threads}.cert"));
        let csv = path(dir.path(), &format!("s{threads}.csv"));
        let x = "x=0.5:2";
        let y = "y=0.5:2";
        let l1 = "tanh(x)*tanh(y) < tanh(x*tanh(y))";
        assert_eq!(code(&["verify", l1, "--var", x, "--var", y, "--threads", threads, "--out", &cert]), 0);
        assert_eq!(code(&["infimum", RATIO, "--var", "u=0.15:3", "--threads", threads, "--out", &inf]), 0);
        assert_eq!(code(&["scan", RATIO, "--var", "u=0:6", "--threads", threads, "--out", &csv]), 0);
        let corpus = hypercert(&["corpus", "L2", "--threads", threads, "--seed", "9"]);
        files.push([fs::read(cert).unwrap(), fs::read(inf).unwrap(), fs::read(csv).unwrap(), corpus.stdout]);
    }
    assert!(files.iter().all(|f| f == &files[0]));
}
