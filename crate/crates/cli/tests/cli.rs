use std::path::PathBuf;
use std::process::{Command, Output};

fn sigrho(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sigrho")).args(args).output().expect("run sigrho")
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("sigrho-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

const IM_ALPHA: &str = "root(3, poly x^3-x^2-1 in [1.4,1.5])";

#[test]
fn star_count() {
    let star = scratch("star5.tree", "(compose (compose (compose (compose (leaf) (leaf)) (leaf)) (leaf)) (leaf))");
    let o = sigrho(&["count", "--class", "tree", "--script", star.to_str().unwrap(), "--sigma", "{1}", "--rho", "{1}", "--check"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "4");
}

#[test]
fn path_script_and_edge_list_counts() {
    // P4 as a pathwidth-1 script: each step hangs a new vertex off the last one
    let script = scratch("p4.path", "pathwidth 1\nkeep=new edges=1\nkeep=new edges=1\nkeep=new edges=1\ncomplete edges=0\n");
    let o = sigrho(&["count", "--problem", "induced-matching", "--class", "pw1", "--script", script.to_str().unwrap(), "--check"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o).trim(), "4");
    let c4 = scratch("c4.edges", "4 4\n0 1\n1 2\n2 3\n3 0\n");
    let o = sigrho(&["count", "--problem", "minimal-dominating", "--graph", c4.to_str().unwrap()]);
    assert_eq!(stdout(&o).trim(), "6");
}

#[test]
fn bound_then_verify_and_tamper() {
    let out = std::env::temp_dir().join(format!("sigrho-cli-im-{}.cert", std::process::id()));
    let o = sigrho(&["bound", "--sigma", "{1}", "--rho", "N", "--mode", "all", "--class", "pw1", "--alpha", IM_ALPHA, "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(sigrho(&["verify", out.to_str().unwrap()]).status.code(), Some(0));

    let dropped: String = text.lines().filter(|l| !l.starts_with("-a^2 + a + 1")).map(|l| format!("{l}\n")).collect();
    assert_ne!(dropped, text);
    let bad = scratch("dropped.cert", &dropped);
    let o = sigrho(&["verify", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("refuted"));

    let rehashed = text.replace("sha256 ", "sha256 00");
    let bad = scratch("rehashed.cert", &rehashed);
    assert_eq!(sigrho(&["verify", bad.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn certificates_are_deterministic() {
    let args = ["bound", "--problem", "maximal-induced-matching", "--class", "pw1", "--alpha", "nthroot(13, 9)"];
    let a = sigrho(&args);
    let b = sigrho(&[&args[..], &["--workers", "1"]].concat());
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn witnesses_round_trip() {
    let o = sigrho(&["bound", "--problem", "perfect-code", "--class", "forest", "--alpha", "nthroot(2, 2)", "--witnesses"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("WITNESSES"));
    let cert = scratch("pc.cert", &stdout(&o));
    assert_eq!(sigrho(&["verify", cert.to_str().unwrap()]).status.code(), Some(0));
}

#[test]
fn exit_codes() {
    // resource limit
    let o = sigrho(&["bound", "--problem", "maximal-induced-matching", "--class", "pw1", "--alpha", "nthroot(13, 9)", "--max-rounds", "2"]);
    assert_eq!(o.status.code(), Some(2));
    // α below the growth rate cannot close
    let o = sigrho(&["bound", "--problem", "induced-matching", "--class", "pw1", "--alpha", "nthroot(2, 2)", "--max-x", "60"]);
    assert_eq!(o.status.code(), Some(2));
    // input errors
    assert_eq!(sigrho(&["bound", "--sigma", "{1", "--rho", "N", "--alpha", "2"]).status.code(), Some(3));
    assert_eq!(sigrho(&["bound", "--problem", "induced-matching", "--alpha", "root(2, poly x^2-2 in [2,3])"]).status.code(), Some(3));
    let garbage = scratch("garbage.cert", "not a certificate\n");
    assert_eq!(sigrho(&["verify", garbage.to_str().unwrap()]).status.code(), Some(3));
    assert_eq!(sigrho(&["count", "--problem", "maximal-induced-matching", "--class", "tree", "--script", "/nonexistent"]).status.code(), Some(3));
}

#[test]
fn validate_and_lower() {
    let o = sigrho(&["validate", "--problem", "perfect-code", "--class", "forest", "--samples", "50"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("all agree"));
    let o = sigrho(&["lower", "--problem", "induced-matching", "--class", "pw1", "--depth", "3"]);
    let v: f64 = stdout(&o).lines().next().unwrap().parse().unwrap();
    assert!((1.46..1.4656).contains(&v));
}

#[test]
fn quick_catalog_passes() {
    let o = sigrho(&["catalog", "--quick"]);
    let table = stdout(&o);
    assert!(o.status.success(), "{table}");
    assert_eq!(table.lines().filter(|l| l.starts_with("PASS")).count(), 9);
}
