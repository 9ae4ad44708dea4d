use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pathfactor"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn generate(dir: &TempDir, name: &str, family: &str, params: &str) -> String {
    let path = dir.path().join(name);
    let p = path.to_str().unwrap();
    let out = run(&["generate", "--family", family, "--params", params, "-o", p]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    p.to_string()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn generate_writes_graph_and_roles() {
    let out = run(&["generate", "--family", "k1_sk2", "--params", "2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let g = pathfactor::io::parse_graph(&text).unwrap();
    assert_eq!((g.order(), g.size()), (5, 6));
    let roles = pathfactor::io::parse_roles(&text).unwrap();
    assert_eq!(roles[0], ("cut".to_string(), 0));
    assert_eq!(roles.len(), 5);
}

#[test]
fn generate_is_deterministic_per_seed() {
    let a = run(&["generate", "--family", "a2_prime", "--params", "2,2,2", "--seed", "9"]);
    let b = run(&["generate", "--family", "a2_prime", "--params", "2,2,2", "--seed", "9"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn generate_rejects_bad_input() {
    assert!(!run(&["generate", "--family", "cn", "--params", "5", "--seed", "1"]).status.success());
    assert!(!run(&["generate", "--family", "nosuch", "--params", "5"]).status.success());
    assert!(!run(&["generate", "--family", "a3_prime", "--params", "1"]).status.success());
}

#[test]
fn barrier_of_a_star() {
    let dir = TempDir::new().unwrap();
    let star = write(&dir, "star.txt", "p 4 3\n0 1\n0 2\n0 3\n");
    let out = run(&["barrier", &star]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "S: 0\ncomponents: 1 1 1\ndeficiency: 2\n");
}

#[test]
fn classify_reports_family_and_crush_set() {
    let dir = TempDir::new().unwrap();
    let g = generate(&dir, "a1.txt", "a1", "2,2,2");
    let out = run(&["classify", &g, "--k", "4"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("tag: G1_MIN_EQ2"), "{text}");
    assert!(text.contains("params: 2 2 2"), "{text}");
    assert!(text.contains("role u1 "), "{text}");
    assert!(text.contains("crush: "), "{text}");

    let c9 = generate(&dir, "c9.txt", "cn", "9");
    let text = stdout(&run(&["classify", &c9, "--k", "4"]));
    assert!(text.contains("tag: HAS_FACTOR"), "{text}");
    assert!(!text.contains("crush"));
}

#[test]
fn build_factor_exit_codes() {
    let dir = TempDir::new().unwrap();
    let c7 = generate(&dir, "c7.txt", "cn", "7");
    let out = run(&["build-factor", &c7, "--k", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("FACTOR"));
    let path: Vec<usize> = lines.next().unwrap().split(' ').map(|s| s.parse().unwrap()).collect();
    assert_eq!(path.len(), 7);

    let w = generate(&dir, "w.txt", "k1_sk2", "3");
    let trace = dir.path().join("trace.json");
    let out = run(&["build-factor", &w, "--k", "3", "--trace", trace.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(10));
    assert_eq!(stdout(&out), "CERTIFICATE\nX: 0 1 3 5\nlhs: 3/1\nrhs: 8/3\n");
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&trace).unwrap()).unwrap();
    assert_eq!(json["k"], 3);
    assert_eq!(json["route"], "Certificate");
}

#[test]
fn check_condition_presets_and_weights() {
    let dir = TempDir::new().unwrap();
    let star = write(&dir, "star.txt", "p 4 3\n0 1\n0 2\n0 3\n");
    let out = run(&["check-condition", &star, "--preset", "thm13"]);
    assert_eq!(out.status.code(), Some(10));
    let text = stdout(&out);
    assert!(text.contains("verdict: VIOLATED"));
    assert!(text.contains("subsets: 16"));
    assert!(text.contains("X: 0\nlhs: 3/1\nrhs: 2/3\n"), "{text}");

    let k7 = generate(&dir, "k7.txt", "kn", "7");
    let out = run(&[
        "check-condition", &k7, "--weights", "1:1,3:1/3,5:1/3", "--slope", "2/3", "--offset", "0",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("verdict: HOLDS_EXHAUSTIVE"));

    let c7 = generate(&dir, "c7.txt", "cn", "7");
    let out = run(&["check-condition", &c7, "--preset", "thm14", "--mode", "sampled:200:1"]);
    assert_eq!(out.status.code(), Some(10));
    assert!(stdout(&out).contains("verdict: VIOLATED"));
}

#[test]
fn malformed_input_is_an_error() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.txt", "p 3 1\n2 1\n");
    let out = run(&["barrier", &bad]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
    assert!(!run(&["build-factor", &bad, "--k", "5"]).status.success());
    assert!(!run(&["barrier", Path::new("/nonexistent/g.txt").to_str().unwrap()]).status.success());
}
