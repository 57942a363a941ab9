use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wittvec")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn compute_golden() {
    let o = run(&["compute", "ghost (1,1)", "--p", "2", "--ring", "Z"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "(1, 3)");
    let o = run(&["compute", "add (1,0) (1,0)", "--p", "2", "--ring", "Z"]);
    assert_eq!(stdout(&o).trim(), "(2, -1)");
    let o = run(&["compute", "teich 3 2", "--p", "2", "--ring", "Z"]);
    assert_eq!(stdout(&o).trim(), "(3, 0, 0)");
}

#[test]
fn parse_errors_exit_two_with_position() {
    let o = run(&["compute", "add (1,0) (1,x)", "--ring", "Z"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("at 13"));
    assert_eq!(run(&["compute", "ghost (1,1)", "--p", "6"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "nosuch"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["arrow", "--b", "0"]).status.code(), Some(2));
}

#[test]
fn ring_from_file() {
    let dir = std::env::temp_dir().join(format!("wittvec-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("ring.txt");
    std::fs::write(&path, "# ring\nZ/2^4\n").unwrap();
    let o = run(&["compute", "add (1,0) (1,0)", "--ring", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "(2, 15)");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn verify_json_is_byte_stable() {
    let a = run(&["verify", "ghost", "--p", "3", "--seed", "7", "--json"]);
    let b = run(&["verify", "ghost", "--p", "3", "--seed", "7", "--json"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["schema"], "wittvec/1");
    assert_eq!(v["passed"], true);
    let cases = v["suites"][0]["cases"].as_array().unwrap();
    let keys: Vec<&str> = cases.iter().map(|c| c["key"].as_str().unwrap()).collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
}

#[test]
fn verify_all_passes() {
    for p in ["2", "3"] {
        let o = run(&["verify", "all", "--p", p]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    }
}

#[test]
fn arrow_golden() {
    let o = run(&["arrow", "--k", "2", "--b", "1/2", "--p", "2", "--depth", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("p^(-1/2) (exact"), "{}", stdout(&o));
}

#[test]
fn perfect_verdicts() {
    let o = run(&["perfect", "--ring", "Z", "--p", "3"]);
    assert!(stdout(&o).contains("No"));
    let o = run(&["perfect", "--ring", "tower", "--p", "2", "--depth", "1", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["verdict"], "YesUpToLevel(1)");
}

#[test]
fn tilt_and_kernel() {
    let o = run(&["tilt", "--ring", "Z[zeta_32]/2^4", "--depth", "5", "--p", "2"]);
    assert!(stdout(&o).contains("|eps - 1| = p^-2"), "{}", stdout(&o));
    let o = run(&["kernel", "4", "--j", "2", "--ring", "Q", "--p", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("equal = true"));
}

#[test]
fn artin_split_and_inert() {
    let o = run(&["artin", "i", "--p", "5", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["observed"], "Bounded");
    let o = run(&["artin", "i", "--p", "3", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["observed"], "Unbounded");
    assert_eq!(run(&["artin", "i", "--p", "7"]).status.code(), Some(2));
}
