mod common;

use common::{corrupted_twist_config, cotwist, dims, json_of, trivial_h_config};

#[test]
fn spectrum_det_two() {
    let out = cotwist(&["spectrum", "--p", "3", "--gamma", "1,0,0,2"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = json_of(&out);
    assert_eq!(dims(&r, "dims_direct"), vec![vec![1; 9], vec![3]]);
    assert_eq!(dims(&r, "dims_predicted"), vec![vec![1; 9], vec![3]]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("3^1"));
}

#[test]
fn verify_det_one() {
    let out = cotwist(&["verify", "--p", "3", "--gamma", "1,1,0,1"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json_of(&out);
    assert_eq!(r["global_checks"]["minimality_rank"], true);
    assert!(r["cosets"].as_array().unwrap().is_empty());
}

#[test]
fn example_matches_spectrum() {
    let a = cotwist(&["example", "--p", "3", "--gamma", "1,1,0,1"]);
    let b = cotwist(&["spectrum", "--p", "3", "--gamma", "1,1,0,1"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(dims(&json_of(&a), "dims_invariant"), vec![vec![1; 9]; 3]);
}

#[test]
fn corrupted_twist_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = corrupted_twist_config(dir.path());
    for sub in ["verify", "spectrum"] {
        let out = cotwist(&[sub, "--config", cfg.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(1));
        let r = json_of(&out);
        assert_eq!(r["global_checks"]["twist_axioms"], false);
        assert!(r["details"]["failed_axioms"].as_array().unwrap().contains(&"two_cocycle".into()));
    }
}

#[test]
fn trivial_subgroup_gives_ones() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = trivial_h_config(dir.path(), 3);
    let out = cotwist(&["spectrum", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(dims(&json_of(&out), "dims_direct"), vec![vec![1]; 6]);
}

#[test]
fn output_is_deterministic() {
    let args = ["spectrum", "--p", "3", "--gamma", "1,0,0,2", "--seed", "5"];
    let a = cotwist(&args);
    let b = cotwist(&[&args[..], &["--jobs", "1"]].concat());
    assert_eq!(a.stdout, b.stdout);
    let c = cotwist(&["spectrum", "--p", "3", "--gamma", "1,0,0,2", "--seed", "6"]);
    assert_ne!(a.stdout, c.stdout);
    assert_eq!(dims(&json_of(&a), "dims_direct"), dims(&json_of(&c), "dims_direct"));
}

#[test]
fn seed_from_environment() {
    let run = |env: Option<&str>, extra: &[&str]| {
        let mut cmd = std::process::Command::new(env!("CARGO_BIN_EXE_cotwist"));
        cmd.args(["verify", "--p", "3"]).args(extra).env_remove("COTWIST_SEED");
        if let Some(v) = env {
            cmd.env("COTWIST_SEED", v);
        }
        json_of(&cmd.output().unwrap())["seed"].as_u64().unwrap()
    };
    assert_eq!(run(None, &[]), 0);
    assert_eq!(run(Some("9"), &[]), 9);
    assert_eq!(run(Some("9"), &["--seed", "4"]), 4);
}

#[test]
fn out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let out = cotwist(&["verify", "--p", "5", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    let r: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(r["details"]["h_order"], 25);
    assert!(!String::from_utf8_lossy(&out.stdout).trim_start().starts_with('{'));
}

#[test]
fn bad_input_exits_two() {
    for args in [
        vec!["spectrum", "--p", "4"],
        vec!["spectrum", "--p", "3", "--gamma", "1,0,0"],
        vec!["spectrum", "--p", "3", "--gamma", "1,1,1,1"],
        vec!["spectrum", "--p", "3", "--tol", "2"],
        vec!["spectrum"],
        vec!["spectrum", "--config", "/nonexistent/cfg.json"],
        vec!["example", "--p", "3", "--n", "2"],
    ] {
        let out = cotwist(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}
