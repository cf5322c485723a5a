#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use cotwist::correspondence::{Construction, Instance};
use cotwist::groups::{symmetric_group, Subgroup};
use cotwist::scalars::CycVec;
use cotwist::twist::{twist_file_string, TwistCandidate};
use serde_json::{json, Value};

pub fn cotwist(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cotwist"))
        .args(args)
        .env_remove("COTWIST_SEED")
        .output()
        .expect("spawn cotwist")
}

pub fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

pub fn dims(report: &Value, key: &str) -> Vec<Vec<u64>> {
    report["cosets"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c[key].as_array().unwrap().iter().map(|d| d.as_u64().unwrap()).collect())
        .collect()
}

fn write_table(dir: &Path, group: &str, subgroup: &[usize], twist: &str) -> PathBuf {
    std::fs::write(dir.join("group.txt"), group).unwrap();
    std::fs::write(dir.join("twist.txt"), twist).unwrap();
    let cfg = json!({
        "construction": {
            "type": "table",
            "group_file": "group.txt",
            "subgroup": subgroup,
            "twist_file": "twist.txt",
        },
    });
    let path = dir.join("config.json");
    std::fs::write(&path, cfg.to_string()).unwrap();
    path
}

/// (Z/3)² with its symplectic twist, one coefficient doubled.
pub fn corrupted_twist_config(dir: &Path) -> PathBuf {
    let inst = Instance::build(&Construction::Symplectic {
        p: 3,
        n: 1,
        gamma_generators: Vec::new(),
    })
    .unwrap();
    let j = inst.twist.coefficients();
    let mut vals = j.to_cyclotomics();
    vals[13] = &vals[13] + &vals[13];
    let bad = CycVec::from_cyclotomics(j.order(), &vals).unwrap();
    write_table(
        dir,
        &inst.group.to_cayley_string(),
        inst.h.elements(),
        &twist_file_string(&bad, inst.h.len()),
    )
}

/// S_n with H = {e} and J = 1⊗1.
pub fn trivial_h_config(dir: &Path, n: usize) -> PathBuf {
    let g = symmetric_group(n).unwrap();
    let h = Subgroup::trivial(g.clone());
    let t = TwistCandidate::trivial(h.clone()).unwrap();
    write_table(dir, &g.to_cayley_string(), h.elements(), &twist_file_string(t.coefficients(), 1))
}
