use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn khtree(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_khtree"))
        .args(args)
        .env_remove("KHTREE_INPUT")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json output")
}

fn scratch_dir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("khtree-cli-{name}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn figure_eight_trees() {
    let out = khtree(&["trees", "--input", "figure8"]);
    assert!(out.status.success());
    let rows = json(&out);
    let words: Vec<&str> = rows.as_array().unwrap().iter().map(|r| r["word"].as_str().unwrap()).collect();
    assert_eq!(words, ["LLdd", "LdDd", "ℓDDd", "ℓLdD", "ℓℓDD"]);
}

#[test]
fn figure_eight_jones() {
    let out = khtree(&["jones", "-i", "figure8", "--format", "table"]);
    assert_eq!(String::from_utf8_lossy(&out.stdout), "V(t) = t^-2 - t^-1 + 1 - t + t^2\n");
}

#[test]
fn unknot_has_one_empty_tree() {
    let dir = scratch_dir("unknot");
    let path = dir.join("unknot.pd");
    std::fs::write(&path, "O\n").unwrap();
    let rows = json(&khtree(&["trees", "-i", path.to_str().unwrap()]));
    assert_eq!(rows.as_array().unwrap().len(), 1);
    assert_eq!(rows[0]["word"], "");
}

#[test]
fn trefoil_tree_weights_sum_to_the_bracket() {
    let rows = json(&khtree(&["trees", "-i", "3_1", "--format", "json"]));
    assert_eq!(rows.as_array().unwrap().len(), 3);
    let bracket = json(&khtree(&["bracket", "-i", "3_1"]));
    assert_eq!(bracket["state_sum_agrees"], true);
}

#[test]
fn second_page_of_figure_eight_is_thin() {
    let out = json(&khtree(&["ss", "--page", "2", "-i", "figure8"]));
    assert_eq!(out["total_rank"], 5);
    assert_eq!(out["deltas"].as_array().unwrap().len(), 1);
}

#[test]
fn mutant_exit_codes() {
    let yes = khtree(&["mutants", "-i", "11n42", "-i", "11n34"]);
    assert_eq!(yes.status.code(), Some(0));
    let report = json(&yes);
    assert_eq!(report["mutants"], true);
    assert_eq!(report["e2"]["witness"].as_array().unwrap().len(), 11);
    assert_eq!(report["e2"]["equal"], true);
    let no = khtree(&["mutants", "-i", "4_1", "-i", "3_1"]);
    assert_eq!(no.status.code(), Some(1));
    assert_eq!(json(&no)["mutants"], false);
}

#[test]
fn input_errors_and_size_guard() {
    assert_eq!(khtree(&["jones", "-i", "no-such-knot"]).status.code(), Some(2));
    assert_eq!(khtree(&["trees", "-i", "figure8", "--edge-order", "1,2,2,3"]).status.code(), Some(2));
    assert_eq!(khtree(&["jones", "-i", "4_1", "--basepoint", "99"]).status.code(), Some(2));
    assert_eq!(khtree(&["jones", "-i", "11n42", "--max-crossings", "10"]).status.code(), Some(3));
    let dir = scratch_dir("bad");
    let path = dir.join("bad.pd");
    std::fs::write(&path, "X 1 2 3\n").unwrap();
    assert_eq!(khtree(&["jones", "-i", path.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn environment_mirrors_flags() {
    let out = Command::new(env!("CARGO_BIN_EXE_khtree"))
        .arg("homology")
        .env("KHTREE_INPUT", "3_1")
        .env("KHTREE_REDUCED", "true")
        .env("KHTREE_FORMAT", "json")
        .output()
        .unwrap();
    let h = json(&out);
    assert_eq!(h["reduced"], true);
    assert_eq!(h["total_rank"], 3);
}

#[test]
fn edge_order_permutes_words() {
    let rows = json(&khtree(&["trees", "-i", "figure8", "--edge-order", "4,3,2,1"]));
    let mut words: Vec<String> = rows.as_array().unwrap().iter().map(|r| r["word"].as_str().unwrap().to_string()).collect();
    words.sort();
    let bracket = json(&khtree(&["bracket", "-i", "figure8", "--edge-order", "4,3,2,1"]));
    assert_eq!(words.len(), 5);
    assert_eq!(bracket["text"], "A^-8 - A^-4 + 1 - A^4 + A^8");
}

#[test]
fn json_is_deterministic() {
    for args in [
        &["collapse", "-i", "8_19", "--reduced"][..],
        &["ss", "-i", "9_42", "--page", "1"],
        &["probe", "-i", "11n42", "-i", "11n34"],
        &["verify", "--only", "incidence"],
    ] {
        assert_eq!(khtree(args).stdout, khtree(args).stdout, "{args:?}");
    }
}

#[test]
fn ladders_explain_induced_entries() {
    let out = khtree(&["ladders", "-i", "8_19", "--pivots", "--kmax", "40"]);
    assert!(out.status.success());
    for r in json(&out).as_array().unwrap() {
        assert_eq!(r["report"]["truncated"], false);
        assert_eq!(r["report"]["matched_sum"], r["induced_entry"]);
    }
    assert_eq!(
        khtree(&["ladders", "-i", "8_19", "--from", "1", "--to", "2", "--kmax", "0"]).status.code(),
        Some(2)
    );
}

#[test]
fn probe_runs_on_builtin_pairs() {
    let out = khtree(&["probe"]);
    assert!(out.status.success());
    assert!(json(&out).as_array().unwrap().len() >= 3);
    assert_eq!(khtree(&["probe", "-i", "4_1", "-i", "5_2"]).status.code(), Some(1));
}

#[test]
fn verify_single_criterion_and_corrupted_fixture() {
    let out = khtree(&["verify", "--only", "euler"]);
    assert!(out.status.success());
    let report = json(&out);
    assert_eq!(report["criteria"].as_array().unwrap().len(), 1);
    assert_eq!(report["criteria"][0]["key"], "euler");

    let dir = scratch_dir("fixtures");
    for entry in std::fs::read_dir(concat!(env!("CARGO_MANIFEST_DIR"), "/../core/fixtures")).unwrap() {
        let path = entry.unwrap().path();
        std::fs::copy(&path, dir.join(path.file_name().unwrap())).unwrap();
    }
    std::fs::write(dir.join("5_2.pd"), "X 1 2 3\n").unwrap();
    let out = khtree(&["verify", "--only", "euler", "--fixtures", dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let detail = json(&out)["criteria"][0]["detail"].as_str().unwrap().to_string();
    assert!(detail.contains("5_2"), "{detail}");
}

#[test]
fn verify_all_passes() {
    let out = khtree(&["verify", "--format", "table"]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(out.status.success(), "{text}");
    assert!(text.contains("10/10 criteria passed"));
}
