use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_netaccess"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn ok(args: &[&str]) -> String {
    let o = run(args);
    assert_eq!(o.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    stdout(&o)
}

fn json(args: &[&str]) -> Value {
    serde_json::from_str(&ok(args)).unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines().skip(1).map(|l| l.split(',').map(str::to_string).collect()).collect()
}

fn tmp(name: &str, content: &str) -> PathBuf {
    let p = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&p, content).unwrap();
    p
}

#[test]
fn validate_exit_statuses() {
    assert_eq!(run(&["validate", "--fixture", "fig1"]).status.code(), Some(0));
    let o = run(&["validate", "--fixture", "fig4"]);
    assert_eq!(o.status.code(), Some(2));
    let report: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(!report["triangle_violations"].as_array().unwrap().is_empty());
    let report = json(&["validate", "--fixture", "fig4", "--allow-triangle-violation"]);
    assert_eq!(report["non_metric"], true);
}

#[test]
fn rank_fig1_sums_and_products() {
    let scores = |index: &str| -> Vec<(String, String)> {
        csv_rows(&ok(&["rank", "--fixture", "fig1", "--index", index]))
            .into_iter()
            .map(|r| (r[0].clone(), r[1].clone()))
            .collect()
    };
    let mut s = scores("dsum");
    s.sort();
    assert_eq!(s, [("1", "9"), ("2", "10"), ("3", "9"), ("4", "14")].map(|(a, b)| (a.to_string(), b.to_string())));
    let mut p = scores("dprod");
    p.sort();
    assert_eq!(p, [("1", "27"), ("2", "18"), ("3", "15"), ("4", "90")].map(|(a, b)| (a.to_string(), b.to_string())));
}

#[test]
fn rank_ralik_generalized() {
    let rows = csv_rows(&ok(&["rank", "--fixture", "ralik", "--index", "gds", "--alpha", "0.2"]));
    assert_eq!(rows[0][0], "Kwajalein");
    assert_eq!(rows[1][0], "Namu");
    assert_eq!(rows[0][2], "1");
}

#[test]
fn rank_ties_share_a_class_and_json_form() {
    let v = json(&["rank", "--fixture", "fig1", "--index", "dsum", "--emit", "json"]);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows[0]["class"], 1);
    assert_eq!(rows[1]["class"], 1);
    assert_eq!(rows[2]["class"], 2);
    assert_eq!(v["index"], "dsum");
}

#[test]
fn sweep_symmetry_rows() {
    let text = ok(&["sweep", "--fixture", "fig2_dprime", "--alpha-min", "0.01", "--alpha-max", "0.25", "--steps", "25"]);
    assert!(text.starts_with("alpha,node,score\n"));
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 25 * 5);
    for chunk in rows.chunks(5) {
        assert_eq!(chunk[1][2], chunk[3][2], "alpha {}", chunk[1][0]);
    }
}

#[test]
fn sweep_fig6_node_one_minimal_and_two_steps() {
    let rows = csv_rows(&ok(&["sweep", "--fixture", "fig6", "--alpha-min", "0.01", "--alpha-max", "0.3", "--steps", "30"]));
    for chunk in rows.chunks(12) {
        let scores: Vec<f64> = chunk.iter().map(|r| r[2].parse().unwrap()).collect();
        assert!(scores[1..].iter().all(|&s| s > scores[0]));
    }
    let rows = csv_rows(&ok(&["sweep", "--fixture", "fig1", "--alpha-min", "0.01", "--alpha-max", "0.2", "--steps", "2"]));
    let alphas: std::collections::BTreeSet<&str> = rows.iter().map(|r| r[0].as_str()).collect();
    assert_eq!(alphas.len(), 2);
}

#[test]
fn sweep_outside_existence_interval_is_numerical_failure() {
    let o = run(&["sweep", "--fixture", "fig1", "--alpha-min", "0.1", "--alpha-max", "0.9", "--steps", "3"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn alpha_diagnostics() {
    let v = json(&["alpha", "--fixture", "fig2_dprime"]);
    assert!((v["alpha_hat"].as_f64().unwrap() - 0.2686).abs() < 0.002);
    for key in ["alpha_exist", "capped_by_existence", "iterations", "trace"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    let v = json(&["alpha", "--fixture", "ralik"]);
    assert!((v["alpha_hat"].as_f64().unwrap() - 0.2607).abs() < 0.002);
    let v = json(&["alpha", "--fixture", "fig4", "--allow-triangle-violation"]);
    assert_eq!(v["capped_by_existence"], true);
}

fn verdicts(args: &[&str]) -> Vec<(String, bool)> {
    json(args)
        .as_array()
        .unwrap()
        .iter()
        .map(|v| (v["axiom"].as_str().unwrap().to_string(), v["passed"].as_bool().unwrap()))
        .collect()
}

#[test]
fn axioms_reports() {
    let v = verdicts(&["axioms", "--fixture", "fig1", "--index", "dsum"]);
    assert_eq!(v.len(), 5);
    assert!(v.iter().all(|(_, p)| *p));

    let v = verdicts(&["axioms", "--fixture", "fig1", "--index", "invdsum"]);
    assert!(v.contains(&("DP".to_string(), false)));

    let v = verdicts(&["axioms", "--fixture", "fig2_dprime", "--index", "gds", "--alpha", "0.2"]);
    for (axiom, want) in [("ANO", true), ("DP", true), ("IDD", false), ("IID", false)] {
        assert!(v.contains(&(axiom.to_string(), want)), "{axiom}");
    }
}

#[test]
fn axioms_counterexample_embeds_network() {
    let report = json(&["axioms", "--fixture", "fig1", "--index", "invdsum", "--trials", "10", "--seed", "3"]);
    let failed = report.as_array().unwrap().iter().find(|v| v["passed"] == false).unwrap();
    let ce = &failed["counterexample"];
    assert_eq!(ce["network"]["labels"].as_array().unwrap().len(), 4);
    let replay: netaccess::axioms::CounterExample = serde_json::from_value(ce.clone()).unwrap();
    assert!(replay.replay().unwrap());
}

#[test]
fn dominance_listings() {
    let rows = csv_rows(&ok(&["dominance", "--fixture", "fig6"]));
    let net = netaccess::fixtures::fixture("fig6").unwrap().network;
    let lib: Vec<Vec<String>> = netaccess::axioms::dominance_pairs(&net)
        .unwrap()
        .iter()
        .map(|p| vec![net.label(p.dominator).to_string(), net.label(p.dominated).to_string()])
        .collect();
    assert_eq!(rows, lib);
    assert_eq!(rows.len(), 7);
    let rows = csv_rows(&ok(&["dominance", "--fixture", "ralik"]));
    assert!(rows.contains(&vec!["Wotho".to_string(), "Rongelap".to_string()]));
    let out = ok(&["dominance", "--fixture", "fig4", "--allow-triangle-violation"]);
    assert_eq!(out, "dominator,dominated\n");
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["axioms", "--fixture", "fig2_d", "--index", "gds", "--alpha", "0.1", "--seed", "9"][..],
        &["sweep", "--fixture", "ralik", "--alpha-min", "0.01", "--alpha-max", "0.5", "--steps", "17"][..],
    ] {
        assert_eq!(ok(args), ok(args));
    }
}

#[test]
fn example_round_trips_through_input() {
    let text = ok(&["example", "fig1"]);
    let v: Value = serde_json::from_str(&text).unwrap();
    assert!(!v["provenance"].as_str().unwrap().is_empty());
    let p = tmp("fig1.json", &text);
    let a = ok(&["rank", "--input", p.to_str().unwrap(), "--format", "json", "--index", "dsum"]);
    assert_eq!(a, ok(&["rank", "--fixture", "fig1", "--index", "dsum"]));
}

#[test]
fn file_formats_and_out_flag() {
    let edges = tmp("fig1.txt", "# fig1\n1 2 3\n1 3 3\n1 4 3\n2 3 1\n2 4 6\n3 4 5\n");
    let a = ok(&["rank", "--input", edges.to_str().unwrap(), "--format", "edge-list", "--index", "dsum"]);
    assert_eq!(a, ok(&["rank", "--fixture", "fig1", "--index", "dsum"]));

    let matrix = tmp("m.csv", "a,b,c\n0,1,2\n1,0,1.5\n2,1.5,0\n");
    let target = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("rank_out.csv");
    ok(&["rank", "--input", matrix.to_str().unwrap(), "--index", "dsum", "--out", target.to_str().unwrap()]);
    let written = std::fs::read_to_string(&target).unwrap();
    assert_eq!(written, "label,score,class\nb,2.5,1\na,3,2\nc,3.5,3\n");
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["rank", "--fixture", "fig1", "--index", "gds"]).status.code(), Some(1));
    assert_eq!(run(&["rank", "--fixture", "fig1", "--index", "dsum", "--alpha", "0.1"]).status.code(), Some(1));
    assert_eq!(run(&["rank", "--index", "dsum"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
    assert_eq!(run(&["rank", "--fixture", "fig4", "--index", "dsum"]).status.code(), Some(2));
    let bad = tmp("bad.txt", "1 2 x\n");
    let o = run(&["rank", "--input", bad.to_str().unwrap(), "--index", "dsum"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 1, column 5"));
}

#[test]
fn fig4_flat_under_override() {
    let rows = csv_rows(&ok(&["rank", "--fixture", "fig4", "--index", "gds", "--alpha", "0.3", "--allow-triangle-violation"]));
    assert!(rows.iter().all(|r| r[2] == "1"));
}
