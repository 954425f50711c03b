use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn fondue(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fondue")).args(args).output().unwrap()
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_string_lossy().into_owned()
}

/// Two triangles sharing node `hub`.
fn bowtie(dir: &Path) -> String {
    let p = path(dir, "bowtie.txt");
    fs::write(&p, "a b\nb hub\nhub a\nc d\nd hub\nhub c\n").unwrap();
    p
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(fondue(&[]).status.code(), Some(1));
    assert_eq!(fondue(&["score", "--graph", "x"]).status.code(), Some(1));
    assert_eq!(fondue(&["score", "--graph", "x", "--out", "y", "--method", "pagerank"]).status.code(), Some(1));
    let dir = tempfile::tempdir().unwrap();
    let g = bowtie(dir.path());
    let out = fondue(&["score", "--graph", &g, "--method", "fondue", "--out", &path(dir.path(), "s.csv")]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--embedding"));
    let out = fondue(&["embed", "--input", &g, "--sigma1", "3", "--out", &path(dir.path(), "e.csv")]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn data_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let missing = path(dir.path(), "missing.txt");
    let out = fondue(&["score", "--graph", &missing, "--method", "degree", "--out", &path(dir.path(), "s.csv")]);
    assert_eq!(out.status.code(), Some(2));
    let g = bowtie(dir.path());
    let out = fondue(&["contract", "--input", &g, "--ratio", "0.7", "--out", "c", "--truth", "t"]);
    assert_eq!(out.status.code(), Some(2));
    let out = fondue(&["split", "--graph", &g, "--method", "mcl", "--nodes", "nobody"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn non_finite_embedding_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let g = bowtie(dir.path());
    let emb = path(dir.path(), "e.csv");
    fs::write(&emb, "node,x0\na,0\nb,NaN\nhub,1\nc,2\nd,3\n").unwrap();
    let out = fondue(&["score", "--graph", &g, "--embedding", &emb, "--out", &path(dir.path(), "s.csv")]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn score_and_split_formats() {
    let dir = tempfile::tempdir().unwrap();
    let g = bowtie(dir.path());
    let emb = path(dir.path(), "e.csv");
    assert!(fondue(&["embed", "--input", &g, "--dim", "2", "--seed", "1", "--out", &emb]).status.success());
    assert!(Path::new(&format!("{emb}.params.json")).exists());

    let scores = path(dir.path(), "s.csv");
    assert!(fondue(&["score", "--graph", &g, "--method", "cc", "--out", &scores]).status.success());
    let text = fs::read_to_string(&scores).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("node,score,method,degree"));
    let hub = lines.find(|l| l.starts_with("hub,")).unwrap();
    assert!(hub.ends_with(",cc,4"), "{hub}");

    let out = fondue(&["split", "--graph", &g, "--embedding", &emb, "--nodes", "hub"]);
    assert!(out.status.success());
    let line: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(line["node"], "hub");
    assert!(line["value"].as_f64().unwrap() > 0.0);
    let groups = line["groups"].as_array().unwrap();
    assert_eq!(groups.len(), 2);
    let total: usize = groups.iter().map(|g| g.as_array().unwrap().len()).sum();
    assert_eq!(total, 4);

    let out = fondue(&["split", "--graph", &g, "--method", "mcl", "--nodes", "hub"]);
    let line: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(line["value"].is_null());
    assert_eq!(line["groups"], serde_json::json!([["a", "b"], ["c", "d"]]));
}

#[test]
fn contract_then_split_against_truth() {
    let dir = tempfile::tempdir().unwrap();
    let g = path(dir.path(), "g.txt");
    // Two disjoint K4s; merging across them yields a node whose ego network is two triangles.
    let mut text = String::new();
    for base in [0, 4] {
        for i in base..base + 4 {
            for j in i + 1..base + 4 {
                text.push_str(&format!("v{i} v{j}\n"));
            }
        }
    }
    fs::write(&g, text).unwrap();
    let (c, t) = (path(dir.path(), "c.txt"), path(dir.path(), "t.json"));
    assert!(fondue(&["contract", "--input", &g, "--ratio", "0.125", "--seed", "3", "--out", &c, "--truth", &t])
        .status
        .success());
    let record = fs::read_to_string(&t).unwrap();
    let at = |key: &str| record.find(&format!("\"{key}\":")).unwrap();
    let order = ["mapping", "merge_pairs", "truth_labels", "truth_partitions", "labels"].map(at);
    assert!(order.windows(2).all(|w| w[0] < w[1]), "{order:?}");
    let out = fondue(&["split", "--graph", &c, "--method", "mcl", "--nodes", "ambiguous", "--truth", &t]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let line: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(line["ari"], 1.0);
}

#[test]
fn eval_writes_report_files() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = path(dir.path(), "cfg.json");
    fs::write(
        &cfg,
        r#"{"datasets": [{"synthetic": {"spec": {"block_sizes": [10, 10], "p_in": 0.5, "p_out": 0.05}, "seed": 1}}],
            "ratios": [0.1], "seeds": [0, 1], "methods": ["fondue", "degree"], "embedding": {"max_iter": 100}}"#,
    )
    .unwrap();
    let report = path(dir.path(), "report");
    let out = fondue(&["eval", "--config", &cfg, "--out", &report]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for f in ["report.json", "summary.csv", "plot_data.csv", "nodes.csv", "timings.json"] {
        assert!(Path::new(&report).join(f).exists(), "{f}");
    }
    let bad = path(dir.path(), "bad.json");
    fs::write(&bad, r#"{"datasets": [], "seeds": [0]}"#).unwrap();
    assert_eq!(fondue(&["eval", "--config", &bad]).status.code(), Some(2));
}
