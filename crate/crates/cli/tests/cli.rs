//! End-to-end behavior of the binary: pipeline round-trips, exit codes,
//! and manifest replay determinism.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_chordal-forge"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn generate_into(dir: &Path, seed: u64) -> Output {
    run(&[
        "generate",
        "--kernel",
        "exp:lambda=1",
        "--tree",
        "dregular:d=3,L=2",
        "--r",
        "10",
        "--c",
        "2",
        "--seed",
        &seed.to_string(),
        "--steps",
        "2000",
        "--out",
        dir.to_str().unwrap(),
    ])
}

#[test]
fn generate_then_verify_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let out = generate_into(dir.path(), 7);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    for file in [
        "points.txt",
        "tree.txt",
        "bipartite.txt",
        "graph.txt",
        "adjacency.tsv",
        "manifest.json",
    ] {
        assert!(dir.path().join(file).exists(), "{file} missing");
    }
    let verify = run(&[
        "verify",
        "--graph",
        dir.path().join("graph.txt").to_str().unwrap(),
        "--bipartite",
        dir.path().join("bipartite.txt").to_str().unwrap(),
        "--tree",
        dir.path().join("tree.txt").to_str().unwrap(),
    ]);
    assert!(
        verify.status.success(),
        "{}",
        String::from_utf8_lossy(&verify.stdout)
    );
    let text = String::from_utf8_lossy(&verify.stdout);
    assert!(text.contains("chordal: yes"));
    assert!(text.contains("junction property: holds"));
    assert!(text.contains("a0: empty"));
}

#[test]
fn steps_zero_yields_empty_bipartite_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "generate",
        "--kernel",
        "exp:lambda=1",
        "--tree",
        "path:L=2",
        "--seed",
        "3",
        "--steps",
        "0",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let bip = std::fs::read_to_string(dir.path().join("bipartite.txt")).unwrap();
    assert!(
        bip.lines()
            .all(|l| l.starts_with("RC") || l.starts_with("CN")),
        "no B edges expected: {bip}"
    );
    let graph = std::fs::read_to_string(dir.path().join("graph.txt")).unwrap();
    assert!(graph.trim().is_empty());
}

#[test]
fn verify_flags_non_chordal_with_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let four_cycle = "G 0 1\nG 1 2\nG 2 3\nG 0 3\n";
    let path = dir.path().join("cycle.txt");
    std::fs::write(&path, four_cycle).unwrap();
    let out = run(&["verify", "--graph", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("chordal: no"));
}

#[test]
fn corrupt_files_and_bad_flags_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.txt");
    std::fs::write(&path, "G 1 1\n").unwrap();
    let out = run(&["verify", "--graph", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&[
        "generate",
        "--kernel",
        "exp:lambda=-3",
        "--tree",
        "path:L=1",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["generate", "--nonsense"]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["analyze", "--tree", "recursive:n=5"]);
    assert_eq!(
        out.status.code(),
        Some(2),
        "closed forms need dregular or path"
    );
}

#[test]
fn infer_cox_zero_iterations_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    assert!(generate_into(dir.path(), 11).status.success());
    let out = run(&[
        "infer",
        "--model",
        "cox",
        "--bipartite",
        dir.path().join("bipartite.txt").to_str().unwrap(),
        "--tree",
        dir.path().join("tree.txt").to_str().unwrap(),
        "--iters",
        "0",
        "--burnin",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn infer_beta_empty_membership_node_reports_prior() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("z.txt"), "B 0 0\nCN 1\n").unwrap();
    std::fs::write(dir.path().join("t.txt"), "V 0\n").unwrap();
    let out = run(&[
        "infer",
        "--model",
        "beta",
        "--bipartite",
        dir.path().join("z.txt").to_str().unwrap(),
        "--tree",
        dir.path().join("t.txt").to_str().unwrap(),
        "--alpha",
        "2",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    // node 1 has no memberships and no neighbours: Beta(2, 1), mean 2/3
    let line = text.lines().find(|l| l.starts_with("1\tnode")).unwrap();
    assert!(line.contains("0.666666667"), "{line}");
}

#[test]
fn analyze_zeta_zero_gives_zeros() {
    let out = run(&[
        "analyze",
        "--tree",
        "path:L=2",
        "--zeta",
        "0",
        "--mc-reps",
        "100",
    ]);
    assert!(out.status.success());
    for line in String::from_utf8_lossy(&out.stdout).lines() {
        if line.starts_with('0') {
            let fields: Vec<&str> = line.split('\t').collect();
            assert_eq!(fields[2].parse::<f64>().unwrap(), 0.0);
        }
    }
}

#[test]
fn infer_accepts_observed_graph_input() {
    let dir = tempfile::tempdir().unwrap();
    assert!(generate_into(dir.path(), 7).status.success());
    let graph = dir.path().join("graph.txt");
    let from_graph = run(&[
        "infer",
        "--model",
        "beta",
        "--graph",
        graph.to_str().unwrap(),
        "--alpha",
        "1",
    ]);
    assert!(from_graph.status.success(), "{}", String::from_utf8_lossy(&from_graph.stderr));
    // the repaired bipartite rows are exactly the maximal cliques, so the
    // graph-derived posteriors match the bipartite-path ones
    let from_bip = run(&[
        "infer",
        "--model",
        "beta",
        "--bipartite",
        dir.path().join("bipartite.txt").to_str().unwrap(),
        "--tree",
        dir.path().join("tree.txt").to_str().unwrap(),
        "--alpha",
        "1",
    ]);
    assert!(from_bip.status.success());
    // the bipartite file also carries inactive (never-connected) node
    // columns, which sit at the prior; on the shared active nodes the two
    // routes must agree exactly
    let graph_lines: Vec<String> = String::from_utf8_lossy(&from_graph.stdout)
        .lines()
        .skip(1)
        .map(str::to_string)
        .collect();
    let bip_text = String::from_utf8_lossy(&from_bip.stdout).to_string();
    assert!(!graph_lines.is_empty());
    for line in &graph_lines {
        assert!(bip_text.lines().any(|l| l == line), "missing row: {line}");
    }

    // both-or-neither input modes are usage errors
    let out = run(&["infer", "--model", "beta"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn analyze_zeta_one_columns_agree_at_vertex_count() {
    let out = run(&[
        "analyze",
        "--tree",
        "path:L=2",
        "--zeta",
        "1",
        "--mc-reps",
        "500",
    ]);
    assert!(out.status.success());
    for line in String::from_utf8_lossy(&out.stdout).lines() {
        if line.starts_with("1\t") {
            let fields: Vec<&str> = line.split('\t').collect();
            assert_eq!(fields[2].parse::<f64>().unwrap(), 5.0, "{line}");
            assert_eq!(fields[3].parse::<f64>().unwrap(), 5.0, "{line}");
            if fields[4] != "na" {
                assert_eq!(fields[4].parse::<f64>().unwrap(), 5.0, "{line}");
            }
        }
    }
}

#[test]
fn explicit_tree_file_is_usable() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("tree.txt"), "E 0 1\nE 1 2\n").unwrap();
    let spec = format!("explicit:{}", dir.path().join("tree.txt").display());
    let out = run(&[
        "generate",
        "--kernel",
        "const:p=0.5",
        "--tree",
        &spec,
        "--rprime",
        "20",
        "--seed",
        "5",
        "--steps",
        "500",
        "--out",
        dir.path().join("out").to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn infer_excludes_repair_nodes_when_asked() {
    let dir = tempfile::tempdir().unwrap();
    // seeds are cheap; find one whose repair actually added nodes
    let seed = (0..200u64)
        .find(|&seed| {
            let sub = dir.path().join(format!("s{seed}"));
            generate_into(&sub, seed);
            let repair = std::fs::read_to_string(sub.join("repair_nodes.txt")).unwrap();
            !repair.trim().is_empty()
        })
        .expect("some seed needs repair");
    let sub = dir.path().join(format!("s{seed}"));
    let repair_ids: Vec<String> = std::fs::read_to_string(sub.join("repair_nodes.txt"))
        .unwrap()
        .lines()
        .map(|l| l.split_whitespace().next().unwrap().to_string())
        .collect();
    let base_args = |extra: &[&str]| {
        let mut v = vec![
            "infer".to_string(),
            "--model".into(),
            "beta".into(),
            "--bipartite".into(),
            sub.join("bipartite.txt").display().to_string(),
            "--tree".into(),
            sub.join("tree.txt").display().to_string(),
        ];
        v.extend(extra.iter().map(|s| s.to_string()));
        v
    };
    let with = base_args(&[
        "--exclude-nodes",
        sub.join("repair_nodes.txt").to_str().unwrap(),
    ]);
    let strs: Vec<&str> = with.iter().map(String::as_str).collect();
    let out = run(&strs);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    for id in &repair_ids {
        assert!(
            !text.lines().any(|l| l.starts_with(&format!("{id}\tnode"))),
            "repair node {id} should be excluded"
        );
    }
    let without = base_args(&[]);
    let strs: Vec<&str> = without.iter().map(String::as_str).collect();
    let out = run(&strs);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text
        .lines()
        .any(|l| l.starts_with(&format!("{}\tnode", repair_ids[0]))));
}

#[test]
fn threads_env_var_is_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .env("CHORDAL_FORGE_THREADS", "2")
        .args([
            "generate",
            "--kernel",
            "exp:lambda=1",
            "--tree",
            "path:L=1",
            "--seed",
            "1",
            "--steps",
            "100",
            "--out",
            dir.path().to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
}
