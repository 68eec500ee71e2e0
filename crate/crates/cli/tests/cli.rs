use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_defectbench"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn fixture(name: &str) -> String {
    fixtures().join(name).to_string_lossy().into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn run_sanity_then_refuse_clobber() {
    let dir = tempfile::tempdir().unwrap();
    let store = dir.path().join("store");
    let store_s = store.to_string_lossy().into_owned();
    let config = fixture("sanity/sanity.toml");

    let o = bin(&["run", &config, "--out", &store_s]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(String::from_utf8_lossy(&o.stdout).contains("seed derivation"));
    let first = fs::read(store.join("matrix_auc.csv")).unwrap();

    let o = bin(&["run", &config, "--out", &store_s]);
    assert_eq!(o.status.code(), Some(3));

    let o = bin(&["run", &config, "--out", &store_s, "--force"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(first, fs::read(store.join("matrix_auc.csv")).unwrap());

    let report = dir.path().join("report");
    let o = bin(&["report", &store_s, "--mc", "2000", "--out", &report.to_string_lossy()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let md = fs::read_to_string(report.join("report.md")).unwrap();
    assert!(md.contains("cd(k=4,N=2)="), "{md}");
}

#[test]
fn missing_master_seed_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let text = fs::read_to_string(fixtures().join("sanity/sanity.toml")).unwrap();
    let text: String = text
        .lines()
        .filter(|l| !l.starts_with("master_seed"))
        .map(|l| format!("{l}\n"))
        .collect();
    let cfg = dir.path().join("bad.toml");
    fs::write(&cfg, text).unwrap();
    let o = bin(&["run", &cfg.to_string_lossy(), "--out", &dir.path().join("s").to_string_lossy()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("master_seed"), "{}", stderr(&o));
}

#[test]
fn compare_full_tables_reports_cd() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r");
    let o = bin(&[
        "compare",
        &fixture("mdp_auc.csv"),
        &fixture("mdp_h.csv"),
        "--metric",
        "auc,h",
        "--mc",
        "2000",
        "--out",
        &out.to_string_lossy(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let md = fs::read_to_string(out.join("report.md")).unwrap();
    assert!(md.contains("cd(k=17,N=12)=7.13"));
    for f in ["ranks.csv", "friedman.csv", "nemenyi.csv", "bayes.csv", "cd_diagram.csv", "provenance.txt"] {
        assert!(out.join(f).exists(), "{f}");
    }
    assert!(md.contains("version: "));
    assert!(md.contains("config_hash: "));
    assert!(md.contains("seeds: seed=0"));
}

#[test]
fn compare_subset_and_rope() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r");
    let o = bin(&[
        "compare",
        &fixture("mdp_h.csv"),
        "--metric",
        "h",
        "--subset",
        "RFModelR,MLPModel,SVMModelRbf,WEKAModelLMT,BaggingModelANN",
        "--rope",
        "-0.05,0.05",
        "--mc",
        "2000",
        "--seed",
        "9",
        "--out",
        &out.to_string_lossy(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let md = fs::read_to_string(out.join("report.md")).unwrap();
    assert!(md.contains("cd(k=5,N=12)=1.76"), "{md}");
    let header: String = md.lines().take(12).collect::<Vec<_>>().join("\n");
    assert!(header.contains("rope=[-0.05, 0.05]"), "{header}");
}

#[test]
fn reports_are_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let out = dir.path().join(name);
        let o = bin(&[
            "compare",
            &fixture("github_auc.csv"),
            "--metric",
            "auc",
            "--mc",
            "3000",
            "--seed",
            "5",
            "--out",
            &out.to_string_lossy(),
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        out
    };
    let (a, b) = (run("a"), run("b"));
    for f in ["report.md", "ranks.csv", "bayes.csv", "cd_diagram.csv"] {
        assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap(), "{f}");
    }
    let o = bin(&[
        "compare",
        &fixture("github_auc.csv"),
        "--metric",
        "auc",
        "--mc",
        "3000",
        "--out",
        &a.to_string_lossy(),
    ]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn mismatched_matrices_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let other = dir.path().join("other.csv");
    fs::write(&other, "classifier,d1,d2\nx,0.7,0.8\ny,0.6,0.9\n").unwrap();
    let o = bin(&[
        "compare",
        &fixture("mdp_auc.csv"),
        &other.to_string_lossy(),
        "--metric",
        "auc",
        "--mc",
        "1000",
        "--out",
        &dir.path().join("r").to_string_lossy(),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("mismatched"));
}

#[test]
fn small_commands() {
    let o = bin(&["cd", "--k", "17", "--n", "15"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stdout).contains("cd(k=17,N=15)=6.38"));

    let o = bin(&["cd", &fixture("github_h.csv"), "--subset", "RFModelR,MLPModel,SVMModelRbf,WEKAModelLMT,BaggingModelANN"]);
    assert!(String::from_utf8_lossy(&o.stdout).contains("cd(k=5,N=15)=1.58"));

    let o = bin(&["ranks", &fixture("mdp_auc.csv"), "--metric", "auc"]);
    let text = String::from_utf8_lossy(&o.stdout);
    assert!(text.contains("| CARTModel | 17.00 |"), "{text}");

    let o = bin(&["friedman", &fixture("mdp_auc.csv"), &fixture("mdp_h.csv"), "--metric", "auc,h"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&o.stdout).lines().count(), 2);

    let o = bin(&["ranks", &fixture("mdp_auc.csv"), "--metric", "auc", "--bogus"]);
    assert_eq!(o.status.code(), Some(2));

    let o = bin(&["cd", "--k", "25", "--n", "10"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn ingest_canonicalises() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("m.csv");
    let o = bin(&["ingest", &fixture("mdp_h.csv"), "--metric", "h", "--out", &out.to_string_lossy()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("classifier,"));
    assert_eq!(text.lines().count(), 18);
    let o = bin(&["ingest", &fixture("mdp_h.csv"), "--metric", "h", "--out", &out.to_string_lossy()]);
    assert_eq!(o.status.code(), Some(3));

    let bad = dir.path().join("bad.csv");
    fs::write(&bad, "classifier,d1\nx,abc\n").unwrap();
    let o = bin(&["ingest", &bad.to_string_lossy(), "--metric", "h", "--out", &dir.path().join("z.csv").to_string_lossy()]);
    assert_eq!(o.status.code(), Some(2));
}
