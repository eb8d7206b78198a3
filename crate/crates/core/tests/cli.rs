use std::path::{Path, PathBuf};

use clap::{CommandFactory, Parser};

use cfa::cli::{self, Cli};
use cfa::evaluation::report::load_report;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> Result<String, cfa::Error> {
    let cli = Cli::try_parse_from(std::iter::once("cfa").chain(args.iter().copied())).expect("arguments parse");
    let mut out = Vec::new();
    cli::run(cli, &mut out)?;
    Ok(String::from_utf8(out).unwrap())
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

/// Six majority rows, two minority rows; rows 0 and 1 each pair with one
/// minority row on feature 2, the other four majority rows stay unpaired.
const TOY: &str = "a,b,c,y\n\
0,0,0,neg\n\
10,10,0,neg\n\
30,40,50,neg\n\
50,60,70,neg\n\
70,80,90,neg\n\
90,100,110,neg\n\
0,0,5,pos\n\
10,10,5,pos\n";

#[test]
fn inspect_pima() {
    let text = run(&["inspect", "--data", &data("pima.csv"), "--label", "Class", "--positive", "positive"]).unwrap();
    assert!(text.contains("instances=768 features=8 minority=268 majority=500 IR=1.87"), "{text}");
    assert!(text.contains("tolerance=0.1 max_diffs=2 pairs="));
}

#[test]
fn inspect_toy_counts_pairs() {
    let dir = tempfile::tempdir().unwrap();
    let toy = write(dir.path(), "toy.csv", TOY);
    let text = run(&["inspect", "--data", &toy, "--positive", "pos"]).unwrap();
    assert!(text.contains("pairs=2 paired=2 unpaired=4"), "{text}");
    assert!(text.contains("minority=2 majority=6 IR=3.00"));
}

#[test]
fn cfa_toy_reaches_parity() {
    let dir = tempfile::tempdir().unwrap();
    let toy = write(dir.path(), "toy.csv", TOY);
    let out = dir.path().join("out");
    let text = run(&[
        "resample", "--data", &toy, "--positive", "pos", "--method", "cfa", "--seed", "1", "--out",
        out.to_str().unwrap(),
    ])
    .unwrap();
    assert!(text.contains("rows=8->12 minority=2->6 generated=4 shortfall=0"), "{text}");
    let csv = std::fs::read_to_string(out.join("toy_cfa.csv")).unwrap();
    assert_eq!(csv.lines().count(), 13);
    assert!(csv.lines().next().unwrap().ends_with(",provenance"));
    // x'=2 takes its match features a, b from itself and c from the nearest pair's p.
    assert!(csv.contains("cfa:x'=2;"), "{csv}");
}

#[test]
fn empty_class_and_bad_input_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let one_class = write(dir.path(), "one.csv", "a,y\n1,pos\n2,pos\n");
    let err = run(&["inspect", "--data", &one_class, "--positive", "pos"]).unwrap_err();
    assert_eq!(err.exit_code(), 2, "{err}");
    let err = run(&["inspect", "--data", &data("pima.csv"), "--label", "Class", "--positive", "maybe"]).unwrap_err();
    assert_eq!(err.exit_code(), 2);
    let missing = dir.path().join("missing.csv");
    let err = run(&["inspect", "--data", missing.to_str().unwrap(), "--positive", "x"]).unwrap_err();
    assert_eq!(err.exit_code(), 4);
}

#[test]
fn cfa_without_pairs_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let far = write(dir.path(), "far.csv", "a,b,c,y\n0,0,0,n\n1,1,1,n\n2,2,2,n\n9,9,9,p\n");
    let err = run(&[
        "resample", "--data", &far, "--positive", "p", "--method", "cfa", "--seed", "1", "--out",
        dir.path().to_str().unwrap(),
    ])
    .unwrap_err();
    assert_eq!(err.exit_code(), 3, "{err}");
}

#[test]
fn smote_on_pima_balances_and_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let mut bytes = Vec::new();
    for run_dir in ["a", "b"] {
        let out = dir.path().join(run_dir);
        let text = run(&[
            "resample", "--data", &data("pima.csv"), "--label", "Class", "--positive", "positive", "--method",
            "smote", "--seed", "5", "--out", out.to_str().unwrap(),
        ])
        .unwrap();
        assert!(text.contains("rows=768->1000 minority=268->500"), "{text}");
        bytes.push((
            std::fs::read(out.join("pima_smote.csv")).unwrap(),
            std::fs::read(out.join("pima_smote.diagnostics.json")).unwrap(),
        ));
    }
    assert_eq!(bytes[0], bytes[1]);
    let rows = String::from_utf8(bytes[0].0.clone()).unwrap().lines().count();
    assert_eq!(rows, 1001);
}

#[test]
fn unknown_flags_are_rejected_and_help_lists_flags() {
    assert!(Cli::try_parse_from(["cfa", "inspect", "--data", "x.csv", "--tolerence", "0.2"]).is_err());
    let mut cmd = Cli::command();
    cmd.build();
    let bench = cmd.find_subcommand_mut("benchmark").unwrap().render_long_help().to_string();
    for flag in ["--config", "--seed", "--jobs", "--out", "--tolerance", "--max-diffs", "--verify"] {
        assert!(bench.contains(flag), "benchmark help lacks {flag}");
    }
    let resample = cmd.find_subcommand_mut("resample").unwrap().render_long_help().to_string();
    for flag in ["--method", "--seed", "--out", "--k", "--positive", "--label"] {
        assert!(resample.contains(flag), "resample help lacks {flag}");
    }
}

#[test]
fn benchmark_then_report() {
    let dir = tempfile::tempdir().unwrap();
    let config = format!(
        r#"{{
            "datasets": [{{"id": "glass-3", "path": {:?}, "label_column": "Type",
                           "binarization": {{"mode": "ovr", "positive": "3"}}}}],
            "methods": [{{"method": "smote"}}, {{"method": "cfa"}}],
            "classifiers": [{{"name": "KNN", "grid": {{"kind": "knn", "n_neighbors": [3, 5]}}}}],
            "k_folds": 3,
            "seed": 11,
            "output_dir": "out"
        }}"#,
        data("glass.csv")
    );
    let cfg = write(dir.path(), "run.json", &config);
    let text = run(&["benchmark", "--config", &cfg]).unwrap();
    assert!(text.starts_with("cells=3 failed_folds="), "{text}");
    assert!(text.contains("winners KNN: Baseline="));

    let out = dir.path().join("out");
    for f in ["report.json", "summary.csv", "auc_KNN.csv"] {
        assert!(out.join(f).is_file(), "missing {f}");
    }
    let first = std::fs::read(out.join("report.json")).unwrap();
    let stored = load_report(&out.join("report.json")).unwrap();
    assert_eq!(stored.column_names(), vec!["Baseline", "SMOTE", "CFA"]);

    // A second run is served from the cache and writes the same bytes.
    run(&["benchmark", "--config", &cfg]).unwrap();
    assert_eq!(std::fs::read(out.join("report.json")).unwrap(), first);

    let text = run(&["report", "--config", &cfg]).unwrap();
    assert!(text.contains("# KNN (mean ROC AUC)"));
    assert!(text.contains("Baseline,SMOTE,CFA"), "{text}");
    assert_eq!(std::fs::read(out.join("report.json")).unwrap(), first);

    // Every artifact stays under the output directory.
    for entry in walk(dir.path()) {
        let rel = entry.strip_prefix(dir.path()).unwrap();
        assert!(rel.starts_with("out") || rel == Path::new("run.json"), "{}", rel.display());
    }
}

fn walk(dir: &Path) -> Vec<PathBuf> {
    let mut files = Vec::new();
    for e in std::fs::read_dir(dir).unwrap() {
        let p = e.unwrap().path();
        if p.is_dir() {
            files.extend(walk(&p));
        } else {
            files.push(p);
        }
    }
    files
}
