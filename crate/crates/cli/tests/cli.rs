use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

const PENTAGON: &str = r#"{"id":1,"vertices":[[1,0],[0,1],[-1,1],[-1,0],[0,-1]]}"#;

fn latpoly(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_latpoly"))
        .current_dir(dir)
        .env_remove("LATPOLY_SEED")
        .env_remove("LATPOLY_THREADS")
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let out = latpoly(dir, args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

/// Header line of a CSV written with a leading config comment.
fn csv_header(path: &Path) -> String {
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# config: {"));
    lines.next().unwrap().to_string()
}

fn labeled_pentagons(dir: &Path, count: &str) {
    ok(dir, &["dataset", "gen", "--count", count, "--vertex-counts", "5", "--seed", "3", "--out", "gen.jsonl"]);
    ok(dir, &["dataset", "label", "--input", "gen.jsonl", "--out", "lab.jsonl", "--skip-codimension"]);
}

#[test]
fn invariants_of_the_pentagon() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("p.jsonl"), format!("{PENTAGON}\n")).unwrap();
    let stdout = ok(dir.path(), &["invariants", "p.jsonl"]);
    let row = stdout.lines().find(|l| l.starts_with("1:")).unwrap();
    assert!(row.starts_with("1: 5, 7, 1, true, 5"), "{row}");
}

#[test]
fn invariants_of_an_empty_file() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("e.jsonl"), "").unwrap();
    assert_eq!(ok(dir.path(), &["invariants", "e.jsonl"]), "");
}

#[test]
fn malformed_row_is_a_data_error_with_line_number() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("bad.jsonl"), format!("{PENTAGON}\n{{\"id\": 2, \"vertices\": [[1,0],[0]]}}\n")).unwrap();
    let out = latpoly(dir.path(), &["invariants", "bad.jsonl"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn non_fano_rows_are_reported_and_skipped() {
    let dir = TempDir::new().unwrap();
    let text = format!("{{\"id\":7,\"vertices\":[[2,0],[0,2],[-2,-2]]}}\n{PENTAGON}\n");
    fs::write(dir.path().join("m.jsonl"), text).unwrap();
    let stdout = ok(dir.path(), &["invariants", "m.jsonl", "--out", "labeled.jsonl"]);
    assert!(stdout.contains("7: error"));
    assert!(stdout.contains("1: 5, 7, 1, true, 5"));
    let written = fs::read_to_string(dir.path().join("labeled.jsonl")).unwrap();
    assert_eq!(written.lines().count(), 2);
}

#[test]
fn enumerates_sixteen_reflexive_polygons() {
    let dir = TempDir::new().unwrap();
    let stdout = ok(dir.path(), &["enumerate-reflexive-2d", "--out", "r.jsonl"]);
    assert!(stdout.contains("16 reflexive polygons"));
    let records = fs::read_to_string(dir.path().join("r.jsonl")).unwrap();
    assert_eq!(records.lines().count(), 17);
    assert!(records.lines().skip(1).all(|l| l.contains("\"gorenstein_index\":1")));
}

#[test]
fn five_fold_training_writes_five_models() {
    let dir = TempDir::new().unwrap();
    labeled_pentagons(dir.path(), "60");
    ok(dir.path(), &["train", "--input", "lab.jsonl", "--out-dir", "cv", "--folds", "5", "--epochs", "2"]);
    let cv = dir.path().join("cv");
    for k in 0..5 {
        assert!(cv.join(format!("model_fold{k}.json")).exists());
        assert!(cv.join(format!("log_fold{k}.csv")).exists());
    }
    assert_eq!(
        csv_header(&cv.join("metrics.csv")),
        "property,encoding,n,fold,rows,mae,mape,mse,pmcc,acc_0.5,acc_0.025range,acc_0.05range"
    );
    assert_eq!(csv_header(&cv.join("log_fold0.csv")), "epoch,train_loss,val_loss");
    assert_eq!(csv_header(&cv.join("predictions.csv")), "fold,row,group,true,predicted");
    let metrics = fs::read_to_string(cv.join("metrics.csv")).unwrap();
    let folds: Vec<&str> = metrics.lines().skip(2).map(|l| l.split(',').nth(3).unwrap()).collect();
    assert_eq!(folds, ["0", "1", "2", "3", "4"]);
    assert!(fs::read_to_string(cv.join("predictions.svg")).unwrap().starts_with("<svg"));
}

#[test]
fn perfect_predictions_score_one() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("p.csv"), "true,predicted\n3,3\n5,5\n9,9\n").unwrap();
    let stdout = ok(dir.path(), &["eval", "--predictions", "p.csv", "--out-dir", "ev"]);
    let header = csv_header(&dir.path().join("ev/metrics.csv"));
    let metrics = fs::read_to_string(dir.path().join("ev/metrics.csv")).unwrap();
    let row = metrics.lines().nth(2).unwrap();
    assert_eq!(stdout.trim(), row);
    let cols: Vec<&str> = header.split(',').collect();
    let vals: Vec<&str> = row.split(',').collect();
    for (c, v) in cols.iter().zip(&vals) {
        if c.starts_with("acc_") || *c == "pmcc" {
            assert_eq!(*v, "1", "{c}");
        }
        if *c == "mae" {
            assert_eq!(*v, "0");
        }
    }
}

#[test]
fn saved_model_evaluates_on_new_data() {
    let dir = TempDir::new().unwrap();
    labeled_pentagons(dir.path(), "40");
    ok(dir.path(), &["train", "--input", "lab.jsonl", "--out-dir", "m", "--epochs", "2"]);
    assert!(dir.path().join("m/model.json").exists());
    ok(dir.path(), &["eval", "--model", "m/model.json", "--input", "lab.jsonl", "--out-dir", "ev"]);
    assert_eq!(csv_header(&dir.path().join("ev/predictions.csv")), "row,true,predicted");
    ok(
        dir.path(),
        &["train", "--input", "lab.jsonl", "--out-dir", "ft", "--epochs", "1", "--init-from", "m/model.json"],
    );
}

#[test]
fn reruns_are_identical() {
    let dir = TempDir::new().unwrap();
    labeled_pentagons(dir.path(), "40");
    ok(dir.path(), &["dataset", "augment", "--input", "lab.jsonl", "--out", "aug.jsonl"]);
    let first = fs::read(dir.path().join("aug.jsonl")).unwrap();
    let gen = fs::read(dir.path().join("gen.jsonl")).unwrap();
    for _ in 0..2 {
        ok(dir.path(), &["train", "--input", "aug.jsonl", "--out-dir", "t", "--train-frac", "0.8", "--epochs", "2"]);
    }
    let metrics = fs::read(dir.path().join("t/metrics.csv")).unwrap();
    let model = fs::read(dir.path().join("t/model_fold0.json")).unwrap();
    labeled_pentagons(dir.path(), "40");
    ok(dir.path(), &["dataset", "augment", "--input", "lab.jsonl", "--out", "aug.jsonl"]);
    ok(dir.path(), &["train", "--input", "aug.jsonl", "--out-dir", "t", "--train-frac", "0.8", "--epochs", "2"]);
    assert_eq!(fs::read(dir.path().join("gen.jsonl")).unwrap(), gen);
    assert_eq!(fs::read(dir.path().join("aug.jsonl")).unwrap(), first);
    assert_eq!(fs::read(dir.path().join("t/metrics.csv")).unwrap(), metrics);
    assert_eq!(fs::read(dir.path().join("t/model_fold0.json")).unwrap(), model);
}

#[test]
fn seed_comes_from_the_environment() {
    let dir = TempDir::new().unwrap();
    let run = |seed: &str, out: &str| {
        let status = Command::new(env!("CARGO_BIN_EXE_latpoly"))
            .current_dir(dir.path())
            .env("LATPOLY_SEED", seed)
            .args(["dataset", "gen", "--count", "5", "--out", out])
            .status()
            .unwrap();
        assert!(status.success());
        fs::read_to_string(dir.path().join(out)).unwrap()
    };
    let a = run("11", "a.jsonl");
    assert!(a.lines().next().unwrap().contains("\"seed\":11"));
    assert_ne!(a.lines().nth(1), run("12", "b.jsonl").lines().nth(1));
}

#[test]
fn feature_table_and_forest() {
    let dir = TempDir::new().unwrap();
    labeled_pentagons(dir.path(), "40");
    ok(dir.path(), &["dataset", "features", "--input", "lab.jsonl", "--out", "f.csv", "--label", "gorenstein_index"]);
    assert_eq!(
        csv_header(&dir.path().join("f.csv")),
        (0..10).map(|i| format!("feature_{i},")).collect::<String>() + "label"
    );
    ok(dir.path(), &["train", "--input", "f.csv", "--out-dir", "r", "--folds", "2", "--epochs", "1"]);
    let out = latpoly(dir.path(), &["train", "--input", "lab.jsonl", "--out-dir", "x", "--model", "forest"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn mds_and_plots() {
    let dir = TempDir::new().unwrap();
    labeled_pentagons(dir.path(), "30");
    let stdout = ok(dir.path(), &["mds", "--input", "lab.jsonl", "--out-dir", "mds", "--components", "1"]);
    assert!(stdout.contains("pmcc"));
    assert_eq!(csv_header(&dir.path().join("mds/embedding.csv")), "index,x0,label");
    assert_eq!(csv_header(&dir.path().join("mds/stress.csv")), "iteration,stress");
    ok(dir.path(), &["mds", "--input", "lab.jsonl", "--out-dir", "mds2"]);
    assert_eq!(csv_header(&dir.path().join("mds2/embedding.csv")), "index,x0,x1,label");
    ok(dir.path(), &["plot", "--kind", "histogram", "--input", "lab.jsonl", "--out", "h.svg"]);
    ok(
        dir.path(),
        &[
            "plot",
            "--kind",
            "scatter",
            "--input",
            "mds2/embedding.csv",
            "--x",
            "x0",
            "--y",
            "x1",
            "--color",
            "label",
            "--out",
            "s.svg",
        ],
    );
    for f in ["h.svg", "s.svg", "mds/mds.svg"] {
        let svg = fs::read_to_string(dir.path().join(f)).unwrap();
        assert!(svg.starts_with("<svg") && svg.contains("<!-- config:") && svg.trim_end().ends_with("</svg>"));
    }
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    labeled_pentagons(dir.path(), "20");
    assert_eq!(code(&latpoly(dir.path(), &["no-such-command"])), 1);
    assert_eq!(code(&latpoly(dir.path(), &["mds", "--input", "lab.jsonl", "--out-dir", "m", "--components", "3"])), 1);
    let both = ["train", "--input", "lab.jsonl", "--out-dir", "t", "--folds", "5", "--train-frac", "0.5"];
    assert_eq!(code(&latpoly(dir.path(), &both)), 1);
    let enc = ["train", "--input", "lab.jsonl", "--out-dir", "t", "--encoding", "nonsense"];
    assert_eq!(code(&latpoly(dir.path(), &enc)), 1);
    assert_eq!(code(&latpoly(dir.path(), &["invariants", "missing.jsonl"])), 2);
    let diverge = ["train", "--input", "lab.jsonl", "--out-dir", "t", "--epochs", "2", "--learning-rate", "1e300"];
    assert_eq!(code(&latpoly(dir.path(), &diverge)), 3);
    assert_eq!(code(&latpoly(dir.path(), &["--help"])), 0);
}
