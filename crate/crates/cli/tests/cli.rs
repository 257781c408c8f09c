use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use maskfilter::io::{list_indexed, read_mask};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_maskfilter"))
        .args(args)
        .output()
        .unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn synth(root: &Path, extra: &[&str]) {
    let out = root.to_str().unwrap();
    let mut args = vec!["synth", "--out", out, "--frames", "4"];
    args.extend_from_slice(extra);
    ok(&args);
}

fn enhance(root: &Path, out: &Path, extra: &[&str]) {
    let input = root.join("input");
    let masks = root.join("masks");
    let mut args = vec![
        "enhance",
        "--input",
        input.to_str().unwrap(),
        "--masks",
        masks.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ];
    args.extend_from_slice(extra);
    ok(&args);
}

#[test]
fn synth_enhance_evaluate_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let seq = dir.path().join("seq");
    let pred = dir.path().join("pred");
    synth(&seq, &[]);
    enhance(&seq, &pred, &["--sigma", "5"]);

    let timing = fs::read_to_string(pred.join("timing.csv")).unwrap();
    assert_eq!(timing.lines().count(), 5);
    assert!(timing
        .lines()
        .skip(1)
        .all(|l| l.split(',').nth(1).unwrap().parse::<f64>().unwrap() >= 0.0));

    let report = ok(&[
        "evaluate",
        "--pred",
        pred.to_str().unwrap(),
        "--gt",
        seq.join("groundtruth").to_str().unwrap(),
    ]);
    let mut reader = csv::Reader::from_reader(report.as_bytes());
    let header: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(
        header,
        [
            "sequence",
            "frame",
            "tp",
            "fp",
            "tn",
            "fn",
            "precision",
            "recall",
            "fmeasure"
        ]
    );
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 5);
    assert_eq!(&rows[4][1], "total");
    for row in &rows {
        assert_eq!(&row[0], "seq");
        let f: f64 = row[8].parse().unwrap();
        assert!((0.0..=1.0).contains(&f));
    }
    let total_f: f64 = rows[4][8].parse().unwrap();
    assert!(total_f > 0.9, "total F {total_f}");
}

#[test]
fn higher_threshold_gives_subset() {
    let dir = tempfile::tempdir().unwrap();
    let seq = dir.path().join("seq");
    let (low, high) = (dir.path().join("low"), dir.path().join("high"));
    synth(&seq, &["--p-fp", "0.1"]);
    enhance(&seq, &low, &["--thb", "20"]);
    enhance(&seq, &high, &["--thb", "100"]);
    let lows = list_indexed(&low).unwrap();
    let highs = list_indexed(&high).unwrap();
    assert_eq!(lows.len(), 4);
    for (index, path) in &highs {
        let h = read_mask(path).unwrap();
        let l = read_mask(&lows[index]).unwrap();
        assert!(h.bits().iter().zip(l.bits()).all(|(h, l)| !h || *l));
    }
}

#[test]
fn config_file_and_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let seq = dir.path().join("seq");
    synth(&seq, &[]);
    let config = dir.path().join("params.cfg");
    fs::write(&config, "# strict\nthb = 255\nw1 = 0.5\n").unwrap();
    let (from_file, overridden) = (dir.path().join("a"), dir.path().join("b"));
    let cfg = config.to_str().unwrap();
    enhance(&seq, &from_file, &["--config", cfg]);
    enhance(&seq, &overridden, &["--config", cfg, "--thb", "20"]);
    let count = |d: &Path| -> usize {
        list_indexed(d)
            .unwrap()
            .values()
            .map(|p| read_mask(p).unwrap().count_foreground())
            .sum()
    };
    assert!(count(&from_file) < count(&overridden));
}

#[test]
fn roc_writes_monotone_curve() {
    let dir = tempfile::tempdir().unwrap();
    let seq = dir.path().join("seq");
    synth(&seq, &[]);
    let csv_text = ok(&[
        "roc",
        "--input",
        seq.join("input").to_str().unwrap(),
        "--masks",
        seq.join("masks").to_str().unwrap(),
        "--gt",
        seq.join("groundtruth").to_str().unwrap(),
        "--step",
        "15",
    ]);
    let mut reader = csv::Reader::from_reader(csv_text.as_bytes());
    let points: Vec<(f64, f64, f64)> = reader.deserialize().map(Result::unwrap).collect();
    assert_eq!(points.len(), 18);
    assert_eq!(points[0], (0.0, 1.0, 1.0));
    for pair in points.windows(2) {
        assert!(pair[1].1 <= pair[0].1 && pair[1].2 <= pair[0].2);
    }
}

#[test]
fn missing_ground_truth_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let seq = dir.path().join("seq");
    synth(&seq, &[]);
    let pred = seq.join("masks");
    let out = run(&["evaluate", "--pred", pred.to_str().unwrap()]);
    assert!(!out.status.success());
    let missing = dir.path().join("nowhere");
    let out = run(&[
        "evaluate",
        "--pred",
        pred.to_str().unwrap(),
        "--gt",
        missing.to_str().unwrap(),
    ]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("nowhere"));
}

#[test]
fn invalid_parameters_fail_before_writing() {
    let dir = tempfile::tempdir().unwrap();
    let seq = dir.path().join("seq");
    synth(&seq, &[]);
    let out_dir = dir.path().join("out");
    for bad in [["--w1", "1.5"], ["--k", "0"], ["--epsilon", "-1"]] {
        let (input, masks) = (seq.join("input"), seq.join("masks"));
        let mut args = vec![
            "enhance",
            "--input",
            input.to_str().unwrap(),
            "--masks",
            masks.to_str().unwrap(),
            "--out",
            out_dir.to_str().unwrap(),
        ];
        args.extend(bad);
        let out = run(&args);
        assert!(!out.status.success(), "{bad:?} accepted");
    }
    let config = dir.path().join("bad.cfg");
    fs::write(&config, "gamma = 3\n").unwrap();
    let out = run(&[
        "enhance",
        "--input",
        seq.join("input").to_str().unwrap(),
        "--masks",
        seq.join("masks").to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
        "--config",
        config.to_str().unwrap(),
    ]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("gamma"));
    assert!(!out_dir.exists());
}

#[test]
fn synth_writes_aligned_directories() {
    let dir = tempfile::tempdir().unwrap();
    synth(
        dir.path(),
        &[
            "--two-objects",
            "--width",
            "320",
            "--height",
            "240",
            "--p-fn",
            "0",
            "--p-fp",
            "0",
        ],
    );
    let masks = list_indexed(&dir.path().join("masks")).unwrap();
    let gts = list_indexed(&dir.path().join("groundtruth")).unwrap();
    assert_eq!(list_indexed(&dir.path().join("input")).unwrap().len(), 4);
    assert_eq!(
        masks.keys().collect::<Vec<_>>(),
        gts.keys().collect::<Vec<_>>()
    );
    for (i, path) in &masks {
        assert_eq!(read_mask(path).unwrap(), read_mask(&gts[i]).unwrap());
    }
}
