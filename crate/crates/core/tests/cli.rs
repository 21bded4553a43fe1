use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use chrono::NaiveDate;
use isacl::cli::model::ModelRecord;
use isacl::dataset::{logistic_series, write_series};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_isacl"))
}

fn isacl(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn write_data(dir: &Path) -> PathBuf {
    let ds = logistic_series(
        NaiveDate::from_ymd_opt(2020, 1, 22).unwrap(),
        73,
        2e5,
        0.1,
        45.0,
    )
    .unwrap();
    let path = dir.join("series.csv");
    write_series(&ds, fs::File::create(&path).unwrap()).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn without_timestamp(text: &str) -> String {
    text.lines()
        .filter(|l| !l.starts_with("# created"))
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn train_evaluate_forecast_round_trip() {
    let tmp = tempfile::tempdir().unwrap();
    let data = write_data(tmp.path());
    let out = tmp.path().join("run");
    let o = isacl(&[
        "train",
        "--data",
        s(&data),
        "--iters",
        "40",
        "--out-dir",
        s(&out),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));

    let trace = fs::read_to_string(out.join("trace.csv")).unwrap();
    let lines: Vec<&str> = trace.lines().collect();
    assert_eq!(lines[0], "iteration,best_mse");
    assert_eq!(lines.len(), 41);

    let model = ModelRecord::load(out.join("model.txt")).unwrap();
    assert_eq!(model.train_len, 69);
    assert_eq!(model.eval_count, 10 + 40 * 20);
    assert_eq!(model.params.encode().len(), 140);

    let o = isacl(&[
        "evaluate",
        "--model",
        s(&out.join("model.txt")),
        "--data",
        s(&data),
        "--out-dir",
        s(&out),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let report = fs::read_to_string(out.join("evaluation.csv")).unwrap();
    let rows: Vec<&str> = report.lines().collect();
    assert_eq!(rows[0], "set,rmse,mae,mape,rmsre,r2");
    assert!(rows[1].starts_with("train,") && rows[2].starts_with("test,"));

    let o = isacl(&[
        "forecast",
        "--model",
        s(&out.join("model.txt")),
        "--horizon",
        "12",
        "--out-dir",
        s(&out),
    ]);
    assert!(o.status.success());
    let forecast = fs::read_to_string(out.join("forecast.csv")).unwrap();
    let rows: Vec<&str> = forecast.lines().collect();
    assert_eq!(rows.len(), 13);
    assert_eq!(rows[0], "date,forecast");
    assert!(rows[1].starts_with("2020-04-04,"));
    assert!(rows[12].starts_with("2020-04-15,"));
    for r in &rows[1..] {
        let v: f64 = r.split(',').nth(1).unwrap().parse().unwrap();
        assert!(v.is_finite());
    }
}

#[test]
fn training_is_reproducible() {
    let tmp = tempfile::tempdir().unwrap();
    let data = write_data(tmp.path());
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    for dir in [&a, &b] {
        let o = isacl(&[
            "train",
            "--data",
            s(&data),
            "--algo",
            "pso",
            "--iters",
            "25",
            "--seed",
            "9",
            "--out-dir",
            s(dir),
        ]);
        assert!(o.status.success());
    }
    assert_eq!(
        fs::read(a.join("trace.csv")).unwrap(),
        fs::read(b.join("trace.csv")).unwrap()
    );
    let ma = fs::read_to_string(a.join("model.txt")).unwrap();
    let mb = fs::read_to_string(b.join("model.txt")).unwrap();
    assert!(ma.lines().any(|l| l.starts_with("# created ")));
    assert_eq!(without_timestamp(&ma), without_timestamp(&mb));
}

#[test]
fn compare_grid_outputs() {
    let tmp = tempfile::tempdir().unwrap();
    let data = write_data(tmp.path());
    let out = tmp.path().join("grid");
    let o = isacl(&[
        "compare",
        "--data",
        s(&data),
        "--algo",
        "ISA,ISACL",
        "--n-seeds",
        "5",
        "--iters",
        "20",
        "--out-dir",
        s(&out),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));

    let runs = fs::read_to_string(out.join("compare_runs.csv")).unwrap();
    assert_eq!(runs.lines().count(), 1 + 10);
    let summary = fs::read_to_string(out.join("compare_summary.csv")).unwrap();
    let algos: Vec<&str> = summary
        .lines()
        .skip(1)
        .map(|l| l.split(',').next().unwrap())
        .collect();
    assert_eq!(algos, ["ISA", "ISA", "ISACL", "ISACL"]);

    let plot = fs::read_to_string(out.join("plot.csv")).unwrap();
    let rows: Vec<&str> = plot.lines().collect();
    assert_eq!(rows[0], "day_index,actual,ISA,ISACL");
    assert_eq!(rows.len() - 1, 73 + 12);
    assert!(rows[85].starts_with("85,,"));

    let convergence = fs::read_to_string(out.join("convergence.csv")).unwrap();
    assert_eq!(convergence.lines().count(), 21);
}

#[test]
fn single_cell_grid_matches_train_and_evaluate() {
    let tmp = tempfile::tempdir().unwrap();
    let data = write_data(tmp.path());
    let (grid, single) = (tmp.path().join("grid"), tmp.path().join("single"));
    let common = ["--iters", "15", "--seed", "4"];
    let mut args = vec![
        "compare",
        "--data",
        s(&data),
        "--algo",
        "GWO",
        "--n-seeds",
        "1",
        "--out-dir",
        s(&grid),
    ];
    args.extend(common);
    assert!(isacl(&args).status.success());
    let mut args = vec![
        "train",
        "--data",
        s(&data),
        "--algo",
        "GWO",
        "--out-dir",
        s(&single),
    ];
    args.extend(common);
    assert!(isacl(&args).status.success());
    let model = single.join("model.txt");
    assert!(isacl(&[
        "evaluate",
        "--model",
        s(&model),
        "--data",
        s(&data),
        "--out-dir",
        s(&single)
    ])
    .status
    .success());

    let eval = fs::read_to_string(single.join("evaluation.csv")).unwrap();
    let train_row: Vec<&str> = eval.lines().nth(1).unwrap().split(',').skip(1).collect();
    let test_row: Vec<&str> = eval.lines().nth(2).unwrap().split(',').skip(1).collect();
    let runs = fs::read_to_string(grid.join("compare_runs.csv")).unwrap();
    let cell: Vec<&str> = runs.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(&cell[5..10], &train_row[..]);
    assert_eq!(&cell[10..15], &test_row[..]);
}

#[test]
fn failed_cells_are_marked() {
    let tmp = tempfile::tempdir().unwrap();
    let data = write_data(tmp.path());
    let out = tmp.path().join("grid");
    let o = isacl(&[
        "compare",
        "--data",
        s(&data),
        "--algo",
        "ISA,GWO",
        "--pop",
        "2",
        "--n-seeds",
        "2",
        "--iters",
        "5",
        "--out-dir",
        s(&out),
    ]);
    assert!(o.status.success());
    let runs = fs::read_to_string(out.join("compare_runs.csv")).unwrap();
    let status: Vec<&str> = runs
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(2).unwrap())
        .collect();
    assert_eq!(status, ["ok", "ok", "failed", "failed"]);
}

#[test]
fn exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    let data = write_data(tmp.path());
    let out = tmp.path().join("x");
    let code = |args: &[&str]| isacl(args).status.code();

    assert_eq!(
        code(&["train", "--data", s(&data), "--algo", "DE"]),
        Some(2)
    );
    assert_eq!(
        code(&[
            "train",
            "--data",
            s(&data),
            "--iters",
            "0",
            "--out-dir",
            s(&out)
        ]),
        Some(2)
    );
    assert_eq!(
        code(&[
            "train",
            "--data",
            s(&data),
            "--bounds",
            "5,1",
            "--out-dir",
            s(&out)
        ]),
        Some(2)
    );
    assert_eq!(
        code(&[
            "evaluate",
            "--model",
            s(&tmp.path().join("missing.txt")),
            "--data",
            s(&data)
        ]),
        Some(2)
    );
    assert_eq!(
        code(&[
            "compare",
            "--data",
            s(&data),
            "--n-seeds",
            "0",
            "--out-dir",
            s(&out)
        ]),
        Some(2)
    );

    assert_eq!(
        code(&[
            "train",
            "--data",
            s(&data),
            "--iters",
            "3",
            "--out-dir",
            s(&out)
        ]),
        Some(0)
    );
    let model = out.join("model.txt");
    assert_eq!(
        code(&[
            "forecast",
            "--model",
            s(&model),
            "--horizon",
            "0",
            "--out-dir",
            s(&out)
        ]),
        Some(2)
    );
    assert_eq!(
        code(&[
            "forecast",
            "--model",
            s(&model),
            "--horizon",
            "-3",
            "--out-dir",
            s(&out)
        ]),
        Some(2)
    );

    let bad = tmp.path().join("gap.csv");
    fs::write(&bad, "date,cumulative_cases\n2020-01-22,1\n2020-01-24,3\n").unwrap();
    assert_eq!(
        code(&["train", "--data", s(&bad), "--out-dir", s(&out)]),
        Some(1)
    );

    let doubled = tmp.path().join("doubled.csv");
    let text = fs::read_to_string(&data).unwrap();
    let scaled: Vec<String> = text
        .lines()
        .enumerate()
        .map(|(i, l)| {
            if i == 0 {
                return l.to_string();
            }
            let (d, c) = l.split_once(',').unwrap();
            format!("{d},{}", c.parse::<u64>().unwrap() * 2)
        })
        .collect();
    fs::write(&doubled, scaled.join("\n")).unwrap();
    assert_eq!(
        code(&[
            "evaluate",
            "--model",
            s(&model),
            "--data",
            s(&doubled),
            "--out-dir",
            s(&out)
        ]),
        Some(1)
    );
}
