//! CSV writers for traces, metrics, forecasts and comparison grids.
//!
//! Every writer is deterministic: no timestamps, fixed column order, rows
//! ordered by (algorithm, seed).

use std::io::Write;

use super::pipeline::{AlgorithmSummary, Cell, Evaluation, ForecastRow};
use crate::algorithm::Algorithm;
use crate::dataset::SeriesDataset;
use crate::error::Result;
use crate::metrics::{sig6, MetricsReport};

fn metric_columns(prefix: &str) -> Vec<String> {
    MetricsReport::FIELDS
        .iter()
        .map(|f| format!("{prefix}{f}"))
        .collect()
}

fn metric_cells(m: Option<&MetricsReport>) -> Vec<String> {
    match m {
        Some(m) => m.values().iter().map(|&v| sig6(v)).collect(),
        None => vec![String::new(); MetricsReport::FIELDS.len()],
    }
}

pub fn write_trace<W: Write>(trace: &[f64], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["iteration", "best_mse"])?;
    for (i, v) in trace.iter().enumerate() {
        w.write_record([(i + 1).to_string(), v.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// `set,rmse,mae,mape,rmsre,r2` with a `train` and a `test` row.
pub fn write_evaluation<W: Write>(eval: &Evaluation, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["set".to_string()];
    header.extend(metric_columns(""));
    w.write_record(&header)?;
    for (name, m) in [("train", &eval.train), ("test", &eval.test)] {
        let mut row = vec![name.to_string()];
        row.extend(metric_cells(Some(m)));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_forecast<W: Write>(rows: &[ForecastRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["date", "forecast"])?;
    for r in rows {
        w.write_record([r.date.to_string(), r.forecast.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// One row per grid cell. Failed cells carry `status=failed` and the error
/// text; their metric columns are empty.
pub fn write_runs<W: Write>(cells: &[Cell], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<String> = ["algorithm", "seed", "status", "train_mse", "eval_count"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    header.extend(metric_columns("train_"));
    header.extend(metric_columns("test_"));
    header.push("error".into());
    w.write_record(&header)?;
    for c in cells {
        let mut row = vec![c.algorithm.name().to_string(), c.seed.to_string()];
        match &c.outcome {
            Ok(r) => {
                row.extend([
                    "ok".to_string(),
                    sig6(r.model.train_mse),
                    r.model.eval_count.to_string(),
                ]);
                row.extend(metric_cells(Some(&r.evaluation.train)));
                row.extend(metric_cells(Some(&r.evaluation.test)));
                row.push(String::new());
            }
            Err(e) => {
                row.extend(["failed".to_string(), String::new(), String::new()]);
                row.extend(metric_cells(None));
                row.extend(metric_cells(None));
                row.push(e.clone());
            }
        }
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// Two rows per algorithm: the best run by training MSE, and the median of
/// each metric across successful runs.
pub fn write_summary<W: Write>(summaries: &[AlgorithmSummary], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<String> = ["algorithm", "statistic", "seed", "runs", "failed"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    header.extend(metric_columns("train_"));
    header.extend(metric_columns("test_"));
    w.write_record(&header)?;
    for s in summaries {
        let head = |stat: &str, seed: String| {
            vec![
                s.algorithm.name().to_string(),
                stat.to_string(),
                seed,
                s.runs.to_string(),
                s.failed.to_string(),
            ]
        };
        let mut best = head(
            "best",
            s.best
                .as_ref()
                .map(|(seed, _)| seed.to_string())
                .unwrap_or_default(),
        );
        best.extend(metric_cells(
            s.best.as_ref().map(|(_, r)| &r.evaluation.train),
        ));
        best.extend(metric_cells(
            s.best.as_ref().map(|(_, r)| &r.evaluation.test),
        ));
        w.write_record(&best)?;
        let mut median = head("median", String::new());
        median.extend(metric_cells(s.median_train.as_ref()));
        median.extend(metric_cells(s.median_test.as_ref()));
        w.write_record(&median)?;
    }
    w.flush()?;
    Ok(())
}

/// `day_index,actual,<algo>...` over the series and `horizon` further days,
/// using each algorithm's best run. `actual` is empty past the series end.
pub fn write_plot_data<W: Write>(
    series: &SeriesDataset,
    summaries: &[AlgorithmSummary],
    horizon: usize,
    out: W,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["day_index".to_string(), "actual".to_string()];
    header.extend(summaries.iter().map(|s| s.algorithm.name().to_string()));
    w.write_record(&header)?;
    for day in 1..=series.len() + horizon {
        let mut row = vec![day.to_string()];
        row.push(
            series
                .cumulative
                .get(day - 1)
                .map(|v| v.to_string())
                .unwrap_or_default(),
        );
        for s in summaries {
            row.push(
                s.best
                    .as_ref()
                    .map(|(_, r)| r.model.predict(day as f64).to_string())
                    .unwrap_or_default(),
            );
        }
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// `iteration,<algo>...` holding the best run's convergence trace.
pub fn write_convergence<W: Write>(summaries: &[AlgorithmSummary], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["iteration".to_string()];
    header.extend(summaries.iter().map(|s| s.algorithm.name().to_string()));
    w.write_record(&header)?;
    let len = summaries
        .iter()
        .filter_map(|s| s.best.as_ref().map(|(_, r)| r.trace.len()))
        .max()
        .unwrap_or(0);
    for i in 0..len {
        let mut row = vec![(i + 1).to_string()];
        for s in summaries {
            row.push(
                s.best
                    .as_ref()
                    .and_then(|(_, r)| r.trace.get(i))
                    .map(|v| v.to_string())
                    .unwrap_or_default(),
            );
        }
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// Human-readable metrics block for stdout.
pub fn format_evaluation(algorithm: Algorithm, eval: &Evaluation) -> String {
    let mut s = format!("{algorithm}\n{:<6}", "set");
    for f in MetricsReport::FIELDS {
        s.push_str(&format!(" {f:>12}"));
    }
    for (name, m) in [("train", &eval.train), ("test", &eval.test)] {
        s.push_str(&format!("\n{name:<6}"));
        for v in m.values() {
            s.push_str(&format!(" {:>12}", sig6(v)));
        }
    }
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use chrono::NaiveDate;

    fn text(f: impl FnOnce(&mut Vec<u8>) -> Result<()>) -> String {
        let mut buf = Vec::new();
        f(&mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn trace_rows() {
        let t = text(|b| write_trace(&[3.0, 2.5, 2.5], b));
        assert_eq!(t, "iteration,best_mse\n1,3\n2,2.5\n3,2.5\n");
    }

    #[test]
    fn evaluation_fields() {
        let m = MetricsReport::from_values([0.816497, 0.5, 0.25, 0.408248, 0.999345]);
        let t = text(|b| write_evaluation(&Evaluation { train: m, test: m }, b));
        let mut lines = t.lines();
        assert_eq!(lines.next(), Some("set,rmse,mae,mape,rmsre,r2"));
        assert_eq!(
            lines.next(),
            Some("train,0.816497,0.500000,0.250000,0.408248,0.999345")
        );
        assert_eq!(lines.count(), 1);
    }

    #[test]
    fn forecast_rows() {
        let rows = vec![ForecastRow {
            date: NaiveDate::from_ymd_opt(2020, 4, 4).unwrap(),
            day_index: 74,
            forecast: 1234.5,
        }];
        assert_eq!(
            text(|b| write_forecast(&rows, b)),
            "date,forecast\n2020-04-04,1234.5\n"
        );
    }
}
