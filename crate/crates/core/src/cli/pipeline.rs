//! Train, evaluate, forecast and compare, independent of argument parsing
//! and file layout.

use chrono::{Days, NaiveDate};
use rayon::prelude::*;

use super::config::RunConfig;
use super::model::ModelRecord;
use crate::algorithm::Algorithm;
use crate::dataset::{fit_scaler, split, to_samples, SeriesDataset, SplitPolicy};
use crate::error::{Error, Result};
use crate::metrics::{compute_metrics_with, MetricsReport};
use crate::mfnn::{bp_train, MseObjective, NetworkParams};
use crate::optim::{run, SearchSpace};

#[derive(Clone, Debug, PartialEq)]
pub struct TrainOutcome {
    pub model: ModelRecord,
    /// Best-so-far training MSE per iteration (per epoch for back-propagation).
    pub trace: Vec<f64>,
}

pub fn train(series: &SeriesDataset, config: &RunConfig) -> Result<TrainOutcome> {
    config.validate()?;
    if config.network.n_inputs != 1 || config.network.n_outputs != 1 {
        return Err(Error::invalid(
            "series forecasting uses one input and one output",
        ));
    }
    let (train_half, _) = split(series, config.split)?;
    let scaler = fit_scaler(&train_half, series.last_day() + config.horizon_days)?;
    let samples = to_samples(&train_half, &scaler)?;
    let spec = config.network;

    let (flat, trace, eval_count) = match config.algorithm.optimizer() {
        Some(mut optimizer) => {
            let objective = MseObjective::new(spec, samples)?;
            let space = SearchSpace::uniform(spec.dim(), config.bounds.0, config.bounds.1)?;
            let t = run(
                optimizer.as_mut(),
                &space,
                config.pop_size,
                config.iters,
                config.seed,
                &objective,
            )?;
            (t.final_best.position, t.best_per_iter, t.eval_count)
        }
        None => {
            let out = bp_train(
                spec,
                &samples,
                config.learning_rate,
                config.iters,
                config.seed,
            )?;
            let mut best = f64::INFINITY;
            let trace = out
                .losses
                .iter()
                .map(|&l| {
                    best = best.min(l);
                    best
                })
                .collect();
            (out.params.encode(), trace, config.iters)
        }
    };
    let params = NetworkParams::decode(&flat, spec)?;
    let train_mse = crate::mfnn::mse_fitness(&flat, spec, &to_samples(&train_half, &scaler)?)?;
    Ok(TrainOutcome {
        model: ModelRecord {
            config: config.clone(),
            params,
            scaler,
            series_start: series.first_date(),
            series_len: series.len(),
            train_len: train_half.len(),
            train_mse,
            eval_count,
        },
        trace,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Evaluation {
    pub train: MetricsReport,
    pub test: MetricsReport,
}

/// Metrics on the training and held-out halves, in original units.
pub fn evaluate(model: &ModelRecord, series: &SeriesDataset) -> Result<Evaluation> {
    if series.first_date() != model.series_start {
        return Err(Error::Compatibility(format!(
            "model was trained on a series starting {}, data starts {}",
            model.series_start,
            series.first_date()
        )));
    }
    if series.len() <= model.train_len {
        return Err(Error::Compatibility(format!(
            "data has {} days but the model trained on the first {}",
            series.len(),
            model.train_len
        )));
    }
    let (train_half, test_half) = split(series, SplitPolicy::Date(model.train_end()))?;
    let refit = fit_scaler(&train_half, model.scaler.input_span as usize)?;
    if refit.target_max != model.scaler.target_max {
        return Err(Error::Compatibility(format!(
            "training maximum in data ({}) differs from the model's scaler ({})",
            refit.target_max, model.scaler.target_max
        )));
    }
    let metrics = |half: &SeriesDataset| {
        let predicted: Vec<f64> = half
            .day_indices()
            .map(|d| model.predict(d as f64))
            .collect();
        compute_metrics_with(&half.cumulative, &predicted, model.config.denominator)
    };
    Ok(Evaluation {
        train: metrics(&train_half)?,
        test: metrics(&test_half)?,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ForecastRow {
    pub date: NaiveDate,
    pub day_index: usize,
    pub forecast: f64,
}

/// Forecasts the `horizon` days following the end of the training series.
pub fn forecast(model: &ModelRecord, horizon: usize) -> Result<Vec<ForecastRow>> {
    if horizon == 0 {
        return Err(Error::invalid("horizon must be at least 1 day"));
    }
    let end = model.series_end();
    Ok((1..=horizon)
        .map(|h| {
            let day_index = model.series_len + h;
            ForecastRow {
                date: end + Days::new(h as u64),
                day_index,
                forecast: model.predict(day_index as f64),
            }
        })
        .collect())
}

/// One (algorithm, seed) cell of a comparison grid.
#[derive(Clone, Debug)]
pub struct Cell {
    pub algorithm: Algorithm,
    pub seed: u64,
    pub outcome: std::result::Result<CellResult, String>,
}

#[derive(Clone, Debug)]
pub struct CellResult {
    pub model: ModelRecord,
    pub evaluation: Evaluation,
    pub trace: Vec<f64>,
}

/// Runs every algorithm for seeds `base.seed .. base.seed + n_seeds`.
/// Cells run concurrently; the result is ordered by algorithm list then seed.
pub fn compare(
    series: &SeriesDataset,
    algorithms: &[Algorithm],
    n_seeds: usize,
    base: &RunConfig,
) -> Result<Vec<Cell>> {
    if algorithms.is_empty() {
        return Err(Error::invalid("at least one algorithm is required"));
    }
    if n_seeds == 0 {
        return Err(Error::invalid("n_seeds must be at least 1"));
    }
    base.validate()?;
    let jobs: Vec<(Algorithm, u64)> = algorithms
        .iter()
        .flat_map(|&a| (0..n_seeds as u64).map(move |s| (a, base.seed + s)))
        .collect();
    Ok(jobs
        .into_par_iter()
        .map(|(algorithm, seed)| {
            let config = RunConfig {
                algorithm,
                seed,
                ..base.clone()
            };
            let outcome = train(series, &config)
                .and_then(|t| {
                    let evaluation = evaluate(&t.model, series)?;
                    Ok(CellResult {
                        model: t.model,
                        evaluation,
                        trace: t.trace,
                    })
                })
                .map_err(|e| e.to_string());
            Cell {
                algorithm,
                seed,
                outcome,
            }
        })
        .collect())
}

/// Per-algorithm summary of a comparison grid.
#[derive(Clone, Debug)]
pub struct AlgorithmSummary {
    pub algorithm: Algorithm,
    pub runs: usize,
    pub failed: usize,
    /// Cell with the lowest training MSE.
    pub best: Option<(u64, CellResult)>,
    pub median_train: Option<MetricsReport>,
    pub median_test: Option<MetricsReport>,
}

pub fn summarize(cells: &[Cell], algorithms: &[Algorithm]) -> Vec<AlgorithmSummary> {
    algorithms
        .iter()
        .map(|&algorithm| {
            let mine: Vec<&Cell> = cells.iter().filter(|c| c.algorithm == algorithm).collect();
            let ok: Vec<(u64, &CellResult)> = mine
                .iter()
                .filter_map(|c| c.outcome.as_ref().ok().map(|r| (c.seed, r)))
                .collect();
            let best = ok
                .iter()
                .min_by(|a, b| a.1.model.train_mse.total_cmp(&b.1.model.train_mse))
                .map(|(s, r)| (*s, (*r).clone()));
            let median_of = |pick: fn(&Evaluation) -> MetricsReport| {
                if ok.is_empty() {
                    return None;
                }
                let mut fields = [0.0; 5];
                for (f, slot) in fields.iter_mut().enumerate() {
                    let values: Vec<f64> = ok
                        .iter()
                        .map(|(_, r)| pick(&r.evaluation).values()[f])
                        .collect();
                    *slot = median(values);
                }
                Some(MetricsReport::from_values(fields))
            };
            AlgorithmSummary {
                algorithm,
                runs: mine.len(),
                failed: mine.len() - ok.len(),
                best,
                median_train: median_of(|e| e.train),
                median_test: median_of(|e| e.test),
            }
        })
        .collect()
}

pub fn median(mut values: Vec<f64>) -> f64 {
    assert!(!values.is_empty(), "median of empty set");
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}
