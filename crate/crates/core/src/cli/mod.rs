//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 on runtime failure, 2 on usage errors
//! (bad flags, invalid argument values, missing model file).

pub mod config;
pub mod model;
pub mod pipeline;
pub mod report;

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use clap::{Args, Parser, Subcommand};

use self::config::{parse_bounds, RunConfig};
use self::model::ModelRecord;
use crate::algorithm::Algorithm;
use crate::dataset::{load_series, SeriesDataset, SplitPolicy};
use crate::error::Error;
use crate::metrics::Denominator;
use crate::mfnn::NetworkSpec;

pub const EXIT_RUNTIME: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

pub const MODEL_FILE: &str = "model.txt";
pub const TRACE_FILE: &str = "trace.csv";
pub const EVALUATION_FILE: &str = "evaluation.csv";
pub const FORECAST_FILE: &str = "forecast.csv";
pub const RUNS_FILE: &str = "compare_runs.csv";
pub const SUMMARY_FILE: &str = "compare_summary.csv";
pub const PLOT_FILE: &str = "plot.csv";
pub const CONVERGENCE_FILE: &str = "convergence.csv";

#[derive(Parser, Debug)]
#[command(
    name = "isacl",
    version,
    about = "Train and compare metaheuristic-trained MFNN forecasters"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Train a model and write model.txt and trace.csv.
    Train {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, default_value = "ISACL")]
        algo: Algorithm,
    },
    /// Report train and test metrics for a saved model.
    Evaluate {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        data: PathBuf,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Forecast the days after the training series.
    Forecast {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        horizon: Option<i64>,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Run every algorithm over several seeds and summarise.
    Compare {
        #[command(flatten)]
        run: RunArgs,
        /// Comma-separated list; defaults to all algorithms.
        #[arg(long, value_delimiter = ',')]
        algo: Vec<Algorithm>,
        #[arg(long, default_value_t = 10)]
        n_seeds: usize,
    },
}

#[derive(Args, Debug)]
struct RunArgs {
    #[arg(long)]
    data: PathBuf,
    #[arg(long, default_value_t = 500)]
    iters: usize,
    #[arg(long, default_value_t = 10)]
    pop: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Last training date (inclusive). Defaults to 2020-03-30.
    #[arg(long, conflicts_with = "split_ratio")]
    split_date: Option<NaiveDate>,
    #[arg(long)]
    split_ratio: Option<f64>,
    #[arg(long, default_value_t = 12)]
    horizon: usize,
    #[arg(long, default_value_t = 10)]
    hidden1: usize,
    #[arg(long, default_value_t = 10)]
    hidden2: usize,
    /// `LO,HI` or `B` for `-B,B`.
    #[arg(long, default_value = "-10,10", allow_hyphen_values = true)]
    bounds: String,
    #[arg(long, default_value = "model")]
    mape_denominator: Denominator,
    /// Back-propagation step size (MFNN-BP only).
    #[arg(long, default_value_t = 0.1)]
    learning_rate: f64,
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

impl RunArgs {
    fn config(&self, algorithm: Algorithm) -> Result<RunConfig, Error> {
        let defaults = RunConfig::default();
        let split = match (self.split_date, self.split_ratio) {
            (Some(d), _) => SplitPolicy::Date(d),
            (None, Some(r)) => SplitPolicy::Ratio(r),
            (None, None) => defaults.split,
        };
        let config = RunConfig {
            algorithm,
            iters: self.iters,
            pop_size: self.pop,
            seed: self.seed,
            network: NetworkSpec::new(1, self.hidden1, self.hidden2, 1)?,
            bounds: parse_bounds(&self.bounds)?,
            split,
            horizon_days: self.horizon,
            denominator: self.mape_denominator,
            learning_rate: self.learning_rate,
        };
        config.validate()?;
        Ok(config)
    }
}

/// Failure carrying its exit code.
#[derive(Debug)]
pub struct CliFailure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for CliFailure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::InvalidArgument(_) => EXIT_USAGE,
            _ => EXIT_RUNTIME,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> CliFailure {
    CliFailure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

/// Parses `args` (including the program name), runs the command and
/// returns the process exit code. Messages go to stdout/stderr.
pub fn run_from_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with_output(args, &mut std::io::stdout().lock())
}

/// As [`run_from_args`], with progress and reports written to `out`.
/// Usage and error messages still go to stderr.
pub fn run_with_output<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(cli.command, out) {
        Ok(()) => 0,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

fn execute(command: Command, out: &mut dyn Write) -> Result<(), CliFailure> {
    match command {
        Command::Train { run, algo } => {
            let config = run.config(algo)?;
            let series = read_data(&run.data)?;
            let result = pipeline::train(&series, &config)?;
            prepare_dir(&run.out_dir)?;
            let created = chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true);
            result
                .model
                .save(run.out_dir.join(MODEL_FILE), Some(&created))?;
            report::write_trace(&result.trace, create(&run.out_dir.join(TRACE_FILE))?)?;
            say(
                out,
                format_args!(
                    "{} seed {}: train mse {} after {} evaluations\n",
                    config.algorithm,
                    config.seed,
                    crate::metrics::sig6(result.model.train_mse),
                    result.model.eval_count
                ),
            );
            Ok(())
        }
        Command::Evaluate {
            model,
            data,
            out_dir,
        } => {
            let record = read_model(&model)?;
            let series = read_data(&data)?;
            let eval = pipeline::evaluate(&record, &series)?;
            prepare_dir(&out_dir)?;
            report::write_evaluation(&eval, create(&out_dir.join(EVALUATION_FILE))?)?;
            say(
                out,
                format_args!(
                    "{}",
                    report::format_evaluation(record.config.algorithm, &eval)
                ),
            );
            Ok(())
        }
        Command::Forecast {
            model,
            horizon,
            out_dir,
        } => {
            let record = read_model(&model)?;
            let horizon = match horizon {
                None => record.config.horizon_days,
                Some(h) if h >= 1 => h as usize,
                Some(h) => return Err(usage(format!("horizon must be at least 1 day, got {h}"))),
            };
            let rows = pipeline::forecast(&record, horizon)?;
            prepare_dir(&out_dir)?;
            report::write_forecast(&rows, create(&out_dir.join(FORECAST_FILE))?)?;
            for r in &rows {
                say(
                    out,
                    format_args!("{} {}\n", r.date, crate::metrics::sig6(r.forecast)),
                );
            }
            Ok(())
        }
        Command::Compare { run, algo, n_seeds } => {
            let algorithms = if algo.is_empty() {
                Algorithm::ALL.to_vec()
            } else {
                algo
            };
            let config = run.config(algorithms[0])?;
            let series = read_data(&run.data)?;
            let cells = pipeline::compare(&series, &algorithms, n_seeds, &config)?;
            let summaries = pipeline::summarize(&cells, &algorithms);
            prepare_dir(&run.out_dir)?;
            report::write_runs(&cells, create(&run.out_dir.join(RUNS_FILE))?)?;
            report::write_summary(&summaries, create(&run.out_dir.join(SUMMARY_FILE))?)?;
            report::write_plot_data(
                &series,
                &summaries,
                config.horizon_days,
                create(&run.out_dir.join(PLOT_FILE))?,
            )?;
            report::write_convergence(&summaries, create(&run.out_dir.join(CONVERGENCE_FILE))?)?;
            for s in &summaries {
                match &s.best {
                    Some((seed, r)) => say(
                        out,
                        format_args!(
                            "best of {} runs ({} failed), seed {seed}: {}",
                            s.runs,
                            s.failed,
                            report::format_evaluation(s.algorithm, &r.evaluation)
                        ),
                    ),
                    None => say(
                        out,
                        format_args!("{}: all {} runs failed\n", s.algorithm, s.runs),
                    ),
                }
            }
            Ok(())
        }
    }
}

fn say(out: &mut dyn Write, args: std::fmt::Arguments<'_>) {
    let _ = out.write_fmt(args);
}

fn read_data(path: &Path) -> Result<SeriesDataset, CliFailure> {
    if !path.is_file() {
        return Err(usage(format!("data file {} not found", path.display())));
    }
    let series = load_series(path)?;
    for w in &series.warnings {
        eprintln!("warning: {w}");
    }
    Ok(series)
}

fn read_model(path: &Path) -> Result<ModelRecord, CliFailure> {
    if !path.is_file() {
        return Err(usage(format!("model file {} not found", path.display())));
    }
    Ok(ModelRecord::load(path)?)
}

fn prepare_dir(dir: &Path) -> Result<(), CliFailure> {
    std::fs::create_dir_all(dir).map_err(|e| CliFailure {
        code: EXIT_RUNTIME,
        message: format!("cannot create {}: {e}", dir.display()),
    })
}

fn create(path: &Path) -> Result<BufWriter<File>, CliFailure> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliFailure {
            code: EXIT_RUNTIME,
            message: format!("cannot write {}: {e}", path.display()),
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(
            run_from_args(["isacl", "train", "--data", "x.csv", "--algo", "nope"]),
            EXIT_USAGE
        );
        assert_eq!(run_from_args(["isacl", "bogus"]), EXIT_USAGE);
        assert_eq!(
            run_from_args([
                "isacl",
                "evaluate",
                "--model",
                "/nonexistent/m.txt",
                "--data",
                "x.csv"
            ]),
            EXIT_USAGE
        );
        assert_eq!(
            run_from_args([
                "isacl",
                "forecast",
                "--model",
                "/nonexistent/m.txt",
                "--horizon",
                "3"
            ]),
            EXIT_USAGE
        );
    }

    #[test]
    fn parses_defaults() {
        let cli = Cli::try_parse_from(["isacl", "train", "--data", "d.csv"]).unwrap();
        let Command::Train { run, algo } = cli.command else {
            panic!("expected train");
        };
        assert_eq!(run.config(algo).unwrap(), RunConfig::default());
    }

    #[test]
    fn parses_negative_bounds_and_lists() {
        let cli = Cli::try_parse_from([
            "isacl",
            "compare",
            "--data",
            "d.csv",
            "--algo",
            "isa,ISACL",
            "--bounds",
            "-5,5",
            "--n-seeds",
            "3",
        ])
        .unwrap();
        let Command::Compare { run, algo, n_seeds } = cli.command else {
            panic!("expected compare");
        };
        assert_eq!(algo, vec![Algorithm::Isa, Algorithm::Isacl]);
        assert_eq!(n_seeds, 3);
        assert_eq!(run.config(Algorithm::Isa).unwrap().bounds, (-5.0, 5.0));
    }
}
