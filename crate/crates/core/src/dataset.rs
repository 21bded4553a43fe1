//! Cumulative daily series: CSV ingestion, chronological splitting and
//! scaling into network space.

use std::collections::BTreeMap;
use std::io::Read;
use std::path::Path;

use chrono::{Days, NaiveDate};

use crate::error::{Error, Result};
use crate::mfnn::Samples;

pub const CSV_HEADER: [&str; 2] = ["date", "cumulative_cases"];

/// A contiguous run of daily cumulative counts. `start_day` is the 1-based
/// day index of the first row within the full series.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesDataset {
    pub start_day: usize,
    pub dates: Vec<NaiveDate>,
    pub cumulative: Vec<f64>,
    /// Days on which the cumulative count decreased.
    pub warnings: Vec<String>,
}

impl SeriesDataset {
    /// Builds a series starting at day 1 from consecutive daily values.
    pub fn from_values(start: NaiveDate, cumulative: Vec<f64>) -> Result<Self> {
        if cumulative.is_empty() {
            return Err(Error::invalid("series is empty"));
        }
        let dates = (0..cumulative.len())
            .map(|i| start + Days::new(i as u64))
            .collect();
        let mut ds = Self {
            start_day: 1,
            dates,
            cumulative,
            warnings: Vec::new(),
        };
        ds.warnings = ds.monotonicity_warnings();
        Ok(ds)
    }

    pub fn len(&self) -> usize {
        self.dates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dates.is_empty()
    }

    pub fn day_indices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).map(|i| self.start_day + i)
    }

    pub fn first_date(&self) -> NaiveDate {
        self.dates[0]
    }

    pub fn last_date(&self) -> NaiveDate {
        *self.dates.last().expect("non-empty series")
    }

    pub fn last_day(&self) -> usize {
        self.start_day + self.len() - 1
    }

    fn monotonicity_warnings(&self) -> Vec<String> {
        self.cumulative
            .windows(2)
            .zip(&self.dates[1..])
            .filter(|(w, _)| w[1] < w[0])
            .map(|(w, d)| format!("{d}: cumulative count drops from {} to {}", w[0], w[1]))
            .collect()
    }

    fn slice(&self, range: std::ops::Range<usize>) -> Self {
        let mut ds = Self {
            start_day: self.start_day + range.start,
            dates: self.dates[range.clone()].to_vec(),
            cumulative: self.cumulative[range].to_vec(),
            warnings: Vec::new(),
        };
        ds.warnings = ds.monotonicity_warnings();
        ds
    }

    /// Concatenates two adjacent halves back into one series.
    pub fn concat(&self, next: &SeriesDataset) -> Result<Self> {
        if next.start_day != self.last_day() + 1 {
            return Err(Error::invalid("series halves are not adjacent"));
        }
        let mut ds = self.clone();
        ds.dates.extend_from_slice(&next.dates);
        ds.cumulative.extend_from_slice(&next.cumulative);
        ds.warnings = ds.monotonicity_warnings();
        Ok(ds)
    }
}

pub fn load_series(path: impl AsRef<Path>) -> Result<SeriesDataset> {
    let file = std::fs::File::open(path.as_ref())?;
    read_series(file)
}

/// Parses the `date,cumulative_cases` CSV format.
pub fn read_series<R: Read>(reader: R) -> Result<SeriesDataset> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut records = rdr.records();

    let header = match records.next() {
        None => {
            return Err(Error::Parse {
                line: 1,
                message: "empty file".into(),
            })
        }
        Some(r) => r.map_err(|e| csv_parse_error(e, 1))?,
    };
    let header: Vec<&str> = header
        .iter()
        .map(|h| h.trim_start_matches('\u{feff}'))
        .collect();
    if header != CSV_HEADER {
        return Err(Error::Parse {
            line: 1,
            message: format!(
                "expected header `date,cumulative_cases`, found `{}`",
                header.join(",")
            ),
        });
    }

    let mut rows = BTreeMap::new();
    for (i, record) in records.enumerate() {
        let line = i + 2;
        let record = record.map_err(|e| csv_parse_error(e, line))?;
        if record.iter().all(|f| f.is_empty()) {
            continue;
        }
        if record.len() != 2 {
            return Err(Error::Parse {
                line,
                message: format!("expected 2 fields, found {}", record.len()),
            });
        }
        let date = NaiveDate::parse_from_str(&record[0], "%Y-%m-%d").map_err(|e| Error::Parse {
            line,
            message: format!("bad date `{}`: {e}", &record[0]),
        })?;
        let count: u64 = record[1].parse().map_err(|_| Error::Parse {
            line,
            message: format!(
                "bad count `{}`: expected a non-negative integer",
                &record[1]
            ),
        })?;
        if rows.insert(date, count as f64).is_some() {
            return Err(Error::Parse {
                line,
                message: format!("duplicated date {date}"),
            });
        }
    }
    if rows.is_empty() {
        return Err(Error::Parse {
            line: 2,
            message: "no data rows".into(),
        });
    }

    let dates: Vec<NaiveDate> = rows.keys().copied().collect();
    let mut missing = Vec::new();
    for w in dates.windows(2) {
        let mut d = w[0].succ_opt().expect("date in range");
        while d < w[1] {
            missing.push(d);
            d = d.succ_opt().expect("date in range");
        }
    }
    if !missing.is_empty() {
        return Err(Error::Gap { missing });
    }
    SeriesDataset::from_values(dates[0], rows.into_values().collect())
}

fn csv_parse_error(e: csv::Error, fallback_line: usize) -> Error {
    let line = e
        .position()
        .map(|p| p.line() as usize)
        .unwrap_or(fallback_line);
    Error::Parse {
        line,
        message: e.to_string(),
    }
}

pub fn write_series<W: std::io::Write>(ds: &SeriesDataset, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(CSV_HEADER)?;
    for (d, c) in ds.dates.iter().zip(&ds.cumulative) {
        w.write_record([d.to_string(), format!("{}", c.round() as u64)])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SplitPolicy {
    /// Fraction of days used for training, `floor(ratio * T)`.
    Ratio(f64),
    /// Last training date, inclusive.
    Date(NaiveDate),
}

/// Contiguous chronological split into `(train, test)`.
pub fn split(ds: &SeriesDataset, policy: SplitPolicy) -> Result<(SeriesDataset, SeriesDataset)> {
    let n_train = match policy {
        SplitPolicy::Ratio(r) => {
            if !(r > 0.0 && r < 1.0) {
                return Err(Error::invalid(format!(
                    "split ratio {r} must lie in (0, 1)"
                )));
            }
            (r * ds.len() as f64).floor() as usize
        }
        SplitPolicy::Date(d) => match ds.dates.iter().position(|x| *x == d) {
            Some(i) => i + 1,
            None => {
                return Err(Error::invalid(format!(
                    "split date {d} is outside the series {}..{}",
                    ds.first_date(),
                    ds.last_date()
                )))
            }
        },
    };
    if n_train == 0 || n_train >= ds.len() {
        return Err(Error::invalid(format!(
            "split leaves an empty side ({n_train} of {} days in training)",
            ds.len()
        )));
    }
    Ok((ds.slice(0..n_train), ds.slice(n_train..ds.len())))
}

/// Affine maps between day/count space and network space.
///
/// Inputs: `day / input_span`, so the design range `[1, input_span]` maps
/// into `(0, 1]`. Targets: `count / target_max`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Scaler {
    pub input_span: f64,
    pub target_max: f64,
}

impl Scaler {
    pub fn new(input_span: f64, target_max: f64) -> Result<Self> {
        if !(input_span.is_finite() && input_span >= 1.0) {
            return Err(Error::invalid(format!(
                "input span {input_span} must be at least 1"
            )));
        }
        if !(target_max.is_finite() && target_max > 0.0) {
            return Err(Error::invalid(format!(
                "target scale {target_max} must be positive"
            )));
        }
        Ok(Self {
            input_span,
            target_max,
        })
    }

    pub fn scale_input(&self, day: f64) -> f64 {
        day / self.input_span
    }

    pub fn unscale_input(&self, x: f64) -> f64 {
        x * self.input_span
    }

    pub fn scale_target(&self, count: f64) -> f64 {
        count / self.target_max
    }

    pub fn unscale_target(&self, y: f64) -> f64 {
        y * self.target_max
    }
}

/// Fits the scaler on the training half only. `input_span` is the last day
/// index the model will be asked about, typically the series length plus
/// the forecast horizon.
pub fn fit_scaler(train: &SeriesDataset, input_span: usize) -> Result<Scaler> {
    if train.is_empty() {
        return Err(Error::invalid("cannot fit a scaler on an empty series"));
    }
    let max = train
        .cumulative
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    if max <= 0.0 {
        return Err(Error::invalid(
            "training series has no positive count to scale by",
        ));
    }
    Scaler::new(input_span.max(train.last_day()) as f64, max)
}

/// Network training pairs in scaled space.
pub fn to_samples(ds: &SeriesDataset, scaler: &Scaler) -> Result<Samples> {
    let inputs: Vec<f64> = ds
        .day_indices()
        .map(|d| scaler.scale_input(d as f64))
        .collect();
    let targets: Vec<f64> = ds
        .cumulative
        .iter()
        .map(|&c| scaler.scale_target(c))
        .collect();
    Samples::scalar(&inputs, &targets)
}

/// Noise-free logistic growth `k / (1 + exp(-rate (t - midpoint)))` sampled
/// on days `1..=days` and rounded to whole counts.
pub fn logistic_series(
    start: NaiveDate,
    days: usize,
    k: f64,
    rate: f64,
    midpoint: f64,
) -> Result<SeriesDataset> {
    let values = (1..=days)
        .map(|t| (k / (1.0 + (-rate * (t as f64 - midpoint)).exp())).round())
        .collect();
    SeriesDataset::from_values(start, values)
}
