//! Versioned text record for trained models.
//!
//! ```text
//! # isacl model record
//! # created <RFC 3339 timestamp>
//! format=isacl-model
//! version=1
//! algorithm=ISACL
//! ...
//! params=140
//! <one parameter per line>
//! ```
//!
//! Lines starting with `#` are comments. Floats are written in shortest
//! round-trip form, so a reloaded model reproduces its predictions exactly.

use std::fmt::Write as _;
use std::path::Path;

use chrono::NaiveDate;

use super::config::RunConfig;
use crate::dataset::{Scaler, SplitPolicy};
use crate::error::{Error, Result};
use crate::metrics::Denominator;
use crate::mfnn::{NetworkParams, NetworkSpec};

pub const FORMAT_NAME: &str = "isacl-model";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq)]
pub struct ModelRecord {
    pub config: RunConfig,
    pub params: NetworkParams,
    pub scaler: Scaler,
    pub series_start: NaiveDate,
    pub series_len: usize,
    /// Number of leading days used for training.
    pub train_len: usize,
    /// Final training loss in scaled space.
    pub train_mse: f64,
    pub eval_count: usize,
}

impl ModelRecord {
    pub fn series_end(&self) -> NaiveDate {
        self.series_start + chrono::Days::new(self.series_len as u64 - 1)
    }

    pub fn train_end(&self) -> NaiveDate {
        self.series_start + chrono::Days::new(self.train_len as u64 - 1)
    }

    /// Model output in original units for a 1-based day index.
    pub fn predict(&self, day: f64) -> f64 {
        let x = self.scaler.scale_input(day);
        self.scaler.unscale_target(self.params.forward(&[x])[0])
    }

    /// Serialises the record. `created` goes into the timestamp comment line.
    pub fn to_text(&self, created: Option<&str>) -> String {
        let c = &self.config;
        let mut s = String::new();
        s.push_str("# isacl model record\n");
        if let Some(ts) = created {
            let _ = writeln!(s, "# created {ts}");
        }
        let split = match c.split {
            SplitPolicy::Ratio(r) => format!("ratio:{r}"),
            SplitPolicy::Date(d) => format!("date:{d}"),
        };
        let fields: Vec<(&str, String)> = vec![
            ("format", FORMAT_NAME.to_string()),
            ("version", FORMAT_VERSION.to_string()),
            ("algorithm", c.algorithm.name().to_string()),
            ("seed", c.seed.to_string()),
            ("iters", c.iters.to_string()),
            ("pop_size", c.pop_size.to_string()),
            ("learning_rate", c.learning_rate.to_string()),
            ("n_inputs", c.network.n_inputs.to_string()),
            ("hidden1", c.network.hidden1.to_string()),
            ("hidden2", c.network.hidden2.to_string()),
            ("n_outputs", c.network.n_outputs.to_string()),
            ("bounds_lower", c.bounds.0.to_string()),
            ("bounds_upper", c.bounds.1.to_string()),
            ("split", split),
            ("horizon_days", c.horizon_days.to_string()),
            ("mape_denominator", c.denominator.to_string()),
            ("series_start", self.series_start.to_string()),
            ("series_len", self.series_len.to_string()),
            ("train_len", self.train_len.to_string()),
            ("input_span", self.scaler.input_span.to_string()),
            ("target_max", self.scaler.target_max.to_string()),
            ("train_mse", self.train_mse.to_string()),
            ("eval_count", self.eval_count.to_string()),
        ];
        for (k, v) in fields {
            let _ = writeln!(s, "{k}={v}");
        }
        let flat = self.params.encode();
        let _ = writeln!(s, "params={}", flat.len());
        for p in flat {
            let _ = writeln!(s, "{p}");
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let mut kv = std::collections::HashMap::new();
        let mut n_params = None;
        for line in lines.by_ref() {
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Model(format!("expected key=value, found {line:?}")))?;
            if k == "params" {
                n_params = Some(parse::<usize>("params", v)?);
                break;
            }
            kv.insert(k.to_string(), v.to_string());
        }
        let get = |k: &str| {
            kv.get(k)
                .map(String::as_str)
                .ok_or_else(|| Error::Model(format!("missing field {k}")))
        };

        if get("format")? != FORMAT_NAME {
            return Err(Error::Model(format!("not an {FORMAT_NAME} record")));
        }
        let version: u32 = parse("version", get("version")?)?;
        if version != FORMAT_VERSION {
            return Err(Error::Model(format!("unsupported version {version}")));
        }
        let n_params = n_params.ok_or_else(|| Error::Model("missing params section".into()))?;
        let flat = lines
            .map(|l| parse::<f64>("parameter", l))
            .collect::<Result<Vec<f64>>>()?;
        if flat.len() != n_params {
            return Err(Error::Model(format!(
                "params header says {n_params} values, found {}",
                flat.len()
            )));
        }

        let network = NetworkSpec::new(
            parse("n_inputs", get("n_inputs")?)?,
            parse("hidden1", get("hidden1")?)?,
            parse("hidden2", get("hidden2")?)?,
            parse("n_outputs", get("n_outputs")?)?,
        )?;
        let split = match get("split")?.split_once(':') {
            Some(("ratio", r)) => SplitPolicy::Ratio(parse("split", r)?),
            Some(("date", d)) => SplitPolicy::Date(parse_date("split", d)?),
            _ => return Err(Error::Model("bad split field".into())),
        };
        let config = RunConfig {
            algorithm: get("algorithm")?.parse()?,
            iters: parse("iters", get("iters")?)?,
            pop_size: parse("pop_size", get("pop_size")?)?,
            seed: parse("seed", get("seed")?)?,
            network,
            bounds: (
                parse("bounds_lower", get("bounds_lower")?)?,
                parse("bounds_upper", get("bounds_upper")?)?,
            ),
            split,
            horizon_days: parse("horizon_days", get("horizon_days")?)?,
            denominator: get("mape_denominator")?.parse::<Denominator>()?,
            learning_rate: parse("learning_rate", get("learning_rate")?)?,
        };
        let record = Self {
            params: NetworkParams::decode(&flat, network)?,
            scaler: Scaler::new(
                parse("input_span", get("input_span")?)?,
                parse("target_max", get("target_max")?)?,
            )?,
            series_start: parse_date("series_start", get("series_start")?)?,
            series_len: parse("series_len", get("series_len")?)?,
            train_len: parse("train_len", get("train_len")?)?,
            train_mse: parse("train_mse", get("train_mse")?)?,
            eval_count: parse("eval_count", get("eval_count")?)?,
            config,
        };
        if record.train_len == 0 || record.train_len >= record.series_len {
            return Err(Error::Model("train_len must lie inside the series".into()));
        }
        Ok(record)
    }

    pub fn save(&self, path: impl AsRef<Path>, created: Option<&str>) -> Result<()> {
        std::fs::write(path, self.to_text(created))?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_text(&std::fs::read_to_string(path)?)
    }
}

fn parse<T: std::str::FromStr>(field: &str, v: &str) -> Result<T> {
    v.trim()
        .parse()
        .map_err(|_| Error::Model(format!("bad value for {field}: {v:?}")))
}

fn parse_date(field: &str, v: &str) -> Result<NaiveDate> {
    NaiveDate::parse_from_str(v.trim(), "%Y-%m-%d")
        .map_err(|_| Error::Model(format!("bad date for {field}: {v:?}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn record() -> ModelRecord {
        let spec = NetworkSpec::new(1, 3, 2, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let flat: Vec<f64> = (0..spec.dim())
            .map(|_| rng.random_range(-10.0..10.0))
            .collect();
        ModelRecord {
            config: RunConfig {
                network: spec,
                split: SplitPolicy::Ratio(0.75),
                ..RunConfig::default()
            },
            params: NetworkParams::decode(&flat, spec).unwrap(),
            scaler: Scaler::new(85.0, 123_456.0).unwrap(),
            series_start: NaiveDate::from_ymd_opt(2020, 1, 22).unwrap(),
            series_len: 73,
            train_len: 69,
            train_mse: 1.25e-5,
            eval_count: 10_010,
        }
    }

    #[test]
    fn text_round_trip_is_exact() {
        let r = record();
        let text = r.to_text(Some("2026-01-01T00:00:00Z"));
        let back = ModelRecord::from_text(&text).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.predict(80.0), r.predict(80.0));
        assert_eq!(
            back.series_end(),
            NaiveDate::from_ymd_opt(2020, 4, 3).unwrap()
        );
        assert_eq!(
            back.train_end(),
            NaiveDate::from_ymd_opt(2020, 3, 30).unwrap()
        );
    }

    #[test]
    fn timestamp_only_in_comment() {
        let r = record();
        let a = r.to_text(Some("x"));
        let b = r.to_text(Some("y"));
        let strip = |s: &str| {
            s.lines()
                .filter(|l| !l.starts_with("# created"))
                .collect::<Vec<_>>()
                .join("\n")
        };
        assert_eq!(strip(&a), strip(&b));
    }

    #[test]
    fn rejects_corrupt_records() {
        let text = record().to_text(None);
        assert!(ModelRecord::from_text(&text.replace("version=1", "version=9")).is_err());
        assert!(ModelRecord::from_text(&text.replace("params=16", "params=17")).is_err());
        assert!(
            ModelRecord::from_text(&text.replace("format=isacl-model", "format=other")).is_err()
        );
        assert!(ModelRecord::from_text("").is_err());
    }
}
