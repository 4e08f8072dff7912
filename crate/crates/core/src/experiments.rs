//! Monte Carlo estimates of the average size of F_s over
//! `G(T) = {a ∈ Z^n_{>0} : gcd(a) = 1, |a|_∞ <= T}`.
//!
//! The statistic is `X_s(a) = F_s(a) / (s a_1 ... a_n)^(1/(n-1))`. Sample `i`
//! draws from its own ChaCha stream (`stream = i` under the master seed), so
//! any sample can be recomputed alone and reports do not depend on how the
//! work was scheduled.

use std::io::Write;
use std::path::Path;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bounds::theorem_main_lower_from;
use crate::denumerant::Limits;
use crate::error::{Error, Result};
use crate::frobenius::frobenius;
use crate::instance::{gcd_vector, InputVector, Multiplicity};
use crate::par::{self, Execution};

/// Rejection attempts allowed per sample before giving up.
pub const MAX_ATTEMPTS: u64 = 1_000_000;

pub const DEFAULT_D_GRID: [f64; 4] = [1.0, 2.0, 4.0, 8.0];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleConfig {
    pub n: usize,
    #[serde(rename = "T")]
    pub t: i128,
    pub s: Multiplicity,
    #[serde(rename = "N")]
    pub samples: u64,
    pub seed: u64,
    pub d_grid: Vec<f64>,
}

impl SampleConfig {
    pub fn new(n: usize, t: i128, s: Multiplicity, samples: u64, seed: u64) -> Self {
        Self {
            n,
            t,
            s,
            samples,
            seed,
            d_grid: DEFAULT_D_GRID.to_vec(),
        }
    }

    /// Checks shared by sampling and experiments. Experiments additionally
    /// require `n >= 3`.
    pub fn validate_sampling(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::DimensionTooSmall { n: self.n });
        }
        if self.t < 1 {
            return Err(Error::InvalidConfig(format!("T = {} must be at least 1", self.t)));
        }
        if self.t > u64::MAX as i128 {
            return Err(Error::InvalidConfig(format!("T = {} is too large", self.t)));
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 3 {
            return Err(Error::InvalidConfig(format!(
                "average-behaviour experiments need n >= 3, got n = {}",
                self.n
            )));
        }
        self.validate_sampling()?;
        if self.samples < 1 {
            return Err(Error::InvalidConfig("N must be at least 1".into()));
        }
        if self.d_grid.iter().any(|d| !d.is_finite() || *d <= 0.0) {
            return Err(Error::InvalidConfig("D grid values must be positive".into()));
        }
        if self.d_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidConfig("D grid must be strictly increasing".into()));
        }
        Ok(())
    }
}

/// Sample `index` of the stream: uniform on `G(T)` by rejection.
pub fn sample_at(config: &SampleConfig, index: u64) -> Result<InputVector> {
    config.validate_sampling()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(index);
    let t = config.t as u64;
    let mut entries = vec![0i128; config.n];
    for _ in 0..MAX_ATTEMPTS {
        for e in entries.iter_mut() {
            *e = rng.random_range(1..=t) as i128;
        }
        if gcd_vector(&entries)? == 1 {
            return InputVector::new(entries);
        }
    }
    Err(Error::SamplerStuck {
        index,
        attempts: MAX_ATTEMPTS,
    })
}

/// The sample stream `0, 1, 2, ...` (unbounded; take `N`).
pub fn sample_gt(config: &SampleConfig) -> impl Iterator<Item = Result<InputVector>> + '_ {
    (0u64..).map(move |i| sample_at(config, i))
}

fn root(x: f64, d: usize) -> f64 {
    x.powf(1.0 / d as f64)
}

/// `F_s / (s Πa)^(1/(n-1))` for a known `F_s`.
pub fn x_statistic_from(a: &InputVector, s: Multiplicity, f_s: i128) -> f64 {
    let p: f64 = a.entries().iter().map(|&e| e as f64).product();
    f_s as f64 / root(s.get() as f64 * p, a.n() - 1)
}

pub fn x_statistic(a: &InputVector, s: Multiplicity, limits: &Limits) -> Result<f64> {
    Ok(x_statistic_from(a, s, frobenius(a, s, limits)?))
}

/// `(a_1 + ... + a_n) / (a_1 ... a_n)^(1/(n-1))`.
pub fn sum_term(a: &InputVector) -> f64 {
    let p: f64 = a.entries().iter().map(|&e| e as f64).product();
    let sum: f64 = a.entries().iter().map(|&e| e as f64).sum();
    sum / root(p, a.n() - 1)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub index: u64,
    pub a: InputVector,
    pub frobenius: i128,
    pub x_statistic: f64,
    pub sum_term: f64,
    /// Some entry equals 1, so F_s may be tiny or -1.
    pub unit_entry: bool,
    /// Exact check of the main lower bound on this sample.
    pub lower_bound_holds: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailPoint {
    pub d: f64,
    pub p: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub config: SampleConfig,
    pub mean_x: f64,
    pub tail: Vec<TailPoint>,
    pub sum_term_mean: f64,
    pub unit_entry_count: u64,
    pub records: Vec<SampleRecord>,
}

fn evaluate(config: &SampleConfig, index: u64, limits: &Limits) -> Result<SampleRecord> {
    let a = sample_at(config, index)?;
    let f = frobenius(&a, config.s, limits)?;
    let lower = theorem_main_lower_from(&a, config.s, f)?;
    Ok(SampleRecord {
        index,
        x_statistic: x_statistic_from(&a, config.s, f),
        sum_term: sum_term(&a),
        unit_entry: a.has_unit_entry(),
        lower_bound_holds: lower.holds,
        frobenius: f,
        a,
    })
}

/// Evaluate `N` samples and summarize them.
///
/// Records are reduced in index order, so the report is bit-identical for a
/// given config regardless of `exec` or thread count. The first failing
/// sample (by index) aborts the run.
pub fn run_experiment(
    config: &SampleConfig,
    limits: &Limits,
    exec: Execution,
) -> Result<ExperimentReport> {
    config.validate()?;
    let len = usize::try_from(config.samples)
        .map_err(|_| Error::InvalidConfig("N does not fit in memory".into()))?;
    let records = par::try_map_indexed(len, exec, |i| {
        evaluate(config, i as u64, limits).map_err(|e| Error::Sample {
            index: i as u64,
            source: Box::new(e),
        })
    })?;

    let count = records.len() as f64;
    let mean_x = records.iter().map(|r| r.x_statistic).sum::<f64>() / count;
    let sum_term_mean = records.iter().map(|r| r.sum_term).sum::<f64>() / count;
    let tail = config
        .d_grid
        .iter()
        .map(|&d| TailPoint {
            d,
            p: records.iter().filter(|r| r.x_statistic >= d).count() as f64 / count,
        })
        .collect();
    Ok(ExperimentReport {
        config: config.clone(),
        mean_x,
        tail,
        sum_term_mean,
        unit_entry_count: records.iter().filter(|r| r.unit_entry).count() as u64,
        records,
    })
}

impl ExperimentReport {
    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    /// One row per sample, then a `statistic,value` block.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new().flexible(true).from_writer(out);
        w.write_record(["index", "a", "frobenius", "x_statistic", "sum_term", "unit_entry"])?;
        for r in &self.records {
            let a: Vec<String> = r.a.entries().iter().map(i128::to_string).collect();
            w.write_record([
                r.index.to_string(),
                a.join(","),
                r.frobenius.to_string(),
                r.x_statistic.to_string(),
                r.sum_term.to_string(),
                r.unit_entry.to_string(),
            ])?;
        }
        w.write_record(["statistic", "value"])?;
        w.write_record(["mean_x".to_string(), self.mean_x.to_string()])?;
        w.write_record(["sum_term_mean".to_string(), self.sum_term_mean.to_string()])?;
        w.write_record(["unit_entry_count".to_string(), self.unit_entry_count.to_string()])?;
        for t in &self.tail {
            w.write_record([format!("tail_ge_{}", t.d), t.p.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Two whitespace-separated columns `D P` for plotting.
    pub fn write_tail<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "# D P(X_s >= D)")?;
        for t in &self.tail {
            writeln!(out, "{} {}", t.d, t.p)?;
        }
        Ok(())
    }

    /// Write `<stem>.json`, `<stem>.csv` and `<stem>.tail.dat` next to `json_path`.
    pub fn write_files(&self, json_path: &Path) -> Result<[std::path::PathBuf; 3]> {
        let csv_path = json_path.with_extension("csv");
        let tail_path = json_path.with_extension("tail.dat");
        std::fs::write(json_path, self.to_json()?)?;
        self.write_csv(std::fs::File::create(&csv_path)?)?;
        let mut tail = Vec::new();
        self.write_tail(&mut tail)?;
        std::fs::write(&tail_path, tail)?;
        Ok([json_path.to_path_buf(), csv_path, tail_path])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    fn cfg(n: usize, t: i128, s: i128, samples: u64, seed: u64) -> SampleConfig {
        SampleConfig::new(n, t, Multiplicity::new(s).unwrap(), samples, seed)
    }

    #[test]
    fn singleton_population() {
        let c = cfg(3, 1, 1, 10, 7);
        for a in sample_gt(&c).take(10) {
            assert_eq!(a.unwrap().entries(), &[1, 1, 1]);
        }
    }

    #[test]
    fn rejection_filters_non_primitive_pairs() {
        let c = cfg(2, 2, 1, 0, 3);
        let mut freq: HashMap<Vec<i128>, usize> = HashMap::new();
        for a in sample_gt(&c).take(3000) {
            *freq.entry(a.unwrap().entries().to_vec()).or_default() += 1;
        }
        assert_eq!(freq.len(), 3);
        assert!(!freq.contains_key(&vec![2, 2]));
        for k in [vec![1, 1], vec![1, 2], vec![2, 1]] {
            let f = freq[&k] as f64 / 3000.0;
            assert!((f - 1.0 / 3.0).abs() < 0.05, "{k:?}: {f}");
        }
    }

    #[test]
    fn stream_is_deterministic_and_indexable() {
        let c = cfg(3, 100, 1, 0, 42);
        let first: Vec<_> = sample_gt(&c).take(50).map(Result::unwrap).collect();
        let second: Vec<_> = sample_gt(&c).take(50).map(Result::unwrap).collect();
        assert_eq!(first, second);
        assert_eq!(sample_at(&c, 17).unwrap(), first[17]);
        let other = cfg(3, 100, 1, 0, 43);
        let third: Vec<_> = sample_gt(&other).take(50).map(Result::unwrap).collect();
        assert_ne!(first, third);
    }

    #[test]
    fn x_statistic_examples() {
        let l = Limits::default();
        let a = InputVector::new(vec![3, 5]).unwrap();
        let x = x_statistic(&a, Multiplicity::ONE, &l).unwrap();
        assert!((x - 7.0 / 15.0).abs() < 1e-12);
        let x = x_statistic(&a, Multiplicity::new(4).unwrap(), &l).unwrap();
        assert!((x - 52.0 / 60.0).abs() < 1e-12);
        let a = InputVector::new(vec![1, 1, 1]).unwrap();
        assert_eq!(x_statistic(&a, Multiplicity::ONE, &l).unwrap(), -1.0);
    }

    #[test]
    fn all_ones_experiment() {
        let r = run_experiment(&cfg(3, 1, 1, 10, 0), &Limits::default(), Execution::Parallel).unwrap();
        assert_eq!(r.mean_x, -1.0);
        assert_eq!(r.unit_entry_count, 10);
        assert!(r.tail.iter().all(|t| t.p == 0.0));
    }

    #[test]
    fn config_errors() {
        let l = Limits::default();
        let e = run_experiment(&cfg(2, 10, 1, 10, 0), &l, Execution::Sequential).unwrap_err();
        assert!(matches!(e, Error::InvalidConfig(_)));
        let mut c = cfg(3, 10, 1, 10, 0);
        c.d_grid = vec![2.0, 1.0];
        assert!(run_experiment(&c, &l, Execution::Sequential).is_err());
        assert!(run_experiment(&cfg(3, 0, 1, 10, 0), &l, Execution::Sequential).is_err());
        assert!(run_experiment(&cfg(3, 10, 1, 0, 0), &l, Execution::Sequential).is_err());
    }

    #[test]
    fn failing_sample_reports_index() {
        let l = Limits {
            max_table_entries: 30,
            ..Limits::default()
        };
        let e = run_experiment(&cfg(3, 50, 1, 20, 1), &l, Execution::Parallel).unwrap_err();
        match e {
            Error::Sample { index, source } => {
                assert!(index < 20);
                assert!(matches!(*source, Error::ResourceLimit { .. }));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn report_is_reproducible_and_consistent() {
        let c = cfg(3, 50, 1, 500, 1);
        let l = Limits::default();
        let a = run_experiment(&c, &l, Execution::Parallel).unwrap();
        let b = run_experiment(&c, &l, Execution::Sequential).unwrap();
        assert_eq!(a.to_json().unwrap(), b.to_json().unwrap());
        assert!(a.tail.windows(2).all(|w| w[0].p >= w[1].p));
        assert!(a.records.iter().all(|r| r.x_statistic.is_finite()));
        assert!(a.records.iter().all(|r| r.lower_bound_holds));
        let mean = a.records.iter().map(|r| r.x_statistic).sum::<f64>() / 500.0;
        assert_eq!(mean, a.mean_x);
        let back: ExperimentReport = serde_json::from_str(&a.to_json().unwrap()).unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn csv_and_tail_layout() {
        let r = run_experiment(&cfg(3, 20, 2, 5, 9), &Limits::default(), Execution::Sequential)
            .unwrap();
        let mut buf = Vec::new();
        r.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "index,a,frobenius,x_statistic,sum_term,unit_entry");
        // The vector field contains commas and must be quoted.
        assert!(lines[1].starts_with("0,\""));
        assert_eq!(lines[6], "statistic,value");
        assert_eq!(lines.len(), 1 + 5 + 1 + 3 + 4);

        let mut buf = Vec::new();
        r.write_tail(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 5);
        assert!(text.lines().nth(1).unwrap().starts_with("1 "));
    }
}
