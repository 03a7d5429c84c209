//! Algorithm dispatch and the benchmark harness.
//!
//! A bench spec is CSV with header `gens,element,algo,memo_dim,workers`;
//! the `gens` field is quoted when it holds several generators. Each spec
//! row produces one [`BenchRecord`] row under the header
//! `dim,memo_dim,element,num_results,cpu_memo_us,par_memo_us,runtime_ms`.

use std::fmt;
use std::io;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::dp::{
    brute_force_factorizations, build_table, Cardinalities, DpConfig, DpStrategy,
    DEFAULT_MEMORY_LIMIT,
};
use crate::error::{Error, Result};
use crate::semigroup::{FactorizationList, GeneratorTuple};
use crate::stream::{self, MemoTiming, StreamConfig, DEFAULT_BUFFER_CAPACITY, DEFAULT_REBALANCE_EVERY};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Dp,
    DpParallelFac,
    DpParallelElem,
    Lex,
    LexMemo,
    Brute,
}

impl Algorithm {
    pub const ALL: [Algorithm; 6] = [
        Algorithm::Dp,
        Algorithm::DpParallelFac,
        Algorithm::DpParallelElem,
        Algorithm::Lex,
        Algorithm::LexMemo,
        Algorithm::Brute,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Dp => "dp",
            Algorithm::DpParallelFac => "dp-parallel-fac",
            Algorithm::DpParallelElem => "dp-parallel-elem",
            Algorithm::Lex => "lex",
            Algorithm::LexMemo => "lex-memo",
            Algorithm::Brute => "brute",
        }
    }

    fn dp_strategy(self) -> Option<DpStrategy> {
        match self {
            Algorithm::Dp => Some(DpStrategy::SequentialList),
            Algorithm::DpParallelFac => Some(DpStrategy::FactorizationwiseParallel),
            Algorithm::DpParallelElem => Some(DpStrategy::ElementwiseParallel),
            _ => None,
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s.trim())
            .ok_or_else(|| Error::Parse(format!("unknown algorithm {s:?}")))
    }
}

/// Everything needed to compute `Z(element)` one way.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub generators: GeneratorTuple,
    pub element: u64,
    pub algorithm: Algorithm,
    pub memo_dim: Option<usize>,
    pub top_of_memo: Option<u64>,
    pub workers: usize,
    pub buffer_capacity: usize,
    pub rebalance_every: u64,
    /// Elementwise batch size; defaults to the smallest generator.
    pub batch_size: Option<u64>,
    pub memory_limit: u64,
}

impl RunConfig {
    pub fn new(generators: GeneratorTuple, element: u64, algorithm: Algorithm) -> Self {
        RunConfig {
            generators,
            element,
            algorithm,
            memo_dim: None,
            top_of_memo: None,
            workers: 1,
            buffer_capacity: DEFAULT_BUFFER_CAPACITY,
            rebalance_every: DEFAULT_REBALANCE_EVERY,
            batch_size: None,
            memory_limit: DEFAULT_MEMORY_LIMIT,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.generators.dim();
        if self.algorithm == Algorithm::LexMemo {
            match self.memo_dim {
                None if d > 1 => {
                    return Err(Error::InvalidConfig("lex-memo needs a memo dimension".into()))
                }
                Some(k) if d > 1 && (k == 0 || k >= d) => {
                    return Err(Error::InvalidConfig(format!(
                        "memo dimension {k} must lie in 1..={}",
                        d - 1
                    )))
                }
                _ => {}
            }
        } else if self.memo_dim.is_some() || self.top_of_memo.is_some() {
            return Err(Error::InvalidConfig(format!(
                "memo settings only apply to lex-memo, not {}",
                self.algorithm
            )));
        }
        if self.batch_size.is_some() && self.algorithm != Algorithm::DpParallelElem {
            return Err(Error::InvalidConfig(
                "batch size only applies to dp-parallel-elem".into(),
            ));
        }
        if self.workers == 0 {
            return Err(Error::InvalidConfig("worker count must be at least 1".into()));
        }
        Ok(())
    }

    fn dp_config(&self, strategy: DpStrategy) -> DpConfig {
        DpConfig {
            strategy,
            workers: self.workers,
            batch_size: self.batch_size,
            memory_limit: self.memory_limit,
            skip_non_members: false,
        }
    }

    fn stream_config(&self) -> StreamConfig {
        StreamConfig {
            workers: self.workers,
            buffer_capacity: self.buffer_capacity,
            rebalance_every: self.rebalance_every,
            memo_dim: if self.algorithm == Algorithm::LexMemo {
                self.memo_dim
            } else {
                None
            },
            top_of_memo: self.top_of_memo,
            memory_limit: self.memory_limit,
        }
    }
}

/// A computed `Z(n)`: the list itself, or just its size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    List(FactorizationList),
    Count(u64),
}

impl Outcome {
    pub fn count(&self) -> u64 {
        match self {
            Outcome::List(l) => l.len() as u64,
            Outcome::Count(c) => *c,
        }
    }
}

/// One benchmark row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub dim: usize,
    pub memo_dim: usize,
    pub element: u64,
    /// `-1` marks a row that failed to run.
    pub num_results: i64,
    #[serde(rename = "cpu_memo_us")]
    pub cpu_memo_micros: u64,
    #[serde(rename = "par_memo_us")]
    pub par_memo_micros: u64,
    #[serde(rename = "runtime_ms")]
    pub runtime_millis: u64,
}

pub const BENCH_HEADER: &str = "dim,memo_dim,element,num_results,cpu_memo_us,par_memo_us,runtime_ms";

/// Computes `Z(element)` as configured. With `count_only`, the table
/// routes run just the counting recurrence and the stream routes count
/// through their sink, so nothing is materialized.
pub fn run(config: &RunConfig, count_only: bool) -> Result<(Outcome, BenchRecord)> {
    config.validate()?;
    let started = Instant::now();
    let n = config.element;
    let gens = &config.generators;
    let mut timing = MemoTiming::default();
    let mut memo_dim = 0;
    let outcome = match config.algorithm {
        alg @ (Algorithm::Dp | Algorithm::DpParallelFac | Algorithm::DpParallelElem) => {
            let dp = config.dp_config(alg.dp_strategy().expect("table algorithm"));
            dp.validate(gens)?;
            if count_only {
                let cards = Cardinalities::compute(n, gens)?;
                Outcome::Count(cards.count(n))
            } else {
                let table = build_table(n, gens, &dp)?;
                let d = gens.dim();
                Outcome::List(FactorizationList::from_flat(d, table.flat(n).to_vec()))
            }
        }
        Algorithm::Lex | Algorithm::LexMemo => {
            let stream_config = config.stream_config();
            if count_only {
                let report = stream::count(n, gens, &stream_config)?;
                timing = report.memo_timing;
                memo_dim = report.memo_dim;
                Outcome::Count(report.num_results)
            } else {
                let run = stream::factorize(n, gens, &stream_config)?;
                timing = run.report.memo_timing;
                memo_dim = run.report.memo_dim;
                Outcome::List(run.factorizations)
            }
        }
        Algorithm::Brute => {
            let all = brute_force_factorizations(n, gens)?;
            let mut list = FactorizationList::new(gens.dim());
            for f in &all {
                list.push(f.coords());
            }
            if count_only {
                Outcome::Count(list.len() as u64)
            } else {
                Outcome::List(list)
            }
        }
    };
    let num = outcome.count();
    Ok((outcome, record(config, memo_dim, num, timing, started)))
}

fn record(config: &RunConfig, memo_dim: usize, num: u64, timing: MemoTiming, started: Instant) -> BenchRecord {
    BenchRecord {
        dim: config.generators.dim(),
        memo_dim,
        element: config.element,
        num_results: num as i64,
        cpu_memo_micros: timing.sequential_us,
        par_memo_micros: timing.parallel_us,
        runtime_millis: started.elapsed().as_millis() as u64,
    }
}

/// One row of a bench spec.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
pub struct BenchSpecRow {
    pub gens: String,
    pub element: u64,
    pub algo: String,
    pub memo_dim: Option<usize>,
    pub workers: Option<usize>,
}

impl BenchSpecRow {
    fn to_config(&self) -> Result<RunConfig> {
        let generators: GeneratorTuple = self.gens.parse()?;
        let algorithm: Algorithm = self.algo.parse()?;
        let mut config = RunConfig::new(generators, self.element, algorithm);
        config.memo_dim = self.memo_dim;
        config.workers = self.workers.unwrap_or(1);
        Ok(config)
    }
}

/// Parses a whole bench spec up front so malformed input fails before any
/// row runs.
pub fn read_bench_spec<R: io::Read>(input: R) -> Result<Vec<BenchSpecRow>> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let headers = reader
        .headers()
        .map_err(|e| Error::Parse(format!("bench spec header: {e}")))?
        .clone();
    let expected = ["gens", "element", "algo", "memo_dim", "workers"];
    if !headers.is_empty() && headers.iter().ne(expected) {
        return Err(Error::Parse(format!(
            "bench spec header must be {}, got {}",
            expected.join(","),
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    reader
        .deserialize()
        .enumerate()
        .map(|(k, row)| row.map_err(|e| Error::Parse(format!("bench spec row {}: {e}", k + 1))))
        .collect()
}

/// Runs every spec row in count mode and writes one CSV record per row.
/// A row that fails is written with `num_results = -1`.
pub fn run_bench<W: io::Write>(rows: &[BenchSpecRow], output: W) -> Result<Vec<BenchRecord>> {
    let mut writer = csv::WriterBuilder::new().has_headers(false).from_writer(output);
    let io_err = |e: csv::Error| Error::Parse(format!("writing bench output: {e}"));
    writer
        .write_record(BENCH_HEADER.split(','))
        .map_err(io_err)?;
    let mut records = Vec::with_capacity(rows.len());
    for row in rows {
        let record = match row.to_config().and_then(|c| run(&c, true)) {
            Ok((_, record)) => record,
            Err(_) => BenchRecord {
                dim: row.gens.parse::<GeneratorTuple>().map_or(0, |g| g.dim()),
                memo_dim: row.memo_dim.unwrap_or(0),
                element: row.element,
                num_results: -1,
                cpu_memo_micros: 0,
                par_memo_micros: 0,
                runtime_millis: 0,
            },
        };
        writer.serialize(record).map_err(io_err)?;
        records.push(record);
    }
    writer.flush().map_err(|e| Error::Parse(format!("writing bench output: {e}")))?;
    Ok(records)
}

/// Writes the bench header followed by `records`.
pub fn write_bench_records<W: io::Write>(records: &[BenchRecord], output: W) -> Result<()> {
    let mut writer = csv::WriterBuilder::new().has_headers(false).from_writer(output);
    let io_err = |e: csv::Error| Error::Parse(format!("writing bench output: {e}"));
    writer.write_record(BENCH_HEADER.split(',')).map_err(io_err)?;
    for record in records {
        writer.serialize(record).map_err(io_err)?;
    }
    writer.flush().map_err(|e| Error::Parse(format!("writing bench output: {e}")))
}

/// Reads bench output back into records.
pub fn read_bench_records<R: io::Read>(input: R) -> Result<Vec<BenchRecord>> {
    csv::Reader::from_reader(input)
        .deserialize()
        .map(|r| r.map_err(|e| Error::Parse(format!("bench record: {e}"))))
        .collect()
}
