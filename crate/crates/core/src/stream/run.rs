use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::dp::{worker_pool, DEFAULT_MEMORY_LIMIT};
use crate::error::{Error, Result};
use crate::semigroup::{FactorizationList, GeneratorTuple};

use super::buffer::{
    copy_outputs_to_buffer_and_clear, flush_buffers, CollectingSink, CountingSink,
    FactorizationSink, ResultBuffer, SliceKey,
};
use super::memo::{populate_memo, MemoTable, MemoTiming};
use super::split::{rebalance, split_work};
use super::state::{OutputStaging, StreamState};

pub const DEFAULT_BUFFER_CAPACITY: usize = 40_000;
pub const DEFAULT_REBALANCE_EVERY: u64 = 1024;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StreamConfig {
    pub workers: usize,
    /// Factorizations each stream may hold between flushes.
    pub buffer_capacity: usize,
    /// Lockstep iterations between work rebalances.
    pub rebalance_every: u64,
    /// Trailing generators covered by the memo; `None` steps every candidate.
    pub memo_dim: Option<usize>,
    /// Exclusive memo bound; `None` means `n + 1`.
    pub top_of_memo: Option<u64>,
    pub memory_limit: u64,
}

impl Default for StreamConfig {
    fn default() -> Self {
        StreamConfig {
            workers: 1,
            buffer_capacity: DEFAULT_BUFFER_CAPACITY,
            rebalance_every: DEFAULT_REBALANCE_EVERY,
            memo_dim: None,
            top_of_memo: None,
            memory_limit: DEFAULT_MEMORY_LIMIT,
        }
    }
}

impl StreamConfig {
    pub fn with_memo_dim(memo_dim: usize) -> Self {
        StreamConfig {
            memo_dim: Some(memo_dim),
            ..Default::default()
        }
    }

    pub fn validate(&self, gens: &GeneratorTuple) -> Result<()> {
        if self.workers == 0 {
            return Err(Error::InvalidConfig("worker count must be at least 1".into()));
        }
        if self.rebalance_every == 0 {
            return Err(Error::InvalidConfig("rebalance interval must be at least 1".into()));
        }
        if self.buffer_capacity == 0 {
            return Err(Error::InvalidConfig("buffer capacity must be at least 1".into()));
        }
        if self.top_of_memo == Some(0) {
            return Err(Error::InvalidConfig("top of memo must be at least 1".into()));
        }
        if let Some(k) = self.memo_dim {
            if gens.dim() > 1 && (k == 0 || k >= gens.dim()) {
                return Err(Error::InvalidConfig(format!(
                    "memo dimension {k} must lie in 1..={}",
                    gens.dim() - 1
                )));
            }
        }
        Ok(())
    }
}

/// What a run did, in the shape of one benchmark row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunReport {
    pub dim: usize,
    /// Zero when no memo was used.
    pub memo_dim: usize,
    pub element: u64,
    pub num_results: u64,
    /// Lockstep iterations of the step kernel.
    pub iterations: u64,
    /// Individual stream steps across all workers.
    pub steps: u64,
    pub steals: u64,
    pub memo_timing: MemoTiming,
    pub runtime: Duration,
}

/// Results in descending lexicographic order plus the run report.
#[derive(Debug, Clone)]
pub struct StreamRun {
    pub factorizations: FactorizationList,
    pub report: RunReport,
}

/// Enumerates `Z(n)` with bounded lexicographic streams and collects the
/// results in descending lexicographic order.
pub fn factorize(n: u64, gens: &GeneratorTuple, config: &StreamConfig) -> Result<StreamRun> {
    let mut sink = CollectingSink::new(gens.dim());
    let report = factorize_into(n, gens, config, &mut sink)?;
    Ok(StreamRun {
        factorizations: sink.into_list(),
        report,
    })
}

/// Counts `Z(n)` without keeping the factorizations.
pub fn count(n: u64, gens: &GeneratorTuple, config: &StreamConfig) -> Result<RunReport> {
    let mut sink = CountingSink::default();
    factorize_into(n, gens, config, &mut sink)
}

/// One stream's state plus its private staging rows and buffer.
struct Lane {
    state: StreamState,
    staging: OutputStaging,
    buffer: ResultBuffer,
    steps: u64,
}

impl Lane {
    /// Runs up to `budget` steps, stopping early if the buffer might not fit
    /// another step's output.
    fn run(&mut self, memo: Option<&MemoTable>, budget: u64, reserve: usize) -> Result<()> {
        for _ in 0..budget {
            if self.state.end_of_stream || self.buffer.free() < reserve {
                break;
            }
            match memo {
                Some(m) => self.state.next_candidate_dynamic(m, &mut self.staging)?,
                None => self.state.next_candidate(),
            }
            self.steps += 1;
            copy_outputs_to_buffer_and_clear(&mut self.state, &mut self.staging, &mut self.buffer)?;
        }
        Ok(())
    }
}

/// The orchestrating loop: split, step every stream in lockstep, collect
/// into per-stream buffers, flush when any buffer runs low, and rebalance
/// every `rebalance_every` iterations.
///
/// Streams run independently between barriers, so each parallel round
/// advances every stream by up to the iterations left before the next
/// rebalance instead of one step at a time.
pub fn factorize_into<S: FactorizationSink + ?Sized>(
    n: u64,
    gens: &GeneratorTuple,
    config: &StreamConfig,
    sink: &mut S,
) -> Result<RunReport> {
    let started = Instant::now();
    config.validate(gens)?;
    let d = gens.dim();
    if n / gens.smallest() > u32::MAX as u64 {
        return Err(Error::InvalidConfig(format!(
            "element {n} needs coordinates beyond 32 bits"
        )));
    }

    if d == 1 {
        let g = gens.get(0);
        let mut num_results = 0;
        if n.is_multiple_of(g) {
            sink.accept(0, 1, &[(n / g) as u32]);
            num_results = 1;
        }
        return Ok(RunReport {
            dim: 1,
            memo_dim: 0,
            element: n,
            num_results,
            iterations: 0,
            steps: 0,
            steals: 0,
            memo_timing: MemoTiming::default(),
            runtime: started.elapsed(),
        });
    }

    let (memo, memo_timing) = match config.memo_dim {
        Some(k) => {
            let top = config.top_of_memo.unwrap_or(n + 1);
            let (memo, timing) = populate_memo(gens, k, top, config.workers, config.memory_limit)?;
            (Some(memo), timing)
        }
        None => (None, MemoTiming::default()),
    };
    let max_set = memo.as_ref().map_or(0, MemoTable::max_set_cardinality);
    if config.buffer_capacity <= max_set {
        return Err(Error::InvalidConfig(format!(
            "buffer capacity {} must exceed the largest memo entry ({max_set})",
            config.buffer_capacity
        )));
    }
    let reserve = max_set + 1;

    let mut lanes: Vec<Lane> = split_work(n, gens, config.workers)
        .into_iter()
        .map(|(state, slice)| {
            let mut buffer = ResultBuffer::new(d, config.buffer_capacity);
            buffer.assign(slice);
            Lane {
                state,
                staging: OutputStaging::new(d, max_set),
                buffer,
                steps: 0,
            }
        })
        .collect();
    let mut counter = CountingSink::default();
    let mut flush = |lanes: &mut [Lane], sink: &mut S| {
        let mut tee = Tee(sink, &mut counter);
        flush_buffers(lanes.iter_mut().map(|l| &mut l.buffer), &mut tee);
    };

    // The top stream's initial candidate is collected like any other step.
    for lane in &mut lanes {
        copy_outputs_to_buffer_and_clear(&mut lane.state, &mut lane.staging, &mut lane.buffer)?;
    }

    let pool = (config.workers > 1).then(|| worker_pool(config.workers));
    let memo = memo.as_ref();
    let mut iteration = 0u64;
    let mut steals = 0u64;
    while lanes.iter().any(|l| !l.state.end_of_stream) {
        if iteration > 0 && iteration.is_multiple_of(config.rebalance_every) {
            flush(&mut lanes, sink);
            let mut states: Vec<StreamState> = lanes.iter().map(|l| l.state.clone()).collect();
            let mut slices: Vec<Option<SliceKey>> = lanes.iter().map(|l| l.buffer.slice()).collect();
            let stolen = rebalance(&mut states, &mut slices);
            if stolen > 0 {
                steals += stolen as u64;
                for ((lane, state), slice) in lanes.iter_mut().zip(states).zip(slices) {
                    lane.buffer.assign(slice);
                    lane.state = state;
                }
            }
        }
        let budget = config.rebalance_every - iteration % config.rebalance_every;
        match &pool {
            Some(pool) => pool.install(|| {
                lanes
                    .par_iter_mut()
                    .try_for_each(|lane| lane.run(memo, budget, reserve))
            })?,
            None => lanes.iter_mut().try_for_each(|lane| lane.run(memo, budget, reserve))?,
        }
        iteration += budget;
        if lanes.iter().any(|l| l.buffer.free() < reserve) {
            flush(&mut lanes, sink);
        }
    }
    flush(&mut lanes, sink);

    Ok(RunReport {
        dim: d,
        memo_dim: memo.map_or(0, MemoTable::memo_dim),
        element: n,
        num_results: counter.count,
        iterations: iteration,
        steps: lanes.iter().map(|l| l.steps).sum(),
        steals,
        memo_timing,
        runtime: started.elapsed(),
    })
}

/// Forwards to the caller's sink while counting.
struct Tee<'a, S: ?Sized>(&'a mut S, &'a mut CountingSink);

impl<S: FactorizationSink + ?Sized> FactorizationSink for Tee<'_, S> {
    fn accept(&mut self, slice: SliceKey, dim: usize, coords: &[u32]) {
        self.1.accept(slice, dim, coords);
        self.0.accept(slice, dim, coords);
    }
}
