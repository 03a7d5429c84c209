//! Dimensionwise dynamic tabulation of `Z(0), Z(1), ..., Z(n)`.
//!
//! Every list is built from earlier lists through the disjoint recurrence
//!
//! ```text
//! Z(m) = incr_1(Z_{≥1}(m - g_1)) ⊔ incr_2(Z_{≥2}(m - g_2)) ⊔ ... ⊔ incr_d(Z_{≥d}(m - g_d))
//! ```
//!
//! where `Z_{≥i}(x)` holds the factorizations of `x` that vanish left of
//! coordinate `i`. Each block is lexicographically above the next one, so
//! concatenating the blocks of already-descending lists yields a descending
//! list. Block `i` of `Z(m)` is exactly `Z_{=i}(m)`, the factorizations whose
//! first nonzero coordinate is `i`; its length is recorded in the
//! cardinality matrix, which is all the parallel variants need to pre-assign
//! disjoint output regions.
//!
//! The loops run over all of `0..=n` and only require `m - g_i ≥ 0`, so
//! non-members simply get empty lists. An [`AperyTable`] can optionally be
//! used to skip them.

mod oracle;
mod parallel;

use std::collections::HashMap;
use std::io;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::ThreadPool;

use crate::apery::AperyTable;
use crate::error::{Error, Result};
use crate::semigroup::{write_coords, zeroes_left_of, Factorization, GeneratorTuple};

pub use oracle::{brute_force_factorizations, factorizations_up_to_element_sets, BRUTE_FORCE_CAP};
pub use parallel::{
    copy_and_increment_index, lex_factorization_lists_elementwise_parallel,
    lex_factorization_lists_factorizationwise_parallel,
};

/// Default ceiling on predicted table storage, in bytes.
pub const DEFAULT_MEMORY_LIMIT: u64 = 8_000_000_000;

/// Per-element, per-index block sizes `C[m][i] = |Z_{=i}(m)|`.
///
/// Row 0 is `(0, ..., 0, 1)`: every suffix sum of it is 1 and every prefix
/// sum left of the last index is 0, so `Z(0) = [0]` is found at offset 0
/// with length 1 regardless of which index looks back at it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cardinalities {
    dim: usize,
    up_to: u64,
    data: Vec<u64>,
}

impl Cardinalities {
    /// Runs the counting recurrence `C[m][i] = Σ_{j≥i} C[m - g_i][j]` alone,
    /// without materializing any factorization.
    pub fn compute(n: u64, gens: &GeneratorTuple) -> Result<Self> {
        Self::compute_with(n, gens, None, DEFAULT_MEMORY_LIMIT)
    }

    pub(crate) fn compute_with(
        n: u64,
        gens: &GeneratorTuple,
        members: Option<&AperyTable>,
        memory_limit: u64,
    ) -> Result<Self> {
        let d = gens.dim();
        let rows = n as u128 + 1;
        let bytes = rows * d as u128 * 8;
        if bytes > memory_limit as u128 {
            return Err(Error::ResourceLimit {
                what: "cardinality matrix bytes",
                required: bytes,
                limit: memory_limit as u128,
            });
        }
        let rows = rows as usize;
        let mut data = vec![0u64; rows * d];
        data[d - 1] = 1;
        // suffix[m * (d + 1) + i] = Σ_{j≥i} C[m][j]
        let mut suffix = vec![0u64; rows * (d + 1)];
        suffix[..d].fill(1);
        for m in 1..rows {
            if members.is_some_and(|t| !t.contains(m as u64)) {
                continue;
            }
            for i in 0..d {
                let g = gens.get(i) as usize;
                if m >= g {
                    data[m * d + i] = suffix[(m - g) * (d + 1) + i];
                }
            }
            for i in (0..d).rev() {
                suffix[m * (d + 1) + i] =
                    suffix[m * (d + 1) + i + 1].saturating_add(data[m * d + i]);
            }
        }
        Ok(Cardinalities { dim: d, up_to: n, data })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn up_to(&self) -> u64 {
        self.up_to
    }

    /// The row `C[m][0..d]`.
    pub fn row(&self, m: u64) -> &[u64] {
        let m = m as usize;
        &self.data[m * self.dim..(m + 1) * self.dim]
    }

    /// `|Z(m)|`.
    pub fn count(&self, m: u64) -> u64 {
        if m == 0 {
            1
        } else {
            self.row(m).iter().fold(0u64, |acc, &c| acc.saturating_add(c))
        }
    }

    /// `Σ_{j<i} C[m][j]`: where `Z_{≥i}(m)` begins inside `Z(m)`.
    pub fn start_of(&self, m: u64, index: usize) -> u64 {
        self.row(m)[..index].iter().sum()
    }

    /// `Σ_{j≥i} C[m][j] = |Z_{≥i}(m)|`.
    pub fn count_from(&self, m: u64, index: usize) -> u64 {
        self.row(m)[index..].iter().sum()
    }

    /// `Σ_m |Z(m)|` over the whole table.
    pub fn total(&self) -> u128 {
        (0..=self.up_to).map(|m| self.count(m) as u128).sum()
    }

    /// CSV with header `m,i,cardinality`, one row per element and index.
    pub fn write_csv<W: io::Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "m,i,cardinality")?;
        for m in 0..=self.up_to {
            for (i, c) in self.row(m).iter().enumerate() {
                writeln!(out, "{m},{i},{c}")?;
            }
        }
        Ok(())
    }
}

/// Factorization lists for every element `0..=n`, each in strictly
/// descending lexicographic order, stored flat with per-element offsets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorizationTable {
    gens: GeneratorTuple,
    coords: Vec<u32>,
    /// `offsets[m]..offsets[m + 1]` indexes factorizations of `m`.
    offsets: Vec<usize>,
    cardinalities: Cardinalities,
}

impl FactorizationTable {
    pub fn generators(&self) -> &GeneratorTuple {
        &self.gens
    }

    pub fn dim(&self) -> usize {
        self.gens.dim()
    }

    pub fn up_to(&self) -> u64 {
        self.cardinalities.up_to
    }

    pub fn cardinalities(&self) -> &Cardinalities {
        &self.cardinalities
    }

    /// `|Z(m)|`.
    pub fn len(&self, m: u64) -> usize {
        let m = m as usize;
        self.offsets[m + 1] - self.offsets[m]
    }

    pub fn is_empty(&self, m: u64) -> bool {
        self.len(m) == 0
    }

    /// Flat coordinates of `Z(m)`, `dim()` values per factorization.
    pub fn flat(&self, m: u64) -> &[u32] {
        let d = self.dim();
        let m = m as usize;
        &self.coords[self.offsets[m] * d..self.offsets[m + 1] * d]
    }

    /// Iterates `Z(m)` in stored (descending) order.
    pub fn list(&self, m: u64) -> std::slice::ChunksExact<'_, u32> {
        self.flat(m).chunks_exact(self.dim())
    }

    pub fn factorizations(&self, m: u64) -> Vec<Factorization> {
        self.list(m).map(Factorization::from).collect()
    }

    pub fn total_factorizations(&self) -> usize {
        *self.offsets.last().expect("offsets are never empty")
    }

    /// One block per element: `# m=<m> count=<k>` then `k` coordinate lines.
    pub fn write_lists<W: io::Write>(&self, mut out: W) -> io::Result<()> {
        let mut line = String::new();
        for m in 0..=self.up_to() {
            writeln!(out, "# m={m} count={}", self.len(m))?;
            for f in self.list(m) {
                line.clear();
                write_coords(&mut line, f).expect("writing to a String");
                line.push('\n');
                out.write_all(line.as_bytes())?;
            }
        }
        Ok(())
    }

    pub(crate) fn into_flat_parts(self) -> (GeneratorTuple, Vec<u32>, Vec<usize>) {
        (self.gens, self.coords, self.offsets)
    }

    /// Builds a table from explicit descending lists, classifying each
    /// factorization by its first nonzero coordinate.
    pub(crate) fn from_sorted_lists(gens: &GeneratorTuple, lists: &[Vec<Factorization>]) -> Self {
        let d = gens.dim();
        let mut coords = Vec::new();
        let mut offsets = Vec::with_capacity(lists.len() + 1);
        let mut data = vec![0u64; lists.len() * d];
        offsets.push(0);
        for (m, list) in lists.iter().enumerate() {
            for f in list {
                coords.extend_from_slice(f.coords());
                if m > 0 {
                    let first = f.coords().iter().position(|&c| c > 0).expect("nonzero");
                    data[m * d + first] += 1;
                }
            }
            offsets.push(offsets[m] + list.len());
        }
        if !lists.is_empty() {
            data[d - 1] = 1;
        }
        FactorizationTable {
            gens: gens.clone(),
            coords,
            offsets,
            cardinalities: Cardinalities {
                dim: d,
                up_to: lists.len() as u64 - 1,
                data,
            },
        }
    }
}

/// Which tabulation route builds the table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DpStrategy {
    /// Hash-set union over the non-disjoint recurrence, sorted afterwards.
    SetOracle,
    /// Single-threaded filtered concatenation.
    SequentialList,
    /// Elements of one batch computed concurrently; barrier between batches.
    ElementwiseParallel,
    /// Each copy-and-increment block split across workers.
    FactorizationwiseParallel,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DpConfig {
    pub strategy: DpStrategy,
    pub workers: usize,
    /// Elementwise batch size; defaults to the smallest generator.
    pub batch_size: Option<u64>,
    pub memory_limit: u64,
    /// Skip elements outside the semigroup using an [`AperyTable`].
    pub skip_non_members: bool,
}

impl Default for DpConfig {
    fn default() -> Self {
        DpConfig {
            strategy: DpStrategy::SequentialList,
            workers: 1,
            batch_size: None,
            memory_limit: DEFAULT_MEMORY_LIMIT,
            skip_non_members: false,
        }
    }
}

impl DpConfig {
    pub fn with_strategy(strategy: DpStrategy) -> Self {
        DpConfig {
            strategy,
            ..Default::default()
        }
    }

    pub fn validate(&self, gens: &GeneratorTuple) -> Result<()> {
        if self.workers == 0 {
            return Err(Error::InvalidConfig("worker count must be at least 1".into()));
        }
        if let Some(b) = self.batch_size {
            if b == 0 || b > gens.smallest() {
                return Err(Error::Contract(format!(
                    "batch size {b} must lie in 1..={}",
                    gens.smallest()
                )));
            }
        }
        Ok(())
    }
}

/// Builds the table for `0..=n` with the configured strategy.
pub fn build_table(n: u64, gens: &GeneratorTuple, config: &DpConfig) -> Result<FactorizationTable> {
    config.validate(gens)?;
    match config.strategy {
        DpStrategy::SetOracle => {
            let sets = factorizations_up_to_element_sets(n, gens);
            let lists: Vec<Vec<Factorization>> = sets
                .into_iter()
                .map(|s| {
                    let mut v: Vec<_> = s.into_iter().collect();
                    v.sort_unstable_by(|a, b| b.cmp(a));
                    v
                })
                .collect();
            Ok(FactorizationTable::from_sorted_lists(gens, &lists))
        }
        DpStrategy::SequentialList => sequential(n, gens, config),
        DpStrategy::ElementwiseParallel => parallel::elementwise(n, gens, config),
        DpStrategy::FactorizationwiseParallel => parallel::factorizationwise(n, gens, config),
    }
}

/// Single-threaded lexicographic tabulation with the default memory limit.
pub fn lex_factorization_lists_up_to_element(
    n: u64,
    gens: &GeneratorTuple,
) -> Result<FactorizationTable> {
    sequential(n, gens, &DpConfig::default())
}

/// Counting pass plus storage check, shared by every list strategy.
pub(crate) fn plan(
    n: u64,
    gens: &GeneratorTuple,
    config: &DpConfig,
) -> Result<(Cardinalities, Option<AperyTable>, Vec<usize>)> {
    let members = config.skip_non_members.then(|| AperyTable::build(gens));
    let cards = Cardinalities::compute_with(n, gens, members.as_ref(), config.memory_limit)?;
    let bytes = cards.total() * gens.dim() as u128 * 4;
    if bytes > config.memory_limit as u128 {
        return Err(Error::ResourceLimit {
            what: "factorization table bytes",
            required: bytes,
            limit: config.memory_limit as u128,
        });
    }
    let mut offsets = Vec::with_capacity(n as usize + 2);
    offsets.push(0usize);
    for m in 0..=n {
        let next = offsets[m as usize] + cards.count(m) as usize;
        offsets.push(next);
    }
    Ok((cards, members, offsets))
}

fn sequential(n: u64, gens: &GeneratorTuple, config: &DpConfig) -> Result<FactorizationTable> {
    let d = gens.dim();
    let (planned, members, _) = plan(n, gens, config)?;
    let mut coords: Vec<u32> = Vec::with_capacity(planned.total() as usize * d);
    let mut offsets = Vec::with_capacity(n as usize + 2);
    let mut data = vec![0u64; (n as usize + 1) * d];
    offsets.push(0);
    coords.resize(d, 0);
    offsets.push(1);
    data[d - 1] = 1;
    let mut scratch = vec![0u32; d];
    for m in 1..=n as usize {
        if members.as_ref().is_some_and(|t| !t.contains(m as u64)) {
            offsets.push(offsets[m]);
            continue;
        }
        for i in 0..d {
            let g = gens.get(i) as usize;
            if m < g {
                continue;
            }
            let src = m - g;
            let (lo, hi) = (offsets[src] * d, offsets[src + 1] * d);
            let mut copied = 0u64;
            for k in (lo..hi).step_by(d) {
                let a = &coords[k..k + d];
                if zeroes_left_of(a, i) {
                    scratch.copy_from_slice(a);
                    scratch[i] += 1;
                    coords.extend_from_slice(&scratch);
                    copied += 1;
                }
            }
            data[m * d + i] = copied;
        }
        offsets.push(coords.len() / d);
    }
    Ok(FactorizationTable {
        gens: gens.clone(),
        coords,
        offsets,
        cardinalities: Cardinalities { dim: d, up_to: n, data },
    })
}

/// Shared rayon pools keyed by worker count.
pub(crate) fn worker_pool(workers: usize) -> Arc<ThreadPool> {
    static POOLS: OnceLock<Mutex<HashMap<usize, Arc<ThreadPool>>>> = OnceLock::new();
    let pools = POOLS.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = pools.lock().expect("pool registry poisoned");
    guard
        .entry(workers)
        .or_insert_with(|| {
            Arc::new(
                rayon::ThreadPoolBuilder::new()
                    .num_threads(workers)
                    .thread_name(move |k| format!("semifact-{workers}-{k}"))
                    .build()
                    .expect("failed to spawn worker pool"),
            )
        })
        .clone()
}

/// Renders `Z(m)` as newline-terminated coordinate lines.
pub fn render_list(table: &FactorizationTable, m: u64) -> String {
    let mut s = String::new();
    for f in table.list(m) {
        write_coords(&mut s, f).expect("writing to a String");
        s.push('\n');
    }
    s
}
