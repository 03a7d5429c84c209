use std::time::Instant;

use crate::dp::{build_table, DpConfig, DpStrategy};
use crate::error::{Error, Result};
use crate::semigroup::GeneratorTuple;

/// Descending lists `Z(x, tail)` over the trailing `memo_dim` generators for
/// every `x < top_of_memo`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MemoTable {
    memo_dim: usize,
    top_of_memo: u64,
    tail_gens: GeneratorTuple,
    coords: Vec<u32>,
    offsets: Vec<usize>,
    max_set_cardinality: usize,
}

impl MemoTable {
    pub fn memo_dim(&self) -> usize {
        self.memo_dim
    }

    /// Exclusive bound on tabulated elements.
    pub fn top_of_memo(&self) -> u64 {
        self.top_of_memo
    }

    pub fn tail_gens(&self) -> &GeneratorTuple {
        &self.tail_gens
    }

    pub fn max_set_cardinality(&self) -> usize {
        self.max_set_cardinality
    }

    /// Flat coordinates of `Z(x, tail)`; `x` must be below `top_of_memo`.
    pub fn entries(&self, x: u64) -> &[u32] {
        let x = x as usize;
        &self.coords[self.offsets[x] * self.memo_dim..self.offsets[x + 1] * self.memo_dim]
    }

    pub fn len(&self, x: u64) -> usize {
        let x = x as usize;
        self.offsets[x + 1] - self.offsets[x]
    }

    pub fn is_empty(&self, x: u64) -> bool {
        self.len(x) == 0
    }
}

/// Wall time of both memo population routes, in microseconds.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MemoTiming {
    pub sequential_us: u64,
    pub parallel_us: u64,
}

/// Tabulates the memo with the single-threaded and the factorizationwise
/// parallel routes, checks that they agree and keeps one of them.
pub fn populate_memo(
    gens: &GeneratorTuple,
    memo_dim: usize,
    top_of_memo: u64,
    workers: usize,
    memory_limit: u64,
) -> Result<(MemoTable, MemoTiming)> {
    let d = gens.dim();
    if memo_dim == 0 || memo_dim >= d {
        return Err(Error::InvalidConfig(format!(
            "memo dimension {memo_dim} must lie in 1..={}",
            d.saturating_sub(1)
        )));
    }
    if top_of_memo == 0 {
        return Err(Error::InvalidConfig("top of memo must be at least 1".into()));
    }
    let tail = gens.tail(memo_dim)?;
    let upto = top_of_memo - 1;

    let config = DpConfig {
        memory_limit,
        ..DpConfig::with_strategy(DpStrategy::SequentialList)
    };
    let started = Instant::now();
    let sequential = build_table(upto, &tail, &config)?;
    let sequential_us = started.elapsed().as_micros() as u64;

    let config = DpConfig {
        strategy: DpStrategy::FactorizationwiseParallel,
        workers,
        ..config
    };
    let started = Instant::now();
    let parallel = build_table(upto, &tail, &config)?;
    let parallel_us = started.elapsed().as_micros() as u64;

    if parallel != sequential {
        return Err(Error::Contract(
            "sequential and parallel memo population disagree".into(),
        ));
    }
    drop(parallel);

    let max_set_cardinality = (0..=upto).map(|x| sequential.len(x)).max().unwrap_or(0);
    let (tail_gens, coords, offsets) = sequential.into_flat_parts();
    Ok((
        MemoTable {
            memo_dim,
            top_of_memo,
            tail_gens,
            coords,
            offsets,
            max_set_cardinality,
        },
        MemoTiming {
            sequential_us,
            parallel_us,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dp::DEFAULT_MEMORY_LIMIT;

    fn gens(g: &[u64]) -> GeneratorTuple {
        GeneratorTuple::new(g.to_vec()).unwrap()
    }

    #[test]
    fn memo_over_two_trailing_generators() {
        let (memo, _) = populate_memo(&gens(&[6, 9, 20]), 2, 25, 2, DEFAULT_MEMORY_LIMIT).unwrap();
        assert_eq!(memo.tail_gens().as_slice(), &[9, 20]);
        let nonempty: Vec<u64> = (0..25).filter(|&x| !memo.is_empty(x)).collect();
        assert_eq!(nonempty, [0, 9, 18, 20]);
        assert_eq!(memo.max_set_cardinality(), 1);
        assert_eq!(memo.entries(0), &[0, 0]);
        assert_eq!(memo.entries(18), &[2, 0]);
        assert_eq!(memo.entries(20), &[0, 1]);
    }

    #[test]
    fn single_generator_memo() {
        let (memo, _) = populate_memo(&gens(&[4, 5, 7]), 1, 50, 3, DEFAULT_MEMORY_LIMIT).unwrap();
        for x in 0..50u64 {
            if x % 7 == 0 {
                assert_eq!(memo.entries(x), &[(x / 7) as u32]);
            } else {
                assert!(memo.is_empty(x));
            }
        }
    }

    #[test]
    fn memo_dimension_bounds() {
        let g = gens(&[6, 9, 20]);
        assert!(populate_memo(&g, 0, 10, 1, DEFAULT_MEMORY_LIMIT).is_err());
        assert!(populate_memo(&g, 3, 10, 1, DEFAULT_MEMORY_LIMIT).is_err());
        assert!(populate_memo(&g, 1, 0, 1, DEFAULT_MEMORY_LIMIT).is_err());
        assert!(populate_memo(&gens(&[5]), 1, 10, 1, DEFAULT_MEMORY_LIMIT).is_err());
    }
}
