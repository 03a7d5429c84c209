//! Elementwise and factorizationwise parallel tabulation.
//!
//! Both variants size every list up front from the counting pass, so each
//! worker writes only into a region nobody else touches.

use rayon::prelude::*;

use super::{plan, worker_pool, DpConfig, DpStrategy, FactorizationTable};
use crate::error::{Error, Result};
use crate::semigroup::{zeroes_left_of, GeneratorTuple};

/// Factorizations per parallel task in a copy-and-increment block. Smaller
/// blocks are copied inline by the coordinating thread.
const COPY_GRAIN: usize = 4096;

/// `dst[k] = src[k] + e_index` for every factorization `k` of two
/// equal-length flat slices of dimension `dim`.
///
/// The borrow rules already make `dst` and `src` disjoint.
pub fn copy_and_increment_index(dst: &mut [u32], src: &[u32], dim: usize, index: usize) -> Result<()> {
    if index >= dim {
        return Err(Error::IndexOutOfRange { index, dim });
    }
    if dst.len() != src.len() || !src.len().is_multiple_of(dim) {
        return Err(Error::Contract(format!(
            "copy-and-increment needs equal whole-factorization slices, got {} and {} values for dimension {dim}",
            dst.len(),
            src.len()
        )));
    }
    copy_increment_block(dst, src, dim, index);
    Ok(())
}

#[inline]
fn copy_increment_block(dst: &mut [u32], src: &[u32], dim: usize, index: usize) {
    dst.copy_from_slice(src);
    for k in (index..dst.len()).step_by(dim) {
        dst[k] += 1;
    }
}

fn par_copy_increment(dst: &mut [u32], src: &[u32], dim: usize, index: usize) {
    if dst.len() < COPY_GRAIN * dim {
        copy_increment_block(dst, src, dim, index);
        return;
    }
    dst.par_chunks_mut(COPY_GRAIN * dim)
        .zip(src.par_chunks(COPY_GRAIN * dim))
        .for_each(|(d, s)| copy_increment_block(d, s, dim, index));
}

/// Factorizationwise parallel tabulation on `workers` threads.
pub fn lex_factorization_lists_factorizationwise_parallel(
    n: u64,
    gens: &GeneratorTuple,
    workers: usize,
) -> Result<FactorizationTable> {
    let config = DpConfig {
        strategy: DpStrategy::FactorizationwiseParallel,
        workers,
        ..Default::default()
    };
    config.validate(gens)?;
    factorizationwise(n, gens, &config)
}

/// Elementwise parallel tabulation in batches of `batch_size ≤ g_smallest`.
pub fn lex_factorization_lists_elementwise_parallel(
    n: u64,
    gens: &GeneratorTuple,
    workers: usize,
    batch_size: u64,
) -> Result<FactorizationTable> {
    let config = DpConfig {
        strategy: DpStrategy::ElementwiseParallel,
        workers,
        batch_size: Some(batch_size),
        ..Default::default()
    };
    config.validate(gens)?;
    elementwise(n, gens, &config)
}

pub(super) fn factorizationwise(
    n: u64,
    gens: &GeneratorTuple,
    config: &DpConfig,
) -> Result<FactorizationTable> {
    let d = gens.dim();
    let (cards, members, offsets) = plan(n, gens, config)?;
    let mut coords = vec![0u32; offsets[n as usize + 1] * d];
    let pool = worker_pool(config.workers);
    pool.install(|| {
        for m in 1..=n {
            if members.as_ref().is_some_and(|t| !t.contains(m)) {
                continue;
            }
            let (done, rest) = coords.split_at_mut(offsets[m as usize] * d);
            let mut filled = 0usize;
            for i in 0..d {
                let g = gens.get(i);
                if m < g {
                    continue;
                }
                let src_m = m - g;
                let start = cards.start_of(src_m, i) as usize;
                let count = cards.count_from(src_m, i) as usize;
                debug_assert_eq!(cards.row(m)[i] as usize, count);
                let src_at = (offsets[src_m as usize] + start) * d;
                let src = &done[src_at..src_at + count * d];
                let dst = &mut rest[filled * d..(filled + count) * d];
                par_copy_increment(dst, src, d, i);
                filled += count;
            }
            debug_assert_eq!(filled as u64, cards.count(m));
        }
    });
    Ok(FactorizationTable {
        gens: gens.clone(),
        coords,
        offsets,
        cardinalities: cards,
    })
}

pub(super) fn elementwise(
    n: u64,
    gens: &GeneratorTuple,
    config: &DpConfig,
) -> Result<FactorizationTable> {
    let d = gens.dim();
    let batch = config.batch_size.unwrap_or(gens.smallest());
    let (cards, members, offsets) = plan(n, gens, config)?;
    let mut coords = vec![0u32; offsets[n as usize + 1] * d];
    let pool = worker_pool(config.workers);
    pool.install(|| {
        // Z(0) is the zero vector, already in place.
        let mut start = 1u64;
        while start <= n {
            let end = (start + batch).min(n + 1);
            let (done, rest) = coords.split_at_mut(offsets[start as usize] * d);
            let done: &[u32] = done;
            let mut regions = Vec::with_capacity((end - start) as usize);
            let mut rest = rest;
            for m in start..end {
                let (region, tail) = rest.split_at_mut(cards.count(m) as usize * d);
                regions.push((m, region));
                rest = tail;
            }
            regions.into_par_iter().for_each(|(m, region)| {
                if members.as_ref().is_some_and(|t| !t.contains(m)) {
                    return;
                }
                fill_element(m, region, done, &offsets, gens);
            });
            start = end;
        }
    });
    Ok(FactorizationTable {
        gens: gens.clone(),
        coords,
        offsets,
        cardinalities: cards,
    })
}

/// Filtered concatenation for a single element, reading only from `done`.
fn fill_element(m: u64, region: &mut [u32], done: &[u32], offsets: &[usize], gens: &GeneratorTuple) {
    let d = gens.dim();
    let mut at = 0usize;
    for i in 0..d {
        let g = gens.get(i);
        if m < g {
            continue;
        }
        let src_m = (m - g) as usize;
        let src = &done[offsets[src_m] * d..offsets[src_m + 1] * d];
        for a in src.chunks_exact(d) {
            if zeroes_left_of(a, i) {
                let out = &mut region[at..at + d];
                out.copy_from_slice(a);
                out[i] += 1;
                at += d;
            }
        }
    }
    debug_assert_eq!(at, region.len());
}
