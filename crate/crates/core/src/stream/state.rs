use crate::error::{Error, Result};
use crate::semigroup::{Factorization, GeneratorTuple};

use super::memo::MemoTable;

/// One stream's position in the descending candidate sequence.
///
/// A stream visits candidates `a` strictly decreasing from `last_candidate`
/// and stops once a candidate is at or below `lower_bound`. A candidate is
/// valid when `φ(a) = n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StreamState {
    pub n: u64,
    pub gens: GeneratorTuple,
    pub last_candidate: Factorization,
    pub lower_bound: Factorization,
    /// `last_candidate` is a fresh, valid factorization not yet collected.
    pub was_valid: bool,
    pub end_of_stream: bool,
}

impl StreamState {
    /// A stream positioned at the zero vector, not yet initialized.
    pub fn new(n: u64, gens: &GeneratorTuple) -> Self {
        let d = gens.dim();
        StreamState {
            n,
            gens: gens.clone(),
            last_candidate: Factorization::zero(d),
            lower_bound: Factorization::zero(d),
            was_valid: false,
            end_of_stream: false,
        }
    }

    /// A stream seeded at `(seed, 0, ..., 0)` that never reports its seed
    /// and stops at `(lower, 0, ..., 0)`.
    pub fn seeded(n: u64, gens: &GeneratorTuple, seed: u32, lower: u32) -> Self {
        let mut s = StreamState::new(n, gens);
        s.last_candidate.coords_mut()[0] = seed;
        s.lower_bound.coords_mut()[0] = lower;
        s
    }

    pub fn dim(&self) -> usize {
        self.gens.dim()
    }

    /// Positions the stream at the greatest candidate `(⌈n/g_1⌉, 0, ..., 0)`.
    pub fn set_initial_candidate(&mut self) {
        let g = self.gens.get(0);
        let top = self.n.div_ceil(g);
        let a = self.last_candidate.coords_mut();
        a.fill(0);
        a[0] = top as u32;
        self.lower_bound.coords_mut().fill(0);
        self.was_valid = self.n.is_multiple_of(g);
        self.end_of_stream = false;
    }

    /// Steps to the next candidate without a memo.
    pub fn next_candidate(&mut self) {
        self.advance(None)
            .expect("stepping without a memo cannot overflow staging");
    }

    /// Steps to the next candidate, emitting a whole tail set into `out`
    /// when the memo covers the remaining coordinates.
    pub fn next_candidate_dynamic(&mut self, memo: &MemoTable, out: &mut OutputStaging) -> Result<()> {
        self.advance(Some((memo, out)))
    }

    fn advance(&mut self, mut memo: Option<(&MemoTable, &mut OutputStaging)>) -> Result<()> {
        if self.end_of_stream {
            return Ok(());
        }
        let d = self.dim();
        let a = self.last_candidate.coords_mut();
        // Rightmost nonzero coordinate, excluding the final one.
        let Some(i) = (0..d - 1).rev().find(|&j| a[j] > 0) else {
            self.end_of_stream = true;
            self.was_valid = false;
            return Ok(());
        };
        a[d - 1] = 0;
        a[i] -= 1;
        let p = self.n - self.gens.weight(a);

        let memo_hit = match &memo {
            Some((table, _)) => i + table.memo_dim() + 1 == d && p < table.top_of_memo(),
            None => false,
        };
        if memo_hit {
            let (table, out) = memo.as_mut().expect("memo hit implies a memo");
            out.fill(&a[..=i], table.entries(p))?;
            self.was_valid = false;
        } else {
            let g = self.gens.get(i + 1);
            let mut m = p / g;
            let r = p - m * g;
            self.was_valid = true;
            if r != 0 {
                m += 1;
                self.was_valid = false;
            }
            a[i + 1] = m as u32;
        }

        if self.last_candidate <= self.lower_bound {
            self.end_of_stream = true;
            // Anything strictly below the bound belongs to the next slice.
            if self.last_candidate < self.lower_bound {
                self.was_valid = false;
                if let Some((_, out)) = memo {
                    out.clear();
                }
            }
        }
        Ok(())
    }
}

/// Per-stream scratch rows receiving one memo hit's worth of output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutputStaging {
    dim: usize,
    capacity: usize,
    coords: Vec<u32>,
}

impl OutputStaging {
    pub fn new(dim: usize, capacity: usize) -> Self {
        OutputStaging {
            dim,
            capacity,
            coords: Vec::with_capacity(dim * capacity),
        }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn count(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn as_flat(&self) -> &[u32] {
        &self.coords
    }

    pub fn clear(&mut self) {
        self.coords.clear();
    }

    #[cfg(test)]
    pub(crate) fn coords_for_test(&mut self, coords: &[u32]) {
        self.coords.clear();
        self.coords.extend_from_slice(coords);
    }

    /// Writes `prefix ++ tail` for every tail in the flat `tails`.
    fn fill(&mut self, prefix: &[u32], tails: &[u32]) -> Result<()> {
        let tail_dim = self.dim - prefix.len();
        let rows = tails.len() / tail_dim;
        if rows > self.capacity {
            return Err(Error::Contract(format!(
                "memo entry with {rows} factorizations exceeds staging capacity {}",
                self.capacity
            )));
        }
        self.coords.clear();
        for tail in tails.chunks_exact(tail_dim) {
            self.coords.extend_from_slice(prefix);
            self.coords.extend_from_slice(tail);
        }
        Ok(())
    }
}
