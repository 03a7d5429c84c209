use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::semigroup::FactorizationList;

use super::state::{OutputStaging, StreamState};

/// Identifies a stream slice by the highest first coordinate it covers.
/// Slices are disjoint ranges of first coordinates, so sorting keys in
/// descending order sorts slices in descending lexicographic order.
pub type SliceKey = u32;

/// Append-only per-stream result buffer of fixed capacity.
#[derive(Debug, Clone)]
pub struct ResultBuffer {
    dim: usize,
    capacity: usize,
    slice: Option<SliceKey>,
    coords: Vec<u32>,
}

impl ResultBuffer {
    pub fn new(dim: usize, capacity: usize) -> Self {
        ResultBuffer {
            dim,
            capacity,
            slice: None,
            coords: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn free(&self) -> usize {
        self.capacity - self.len()
    }

    pub fn slice(&self) -> Option<SliceKey> {
        self.slice
    }

    pub fn as_flat(&self) -> &[u32] {
        &self.coords
    }

    /// Tags subsequent emissions with `slice`. The buffer must be empty.
    pub(crate) fn assign(&mut self, slice: Option<SliceKey>) {
        debug_assert!(self.is_empty());
        self.slice = slice;
    }

    fn append(&mut self, coords: &[u32]) -> Result<()> {
        let rows = coords.len() / self.dim;
        if rows > self.free() {
            return Err(Error::Contract(format!(
                "result buffer overflow: {rows} rows into {} free",
                self.free()
            )));
        }
        self.coords.extend_from_slice(coords);
        Ok(())
    }
}

/// Receives flushed results, one run of factorizations at a time.
pub trait FactorizationSink {
    /// `coords` holds whole factorizations of dimension `dim`, in emission
    /// order, all belonging to `slice`.
    fn accept(&mut self, slice: SliceKey, dim: usize, coords: &[u32]);
}

/// Keeps every result, grouped by slice, for ordered assembly.
#[derive(Debug, Clone, Default)]
pub struct CollectingSink {
    dim: usize,
    slices: BTreeMap<SliceKey, Vec<u32>>,
}

impl CollectingSink {
    pub fn new(dim: usize) -> Self {
        CollectingSink {
            dim,
            slices: BTreeMap::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.slices.values().map(|v| v.len()).sum::<usize>() / self.dim.max(1)
    }

    pub fn is_empty(&self) -> bool {
        self.slices.values().all(Vec::is_empty)
    }

    /// Concatenates slices from the highest key down.
    pub fn into_list(self) -> FactorizationList {
        let total = self.slices.values().map(Vec::len).sum();
        let mut coords = Vec::with_capacity(total);
        for (_, run) in self.slices.into_iter().rev() {
            coords.extend_from_slice(&run);
        }
        FactorizationList::from_flat(self.dim.max(1), coords)
    }
}

impl FactorizationSink for CollectingSink {
    fn accept(&mut self, slice: SliceKey, dim: usize, coords: &[u32]) {
        self.dim = dim;
        self.slices.entry(slice).or_default().extend_from_slice(coords);
    }
}

/// Counts results without keeping them.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CountingSink {
    pub count: u64,
}

impl FactorizationSink for CountingSink {
    fn accept(&mut self, _slice: SliceKey, dim: usize, coords: &[u32]) {
        self.count += (coords.len() / dim) as u64;
    }
}

/// Moves one stream's step results into its buffer: the fresh candidate if
/// valid, then every staged row in order. Consumes `was_valid` and clears
/// the staging rows.
pub fn copy_outputs_to_buffer_and_clear(
    state: &mut StreamState,
    staging: &mut OutputStaging,
    buffer: &mut ResultBuffer,
) -> Result<()> {
    if state.was_valid {
        buffer.append(state.last_candidate.coords())?;
        state.was_valid = false;
    }
    buffer.append(staging.as_flat())?;
    staging.clear();
    Ok(())
}

/// Empties every buffer into `sink`, preserving per-stream order.
pub fn flush_buffers<'a, S, I>(buffers: I, sink: &mut S)
where
    S: FactorizationSink + ?Sized,
    I: IntoIterator<Item = &'a mut ResultBuffer>,
{
    for buffer in buffers {
        if buffer.is_empty() {
            continue;
        }
        let slice = buffer.slice.expect("non-empty buffer has a slice");
        sink.accept(slice, buffer.dim, &buffer.coords);
        buffer.coords.clear();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semigroup::GeneratorTuple;

    fn stream() -> StreamState {
        let mut s = StreamState::new(6, &GeneratorTuple::new(vec![2, 3]).unwrap());
        s.set_initial_candidate();
        s
    }

    #[test]
    fn copy_cases() {
        let mut buffer = ResultBuffer::new(2, 10);
        buffer.assign(Some(3));
        let mut staging = OutputStaging::new(2, 4);

        let mut s = stream();
        s.was_valid = false;
        copy_outputs_to_buffer_and_clear(&mut s, &mut staging, &mut buffer).unwrap();
        assert!(buffer.is_empty());

        let mut s = stream();
        copy_outputs_to_buffer_and_clear(&mut s, &mut staging, &mut buffer).unwrap();
        assert_eq!(buffer.as_flat(), &[3, 0]);
        assert!(!s.was_valid);
        // Collected once; a repeat adds nothing.
        copy_outputs_to_buffer_and_clear(&mut s, &mut staging, &mut buffer).unwrap();
        assert_eq!(buffer.len(), 1);
    }

    #[test]
    fn staged_rows_are_copied_in_order() {
        let mut buffer = ResultBuffer::new(3, 10);
        buffer.assign(Some(0));
        let mut staging = OutputStaging::new(3, 3);
        staging.coords_for_test(&[5, 1, 0, 5, 0, 2, 4, 4, 4]);
        let mut s = StreamState::new(1, &GeneratorTuple::new(vec![1, 1, 1]).unwrap());
        copy_outputs_to_buffer_and_clear(&mut s, &mut staging, &mut buffer).unwrap();
        assert_eq!(buffer.as_flat(), &[5, 1, 0, 5, 0, 2, 4, 4, 4]);
        assert_eq!(staging.count(), 0);
    }

    #[test]
    fn overflow_is_reported() {
        let mut buffer = ResultBuffer::new(2, 0);
        buffer.assign(Some(0));
        let mut staging = OutputStaging::new(2, 0);
        let mut s = stream();
        assert!(copy_outputs_to_buffer_and_clear(&mut s, &mut staging, &mut buffer).is_err());
    }

    #[test]
    fn flush_moves_everything_and_orders_slices() {
        let mut a = ResultBuffer::new(1, 8);
        let mut b = ResultBuffer::new(1, 8);
        let mut empty = ResultBuffer::new(1, 8);
        a.assign(Some(1));
        b.assign(Some(7));
        a.append(&[3, 2]).unwrap();
        b.append(&[9]).unwrap();
        let mut sink = CollectingSink::new(1);
        flush_buffers([&mut a, &mut b, &mut empty], &mut sink);
        assert!(a.is_empty() && b.is_empty());
        a.append(&[1]).unwrap();
        flush_buffers([&mut a], &mut sink);
        flush_buffers([&mut a], &mut sink);
        assert_eq!(sink.len(), 4);
        assert_eq!(sink.into_list().as_flat(), &[9, 3, 2, 1]);

        let mut counter = CountingSink::default();
        b.append(&[4, 5]).unwrap();
        flush_buffers([&mut b], &mut counter);
        assert_eq!(counter.count, 2);
    }
}
