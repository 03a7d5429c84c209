//! Work splitting over first-coordinate levels.
//!
//! A slice covering levels `lo..=hi` holds every candidate whose first
//! coordinate lies in that range. Its stream is seeded at
//! `(hi + 1, 0, ..., 0)`, whose successor is the greatest candidate of level
//! `hi`, and bounded below by `(lo, 0, ..., 0)`: candidates equal to the
//! bound are kept, anything strictly below is left for the slice underneath,
//! whose seed is that same bound. The topmost slice starts from the true
//! initial candidate instead of a seed.

use crate::semigroup::GeneratorTuple;

use super::buffer::SliceKey;
use super::state::StreamState;

/// Contiguous descending level ranges `(hi, lo)` for up to `workers` streams.
pub(crate) fn initial_ranges(top: u32, workers: usize) -> Vec<(u32, u32)> {
    let levels = top as u64 + 1;
    let parts = (workers as u64).min(levels);
    let base = levels / parts;
    let extra = levels % parts;
    let mut ranges = Vec::with_capacity(parts as usize);
    let mut hi = top as u64;
    for k in 0..parts {
        let width = base + u64::from(k < extra);
        let lo = hi + 1 - width;
        ranges.push((hi as u32, lo as u32));
        hi = lo.wrapping_sub(1);
    }
    ranges
}

/// Initial split of the full candidate range across `workers` streams.
///
/// Returns one state per worker with the slice it owns; surplus workers
/// start out ended with no slice.
pub fn split_work(n: u64, gens: &GeneratorTuple, workers: usize) -> Vec<(StreamState, Option<SliceKey>)> {
    let top = n.div_ceil(gens.get(0)) as u32;
    let ranges = initial_ranges(top, workers.max(1));
    let mut out = Vec::with_capacity(workers.max(1));
    for (k, &(hi, lo)) in ranges.iter().enumerate() {
        let mut state = if k == 0 {
            let mut s = StreamState::new(n, gens);
            s.set_initial_candidate();
            s
        } else {
            StreamState::seeded(n, gens, hi + 1, 0)
        };
        state.lower_bound.coords_mut()[0] = lo;
        out.push((state, Some(hi)));
    }
    while out.len() < workers.max(1) {
        let mut idle = StreamState::new(n, gens);
        idle.end_of_stream = true;
        out.push((idle, None));
    }
    out
}

/// Hands the lower half of the widest remaining range of an active stream
/// to each ended stream, in index order.
///
/// `slices[k]` is updated with the new owner's key. Returns the number of
/// steals performed.
pub fn rebalance(states: &mut [StreamState], slices: &mut [Option<SliceKey>]) -> usize {
    let mut steals = 0;
    for idle in 0..states.len() {
        if !states[idle].end_of_stream {
            continue;
        }
        let donor = states
            .iter()
            .enumerate()
            .filter(|(_, s)| !s.end_of_stream)
            .map(|(k, s)| (k, s.last_candidate.coords()[0], s.lower_bound.coords()[0]))
            .filter(|&(_, at, lo)| at >= lo + 2)
            .max_by(|x, y| (x.1 - x.2).cmp(&(y.1 - y.2)).then(y.0.cmp(&x.0)));
        let Some((donor, at, lo)) = donor else {
            break;
        };
        let mid = lo + (at - lo).div_ceil(2);
        let n = states[donor].n;
        let gens = states[donor].gens.clone();
        states[donor].lower_bound.coords_mut()[0] = mid;
        states[idle] = StreamState::seeded(n, &gens, mid, lo);
        slices[idle] = Some(mid - 1);
        steals += 1;
    }
    steals
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges_cover_levels_in_descending_order() {
        assert_eq!(initial_ranges(3, 2), vec![(3, 2), (1, 0)]);
        assert_eq!(initial_ranges(3, 1), vec![(3, 0)]);
        assert_eq!(initial_ranges(0, 4), vec![(0, 0)]);
        assert_eq!(initial_ranges(9, 3), vec![(9, 6), (5, 3), (2, 0)]);
        for top in 0..40 {
            for w in 1..10 {
                let r = initial_ranges(top, w);
                assert_eq!(r[0].0, top);
                assert_eq!(r.last().unwrap().1, 0);
                for pair in r.windows(2) {
                    assert_eq!(pair[0].1, pair[1].0 + 1);
                }
            }
        }
    }

    #[test]
    fn two_way_split_of_small_instance() {
        let g = GeneratorTuple::new(vec![2, 3]).unwrap();
        let split = split_work(6, &g, 2);
        let (first, second) = (&split[0], &split[1]);
        assert_eq!(first.0.last_candidate.coords(), &[3, 0]);
        assert!(first.0.was_valid);
        assert_eq!(first.0.lower_bound.coords(), &[2, 0]);
        assert_eq!(second.0.last_candidate.coords(), &[2, 0]);
        assert!(!second.0.was_valid);
        assert_eq!(second.0.lower_bound.coords(), &[0, 0]);
        assert_eq!((first.1, second.1), (Some(3), Some(1)));
    }

    #[test]
    fn surplus_workers_start_idle() {
        let g = GeneratorTuple::new(vec![5, 7]).unwrap();
        let split = split_work(4, &g, 3);
        assert_eq!(split.len(), 3);
        assert_eq!(split.iter().filter(|(s, _)| s.end_of_stream).count(), 1);
    }

    #[test]
    fn stealing_bisects_the_widest_range() {
        let g = GeneratorTuple::new(vec![1, 2]).unwrap();
        let mut states = vec![StreamState::seeded(100, &g, 50, 10), StreamState::new(100, &g)];
        states[1].end_of_stream = true;
        let mut slices = vec![Some(49), None];
        assert_eq!(rebalance(&mut states, &mut slices), 1);
        assert_eq!(states[0].lower_bound.coords(), &[30, 0]);
        assert_eq!(states[1].last_candidate.coords(), &[30, 0]);
        assert_eq!(states[1].lower_bound.coords(), &[10, 0]);
        assert_eq!(slices[1], Some(29));
        assert!(!states[1].end_of_stream && !states[1].was_valid);
    }

    #[test]
    fn narrow_ranges_are_not_split() {
        let g = GeneratorTuple::new(vec![1, 2]).unwrap();
        let mut states = vec![StreamState::seeded(100, &g, 11, 10), StreamState::new(100, &g)];
        states[1].end_of_stream = true;
        let mut slices = vec![Some(10), None];
        assert_eq!(rebalance(&mut states, &mut slices), 0);
        assert!(states[1].end_of_stream);
    }
}
