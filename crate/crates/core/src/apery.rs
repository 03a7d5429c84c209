//! Residue-class membership table over the smallest generator.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::semigroup::GeneratorTuple;

/// For each residue `r` modulo the smallest generator, the least element of
/// the semigroup congruent to `r`, or `None` when the class is unreachable
/// (which happens exactly when the generators share a common factor).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AperyTable {
    modulus: u64,
    residue_minima: Vec<Option<u64>>,
}

impl AperyTable {
    /// Shortest paths over the residue graph: an edge `r -> (r + g) mod s`
    /// of weight `g` for every generator.
    pub fn build(gens: &GeneratorTuple) -> Self {
        let modulus = gens.smallest();
        let s = modulus as usize;
        let mut best: Vec<Option<u64>> = vec![None; s];
        best[0] = Some(0);
        let mut heap = BinaryHeap::new();
        heap.push(Reverse((0u64, 0usize)));
        while let Some(Reverse((dist, r))) = heap.pop() {
            if best[r] != Some(dist) {
                continue;
            }
            for &g in gens.as_slice() {
                let next = dist + g;
                let nr = (next % modulus) as usize;
                if best[nr].is_none_or(|cur| next < cur) {
                    best[nr] = Some(next);
                    heap.push(Reverse((next, nr)));
                }
            }
        }
        AperyTable {
            modulus,
            residue_minima: best,
        }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn residue_minima(&self) -> &[Option<u64>] {
        &self.residue_minima
    }

    pub fn contains(&self, x: u64) -> bool {
        match self.residue_minima[(x % self.modulus) as usize] {
            Some(min) => x >= min,
            None => false,
        }
    }

    /// Largest non-member, or an error naming the first unreachable class.
    /// Returns `-1` when every natural is a member (a generator equals 1).
    pub fn frobenius_number(&self) -> Result<i64> {
        let mut max = i64::MIN;
        for (r, entry) in self.residue_minima.iter().enumerate() {
            match entry {
                Some(v) => max = max.max(*v as i64 - self.modulus as i64),
                None => {
                    return Err(Error::InvalidGenerators(format!(
                        "residue class {r} mod {} is unreachable; generators are not coprime",
                        self.modulus
                    )))
                }
            }
        }
        Ok(max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Membership by sieve: `reach[x]` iff x is a nonnegative combination.
    fn sieve(gens: &[u64], upto: usize) -> Vec<bool> {
        let mut reach = vec![false; upto + 1];
        reach[0] = true;
        for x in 1..=upto {
            reach[x] = gens.iter().any(|&g| x >= g as usize && reach[x - g as usize]);
        }
        reach
    }

    fn table(g: &[u64]) -> AperyTable {
        AperyTable::build(&GeneratorTuple::new(g.to_vec()).unwrap())
    }

    #[test]
    fn sieve_oracle_matches_frozen_values() {
        // Frozen values below were produced by this sieve.
        let reach = sieve(&[6, 9, 20], 200);
        let mut minima = [None; 6];
        for (x, &r) in reach.iter().enumerate() {
            if r && minima[x % 6].is_none() {
                minima[x % 6] = Some(x as u64);
            }
        }
        assert_eq!(minima, [Some(0), Some(49), Some(20), Some(9), Some(40), Some(29)]);
        assert_eq!(reach.iter().rposition(|&r| !r), Some(43));
    }

    #[test]
    fn build_examples() {
        let some = |v: &[u64]| v.iter().map(|&x| Some(x)).collect::<Vec<_>>();
        assert_eq!(table(&[6, 9, 20]).residue_minima(), some(&[0, 49, 20, 9, 40, 29]));
        assert_eq!(table(&[2, 3]).residue_minima(), some(&[0, 3]));
        assert_eq!(table(&[1]).residue_minima(), some(&[0]));
        assert_eq!(table(&[4, 2]).residue_minima(), &[Some(0), None]);
    }

    #[test]
    fn contains_examples() {
        assert!(!table(&[6, 9, 20]).contains(43));
        assert!(table(&[6, 9, 20]).contains(44));
        assert!(table(&[2, 3]).contains(0));
        assert!(!table(&[2, 3]).contains(1));
        assert!(!table(&[2, 4]).contains(7));
    }

    #[test]
    fn frobenius_examples() {
        assert_eq!(table(&[6, 9, 20]).frobenius_number().unwrap(), 43);
        assert_eq!(table(&[2, 3]).frobenius_number().unwrap(), 1);
        assert!(table(&[2, 4]).frobenius_number().is_err());
        assert_eq!(table(&[1, 5]).frobenius_number().unwrap(), -1);
    }

    proptest! {
        #[test]
        fn contains_agrees_with_sieve(g in prop::collection::vec(1u64..30, 1..5)) {
            let t = table(&g);
            let reach = sieve(&g, 200);
            for (x, &r) in reach.iter().enumerate() {
                prop_assert_eq!(t.contains(x as u64), r, "x = {}", x);
            }
            for (r, v) in t.residue_minima().iter().enumerate() {
                if let Some(v) = v {
                    prop_assert_eq!(*v % t.modulus(), r as u64);
                }
            }
        }
    }
}
