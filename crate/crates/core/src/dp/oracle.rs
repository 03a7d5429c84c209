//! Reference routes used to cross-check the list algorithms.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::semigroup::{Factorization, GeneratorTuple};

/// Largest `Π_i (n / g_i + 1)` the brute-force enumerator accepts.
pub const BRUTE_FORCE_CAP: u128 = 50_000_000;

/// Set-based tabulation over the non-disjoint recurrence
/// `Z(m) = ∪_i incr_i(Z(m - g_i))`, for every `m` in `0..=n`.
///
/// Entry `m` of the result is `Z(m)`, empty for non-members.
pub fn factorizations_up_to_element_sets(n: u64, gens: &GeneratorTuple) -> Vec<HashSet<Factorization>> {
    let d = gens.dim();
    let mut table: Vec<HashSet<Factorization>> = Vec::with_capacity(n as usize + 1);
    table.push(HashSet::from([Factorization::zero(d)]));
    for m in 1..=n {
        let mut z = HashSet::new();
        for i in 0..d {
            let g = gens.get(i);
            if m < g {
                continue;
            }
            for a in &table[(m - g) as usize] {
                let mut b = a.clone();
                b.coords_mut()[i] += 1;
                z.insert(b);
            }
        }
        table.push(z);
    }
    table
}

/// Every `a` with `a_i ≤ n / g_i` and `φ(a) = n`, in descending
/// lexicographic order.
pub fn brute_force_factorizations(n: u64, gens: &GeneratorTuple) -> Result<Vec<Factorization>> {
    let bounds: Vec<u64> = gens.as_slice().iter().map(|&g| n / g).collect();
    let space = bounds
        .iter()
        .try_fold(1u128, |acc, &b| acc.checked_mul(b as u128 + 1))
        .unwrap_or(u128::MAX);
    if space > BRUTE_FORCE_CAP {
        return Err(Error::ResourceLimit {
            what: "brute-force candidate vectors",
            required: space,
            limit: BRUTE_FORCE_CAP,
        });
    }
    let mut out = Vec::new();
    let mut current = vec![0u32; gens.dim()];
    enumerate(0, &bounds, &mut current, gens, n, &mut out);
    out.sort_unstable_by(|a, b| b.cmp(a));
    Ok(out)
}

fn enumerate(
    index: usize,
    bounds: &[u64],
    current: &mut Vec<u32>,
    gens: &GeneratorTuple,
    n: u64,
    out: &mut Vec<Factorization>,
) {
    if index == bounds.len() {
        if gens.weight(current) == n {
            out.push(Factorization::new(current.clone()));
        }
        return;
    }
    for a in 0..=bounds[index] {
        current[index] = a as u32;
        enumerate(index + 1, bounds, current, gens, n, out);
    }
    current[index] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gens(g: &[u64]) -> GeneratorTuple {
        GeneratorTuple::new(g.to_vec()).unwrap()
    }

    fn f(c: &[u32]) -> Factorization {
        c.into()
    }

    #[test]
    fn set_oracle_examples() {
        let z = factorizations_up_to_element_sets(0, &gens(&[2, 3]));
        assert_eq!(z, vec![HashSet::from([f(&[0, 0])])]);

        let z = factorizations_up_to_element_sets(6, &gens(&[2, 3]));
        assert_eq!(z[6], HashSet::from([f(&[3, 0]), f(&[0, 2])]));
        assert_eq!(z[5], HashSet::from([f(&[1, 1])]));
        assert!(z[1].is_empty());

        let z = factorizations_up_to_element_sets(24, &gens(&[6, 9, 20]));
        assert_eq!(z[24], HashSet::from([f(&[4, 0, 0]), f(&[1, 2, 0])]));
    }

    #[test]
    fn brute_force_examples() {
        let g = gens(&[2, 3]);
        assert_eq!(brute_force_factorizations(7, &g).unwrap(), vec![f(&[2, 1])]);
        assert!(brute_force_factorizations(1, &g).unwrap().is_empty());
        assert_eq!(brute_force_factorizations(0, &g).unwrap(), vec![f(&[0, 0])]);
        assert_eq!(
            brute_force_factorizations(24, &gens(&[6, 9, 20])).unwrap(),
            vec![f(&[4, 0, 0]), f(&[1, 2, 0])]
        );
    }

    #[test]
    fn brute_force_refuses_huge_instances() {
        let err = brute_force_factorizations(100_000, &gens(&[1, 1, 1])).unwrap_err();
        assert!(matches!(err, Error::ResourceLimit { .. }));
    }
}
