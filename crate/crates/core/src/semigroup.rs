//! Generators, factorizations and the arithmetic shared by every algorithm.
//!
//! Coordinates are indexed from zero throughout the crate: index `0` is the
//! leftmost (most significant) coordinate, `dim() - 1` the final one.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// An ordered tuple of positive generators `(g_1, ..., g_d)`.
///
/// Generators need not be sorted, distinct or coprime.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GeneratorTuple {
    gens: Vec<u64>,
    smallest: u64,
}

impl GeneratorTuple {
    pub fn new(gens: Vec<u64>) -> Result<Self> {
        if gens.is_empty() {
            return Err(Error::InvalidGenerators("at least one generator is required".into()));
        }
        if let Some(pos) = gens.iter().position(|&g| g == 0) {
            return Err(Error::InvalidGenerators(format!(
                "generator at position {pos} is zero; generators must be positive"
            )));
        }
        let smallest = *gens.iter().min().expect("nonempty");
        Ok(Self { gens, smallest })
    }

    pub fn dim(&self) -> usize {
        self.gens.len()
    }

    pub fn smallest(&self) -> u64 {
        self.smallest
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.gens
    }

    pub fn get(&self, index: usize) -> u64 {
        self.gens[index]
    }

    /// The trailing `count` generators, as used by a low-dimension memo.
    pub fn tail(&self, count: usize) -> Result<GeneratorTuple> {
        if count == 0 || count > self.dim() {
            return Err(Error::IndexOutOfRange {
                index: count,
                dim: self.dim(),
            });
        }
        GeneratorTuple::new(self.gens[self.dim() - count..].to_vec())
    }

    /// Weighted sum of a raw coordinate slice. Callers guarantee the length.
    #[inline]
    pub(crate) fn weight(&self, coords: &[u32]) -> u64 {
        coords
            .iter()
            .zip(&self.gens)
            .map(|(&a, &g)| a as u64 * g)
            .sum()
    }
}

impl FromStr for GeneratorTuple {
    type Err = Error;

    /// Parses comma-separated decimal text such as `"13,37,38"`.
    fn from_str(s: &str) -> Result<Self> {
        let gens = s
            .split(',')
            .map(|part| {
                let part = part.trim();
                part.parse::<u64>()
                    .map_err(|e| Error::Parse(format!("generator {part:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        GeneratorTuple::new(gens)
    }
}

impl fmt::Display for GeneratorTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, g) in self.gens.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

/// An exponent vector `(a_1, ..., a_d)`.
///
/// The derived `Ord` is lexicographic with the leftmost coordinate most
/// significant, which is the order every enumeration in this crate uses.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Factorization(Vec<u32>);

impl Factorization {
    pub fn new(coords: Vec<u32>) -> Self {
        Factorization(coords)
    }

    pub fn zero(dim: usize) -> Self {
        Factorization(vec![0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[u32] {
        &self.0
    }

    pub fn coords_mut(&mut self) -> &mut [u32] {
        &mut self.0
    }

    pub fn into_coords(self) -> Vec<u32> {
        self.0
    }
}

impl From<Vec<u32>> for Factorization {
    fn from(coords: Vec<u32>) -> Self {
        Factorization(coords)
    }
}

impl From<&[u32]> for Factorization {
    fn from(coords: &[u32]) -> Self {
        Factorization(coords.to_vec())
    }
}

impl<const N: usize> From<[u32; N]> for Factorization {
    fn from(coords: [u32; N]) -> Self {
        Factorization(coords.to_vec())
    }
}

impl fmt::Display for Factorization {
    /// Space-separated coordinates, the line format used by every exporter.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_coords(f, &self.0)
    }
}

pub(crate) fn write_coords<W: fmt::Write>(out: &mut W, coords: &[u32]) -> fmt::Result {
    for (k, a) in coords.iter().enumerate() {
        if k > 0 {
            out.write_char(' ')?;
        }
        write!(out, "{a}")?;
    }
    Ok(())
}

/// A flat sequence of same-dimension factorizations.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FactorizationList {
    dim: usize,
    coords: Vec<u32>,
}

impl FactorizationList {
    pub fn new(dim: usize) -> Self {
        FactorizationList {
            dim,
            coords: Vec::new(),
        }
    }

    /// Wraps flat coordinates; `coords.len()` must be a multiple of `dim`.
    pub fn from_flat(dim: usize, coords: Vec<u32>) -> Self {
        assert!(dim > 0 && coords.len().is_multiple_of(dim), "ragged factorization list");
        FactorizationList { dim, coords }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim.max(1)
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn get(&self, k: usize) -> Option<&[u32]> {
        self.coords.get(k * self.dim..(k + 1) * self.dim)
    }

    pub fn iter(&self) -> std::slice::ChunksExact<'_, u32> {
        self.coords.chunks_exact(self.dim.max(1))
    }

    pub fn as_flat(&self) -> &[u32] {
        &self.coords
    }

    pub fn push(&mut self, coords: &[u32]) {
        assert_eq!(coords.len(), self.dim);
        self.coords.extend_from_slice(coords);
    }

    pub fn to_factorizations(&self) -> Vec<Factorization> {
        self.iter().map(Factorization::from).collect()
    }

    /// One line of space-separated coordinates per factorization.
    pub fn write_lines<W: std::io::Write>(&self, mut out: W) -> std::io::Result<()> {
        let mut line = String::new();
        for f in self.iter() {
            line.clear();
            write_coords(&mut line, f).expect("writing to a String");
            line.push('\n');
            out.write_all(line.as_bytes())?;
        }
        Ok(())
    }
}

fn check_dim(expected: usize, actual: usize) -> Result<()> {
    if expected == actual {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, actual })
    }
}

/// `φ(a) = Σ a_i·g_i`, the element factored by `a`.
///
/// Exact whenever every `a_i ≤ n / g_i` for some `n < 2^40`.
pub fn phi(a: &Factorization, gens: &GeneratorTuple) -> Result<u64> {
    check_dim(gens.dim(), a.dim())?;
    Ok(gens.weight(a.coords()))
}

/// Lexicographic comparison, leftmost coordinate most significant.
pub fn lex_compare(a: &Factorization, b: &Factorization) -> Result<Ordering> {
    check_dim(a.dim(), b.dim())?;
    Ok(a.coords().cmp(b.coords()))
}

/// Returns a copy of `a` with coordinate `index` increased by one.
pub fn increment_index(a: &Factorization, index: usize) -> Result<Factorization> {
    if index >= a.dim() {
        return Err(Error::IndexOutOfRange {
            index,
            dim: a.dim(),
        });
    }
    let mut out = a.clone();
    out.0[index] += 1;
    Ok(out)
}

/// True iff every coordinate strictly left of `index` is zero, i.e. `a`
/// lies in `Z_{≥index}`.
pub fn is_all_zeroes_left_of_index(a: &Factorization, index: usize) -> Result<bool> {
    if index >= a.dim() {
        return Err(Error::IndexOutOfRange {
            index,
            dim: a.dim(),
        });
    }
    Ok(zeroes_left_of(a.coords(), index))
}

#[inline]
pub(crate) fn zeroes_left_of(coords: &[u32], index: usize) -> bool {
    coords[..index].iter().all(|&c| c == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gens(g: &[u64]) -> GeneratorTuple {
        GeneratorTuple::new(g.to_vec()).unwrap()
    }

    #[test]
    fn phi_examples() {
        assert_eq!(phi(&[0, 0, 0].into(), &gens(&[6, 9, 20])).unwrap(), 0);
        assert_eq!(phi(&[1, 1, 0].into(), &gens(&[13, 37, 38])).unwrap(), 50);
        assert_eq!(phi(&[4, 0, 0].into(), &gens(&[6, 9, 20])).unwrap(), 24);
    }

    #[test]
    fn phi_rejects_dimension_mismatch() {
        let err = phi(&[1, 2].into(), &gens(&[6, 9, 20])).unwrap_err();
        assert_eq!(err, Error::DimensionMismatch { expected: 3, actual: 2 });
    }

    #[test]
    fn lex_compare_examples() {
        let cmp = |a: &[u32], b: &[u32]| lex_compare(&a.into(), &b.into()).unwrap();
        assert_eq!(cmp(&[3, 0], &[0, 2]), Ordering::Greater);
        assert_eq!(cmp(&[1, 2, 0], &[1, 2, 0]), Ordering::Equal);
        assert_eq!(cmp(&[0, 0, 1], &[0, 1, 0]), Ordering::Less);
        assert!(lex_compare(&[1].into(), &[1, 0].into()).is_err());
    }

    #[test]
    fn increment_examples() {
        assert_eq!(increment_index(&[0, 0, 0].into(), 0).unwrap(), [1, 0, 0].into());
        assert_eq!(increment_index(&[1, 2, 0].into(), 1).unwrap(), [1, 3, 0].into());
        assert_eq!(increment_index(&[0, 2].into(), 1).unwrap(), [0, 3].into());
        assert_eq!(
            increment_index(&[0, 2].into(), 2).unwrap_err(),
            Error::IndexOutOfRange { index: 2, dim: 2 }
        );
    }

    #[test]
    fn zeroes_left_examples() {
        assert!(is_all_zeroes_left_of_index(&[0, 0, 5].into(), 2).unwrap());
        assert!(!is_all_zeroes_left_of_index(&[1, 0, 0].into(), 1).unwrap());
        assert!(is_all_zeroes_left_of_index(&[7, 0, 0].into(), 0).unwrap());
        assert!(is_all_zeroes_left_of_index(&[7, 0, 0].into(), 3).is_err());
    }

    #[test]
    fn generator_parsing() {
        let g: GeneratorTuple = "13,37,38".parse().unwrap();
        assert_eq!(g.as_slice(), &[13, 37, 38]);
        assert_eq!(g.smallest(), 13);
        assert_eq!(g.to_string(), "13,37,38");
        assert!(" 4, 2 ,9".parse::<GeneratorTuple>().is_ok());
        assert!("".parse::<GeneratorTuple>().is_err());
        assert!("3,x".parse::<GeneratorTuple>().is_err());
        assert!(matches!(
            "3,0".parse::<GeneratorTuple>(),
            Err(Error::InvalidGenerators(_))
        ));
        assert!("-3".parse::<GeneratorTuple>().is_err());
    }

    #[test]
    fn tail_generators() {
        let g = gens(&[13, 37, 38, 40]);
        assert_eq!(g.tail(2).unwrap().as_slice(), &[38, 40]);
        assert!(g.tail(0).is_err());
        assert!(g.tail(5).is_err());
    }

    #[test]
    fn display_is_space_separated() {
        assert_eq!(Factorization::from([1, 2, 0]).to_string(), "1 2 0");
    }
}
