//! Factorization sets of elements in numerical semigroups.
//!
//! For generators `(g_1, ..., g_d)` and an element `n`, the factorization
//! set `Z(n)` holds every exponent vector `a` with `Σ a_i·g_i = n`. This
//! crate enumerates `Z(n)` in descending lexicographic order by two routes:
//!
//! * [`dp`]: dimensionwise tabulation of `Z(0), ..., Z(n)`, sequential or
//!   parallel over elements or over factorizations;
//! * [`stream`]: bounded lexicographic streams stepped in lockstep by a
//!   worker pool, with a low-dimension memo that emits whole tail sets.
//!
//! ```
//! use semifact::{GeneratorTuple, stream::{factorize, StreamConfig}};
//!
//! let gens: GeneratorTuple = "6,9,20".parse().unwrap();
//! let run = factorize(24, &gens, &StreamConfig::with_memo_dim(2)).unwrap();
//! let z: Vec<&[u32]> = run.factorizations.iter().collect();
//! assert_eq!(z, [[4, 0, 0], [1, 2, 0]]);
//! ```

pub mod apery;
pub mod bench;
pub mod dp;
mod error;
pub mod semigroup;
pub mod stream;

pub use apery::AperyTable;
pub use error::{Error, Result};
pub use semigroup::{
    increment_index, is_all_zeroes_left_of_index, lex_compare, phi, Factorization, FactorizationList,
    GeneratorTuple,
};
