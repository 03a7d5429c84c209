//! Bounded lexicographic streams with low-dimension memoization.
//!
//! The candidate sequence visits exponent vectors in strictly descending
//! lexicographic order. From a candidate `a`, the successor finds the
//! rightmost nonzero coordinate `i` other than the last, clears the last
//! coordinate, decrements `a_i`, and solves coordinate `i + 1` for the
//! remainder `p = n - φ(a)` by rounding `p / g_{i+1}` up; the candidate is a
//! factorization exactly when the division is exact.
//!
//! With a memo over the trailing `k` generators, a step whose decrement
//! lands on index `d - k - 1` with `p` below the memo bound instead copies
//! every tabulated `Z(p, tail)` behind the fixed prefix in one go, and
//! leaves `a` at the prefix padded with zeros. That vector sits below every
//! row just emitted and above every later candidate, so stepping resumes
//! without skipping or repeating anything.
//!
//! Several streams split the candidate range into disjoint slices (see
//! [`split`]) and advance in lockstep on a worker pool; [`factorize`]
//! reassembles their output in order.

mod buffer;
mod memo;
mod run;
pub mod split;
mod state;

pub use buffer::{
    copy_outputs_to_buffer_and_clear, flush_buffers, CollectingSink, CountingSink,
    FactorizationSink, ResultBuffer, SliceKey,
};
pub use memo::{populate_memo, MemoTable, MemoTiming};
pub use run::{
    count, factorize, factorize_into, RunReport, StreamConfig, StreamRun,
    DEFAULT_BUFFER_CAPACITY, DEFAULT_REBALANCE_EVERY,
};
pub use split::{rebalance, split_work};
pub use state::{OutputStaging, StreamState};
