//! Compression-based statistical tests for random number generators.
//!
//! The library turns lossless code lengths into randomness tests: a code `f`
//! that maps an n-bit word to fewer than `n - log2(1/alpha) - 1` bits is
//! evidence of non-randomness at significance level `alpha`. Three code
//! families are provided:
//!
//! - [`krichevsky`]: add-1/2 sequential (KT) measures for Bernoulli and
//!   memory-m Markov models, applied blockwise;
//! - [`mixture`]: a twice-universal weighted mixture of the Krichevsky
//!   measures over all memories up to a cap;
//! - [`lz77`]: a dictionary compressor (greedy LZ77 over the full prefix with
//!   Elias-delta coded pairs), which catches long-range repetition that no
//!   finite-memory model sees.
//!
//! [`testkit`] wraps code lengths into decisions and significance-budgeted
//! batteries, and [`generators`] produces the adversarial sources (two-faced
//! Markov chains, duplicated-block sequences) that separate the tests.

pub mod bits;
pub mod counts;
pub mod generators;
pub mod krichevsky;
pub mod lz77;
pub mod mixture;
pub mod testkit;

pub use bits::{BitSequence, Format};
pub use counts::{count_occurrences, empirical_entropy, ContextCounts};

use thiserror::Error;

/// Errors reported by parsing, decoding, generation and the exhaustive
/// calculators. Contract violations (e.g. an empty pattern, alpha outside
/// (0,1)) panic instead.
#[derive(Debug, Error)]
pub enum Error {
    /// A character other than '0', '1' or whitespace in ascii01 input.
    #[error("invalid character {found:?} at byte offset {offset}: expected '0' or '1'")]
    InvalidCharacter { offset: usize, found: char },

    /// Raw byte output needs a whole number of bytes.
    #[error("bit count {bits} is not a multiple of 8; raw bytes cannot represent it")]
    UnalignedBits { bits: usize },

    /// An exhaustive enumeration or exact DP was asked to exceed its size cap.
    #[error("{what} of size {requested} exceeds the limit {max}")]
    ResourceLimit {
        what: &'static str,
        requested: usize,
        max: usize,
    },

    /// A generator ran out of source symbols.
    #[error("source exhausted after producing {produced} of {requested} symbols")]
    SourceExhausted { produced: usize, requested: usize },

    /// An LZ77 phrase list that no valid parse could have produced.
    #[error("malformed parse at phrase {index}: {reason}")]
    MalformedParse { index: usize, reason: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Slack used when turning a real-valued code length into whole bits: values
/// within this distance of an integer are treated as that integer, so that
/// accumulated rounding noise cannot inflate an exact length by one bit.
pub const CEIL_GUARD: f64 = 1e-9;

/// Ceiling of a (positive) real code length in bits, guarded against float
/// noise around exact integers.
pub fn ceil_code_bits(value: f64) -> u64 {
    let nearest = value.round();
    let bits = if (value - nearest).abs() <= CEIL_GUARD {
        nearest
    } else {
        value.ceil()
    };
    debug_assert!(bits >= 1.0, "code lengths are positive, got {bits}");
    bits as u64
}
