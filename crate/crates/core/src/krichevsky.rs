//! Krichevsky measures and code lengths for Bernoulli and Markov models.
//!
//! The memory-m measure K_m assigns the first min(m, t) symbols probability
//! 1/2 each and then predicts sequentially with the add-1/2 (KT) estimator
//! per context:
//!
//! ```text
//! P(a | context u) = (N(u a) + 1/2) / (N(u .) + 1)
//! ```
//!
//! where N counts the prediction events seen so far. The code length is
//! kappa_m = ceil(-log2 K_m); summed over consecutive blocks (counts reset at
//! each boundary) it becomes the blockwise code used by the tests. All
//! logarithms are base 2.

use crate::counts::{context_mask, pack_context, ContextCounts};
use crate::{ceil_code_bits, Error, Result};

/// Model memory and block length for a blockwise Krichevsky code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KrichevskyParams {
    pub memory: usize,
    pub block_len: usize,
}

impl KrichevskyParams {
    pub fn new(memory: usize, block_len: usize) -> Self {
        assert!(block_len >= 1, "block length must be positive");
        assert!(memory < 64, "memory must be below 64");
        KrichevskyParams { memory, block_len }
    }

    /// True when the model has more contexts than the block has symbols
    /// (2^m > t); such a test is allowed but unlikely to be useful.
    pub fn overparameterized(&self) -> bool {
        self.memory >= 63 || (1u64 << self.memory) > self.block_len as u64
    }
}

/// The sequential KT factors of a word: one exact rational (numerator,
/// denominator) per predicted position, equal to
/// (2 N(u a) + 1) / (2 N(u .) + 2).
pub struct KtFactors<'a> {
    bits: &'a [u8],
    counts: ContextCounts,
    ctx: u64,
    mask: u64,
    pos: usize,
}

impl<'a> Iterator for KtFactors<'a> {
    type Item = (u64, u64);

    fn next(&mut self) -> Option<(u64, u64)> {
        if self.pos >= self.bits.len() {
            return None;
        }
        let a = self.bits[self.pos];
        let [c0, c1] = self.counts.successors(self.ctx);
        let seen = [c0, c1][a as usize];
        let factor = (2 * seen + 1, 2 * (c0 + c1) + 2);
        self.counts.record(self.ctx, a);
        self.ctx = ((self.ctx << 1) | u64::from(a)) & self.mask;
        self.pos += 1;
        Some(factor)
    }
}

/// Per-position conditional factors of K_m on `bits`, starting after the
/// uniformly coded first min(m, t) symbols.
pub fn kt_factors(bits: &[u8], memory: usize) -> KtFactors<'_> {
    assert!(memory < 64, "memory must be below 64");
    let lead = memory.min(bits.len());
    KtFactors {
        bits,
        counts: ContextCounts::new(memory),
        ctx: pack_context(&bits[..lead]),
        mask: context_mask(memory),
        pos: memory,
    }
}

/// -log2 K_m(x) in bits: min(m, t) bits for the leading symbols plus the
/// log-domain sum of the sequential KT factors.
pub fn log_measure(bits: &[u8], memory: usize) -> f64 {
    assert!(!bits.is_empty(), "measure of the empty word is undefined");
    let mut total = memory.min(bits.len()) as f64;
    for (num, den) in kt_factors(bits, memory) {
        total -= (num as f64 / den as f64).log2();
    }
    total
}

/// kappa_m(x) = ceil(-log2 K_m(x)) in whole bits.
pub fn codelength(bits: &[u8], memory: usize) -> u64 {
    ceil_code_bits(log_measure(bits, memory))
}

/// Splits `bits` into consecutive blocks of `block_len` (the final block may
/// be shorter) and sums the per-block code lengths. Counts reset at each
/// block boundary.
pub fn blockwise_codelength(bits: &[u8], memory: usize, block_len: usize) -> u64 {
    assert!(block_len >= 1, "block length must be positive");
    bits.chunks(block_len)
        .map(|block| codelength(block, memory))
        .sum()
}

/// A source distribution over binary words, for exact expected-length runs.
#[derive(Debug, Clone)]
pub enum SourceModel {
    /// Independent symbols with P(1) = p.
    Bernoulli(f64),
    /// Memory-m chain: `prob_zero[u]` is P(next = 0 | context u) with the
    /// context packed oldest-first; the first m symbols are uniform.
    Markov { memory: usize, prob_zero: Vec<f64> },
}

impl SourceModel {
    /// Probability of the exact word `bits` under the source.
    pub fn word_probability(&self, bits: &[u8]) -> f64 {
        match self {
            SourceModel::Bernoulli(p) => bits
                .iter()
                .map(|&b| if b == 1 { *p } else { 1.0 - *p })
                .product(),
            SourceModel::Markov { memory, prob_zero } => {
                assert_eq!(prob_zero.len(), 1 << memory);
                let lead = (*memory).min(bits.len());
                let mut prob = 0.5f64.powi(lead as i32);
                let mask = context_mask(*memory);
                let mut ctx = pack_context(&bits[..lead]);
                for &b in &bits[lead..] {
                    let p0 = prob_zero[ctx as usize];
                    prob *= if b == 0 { p0 } else { 1.0 - p0 };
                    ctx = ((ctx << 1) | u64::from(b)) & mask;
                }
                prob
            }
        }
    }
}

/// Largest block length accepted by [`expected_codelength`]; the enumeration
/// visits all 2^t words.
pub const ENUMERATION_MAX_T: usize = 20;

/// Exact per-letter expected code length (1/t) sum_u nu(u) kappa_m(u) over
/// every word of length t.
pub fn expected_codelength(memory: usize, t: usize, source: &SourceModel) -> Result<f64> {
    if t > ENUMERATION_MAX_T {
        return Err(Error::ResourceLimit {
            what: "exhaustive word enumeration",
            requested: t,
            max: ENUMERATION_MAX_T,
        });
    }
    assert!(t >= 1, "block length must be positive");
    let mut bits = vec![0u8; t];
    let mut expectation = 0.0;
    for word in 0u64..(1 << t) {
        for (j, b) in bits.iter_mut().enumerate() {
            *b = ((word >> (t - 1 - j)) & 1) as u8;
        }
        let nu = source.word_probability(&bits);
        if nu > 0.0 {
            expectation += nu * codelength(&bits, memory) as f64;
        }
    }
    Ok(expectation / t as f64)
}
