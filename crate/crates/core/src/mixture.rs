//! The twice-universal mixture code.
//!
//! R = sum_i beta_i K_i mixes the Krichevsky measures of all memories up to a
//! cap M with positive weights summing to at most 1. Because R dominates
//! every component, the code length rho = ceil(-log2 R) is within
//! ceil(-log2 beta_j) bits of kappa_j for every j <= M, so the mixture is
//! universal without knowing the true memory.

use crate::ceil_code_bits;
use crate::krichevsky::log_measure;

/// Hard cap applied by [`MixtureWeights::default_for_block`].
pub const DEFAULT_MAX_ORDER_CAP: usize = 12;

/// Positive mixture weights beta_0 .. beta_M with sum at most 1.
///
/// Truncating an infinite weight sequence leaves the sum below 1;
/// the weights are deliberately not renormalized, so R stays a
/// sub-probability and every derived code length remains Kraft-valid.
#[derive(Debug, Clone, PartialEq)]
pub struct MixtureWeights {
    betas: Vec<f64>,
}

impl MixtureWeights {
    pub fn new(betas: Vec<f64>) -> Self {
        assert!(!betas.is_empty(), "at least one mixture component");
        assert!(betas.iter().all(|&b| b > 0.0), "weights must be positive");
        let sum: f64 = betas.iter().sum();
        assert!(
            sum <= 1.0 + 1e-12,
            "weights must sum to at most 1, got {sum}"
        );
        MixtureWeights { betas }
    }

    /// beta_i = 1 / ((i+1)(i+2)) for i = 0..=max_order; the partial sum
    /// telescopes to 1 - 1/(max_order + 2).
    pub fn default_weights(max_order: usize) -> Self {
        Self::new(
            (0..=max_order)
                .map(|i| 1.0 / ((i + 1) as f64 * (i + 2) as f64))
                .collect(),
        )
    }

    /// Default truncation for a block length: M = min(12, floor(log2 t)).
    pub fn default_for_block(block_len: usize) -> Self {
        assert!(block_len >= 1, "block length must be positive");
        Self::default_weights(DEFAULT_MAX_ORDER_CAP.min(block_len.ilog2() as usize))
    }

    pub fn max_order(&self) -> usize {
        self.betas.len() - 1
    }

    pub fn betas(&self) -> &[f64] {
        &self.betas
    }

    pub fn sum(&self) -> f64 {
        self.betas.iter().sum()
    }
}

/// -log2 sum_i beta_i K_i(x), combined in the log domain anchored at the
/// dominant component so tiny measures cannot underflow.
pub fn log_mixture_measure(bits: &[u8], weights: &MixtureWeights) -> f64 {
    assert!(!bits.is_empty(), "measure of the empty word is undefined");
    let costs: Vec<f64> = weights
        .betas()
        .iter()
        .enumerate()
        .map(|(order, beta)| -beta.log2() + log_measure(bits, order))
        .collect();
    let anchor = costs.iter().cloned().fold(f64::INFINITY, f64::min);
    let mass: f64 = costs.iter().map(|c| (anchor - c).exp2()).sum();
    anchor - mass.log2()
}

/// rho(x) = ceil(-log2 R(x)) in whole bits.
pub fn codelength_rho(bits: &[u8], weights: &MixtureWeights) -> u64 {
    ceil_code_bits(log_mixture_measure(bits, weights))
}

/// Blockwise rho with the same splitting contract as the Krichevsky code:
/// consecutive blocks of `block_len`, final block may be shorter, counts
/// reset per block.
pub fn blockwise_codelength_rho(bits: &[u8], weights: &MixtureWeights, block_len: usize) -> u64 {
    assert!(block_len >= 1, "block length must be positive");
    bits.chunks(block_len)
        .map(|block| codelength_rho(block, weights))
        .sum()
}
