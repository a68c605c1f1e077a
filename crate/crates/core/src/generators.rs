//! Adversarial and calibration sources.
//!
//! Two-faced processes are order-k Markov chains built from the base matrices
//!
//! ```text
//! T_1(0|0) = v      T_1(0|1) = 1-v      (T-hat is the complement)
//! ```
//!
//! by the recursion T_{k+1}(.|b u) = T_k(.|u) if the oldest context symbol b
//! is 0, else T-hat_k(.|u) (and symmetrically for T-hat). Started from the
//! uniform distribution on k-bit words, every window of up to k symbols is
//! exactly uniform, yet the conditional entropy at order k drops to the
//! binary entropy of v.
//!
//! The duplicated-block sequence y(x) interleaves doubly-exponentially
//! growing slices of a source with (partial) copies of themselves: invisible
//! to finite-memory statistics, but halved by a dictionary compressor.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

use crate::bits::BitSequence;
use crate::{Error, Result};

/// Largest exact-DP problem size (horizon plus window, and chain order).
pub const DP_LIMIT: usize = 24;
const DP_ORDER_LIMIT: usize = 20;

/// Which of the two complementary transition families to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TwoFacedVariant {
    /// The base family T_k.
    T,
    /// The complemented family T-hat_k.
    THat,
}

/// An order-k two-faced Markov source with bias `nu`, reproducible from
/// `seed`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoFacedParams {
    pub order: usize,
    pub nu: f64,
    pub variant: TwoFacedVariant,
    pub seed: u64,
}

impl TwoFacedParams {
    pub fn new(order: usize, nu: f64, variant: TwoFacedVariant, seed: u64) -> Self {
        assert!(order >= 1, "two-faced processes have order at least 1");
        assert!(order < 64, "order must be below 64");
        assert!(nu > 0.0 && nu < 1.0, "bias must lie in (0,1), got {nu}");
        TwoFacedParams {
            order,
            nu,
            variant,
            seed,
        }
    }
}

/// P(next symbol = 0 | context), context given oldest symbol first with
/// length exactly equal to the order.
///
/// Each leading 1 in the context swaps T and T-hat one level down; the last
/// symbol selects the entry of the base matrix.
pub fn transition_prob(context: &[u8], params: &TwoFacedParams) -> f64 {
    assert_eq!(
        context.len(),
        params.order,
        "context length must equal the chain order"
    );
    let mut hatted = params.variant == TwoFacedVariant::THat;
    for &b in &context[..context.len() - 1] {
        debug_assert!(b <= 1);
        if b == 1 {
            hatted = !hatted;
        }
    }
    let newest = context[context.len() - 1];
    if (newest == 0) != hatted {
        params.nu
    } else {
        1.0 - params.nu
    }
}

/// Generates n symbols: the first k uniformly, the rest from the chain.
/// Fully reproducible from the seed.
pub fn generate_two_faced(params: &TwoFacedParams, n: usize) -> BitSequence {
    let k = params.order;
    assert!(n >= k, "need at least order={k} symbols, got {n}");
    let mut rng = ChaCha12Rng::seed_from_u64(params.seed);
    let mut out = BitSequence::with_capacity(n);
    for _ in 0..k {
        out.push(u8::from(rng.random_bool(0.5)));
    }
    for i in k..n {
        let p0 = transition_prob(&out[i - k..i], params);
        out.push(if rng.random_bool(p0) { 0 } else { 1 });
    }
    out
}

/// Transition table over all 2^k contexts: entry u is P(next = 0 | u).
fn transition_table(params: &TwoFacedParams) -> Vec<f64> {
    let k = params.order;
    let mut context = vec![0u8; k];
    (0u64..(1 << k))
        .map(|state| {
            for (j, c) in context.iter_mut().enumerate() {
                *c = ((state >> (k - 1 - j)) & 1) as u8;
            }
            transition_prob(&context, params)
        })
        .collect()
}

/// Exact law of the window x_{j+1} .. x_{j+block_len} (1-based) under the
/// chain started from the uniform k-bit distribution, computed by forward DP
/// over the 2^k states. Entry w of the result is the probability of the
/// block whose bits, oldest first, spell w.
pub fn exact_block_marginals(
    params: &TwoFacedParams,
    block_len: usize,
    horizon: usize,
) -> Result<Vec<f64>> {
    let k = params.order;
    assert!(
        block_len >= 1 && block_len <= k,
        "block length must lie in 1..=order"
    );
    if horizon + block_len > DP_LIMIT {
        return Err(Error::ResourceLimit {
            what: "exact marginal horizon",
            requested: horizon + block_len,
            max: DP_LIMIT,
        });
    }
    if k > DP_ORDER_LIMIT {
        return Err(Error::ResourceLimit {
            what: "exact marginal state space order",
            requested: k,
            max: DP_ORDER_LIMIT,
        });
    }
    let states = 1usize << k;
    let table = transition_table(params);
    // State s holds the latest k symbols, oldest in the top bit; after j
    // steps it covers positions x_{j+1} .. x_{j+k}.
    let mut dist = vec![1.0 / states as f64; states];
    let mask = states - 1;
    for _ in 0..horizon {
        let mut next = vec![0.0; states];
        for (s, &p) in dist.iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            let p0 = table[s];
            next[(s << 1) & mask] += p * p0;
            next[((s << 1) & mask) | 1] += p * (1.0 - p0);
        }
        dist = next;
    }
    // The window is the oldest block_len symbols of the state.
    let mut law = vec![0.0; 1 << block_len];
    for (s, &p) in dist.iter().enumerate() {
        law[s >> (k - block_len)] += p;
    }
    Ok(law)
}

/// Exact order-r conditional entropy of the stationary chain in bits,
/// computed from closed-form block laws (no sampling): h_r =
/// sum_{u,a} P(ua) * -log2(P(ua) / P(u)).
pub fn exact_conditional_entropy(params: &TwoFacedParams, r: usize) -> Result<f64> {
    if r + 1 > DP_LIMIT {
        return Err(Error::ResourceLimit {
            what: "entropy block size",
            requested: r + 1,
            max: DP_LIMIT,
        });
    }
    let joint = stationary_block_law(params, r + 1)?;
    let mut prefix = vec![0.0; 1 << r];
    for (w, &p) in joint.iter().enumerate() {
        prefix[w >> 1] += p;
    }
    let mut h = 0.0;
    for (w, &p) in joint.iter().enumerate() {
        if p > 0.0 {
            h -= p * (p / prefix[w >> 1]).log2();
        }
    }
    Ok(h)
}

/// Stationary law of `len` consecutive symbols. For len <= k this is the
/// marginal of the uniform k-block law; longer blocks are extended through
/// the transition table.
fn stationary_block_law(params: &TwoFacedParams, len: usize) -> Result<Vec<f64>> {
    let k = params.order;
    assert!(len >= 1);
    if len <= k {
        return exact_block_marginals(params, len, 0);
    }
    if k > DP_ORDER_LIMIT || len > DP_LIMIT {
        return Err(Error::ResourceLimit {
            what: "stationary block law",
            requested: len.max(k),
            max: DP_LIMIT,
        });
    }
    let table = transition_table(params);
    let ctx_mask = (1usize << k) - 1;
    // Joint law over full prefixes, grown one symbol at a time from the
    // uniform k-block start.
    let mut joint = vec![1.0 / (1 << k) as f64; 1 << k];
    for cur in k..len {
        let mut next = vec![0.0; 1 << (cur + 1)];
        for (w, &p) in joint.iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            let p0 = table[w & ctx_mask];
            next[w << 1] += p * p0;
            next[(w << 1) | 1] += p * (1.0 - p0);
        }
        joint = next;
    }
    Ok(joint)
}

/// Where the raw symbols of a y-sequence come from.
#[derive(Debug, Clone)]
pub enum YSource {
    /// A concrete word; building fails if it runs out.
    Bits(BitSequence),
    /// A seeded fair-coin stream (never exhausts).
    Seeded(u64),
}

/// Parameters of the duplicated-block construction. `gamma` = 1 duplicates
/// each slice in full; gamma < 1 copies only the first ceil(gamma |u|)
/// symbols.
#[derive(Debug, Clone)]
pub struct YSequenceParams {
    pub source: YSource,
    pub gamma: f64,
    pub max_length: usize,
}

impl YSequenceParams {
    pub fn new(source: YSource, gamma: f64, max_length: usize) -> Self {
        assert!(
            gamma > 0.0 && gamma <= 1.0,
            "duplication fraction must lie in (0,1], got {gamma}"
        );
        assert!(max_length >= 4, "need at least 4 symbols");
        YSequenceParams {
            source,
            gamma,
            max_length,
        }
    }
}

enum SourceStream {
    Fixed(Vec<u8>, usize),
    Rng(Box<ChaCha12Rng>),
}

impl SourceStream {
    fn next(&mut self) -> Option<u8> {
        match self {
            SourceStream::Fixed(bits, cursor) => {
                let b = *bits.get(*cursor)?;
                *cursor += 1;
                Some(b)
            }
            SourceStream::Rng(rng) => Some(u8::from(rng.random_bool(0.5))),
        }
    }
}

/// Emits u_0 u_0^g u_1 u_1^g ... truncated at `max_length`, where slice u_k
/// covers source positions 2^(2^k)-1 through 2^(2^(k+1))-2 (1-based, so the
/// slices are consecutive and |u_0| = 2, |u_1| = 12, |u_2| = 240,
/// |u_3| = 65280). Truncation mid-copy is allowed; an exhausted source
/// reports how many symbols were produced.
pub fn build_y_sequence(params: &YSequenceParams) -> Result<BitSequence> {
    let mut stream = match &params.source {
        YSource::Bits(seq) => SourceStream::Fixed(seq.to_vec(), 0),
        YSource::Seeded(seed) => SourceStream::Rng(Box::new(ChaCha12Rng::seed_from_u64(*seed))),
    };
    let target = params.max_length;
    let mut out: Vec<u8> = Vec::with_capacity(target);
    let mut k = 0u32;
    while out.len() < target {
        // |u_k| = 2^(2^(k+1)) - 2^(2^k); from k = 6 on a single slice exceeds
        // any addressable target, so saturate instead of shifting past u128.
        let exp = 1u32 << k;
        let slice_len = if exp >= 64 {
            u128::MAX
        } else {
            (1u128 << (2 * exp)) - (1u128 << exp)
        };
        let slice_start = out.len();
        let first_copy = slice_len.min((target - out.len()) as u128) as usize;
        for _ in 0..first_copy {
            match stream.next() {
                Some(b) => out.push(b),
                None => {
                    return Err(Error::SourceExhausted {
                        produced: out.len(),
                        requested: target,
                    })
                }
            }
        }
        if (first_copy as u128) < slice_len || out.len() >= target {
            break; // truncated inside the first copy
        }
        let copy_len = ((params.gamma * slice_len as f64).ceil() as u128)
            .min(slice_len)
            .min((target - out.len()) as u128) as usize;
        for j in 0..copy_len {
            let b = out[slice_start + j];
            out.push(b);
        }
        k += 1;
    }
    Ok(BitSequence::from_bits(out))
}

/// Independent symbols with P(1) = p, reproducible from the seed.
pub fn generate_bernoulli(p: f64, n: usize, seed: u64) -> BitSequence {
    assert!((0.0..=1.0).contains(&p), "probability must lie in [0,1]");
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    (0..n).map(|_| u8::from(rng.random_bool(p))).collect()
}
