//! Pattern counting and empirical entropy.
//!
//! A context of order m is the word formed by the m symbols preceding a
//! position; contexts are packed into a `u64` oldest-symbol-first (the oldest
//! symbol is the most significant bit). Counting is per position, so
//! overlapping occurrences all count.

use std::collections::HashMap;

/// Orders up to this size use a dense table (2^m entries); larger orders fall
/// back to a hash map.
const DENSE_ORDER_MAX: usize = 16;

/// Packs a short bit word into an integer, oldest symbol in the highest bit.
pub fn pack_context(bits: &[u8]) -> u64 {
    assert!(bits.len() < 64, "context longer than 63 bits");
    bits.iter().fold(0u64, |acc, &b| {
        debug_assert!(b <= 1);
        (acc << 1) | u64::from(b)
    })
}

#[derive(Debug, Clone)]
enum Store {
    Dense(Vec<[u64; 2]>),
    Sparse(HashMap<u64, [u64; 2]>),
}

/// Occurrence counts of (context, next symbol) pairs for a fixed order.
///
/// Counts only grow: `record` is the sole mutator. The sum of all counts
/// equals `total`, the number of positions counted.
#[derive(Debug, Clone)]
pub struct ContextCounts {
    order: usize,
    total: u64,
    store: Store,
}

impl ContextCounts {
    pub fn new(order: usize) -> Self {
        assert!(order < 64, "context order must be below 64");
        let store = if order <= DENSE_ORDER_MAX {
            Store::Dense(vec![[0, 0]; 1 << order])
        } else {
            Store::Sparse(HashMap::new())
        };
        ContextCounts {
            order,
            total: 0,
            store,
        }
    }

    /// Counts every prediction position of `bits`: for i in [m+1, n] (1-based)
    /// the context x_{i-m} .. x_{i-1} precedes symbol x_i. The first m symbols
    /// contribute no events, so `total` is max(0, n - m).
    pub fn from_sequence(bits: &[u8], order: usize) -> Self {
        let mut counts = Self::new(order);
        if bits.len() <= order {
            return counts;
        }
        let mask = context_mask(order);
        let mut ctx = pack_context(&bits[..order]);
        for &b in &bits[order..] {
            counts.record(ctx, b);
            ctx = ((ctx << 1) | u64::from(b)) & mask;
        }
        counts
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Number of positions counted so far.
    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn record(&mut self, context: u64, next: u8) {
        debug_assert!(next <= 1);
        debug_assert!(context < (1u64 << self.order) || self.order >= 63);
        match &mut self.store {
            Store::Dense(table) => table[context as usize][next as usize] += 1,
            Store::Sparse(map) => map.entry(context).or_insert([0, 0])[next as usize] += 1,
        }
        self.total += 1;
    }

    pub fn count(&self, context: u64, next: u8) -> u64 {
        self.successors(context)[next as usize]
    }

    /// Counts of the two possible successors of a context.
    pub fn successors(&self, context: u64) -> [u64; 2] {
        match &self.store {
            Store::Dense(table) => table[context as usize],
            Store::Sparse(map) => map.get(&context).copied().unwrap_or([0, 0]),
        }
    }

    /// How many times the context itself was seen in predicting position.
    pub fn context_total(&self, context: u64) -> u64 {
        let [c0, c1] = self.successors(context);
        c0 + c1
    }

    /// All contexts with at least one recorded event.
    pub fn entries(&self) -> Vec<(u64, [u64; 2])> {
        match &self.store {
            Store::Dense(table) => table
                .iter()
                .enumerate()
                .filter(|(_, c)| c[0] + c[1] > 0)
                .map(|(ctx, &c)| (ctx as u64, c))
                .collect(),
            Store::Sparse(map) => {
                let mut v: Vec<_> = map.iter().map(|(&ctx, &c)| (ctx, c)).collect();
                v.sort_unstable_by_key(|&(ctx, _)| ctx);
                v
            }
        }
    }
}

pub(crate) fn context_mask(order: usize) -> u64 {
    if order == 0 {
        0
    } else {
        u64::MAX >> (64 - order)
    }
}

/// Number of (possibly overlapping) occurrences of `w` in `x`.
pub fn count_occurrences(x: &[u8], w: &[u8]) -> usize {
    assert!(!w.is_empty(), "pattern must be non-empty");
    if x.len() < w.len() {
        return 0;
    }
    x.windows(w.len()).filter(|win| *win == w).count()
}

/// Plug-in estimate of the order-k conditional entropy in bits per symbol.
///
/// -sum over (u, a) of (N(ua)/(n-k)) * log2(N(ua)/N(u.)), with 0 log 0 = 0.
/// The result is clamped to [0, 1]. Requires n > k.
pub fn empirical_entropy(bits: &[u8], k: usize) -> f64 {
    assert!(bits.len() > k, "need more symbols than the context order");
    let counts = ContextCounts::from_sequence(bits, k);
    let events = counts.total() as f64;
    let mut h = 0.0;
    for (_, successors) in counts.entries() {
        let ctx_total = (successors[0] + successors[1]) as f64;
        for &c in &successors {
            if c > 0 {
                let c = c as f64;
                h -= (c / events) * (c / ctx_total).log2();
            }
        }
    }
    h.clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn occurrences_overlap() {
        let x = [0, 1, 0, 1];
        assert_eq!(count_occurrences(&x, &[0, 1]), 2);
        assert_eq!(count_occurrences(&[0, 0, 0], &[0, 0]), 2);
        assert_eq!(count_occurrences(&x, &x), 1);
        assert_eq!(count_occurrences(&[0], &[0, 1]), 0);
    }

    #[test]
    #[should_panic(expected = "pattern must be non-empty")]
    fn occurrences_reject_empty_pattern() {
        count_occurrences(&[0, 1], &[]);
    }

    #[test]
    fn gather_counts_memoryless() {
        let x = [0, 1, 0, 1, 0];
        let counts = ContextCounts::from_sequence(&x, 0);
        assert_eq!(counts.count(0, 0), 3);
        assert_eq!(counts.count(0, 1), 2);
        assert_eq!(counts.total(), 5);
    }

    #[test]
    fn gather_counts_order_one() {
        let x = [0, 1, 0, 1, 0];
        let counts = ContextCounts::from_sequence(&x, 1);
        assert_eq!(counts.count(0, 1), 2);
        assert_eq!(counts.count(1, 0), 2);
        assert_eq!(counts.count(0, 0), 0);
        assert_eq!(counts.count(1, 1), 0);
        assert_eq!(counts.total(), 4);
    }

    #[test]
    fn gather_counts_short_sequence() {
        let counts = ContextCounts::from_sequence(&[0], 1);
        assert_eq!(counts.total(), 0);
        assert!(counts.entries().is_empty());
    }

    #[test]
    fn entropy_deterministic_source_is_zero() {
        let zeros = vec![0u8; 100];
        assert_eq!(empirical_entropy(&zeros, 0), 0.0);
    }

    #[test]
    fn entropy_alternating() {
        let alt: Vec<u8> = (0..100).map(|i| (i % 2) as u8).collect();
        // Every order-1 context determines the next symbol exactly.
        assert_eq!(empirical_entropy(&alt, 1), 0.0);
        // Symbol frequencies are equal, so the order-0 estimate is 1 bit.
        assert!((empirical_entropy(&alt, 0) - 1.0).abs() < 1e-12);
    }

    #[test]
    #[should_panic(expected = "more symbols than the context order")]
    fn entropy_needs_enough_symbols() {
        empirical_entropy(&[0, 1], 2);
    }

    proptest! {
        #[test]
        fn counts_sum_to_positions(bits in proptest::collection::vec(0u8..=1, 0..200), m in 0usize..6) {
            let counts = ContextCounts::from_sequence(&bits, m);
            let grand: u64 = counts.entries().iter().map(|(_, c)| c[0] + c[1]).sum();
            prop_assert_eq!(grand, counts.total());
            prop_assert_eq!(counts.total() as usize, bits.len().saturating_sub(m));
        }

        #[test]
        fn incremental_matches_recount(bits in proptest::collection::vec(0u8..=1, 1..150), m in 0usize..5) {
            // Extending the sequence one symbol at a time must agree with a
            // fresh count of the whole sequence.
            let mut incremental = ContextCounts::new(m);
            let mask = context_mask(m);
            let mut ctx = 0u64;
            for (i, &b) in bits.iter().enumerate() {
                if i >= m {
                    incremental.record(ctx, b);
                }
                ctx = ((ctx << 1) | u64::from(b)) & mask;
            }
            let fresh = ContextCounts::from_sequence(&bits, m);
            prop_assert_eq!(incremental.entries(), fresh.entries());
        }

        #[test]
        fn occurrence_count_extends_consistently(
            bits in proptest::collection::vec(0u8..=1, 1..120),
            w in proptest::collection::vec(0u8..=1, 1..4),
        ) {
            // Counting after each extension agrees with a scratch recount.
            let mut running = 0usize;
            for i in 1..=bits.len() {
                let prefix = &bits[..i];
                if prefix.len() >= w.len() && prefix[prefix.len() - w.len()..] == w[..] {
                    running += 1;
                }
                prop_assert_eq!(running, count_occurrences(prefix, &w));
            }
        }

        #[test]
        fn entropy_within_unit_interval(bits in proptest::collection::vec(0u8..=1, 2..200), k in 0usize..3) {
            prop_assume!(bits.len() > k);
            let h = empirical_entropy(&bits, k);
            prop_assert!((0.0..=1.0).contains(&h));
        }
    }
}
