//! Shared oracles for the integration suites: exact rational arithmetic for
//! the Krichevsky and mixture measures (substring-count form, independent of
//! the library's sequential implementation) and a quadratic reference LZ77
//! parser.
#![allow(dead_code)] // each test target uses a different subset

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, ToPrimitive};

/// Occurrences of `needle` in `hay`, overlapping, with the convention that
/// the empty word occurs len+1 times.
pub fn occurrences(hay: &[u8], needle: &[u8]) -> usize {
    if needle.is_empty() {
        return hay.len() + 1;
    }
    if hay.len() < needle.len() {
        return 0;
    }
    hay.windows(needle.len()).filter(|w| *w == needle).count()
}

/// Exact per-step factors (2N+1, 2D+2) of the memory-m Krichevsky measure,
/// computed from substring counts over growing prefixes.
pub fn kt_factors_rational(bits: &[u8], m: usize) -> Vec<(u64, u64)> {
    let t = bits.len();
    let mut factors = Vec::new();
    for j in m..t {
        let num = occurrences(&bits[..j], &bits[j - m..=j]) as u64;
        let den = if j == 0 {
            0
        } else {
            occurrences(&bits[..j - 1], &bits[j - m..j]) as u64
        };
        factors.push((2 * num + 1, 2 * (den + 1)));
    }
    factors
}

/// Exact K_m(x) as a rational number.
pub fn kt_measure_rational(bits: &[u8], m: usize) -> BigRational {
    let lead = m.min(bits.len());
    let mut measure = BigRational::new(BigInt::one(), BigInt::one() << lead);
    for (num, den) in kt_factors_rational(bits, m) {
        measure *= BigRational::new(BigInt::from(num), BigInt::from(den));
    }
    measure
}

/// Exact mixture measure sum_i beta_i K_i with beta_i = 1/((i+1)(i+2)).
pub fn mixture_measure_rational(bits: &[u8], max_order: usize) -> BigRational {
    let mut sum = BigRational::new(BigInt::from(0), BigInt::one());
    for i in 0..=max_order {
        let beta = BigRational::new(BigInt::one(), BigInt::from(((i + 1) * (i + 2)) as u64));
        sum += beta * kt_measure_rational(bits, i);
    }
    sum
}

fn log2_bigint(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits <= 53 {
        return x.to_f64().unwrap().log2();
    }
    let shift = bits - 53;
    let top: BigInt = x >> shift;
    top.to_f64().unwrap().log2() + shift as f64
}

/// -log2 of a positive rational, accurate to ~1e-12.
pub fn neg_log2_rational(r: &BigRational) -> f64 {
    log2_bigint(r.denom()) - log2_bigint(r.numer())
}

/// Quadratic reference for the greedy parse: scan every start position for
/// the longest match (smallest position on ties), overlap allowed, literals
/// for matches shorter than 2.
pub fn reference_parse(bits: &[u8]) -> Vec<codelen::lz77::Phrase> {
    use codelen::lz77::Phrase;
    let n = bits.len();
    let mut phrases = Vec::new();
    let mut i = 0;
    while i < n {
        let mut best_len = 0;
        let mut best_pos = 0;
        for p in 0..i {
            let mut len = 0;
            while i + len < n && bits[p + len] == bits[i + len] {
                len += 1;
            }
            if len > best_len {
                best_len = len;
                best_pos = p;
            }
        }
        if best_len >= 2 {
            phrases.push(Phrase::Match {
                pos: best_pos + 1,
                len: best_len,
            });
            i += best_len;
        } else {
            phrases.push(Phrase::Literal(bits[i]));
            i += 1;
        }
    }
    phrases
}

/// Binary entropy in bits.
pub fn binary_entropy(p: f64) -> f64 {
    if p == 0.0 || p == 1.0 {
        return 0.0;
    }
    -(p * p.log2() + (1.0 - p) * (1.0 - p).log2())
}

/// Writes the big-endian bits of `word` into `buf`.
pub fn fill_word(buf: &mut [u8], word: u64) {
    let n = buf.len();
    for (j, b) in buf.iter_mut().enumerate() {
        *b = ((word >> (n - 1 - j)) & 1) as u8;
    }
}
