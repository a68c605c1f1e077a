//! LZ77 parsing over the full prefix and prefix-free pair coding.
//!
//! The parse is greedy: at each position the longest match of the remaining
//! suffix against text starting anywhere in the already-produced prefix is
//! taken (ties broken toward the smallest position), and the match may run
//! past the prefix boundary, giving run-length behaviour. A match shorter
//! than 2 becomes a literal.
//!
//! Pairs are costed with the Elias delta code: a literal is C(1) plus one raw
//! bit, a match at position p with length l is C(p+1) + C(l), so literals and
//! matches share a single positive-integer code with value 1 marking the
//! literal. Only lengths are needed by the tests; no bitstream is emitted.

use std::collections::HashMap;

use crate::bits::BitSequence;
use crate::counts::pack_context;
use crate::{Error, Result};

/// One parsed phrase: a raw symbol, or a copy of `len` symbols starting at
/// 1-based `pos` in the text produced so far.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phrase {
    Literal(u8),
    Match { pos: usize, len: usize },
}

/// A complete parse; expanding the phrases in order reproduces the input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LzParse {
    pub phrases: Vec<Phrase>,
    pub decoded_length: usize,
}

/// Window widths of the position index, searched longest first. Every
/// position with a match at least as long as a width is indexed under that
/// width, so the first non-empty tier contains every candidate for the
/// longest match.
const TIER_WIDTHS: [usize; 4] = [16, 8, 4, 2];

struct TierIndex {
    width: usize,
    map: HashMap<u64, Vec<u32>>,
}

/// Greedy longest-match parse of `bits`.
pub fn parse(bits: &[u8]) -> LzParse {
    let n = bits.len();
    assert!(
        n < u32::MAX as usize,
        "input too long for the position index"
    );
    let mut tiers: Vec<TierIndex> = TIER_WIDTHS
        .iter()
        .map(|&width| TierIndex {
            width,
            map: HashMap::new(),
        })
        .collect();
    let mut phrases = Vec::new();
    let mut indexed = 0usize;
    let mut i = 0usize;

    while i < n {
        // Positions strictly before i are valid match starts.
        while indexed < i {
            for tier in &mut tiers {
                if indexed + tier.width <= n {
                    let key = pack_context(&bits[indexed..indexed + tier.width]);
                    tier.map.entry(key).or_default().push(indexed as u32);
                }
            }
            indexed += 1;
        }

        let remaining = n - i;
        let mut best_len = 0usize;
        let mut best_pos = 0usize;
        if remaining >= 2 {
            for tier in &tiers {
                if tier.width > remaining {
                    continue;
                }
                let key = pack_context(&bits[i..i + tier.width]);
                let Some(candidates) = tier.map.get(&key) else {
                    continue;
                };
                for &cand in candidates {
                    let p = cand as usize;
                    if best_len >= remaining {
                        break; // no match can exceed the remaining suffix
                    }
                    // A longer match must agree at offset best_len too.
                    if best_len >= tier.width && bits[p + best_len] != bits[i + best_len] {
                        continue;
                    }
                    let mut len = tier.width;
                    while i + len < n && bits[p + len] == bits[i + len] {
                        len += 1;
                    }
                    if len > best_len {
                        best_len = len;
                        best_pos = p;
                    }
                }
                break; // every candidate for the maximum lies in this tier
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

    LzParse {
        phrases,
        decoded_length: n,
    }
}

/// Expands a phrase list, copying matches symbol by symbol so overlapping
/// copies are well defined.
pub fn decode(parse: &LzParse) -> Result<BitSequence> {
    let mut out: Vec<u8> = Vec::with_capacity(parse.decoded_length);
    for (index, phrase) in parse.phrases.iter().enumerate() {
        match *phrase {
            Phrase::Literal(b) => {
                if b > 1 {
                    return Err(Error::MalformedParse {
                        index,
                        reason: format!("literal {b} is not a binary symbol"),
                    });
                }
                out.push(b);
            }
            Phrase::Match { pos, len } => {
                if pos == 0 || pos > out.len() {
                    return Err(Error::MalformedParse {
                        index,
                        reason: format!(
                            "match position {pos} outside decoded prefix of length {}",
                            out.len()
                        ),
                    });
                }
                if len == 0 {
                    return Err(Error::MalformedParse {
                        index,
                        reason: "match length must be at least 1".into(),
                    });
                }
                for j in 0..len {
                    let b = out[pos - 1 + j];
                    out.push(b);
                }
            }
        }
    }
    if out.len() != parse.decoded_length {
        return Err(Error::MalformedParse {
            index: parse.phrases.len(),
            reason: format!(
                "phrases expand to {} symbols, parse declares {}",
                out.len(),
                parse.decoded_length
            ),
        });
    }
    Ok(BitSequence::from_bits(out))
}

/// Length in bits of the Elias delta code of a positive integer:
/// floor(log2 m) + 2 floor(log2(floor(log2 m) + 1)) + 1.
pub fn integer_code_length(m: u64) -> u64 {
    assert!(m >= 1, "the integer code starts at 1");
    let n = m.ilog2() as u64;
    n + 2 * u64::from((n + 1).ilog2()) + 1
}

/// Total pair-coding cost of a parse in bits.
pub fn encoded_length(parse: &LzParse) -> u64 {
    parse
        .phrases
        .iter()
        .map(|phrase| match *phrase {
            Phrase::Literal(_) => integer_code_length(1) + 1,
            Phrase::Match { pos, len } => {
                integer_code_length(pos as u64 + 1) + integer_code_length(len as u64)
            }
        })
        .sum()
}

/// |LZ(x)|: the pair-coding cost of the greedy parse.
pub fn codelength_lz(bits: &[u8]) -> u64 {
    encoded_length(&parse(bits))
}
