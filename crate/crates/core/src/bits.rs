//! Binary words and input parsing.

use std::fmt;
use std::ops::Deref;

use crate::{Error, Result};

/// Input encodings accepted by [`BitSequence::parse`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    /// Each input byte contributes 8 bits, most significant first.
    RawMsbFirst,
    /// Characters '0' and '1'; ASCII whitespace is skipped.
    Ascii01,
}

/// A finite binary word x_1 ... x_n. Every symbol is 0 or 1.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BitSequence {
    bits: Vec<u8>,
}

impl BitSequence {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(n: usize) -> Self {
        BitSequence {
            bits: Vec::with_capacity(n),
        }
    }

    /// Wraps a vector of 0/1 symbols.
    ///
    /// Panics if any element is not 0 or 1.
    pub fn from_bits(bits: Vec<u8>) -> Self {
        assert!(
            bits.iter().all(|&b| b <= 1),
            "bit sequences may only contain 0 and 1"
        );
        BitSequence { bits }
    }

    /// Parses a '0'/'1' string with no whitespace allowed, for tests and
    /// small literals.
    pub fn from_str01(s: &str) -> Self {
        Self::from_bits(
            s.bytes()
                .map(|b| match b {
                    b'0' => 0,
                    b'1' => 1,
                    other => panic!("not a binary digit: {:?}", other as char),
                })
                .collect(),
        )
    }

    /// Decodes a raw byte stream in the given format.
    pub fn parse(raw: &[u8], format: Format) -> Result<Self> {
        match format {
            Format::RawMsbFirst => {
                let mut bits = Vec::with_capacity(raw.len() * 8);
                for &byte in raw {
                    for shift in (0..8).rev() {
                        bits.push((byte >> shift) & 1);
                    }
                }
                Ok(BitSequence { bits })
            }
            Format::Ascii01 => {
                let mut bits = Vec::with_capacity(raw.len());
                for (offset, &byte) in raw.iter().enumerate() {
                    match byte {
                        b'0' => bits.push(0),
                        b'1' => bits.push(1),
                        b if b.is_ascii_whitespace() => {}
                        other => {
                            return Err(Error::InvalidCharacter {
                                offset,
                                found: other as char,
                            })
                        }
                    }
                }
                Ok(BitSequence { bits })
            }
        }
    }

    pub fn push(&mut self, bit: u8) {
        assert!(bit <= 1, "bit sequences may only contain 0 and 1");
        self.bits.push(bit);
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    /// Packs the sequence back into bytes, MSB first. The length must be a
    /// multiple of 8.
    pub fn to_bytes_msb(&self) -> Result<Vec<u8>> {
        if !self.bits.len().is_multiple_of(8) {
            return Err(Error::UnalignedBits {
                bits: self.bits.len(),
            });
        }
        Ok(self
            .bits
            .chunks_exact(8)
            .map(|chunk| chunk.iter().fold(0u8, |acc, &b| (acc << 1) | b))
            .collect())
    }

    pub fn to_string01(&self) -> String {
        self.bits
            .iter()
            .map(|&b| if b == 0 { '0' } else { '1' })
            .collect()
    }
}

impl Deref for BitSequence {
    type Target = [u8];

    fn deref(&self) -> &[u8] {
        &self.bits
    }
}

impl FromIterator<u8> for BitSequence {
    fn from_iter<I: IntoIterator<Item = u8>>(iter: I) -> Self {
        Self::from_bits(iter.into_iter().collect())
    }
}

impl fmt::Display for BitSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string01())
    }
}
