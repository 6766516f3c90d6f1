//! Bit containers shared by every coding layer.
//!
//! A [`BitBlock`] stores one bit per byte (`0` or `1`). Blocks of at most 64
//! bits can also be packed into a `u64` word where bit 0 of the block is the
//! most significant of the `len` low bits; decoders use the packed form on
//! their hot paths.

use std::fmt;
use std::ops::{BitXor, Index};

use rand::Rng;

use crate::error::{Error, Result};

/// Ordered sequence of bits with an explicit length.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct BitBlock(Vec<u8>);

impl BitBlock {
    pub fn zeros(len: usize) -> Self {
        BitBlock(vec![0; len])
    }

    /// Builds a block from `0`/`1` bytes, rejecting anything else.
    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        if let Some(pos) = bits.iter().position(|&b| b > 1) {
            return Err(Error::MalformedInput(format!(
                "bit {pos} has value {}, expected 0 or 1",
                bits[pos]
            )));
        }
        Ok(BitBlock(bits.to_vec()))
    }

    /// Parses a string of `'0'`/`'1'` characters; other characters are skipped.
    pub fn from_str_bits(s: &str) -> Self {
        BitBlock(
            s.chars()
                .filter_map(|c| match c {
                    '0' => Some(0),
                    '1' => Some(1),
                    _ => None,
                })
                .collect(),
        )
    }

    /// Unpacks the `len` low bits of `word`, most significant first.
    pub fn from_word(word: u64, len: usize) -> Self {
        assert!(len <= 64, "packed words hold at most 64 bits");
        BitBlock(
            (0..len)
                .map(|i| ((word >> (len - 1 - i)) & 1) as u8)
                .collect(),
        )
    }

    /// Packs the block into a word, first bit most significant.
    pub fn to_word(&self) -> u64 {
        assert!(self.len() <= 64, "packed words hold at most 64 bits");
        self.0.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64)
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R, len: usize) -> Self {
        BitBlock((0..len).map(|_| rng.random::<bool>() as u8).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<u8> {
        self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = u8> + '_ {
        self.0.iter().copied()
    }

    pub fn flip(&mut self, pos: usize) {
        self.0[pos] ^= 1;
    }

    pub fn set(&mut self, pos: usize, bit: u8) {
        self.0[pos] = bit & 1;
    }

    pub fn weight(&self) -> usize {
        self.0.iter().filter(|&&b| b == 1).count()
    }

    pub fn concat(&self, other: &BitBlock) -> BitBlock {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        BitBlock(v)
    }

    pub fn slice(&self, start: usize, end: usize) -> BitBlock {
        BitBlock(self.0[start..end].to_vec())
    }

    /// Cyclic left rotation by `n` positions.
    pub fn rotate_left(&self, n: usize) -> BitBlock {
        let mut v = self.0.clone();
        if !v.is_empty() {
            let k = n % v.len();
            v.rotate_left(k);
        }
        BitBlock(v)
    }
}

impl Index<usize> for BitBlock {
    type Output = u8;

    fn index(&self, i: usize) -> &u8 {
        &self.0[i]
    }
}

impl BitXor for &BitBlock {
    type Output = BitBlock;

    fn bitxor(self, rhs: &BitBlock) -> BitBlock {
        assert_eq!(
            self.len(),
            rhs.len(),
            "xor of blocks with different lengths"
        );
        BitBlock(self.0.iter().zip(&rhs.0).map(|(a, b)| a ^ b).collect())
    }
}

impl From<Vec<u8>> for BitBlock {
    /// Nonzero bytes become `1`.
    fn from(v: Vec<u8>) -> Self {
        BitBlock(v.into_iter().map(|b| (b != 0) as u8).collect())
    }
}

impl FromIterator<u8> for BitBlock {
    fn from_iter<I: IntoIterator<Item = u8>>(iter: I) -> Self {
        BitBlock(iter.into_iter().map(|b| b & 1).collect())
    }
}

impl fmt::Display for BitBlock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitBlock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitBlock[{}]({self})", self.len())
    }
}

/// Per-bit log-likelihood ratios, `log P(y|0) - log P(y|1)`.
pub type LlrVector = Vec<f64>;
