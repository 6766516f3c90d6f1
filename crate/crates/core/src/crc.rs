//! CRC arithmetic over GF(2).
//!
//! Plain polynomial division: no reflection, no initial register fill and no
//! output XOR. The first transmitted message bit is the highest-degree
//! coefficient of the message polynomial, so `encode` computes
//! `M(x) * x^m mod g(x)` and appends it after the message.

use std::fmt;

use crate::bits::BitBlock;
use crate::error::{Error, Result};

/// Built-in CRC generators, hex with the degree-`m` coefficient as the most
/// significant bit.
pub const CRC_REGISTRY: &[(&str, u64)] = &[
    // Distance-spectrum-optimal CRCs for the rate-1/5 (575,623,727,561,753) TBCC.
    ("tbcc-dso-8", 0x101),
    ("tbcc-dso-9", 0x21F),
    ("tbcc-dso-10", 0x4D5),
    ("tbcc-dso-11", 0xA9D),
    ("tbcc-dso-12", 0x123B),
    ("tbcc-dso-13", 0x27C5),
    ("tbcc-dso-14", 0x7CCF),
    ("tbcc-dso-15", 0x8441),
    ("tbcc-dso-16", 0x18077),
    // 3GPP 38.212 CRC24C (PBCH) and CRC11 (uplink control).
    ("5g-crc24c", 0x1B2B117),
    ("5g-crc11", 0xE21),
    // Baicheva-Kazakov alternatives for the 512-bit polar code.
    ("bk-crc11", 0xB5F),
    ("bk-crc12", 0x1395),
];

/// A CRC generator polynomial of degree `m`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct CrcSpec {
    degree: u32,
    poly: u64,
}

impl CrcSpec {
    /// `poly` includes the leading `x^m` coefficient; the degree is taken from
    /// its bit length. Degrees 1 through 32 are accepted.
    pub fn new(poly: u64) -> Result<Self> {
        if poly < 2 {
            return Err(Error::InvalidSpec(format!(
                "CRC polynomial {poly:#x} has degree < 1"
            )));
        }
        let degree = 63 - poly.leading_zeros();
        if degree > 32 {
            return Err(Error::InvalidSpec(format!(
                "CRC polynomial {poly:#x} has degree {degree} > 32"
            )));
        }
        Ok(CrcSpec { degree, poly })
    }

    pub fn by_name(name: &str) -> Result<Self> {
        CRC_REGISTRY
            .iter()
            .find(|(n, _)| *n == name)
            .map(|&(_, p)| CrcSpec::new(p).expect("registry polynomials are valid"))
            .ok_or_else(|| Error::UnknownId(name.to_string()))
    }

    /// Registry name of the polynomial, if it is a built-in one.
    pub fn name(&self) -> Option<&'static str> {
        CRC_REGISTRY
            .iter()
            .find(|(_, p)| *p == self.poly)
            .map(|(n, _)| *n)
    }

    pub fn degree(&self) -> usize {
        self.degree as usize
    }

    pub fn poly(&self) -> u64 {
        self.poly
    }

    fn low_mask(&self) -> u64 {
        (1u64 << self.degree) - 1
    }

    /// Remainder of `message * x^m` divided by the generator.
    pub fn remainder(&self, message: &BitBlock) -> BitBlock {
        let m = self.degree;
        let low = self.poly & self.low_mask();
        let mut reg = 0u64;
        for b in message.iter() {
            let feedback = ((reg >> (m - 1)) & 1) ^ b as u64;
            reg = (reg << 1) & self.low_mask();
            if feedback == 1 {
                reg ^= low;
            }
        }
        BitBlock::from_word(reg, self.degree())
    }

    /// `message || remainder(message)`.
    pub fn encode(&self, message: &BitBlock) -> BitBlock {
        message.concat(&self.remainder(message))
    }

    /// True iff the whole word is a multiple of the generator.
    pub fn check(&self, word: &BitBlock) -> Result<bool> {
        if word.len() <= self.degree() {
            return Err(Error::MalformedInput(format!(
                "CRC word of {} bits is not longer than the CRC degree {}",
                word.len(),
                self.degree
            )));
        }
        let mut reg = 0u64;
        for b in word.iter() {
            reg = (reg << 1) | b as u64;
            if (reg >> self.degree) & 1 == 1 {
                reg ^= self.poly;
            }
        }
        Ok(reg == 0)
    }

    /// [`CrcSpec::remainder`] for a message packed into the `len` low bits of
    /// `word`.
    pub fn remainder_word(&self, word: u64, len: usize) -> u64 {
        let m = self.degree;
        let low = self.poly & self.low_mask();
        let mut reg = 0u64;
        for i in (0..len).rev() {
            let feedback = ((reg >> (m - 1)) ^ (word >> i)) & 1;
            reg = (reg << 1) & self.low_mask();
            if feedback == 1 {
                reg ^= low;
            }
        }
        reg
    }

    /// Checks a packed CRC word of `len` bits (message followed by CRC).
    pub fn check_word(&self, word: u64, len: usize) -> bool {
        let m = self.degree();
        debug_assert!(len > m && len <= 64);
        self.remainder_word(word >> m, len - m) == word & self.low_mask()
    }

    /// Packed [`CrcSpec::encode`]; `len + m` must not exceed 64.
    pub fn encode_word(&self, message: u64, len: usize) -> u64 {
        debug_assert!(len + self.degree() <= 64);
        (message << self.degree) | self.remainder_word(message, len)
    }
}

impl fmt::Debug for CrcSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CrcSpec(m={}, {:#X})", self.degree, self.poly)
    }
}

impl fmt::Display for CrcSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.name() {
            Some(n) => write!(f, "{n}"),
            None => write!(f, "{:#X}", self.poly),
        }
    }
}
