//! Polar codes as used on the 5G broadcast channel: frozen-set selection from
//! a reliability sequence, the Arikan transform, repetition rate matching and
//! CRC-aided successive-cancellation list decoding.
//!
//! The transform is `x = u * F^{(x)m}` with `F = [[1,0],[1,1]]` in natural
//! index order (no bit reversal), matching 38.212.

mod reliability;
mod scl;

pub use reliability::ReliabilitySequence;
pub use scl::{sc_decode, scl_decode, scl_decode_words, SclCandidate};

use crate::adaptive::{Candidate, ListDecoder};
use crate::bits::BitBlock;
use crate::error::{Error, Result};

/// Frozen/information split of an `n`-bit polar code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolarSpec {
    n: usize,
    k: usize,
    frozen: Vec<bool>,
    /// Information positions in increasing index order.
    info_positions: Vec<usize>,
}

impl PolarSpec {
    /// Freezes the `n - k` least reliable sub-channels of `sequence`.
    pub fn new(n: usize, k: usize, sequence: &ReliabilitySequence) -> Result<Self> {
        if !n.is_power_of_two() || n < 2 {
            return Err(Error::InvalidArgument(format!(
                "polar length {n} is not a power of two"
            )));
        }
        if sequence.len() != n {
            return Err(Error::InvalidArgument(format!(
                "reliability sequence has {} entries, code length is {n}",
                sequence.len()
            )));
        }
        if k == 0 || k > n || k > 64 {
            return Err(Error::InvalidArgument(format!(
                "information size {k} must be in 1..=min({n}, 64)"
            )));
        }
        let mut frozen = vec![false; n];
        for &i in &sequence.least_to_most()[..n - k] {
            frozen[i] = true;
        }
        let info_positions = (0..n).filter(|&i| !frozen[i]).collect();
        Ok(PolarSpec {
            n,
            k,
            frozen,
            info_positions,
        })
    }

    /// The 512-bit 5G code carrying `k` information bits.
    pub fn nr_512(k: usize) -> Result<Self> {
        Self::new(512, k, &ReliabilitySequence::nr_512()?)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn is_frozen(&self, i: usize) -> bool {
        self.frozen[i]
    }

    pub fn frozen_mask(&self) -> &[bool] {
        &self.frozen
    }

    pub fn info_positions(&self) -> &[usize] {
        &self.info_positions
    }

    pub fn num_frozen(&self) -> usize {
        self.n - self.k
    }

    /// Places `info` on the information positions (increasing index order),
    /// zeros elsewhere, and applies the transform.
    pub fn encode(&self, info: &BitBlock) -> Result<BitBlock> {
        if info.len() != self.k {
            return Err(Error::InvalidArgument(format!(
                "{} information bits for a K = {} code",
                info.len(),
                self.k
            )));
        }
        let mut u = vec![0u8; self.n];
        for (&pos, b) in self.info_positions.iter().zip(info.iter()) {
            u[pos] = b;
        }
        polar_transform_in_place(&mut u);
        Ok(BitBlock::from(u))
    }
}

/// Multiplies by the `n`-fold Kronecker power of `[[1,0],[1,1]]` over GF(2).
pub fn polar_transform(u: &BitBlock) -> Result<BitBlock> {
    if !u.len().is_power_of_two() {
        return Err(Error::InvalidArgument(format!(
            "transform length {} is not a power of two",
            u.len()
        )));
    }
    let mut x = u.clone().into_vec();
    polar_transform_in_place(&mut x);
    Ok(BitBlock::from(x))
}

pub(crate) fn polar_transform_in_place(x: &mut [u8]) {
    let n = x.len();
    let mut half = n / 2;
    while half >= 1 {
        for block in x.chunks_exact_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for (a, b) in lo.iter_mut().zip(hi.iter()) {
                *a ^= *b;
            }
        }
        half /= 2;
    }
}

/// Subset repetition: the first `repeat_prefix_len` codeword bits are sent a
/// second time after the full codeword.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RateMatchSpec {
    pub transmit_len: usize,
    pub repeat_prefix_len: usize,
}

impl RateMatchSpec {
    /// 512 coded bits plus 352 repeated ones.
    pub const PBCH: RateMatchSpec = RateMatchSpec {
        transmit_len: 864,
        repeat_prefix_len: 352,
    };

    pub fn codeword_len(&self) -> usize {
        self.transmit_len - self.repeat_prefix_len
    }

    pub fn rate_match(&self, codeword: &BitBlock) -> Result<BitBlock> {
        if codeword.len() != self.codeword_len() || self.repeat_prefix_len > codeword.len() {
            return Err(Error::InvalidArgument(format!(
                "codeword of {} bits for a {}-bit rate matcher",
                codeword.len(),
                self.codeword_len()
            )));
        }
        Ok(codeword.concat(&codeword.slice(0, self.repeat_prefix_len)))
    }

    /// Soft-combines repeated observations: repeated positions add.
    pub fn llr_combine(&self, llrs: &[f64]) -> Result<Vec<f64>> {
        if llrs.len() != self.transmit_len {
            return Err(Error::InvalidArgument(format!(
                "{} LLRs for a {}-bit transmission",
                llrs.len(),
                self.transmit_len
            )));
        }
        let n = self.codeword_len();
        let mut out = llrs[..n].to_vec();
        for (o, &r) in out.iter_mut().zip(&llrs[n..]) {
            *o += r;
        }
        Ok(out)
    }
}

/// Adaptive-loop adapter: repetition-combined LLRs of the base codeword in,
/// information words out. Scores are negated penalties.
#[derive(Clone, Debug)]
pub struct PolarListDecoder {
    spec: PolarSpec,
}

impl PolarListDecoder {
    pub fn new(spec: PolarSpec) -> Self {
        PolarListDecoder { spec }
    }

    pub fn spec(&self) -> &PolarSpec {
        &self.spec
    }
}

impl ListDecoder for PolarListDecoder {
    fn llr_len(&self) -> usize {
        self.spec.n()
    }

    fn info_len(&self) -> usize {
        self.spec.k()
    }

    /// SCL offers no certificate, so every CRC hit is taken as found.
    fn decode_list(&self, llrs: &[f64], list_size: usize) -> Result<Vec<Candidate>> {
        Ok(scl_decode_words(llrs, &self.spec, list_size)?
            .into_iter()
            .map(|(word, penalty)| Candidate {
                word,
                score: -penalty,
                certified: true,
            })
            .collect())
    }
}
