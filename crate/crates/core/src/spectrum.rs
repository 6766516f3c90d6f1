//! Brute-force distance spectra of small CRC + TBCC concatenations and an
//! exhaustive search for distance-spectrum-optimal CRCs at desk scale.
//!
//! Spectra are compared lexicographically starting at weight 1, fewer
//! codewords being better at the first differing weight. This orders first
//! by larger minimum distance, then by fewer minimum-weight codewords, then
//! by the next spectral lines.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::bits::BitBlock;
use crate::crc::CrcSpec;
use crate::error::{Error, Result};
use crate::tbcc::{ConvCodeSpec, Trellis};

/// Largest input length enumerated exhaustively.
pub const MAX_ENUMERATION_BITS: usize = 24;

/// A binary linear encoder over packed inputs (first bit most significant).
pub trait LinearEncoder: Sync {
    fn input_len(&self) -> usize;

    fn output_len(&self) -> usize;

    fn encode(&self, input: u64) -> BitBlock;

    fn weight(&self, input: u64) -> usize {
        self.encode(input).weight()
    }
}

/// Message -> optional CRC -> tail-biting convolutional code.
#[derive(Clone, Debug)]
pub struct CrcTbcc {
    conv: ConvCodeSpec,
    trellis: Trellis,
    crc: Option<CrcSpec>,
    k_message: usize,
}

impl CrcTbcc {
    pub fn new(conv: &ConvCodeSpec, crc: Option<CrcSpec>, k_message: usize) -> Result<Self> {
        let k = k_message + crc.map_or(0, |c| c.degree());
        if k > 64 || k < conv.memory() {
            return Err(Error::InvalidArgument(format!(
                "TBCC input length {k} outside {}..=64",
                conv.memory()
            )));
        }
        Ok(CrcTbcc {
            conv: conv.clone(),
            trellis: Trellis::build(conv),
            crc,
            k_message,
        })
    }

    fn tbcc_input(&self, input: u64) -> (u64, usize) {
        match self.crc {
            Some(c) => (
                c.encode_word(input, self.k_message),
                self.k_message + c.degree(),
            ),
            None => (input, self.k_message),
        }
    }
}

impl LinearEncoder for CrcTbcc {
    fn input_len(&self) -> usize {
        self.k_message
    }

    fn output_len(&self) -> usize {
        self.tbcc_input(0).1 * self.conv.outputs()
    }

    fn encode(&self, input: u64) -> BitBlock {
        let (word, k) = self.tbcc_input(input);
        self.conv
            .encode(&BitBlock::from_word(word, k))
            .expect("input length checked at construction")
    }

    fn weight(&self, input: u64) -> usize {
        let (word, k) = self.tbcc_input(input);
        let v = self.trellis.memory();
        // Tail state: the last v inputs, most recent in the top bit.
        let start = (0..v).fold(0usize, |s, i| {
            s | ((((word >> i) & 1) as usize) << (v - 1 - i))
        });
        let (labels, _) = self.trellis.walk(word, k, start);
        labels.iter().map(|l| l.count_ones() as usize).sum()
    }
}

/// Codeword counts indexed by Hamming weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightSpectrum {
    counts: Vec<u64>,
}

impl WeightSpectrum {
    pub fn from_counts(counts: Vec<u64>) -> Self {
        WeightSpectrum { counts }
    }

    pub fn count(&self, weight: usize) -> u64 {
        self.counts.get(weight).copied().unwrap_or(0)
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Smallest nonzero weight present.
    pub fn d_min(&self) -> Option<usize> {
        self.counts
            .iter()
            .enumerate()
            .skip(1)
            .find(|(_, &c)| c > 0)
            .map(|(w, _)| w)
    }

    pub fn as_map(&self) -> BTreeMap<usize, u64> {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(w, &c)| (w, c))
            .collect()
    }

    /// `Less` when `self` is the better spectrum.
    pub fn quality_cmp(&self, other: &WeightSpectrum) -> Ordering {
        let n = self.counts.len().max(other.counts.len());
        for w in 1..n {
            match self.count(w).cmp(&other.count(w)) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        Ordering::Equal
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("weight,count\n");
        for (w, c) in self.as_map() {
            let _ = writeln!(s, "{w},{c}");
        }
        s
    }
}

/// Enumerates all `2^k` inputs and tallies codeword weights.
pub fn weight_enumerator(encoder: &dyn LinearEncoder, k: usize) -> Result<WeightSpectrum> {
    if k > MAX_ENUMERATION_BITS {
        return Err(Error::TooLarge(format!(
            "2^{k} inputs exceed the 2^{MAX_ENUMERATION_BITS} enumeration bound"
        )));
    }
    if k != encoder.input_len() {
        return Err(Error::InvalidArgument(format!(
            "k = {k} but the encoder takes {} bits",
            encoder.input_len()
        )));
    }
    let bins = encoder.output_len() + 1;
    let counts = (0..1u64 << k)
        .into_par_iter()
        .fold(
            || vec![0u64; bins],
            |mut acc, x| {
                acc[encoder.weight(x)] += 1;
                acc
            },
        )
        .reduce(
            || vec![0u64; bins],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    Ok(WeightSpectrum { counts })
}

/// One scored CRC candidate.
#[derive(Clone, Debug)]
pub struct ScoredCrc {
    pub crc: CrcSpec,
    pub spectrum: WeightSpectrum,
}

#[derive(Clone, Debug)]
pub struct DsoResult {
    pub best: ScoredCrc,
    /// Every candidate in increasing polynomial order.
    pub candidates: Vec<ScoredCrc>,
}

impl DsoResult {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("poly,degree,d_min,a_dmin,best\n");
        for c in &self.candidates {
            let d = c.spectrum.d_min();
            let _ = writeln!(
                s,
                "{:#X},{},{},{},{}",
                c.crc.poly(),
                c.crc.degree(),
                d.map_or(String::from("inf"), |d| d.to_string()),
                d.map_or(0, |d| c.spectrum.count(d)),
                c.crc == self.best.crc
            );
        }
        s
    }
}

/// Scores every degree-`m` polynomial with a constant term by the spectrum
/// of the concatenated code and returns the best, smallest polynomial first
/// among exact ties.
pub fn dso_search(conv: &ConvCodeSpec, m: usize, k_message: usize) -> Result<DsoResult> {
    if m == 0 || m > 32 {
        return Err(Error::InvalidArgument(format!(
            "CRC degree {m} outside 1..=32"
        )));
    }
    if k_message + m > MAX_ENUMERATION_BITS {
        return Err(Error::TooLarge(format!(
            "k + m = {} exceeds {MAX_ENUMERATION_BITS}",
            k_message + m
        )));
    }
    let top = 1u64 << m;
    let candidates = (0..top / 2)
        .map(|i| {
            let crc = CrcSpec::new(top | (2 * i + 1))?;
            let enc = CrcTbcc::new(conv, Some(crc), k_message)?;
            Ok(ScoredCrc {
                crc,
                spectrum: weight_enumerator(&enc, k_message)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut best = &candidates[0];
    for c in &candidates[1..] {
        if c.spectrum.quality_cmp(&best.spectrum) == Ordering::Less {
            best = c;
        }
    }
    Ok(DsoResult {
        best: best.clone(),
        candidates,
    })
}

/// Gaussian tail probability.
pub fn q_function(x: f64) -> f64 {
    0.5 * statrs::function::erf::erfc(x / std::f64::consts::SQRT_2)
}

/// Union bound on maximum-likelihood word error for BPSK/AWGN:
/// `sum_w A_w Q(sqrt(2 w R Eb/N0))`.
pub fn union_bound(spectrum: &WeightSpectrum, rate: f64, ebno_db: f64) -> f64 {
    let ebno = 10f64.powf(ebno_db / 10.0);
    spectrum
        .counts()
        .iter()
        .enumerate()
        .skip(1)
        .filter(|(_, &c)| c > 0)
        .map(|(w, &c)| c as f64 * q_function((2.0 * w as f64 * rate * ebno).sqrt()))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy() -> ConvCodeSpec {
        ConvCodeSpec::from_octal(&["7", "5"], 2).unwrap()
    }

    #[test]
    fn fast_weight_agrees_with_encoder() {
        let enc = CrcTbcc::new(
            &ConvCodeSpec::rate_fifth(),
            CrcSpec::by_name("tbcc-dso-11").ok(),
            32,
        )
        .unwrap();
        for x in [0u64, 1, 0xDEAD_BEEF, 0xFFFF_FFFF, 0x8000_0001] {
            assert_eq!(enc.weight(x), enc.encode(x).weight());
        }
    }

    #[test]
    fn zero_weight_appears_once() {
        let enc = CrcTbcc::new(&toy(), None, 6).unwrap();
        let s = weight_enumerator(&enc, 6).unwrap();
        assert_eq!(s.count(0), 1);
        assert_eq!(s.total(), 64);
    }

    #[test]
    fn refuses_large_enumerations() {
        let enc = CrcTbcc::new(&toy(), None, 25).unwrap();
        assert!(matches!(
            weight_enumerator(&enc, 25),
            Err(Error::TooLarge(_))
        ));
        assert!(dso_search(&toy(), 8, 20).is_err());
    }

    #[test]
    fn quality_ordering() {
        let a = WeightSpectrum::from_counts(vec![1, 0, 0, 2, 5]);
        let b = WeightSpectrum::from_counts(vec![1, 0, 1, 0, 0]);
        let c = WeightSpectrum::from_counts(vec![1, 0, 0, 3, 0]);
        assert_eq!(a.quality_cmp(&b), Ordering::Less);
        assert_eq!(a.quality_cmp(&c), Ordering::Less);
        assert_eq!(a.d_min(), Some(3));
        assert_eq!(a.quality_cmp(&a), Ordering::Equal);
    }

    #[test]
    fn crc_never_lowers_minimum_distance() {
        let bare = weight_enumerator(&CrcTbcc::new(&toy(), None, 8).unwrap(), 8).unwrap();
        let crc = CrcSpec::new(0b10011).unwrap();
        let cat = weight_enumerator(&CrcTbcc::new(&toy(), Some(crc), 8).unwrap(), 8).unwrap();
        // The concatenation is a subcode of the bare TBCC of length k + m.
        let bare_long = weight_enumerator(&CrcTbcc::new(&toy(), None, 12).unwrap(), 12).unwrap();
        assert!(cat.d_min().unwrap() >= bare_long.d_min().unwrap());
        assert!(bare.d_min().is_some());
    }

    #[test]
    fn ties_resolve_to_smallest_polynomial() {
        let mut saw_tie = false;
        for (m, k) in [(2, 4), (3, 4), (3, 6), (4, 5)] {
            let r = dso_search(&toy(), m, k).unwrap();
            let tied: Vec<u64> = r
                .candidates
                .iter()
                .filter(|c| c.spectrum == r.best.spectrum)
                .map(|c| c.crc.poly())
                .collect();
            saw_tie |= tied.len() > 1;
            assert_eq!(r.best.crc.poly(), tied[0]);
            assert!(r
                .candidates
                .iter()
                .all(|c| c.spectrum.quality_cmp(&r.best.spectrum) != Ordering::Less));
        }
        assert!(saw_tie, "no configuration produced a tie");
    }

    #[test]
    fn union_bound_decreases_with_snr() {
        let s = weight_enumerator(&CrcTbcc::new(&toy(), None, 8).unwrap(), 8).unwrap();
        let lo = union_bound(&s, 0.5, 2.0);
        let hi = union_bound(&s, 0.5, 6.0);
        assert!(hi < lo);
        assert!((q_function(0.0) - 0.5).abs() < 1e-15);
    }
}
