//! CRC-aided decoding with a doubling list size.
//!
//! Decoding starts at list size 1. The decoder's candidates are CRC-checked
//! best first and the first one that passes is accepted. If none passes the
//! list size doubles and decoding restarts from scratch, until the maximum
//! list size has also failed, which is an erasure.

use std::time::{Duration, Instant};

use crate::bits::BitBlock;
use crate::crc::CrcSpec;
use crate::error::{Error, Result};

/// A candidate information word (message followed by CRC), packed MSB-first.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Candidate {
    pub word: u64,
    /// Larger is more likely; only the ordering is meaningful across
    /// decoders.
    pub score: f64,
    /// No word outside the list outscores this one. Uncertified candidates
    /// follow all certified ones.
    pub certified: bool,
}

/// A list decoder for one code: consumes per-bit LLRs and returns candidate
/// information words, best first.
pub trait ListDecoder: Send + Sync {
    /// Number of LLRs expected per codeword.
    fn llr_len(&self) -> usize;

    /// Bits per candidate word.
    fn info_len(&self) -> usize;

    fn decode_list(&self, llrs: &[f64], list_size: usize) -> Result<Vec<Candidate>>;
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecodeKind {
    Decoded {
        message: BitBlock,
        list_size_used: usize,
    },
    Erasure {
        list_size_used: usize,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecodeOutcome {
    pub kind: DecodeKind,
    /// Wall clock of the whole doubling loop.
    pub decode_time: Duration,
}

impl DecodeOutcome {
    pub fn list_size_used(&self) -> usize {
        match self.kind {
            DecodeKind::Decoded { list_size_used, .. } | DecodeKind::Erasure { list_size_used } => {
                list_size_used
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TrialClass {
    Correct,
    UndetectedError,
    Erasure,
}

/// Result of the doubling loop without timing; the decoded word is the full
/// CRC word.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AdaptiveHit {
    pub candidate: Option<Candidate>,
    pub list_size_used: usize,
}

fn validate(decoder: &dyn ListDecoder, crc: &CrcSpec, llrs: &[f64], l_max: usize) -> Result<()> {
    if l_max == 0 || !l_max.is_power_of_two() {
        return Err(Error::InvalidArgument(format!(
            "maximum list size {l_max} is not a power of two >= 1"
        )));
    }
    if decoder.info_len() <= crc.degree() {
        return Err(Error::config(
            "crc",
            format!(
                "decoder words of {} bits cannot hold a degree-{} CRC and a message",
                decoder.info_len(),
                crc.degree()
            ),
        ));
    }
    if llrs.len() != decoder.llr_len() {
        return Err(Error::InvalidArgument(format!(
            "{} LLRs for a decoder expecting {}",
            llrs.len(),
            decoder.llr_len()
        )));
    }
    Ok(())
}

/// Runs the doubling loop and returns the accepted CRC word, if any.
pub fn adaptive_search(
    llrs: &[f64],
    decoder: &dyn ListDecoder,
    crc: &CrcSpec,
    l_max: usize,
) -> Result<AdaptiveHit> {
    validate(decoder, crc, llrs, l_max)?;
    let len = decoder.info_len();
    let mut list_size = 1;
    loop {
        let last = list_size >= l_max;
        let candidates = decoder.decode_list(llrs, list_size)?;
        let hit = candidates.into_iter().find(|c| crc.check_word(c.word, len));
        // An uncertified hit may be beaten by a word a larger list would
        // reveal; it is accepted only when no larger list remains.
        if let Some(c) = hit.filter(|c| c.certified || last) {
            return Ok(AdaptiveHit {
                candidate: Some(c),
                list_size_used: list_size,
            });
        }
        if last {
            return Ok(AdaptiveHit {
                candidate: None,
                list_size_used: list_size,
            });
        }
        list_size *= 2;
    }
}

/// Timed doubling-list decode returning the message part of the accepted
/// word.
pub fn adaptive_decode(
    llrs: &[f64],
    decoder: &dyn ListDecoder,
    crc: &CrcSpec,
    l_max: usize,
) -> Result<DecodeOutcome> {
    let t0 = Instant::now();
    let hit = adaptive_search(llrs, decoder, crc, l_max)?;
    let decode_time = t0.elapsed();
    let k_message = decoder.info_len() - crc.degree();
    let kind = match hit.candidate {
        Some(c) => DecodeKind::Decoded {
            message: BitBlock::from_word(c.word >> crc.degree(), k_message),
            list_size_used: hit.list_size_used,
        },
        None => DecodeKind::Erasure {
            list_size_used: hit.list_size_used,
        },
    };
    Ok(DecodeOutcome { kind, decode_time })
}

pub fn classify(outcome: &DecodeOutcome, transmitted: &BitBlock) -> TrialClass {
    match &outcome.kind {
        DecodeKind::Decoded { message, .. } if message == transmitted => TrialClass::Correct,
        DecodeKind::Decoded { .. } => TrialClass::UndetectedError,
        DecodeKind::Erasure { .. } => TrialClass::Erasure,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Returns a fixed candidate list regardless of input, truncated to the
    /// list size. The last `lag` entries of each list are uncertified.
    struct Scripted {
        words: Vec<u64>,
        len: usize,
        lag: usize,
    }

    impl ListDecoder for Scripted {
        fn llr_len(&self) -> usize {
            4
        }

        fn info_len(&self) -> usize {
            self.len
        }

        fn decode_list(&self, _llrs: &[f64], list_size: usize) -> Result<Vec<Candidate>> {
            Ok(self
                .words
                .iter()
                .take(list_size)
                .enumerate()
                .map(|(i, &w)| Candidate {
                    word: w,
                    score: -(i as f64),
                    certified: i + self.lag < list_size,
                })
                .collect())
        }
    }

    fn crc() -> CrcSpec {
        CrcSpec::new(0b1011).unwrap()
    }

    #[test]
    fn stops_at_first_list_with_a_passing_candidate() {
        let c = crc();
        let good = c.encode_word(0b10110, 5);
        let dec = Scripted {
            words: vec![1, 2, good, c.encode_word(0b00001, 5)],
            len: 8,
            lag: 0,
        };
        let out = adaptive_decode(&[0.0; 4], &dec, &c, 8).unwrap();
        assert_eq!(
            out.kind,
            DecodeKind::Decoded {
                message: BitBlock::from_word(0b10110, 5),
                list_size_used: 4
            }
        );
        assert_eq!(
            classify(&out, &BitBlock::from_word(0b10110, 5)),
            TrialClass::Correct
        );
        assert_eq!(
            classify(&out, &BitBlock::from_word(0b10111, 5)),
            TrialClass::UndetectedError
        );
    }

    #[test]
    fn uncertified_hit_doubles_unless_the_list_is_maximal() {
        let c = crc();
        let good = c.encode_word(0b10110, 5);
        let dec = Scripted {
            words: vec![1, good, 2, 3],
            len: 8,
            lag: 1,
        };
        let hit = adaptive_search(&[0.0; 4], &dec, &c, 8).unwrap();
        assert_eq!(hit.list_size_used, 4);
        assert!(hit.candidate.is_some_and(|h| h.word == good && h.certified));
        let hit = adaptive_search(&[0.0; 4], &dec, &c, 2).unwrap();
        assert_eq!(hit.list_size_used, 2);
        assert!(hit
            .candidate
            .is_some_and(|h| h.word == good && !h.certified));
    }

    #[test]
    fn erasure_at_maximum_list() {
        let dec = Scripted {
            words: vec![1, 2, 3, 5, 6, 7],
            len: 8,
            lag: 0,
        };
        let out = adaptive_decode(&[0.0; 4], &dec, &crc(), 4).unwrap();
        assert_eq!(out.kind, DecodeKind::Erasure { list_size_used: 4 });
        assert_eq!(classify(&out, &BitBlock::zeros(5)), TrialClass::Erasure);
        assert_eq!(out.list_size_used(), 4);
    }

    #[test]
    fn configuration_errors() {
        let dec = Scripted {
            words: vec![],
            len: 3,
            lag: 0,
        };
        assert!(adaptive_decode(&[0.0; 4], &dec, &crc(), 4).is_err());
        let dec = Scripted {
            words: vec![],
            len: 8,
            lag: 0,
        };
        assert!(adaptive_decode(&[0.0; 4], &dec, &crc(), 3).is_err());
        assert!(adaptive_decode(&[0.0; 5], &dec, &crc(), 4).is_err());
    }
}
