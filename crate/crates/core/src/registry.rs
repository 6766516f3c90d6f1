//! Named codes and the end-to-end scheme built from a code id, a CRC and a
//! message length.
//!
//! A [`Scheme`] owns the whole bit pipeline: message, CRC word, base
//! codeword, repetition expansion on the way out, and LLR combining plus
//! list decoding on the way back.

use std::fmt;

use crate::adaptive::ListDecoder;
use crate::bits::BitBlock;
use crate::crc::{CrcSpec, CRC_REGISTRY};
use crate::error::{Error, Result};
use crate::list_viterbi::TbccListDecoder;
use crate::polar::{PolarListDecoder, PolarSpec};
use crate::repetition::RepetitionMap;
use crate::tbcc::{ConvCodeSpec, TBCC_RATE_FIFTH_ID};

/// Message bits per codeword.
pub const DEFAULT_K_MESSAGE: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InnerCode {
    /// The rate-1/5, memory-8 tail-biting code.
    TbccRateFifth,
    /// The rate-1/2 (7, 5) memory-2 tail-biting code, for desk-scale checks.
    TbccToy,
    /// The 512-bit 5G polar code carrying message plus CRC.
    Polar512,
}

/// How the base codeword is stretched onto the channel.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Repetition {
    None,
    /// Every bit the same number of times.
    Uniform(u32),
    /// Copies spread evenly over the codeword to reach a transmit length.
    Spread(usize),
    /// The first bits sent twice (5G subset repetition).
    Prefix(usize),
}

#[derive(Clone, Copy, Debug)]
pub struct CodeEntry {
    pub id: &'static str,
    pub inner: InnerCode,
    pub repetition: Repetition,
    pub default_crc: Option<&'static str>,
    pub summary: &'static str,
}

pub const CODE_REGISTRY: &[CodeEntry] = &[
    CodeEntry {
        id: TBCC_RATE_FIFTH_ID,
        inner: InnerCode::TbccRateFifth,
        repetition: Repetition::None,
        default_crc: Some("tbcc-dso-11"),
        summary: "rate-1/5 v=8 TBCC, 5(32+m) coded bits",
    },
    CodeEntry {
        id: "tbcc-575-623-727-561-753-r860",
        inner: InnerCode::TbccRateFifth,
        repetition: Repetition::Uniform(4),
        default_crc: Some("tbcc-dso-11"),
        summary: "rate-1/5 TBCC with every coded bit sent 4 times (860 bits at m=11)",
    },
    CodeEntry {
        id: "tbcc-575-623-727-561-753-r864",
        inner: InnerCode::TbccRateFifth,
        repetition: Repetition::Spread(864),
        default_crc: Some("tbcc-dso-11"),
        summary: "rate-1/5 TBCC repeated to 864 bits (211 bits x4, 4 bits x5 at m=11)",
    },
    CodeEntry {
        id: "tbcc-7-5",
        inner: InnerCode::TbccToy,
        repetition: Repetition::None,
        default_crc: None,
        summary: "rate-1/2 v=2 (7,5) TBCC for small experiments",
    },
    CodeEntry {
        id: "5g-pbch-polar-m24",
        inner: InnerCode::Polar512,
        repetition: Repetition::Prefix(352),
        default_crc: Some("5g-crc24c"),
        summary: "512-bit 5G polar, K=56, first 352 bits repeated to 864",
    },
    CodeEntry {
        id: "5g-pbch-polar-m11-5g",
        inner: InnerCode::Polar512,
        repetition: Repetition::Prefix(352),
        default_crc: Some("5g-crc11"),
        summary: "512-bit 5G polar, K=43 with the 5G CRC11, repeated to 864",
    },
    CodeEntry {
        id: "5g-pbch-polar-m11-bk",
        inner: InnerCode::Polar512,
        repetition: Repetition::Prefix(352),
        default_crc: Some("bk-crc11"),
        summary: "512-bit 5G polar, K=43 with an alternative CRC11, repeated to 864",
    },
    CodeEntry {
        id: "5g-pbch-polar-m12-bk",
        inner: InnerCode::Polar512,
        repetition: Repetition::Prefix(352),
        default_crc: Some("bk-crc12"),
        summary: "512-bit 5G polar, K=44 with an alternative CRC12, repeated to 864",
    },
];

pub fn code_entry(id: &str) -> Result<&'static CodeEntry> {
    CODE_REGISTRY
        .iter()
        .find(|e| e.id == id)
        .ok_or_else(|| Error::UnknownId(id.to_string()))
}

/// Resolves a CRC given by registry id or by hex polynomial (`0x...`).
pub fn resolve_crc(id: &str) -> Result<CrcSpec> {
    match id.strip_prefix("0x").or_else(|| id.strip_prefix("0X")) {
        Some(hex) => {
            let poly = u64::from_str_radix(hex, 16).map_err(|e| {
                Error::config("crc", format!("`{id}` is not a hex polynomial: {e}"))
            })?;
            CrcSpec::new(poly)
        }
        None => CrcSpec::by_name(id),
    }
}

/// Every registered CRC id with its polynomial.
pub fn crc_ids() -> impl Iterator<Item = (&'static str, u64)> {
    CRC_REGISTRY.iter().copied()
}

pub fn conv_code(inner: InnerCode) -> Option<ConvCodeSpec> {
    match inner {
        InnerCode::TbccRateFifth => Some(ConvCodeSpec::rate_fifth()),
        InnerCode::TbccToy => Some(ConvCodeSpec::from_octal(&["7", "5"], 2).expect("valid code")),
        InnerCode::Polar512 => None,
    }
}

enum Encoder {
    Conv(ConvCodeSpec),
    Polar(PolarSpec),
}

/// Message -> CRC -> inner code -> repetition, and the matching receiver.
pub struct Scheme {
    code_id: String,
    crc: CrcSpec,
    crc_id: String,
    k_message: usize,
    encoder: Encoder,
    repetition: RepetitionMap,
    decoder: Box<dyn ListDecoder>,
}

impl fmt::Debug for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Scheme")
            .field("code_id", &self.code_id)
            .field("crc", &self.crc)
            .field("k_message", &self.k_message)
            .field("base_len", &self.base_len())
            .field("transmit_len", &self.transmit_len())
            .finish()
    }
}

impl Scheme {
    /// `crc_id` falls back to the code's default CRC; `repetition` replaces
    /// the code's built-in repetition rule when given.
    pub fn build(
        code_id: &str,
        crc_id: Option<&str>,
        k_message: usize,
        repetition: Option<RepetitionMap>,
    ) -> Result<Self> {
        let entry = code_entry(code_id)?;
        let crc_id = crc_id
            .or(entry.default_crc)
            .ok_or_else(|| Error::config("crc", format!("code `{code_id}` has no default CRC")))?;
        let crc = resolve_crc(crc_id)?;
        if k_message == 0 {
            return Err(Error::config("k_message", "must be positive"));
        }
        let k = k_message + crc.degree();
        if k > 64 {
            return Err(Error::config(
                "k_message",
                format!("message plus CRC is {k} bits, more than 64"),
            ));
        }
        let (encoder, decoder): (Encoder, Box<dyn ListDecoder>) = match conv_code(entry.inner) {
            Some(conv) => {
                let dec = TbccListDecoder::new(&conv, k)?;
                (Encoder::Conv(conv), Box::new(dec))
            }
            None => {
                let spec = PolarSpec::nr_512(k)?;
                (
                    Encoder::Polar(spec.clone()),
                    Box::new(PolarListDecoder::new(spec)),
                )
            }
        };
        let base_len = decoder.llr_len();
        let repetition = match repetition {
            Some(map) => {
                if map.base_len() != base_len {
                    return Err(Error::config(
                        "repetition_map",
                        format!("{} entries for a {base_len}-bit codeword", map.base_len()),
                    ));
                }
                map
            }
            None => match entry.repetition {
                Repetition::None => RepetitionMap::identity(base_len),
                Repetition::Uniform(t) => RepetitionMap::uniform(base_len, t)?,
                Repetition::Spread(n) => RepetitionMap::spread(base_len, n)?,
                Repetition::Prefix(p) => RepetitionMap::prefix(base_len, p)?,
            },
        };
        Ok(Scheme {
            code_id: code_id.to_string(),
            crc,
            crc_id: crc_id.to_string(),
            k_message,
            encoder,
            repetition,
            decoder,
        })
    }

    pub fn code_id(&self) -> &str {
        &self.code_id
    }

    pub fn crc(&self) -> &CrcSpec {
        &self.crc
    }

    pub fn crc_id(&self) -> &str {
        &self.crc_id
    }

    pub fn k_message(&self) -> usize {
        self.k_message
    }

    /// Length of the base codeword.
    pub fn base_len(&self) -> usize {
        self.decoder.llr_len()
    }

    /// Channel uses per message.
    pub fn transmit_len(&self) -> usize {
        self.repetition.transmit_len()
    }

    pub fn repetition(&self) -> &RepetitionMap {
        &self.repetition
    }

    pub fn decoder(&self) -> &dyn ListDecoder {
        self.decoder.as_ref()
    }

    /// Base codeword of a message.
    pub fn encode(&self, message: &BitBlock) -> Result<BitBlock> {
        if message.len() != self.k_message {
            return Err(Error::InvalidArgument(format!(
                "{}-bit message for a {}-bit scheme",
                message.len(),
                self.k_message
            )));
        }
        let word = self.crc.encode(message);
        match &self.encoder {
            Encoder::Conv(c) => c.encode(&word),
            Encoder::Polar(p) => p.encode(&word),
        }
    }

    /// Bits put on the channel for a message.
    pub fn transmit(&self, message: &BitBlock) -> Result<BitBlock> {
        self.repetition.expand(&self.encode(message)?)
    }

    /// Collapses per-transmission LLRs onto the base codeword.
    pub fn combine(&self, llrs: &[f64]) -> Result<Vec<f64>> {
        self.repetition.combine(llrs)
    }
}
