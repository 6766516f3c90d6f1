//! BPSK over AWGN with energy accounted per message bit.
//!
//! Random streams are ChaCha8 keyed by the run seed with the trial index as
//! the stream id, so trial `i` sees the same randomness regardless of how
//! trials are scheduled. Gaussian samples come from `rand_distr`'s
//! `StandardNormal` (ziggurat); the lockfile pins its version.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::bits::{BitBlock, LlrVector};

/// Identifies the random-number pipeline in run manifests.
pub const RNG_ALGORITHM: &str =
    "chacha8(seed_from_u64(seed), stream=trial)+rand_distr-0.5-ziggurat";

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChannelParams {
    pub ebno_db: f64,
    /// Message bits carrying the energy (CRC bits excluded).
    pub k_message: usize,
    /// Channel uses per codeword.
    pub n_transmit: usize,
}

impl ChannelParams {
    pub fn new(ebno_db: f64, k_message: usize, n_transmit: usize) -> Self {
        ChannelParams {
            ebno_db,
            k_message,
            n_transmit,
        }
    }

    pub fn rate(&self) -> f64 {
        self.k_message as f64 / self.n_transmit as f64
    }

    /// Noise standard deviation for unit-energy symbols:
    /// `sqrt(1 / (2 R Eb/N0))`. Infinite `ebno_db` gives zero.
    pub fn sigma(&self) -> f64 {
        let ebno = 10f64.powf(self.ebno_db / 10.0);
        (1.0 / (2.0 * self.rate() * ebno)).sqrt()
    }
}

/// Per-trial random stream.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Bit 0 maps to +1, bit 1 to -1.
pub fn modulate(bits: &BitBlock) -> Vec<f64> {
    bits.iter()
        .map(|b| if b == 0 { 1.0 } else { -1.0 })
        .collect()
}

pub fn add_noise<R: Rng + ?Sized>(symbols: &[f64], sigma: f64, rng: &mut R) -> Vec<f64> {
    if sigma == 0.0 {
        return symbols.to_vec();
    }
    symbols
        .iter()
        .map(|&x| {
            let z: f64 = rng.sample(StandardNormal);
            x + sigma * z
        })
        .collect()
}

/// `2 y / sigma^2`. A noiseless channel (`sigma == 0`) is demodulated with
/// unit variance so LLRs stay finite; decoders only rank by them.
pub fn demodulate_llr(y: &[f64], sigma: f64) -> LlrVector {
    let s2 = if sigma == 0.0 { 1.0 } else { sigma * sigma };
    y.iter().map(|&v| 2.0 * v / s2).collect()
}
