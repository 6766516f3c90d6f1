//! CRC-aided decoding with a doubling list size: how large the list grew
//! and how each trial was classified.
//!
//! ```bash
//! cargo run --release --example adaptive_decode
//! ```

use listfec::adaptive::{adaptive_decode, classify};
use listfec::channel::{add_noise, demodulate_llr, modulate, trial_rng, ChannelParams};
use listfec::registry::Scheme;
use listfec::BitBlock;

fn main() -> listfec::Result<()> {
    for code in ["tbcc-575-623-727-561-753", "5g-pbch-polar-m11-bk"] {
        let scheme = Scheme::build(code, None, 32, None)?;
        let sigma = ChannelParams::new(1.0, 32, scheme.transmit_len()).sigma();
        println!("{code} with {}:", scheme.crc_id());
        for t in 0..8 {
            let mut rng = trial_rng(3, t);
            let msg = BitBlock::random(&mut rng, 32);
            let y = add_noise(&modulate(&scheme.transmit(&msg)?), sigma, &mut rng);
            let llrs = scheme.combine(&demodulate_llr(&y, sigma))?;
            let out = adaptive_decode(&llrs, scheme.decoder(), scheme.crc(), 256)?;
            println!(
                "  trial {t}: L={:>3} {:?} in {:?}",
                out.list_size_used(),
                classify(&out, &msg),
                out.decode_time
            );
        }
    }
    Ok(())
}
