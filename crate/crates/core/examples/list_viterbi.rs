//! Ranked candidate list from the parallel list Viterbi decoder on one noisy
//! observation.
//!
//! ```bash
//! cargo run --release --example list_viterbi
//! ```

use listfec::channel::{add_noise, demodulate_llr, modulate, trial_rng, ChannelParams};
use listfec::crc::CrcSpec;
use listfec::list_viterbi::lva_decode;
use listfec::tbcc::{ConvCodeSpec, Trellis};
use listfec::BitBlock;

fn main() -> listfec::Result<()> {
    let code = ConvCodeSpec::rate_fifth();
    let trellis = Trellis::build(&code);
    let crc = CrcSpec::by_name("tbcc-dso-11")?;
    let mut rng = trial_rng(1, 0);
    let input = crc.encode(&BitBlock::random(&mut rng, 32));
    let sigma = ChannelParams::new(1.0, 32, 215).sigma();
    let llrs = demodulate_llr(
        &add_noise(&modulate(&code.encode(&input)?), sigma, &mut rng),
        sigma,
    );

    for c in lva_decode(&llrs, &trellis, 8)? {
        println!(
            "metric {:>9.3} start {:#04x} crc {} sent {}",
            c.metric,
            c.start_state,
            if crc.check_word(c.message, 43) {
                "pass"
            } else {
                "fail"
            },
            c.message == input.to_word()
        );
    }
    Ok(())
}
