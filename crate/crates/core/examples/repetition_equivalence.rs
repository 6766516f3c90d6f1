//! Four-fold repetition decoded by LLR addition makes the same decisions as
//! the unrepeated code fed with averaged observations.
//!
//! ```bash
//! cargo run --release --example repetition_equivalence
//! ```

use listfec::adaptive::adaptive_decode;
use listfec::channel::{add_noise, demodulate_llr, modulate, trial_rng, ChannelParams};
use listfec::registry::Scheme;
use listfec::repetition::RepetitionMap;
use listfec::BitBlock;

fn main() -> listfec::Result<()> {
    let rep = Scheme::build("tbcc-575-623-727-561-753-r860", None, 32, None)?;
    let base = Scheme::build("tbcc-575-623-727-561-753", None, 32, None)?;
    // Per-copy noise for equal energy per message bit; averaging four
    // copies halves it.
    let s4 = ChannelParams::new(1.0, 32, 860).sigma();
    let mut same = 0;
    let trials = 500;
    for t in 0..trials {
        let mut rng = trial_rng(5, t);
        let msg = BitBlock::random(&mut rng, 32);
        let y = add_noise(&modulate(&rep.transmit(&msg)?), s4, &mut rng);
        let a = adaptive_decode(
            &rep.combine(&demodulate_llr(&y, s4))?,
            rep.decoder(),
            rep.crc(),
            64,
        )?;
        let ybar: Vec<f64> = (0..215)
            .map(|i| (0..4).map(|c| y[i + 215 * c]).sum::<f64>() / 4.0)
            .collect();
        let b = adaptive_decode(
            &demodulate_llr(&ybar, s4 / 2.0),
            base.decoder(),
            base.crc(),
            64,
        )?;
        same += usize::from(a.kind == b.kind);
    }
    println!("identical decisions: {same}/{trials}");

    let spread = RepetitionMap::spread(215, 864)?;
    let fives = spread.counts().iter().filter(|&&c| c == 5).count();
    println!("32/864 map: {} bits x4, {fives} bits x5", 215 - fives);
    Ok(())
}
