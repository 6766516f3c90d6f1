//! Single-pass LVA list next to the exact best-first tail-biting list for
//! one noisy codeword. Certified LVA entries agree with the exact list.
//!
//! ```bash
//! cargo run --release --example exact_tb_list
//! ```

use listfec::channel::{add_noise, demodulate_llr, modulate, trial_rng, ChannelParams};
use listfec::crc::CrcSpec;
use listfec::list_viterbi::lva_decode;
use listfec::tb_search::tb_list_decode;
use listfec::tbcc::{ConvCodeSpec, Trellis};
use listfec::BitBlock;

fn main() -> listfec::Result<()> {
    let code = ConvCodeSpec::rate_fifth();
    let trellis = Trellis::build(&code);
    let crc = CrcSpec::by_name("tbcc-dso-11")?;
    let mut rng = trial_rng(5, 0);
    let input = crc.encode(&BitBlock::random(&mut rng, 32));
    let sigma = ChannelParams::new(1.0, 32, 215).sigma();
    let llrs = demodulate_llr(
        &add_noise(&modulate(&code.encode(&input)?), sigma, &mut rng),
        sigma,
    );

    let l = 16;
    let single = lva_decode(&llrs, &trellis, l)?;
    let exact = tb_list_decode(&llrs, &trellis, l)?;
    println!("rank  single-pass LVA (certified)     exact list");
    for i in 0..l {
        let left = single.get(i).map_or("-".to_string(), |c| {
            format!("{:>9.3} {:>5}", c.metric, c.certified)
        });
        let right = exact.get(i).map_or("-".to_string(), |c| {
            format!("{:>9.3} sent={}", c.metric, c.message == input.to_word())
        });
        println!("{i:>4}  {left:<30}  {right}");
    }
    Ok(())
}
