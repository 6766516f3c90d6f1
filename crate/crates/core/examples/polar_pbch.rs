//! The 5G PBCH polar chain: CRC, n=512 polar transform, 864-bit rate
//! matching, SC and SC-list decoding.
//!
//! ```bash
//! cargo run --release --example polar_pbch
//! ```

use listfec::channel::{add_noise, demodulate_llr, modulate, trial_rng, ChannelParams};
use listfec::crc::CrcSpec;
use listfec::polar::{sc_decode, scl_decode, PolarSpec, RateMatchSpec};
use listfec::BitBlock;

fn main() -> listfec::Result<()> {
    let crc = CrcSpec::by_name("5g-crc24c")?;
    let spec = PolarSpec::nr_512(56)?;
    let rm = RateMatchSpec::PBCH;
    let mut rng = trial_rng(2, 0);
    let info = crc.encode(&BitBlock::random(&mut rng, 32));
    let tx = rm.rate_match(&spec.encode(&info)?)?;
    println!(
        "K={} frozen={} transmitted={}",
        spec.k(),
        spec.num_frozen(),
        tx.len()
    );

    let sigma = ChannelParams::new(0.0, 32, tx.len()).sigma();
    let llrs = rm.llr_combine(&demodulate_llr(
        &add_noise(&modulate(&tx), sigma, &mut rng),
        sigma,
    ))?;
    let sc = sc_decode(&llrs, &spec)?;
    println!("SC: crc {} correct {}", crc.check(&sc)?, sc == info);
    for c in scl_decode(&llrs, &spec, 8)? {
        println!(
            "SCL penalty {:>8.3} crc {} correct {}",
            c.metric,
            crc.check(&c.info)?,
            c.info == info
        );
    }
    Ok(())
}
