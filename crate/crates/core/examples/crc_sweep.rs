//! TFR, UER and erasure rate as the DSO CRC degree grows, at one Eb/N0.
//! The full-size run is `listfec sweep-crc --ebno 2.5 --lmax 2048`.
//!
//! ```bash
//! cargo run --release --example crc_sweep
//! ```

use listfec::harness::{sweep_crc_length, SimConfig};

fn main() -> listfec::Result<()> {
    let mut cfg = SimConfig::new("tbcc-575-623-727-561-753", vec![1.5], 64, 3);
    cfg.min_failures = 40;
    cfg.max_trials = 20_000;
    for r in sweep_crc_length(&cfg, &[8, 10, 12, 14, 16])? {
        println!(
            "m={:>2} trials={:>6} uer={:.2e} erasure={:.2e} tfr={:.2e}",
            r.m,
            r.trials,
            r.uer(),
            r.erasure_rate(),
            r.tfr()
        );
    }
    Ok(())
}
