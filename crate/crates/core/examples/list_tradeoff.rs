//! TFR against mean decode time as the maximum list size grows, TBCC and
//! polar side by side on shared noise.
//!
//! ```bash
//! cargo run --release --example list_tradeoff
//! ```

use listfec::harness::{sweep_list_size, SimConfig};

fn main() -> listfec::Result<()> {
    for code in ["tbcc-575-623-727-561-753-r864", "5g-pbch-polar-m11-bk"] {
        let mut cfg = SimConfig::new(code, vec![1.0], 1, 4);
        cfg.min_failures = u64::MAX;
        cfg.max_trials = 3_000;
        println!("{code}");
        for r in sweep_list_size(&cfg, &[1, 4, 16, 64, 256])? {
            println!(
                "  Lmax={:>4} tfr={:.3e} mean_list={:>6.2} mean_ms={:.3}",
                r.l_max,
                r.tfr(),
                r.mean_list(),
                r.timing.mean_ms()
            );
        }
    }
    Ok(())
}
