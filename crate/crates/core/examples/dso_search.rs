//! Distance-spectrum search for the best CRC of a small tail-biting code,
//! and the union bound it implies.
//!
//! ```bash
//! cargo run --release --example dso_search
//! ```

use listfec::spectrum::{dso_search, union_bound};
use listfec::tbcc::ConvCodeSpec;

fn main() -> listfec::Result<()> {
    let code = ConvCodeSpec::from_octal(&["7", "5"], 2)?;
    let k = 8;
    for m in 2..=5 {
        let r = dso_search(&code, m, k)?;
        let s = &r.best.spectrum;
        let d = s.d_min().unwrap_or(0);
        let rate = k as f64 / (2 * (k + m)) as f64;
        println!(
            "m={m} best={:#X} d_min={d} A_dmin={} union bound at 4 dB {:.3e}",
            r.best.crc.poly(),
            s.count(d),
            union_bound(s, rate, 4.0)
        );
    }
    Ok(())
}
