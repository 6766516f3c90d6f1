//! Attach and check CRCs from the built-in registry.
//!
//! ```bash
//! cargo run --example crc
//! ```

use listfec::crc::CrcSpec;
use listfec::registry::crc_ids;
use listfec::BitBlock;

fn main() -> listfec::Result<()> {
    let message = BitBlock::from_word(0xC0FF_EE42, 32);
    for (name, poly) in crc_ids() {
        let crc = CrcSpec::by_name(name)?;
        let word = crc.encode(&message);
        let mut corrupted = word.clone();
        corrupted.flip(7);
        println!(
            "{name:<12} poly={poly:#X} m={:>2} remainder={} ok={} corrupted_ok={}",
            crc.degree(),
            crc.remainder(&message),
            crc.check(&word)?,
            crc.check(&corrupted)?
        );
    }
    Ok(())
}
