//! Encode a CRC-protected message with the rate-1/5 tail-biting code and
//! confirm the tail-biting and cyclic-shift properties.
//!
//! ```bash
//! cargo run --example tbcc_encode
//! ```

use listfec::crc::CrcSpec;
use listfec::tbcc::ConvCodeSpec;
use listfec::BitBlock;

fn main() -> listfec::Result<()> {
    let code = ConvCodeSpec::rate_fifth();
    let crc = CrcSpec::by_name("tbcc-dso-11")?;
    let input = crc.encode(&BitBlock::from_word(0x1234_5678, 32));
    let cw = code.encode(&input)?;
    println!(
        "generators (octal): {:?}",
        code.generators()
            .iter()
            .map(|g| format!("{g:o}"))
            .collect::<Vec<_>>()
    );
    println!(
        "input {} bits -> codeword {} bits, weight {}",
        input.len(),
        cw.len(),
        cw.weight()
    );
    println!("start state = end state = {:#04x}", code.tail_state(&input));

    // A one-bit cyclic shift of the input shifts the codeword by c bits.
    let shifted = code.encode(&input.rotate_left(1))?;
    println!(
        "cyclic shift covariant: {}",
        shifted == cw.rotate_left(code.outputs())
    );
    Ok(())
}
