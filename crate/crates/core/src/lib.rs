//! CRC-aided list decoding of short messages.
//!
//! The crate covers two concatenated schemes for 32-bit messages: a CRC with
//! the 5G PBCH polar code (512 coded bits, repeated up to 864) decoded by
//! successive-cancellation list decoding, and a CRC with a rate-1/5
//! tail-biting convolutional code decoded from an exact list of its best
//! tail-biting codewords; a single-pass parallel list Viterbi decoder is
//! provided alongside. Both schemes run inside the same doubling-list-size
//! loop, and the [`harness`] measures erasure, undetected-error and total
//! failure rates over BPSK/AWGN.

pub mod adaptive;
pub mod bits;
pub mod bounds;
pub mod channel;
pub mod cli;
pub mod crc;
pub mod error;
pub mod harness;
pub mod list_viterbi;
pub mod manifest;
pub mod polar;
pub mod registry;
pub mod repetition;
pub mod spectrum;
pub mod tb_search;
pub mod tbcc;

pub use bits::{BitBlock, LlrVector};
pub use error::{Error, Result};
