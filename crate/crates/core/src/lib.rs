//! Compress-and-encipher in a single pass.
//!
//! An LZ78/LZW growing-dictionary coder emits variable-width pointers, and
//! each pointer is XORed with keystream bits (a Vernam cipher) before it is
//! packed. Decoding replays the same dictionary, width schedule and reset
//! decisions from the recovered pointers.
//!
//! ```
//! use lzvernam::{decode, encode, CodecParams, Key};
//!
//! let key = Key::new(b"correct horse".to_vec()).unwrap();
//! let container = encode(b"abababababab", &key, &CodecParams::default()).unwrap();
//! assert_eq!(decode(&container, &key).unwrap(), b"abababababab");
//! ```
//!
//! The [`stats`] module holds the randomness checks used to look at the
//! enciphered payload.

pub mod bitio;
pub mod codec;
pub mod corpus;
pub mod keystream;
pub mod stats;

pub use codec::{
    decode, encode, width_of, CodecError, CodecParams, Container, DecodeSummary, Decoder,
    EncodeSummary, Encoder, Header, ResetPolicy,
};
pub use keystream::{derive_permutation, Generator, GeneratorKind, Key, KeyError, Keystream};
pub use stats::{chi_square_uniform, fips_battery, histogram, FipsReport, Histogram256, StatsError};
