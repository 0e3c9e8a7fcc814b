//! One-pass compress-and-encipher codec.
//!
//! The encoder is an LZ78/LZW growing-dictionary coder whose emitted
//! pointers are XORed with keystream bits before packing. Pointers start at
//! 9 bits and widen as the dictionary grows, up to `max_width`. Once the
//! index space is exhausted the dictionary either freezes under a
//! compression-ratio monitor or is reset outright, depending on
//! [`ResetPolicy`].
//!
//! There are no reserved codes: pointers 0..=255 are the single-byte phrases
//! and every later index is a learned phrase. Both sides derive widths and
//! reset points from the same integer counters, so the decoder never needs
//! in-band signalling.

mod container;
mod decoder;
mod dictionary;
mod encoder;
mod schedule;

use std::io;

use thiserror::Error;

use crate::bitio::BitError;
use crate::keystream::{GeneratorKind, Key, KeyError};

pub use container::{Container, Header, HEADER_LEN, MAGIC, VERSION};
pub use decoder::{DecodeSummary, Decoder};
pub use dictionary::Dictionary;
pub use encoder::{EncodeSummary, Encoder, TraceEntry};
pub use schedule::{savings_per_mille, width_of, RatioMonitor};

/// Pointer width right after a (re)start.
pub const INITIAL_WIDTH: u32 = 9;
pub const MIN_MAX_WIDTH: u32 = 10;
pub const MAX_MAX_WIDTH: u32 = 20;
/// Number of single-byte phrases, and the first learned index.
pub const FIRST_PHRASE: u32 = 256;

#[derive(Debug, Error)]
pub enum CodecError {
    #[error("not a container: {0}")]
    Format(String),
    #[error("invalid codec parameters: {0}")]
    InvalidParams(String),
    #[error("corrupt stream at code {code_index}: pointer {pointer} with next index {next_index}")]
    BadPointer {
        code_index: u64,
        pointer: u32,
        next_index: u32,
    },
    #[error("corrupt stream at code {code_index}: phrase runs past the declared length")]
    Overrun { code_index: u64 },
    #[error("payload truncated after {bits_read} bits")]
    Truncated { bits_read: u64 },
    #[error("declared plaintext length {declared} but {actual} bytes were supplied")]
    LengthMismatch { declared: u64, actual: u64 },
    #[error(transparent)]
    Key(#[from] KeyError),
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl CodecError {
    /// True for errors caused by the stream contents rather than the caller.
    pub fn is_corrupt_stream(&self) -> bool {
        matches!(
            self,
            CodecError::Format(_)
                | CodecError::BadPointer { .. }
                | CodecError::Overrun { .. }
                | CodecError::Truncated { .. }
        )
    }
}

pub(crate) fn bit_error(err: BitError, bits_read: u64) -> CodecError {
    match err {
        BitError::EndOfStream { .. } => CodecError::Truncated { bits_read },
        BitError::Io(e) => CodecError::Io(e),
        other => unreachable!("codec requested an invalid code: {other}"),
    }
}

/// What happens once the index space at `max_width` is exhausted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ResetPolicy {
    /// Freeze the dictionary and restart it when a completed window of
    /// plaintext saves less than the configured threshold.
    #[default]
    RatioMonitor,
    /// Restart the dictionary as soon as it fills.
    ResetAtLimit,
}

/// Codec tunables. The initial width is always [`INITIAL_WIDTH`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodecParams {
    pub max_width: u32,
    pub reset_policy: ResetPolicy,
    /// Plaintext bytes per ratio-monitor window.
    pub ratio_window: u32,
    /// Minimum savings per window, in per-mille.
    pub savings_threshold: u16,
    pub permute_initial: bool,
    pub generator: GeneratorKind,
}

impl Default for CodecParams {
    fn default() -> Self {
        Self {
            max_width: 12,
            reset_policy: ResetPolicy::RatioMonitor,
            ratio_window: 4096,
            savings_threshold: 50,
            permute_initial: false,
            generator: GeneratorKind::Rc4,
        }
    }
}

impl CodecParams {
    pub fn validate(&self) -> Result<(), CodecError> {
        if !(MIN_MAX_WIDTH..=MAX_MAX_WIDTH).contains(&self.max_width) {
            return Err(CodecError::InvalidParams(format!(
                "max width {} outside {MIN_MAX_WIDTH}..={MAX_MAX_WIDTH}",
                self.max_width
            )));
        }
        if self.ratio_window == 0 {
            return Err(CodecError::InvalidParams("ratio window must be positive".into()));
        }
        if self.savings_threshold > 1000 {
            return Err(CodecError::InvalidParams(format!(
                "savings threshold {} exceeds 1000 per-mille",
                self.savings_threshold
            )));
        }
        Ok(())
    }

    /// Dictionary capacity, `2^max_width`.
    pub fn capacity(&self) -> u32 {
        1 << self.max_width
    }
}

/// Compresses and enciphers `input` in one pass.
pub fn encode(input: &[u8], key: &Key, params: &CodecParams) -> Result<Container, CodecError> {
    let header = Header {
        params: params.clone(),
        plaintext_length: input.len() as u64,
    };
    let mut encoder = Encoder::new(Vec::new(), key, params, input.len() as u64)?;
    encoder.update(input)?;
    let (bytes, _) = encoder.finish()?;
    Ok(Container {
        header,
        payload: bytes[HEADER_LEN..].to_vec(),
    })
}

/// Inverts [`encode`]. A wrong key usually surfaces as a corrupt-stream
/// error but may also yield garbage; there is no authentication.
pub fn decode(container: &Container, key: &Key) -> Result<Vec<u8>, CodecError> {
    let decoder = Decoder::with_header(container.header.clone(), &container.payload[..], key)?;
    let mut out = Vec::with_capacity(container.header.plaintext_length.min(1 << 26) as usize);
    decoder.decode_to(&mut out)?;
    Ok(out)
}
