//! Container layout, all integers big-endian:
//!
//! ```text
//! offset size field
//!      0    4 magic "CCX1"
//!      4    1 version (1)
//!      5    1 generator kind (0 zero, 1 lfsr32, 2 rc4)
//!      6    1 flags (bit 0 permute initial, bit 1 reset at limit)
//!      7    1 max width
//!      8    4 ratio window
//!     12    2 savings threshold, per-mille
//!     14    8 plaintext length
//!     22    - payload
//! ```
//!
//! The header is never enciphered.

use std::io::{self, Read};

use super::{CodecError, CodecParams, ResetPolicy};
use crate::keystream::GeneratorKind;

pub const MAGIC: [u8; 4] = *b"CCX1";
pub const VERSION: u8 = 1;
pub const HEADER_LEN: usize = 22;

const FLAG_PERMUTE: u8 = 1 << 0;
const FLAG_RESET_AT_LIMIT: u8 = 1 << 1;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Header {
    pub params: CodecParams,
    pub plaintext_length: u64,
}

impl Header {
    pub fn to_bytes(&self) -> [u8; HEADER_LEN] {
        let p = &self.params;
        let mut flags = 0;
        if p.permute_initial {
            flags |= FLAG_PERMUTE;
        }
        if p.reset_policy == ResetPolicy::ResetAtLimit {
            flags |= FLAG_RESET_AT_LIMIT;
        }
        let mut out = [0u8; HEADER_LEN];
        out[0..4].copy_from_slice(&MAGIC);
        out[4] = VERSION;
        out[5] = p.generator as u8;
        out[6] = flags;
        out[7] = p.max_width as u8;
        out[8..12].copy_from_slice(&p.ratio_window.to_be_bytes());
        out[12..14].copy_from_slice(&p.savings_threshold.to_be_bytes());
        out[14..22].copy_from_slice(&self.plaintext_length.to_be_bytes());
        out
    }

    pub fn parse(bytes: &[u8]) -> Result<Self, CodecError> {
        if bytes.len() < HEADER_LEN {
            return Err(CodecError::Format(format!(
                "header needs {HEADER_LEN} bytes, got {}",
                bytes.len()
            )));
        }
        if bytes[0..4] != MAGIC {
            return Err(CodecError::Format("bad magic".into()));
        }
        if bytes[4] != VERSION {
            return Err(CodecError::Format(format!("unsupported version {}", bytes[4])));
        }
        let generator = GeneratorKind::from_byte(bytes[5])
            .ok_or_else(|| CodecError::Format(format!("unknown generator kind {}", bytes[5])))?;
        let flags = bytes[6];
        if flags & !(FLAG_PERMUTE | FLAG_RESET_AT_LIMIT) != 0 {
            return Err(CodecError::Format(format!("unknown flags {flags:#04x}")));
        }
        let params = CodecParams {
            max_width: u32::from(bytes[7]),
            reset_policy: if flags & FLAG_RESET_AT_LIMIT != 0 {
                ResetPolicy::ResetAtLimit
            } else {
                ResetPolicy::RatioMonitor
            },
            ratio_window: u32::from_be_bytes(bytes[8..12].try_into().unwrap()),
            savings_threshold: u16::from_be_bytes(bytes[12..14].try_into().unwrap()),
            permute_initial: flags & FLAG_PERMUTE != 0,
            generator,
        };
        params
            .validate()
            .map_err(|e| CodecError::Format(e.to_string()))?;
        Ok(Header {
            params,
            plaintext_length: u64::from_be_bytes(bytes[14..22].try_into().unwrap()),
        })
    }

    pub fn read_from<R: Read>(source: &mut R) -> Result<Self, CodecError> {
        let mut buf = [0u8; HEADER_LEN];
        let mut filled = 0;
        while filled < HEADER_LEN {
            match source.read(&mut buf[filled..]) {
                Ok(0) => break,
                Ok(n) => filled += n,
                Err(e) if e.kind() == io::ErrorKind::Interrupted => {}
                Err(e) => return Err(e.into()),
            }
        }
        Self::parse(&buf[..filled])
    }
}

/// Header plus the packed, enciphered pointer payload.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Container {
    pub header: Header,
    pub payload: Vec<u8>,
}

impl Container {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(HEADER_LEN + self.payload.len());
        out.extend_from_slice(&self.header.to_bytes());
        out.extend_from_slice(&self.payload);
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, CodecError> {
        let header = Header::parse(bytes)?;
        Ok(Container {
            header,
            payload: bytes[HEADER_LEN..].to_vec(),
        })
    }

    /// Size of the serialized container in bytes.
    pub fn encoded_len(&self) -> usize {
        HEADER_LEN + self.payload.len()
    }
}
