use std::io::{Read, Write};

use super::schedule::Schedule;
use super::{bit_error, CodecError, Dictionary, Header};
use crate::bitio::BitReader;
use crate::keystream::{derive_permutation, Generator, Key, Keystream};

const OUTPUT_CHUNK: usize = 64 * 1024;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DecodeSummary {
    pub plaintext_bytes: u64,
    pub codes: u64,
    /// Plaintext offsets at which the dictionary was reset.
    pub resets: Vec<u64>,
}

/// Streaming decoder; mirrors the encoder's state machine one pointer behind.
pub struct Decoder<R: Read> {
    bits: BitReader<R>,
    header: Header,
    keystream: Generator,
    dict: Dictionary,
    schedule: Schedule,
}

impl<R: Read> Decoder<R> {
    /// Reads the header from `source`; the payload follows.
    pub fn new(mut source: R, key: &Key) -> Result<Self, CodecError> {
        let header = Header::read_from(&mut source)?;
        Self::with_header(header, source, key)
    }

    /// Decodes a payload whose header was parsed separately.
    pub fn with_header(header: Header, payload: R, key: &Key) -> Result<Self, CodecError> {
        let params = &header.params;
        params.validate()?;
        let keystream = Generator::new(params.generator, key)?;
        let base = if params.permute_initial {
            derive_permutation(key)
        } else {
            std::array::from_fn(|i| i as u8)
        };
        Ok(Self {
            bits: BitReader::new(payload),
            keystream,
            dict: Dictionary::new(base, params.capacity(), false),
            schedule: Schedule::new(params),
            header,
        })
    }

    pub fn header(&self) -> &Header {
        &self.header
    }

    /// Writes exactly `plaintext_length` bytes to `out`. On error, everything
    /// decoded before the failing pointer has already been written.
    pub fn decode_to<W: Write>(mut self, out: &mut W) -> Result<DecodeSummary, CodecError> {
        let mut buf = Vec::with_capacity(OUTPUT_CHUNK * 2);
        let mut summary = DecodeSummary::default();
        let result = self.run(out, &mut buf, &mut summary);
        out.write_all(&buf)?;
        out.flush()?;
        result.map(|()| summary)
    }

    fn run<W: Write>(
        &mut self,
        out: &mut W,
        buf: &mut Vec<u8>,
        summary: &mut DecodeSummary,
    ) -> Result<(), CodecError> {
        let total = self.header.plaintext_length;
        let mut produced = 0u64;
        let mut prev: Option<u32> = None;
        // Slot reserved by the previous pointer, filled once this pointer
        // reveals its first byte.
        let mut pending: Option<u32> = None;

        while produced < total {
            let width = self.schedule.width();
            let raw = self
                .bits
                .read_code(width)
                .map_err(|e| bit_error(e, self.bits.bit_position()))?;
            let pointer = raw ^ self.keystream.next_bits(width);
            let next_index = self.schedule.next_index();
            if pointer >= next_index {
                return Err(CodecError::BadPointer {
                    code_index: summary.codes,
                    pointer,
                    next_index,
                });
            }

            if let (Some(slot), Some(prev)) = (pending, prev) {
                let first = if pointer == slot {
                    // pointer names the entry being created: prev + prev[0]
                    self.dict.first_byte(prev)
                } else {
                    self.dict.first_byte(pointer)
                };
                let index = self.dict.insert(prev, first);
                debug_assert_eq!(index, slot);
            }

            let len = u64::from(self.dict.phrase_len(pointer));
            if produced + len > total {
                return Err(CodecError::Overrun {
                    code_index: summary.codes,
                });
            }
            self.dict.append_phrase(pointer, buf);
            produced += len;
            summary.codes += 1;

            let step = self.schedule.advance(len, width);
            if step.reset {
                self.dict.reset();
                prev = None;
                pending = None;
                summary.resets.push(produced);
            } else {
                prev = Some(pointer);
                pending = step.inserted;
            }

            if buf.len() >= OUTPUT_CHUNK {
                out.write_all(buf)?;
                buf.clear();
            }
        }
        summary.plaintext_bytes = produced;
        Ok(())
    }
}
