use std::io::Write;

use super::schedule::Schedule;
use super::{bit_error, CodecError, CodecParams, Dictionary, Header};
use crate::bitio::BitWriter;
use crate::keystream::{derive_permutation, Generator, Key, Keystream};

const DRAIN_THRESHOLD: usize = 64 * 1024;

/// One emitted pointer, before enciphering.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TraceEntry {
    pub pointer: u32,
    pub width: u32,
    pub phrase_len: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EncodeSummary {
    pub plaintext_bytes: u64,
    pub codes: u64,
    pub payload_bits: u64,
    /// Plaintext offsets at which the dictionary was reset.
    pub resets: Vec<u64>,
    /// Present when tracing was requested with [`Encoder::with_trace`].
    pub trace: Option<Vec<TraceEntry>>,
}

/// Streaming encoder.
///
/// The container header carries the plaintext length, so it must be known
/// up front; [`finish`](Encoder::finish) fails if a different number of
/// bytes was supplied.
pub struct Encoder<W: Write> {
    out: W,
    bits: BitWriter,
    keystream: Generator,
    dict: Dictionary,
    schedule: Schedule,
    word: Option<u32>,
    word_len: u64,
    declared: u64,
    consumed: u64,
    emitted: u64,
    codes: u64,
    resets: Vec<u64>,
    trace: Option<Vec<TraceEntry>>,
}

impl<W: Write> Encoder<W> {
    /// Validates `params`, builds the keystream and writes the header.
    pub fn new(
        mut out: W,
        key: &Key,
        params: &CodecParams,
        plaintext_length: u64,
    ) -> Result<Self, CodecError> {
        params.validate()?;
        let keystream = Generator::new(params.generator, key)?;
        let base = if params.permute_initial {
            derive_permutation(key)
        } else {
            std::array::from_fn(|i| i as u8)
        };
        let header = Header {
            params: params.clone(),
            plaintext_length,
        };
        out.write_all(&header.to_bytes())?;
        Ok(Self {
            out,
            bits: BitWriter::new(),
            keystream,
            dict: Dictionary::new(base, params.capacity(), true),
            schedule: Schedule::new(params),
            word: None,
            word_len: 0,
            declared: plaintext_length,
            consumed: 0,
            emitted: 0,
            codes: 0,
            resets: Vec::new(),
            trace: None,
        })
    }

    /// Records every emitted pointer in the summary.
    pub fn with_trace(mut self) -> Self {
        self.trace = Some(Vec::new());
        self
    }

    pub fn dictionary(&self) -> &Dictionary {
        &self.dict
    }

    pub fn update(&mut self, data: &[u8]) -> Result<(), CodecError> {
        for &byte in data {
            match self.word {
                None => {
                    self.word = Some(self.dict.symbol_index(byte));
                    self.word_len = 1;
                }
                Some(word) => match self.dict.find(word, byte) {
                    Some(extended) => {
                        self.word = Some(extended);
                        self.word_len += 1;
                    }
                    None => {
                        self.emit(word, Some(byte))?;
                        self.word = Some(self.dict.symbol_index(byte));
                        self.word_len = 1;
                    }
                },
            }
        }
        self.consumed += data.len() as u64;
        if self.bits.pending_bytes() >= DRAIN_THRESHOLD {
            self.bits.drain_into(&mut self.out)?;
        }
        Ok(())
    }

    fn emit(&mut self, pointer: u32, next: Option<u8>) -> Result<(), CodecError> {
        let width = self.schedule.width();
        let code = pointer ^ self.keystream.next_bits(width);
        self.bits
            .write_code(code, width)
            .map_err(|e| bit_error(e, 0))?;
        self.codes += 1;
        self.emitted += self.word_len;
        if let Some(trace) = &mut self.trace {
            trace.push(TraceEntry {
                pointer,
                width,
                phrase_len: self.word_len,
            });
        }

        let step = self.schedule.advance(self.word_len, width);
        if let (Some(slot), Some(byte)) = (step.inserted, next) {
            let index = self.dict.insert(pointer, byte);
            debug_assert_eq!(index, slot);
        }
        if step.reset {
            self.dict.reset();
            self.resets.push(self.emitted);
        }
        Ok(())
    }

    /// Emits the pending phrase, pads the payload and returns the sink.
    pub fn finish(mut self) -> Result<(W, EncodeSummary), CodecError> {
        if self.consumed != self.declared {
            return Err(CodecError::LengthMismatch {
                declared: self.declared,
                actual: self.consumed,
            });
        }
        if let Some(word) = self.word.take() {
            self.emit(word, None)?;
        }
        let payload_bits = self.bits.bit_position();
        let tail = std::mem::take(&mut self.bits).finish();
        self.out.write_all(&tail)?;
        self.out.flush()?;
        Ok((
            self.out,
            EncodeSummary {
                plaintext_bytes: self.consumed,
                codes: self.codes,
                payload_bits,
                resets: self.resets,
                trace: self.trace,
            },
        ))
    }
}
