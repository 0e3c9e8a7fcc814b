//! MSB-first packing of variable-width unsigned codes.
//!
//! Codes are written most significant bit first and concatenated left to
//! right; the final partial byte is padded with zero bits.

use std::io::{self, Read, Write};

use thiserror::Error;

/// Widest code either side accepts.
pub const MAX_CODE_WIDTH: u32 = 32;

#[derive(Debug, Error)]
pub enum BitError {
    #[error("code width {0} outside 1..=32")]
    InvalidWidth(u32),
    #[error("code {code} does not fit in {width} bits")]
    CodeTooWide { code: u32, width: u32 },
    #[error("end of stream: {wanted} bits requested, {available} available")]
    EndOfStream { wanted: u32, available: u32 },
    #[error(transparent)]
    Io(#[from] io::Error),
}

fn check_width(width: u32) -> Result<(), BitError> {
    if width == 0 || width > MAX_CODE_WIDTH {
        return Err(BitError::InvalidWidth(width));
    }
    Ok(())
}

/// Accumulates codes into a growable byte buffer.
#[derive(Debug, Default)]
pub struct BitWriter {
    buffer: Vec<u8>,
    // Fewer than 8 bits are held here between calls.
    acc: u64,
    acc_bits: u32,
    bit_position: u64,
}

impl BitWriter {
    pub fn new() -> Self {
        Self::default()
    }

    /// Total bits accepted since creation.
    pub fn bit_position(&self) -> u64 {
        self.bit_position
    }

    /// Appends the low `width` bits of `code`, most significant first.
    pub fn write_code(&mut self, code: u32, width: u32) -> Result<(), BitError> {
        check_width(width)?;
        if width < 32 && code >> width != 0 {
            return Err(BitError::CodeTooWide { code, width });
        }
        self.acc = (self.acc << width) | u64::from(code);
        self.acc_bits += width;
        while self.acc_bits >= 8 {
            self.acc_bits -= 8;
            self.buffer.push((self.acc >> self.acc_bits) as u8);
        }
        self.acc &= (1 << self.acc_bits) - 1;
        self.bit_position += u64::from(width);
        Ok(())
    }

    /// Moves every completed byte into `out`, keeping the partial byte.
    pub fn drain_into<W: Write>(&mut self, out: &mut W) -> io::Result<()> {
        out.write_all(&self.buffer)?;
        self.buffer.clear();
        Ok(())
    }

    /// Bytes completed but not yet drained.
    pub fn pending_bytes(&self) -> usize {
        self.buffer.len()
    }

    /// Zero-pads the last partial byte and returns the buffer.
    pub fn finish(mut self) -> Vec<u8> {
        if self.acc_bits > 0 {
            self.buffer.push((self.acc << (8 - self.acc_bits)) as u8);
        }
        self.buffer
    }
}

/// Reads codes back out of any byte source, MSB first.
///
/// Slices implement [`Read`], so `BitReader::new(&bytes[..])` reads from
/// memory; wrap files in a `BufReader`.
#[derive(Debug)]
pub struct BitReader<R> {
    source: R,
    acc: u64,
    acc_bits: u32,
    bit_position: u64,
}

impl<R: Read> BitReader<R> {
    pub fn new(source: R) -> Self {
        Self {
            source,
            acc: 0,
            acc_bits: 0,
            bit_position: 0,
        }
    }

    /// Bits consumed by `read_code` so far.
    pub fn bit_position(&self) -> u64 {
        self.bit_position
    }

    pub fn read_code(&mut self, width: u32) -> Result<u32, BitError> {
        check_width(width)?;
        while self.acc_bits < width {
            match self.next_byte()? {
                Some(byte) => {
                    self.acc = (self.acc << 8) | u64::from(byte);
                    self.acc_bits += 8;
                }
                None => {
                    return Err(BitError::EndOfStream {
                        wanted: width,
                        available: self.acc_bits,
                    })
                }
            }
        }
        self.acc_bits -= width;
        let code = (self.acc >> self.acc_bits) as u32 & mask(width);
        self.acc &= (1 << self.acc_bits) - 1;
        self.bit_position += u64::from(width);
        Ok(code)
    }

    fn next_byte(&mut self) -> io::Result<Option<u8>> {
        let mut byte = [0u8; 1];
        loop {
            match self.source.read(&mut byte) {
                Ok(0) => return Ok(None),
                Ok(_) => return Ok(Some(byte[0])),
                Err(e) if e.kind() == io::ErrorKind::Interrupted => continue,
                Err(e) => return Err(e),
            }
        }
    }
}

/// Low `width` bits set; `width` in 1..=32.
#[inline]
pub(crate) fn mask(width: u32) -> u32 {
    u32::MAX >> (32 - width)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn packed(codes: &[(u32, u32)]) -> Vec<u8> {
        let mut w = BitWriter::new();
        for &(code, width) in codes {
            w.write_code(code, width).unwrap();
        }
        w.finish()
    }

    #[test]
    fn three_bit_code_is_left_aligned() {
        let mut w = BitWriter::new();
        w.write_code(0b101, 3).unwrap();
        assert_eq!(w.bit_position(), 3);
        assert_eq!(w.finish(), vec![0b1010_0000]);
    }

    // Pack by concatenating binary strings; independent of the writer.
    fn packed_by_string(codes: &[(u32, u32)]) -> Vec<u8> {
        let mut bits: String = codes
            .iter()
            .map(|&(c, w)| format!("{c:0width$b}", width = w as usize))
            .collect();
        while !bits.len().is_multiple_of(8) {
            bits.push('0');
        }
        (0..bits.len())
            .step_by(8)
            .map(|i| u8::from_str_radix(&bits[i..i + 8], 2).unwrap())
            .collect()
    }

    #[test]
    fn two_nine_bit_codes() {
        // 00110000 1|0011000 10|000000
        let expected = packed_by_string(&[(97, 9), (98, 9)]);
        assert_eq!(expected, vec![0x30, 0x98, 0x80]);
        assert_eq!(packed(&[(97, 9), (98, 9)]), expected);
    }

    #[test]
    fn all_ones_nine_bits() {
        assert_eq!(packed(&[(511, 9)]), vec![0xFF, 0x80]);
    }

    #[test]
    fn finish_lengths() {
        assert!(BitWriter::new().finish().is_empty());
        assert_eq!(packed(&[(1, 9)]).len(), 2);
        assert_eq!(packed(&[(1, 9), (3, 7)]).len(), 2);
    }

    #[test]
    fn full_width_code() {
        let bytes = packed(&[(u32::MAX, 32), (1, 1)]);
        assert_eq!(bytes, vec![0xFF, 0xFF, 0xFF, 0xFF, 0x80]);
        let mut r = BitReader::new(&bytes[..]);
        assert_eq!(r.read_code(32).unwrap(), u32::MAX);
        assert_eq!(r.read_code(1).unwrap(), 1);
    }

    #[test]
    fn rejects_oversized_code_and_bad_width() {
        let mut w = BitWriter::new();
        assert!(matches!(
            w.write_code(512, 9),
            Err(BitError::CodeTooWide { code: 512, width: 9 })
        ));
        assert!(matches!(w.write_code(0, 0), Err(BitError::InvalidWidth(0))));
        assert!(matches!(w.write_code(0, 33), Err(BitError::InvalidWidth(33))));
        assert_eq!(w.bit_position(), 0);
    }

    #[test]
    fn reads_back_hand_packed_codes() {
        let src = [0x30u8, 0x98, 0x80];
        let mut r = BitReader::new(&src[..]);
        assert_eq!(r.read_code(9).unwrap(), 97);
        assert_eq!(r.read_code(9).unwrap(), 98);
        assert_eq!(r.bit_position(), 18);

        let src = [0xFFu8, 0x80];
        assert_eq!(BitReader::new(&src[..]).read_code(9).unwrap(), 511);
    }

    #[test]
    fn short_source_is_end_of_stream() {
        let src = [0xAB];
        let mut r = BitReader::new(&src[..]);
        assert!(matches!(
            r.read_code(9),
            Err(BitError::EndOfStream { wanted: 9, .. })
        ));
    }

    #[test]
    fn drain_keeps_partial_byte() {
        let mut w = BitWriter::new();
        w.write_code(0x1FF, 9).unwrap();
        let mut out = Vec::new();
        w.drain_into(&mut out).unwrap();
        assert_eq!(out, vec![0xFF]);
        w.write_code(0, 7).unwrap();
        w.drain_into(&mut out).unwrap();
        assert_eq!(out, vec![0xFF, 0x80]);
        assert!(w.finish().is_empty());
    }

    fn schedule() -> impl Strategy<Value = Vec<(u32, u32)>> {
        prop::collection::vec(
            (1u32..=16).prop_flat_map(|w| (0..(1u32 << w), Just(w))),
            0..200,
        )
    }

    proptest! {
        #[test]
        fn round_trip(codes in schedule()) {
            let bytes = packed(&codes);
            prop_assert_eq!(&bytes, &packed_by_string(&codes));
            let bits: u64 = codes.iter().map(|&(_, w)| u64::from(w)).sum();
            prop_assert_eq!(bytes.len() as u64, bits.div_ceil(8));
            let mut r = BitReader::new(&bytes[..]);
            for &(code, width) in &codes {
                prop_assert_eq!(r.read_code(width).unwrap(), code);
            }
            prop_assert!(r.bit_position() <= 8 * bytes.len() as u64);
            // pad bits are zero
            let pad = (8 - bits % 8) % 8;
            if pad > 0 {
                prop_assert_eq!(r.read_code(pad as u32).unwrap(), 0);
            }
        }
    }
}
