//! Keyed pseudo-random bit sources for the Vernam XOR.
//!
//! Every generator is deterministic in its key and hands out bits MSB-first,
//! so drawing 9 then 9 bits yields the same stream as drawing 18 at once.

use std::fmt;

use thiserror::Error;

use crate::bitio::mask;

pub const MAX_KEY_LEN: usize = 256;

/// Domain-separation byte prepended to the key when deriving the initial
/// dictionary permutation.
const PERMUTATION_DOMAIN: u8 = 0x50;

/// Feedback mask for x^32 + x^22 + x^2 + x + 1.
const LFSR32_TAPS: u32 = (1 << 22) | (1 << 2) | (1 << 1) | 1;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum KeyError {
    #[error("key is empty")]
    Empty,
    #[error("key is {0} bytes, at most 256 allowed")]
    TooLong(usize),
    #[error("key seeds the LFSR with an all-zero register")]
    ZeroLfsrSeed,
}

/// Secret key material, 1 to 256 bytes.
#[derive(Clone, PartialEq, Eq)]
pub struct Key(Vec<u8>);

impl Key {
    pub fn new(bytes: impl Into<Vec<u8>>) -> Result<Self, KeyError> {
        let bytes = bytes.into();
        match bytes.len() {
            0 => Err(KeyError::Empty),
            n if n > MAX_KEY_LEN => Err(KeyError::TooLong(n)),
            _ => Ok(Key(bytes)),
        }
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }
}

impl fmt::Debug for Key {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Key({} bytes)", self.0.len())
    }
}

/// Which generator backs the keystream. The discriminant is the byte stored
/// in container headers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum GeneratorKind {
    /// Emits only zero bits; exposes the bare compressor.
    Zero = 0,
    Lfsr32 = 1,
    Rc4 = 2,
}

impl GeneratorKind {
    pub fn from_byte(byte: u8) -> Option<Self> {
        match byte {
            0 => Some(Self::Zero),
            1 => Some(Self::Lfsr32),
            2 => Some(Self::Rc4),
            _ => None,
        }
    }
}

/// A source of keystream bits.
pub trait Keystream {
    /// Next `width` bits (1..=32) packed MSB-first.
    fn next_bits(&mut self, width: u32) -> u32;
}

/// Fibonacci LFSR over up to 32 cells.
///
/// Cell 0 holds the oldest bit `a(n)` and is the output; the feedback bit
/// `a(n + degree)` is the parity of the tapped cells and enters at the top.
/// Taps are the low-order coefficients of the characteristic polynomial,
/// so x^4 + x^3 + 1 has taps `0b1001`.
#[derive(Debug, Clone)]
pub struct Lfsr {
    register: u32,
    degree: u32,
    taps: u32,
}

impl Lfsr {
    /// The 32-bit generator with polynomial x^32 + x^22 + x^2 + x + 1.
    pub fn lfsr32(seed: u32) -> Result<Self, KeyError> {
        Self::with_polynomial(32, LFSR32_TAPS, seed)
    }

    pub fn with_polynomial(degree: u32, taps: u32, seed: u32) -> Result<Self, KeyError> {
        assert!((1..=32).contains(&degree), "LFSR degree must be 1..=32");
        let register = seed & mask(degree);
        if register == 0 {
            return Err(KeyError::ZeroLfsrSeed);
        }
        Ok(Self {
            register,
            degree,
            taps: taps & mask(degree),
        })
    }

    pub fn register(&self) -> u32 {
        self.register
    }

    #[inline]
    pub fn step(&mut self) -> u32 {
        let out = self.register & 1;
        let feedback = (self.register & self.taps).count_ones() & 1;
        self.register = (self.register >> 1) | (feedback << (self.degree - 1));
        out
    }
}

impl Keystream for Lfsr {
    fn next_bits(&mut self, width: u32) -> u32 {
        (0..width).fold(0, |acc, _| (acc << 1) | self.step())
    }
}

/// Plain RC4 (no initial drop).
#[derive(Clone)]
pub struct Rc4 {
    s: [u8; 256],
    i: u8,
    j: u8,
}

impl Rc4 {
    /// Runs the key schedule. Accepts any non-empty key length.
    pub fn new(key: &[u8]) -> Self {
        assert!(!key.is_empty(), "RC4 key must be non-empty");
        let mut s: [u8; 256] = std::array::from_fn(|i| i as u8);
        let mut j: u8 = 0;
        for i in 0..256 {
            j = j.wrapping_add(s[i]).wrapping_add(key[i % key.len()]);
            s.swap(i, j as usize);
        }
        Self { s, i: 0, j: 0 }
    }

    #[inline]
    pub fn next_byte(&mut self) -> u8 {
        self.i = self.i.wrapping_add(1);
        self.j = self.j.wrapping_add(self.s[self.i as usize]);
        self.s.swap(self.i as usize, self.j as usize);
        let t = self.s[self.i as usize].wrapping_add(self.s[self.j as usize]);
        self.s[t as usize]
    }

    pub fn state(&self) -> &[u8; 256] {
        &self.s
    }
}

impl fmt::Debug for Rc4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Rc4").finish_non_exhaustive()
    }
}

/// RC4 bytes sliced into arbitrary-width requests.
#[derive(Debug, Clone)]
pub struct Rc4Bits {
    cipher: Rc4,
    acc: u64,
    acc_bits: u32,
}

impl Rc4Bits {
    pub fn new(key: &[u8]) -> Self {
        Self {
            cipher: Rc4::new(key),
            acc: 0,
            acc_bits: 0,
        }
    }
}

impl Keystream for Rc4Bits {
    fn next_bits(&mut self, width: u32) -> u32 {
        debug_assert!((1..=32).contains(&width));
        while self.acc_bits < width {
            self.acc = (self.acc << 8) | u64::from(self.cipher.next_byte());
            self.acc_bits += 8;
        }
        self.acc_bits -= width;
        let bits = (self.acc >> self.acc_bits) as u32 & mask(width);
        self.acc &= (1 << self.acc_bits) - 1;
        bits
    }
}

/// A keystream generator of any supported kind.
// one generator per stream, so the RC4 state stays inline
#[allow(clippy::large_enum_variant)]
#[derive(Debug, Clone)]
pub enum Generator {
    Zero,
    Lfsr32(Lfsr),
    Rc4(Rc4Bits),
}

impl Generator {
    /// Builds a generator of `kind` keyed by `key`.
    ///
    /// The LFSR register is the first four key bytes read big-endian, with
    /// missing bytes taken as zero. The zero generator ignores the key.
    pub fn new(kind: GeneratorKind, key: &Key) -> Result<Self, KeyError> {
        Ok(match kind {
            GeneratorKind::Zero => Generator::Zero,
            GeneratorKind::Lfsr32 => {
                let mut seed = [0u8; 4];
                let n = key.0.len().min(4);
                seed[..n].copy_from_slice(&key.0[..n]);
                Generator::Lfsr32(Lfsr::lfsr32(u32::from_be_bytes(seed))?)
            }
            GeneratorKind::Rc4 => Generator::Rc4(Rc4Bits::new(&key.0)),
        })
    }

    pub fn kind(&self) -> GeneratorKind {
        match self {
            Generator::Zero => GeneratorKind::Zero,
            Generator::Lfsr32(_) => GeneratorKind::Lfsr32,
            Generator::Rc4(_) => GeneratorKind::Rc4,
        }
    }
}

impl Keystream for Generator {
    #[inline]
    fn next_bits(&mut self, width: u32) -> u32 {
        match self {
            Generator::Zero => 0,
            Generator::Lfsr32(g) => g.next_bits(width),
            Generator::Rc4(g) => g.next_bits(width),
        }
    }
}

/// Key-dependent bijection on 0..=255.
///
/// Fisher-Yates from the top, with each swap index drawn from an RC4 stream
/// keyed on `0x50 || key`. Indices are sampled without modulo bias by
/// masking a keystream byte to the next power of two and rejecting
/// out-of-range draws.
pub fn derive_permutation(key: &Key) -> [u8; 256] {
    let mut seed = Vec::with_capacity(key.0.len() + 1);
    seed.push(PERMUTATION_DOMAIN);
    seed.extend_from_slice(&key.0);
    let mut rc4 = Rc4::new(&seed);

    let mut perm: [u8; 256] = std::array::from_fn(|i| i as u8);
    for i in (1..256usize).rev() {
        let bound_mask = (i + 1).next_power_of_two() - 1;
        let j = loop {
            let draw = rc4.next_byte() as usize & bound_mask;
            if draw <= i {
                break draw;
            }
        };
        perm.swap(i, j);
    }
    perm
}
