//! Shared inputs for the criterion benches.

use lzvernam::corpus::{english_text, random_bytes};

pub const SIZES: &[usize] = &[16 * 1024, 256 * 1024, 1024 * 1024];

/// (label, data) pairs covering text, incompressible and highly repetitive input.
pub fn inputs(len: usize) -> Vec<(&'static str, Vec<u8>)> {
    vec![
        ("text", english_text(len, 0xBE_4C)),
        ("random", random_bytes(len, 0xBE_4C)),
        ("runs", b"0123456789abcdef".iter().cycle().take(len).copied().collect()),
    ]
}
