//! Independent reference implementations used as test oracles. Nothing here
//! calls into the codec or stats code it is checking.

#![allow(dead_code)]

use std::collections::HashMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RefPolicy {
    Ratio { window: u64, threshold: i64 },
    AtLimit,
}

/// (pointer, width, phrase length) for every emitted phrase.
pub type RefTrace = Vec<(u32, u32, u64)>;

/// Brute-force variable-width dictionary coder with phrases stored as whole
/// byte strings. Widths follow the counter rule "after each insertion, if
/// Index = 2^Length then Length++", capped at `limit`.
pub fn reference_encode(input: &[u8], limit: u32, policy: RefPolicy) -> RefTrace {
    let cap = 1u32 << limit;
    let fresh = || -> HashMap<Vec<u8>, u32> { (0..256u32).map(|b| (vec![b as u8], b)).collect() };
    let mut dict = fresh();
    let mut index = 256u32;
    let mut length = 9u32;
    let (mut win_bytes, mut win_bits) = (0u64, 0u64);
    let mut word: Vec<u8> = Vec::new();
    let mut out = Vec::new();

    let mut step = |word: &[u8],
                    next: Option<u8>,
                    dict: &mut HashMap<Vec<u8>, u32>,
                    index: &mut u32,
                    length: &mut u32,
                    out: &mut RefTrace| {
        out.push((dict[word], *length, word.len() as u64));
        let width = *length;
        let frozen = *index == cap;
        if !frozen {
            if let Some(s) = next {
                let mut w = word.to_vec();
                w.push(s);
                dict.insert(w, *index);
            }
            *index += 1;
            if *index == 1 << *length && *length < limit {
                *length += 1;
            }
        }
        let reset = match policy {
            RefPolicy::AtLimit => *index == cap,
            RefPolicy::Ratio { window, threshold } if frozen => {
                win_bytes += word.len() as u64;
                win_bits += u64::from(width);
                if win_bytes >= window {
                    let savings = 1000 - (1000 * win_bits / (8 * win_bytes)) as i64;
                    win_bytes = 0;
                    win_bits = 0;
                    savings < threshold
                } else {
                    false
                }
            }
            RefPolicy::Ratio { .. } => false,
        };
        if reset {
            *dict = fresh();
            *index = 256;
            *length = 9;
            win_bytes = 0;
            win_bits = 0;
        }
    };

    for &s in input {
        if word.is_empty() {
            word.push(s);
            continue;
        }
        let mut extended = word.clone();
        extended.push(s);
        if dict.contains_key(&extended) {
            word = extended;
        } else {
            step(&word, Some(s), &mut dict, &mut index, &mut length, &mut out);
            word = vec![s];
        }
    }
    if !word.is_empty() {
        step(&word, None, &mut dict, &mut index, &mut length, &mut out);
    }
    out
}

/// Packs (code, width) pairs MSB-first through a bit vector.
pub fn reference_pack(trace: &RefTrace) -> Vec<u8> {
    let mut bits: Vec<bool> = Vec::new();
    for &(code, width, _) in trace {
        for i in (0..width).rev() {
            bits.push((code >> i) & 1 == 1);
        }
    }
    bits.chunks(8)
        .map(|c| c.iter().enumerate().fold(0u8, |acc, (i, &b)| acc | (u8::from(b) << (7 - i))))
        .collect()
}

/// ln Gamma(dof/2) for integer `dof`, from the factorial and half-integer
/// product forms.
fn ln_gamma_half(dof: u32) -> f64 {
    if dof.is_multiple_of(2) {
        // Gamma(n) = (n-1)!
        (1..dof / 2).map(|k| (k as f64).ln()).sum()
    } else {
        // Gamma(n + 1/2) = sqrt(pi) * prod_{k=1..n} (k - 1/2)
        let n = dof / 2;
        0.5 * std::f64::consts::PI.ln() + (1..=n).map(|k| (k as f64 - 0.5).ln()).sum::<f64>()
    }
}

/// Upper tail of the chi-squared distribution by composite Simpson
/// integration of its density.
pub fn chi_square_tail_quadrature(statistic: f64, dof: u32) -> f64 {
    let a = f64::from(dof) / 2.0;
    let log_norm = a * 2f64.ln() + ln_gamma_half(dof);
    let density = |x: f64| {
        if x <= 0.0 {
            0.0
        } else {
            ((a - 1.0) * x.ln() - x / 2.0 - log_norm).exp()
        }
    };
    let upper = statistic.max(f64::from(dof)) + 2000.0;
    let n = 400_000usize;
    let h = (upper - statistic) / n as f64;
    let mut sum = density(statistic) + density(upper);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * density(statistic + i as f64 * h);
    }
    sum * h / 3.0
}
