//! Randomness checks for enciphered output: byte histogram, chi-squared
//! uniformity test and the FIPS 140-1 four-test battery.

use std::io::{self, Write};

use statrs::function::gamma::gamma_ur;
use thiserror::Error;

/// Smallest sample for which every chi-squared cell expects at least 5.
pub const CHI_SQUARE_MIN_TOTAL: u64 = 5 * 256;
pub const CHI_SQUARE_DOF: u32 = 255;

pub const FIPS_BITS: usize = 20_000;
const FIPS_BYTES: usize = FIPS_BITS / 8;

// FIPS 140-1 acceptance intervals.
const MONOBIT_OPEN: (u32, u32) = (9654, 10346);
const POKER_OPEN: (f64, f64) = (1.03, 57.4);
/// Closed intervals for runs of length 1, 2, 3, 4, 5 and 6+.
pub const RUN_INTERVALS: [(u32, u32); 6] = [
    (2267, 2733),
    (1079, 1421),
    (502, 748),
    (223, 402),
    (90, 223),
    (90, 223),
];
/// A run this long or longer fails the long-run test.
pub const LONG_RUN_LIMIT: u32 = 34;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StatsError {
    #[error("insufficient data: need {needed}, have {available}")]
    InsufficientData { needed: u64, available: u64 },
}

/// Byte-value counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Histogram256 {
    counts: [u64; 256],
    total: u64,
}

impl Default for Histogram256 {
    fn default() -> Self {
        Self {
            counts: [0; 256],
            total: 0,
        }
    }
}

impl Histogram256 {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_counts(counts: [u64; 256]) -> Self {
        Self {
            total: counts.iter().sum(),
            counts,
        }
    }

    pub fn add(&mut self, data: &[u8]) {
        for &b in data {
            self.counts[b as usize] += 1;
        }
        self.total += data.len() as u64;
    }

    pub fn counts(&self) -> &[u64; 256] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    fn require_data(&self) -> Result<(), StatsError> {
        if self.total == 0 {
            return Err(StatsError::InsufficientData {
                needed: 1,
                available: 0,
            });
        }
        Ok(())
    }

    /// Relative frequency of `byte`.
    pub fn frequency(&self, byte: u8) -> Result<f64, StatsError> {
        self.require_data()?;
        Ok(self.counts[byte as usize] as f64 / self.total as f64)
    }

    /// Ratio of the largest to the smallest count; infinite if a value
    /// never occurs.
    pub fn max_min_ratio(&self) -> Result<f64, StatsError> {
        self.require_data()?;
        let max = *self.counts.iter().max().unwrap();
        let min = *self.counts.iter().min().unwrap();
        Ok(max as f64 / min as f64)
    }

    /// Writes `byte,count,probability` rows under a header line.
    pub fn write_csv<W: Write>(&self, out: &mut W) -> io::Result<()> {
        writeln!(out, "byte,count,probability")?;
        for (byte, &count) in self.counts.iter().enumerate() {
            let p = if self.total == 0 {
                0.0
            } else {
                count as f64 / self.total as f64
            };
            writeln!(out, "{byte},{count},{p:.6}")?;
        }
        Ok(())
    }
}

pub fn histogram(data: &[u8]) -> Histogram256 {
    let mut h = Histogram256::new();
    h.add(data);
    h
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiSquareResult {
    pub statistic: f64,
    pub degrees_of_freedom: u32,
    /// Upper-tail probability of `statistic` under uniformity.
    pub p_value: f64,
}

/// Chi-squared test of `h` against the uniform distribution on 256 cells.
pub fn chi_square_uniform(h: &Histogram256) -> Result<ChiSquareResult, StatsError> {
    if h.total < CHI_SQUARE_MIN_TOTAL {
        return Err(StatsError::InsufficientData {
            needed: CHI_SQUARE_MIN_TOTAL,
            available: h.total,
        });
    }
    // sum (c - n/256)^2 / (n/256) = (256 * sum c^2 - n^2) / n, exact in integers
    let n = u128::from(h.total);
    let sum_sq: u128 = h.counts.iter().map(|&c| u128::from(c) * u128::from(c)).sum();
    let numerator = 256 * sum_sq - n * n;
    let statistic = numerator as f64 / n as f64;
    Ok(ChiSquareResult {
        statistic,
        degrees_of_freedom: CHI_SQUARE_DOF,
        p_value: chi_square_upper_tail(statistic, CHI_SQUARE_DOF),
    })
}

/// P(X >= statistic) for X chi-squared with `dof` degrees of freedom,
/// i.e. the regularized upper incomplete gamma Q(dof/2, statistic/2).
pub fn chi_square_upper_tail(statistic: f64, dof: u32) -> f64 {
    if statistic <= 0.0 {
        return 1.0;
    }
    gamma_ur(f64::from(dof) / 2.0, statistic / 2.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MonobitResult {
    pub ones: u32,
    pub pass: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PokerResult {
    pub statistic: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunsResult {
    /// Runs of zeros of length 1..=5 and 6+.
    pub zero_runs: [u32; 6],
    pub one_runs: [u32; 6],
    pub zero_pass: [bool; 6],
    pub one_pass: [bool; 6],
}

impl RunsResult {
    pub fn pass(&self) -> bool {
        self.zero_pass.iter().chain(&self.one_pass).all(|&p| p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LongRunResult {
    pub longest: u32,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FipsReport {
    pub monobit: MonobitResult,
    pub poker: PokerResult,
    pub runs: RunsResult,
    pub long_run: LongRunResult,
    pub overall: bool,
}

/// The first `FIPS_BITS` bits of `data`, MSB first within each byte.
fn leading_bits(data: &[u8]) -> Result<Vec<u8>, StatsError> {
    if data.len() < FIPS_BYTES {
        return Err(StatsError::InsufficientData {
            needed: FIPS_BITS as u64,
            available: 8 * data.len() as u64,
        });
    }
    Ok(data[..FIPS_BYTES]
        .iter()
        .flat_map(|&b| (0..8).rev().map(move |i| (b >> i) & 1))
        .collect())
}

/// Tallies maximal runs: `counts[bit][len]` is the number of runs of `bit`
/// with exactly `len` bits. Index 0 is unused.
pub fn run_length_counts(bits: &[u8]) -> [Vec<u32>; 2] {
    let mut counts = [vec![0u32; bits.len() + 1], vec![0u32; bits.len() + 1]];
    let mut iter = bits.iter();
    let Some(&first) = iter.next() else {
        return counts;
    };
    let (mut current, mut len) = (first, 1usize);
    for &b in iter {
        if b == current {
            len += 1;
        } else {
            counts[current as usize][len] += 1;
            current = b;
            len = 1;
        }
    }
    counts[current as usize][len] += 1;
    counts
}

/// Runs the monobit, poker, runs and long-run tests over the first 20,000
/// bits of `data`. Later bytes are ignored.
pub fn fips_battery(data: &[u8]) -> Result<FipsReport, StatsError> {
    let bits = leading_bits(data)?;

    let ones = bits.iter().map(|&b| u32::from(b)).sum::<u32>();
    let monobit = MonobitResult {
        ones,
        pass: MONOBIT_OPEN.0 < ones && ones < MONOBIT_OPEN.1,
    };

    let mut nibbles = [0u64; 16];
    for &byte in &data[..FIPS_BYTES] {
        nibbles[(byte >> 4) as usize] += 1;
        nibbles[(byte & 0xF) as usize] += 1;
    }
    let sum_sq: u64 = nibbles.iter().map(|f| f * f).sum();
    let statistic = (16 * sum_sq) as f64 / 5000.0 - 5000.0;
    let poker = PokerResult {
        statistic,
        pass: POKER_OPEN.0 < statistic && statistic < POKER_OPEN.1,
    };

    let tallies = run_length_counts(&bits);
    let bucket = |counts: &[u32]| -> [u32; 6] {
        let mut out = [0u32; 6];
        for (len, &c) in counts.iter().enumerate().skip(1) {
            out[len.min(6) - 1] += c;
        }
        out
    };
    let within = |runs: [u32; 6]| -> [bool; 6] {
        std::array::from_fn(|i| (RUN_INTERVALS[i].0..=RUN_INTERVALS[i].1).contains(&runs[i]))
    };
    let zero_runs = bucket(&tallies[0]);
    let one_runs = bucket(&tallies[1]);
    let runs = RunsResult {
        zero_runs,
        one_runs,
        zero_pass: within(zero_runs),
        one_pass: within(one_runs),
    };

    let longest = tallies
        .iter()
        .filter_map(|counts| counts.iter().rposition(|&c| c > 0))
        .max()
        .unwrap_or(0) as u32;
    let long_run = LongRunResult {
        longest,
        pass: longest < LONG_RUN_LIMIT,
    };

    let overall = monobit.pass && poker.pass && runs.pass() && long_run.pass;
    Ok(FipsReport {
        monobit,
        poker,
        runs,
        long_run,
        overall,
    })
}
