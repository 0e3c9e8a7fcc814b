use super::{CodecParams, ResetPolicy, FIRST_PHRASE, INITIAL_WIDTH};

/// Pointer width for the `k`-th phrase emitted since the last reset.
///
/// Equivalent to starting at 9 bits and incrementing whenever the next free
/// index reaches `2^width`, capped at `max_width`.
pub fn width_of(k: u64, max_width: u32) -> u32 {
    // ceil(log2(257 + k))
    let n = 257 + k;
    let ceil_log2 = 64 - (n - 1).leading_zeros();
    ceil_log2.clamp(INITIAL_WIDTH, max_width)
}

/// `1000 - 1000 * bits_out / (8 * bytes_in)` in integer arithmetic.
/// Negative when the output is larger than the input.
pub fn savings_per_mille(bytes_in: u64, bits_out: u64) -> i64 {
    if bytes_in == 0 {
        return 0;
    }
    1000 - ((1000 * bits_out as u128) / (8 * bytes_in as u128)) as i64
}

/// Plaintext and payload counters for the current window.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RatioMonitor {
    pub window_bytes_in: u64,
    pub window_bits_out: u64,
}

impl RatioMonitor {
    fn clear(&mut self) {
        *self = Self::default();
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Step {
    /// Slot assigned to the entry learned from this emission.
    pub inserted: Option<u32>,
    pub reset: bool,
}

/// Counters shared verbatim by encoder and decoder: next free index,
/// phrases since reset, and the ratio monitor.
#[derive(Debug, Clone)]
pub(crate) struct Schedule {
    max_width: u32,
    capacity: u32,
    policy: ResetPolicy,
    window: u64,
    threshold: i64,
    next_index: u32,
    phrases: u64,
    monitor: RatioMonitor,
}

impl Schedule {
    pub fn new(params: &CodecParams) -> Self {
        Self {
            max_width: params.max_width,
            capacity: params.capacity(),
            policy: params.reset_policy,
            window: u64::from(params.ratio_window),
            threshold: i64::from(params.savings_threshold),
            next_index: FIRST_PHRASE,
            phrases: 0,
            monitor: RatioMonitor::default(),
        }
    }

    pub fn width(&self) -> u32 {
        width_of(self.phrases, self.max_width)
    }

    pub fn next_index(&self) -> u32 {
        self.next_index
    }

    pub fn is_frozen(&self) -> bool {
        self.next_index == self.capacity
    }

    /// Accounts for one emitted pointer of `width` bits covering
    /// `phrase_len` plaintext bytes.
    pub fn advance(&mut self, phrase_len: u64, width: u32) -> Step {
        let was_frozen = self.is_frozen();
        let inserted = if was_frozen {
            None
        } else {
            self.next_index += 1;
            Some(self.next_index - 1)
        };
        self.phrases += 1;

        let reset = match self.policy {
            ResetPolicy::ResetAtLimit => self.is_frozen(),
            ResetPolicy::RatioMonitor if was_frozen => {
                self.monitor.window_bytes_in += phrase_len;
                self.monitor.window_bits_out += u64::from(width);
                if self.monitor.window_bytes_in >= self.window {
                    let savings = savings_per_mille(
                        self.monitor.window_bytes_in,
                        self.monitor.window_bits_out,
                    );
                    self.monitor.clear();
                    savings < self.threshold
                } else {
                    false
                }
            }
            ResetPolicy::RatioMonitor => false,
        };
        if reset {
            self.next_index = FIRST_PHRASE;
            self.phrases = 0;
            self.monitor.clear();
        }
        Step { inserted, reset }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn width_examples() {
        assert_eq!(width_of(0, 12), 9);
        assert_eq!(width_of(255, 12), 9);
        assert_eq!(width_of(256, 12), 10);
        assert_eq!(width_of(1_000_000_000, 12), 12);
        assert_eq!(width_of(u64::MAX - 257, 20), 20);
    }

    #[test]
    fn width_matches_counter_replay() {
        // Index = 256, Length = 9; after each insertion, if Index = 2^Length
        // then Length++ (capped).
        for max in 10..=16 {
            let mut index = 256u64;
            let mut length = 9u32;
            for k in 0..70_000u64 {
                assert_eq!(width_of(k, max), length, "k={k} max={max}");
                index += 1;
                if index == 1 << length && length < max {
                    length += 1;
                }
            }
        }
    }

    #[test]
    fn savings_formula() {
        assert_eq!(savings_per_mille(100, 400), 500);
        assert_eq!(savings_per_mille(100, 800), 0);
        assert_eq!(savings_per_mille(100, 1200), -500);
        assert_eq!(savings_per_mille(3, 7), 709);
        assert_eq!(savings_per_mille(0, 0), 0);
    }

    #[test]
    fn reset_at_limit_never_freezes() {
        let params = CodecParams {
            max_width: 10,
            reset_policy: ResetPolicy::ResetAtLimit,
            ..CodecParams::default()
        };
        let mut s = Schedule::new(&params);
        for _ in 0..767 {
            let step = s.advance(1, s.width());
            assert!(!step.reset);
        }
        assert_eq!(s.next_index(), 1023);
        let step = s.advance(1, s.width());
        assert_eq!(step, Step { inserted: Some(1023), reset: true });
        assert_eq!(s.next_index(), 256);
        assert_eq!(s.width(), 9);
    }

    #[test]
    fn monitor_only_counts_while_frozen() {
        let params = CodecParams {
            max_width: 10,
            ratio_window: 10,
            savings_threshold: 50,
            ..CodecParams::default()
        };
        let mut s = Schedule::new(&params);
        for _ in 0..768 {
            assert!(!s.advance(100, s.width()).reset);
        }
        assert!(s.is_frozen());
        assert_eq!(s.monitor, RatioMonitor::default());
        // 10 bytes in 10 bits: 875 per-mille saved, no reset
        let step = s.advance(10, 10);
        assert_eq!(step, Step { inserted: None, reset: false });
        // 5 + 5 bytes in 20 bits then a window of 1-byte phrases at 10 bits
        assert!(!s.advance(5, 10).reset);
        assert_eq!(s.monitor.window_bytes_in, 5);
        assert!(!s.advance(5, 10).reset);
        for _ in 0..9 {
            assert!(!s.advance(1, 10).reset);
        }
        assert!(s.advance(1, 10).reset);
        assert_eq!(s.next_index(), 256);
        assert!(!s.is_frozen());
    }
}
