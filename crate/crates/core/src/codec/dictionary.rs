use rustc_hash::FxHashMap;

use super::FIRST_PHRASE;

#[derive(Debug, Clone, Copy)]
struct Entry {
    prefix: u32,
    len: u32,
    byte: u8,
    first: u8,
}

/// The growing phrase table.
///
/// Indices below 256 are single-byte phrases, index `i` standing for byte
/// `base[i]`. Learned entries are stored as (prefix index, byte) pairs in
/// insertion order. The encoder also keeps a hash from (prefix, byte) to
/// index; the decoder only walks prefixes and skips it.
#[derive(Debug, Clone)]
pub struct Dictionary {
    entries: Vec<Entry>,
    lookup: Option<FxHashMap<u32, u32>>,
    base: [u8; 256],
    inverse: [u8; 256],
    capacity: u32,
}

#[inline]
fn edge(prefix: u32, byte: u8) -> u32 {
    (prefix << 8) | u32::from(byte)
}

impl Dictionary {
    pub(crate) fn new(base: [u8; 256], capacity: u32, searchable: bool) -> Self {
        let mut inverse = [0u8; 256];
        for (i, &b) in base.iter().enumerate() {
            inverse[b as usize] = i as u8;
        }
        let learned = (capacity - FIRST_PHRASE) as usize;
        Self {
            entries: Vec::with_capacity(learned),
            lookup: searchable
                .then(|| FxHashMap::with_capacity_and_hasher(learned, Default::default())),
            base,
            inverse,
            capacity,
        }
    }

    /// Drops every learned phrase, keeping the base permutation.
    pub(crate) fn reset(&mut self) {
        self.entries.clear();
        if let Some(map) = &mut self.lookup {
            map.clear();
        }
    }

    /// Index of the next entry to be stored.
    pub fn next_index(&self) -> u32 {
        FIRST_PHRASE + self.entries.len() as u32
    }

    pub fn is_full(&self) -> bool {
        self.next_index() == self.capacity
    }

    /// Index of the single-byte phrase for `byte`.
    #[inline]
    pub fn symbol_index(&self, byte: u8) -> u32 {
        u32::from(self.inverse[byte as usize])
    }

    #[inline]
    pub fn find(&self, prefix: u32, byte: u8) -> Option<u32> {
        self.lookup
            .as_ref()
            .expect("dictionary built without lookup")
            .get(&edge(prefix, byte))
            .copied()
    }

    /// Stores `prefix + byte` at [`next_index`](Self::next_index).
    pub(crate) fn insert(&mut self, prefix: u32, byte: u8) -> u32 {
        debug_assert!(!self.is_full(), "insert into a frozen dictionary");
        debug_assert!(prefix < self.next_index());
        let index = self.next_index();
        self.entries.push(Entry {
            prefix,
            len: self.phrase_len(prefix) + 1,
            byte,
            first: self.first_byte(prefix),
        });
        if let Some(map) = &mut self.lookup {
            map.insert(edge(prefix, byte), index);
        }
        index
    }

    #[inline]
    pub fn first_byte(&self, index: u32) -> u8 {
        if index < FIRST_PHRASE {
            self.base[index as usize]
        } else {
            self.entries[(index - FIRST_PHRASE) as usize].first
        }
    }

    #[inline]
    pub fn phrase_len(&self, index: u32) -> u32 {
        if index < FIRST_PHRASE {
            1
        } else {
            self.entries[(index - FIRST_PHRASE) as usize].len
        }
    }

    /// Appends the phrase stored at `index` to `out`.
    pub fn append_phrase(&self, index: u32, out: &mut Vec<u8>) {
        let len = self.phrase_len(index) as usize;
        let start = out.len();
        out.resize(start + len, 0);
        let mut pos = start + len;
        let mut cur = index;
        while cur >= FIRST_PHRASE {
            let e = &self.entries[(cur - FIRST_PHRASE) as usize];
            pos -= 1;
            out[pos] = e.byte;
            cur = e.prefix;
        }
        out[start] = self.base[cur as usize];
    }

    pub fn phrase(&self, index: u32) -> Vec<u8> {
        let mut out = Vec::new();
        self.append_phrase(index, &mut out);
        out
    }

    /// Walks the whole table checking prefix closure, index bounds and the
    /// cached lengths. Linear in the table size; meant for tests.
    pub fn check_invariants(&self) -> Result<(), String> {
        let next = self.next_index();
        if !(FIRST_PHRASE..=self.capacity).contains(&next) {
            return Err(format!("next index {next} out of bounds"));
        }
        for (offset, e) in self.entries.iter().enumerate() {
            let index = FIRST_PHRASE + offset as u32;
            if e.prefix >= index {
                return Err(format!("entry {index} has unassigned prefix {}", e.prefix));
            }
            if e.len != self.phrase_len(e.prefix) + 1 || e.first != self.first_byte(e.prefix) {
                return Err(format!("entry {index} has stale length or first byte"));
            }
            if let Some(map) = &self.lookup {
                if map.get(&edge(e.prefix, e.byte)) != Some(&index) {
                    return Err(format!("entry {index} missing from lookup"));
                }
            }
        }
        if let Some(map) = &self.lookup {
            if map.len() != self.entries.len() {
                return Err("lookup holds stale edges".into());
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn identity() -> [u8; 256] {
        std::array::from_fn(|i| i as u8)
    }

    #[test]
    fn phrases_follow_prefix_chain() {
        let mut d = Dictionary::new(identity(), 1024, true);
        let ab = d.insert(97, b'b');
        let ba = d.insert(98, b'a');
        let aba = d.insert(ab, b'a');
        assert_eq!((ab, ba, aba), (256, 257, 258));
        assert_eq!(d.phrase(aba), b"aba");
        assert_eq!(d.phrase_len(aba), 3);
        assert_eq!(d.first_byte(ba), b'b');
        assert_eq!(d.find(ab, b'a'), Some(aba));
        assert_eq!(d.find(aba, b'a'), None);
        d.check_invariants().unwrap();
        d.reset();
        assert_eq!(d.next_index(), 256);
        assert_eq!(d.find(97, b'b'), None);
    }

    #[test]
    fn permuted_base() {
        let mut base = identity();
        base.reverse();
        let mut d = Dictionary::new(base, 1024, true);
        assert_eq!(d.symbol_index(0), 255);
        assert_eq!(d.phrase(0), [255]);
        let i = d.insert(d.symbol_index(b'x'), b'y');
        assert_eq!(d.phrase(i), b"xy");
        d.check_invariants().unwrap();
    }

    #[test]
    fn fills_to_capacity() {
        let mut d = Dictionary::new(identity(), 1024, false);
        let mut prev = 0;
        while !d.is_full() {
            prev = d.insert(prev, 7);
        }
        assert_eq!(d.next_index(), 1024);
        assert_eq!(d.phrase_len(1023), 769);
        d.check_invariants().unwrap();
    }
}
