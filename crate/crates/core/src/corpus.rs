//! Deterministic sample inputs for tests, benchmarks and demos.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

// Roughly frequency-ordered; sampled with Zipf weights.
const WORDS: &[&str] = &[
    "the", "of", "and", "to", "a", "in", "is", "that", "it", "was", "for", "on", "are", "as",
    "with", "his", "they", "at", "be", "this", "from", "have", "or", "by", "one", "had", "not",
    "but", "what", "all", "were", "when", "we", "there", "can", "an", "your", "which", "their",
    "said", "if", "do", "will", "each", "about", "how", "up", "out", "them", "then", "she",
    "many", "some", "so", "these", "would", "other", "into", "has", "more", "her", "two", "like",
    "him", "see", "time", "could", "no", "make", "than", "first", "been", "its", "who", "now",
    "people", "my", "made", "over", "did", "down", "only", "way", "find", "use", "may", "water",
    "long", "little", "very", "after", "words", "called", "just", "where", "most", "know", "get",
    "through", "back", "much", "before", "go", "good", "new", "write", "our", "used", "me", "man",
    "too", "any", "day", "same", "right", "look", "think", "also", "around", "another", "came",
    "come", "work", "three", "word", "must", "because", "does", "part", "even", "place", "well",
    "such", "here", "take", "why", "things", "help", "put", "years", "different", "away", "again",
    "off", "went", "old", "number", "great", "tell", "men", "say", "small", "every", "found",
    "still", "between", "name", "should", "home", "big", "give", "air", "line", "set", "own",
    "under", "read", "last", "never", "us", "left", "end", "along", "while", "might", "next",
    "sound", "below", "saw", "something", "thought", "both", "few", "those", "always", "looked",
    "show", "large", "often", "together", "asked", "house", "world", "going", "want", "school",
    "important", "until", "form", "food", "keep", "children", "feet", "land", "side", "without",
    "boy", "once", "animals", "life", "enough", "took", "sometimes", "four", "head", "above",
    "kind", "began", "almost", "live", "page", "got", "earth", "need", "far", "hand", "high",
    "year", "mother", "light", "parts", "country", "father", "let", "night", "following",
    "picture", "being", "study", "second", "eyes", "soon", "times", "story", "boys", "since",
    "white", "days", "paper", "hard", "near", "sentence", "better", "best", "across", "during",
    "today", "others", "however", "sure", "means", "knew", "try", "told", "young", "miles", "sun",
    "ways", "thing", "whole", "hear", "example", "heard", "several", "change", "answer", "room",
    "sea", "against", "top", "turned", "learn", "point", "city", "play", "toward", "five",
    "using", "himself", "usually", "river", "morning", "garden", "winter", "letter", "question",
];

/// Pseudo-English prose: Zipf-weighted words, capitalized sentences with
/// occasional commas, and paragraph breaks. Exactly `len` bytes.
pub fn english_text(len: usize, seed: u64) -> Vec<u8> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weights: Vec<f64> = (0..WORDS.len()).map(|r| 1.0 / (r as f64 + 2.0)).collect();
    let pick = WeightedIndex::new(&weights).expect("valid weights");

    let mut out = Vec::with_capacity(len + 64);
    while out.len() < len {
        let words = rng.random_range(4..=18);
        for w in 0..words {
            let word = WORDS[pick.sample(&mut rng)].as_bytes();
            if w == 0 {
                out.push(word[0].to_ascii_uppercase());
                out.extend_from_slice(&word[1..]);
            } else {
                out.extend_from_slice(word);
            }
            if w + 1 < words {
                if rng.random_ratio(1, 12) {
                    out.push(b',');
                }
                out.push(b' ');
            }
        }
        out.push(if rng.random_ratio(1, 15) { b'?' } else { b'.' });
        if rng.random_ratio(1, 6) {
            out.extend_from_slice(b"\n\n");
        } else {
            out.push(b' ');
        }
    }
    out.truncate(len);
    out
}

pub fn random_bytes(len: usize, seed: u64) -> Vec<u8> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = vec![0u8; len];
    rng.fill_bytes(&mut out);
    out
}
