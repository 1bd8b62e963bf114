//! Deterministic synthetic corpora with Zipf-distributed word frequencies.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ONSETS: &[&str] = &["", "b", "d", "k", "l", "m", "n", "r", "s", "t", "w", "y", "sh", "kh", "q"];
const VOWELS: &[&str] = &["a", "i", "u", "aa", "ii", "uu"];
const CODAS: &[&str] = &["", "", "n", "m", "r", "t", "s"];

/// Distinct pseudo-words of one to four syllables.
pub fn vocabulary(seed: u64, types: usize) -> Vec<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::with_capacity(types);
    while out.len() < types {
        let syllables = rng.gen_range(1..=4);
        let mut w = String::new();
        for _ in 0..syllables {
            w.push_str(ONSETS[rng.gen_range(0..ONSETS.len())]);
            w.push_str(VOWELS[rng.gen_range(0..VOWELS.len())]);
            w.push_str(CODAS[rng.gen_range(0..CODAS.len())]);
        }
        if seen.insert(w.clone()) {
            out.push(w);
        }
    }
    out
}

/// Corpus text with `tokens` words drawn Zipf(1) from `vocab`, sentences of
/// 5 to 30 words, one per line.
pub fn zipf_text(seed: u64, vocab: &[String], tokens: usize) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cdf = Vec::with_capacity(vocab.len());
    let mut acc = 0.0;
    for r in 1..=vocab.len() {
        acc += 1.0 / r as f64;
        cdf.push(acc);
    }
    let mut text = String::with_capacity(tokens * 8);
    let mut emitted = 0;
    while emitted < tokens {
        let len = rng.gen_range(5..=30).min(tokens - emitted);
        for i in 0..len {
            let x = rng.gen::<f64>() * acc;
            let idx = cdf.partition_point(|&c| c < x).min(vocab.len() - 1);
            if i > 0 {
                text.push(' ');
            }
            text.push_str(&vocab[idx]);
        }
        text.push('\n');
        emitted += len;
    }
    text
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_sized() {
        let v = vocabulary(1, 100);
        assert_eq!(v, vocabulary(1, 100));
        let t = zipf_text(2, &v, 1000);
        assert_eq!(t.split_whitespace().count(), 1000);
        assert_eq!(t, zipf_text(2, &v, 1000));
    }
}
