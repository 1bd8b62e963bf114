//! Corpus-level domain types: words, sentences, corpora and the reserved
//! sentinel strings that must never occur in input text.

use std::borrow::Borrow;
use std::collections::BTreeMap;
use std::fmt;
use std::io::BufRead;

use crate::error::{Error, Result};
use crate::io::LineReader;

pub const DEFAULT_BOUNDARY: &str = "\u{2581}";
pub const DEFAULT_UNK: &str = "<unk>";
pub const DEFAULT_MARKER: &str = "@@";

/// An atomic unit of a segmentation: one or more characters, no whitespace.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(Box<str>);

impl Symbol {
    pub fn new(text: &str) -> Option<Self> {
        if text.is_empty() || text.chars().any(char::is_whitespace) {
            return None;
        }
        Some(Symbol(text.into()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn char_len(&self) -> usize {
        self.0.chars().count()
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(&*self.0, f)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Borrow<str> for Symbol {
    fn borrow(&self) -> &str {
        &self.0
    }
}

/// A whitespace-free, non-empty word token.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Box<str>);

impl Word {
    pub fn new(surface: &str) -> Option<Self> {
        if surface.is_empty() || surface.chars().any(char::is_whitespace) {
            return None;
        }
        Some(Word(surface.into()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn char_len(&self) -> usize {
        self.0.chars().count()
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(&*self.0, f)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Borrow<str> for Word {
    fn borrow(&self) -> &str {
        &self.0
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Sentence {
    pub words: Vec<Word>,
}

impl Sentence {
    pub fn new(words: Vec<Word>) -> Self {
        Sentence { words }
    }

    /// Splits on runs of Unicode whitespace.
    pub fn parse(line: &str) -> Self {
        Sentence {
            words: line.split_whitespace().filter_map(Word::new).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn to_line(&self) -> String {
        let mut out = String::new();
        for (i, w) in self.words.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            out.push_str(w.as_str());
        }
        out
    }
}

/// Sentinel strings with special meaning in segmented output.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reserved {
    pub boundary: String,
    pub unk: String,
    pub marker: String,
}

impl Default for Reserved {
    fn default() -> Self {
        Reserved {
            boundary: DEFAULT_BOUNDARY.to_string(),
            unk: DEFAULT_UNK.to_string(),
            marker: DEFAULT_MARKER.to_string(),
        }
    }
}

impl Reserved {
    pub fn validate(&self) -> Result<()> {
        for (name, s) in [
            ("boundary symbol", &self.boundary),
            ("UNK symbol", &self.unk),
            ("continuation marker", &self.marker),
        ] {
            if s.is_empty() || s.chars().any(char::is_whitespace) {
                return Err(Error::Config(format!(
                    "{name} must be non-empty and whitespace-free, got {s:?}"
                )));
            }
        }
        if self.boundary == self.marker || self.boundary == self.unk || self.unk == self.marker {
            return Err(Error::Config(
                "boundary symbol, UNK symbol and continuation marker must be distinct".into(),
            ));
        }
        Ok(())
    }

    /// Returns the first reserved string contained in `token`, if any.
    pub fn find_in<'a>(&'a self, token: &str) -> Option<&'a str> {
        [&self.boundary, &self.unk, &self.marker]
            .into_iter()
            .find(|r| token.contains(r.as_str()))
            .map(String::as_str)
    }

    pub fn check_sentence(&self, line: usize, sentence: &Sentence) -> Result<()> {
        for w in &sentence.words {
            if let Some(r) = self.find_in(w.as_str()) {
                return Err(Error::ReservedToken {
                    line,
                    token: w.as_str().to_string(),
                    reserved: r.to_string(),
                });
            }
        }
        Ok(())
    }
}

/// Sentences plus cached token and type counts.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Corpus {
    sentences: Vec<Sentence>,
    token_count: u64,
    type_counts: BTreeMap<Word, u64>,
}

impl Corpus {
    pub fn from_sentences(sentences: Vec<Sentence>) -> Self {
        let mut type_counts = BTreeMap::new();
        let mut token_count = 0;
        for s in &sentences {
            for w in &s.words {
                *type_counts.entry(w.clone()).or_insert(0) += 1;
                token_count += 1;
            }
        }
        Corpus {
            sentences,
            token_count,
            type_counts,
        }
    }

    /// Parses in-memory text without the reserved-string check.
    pub fn parse(text: &str) -> Self {
        Self::from_sentences(text.lines().map(Sentence::parse).collect())
    }

    /// One single-word sentence per token, types in the given order.
    pub fn from_counts<S: AsRef<str>>(counts: &[(S, u64)]) -> Self {
        let mut sentences = Vec::new();
        for (w, n) in counts {
            let word = Word::new(w.as_ref()).expect("valid word");
            for _ in 0..*n {
                sentences.push(Sentence::new(vec![word.clone()]));
            }
        }
        Self::from_sentences(sentences)
    }

    pub fn sentences(&self) -> &[Sentence] {
        &self.sentences
    }

    pub fn into_sentences(self) -> Vec<Sentence> {
        self.sentences
    }

    pub fn token_count(&self) -> u64 {
        self.token_count
    }

    pub fn type_counts(&self) -> &BTreeMap<Word, u64> {
        &self.type_counts
    }

    pub fn is_empty(&self) -> bool {
        self.token_count == 0
    }

    /// Single-space joined sentences, each terminated by `\n`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for s in &self.sentences {
            out.push_str(&s.to_line());
            out.push('\n');
        }
        out
    }

    pub fn stats(&self) -> CorpusStats {
        corpus_stats(self)
    }
}

/// Reads one sentence per line, rejecting tokens that contain a reserved string.
pub fn load_corpus<R: BufRead>(reader: R, reserved: &Reserved) -> Result<Corpus> {
    let mut sentences = Vec::new();
    for line in LineReader::new(reader) {
        let line = line?;
        let sentence = Sentence::parse(&line.text);
        reserved.check_sentence(line.number, &sentence)?;
        sentences.push(sentence);
    }
    Ok(Corpus::from_sentences(sentences))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CorpusStats {
    pub tokens: u64,
    pub types: u64,
    pub sentences: u64,
    /// Sum of word lengths in Unicode scalar values, over tokens.
    pub total_chars: u64,
}

impl CorpusStats {
    /// Zero for an empty corpus.
    pub fn mean_word_len_chars(&self) -> f64 {
        if self.tokens == 0 {
            0.0
        } else {
            self.total_chars as f64 / self.tokens as f64
        }
    }
}

pub fn corpus_stats(c: &Corpus) -> CorpusStats {
    let total_chars = c
        .type_counts
        .iter()
        .map(|(w, n)| w.char_len() as u64 * n)
        .sum();
    CorpusStats {
        tokens: c.token_count,
        types: c.type_counts.len() as u64,
        sentences: c.sentences.len() as u64,
        total_chars,
    }
}
