//! Segmented words and corpora, shared by every segmentation scheme.

use std::fmt;

use crate::corpus::{Corpus, Sentence, Symbol, Word};
use crate::error::{Error, Result};

/// Where an externally produced segmentation came from. Only the readers in
/// [`crate::io`] construct this, so a `MorphImported` scheme always refers to a file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImportedSource {
    name: String,
}

impl ImportedSource {
    pub(crate) fn new(name: impl Into<String>) -> Self {
        ImportedSource { name: name.into() }
    }

    pub fn name(&self) -> &str {
        &self.name
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SegmentationScheme {
    Unseg,
    Char,
    Bpe { op: usize },
    MorphImported(ImportedSource),
}

impl fmt::Display for SegmentationScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SegmentationScheme::Unseg => f.write_str("unseg"),
            SegmentationScheme::Char => f.write_str("char"),
            SegmentationScheme::Bpe { op } => write!(f, "bpe:{op}"),
            SegmentationScheme::MorphImported(src) => write!(f, "morph:{}", src.name),
        }
    }
}

/// One word split into units. Every unit but the last is continuation-flagged;
/// the flag is implied by position rather than stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SegmentedWord {
    units: Vec<Symbol>,
    unk: bool,
}

impl SegmentedWord {
    /// Returns `None` for an empty unit list.
    pub fn from_units(units: Vec<Symbol>) -> Option<Self> {
        if units.is_empty() {
            None
        } else {
            Some(SegmentedWord { units, unk: false })
        }
    }

    pub fn whole(word: &Word) -> Self {
        SegmentedWord {
            units: vec![Symbol::new(word.as_str()).expect("words are valid symbols")],
            unk: false,
        }
    }

    pub fn chars(word: &Word) -> Self {
        let mut buf = [0u8; 4];
        let units = word
            .as_str()
            .chars()
            .map(|c| Symbol::new(c.encode_utf8(&mut buf)).expect("non-space char"))
            .collect();
        SegmentedWord { units, unk: false }
    }

    pub fn unk(unk: &str) -> Self {
        SegmentedWord {
            units: vec![Symbol::new(unk).expect("UNK symbol is validated")],
            unk: true,
        }
    }

    pub fn units(&self) -> &[Symbol] {
        &self.units
    }

    pub fn len(&self) -> usize {
        self.units.len()
    }

    pub fn is_empty(&self) -> bool {
        self.units.is_empty()
    }

    pub fn is_unk(&self) -> bool {
        self.unk
    }

    pub fn is_continued(&self, index: usize) -> bool {
        index + 1 < self.units.len()
    }

    pub fn surface(&self) -> String {
        self.units.iter().map(Symbol::as_str).collect()
    }

    /// Internal split offsets in characters from the word start.
    pub fn split_positions(&self) -> Vec<usize> {
        let mut pos = 0;
        let mut out = Vec::with_capacity(self.units.len().saturating_sub(1));
        for u in &self.units[..self.units.len() - 1] {
            pos += u.char_len();
            out.push(pos);
        }
        out
    }

    /// Units separated by spaces, each non-final unit suffixed with `marker`.
    pub fn render(&self, marker: &str, out: &mut String) {
        for (i, u) in self.units.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            out.push_str(u.as_str());
            if self.is_continued(i) {
                out.push_str(marker);
            }
        }
    }

    pub fn joined(&self, sep: &str) -> String {
        self.units
            .iter()
            .map(Symbol::as_str)
            .collect::<Vec<_>>()
            .join(sep)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SegmentedCorpus {
    pub scheme: SegmentationScheme,
    pub rows: Vec<Vec<SegmentedWord>>,
    pub unk_count: u64,
}

impl SegmentedCorpus {
    pub fn new(scheme: SegmentationScheme, rows: Vec<Vec<SegmentedWord>>) -> Self {
        let unk_count = rows.iter().flatten().filter(|w| w.is_unk()).count() as u64;
        SegmentedCorpus {
            scheme,
            rows,
            unk_count,
        }
    }

    /// Total number of units over all rows.
    pub fn token_count(&self) -> u64 {
        self.rows.iter().flatten().map(|w| w.len() as u64).sum()
    }

    pub fn word_count(&self) -> u64 {
        self.rows.iter().map(|r| r.len() as u64).sum()
    }

    /// Joins every word's units back into the source corpus.
    pub fn desegment(&self) -> Result<Corpus> {
        let mut sentences = Vec::with_capacity(self.rows.len());
        for (si, row) in self.rows.iter().enumerate() {
            let mut words = Vec::with_capacity(row.len());
            for (wi, w) in row.iter().enumerate() {
                if w.is_unk() {
                    return Err(Error::UnkInOutput {
                        sentence: si + 1,
                        word: wi + 1,
                    });
                }
                words.push(Word::new(&w.surface()).expect("units are non-empty"));
            }
            sentences.push(Sentence::new(words));
        }
        Ok(Corpus::from_sentences(sentences))
    }
}
