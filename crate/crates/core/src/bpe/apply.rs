//! Applying a merge-table prefix to words and corpora.
//!
//! Application replays rules in rank order, exactly as training did: after
//! applying rank `r`, only ranks greater than `r` are considered. Rules whose
//! pair is absent when their turn comes are skipped, so instead of scanning
//! every rule we jump straight to the smallest applicable rank above the cursor.

use std::collections::{BTreeSet, HashMap};

use dashmap::DashMap;
use rayon::prelude::*;

use super::table::MergeTable;
use crate::corpus::{Corpus, Symbol, Word};
use crate::error::{Error, Result};
use crate::segment::{SegmentationScheme, SegmentedCorpus, SegmentedWord};

const NO_SYMBOL: u32 = u32::MAX;

/// Full type vocabulary of a training corpus.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BpeVocab {
    known: BTreeSet<Word>,
}

impl BpeVocab {
    pub fn from_corpus(c: &Corpus) -> Self {
        BpeVocab {
            known: c.type_counts().keys().cloned().collect(),
        }
    }

    pub fn from_words(words: impl IntoIterator<Item = Word>) -> Self {
        BpeVocab {
            known: words.into_iter().collect(),
        }
    }

    pub fn contains(&self, w: &str) -> bool {
        self.known.contains(w)
    }

    pub fn len(&self) -> usize {
        self.known.len()
    }

    pub fn is_empty(&self) -> bool {
        self.known.is_empty()
    }

    pub fn words(&self) -> impl Iterator<Item = &Word> {
        self.known.iter()
    }
}

#[derive(Clone, Copy, Debug)]
pub enum ApplyMode<'a> {
    Unconstrained,
    /// Words outside the vocabulary become a single UNK unit.
    Constrained { vocab: &'a BpeVocab, unk: &'a str },
}

/// Interned form of a merge table for fast application.
#[derive(Debug)]
pub struct BpeModel {
    op: usize,
    ids: HashMap<Box<str>, u32>,
    /// Ascending ranks per pair. A pair can recur when two different splits
    /// produce the same symbol.
    ranks: HashMap<(u32, u32), Vec<u32>>,
    pairs: Vec<(u32, u32)>,
    products: Vec<u32>,
}

impl BpeModel {
    pub fn new(table: &MergeTable) -> Self {
        let mut ids: HashMap<Box<str>, u32> = HashMap::new();
        let mut intern = |s: &str| -> u32 {
            if let Some(&id) = ids.get(s) {
                return id;
            }
            let id = ids.len() as u32;
            ids.insert(s.into(), id);
            id
        };
        let mut ranks: HashMap<(u32, u32), Vec<u32>> = HashMap::new();
        let mut products = Vec::with_capacity(table.op());
        let mut pairs = Vec::with_capacity(table.op());
        for r in table.rules() {
            let l = intern(r.left.as_str());
            let rt = intern(r.right.as_str());
            products.push(intern(&r.merged()));
            pairs.push((l, rt));
            ranks.entry((l, rt)).or_default().push(r.rank as u32);
        }
        BpeModel {
            op: table.op(),
            ids,
            ranks,
            pairs,
            products,
        }
    }

    pub fn op(&self) -> usize {
        self.op
    }

    /// A cached segmenter using the first `k` rules.
    pub fn segmenter(&self, k: usize) -> Result<BpeSegmenter<'_>> {
        if k > self.op {
            return Err(Error::PrefixTooLong {
                requested: k,
                available: self.op,
            });
        }
        Ok(BpeSegmenter {
            model: self,
            k: k as u32,
            cache: DashMap::new(),
        })
    }

    fn next_rank(&self, pair: (u32, u32), after: Option<u32>, k: u32) -> Option<u32> {
        let ranks = self.ranks.get(&pair)?;
        let idx = match after {
            Some(a) => ranks.partition_point(|&r| r <= a),
            None => 0,
        };
        ranks.get(idx).copied().filter(|&r| r < k)
    }

    /// Uncached segmentation of one word with the first `k` rules.
    pub fn segment_word(&self, word: &str, k: u32) -> SegmentedWord {
        struct Piece {
            id: u32,
            start: usize,
            end: usize,
        }
        let mut buf = [0u8; 4];
        let mut pieces: Vec<Piece> = word
            .char_indices()
            .map(|(i, c)| Piece {
                id: self.ids.get(&*c.encode_utf8(&mut buf)).copied().unwrap_or(NO_SYMBOL),
                start: i,
                end: i + c.len_utf8(),
            })
            .collect();

        let mut cursor: Option<u32> = None;
        while pieces.len() > 1 {
            let best = pieces
                .windows(2)
                .filter(|p| p[0].id != NO_SYMBOL && p[1].id != NO_SYMBOL)
                .filter_map(|p| self.next_rank((p[0].id, p[1].id), cursor, k))
                .min();
            let Some(rank) = best else { break };
            let pair = self.pairs[rank as usize];
            let product = self.products[rank as usize];
            loop {
                let mut merged = Vec::with_capacity(pieces.len());
                let mut changed = false;
                let mut it = pieces.into_iter().peekable();
                while let Some(p) = it.next() {
                    if p.id == pair.0 && it.peek().is_some_and(|n| n.id == pair.1) {
                        let n = it.next().unwrap();
                        merged.push(Piece {
                            id: product,
                            start: p.start,
                            end: n.end,
                        });
                        changed = true;
                    } else {
                        merged.push(p);
                    }
                }
                pieces = merged;
                if !changed || pieces.len() < 2 {
                    break;
                }
            }
            cursor = Some(rank);
        }
        let units = pieces
            .iter()
            .map(|p| Symbol::new(&word[p.start..p.end]).expect("non-empty slice"))
            .collect();
        SegmentedWord::from_units(units).expect("word is non-empty")
    }
}

/// Segments words with a fixed rule prefix, memoizing by word type. Safe to
/// share across threads; concurrent misses on one key compute the same value.
#[derive(Debug)]
pub struct BpeSegmenter<'a> {
    model: &'a BpeModel,
    k: u32,
    cache: DashMap<Word, SegmentedWord>,
}

impl BpeSegmenter<'_> {
    pub fn k(&self) -> usize {
        self.k as usize
    }

    pub fn segment(&self, word: &Word) -> SegmentedWord {
        if let Some(hit) = self.cache.get(word.as_str()) {
            return hit.clone();
        }
        let seg = self.model.segment_word(word.as_str(), self.k);
        self.cache.insert(word.clone(), seg.clone());
        seg
    }

    pub fn segment_with(&self, word: &Word, mode: ApplyMode<'_>) -> SegmentedWord {
        match mode {
            ApplyMode::Constrained { vocab, unk } if !vocab.contains(word.as_str()) => {
                SegmentedWord::unk(unk)
            }
            _ => self.segment(word),
        }
    }

    pub fn cached_types(&self) -> usize {
        self.cache.len()
    }
}

/// Segments one word with the first `k` rules of `table`.
pub fn bpe_apply(table: &MergeTable, k: usize, word: &Word) -> Result<SegmentedWord> {
    let model = BpeModel::new(table);
    Ok(model.segmenter(k)?.segment(word))
}

pub fn bpe_apply_corpus(
    segmenter: &BpeSegmenter<'_>,
    corpus: &Corpus,
    mode: ApplyMode<'_>,
) -> SegmentedCorpus {
    let rows: Vec<Vec<SegmentedWord>> = corpus
        .sentences()
        .par_iter()
        .map(|s| s.words.iter().map(|w| segmenter.segment_with(w, mode)).collect())
        .collect();
    SegmentedCorpus::new(SegmentationScheme::Bpe { op: segmenter.k() }, rows)
}

/// Inverse of unconstrained application.
pub fn bpe_desegment(sc: &SegmentedCorpus) -> Result<Corpus> {
    sc.desegment()
}
