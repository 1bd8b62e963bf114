//! Granularity analyses that need no model training: merge-count sweeps with
//! source/target token ratios, OOV counts, and a diagnostic for related words
//! that receive incompatible subword boundaries.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use rayon::prelude::*;

use crate::bpe::{BpeModel, BpeSegmenter, BpeVocab, MergeTable};
use crate::corpus::{Corpus, Word};
use crate::error::{Error, Result};
use crate::segment::SegmentedWord;

pub const DEFAULT_MIN_LCP: usize = 4;

/// A merge-table prefix length, or the whole table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SweepOp {
    Prefix(usize),
    Saturated,
}

impl SweepOp {
    fn resolve(self, table: &MergeTable) -> Result<usize> {
        match self {
            SweepOp::Saturated => Ok(table.op()),
            SweepOp::Prefix(k) if k <= table.op() => Ok(k),
            SweepOp::Prefix(k) => Err(Error::PrefixTooLong {
                requested: k,
                available: table.op(),
            }),
        }
    }
}

impl Ord for SweepOp {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (SweepOp::Prefix(a), SweepOp::Prefix(b)) => a.cmp(b),
            (SweepOp::Prefix(_), SweepOp::Saturated) => Ordering::Less,
            (SweepOp::Saturated, SweepOp::Prefix(_)) => Ordering::Greater,
            (SweepOp::Saturated, SweepOp::Saturated) => Ordering::Equal,
        }
    }
}

impl PartialOrd for SweepOp {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for SweepOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SweepOp::Prefix(k) => write!(f, "{k}"),
            SweepOp::Saturated => f.write_str("saturated"),
        }
    }
}

impl FromStr for SweepOp {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("saturated") {
            return Ok(SweepOp::Saturated);
        }
        s.parse()
            .map(SweepOp::Prefix)
            .map_err(|_| format!("expected a merge count or \"saturated\", got {s:?}"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SweepPoint {
    pub op: SweepOp,
    pub src_tokens: u64,
    pub tgt_tokens: u64,
}

impl SweepPoint {
    pub fn ratio(&self) -> f64 {
        self.src_tokens as f64 / self.tgt_tokens as f64
    }
}

/// Which side of the parallel corpus the swept table segments.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SegmentedSide {
    #[default]
    Source,
    Target,
}

/// Sweep over prefixes of `table`, which segments `side`; the other side is
/// counted unsegmented or segmented once by `fixed`.
pub struct Sweep<'a> {
    pub src: &'a Corpus,
    pub tgt: &'a Corpus,
    pub table: &'a MergeTable,
    pub side: SegmentedSide,
    pub fixed: Option<(&'a MergeTable, SweepOp)>,
}

/// Units produced over the whole corpus by `segmenter`.
pub fn segmented_token_count(corpus: &Corpus, segmenter: &BpeSegmenter<'_>) -> u64 {
    corpus
        .type_counts()
        .iter()
        .map(|(w, n)| segmenter.segment(w).len() as u64 * n)
        .sum()
}

impl Sweep<'_> {
    pub fn run(&self, ops: &[SweepOp]) -> Result<Vec<SweepPoint>> {
        if self.tgt.is_empty() {
            return Err(Error::EmptyTarget);
        }
        let (swept, other) = match self.side {
            SegmentedSide::Source => (self.src, self.tgt),
            SegmentedSide::Target => (self.tgt, self.src),
        };
        let other_tokens = match self.fixed {
            None => other.token_count(),
            Some((table, op)) => {
                let k = op.resolve(table)?;
                let model = BpeModel::new(table);
                segmented_token_count(other, &model.segmenter(k)?)
            }
        };

        let mut ops = ops.to_vec();
        ops.sort();
        let resolved = ops
            .iter()
            .map(|op| op.resolve(self.table))
            .collect::<Result<Vec<_>>>()?;

        let model = BpeModel::new(self.table);
        let counts: Vec<u64> = resolved
            .par_iter()
            .map(|&k| segmented_token_count(swept, &model.segmenter(k).expect("resolved")))
            .collect();

        Ok(ops
            .into_iter()
            .zip(counts)
            .map(|(op, n)| {
                let (src_tokens, tgt_tokens) = match self.side {
                    SegmentedSide::Source => (n, other_tokens),
                    SegmentedSide::Target => (other_tokens, n),
                };
                SweepPoint {
                    op,
                    src_tokens,
                    tgt_tokens,
                }
            })
            .collect())
    }
}

/// Source side segmented by prefixes of `table`, target unsegmented.
pub fn op_sweep(
    src: &Corpus,
    tgt: &Corpus,
    table: &MergeTable,
    ops: &[SweepOp],
) -> Result<Vec<SweepPoint>> {
    Sweep {
        src,
        tgt,
        table,
        side: SegmentedSide::Source,
        fixed: None,
    }
    .run(ops)
}

pub fn emit_sweep_tsv(points: &[SweepPoint]) -> String {
    let mut out = String::from("op\tsrc_tokens\ttgt_tokens\tratio\n");
    for p in points {
        writeln!(out, "{}\t{}\t{}\t{:.4}", p.op, p.src_tokens, p.tgt_tokens, p.ratio()).unwrap();
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OovReport {
    pub oov_types: u64,
    pub oov_tokens: u64,
    /// Most frequent OOV types: frequency descending, then word.
    pub examples: Vec<(Word, u64)>,
}

pub fn oov_report(train_vocab: &BpeVocab, test: &Corpus, top_n: usize) -> OovReport {
    let mut examples: Vec<(Word, u64)> = test
        .type_counts()
        .iter()
        .filter(|(w, _)| !train_vocab.contains(w.as_str()))
        .map(|(w, &n)| (w.clone(), n))
        .collect();
    let oov_types = examples.len() as u64;
    let oov_tokens = examples.iter().map(|(_, n)| n).sum();
    examples.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    examples.truncate(top_n);
    OovReport {
        oov_types,
        oov_tokens,
        examples,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeSegmentation {
    pub word: Word,
    pub seg: SegmentedWord,
    pub freq: u64,
}

/// Segments every type of `corpus`, in type order.
pub fn segment_types(corpus: &Corpus, segmenter: &BpeSegmenter<'_>) -> Vec<TypeSegmentation> {
    corpus
        .type_counts()
        .iter()
        .map(|(w, &n)| TypeSegmentation {
            word: w.clone(),
            seg: segmenter.segment(w),
            freq: n,
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivergencePair {
    pub word_a: Word,
    pub word_b: Word,
    pub lcp_len: usize,
    /// Split positions of `word_a` at or before `lcp_len`.
    pub boundaries_a: BTreeSet<usize>,
    pub boundaries_b: BTreeSet<usize>,
    pub seg_a: SegmentedWord,
    pub seg_b: SegmentedWord,
    pub combined_freq: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConsistencyConfig {
    pub min_lcp: usize,
    pub top_n: usize,
}

impl Default for ConsistencyConfig {
    fn default() -> Self {
        ConsistencyConfig {
            min_lcp: DEFAULT_MIN_LCP,
            top_n: 100,
        }
    }
}

/// Split positions `p` with `p <= limit`.
pub fn restricted_boundaries(seg: &SegmentedWord, limit: usize) -> BTreeSet<usize> {
    seg.split_positions()
        .into_iter()
        .filter(|&p| p <= limit)
        .collect()
}

/// Pairs of distinct types sharing a prefix of at least `min_lcp` characters
/// whose boundaries inside that prefix disagree.
///
/// Types are sorted by characters; the types sharing a prefix of length `m`
/// with a given type form a contiguous run after it, and the lcp with each
/// later type is the running minimum of adjacent lcps. Scanning each run until
/// that minimum drops below `min_lcp` visits exactly the qualifying pairs.
pub fn consistency_report(
    types: &[TypeSegmentation],
    cfg: ConsistencyConfig,
) -> Result<Vec<DivergencePair>> {
    if cfg.min_lcp < 2 {
        return Err(Error::Config(format!("min_lcp must be at least 2, got {}", cfg.min_lcp)));
    }
    let mut sorted: Vec<(&TypeSegmentation, Vec<char>)> =
        types.iter().map(|t| (t, t.word.as_str().chars().collect())).collect();
    sorted.sort_by(|a, b| a.1.cmp(&b.1));
    sorted.dedup_by(|a, b| a.1 == b.1);

    let adjacent: Vec<usize> = sorted.windows(2).map(|w| lcp(&w[0].1, &w[1].1)).collect();

    let mut out = Vec::new();
    for i in 0..sorted.len() {
        let mut run = usize::MAX;
        for j in i + 1..sorted.len() {
            run = run.min(adjacent[j - 1]);
            if run < cfg.min_lcp {
                break;
            }
            if let Some(p) = divergence(sorted[i].0, sorted[j].0, run) {
                out.push(p);
            }
        }
    }
    rank_pairs(&mut out, cfg.top_n);
    Ok(out)
}

/// Builds the pair if the restricted boundary sets differ.
pub fn divergence(a: &TypeSegmentation, b: &TypeSegmentation, lcp_len: usize) -> Option<DivergencePair> {
    let (a, b) = if a.word <= b.word { (a, b) } else { (b, a) };
    let boundaries_a = restricted_boundaries(&a.seg, lcp_len);
    let boundaries_b = restricted_boundaries(&b.seg, lcp_len);
    (boundaries_a != boundaries_b).then(|| DivergencePair {
        word_a: a.word.clone(),
        word_b: b.word.clone(),
        lcp_len,
        boundaries_a,
        boundaries_b,
        seg_a: a.seg.clone(),
        seg_b: b.seg.clone(),
        combined_freq: a.freq + b.freq,
    })
}

/// Combined frequency descending, then word pair ascending; keeps `top_n`.
pub fn rank_pairs(pairs: &mut Vec<DivergencePair>, top_n: usize) {
    pairs.sort_by(|x, y| {
        y.combined_freq
            .cmp(&x.combined_freq)
            .then_with(|| x.word_a.cmp(&y.word_a))
            .then_with(|| x.word_b.cmp(&y.word_b))
    });
    pairs.truncate(top_n);
}

fn lcp(a: &[char], b: &[char]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

pub fn emit_consistency_tsv(pairs: &[DivergencePair]) -> String {
    let mut out = String::from("word_a\tword_b\tlcp_len\tseg_a\tseg_b\tcombined_freq\n");
    for p in pairs {
        writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}",
            p.word_a,
            p.word_b,
            p.lcp_len,
            p.seg_a.joined("|"),
            p.seg_b.joined("|"),
            p.combined_freq
        )
        .unwrap();
    }
    out
}
