//! Subword segmentation for corpus preprocessing: BPE with a controllable
//! merge count and a vocabulary-constrained test-time mode, character-level
//! segmentation with explicit word boundaries, lossless desegmentation,
//! normalization, granularity analysis, and POS seq2seq data generation.

pub mod analysis;
pub mod bpe;
pub mod charseg;
pub mod corpus;
pub mod error;
pub mod io;
pub mod normalize;
pub mod pospipe;
pub mod segment;

pub use bpe::{ApplyMode, BpeModel, BpeSegmenter, BpeVocab, MergeRule, MergeTable};
pub use corpus::{corpus_stats, load_corpus, Corpus, CorpusStats, Reserved, Sentence, Symbol, Word};
pub use error::{Error, Result};
pub use segment::{SegmentationScheme, SegmentedCorpus, SegmentedWord};
