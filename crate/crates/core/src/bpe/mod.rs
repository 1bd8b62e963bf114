//! Byte-pair encoding over characters, restricted to word interiors.

mod apply;
mod table;
mod train;

pub use apply::{bpe_apply, bpe_apply_corpus, bpe_desegment, ApplyMode, BpeModel, BpeSegmenter, BpeVocab};
pub use table::{MergeRule, MergeTable, MERGES_HEADER};
pub use train::{bpe_train, fingerprint, train_with_state, Training, MIN_PAIR_FREQUENCY};

/// Suggested merge count when the segmented side is the source.
pub const DEFAULT_OP_SOURCE: usize = 30_000;
/// Suggested merge count when the segmented side is the target.
pub const DEFAULT_OP_TARGET: usize = 90_000;
