use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),

    #[error("invalid UTF-8 at byte offset {offset} (line {line})")]
    Decode { line: usize, offset: u64 },

    #[error("line {line}: token {token:?} contains reserved string {reserved:?}")]
    ReservedToken {
        line: usize,
        token: String,
        reserved: String,
    },

    #[error("line {line}: {message}")]
    Format { line: usize, message: String },

    #[error("merge table line {line}: {message}")]
    InvalidMerge { line: usize, message: String },

    #[error("cannot train on an empty corpus")]
    EmptyCorpus,

    #[error("prefix length {requested} exceeds merge table size {available}; train a deeper table")]
    PrefixTooLong { requested: usize, available: usize },

    #[error("sentence {sentence}, word {word}: UNK unit cannot be desegmented")]
    UnkInOutput { sentence: usize, word: usize },

    #[error("boundary symbol {boundary:?} found in input word {word:?}")]
    BoundaryInInput { boundary: String, word: String },

    #[error("unit {position}: {message}")]
    MalformedUnits { position: usize, message: String },

    #[error("target side has zero tokens; ratio undefined")]
    EmptyTarget,

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("word {0:?} has no segmentation in the imported file")]
    MissingSegmentation(String),
}
