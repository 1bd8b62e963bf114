use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use subseg_core::analysis::{SweepOp, DEFAULT_MIN_LCP};
use subseg_core::charseg::DEFAULT_MAX_SENTENCE_UNITS;
use subseg_core::corpus::{DEFAULT_BOUNDARY, DEFAULT_MARKER, DEFAULT_UNK};

#[derive(Debug, Parser)]
#[command(name = "subseg", version, about = "Subword segmentation and corpus analysis")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Suffix marking non-final subword units
    #[arg(long, global = true, default_value = DEFAULT_MARKER)]
    pub marker: String,

    /// Replacement for out-of-vocabulary words in constrained mode
    #[arg(long, global = true, default_value = DEFAULT_UNK)]
    pub unk: String,

    /// Word-boundary unit for character segmentation
    #[arg(long, global = true, default_value = DEFAULT_BOUNDARY)]
    pub boundary: String,

    /// Where to write the run manifest (default: next to the output file)
    #[arg(long, global = true)]
    pub manifest: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Learn BPE merge operations from a corpus
    TrainBpe(TrainBpe),
    /// Segment a corpus with a prefix of a merge table
    ApplyBpe(ApplyBpe),
    /// Split every word into characters with a word-boundary unit
    SegmentChars(SegmentChars),
    /// Undo BPE or character segmentation
    Desegment(Desegment),
    /// Normalize characters and separate punctuation
    Normalize(Normalize),
    /// Token, type and length statistics
    Stats(Stats),
    /// Token counts and source/target ratios across merge counts
    Sweep(Sweep),
    /// Out-of-vocabulary counts of a test corpus
    Oov(Oov),
    /// Related words whose subword boundaries disagree
    Consistency(Consistency),
    /// Build seq2seq POS tagging instances
    PosPrep(PosPrep),
    /// Re-run a command from its manifest
    Replay(Replay),
}

#[derive(Debug, Args)]
pub struct TrainBpe {
    #[arg(short, long)]
    pub input: Option<PathBuf>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Number of merge operations (30000 suits an Arabic source side, 90000 an Arabic target side)
    #[arg(long, default_value_t = subseg_core::bpe::DEFAULT_OP_SOURCE)]
    pub op: usize,
}

#[derive(Debug, Args)]
pub struct ApplyBpe {
    #[arg(long)]
    pub merges: PathBuf,
    /// Number of rules to apply (default: the whole table)
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(short, long)]
    pub input: Option<PathBuf>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Training corpus whose vocabulary restricts segmentation; other words become UNK
    #[arg(long)]
    pub vocab: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SegmentChars {
    #[arg(short, long)]
    pub input: Option<PathBuf>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Warn about sentences longer than this many units
    #[arg(long, default_value_t = DEFAULT_MAX_SENTENCE_UNITS)]
    pub max_units: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DesegmentScheme {
    Bpe,
    Char,
}

#[derive(Debug, Args)]
pub struct Desegment {
    #[arg(long, value_enum, default_value_t = DesegmentScheme::Bpe)]
    pub scheme: DesegmentScheme,
    #[arg(short, long)]
    pub input: Option<PathBuf>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Normalize {
    #[arg(short, long)]
    pub input: Option<PathBuf>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Rewrite rules file (FROM<TAB>TO with U+XXXX escapes)
    #[arg(long, conflicts_with = "no_normalize")]
    pub rules: Option<PathBuf>,
    /// Skip character normalization
    #[arg(long)]
    pub no_normalize: bool,
    /// Skip punctuation separation
    #[arg(long)]
    pub no_punct: bool,
}

#[derive(Debug, Args)]
pub struct Stats {
    #[arg(short, long)]
    pub input: Option<PathBuf>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Sweep {
    #[arg(long)]
    pub src: PathBuf,
    #[arg(long)]
    pub tgt: PathBuf,
    /// Table swept over; segments the source side unless --segment-target
    #[arg(long)]
    pub merges: PathBuf,
    /// Comma-separated merge counts; "saturated" means the whole table
    #[arg(long, value_delimiter = ',', required = true)]
    pub ops: Vec<SweepOp>,
    /// Sweep the target side instead of the source side
    #[arg(long)]
    pub segment_target: bool,
    /// Fixed table for the other side
    #[arg(long)]
    pub other_merges: Option<PathBuf>,
    /// Merge count for --other-merges (default: saturated)
    #[arg(long, requires = "other_merges")]
    pub other_k: Option<SweepOp>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Oov {
    #[arg(long)]
    pub train: PathBuf,
    #[arg(long)]
    pub test: PathBuf,
    #[arg(long, default_value_t = 20)]
    pub top_n: usize,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Consistency {
    #[arg(short, long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub merges: PathBuf,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_MIN_LCP)]
    pub min_lcp: usize,
    #[arg(long, default_value_t = 100)]
    pub top_n: usize,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PosScheme {
    Unseg,
    Char,
    Bpe,
    Morph,
}

#[derive(Debug, Args)]
pub struct PosPrep {
    /// Tagged corpus, tokens WORD|TAG1+TAG2
    #[arg(short, long)]
    pub input: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = PosScheme::Unseg)]
    pub scheme: PosScheme,
    #[arg(long)]
    pub merges: Option<PathBuf>,
    #[arg(long, requires = "merges")]
    pub k: Option<usize>,
    /// Externally segmented corpus aligned line-by-line with the input
    #[arg(long)]
    pub morph: Option<PathBuf>,
    /// Writes PREFIX.src and PREFIX.tgt
    #[arg(long)]
    pub output_prefix: PathBuf,
}

#[derive(Debug, Args)]
pub struct Replay {
    /// Manifest written by an earlier run
    pub from: PathBuf,
}
