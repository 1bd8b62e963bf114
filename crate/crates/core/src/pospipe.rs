//! Builds sequence-to-sequence POS tagging instances: the two preceding words
//! with their tags plus the segmented focus word on the source side, and the
//! focus word's native tag sequence on the target side.

use std::collections::BTreeSet;
use std::io::{BufRead, Write};

use rayon::prelude::*;

use crate::bpe::BpeSegmenter;
use crate::corpus::Word;
use crate::error::{Error, Result};
use crate::io::LineReader;
use crate::segment::{SegmentationScheme, SegmentedWord};

pub const BOS_TOKEN: &str = "<BOS>";
const TAG_PREFIX: &str = "<T:";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TaggedWord {
    pub word: Word,
    pub tags: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TaggedCorpus {
    pub sentences: Vec<Vec<TaggedWord>>,
    pub tagset: BTreeSet<String>,
}

impl TaggedCorpus {
    pub fn token_count(&self) -> usize {
        self.sentences.iter().map(Vec::len).sum()
    }
}

/// Reads `WORD|TAG1+TAG2 ...` lines. In words and tags, `\p` is a literal `|`,
/// `\+` a literal `+` and `\\` a backslash.
pub fn load_tagged<R: BufRead>(reader: R) -> Result<TaggedCorpus> {
    let mut corpus = TaggedCorpus::default();
    for line in LineReader::new(reader) {
        let line = line?;
        let mut sentence = Vec::new();
        for (ti, token) in line.text.split_whitespace().enumerate() {
            let tw = parse_tagged_token(token).map_err(|m| Error::Format {
                line: line.number,
                message: format!("token {} ({token:?}): {m}", ti + 1),
            })?;
            corpus.tagset.extend(tw.tags.iter().cloned());
            sentence.push(tw);
        }
        corpus.sentences.push(sentence);
    }
    Ok(corpus)
}

fn parse_tagged_token(token: &str) -> std::result::Result<TaggedWord, String> {
    let mut word = String::new();
    let mut tags: Vec<String> = Vec::new();
    let mut in_tags = false;
    let mut chars = token.chars();
    while let Some(c) = chars.next() {
        let lit = match c {
            '\\' => match chars.next() {
                Some('p') => '|',
                Some('+') => '+',
                Some('\\') => '\\',
                Some(other) => return Err(format!("unknown escape \\{other}")),
                None => return Err("trailing backslash".into()),
            },
            '|' if !in_tags => {
                in_tags = true;
                tags.push(String::new());
                continue;
            }
            '|' => return Err("more than one unescaped '|'".into()),
            '+' if in_tags => {
                tags.push(String::new());
                continue;
            }
            c => c,
        };
        match tags.last_mut() {
            Some(t) if in_tags => t.push(lit),
            _ => word.push(lit),
        }
    }
    if !in_tags {
        return Err("missing '|' separating word and tags".into());
    }
    if tags.iter().any(String::is_empty) {
        return Err("empty tag".into());
    }
    if word == BOS_TOKEN || word.starts_with(TAG_PREFIX) {
        return Err(format!("word collides with reserved token form {word:?}"));
    }
    let word = Word::new(&word).ok_or("empty word")?;
    Ok(TaggedWord { word, tags })
}

fn escape(s: &str, out: &mut String) {
    for c in s.chars() {
        match c {
            '|' => out.push_str("\\p"),
            '+' => out.push_str("\\+"),
            '\\' => out.push_str("\\\\"),
            c => out.push(c),
        }
    }
}

/// Inverse of the line format read by [`load_tagged`].
pub fn format_tagged_sentence(sentence: &[TaggedWord]) -> String {
    let mut out = String::new();
    for (i, tw) in sentence.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        escape(tw.word.as_str(), &mut out);
        out.push('|');
        for (j, t) in tw.tags.iter().enumerate() {
            if j > 0 {
                out.push('+');
            }
            escape(t, &mut out);
        }
    }
    out
}

/// How context and focus words are split into units.
pub enum PosSegmenter<'a> {
    Unseg,
    Char,
    Bpe(&'a BpeSegmenter<'a>),
    /// Externally segmented rows aligned sentence-by-sentence with the input.
    Imported {
        scheme: SegmentationScheme,
        rows: &'a [Vec<SegmentedWord>],
    },
}

impl PosSegmenter<'_> {
    pub fn scheme(&self) -> SegmentationScheme {
        match self {
            PosSegmenter::Unseg => SegmentationScheme::Unseg,
            PosSegmenter::Char => SegmentationScheme::Char,
            PosSegmenter::Bpe(s) => SegmentationScheme::Bpe { op: s.k() },
            PosSegmenter::Imported { scheme, .. } => scheme.clone(),
        }
    }

    fn segment(&self, sentence: usize, index: usize, word: &Word) -> Result<SegmentedWord> {
        match self {
            PosSegmenter::Unseg => Ok(SegmentedWord::whole(word)),
            PosSegmenter::Char => Ok(SegmentedWord::chars(word)),
            PosSegmenter::Bpe(s) => Ok(s.segment(word)),
            PosSegmenter::Imported { rows, .. } => {
                let seg = rows
                    .get(sentence)
                    .and_then(|r| r.get(index))
                    .ok_or_else(|| Error::MissingSegmentation(word.as_str().to_string()))?;
                if seg.is_unk() || seg.surface() != word.as_str() {
                    return Err(Error::Format {
                        line: sentence + 1,
                        message: format!(
                            "imported segmentation {:?} does not match word {:?}",
                            seg.joined(" "),
                            word.as_str()
                        ),
                    });
                }
                Ok(seg.clone())
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ContextEntry {
    Bos,
    Word { seg: SegmentedWord, tags: Vec<String> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TagInstance {
    /// `[w_{i-2}, w_{i-1}]`.
    pub context: [ContextEntry; 2],
    pub focus: SegmentedWord,
    pub target: Vec<String>,
}

pub fn sentence_instances(
    index: usize,
    sentence: &[TaggedWord],
    seg: &PosSegmenter<'_>,
) -> Result<Vec<TagInstance>> {
    let segs = sentence
        .iter()
        .enumerate()
        .map(|(i, tw)| seg.segment(index, i, &tw.word))
        .collect::<Result<Vec<_>>>()?;
    let ctx = |i: Option<usize>| match i {
        None => ContextEntry::Bos,
        Some(i) => ContextEntry::Word {
            seg: segs[i].clone(),
            tags: sentence[i].tags.clone(),
        },
    };
    Ok((0..sentence.len())
        .map(|i| TagInstance {
            context: [ctx(i.checked_sub(2)), ctx(i.checked_sub(1))],
            focus: segs[i].clone(),
            target: sentence[i].tags.clone(),
        })
        .collect())
}

/// One instance per token, in corpus order.
pub fn gen_instances(corpus: &TaggedCorpus, seg: &PosSegmenter<'_>) -> Result<Vec<TagInstance>> {
    if let PosSegmenter::Imported { rows, .. } = seg {
        if rows.len() != corpus.sentences.len() {
            return Err(Error::Config(format!(
                "imported segmentation has {} sentences, tagged corpus has {}",
                rows.len(),
                corpus.sentences.len()
            )));
        }
    }
    let per_sentence = corpus
        .sentences
        .par_iter()
        .enumerate()
        .map(|(i, s)| sentence_instances(i, s, seg))
        .collect::<Result<Vec<_>>>()?;
    Ok(per_sentence.into_iter().flatten().collect())
}

pub fn tag_token(tag: &str) -> String {
    format!("{TAG_PREFIX}{tag}>")
}

/// Source and target lines for one instance, without trailing newlines.
pub fn render_instance(inst: &TagInstance, marker: &str) -> (String, String) {
    let mut src = String::new();
    for entry in &inst.context {
        match entry {
            ContextEntry::Bos => src.push_str(BOS_TOKEN),
            ContextEntry::Word { seg, tags } => {
                seg.render(marker, &mut src);
                for t in tags {
                    src.push(' ');
                    src.push_str(&tag_token(t));
                }
            }
        }
        src.push(' ');
    }
    inst.focus.render(marker, &mut src);
    (src, inst.target.join(" "))
}

pub fn write_seq2seq<W1: Write, W2: Write>(
    instances: &[TagInstance],
    marker: &str,
    src: &mut W1,
    tgt: &mut W2,
) -> Result<()> {
    for inst in instances {
        let (s, t) = render_instance(inst, marker);
        writeln!(src, "{s}")?;
        writeln!(tgt, "{t}")?;
    }
    Ok(())
}

/// Returns the `.src` and `.tgt` file contents.
pub fn emit_seq2seq(instances: &[TagInstance], marker: &str) -> (String, String) {
    let mut src = Vec::new();
    let mut tgt = Vec::new();
    write_seq2seq(instances, marker, &mut src, &mut tgt).expect("writing to memory");
    (String::from_utf8(src).unwrap(), String::from_utf8(tgt).unwrap())
}
