//! Fully character-level segmentation with an explicit word-boundary unit.

use crate::corpus::{Sentence, Symbol, Word, DEFAULT_BOUNDARY};
use crate::error::{Error, Result};

pub const DEFAULT_MAX_SENTENCE_UNITS: usize = 500;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharSegConfig {
    boundary: Symbol,
    max_sentence_units: usize,
}

impl Default for CharSegConfig {
    fn default() -> Self {
        CharSegConfig {
            boundary: Symbol::new(DEFAULT_BOUNDARY).unwrap(),
            max_sentence_units: DEFAULT_MAX_SENTENCE_UNITS,
        }
    }
}

impl CharSegConfig {
    pub fn new(boundary: &str, max_sentence_units: usize) -> Result<Self> {
        let boundary = Symbol::new(boundary).ok_or_else(|| {
            Error::Config(format!("invalid boundary symbol {boundary:?}"))
        })?;
        if max_sentence_units == 0 {
            return Err(Error::Config("max_sentence_units must be at least 1".into()));
        }
        Ok(CharSegConfig {
            boundary,
            max_sentence_units,
        })
    }

    pub fn boundary(&self) -> &Symbol {
        &self.boundary
    }

    pub fn max_sentence_units(&self) -> usize {
        self.max_sentence_units
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharSegmented {
    pub units: Vec<Symbol>,
    /// Set when `units` is longer than the configured limit. Nothing is truncated.
    pub exceeds_limit: bool,
}

pub fn char_segment(s: &Sentence, cfg: &CharSegConfig) -> Result<CharSegmented> {
    let boundary = cfg.boundary.as_str();
    let mut units = Vec::new();
    let mut buf = [0u8; 4];
    for (i, w) in s.words.iter().enumerate() {
        if w.as_str().contains(boundary) {
            return Err(Error::BoundaryInInput {
                boundary: boundary.to_string(),
                word: w.as_str().to_string(),
            });
        }
        if i > 0 {
            units.push(cfg.boundary.clone());
        }
        units.extend(w.as_str().chars().map(|c| Symbol::new(c.encode_utf8(&mut buf)).unwrap()));
    }
    let exceeds_limit = units.len() > cfg.max_sentence_units;
    Ok(CharSegmented {
        units,
        exceeds_limit,
    })
}

/// Inverse of [`char_segment`]. Error positions are 0-based unit indices.
pub fn char_desegment(units: &[Symbol], cfg: &CharSegConfig) -> Result<Sentence> {
    let bad = |position: usize, message: &str| Error::MalformedUnits {
        position,
        message: message.to_string(),
    };
    let mut words = Vec::new();
    let mut current = String::new();
    for (i, u) in units.iter().enumerate() {
        if *u == cfg.boundary {
            if current.is_empty() {
                return Err(bad(
                    i,
                    if i == 0 { "leading boundary symbol" } else { "adjacent boundary symbols" },
                ));
            }
            words.push(Word::new(&current).unwrap());
            current.clear();
        } else {
            let mut chars = u.as_str().chars();
            if chars.next().is_none() || chars.next().is_some() {
                return Err(bad(i, &format!("unit {:?} is not a single character", u.as_str())));
            }
            current.push_str(u.as_str());
        }
    }
    if current.is_empty() {
        if !units.is_empty() {
            return Err(bad(units.len() - 1, "trailing boundary symbol"));
        }
    } else {
        words.push(Word::new(&current).unwrap());
    }
    Ok(Sentence::new(words))
}

/// Per-word unit groups, splitting at boundary units.
pub fn group_by_word<'a>(units: &'a [Symbol], cfg: &CharSegConfig) -> Vec<&'a [Symbol]> {
    if units.is_empty() {
        return Vec::new();
    }
    units.split(|u| *u == cfg.boundary).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strs(units: &[Symbol]) -> Vec<&str> {
        units.iter().map(Symbol::as_str).collect()
    }

    fn syms(units: &[&str]) -> Vec<Symbol> {
        units.iter().map(|u| Symbol::new(u).unwrap()).collect()
    }

    #[test]
    fn segment_examples() {
        let cfg = CharSegConfig::default();
        let out = char_segment(&Sentence::parse("ab cd"), &cfg).unwrap();
        assert_eq!(strs(&out.units), ["a", "b", "▁", "c", "d"]);
        let out = char_segment(&Sentence::parse("x"), &cfg).unwrap();
        assert_eq!(strs(&out.units), ["x"]);
        let out = char_segment(&Sentence::default(), &cfg).unwrap();
        assert!(out.units.is_empty());
    }

    #[test]
    fn desegment_examples() {
        let cfg = CharSegConfig::default();
        let s = char_desegment(&syms(&["a", "b", "▁", "c", "d"]), &cfg).unwrap();
        assert_eq!(s.to_line(), "ab cd");
        assert!(char_desegment(&[], &cfg).unwrap().is_empty());
        match char_desegment(&syms(&["▁", "a"]), &cfg).unwrap_err() {
            Error::MalformedUnits { position, .. } => assert_eq!(position, 0),
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn desegment_rejects_malformed() {
        let cfg = CharSegConfig::default();
        assert!(char_desegment(&syms(&["a", "▁"]), &cfg).is_err());
        assert!(char_desegment(&syms(&["a", "▁", "▁", "b"]), &cfg).is_err());
        assert!(char_desegment(&syms(&["▁"]), &cfg).is_err());
        match char_desegment(&syms(&["a", "bc"]), &cfg).unwrap_err() {
            Error::MalformedUnits { position, .. } => assert_eq!(position, 1),
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn boundary_in_input_rejected() {
        let cfg = CharSegConfig::default();
        assert!(matches!(
            char_segment(&Sentence::parse("a▁b"), &cfg),
            Err(Error::BoundaryInInput { .. })
        ));
    }

    #[test]
    fn limit_flags_without_truncating() {
        let cfg = CharSegConfig::new("_", 3).unwrap();
        let out = char_segment(&Sentence::parse("ab cd"), &cfg).unwrap();
        assert!(out.exceeds_limit);
        assert_eq!(out.units.len(), 5);
        assert!(!char_segment(&Sentence::parse("abc"), &cfg).unwrap().exceeds_limit);
        assert!(CharSegConfig::new("_", 0).is_err());
    }

    #[test]
    fn grouping() {
        let cfg = CharSegConfig::default();
        let units = syms(&["a", "b", "▁", "c"]);
        let groups = group_by_word(&units, &cfg);
        assert_eq!(groups.len(), 2);
        assert_eq!(strs(groups[0]), ["a", "b"]);
    }
}
