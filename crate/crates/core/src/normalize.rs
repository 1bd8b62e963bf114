//! Pre-tokenization: punctuation splitting and codepoint-level normalization.

use std::fmt::Write as _;

use unicode_general_category::{get_general_category, GeneralCategory};

use crate::corpus::{Sentence, Word};
use crate::error::{Error, Result};

/// Arabic punctuation not always classified under P* in older Unicode data.
const ARABIC_PUNCT: &[char] = &[
    '\u{060C}', '\u{060D}', '\u{061B}', '\u{061E}', '\u{061F}', '\u{066A}', '\u{066B}',
    '\u{066C}', '\u{066D}', '\u{06D4}',
];

pub fn is_punctuation(c: char) -> bool {
    use GeneralCategory::*;
    matches!(
        get_general_category(c),
        ConnectorPunctuation
            | DashPunctuation
            | OpenPunctuation
            | ClosePunctuation
            | InitialPunctuation
            | FinalPunctuation
            | OtherPunctuation
    ) || ARABIC_PUNCT.contains(&c)
}

/// Splits on whitespace, then emits every punctuation character as its own token.
pub fn separate_punctuation(s: &str) -> Sentence {
    let mut words = Vec::new();
    for chunk in s.split_whitespace() {
        let mut start = None;
        for (i, c) in chunk.char_indices() {
            if is_punctuation(c) {
                if let Some(st) = start.take() {
                    words.push(Word::new(&chunk[st..i]).expect("non-empty run"));
                }
                words.push(Word::new(&chunk[i..i + c.len_utf8()]).expect("punctuation char"));
            } else if start.is_none() {
                start = Some(i);
            }
        }
        if let Some(st) = start {
            words.push(Word::new(&chunk[st..]).expect("non-empty run"));
        }
    }
    Sentence::new(words)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Rule {
    pub first: char,
    pub last: char,
    /// `None` deletes the character.
    pub to: Option<char>,
}

impl Rule {
    pub fn map(from: char, to: char) -> Self {
        Rule {
            first: from,
            last: from,
            to: Some(to),
        }
    }

    pub fn delete(first: char, last: char) -> Self {
        Rule {
            first,
            last,
            to: None,
        }
    }

    fn matches(&self, c: char) -> bool {
        self.first <= c && c <= self.last
    }
}

/// An idempotent, ordered codepoint rewrite table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizationConfig {
    rules: Vec<Rule>,
    enabled: bool,
}

impl NormalizationConfig {
    /// Fails if applying the rules twice could differ from applying them once,
    /// i.e. if some rule's output is itself rewritten.
    pub fn new(rules: Vec<Rule>, enabled: bool) -> Result<Self> {
        for r in &rules {
            if r.first > r.last {
                return Err(Error::Config(format!(
                    "empty range U+{:04X}..U+{:04X}",
                    r.first as u32, r.last as u32
                )));
            }
        }
        let cfg = NormalizationConfig { rules, enabled };
        for r in &cfg.rules {
            if let Some(to) = r.to {
                if cfg.rewrite(to) != Some(to) {
                    return Err(Error::Config(format!(
                        "rule output U+{:04X} is rewritten by another rule; rule set is not idempotent",
                        to as u32
                    )));
                }
            }
        }
        Ok(cfg)
    }

    /// Default Arabic table: alef variants to bare alef, alef maqsura to ya,
    /// tatweel and harakat deleted, Arabic-Indic digits to ASCII.
    pub fn arabic_default() -> Self {
        let mut rules = vec![
            Rule::map('\u{0623}', '\u{0627}'),
            Rule::map('\u{0625}', '\u{0627}'),
            Rule::map('\u{0622}', '\u{0627}'),
            Rule::map('\u{0671}', '\u{0627}'),
            Rule::map('\u{0649}', '\u{064A}'),
            Rule::delete('\u{0640}', '\u{0640}'),
            Rule::delete('\u{064B}', '\u{0652}'),
        ];
        for d in 0..10u32 {
            let from = char::from_u32(0x0660 + d).unwrap();
            let to = char::from_digit(d, 10).unwrap();
            rules.push(Rule::map(from, to));
        }
        NormalizationConfig::new(rules, true).expect("default table is idempotent")
    }

    pub fn disabled() -> Self {
        NormalizationConfig {
            rules: Vec::new(),
            enabled: false,
        }
    }

    pub fn is_enabled(&self) -> bool {
        self.enabled
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn with_enabled(mut self, enabled: bool) -> Self {
        self.enabled = enabled;
        self
    }

    fn rewrite(&self, c: char) -> Option<char> {
        match self.rules.iter().find(|r| r.matches(c)) {
            Some(r) => r.to,
            None => Some(c),
        }
    }

    /// Parses `FROM<TAB>TO` lines. FROM is `U+XXXX` or `U+XXXX-U+YYYY`; an empty
    /// TO deletes. Blank lines and `#` comments are skipped.
    pub fn parse_rules(text: &str) -> Result<Self> {
        let mut rules = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |message: String| Error::Format {
                line: i + 1,
                message,
            };
            let (from, to) = line
                .split_once('\t')
                .ok_or_else(|| bad(format!("expected FROM<TAB>TO, got {line:?}")))?;
            let (first, last) = match from.split_once('-') {
                Some((a, b)) => (parse_escape(a), parse_escape(b)),
                None => (parse_escape(from), parse_escape(from)),
            };
            let (first, last) = first
                .zip(last)
                .ok_or_else(|| bad(format!("bad codepoint escape {from:?}")))?;
            let to = if to.is_empty() {
                None
            } else {
                Some(parse_escape(to).ok_or_else(|| bad(format!("bad codepoint escape {to:?}")))?)
            };
            rules.push(Rule { first, last, to });
        }
        NormalizationConfig::new(rules, true)
    }

    pub fn to_rules_file(&self) -> String {
        let mut out = String::new();
        for r in &self.rules {
            write!(out, "U+{:04X}", r.first as u32).unwrap();
            if r.last != r.first {
                write!(out, "-U+{:04X}", r.last as u32).unwrap();
            }
            out.push('\t');
            if let Some(to) = r.to {
                write!(out, "U+{:04X}", to as u32).unwrap();
            }
            out.push('\n');
        }
        out
    }
}

fn parse_escape(s: &str) -> Option<char> {
    let hex = s.trim().strip_prefix("U+").or_else(|| s.trim().strip_prefix("u+"))?;
    char::from_u32(u32::from_str_radix(hex, 16).ok()?)
}

pub fn normalize_text(s: &str, cfg: &NormalizationConfig) -> String {
    if !cfg.enabled {
        return s.to_string();
    }
    s.chars().filter_map(|c| cfg.rewrite(c)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn words(s: &Sentence) -> Vec<&str> {
        s.words.iter().map(Word::as_str).collect()
    }

    #[test]
    fn punctuation_examples() {
        assert_eq!(words(&separate_punctuation("ab, cd.")), ["ab", ",", "cd", "."]);
        assert_eq!(words(&separate_punctuation("a.b")), ["a", ".", "b"]);
        assert_eq!(words(&separate_punctuation("(ab)")), ["(", "ab", ")"]);
        assert_eq!(words(&separate_punctuation("ab...")), ["ab", ".", ".", "."]);
    }

    #[test]
    fn arabic_punctuation() {
        assert_eq!(
            words(&separate_punctuation("كتب، قرأ؟")),
            ["كتب", "،", "قرأ", "؟"]
        );
    }

    /// Per-codepoint oracle written from the default table, independent of `Rule`.
    fn oracle(c: char) -> Option<char> {
        match c as u32 {
            0x0623 | 0x0625 | 0x0622 | 0x0671 => Some('\u{0627}'),
            0x0649 => Some('\u{064A}'),
            0x0640 => None,
            0x064B..=0x0652 => None,
            d @ 0x0660..=0x0669 => Some((b'0' + (d - 0x0660) as u8) as char),
            _ => Some(c),
        }
    }

    #[test]
    fn alef_variants_fold() {
        let cfg = NormalizationConfig::arabic_default();
        assert_eq!(normalize_text("أاإ", &cfg), "ااا");
        let expected: String = "أاإ".chars().filter_map(oracle).collect();
        assert_eq!(normalize_text("أاإ", &cfg), expected);
    }

    #[test]
    fn default_table_matches_oracle_on_arabic_block() {
        let cfg = NormalizationConfig::arabic_default();
        for cp in 0x0600..=0x06FFu32 {
            let c = char::from_u32(cp).unwrap();
            let got = normalize_text(&c.to_string(), &cfg);
            let want: String = oracle(c).into_iter().collect();
            assert_eq!(got, want, "U+{cp:04X}");
        }
    }

    #[test]
    fn non_arabic_untouched_and_disabled_identity() {
        let cfg = NormalizationConfig::arabic_default();
        assert_eq!(normalize_text("abc", &cfg), "abc");
        let off = cfg.with_enabled(false);
        assert_eq!(normalize_text("أـَ", &off), "أـَ");
    }

    #[test]
    fn non_idempotent_rules_rejected() {
        let rules = vec![Rule::map('a', 'b'), Rule::map('b', 'c')];
        assert!(NormalizationConfig::new(rules, true).is_err());
        // first matching rule wins, so shadowed rules do not break idempotence
        let rules = vec![Rule::map('a', 'b'), Rule::map('b', 'b')];
        assert!(NormalizationConfig::new(rules, true).is_ok());
    }

    #[test]
    fn rules_file_round_trip() {
        let cfg = NormalizationConfig::arabic_default();
        let text = cfg.to_rules_file();
        assert!(text.starts_with("U+0623\tU+0627\n"));
        assert!(text.contains("U+064B-U+0652\t\n"));
        assert_eq!(NormalizationConfig::parse_rules(&text).unwrap(), cfg);
    }

    #[test]
    fn rules_file_errors() {
        assert!(NormalizationConfig::parse_rules("U+0623 U+0627\n").is_err());
        assert!(NormalizationConfig::parse_rules("x\tU+0627\n").is_err());
        let cfg = NormalizationConfig::parse_rules("# comment\n\nU+0640\t\n").unwrap();
        assert_eq!(normalize_text("aـb", &cfg), "ab");
    }
}
