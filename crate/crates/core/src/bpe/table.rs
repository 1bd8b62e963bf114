use std::collections::HashSet;
use std::io::BufRead;

use crate::corpus::Symbol;
use crate::error::{Error, Result};
use crate::io::LineReader;

pub const MERGES_HEADER: &str = "#subseg merges v1";

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MergeRule {
    pub left: Symbol,
    pub right: Symbol,
    pub rank: usize,
}

impl MergeRule {
    pub fn merged(&self) -> String {
        let mut s = String::with_capacity(self.left.as_str().len() + self.right.as_str().len());
        s.push_str(self.left.as_str());
        s.push_str(self.right.as_str());
        s
    }
}

/// Ordered merge rules. Every prefix of a valid table is itself valid, so one
/// deep table serves any smaller merge count.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MergeTable {
    rules: Vec<MergeRule>,
    trained_on: Option<String>,
}

fn is_single_char(s: &str) -> bool {
    let mut it = s.chars();
    it.next().is_some() && it.next().is_none()
}

impl MergeTable {
    /// Builds a table from pairs in rank order, checking that each side is a
    /// single character or the product of an earlier rule.
    pub fn from_pairs<L, R>(pairs: impl IntoIterator<Item = (L, R)>) -> Result<Self>
    where
        L: AsRef<str>,
        R: AsRef<str>,
    {
        let mut rules = Vec::new();
        let mut products: HashSet<String> = HashSet::new();
        for (rank, (l, r)) in pairs.into_iter().enumerate() {
            let rule = make_rule(rank, l.as_ref(), r.as_ref(), &products)
                .map_err(|message| Error::InvalidMerge {
                    line: rank + 1,
                    message,
                })?;
            products.insert(rule.merged());
            rules.push(rule);
        }
        Ok(MergeTable {
            rules,
            trained_on: None,
        })
    }

    pub(crate) fn from_trusted(rules: Vec<MergeRule>, trained_on: Option<String>) -> Self {
        MergeTable { rules, trained_on }
    }

    pub fn with_fingerprint(mut self, fingerprint: Option<String>) -> Self {
        self.trained_on = fingerprint;
        self
    }

    pub fn rules(&self) -> &[MergeRule] {
        &self.rules
    }

    /// Number of merge operations.
    pub fn op(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    /// Hex SHA-256 of the training corpus type counts, if known.
    pub fn trained_on(&self) -> Option<&str> {
        self.trained_on.as_deref()
    }

    pub fn prefix(&self, k: usize) -> Result<MergeTable> {
        if k > self.op() {
            return Err(Error::PrefixTooLong {
                requested: k,
                available: self.op(),
            });
        }
        Ok(MergeTable {
            rules: self.rules[..k].to_vec(),
            trained_on: self.trained_on.clone(),
        })
    }

    pub fn write(&self) -> String {
        let mut out = String::from(MERGES_HEADER);
        if let Some(fp) = &self.trained_on {
            out.push_str(" trained_on=");
            out.push_str(fp);
        }
        out.push('\n');
        for r in &self.rules {
            out.push_str(r.left.as_str());
            out.push(' ');
            out.push_str(r.right.as_str());
            out.push('\n');
        }
        out
    }

    pub fn read<R: BufRead>(reader: R) -> Result<MergeTable> {
        let mut lines = LineReader::new(reader);
        let header = match lines.next() {
            Some(l) => l?,
            None => {
                return Err(Error::InvalidMerge {
                    line: 1,
                    message: format!("missing header {MERGES_HEADER:?}"),
                })
            }
        };
        let trained_on = parse_header(&header.text).ok_or_else(|| Error::InvalidMerge {
            line: 1,
            message: format!("expected header {MERGES_HEADER:?}, got {:?}", header.text),
        })?;
        let mut rules = Vec::new();
        let mut products: HashSet<String> = HashSet::new();
        for line in lines {
            let line = line?;
            let bad = |message: String| Error::InvalidMerge {
                line: line.number,
                message,
            };
            let mut parts = line.text.split(' ');
            let (l, r) = match (parts.next(), parts.next(), parts.next()) {
                (Some(l), Some(r), None) if !l.is_empty() && !r.is_empty() => (l, r),
                _ => return Err(bad(format!("expected \"LEFT RIGHT\", got {:?}", line.text))),
            };
            let rule = make_rule(rules.len(), l, r, &products).map_err(bad)?;
            products.insert(rule.merged());
            rules.push(rule);
        }
        Ok(MergeTable { rules, trained_on })
    }
}

fn parse_header(line: &str) -> Option<Option<String>> {
    let rest = line.strip_prefix(MERGES_HEADER)?;
    if rest.is_empty() {
        return Some(None);
    }
    let fp = rest.strip_prefix(" trained_on=")?;
    if fp.is_empty() || fp.contains(' ') {
        return None;
    }
    Some(Some(fp.to_string()))
}

fn make_rule(
    rank: usize,
    left: &str,
    right: &str,
    products: &HashSet<String>,
) -> std::result::Result<MergeRule, String> {
    for side in [left, right] {
        if !is_single_char(side) && !products.contains(side) {
            return Err(format!(
                "symbol {side:?} is neither a character nor produced by an earlier rule"
            ));
        }
    }
    let sym = |s: &str| Symbol::new(s).ok_or_else(|| format!("invalid symbol {s:?}"));
    Ok(MergeRule {
        left: sym(left)?,
        right: sym(right)?,
        rank,
    })
}
