//! Greedy merge learning over word types weighted by corpus frequency.
//!
//! Pair counts are maintained incrementally: merging a pair only touches the
//! words that contain it, and a lazy max-heap holds one entry per count change.
//! Stale heap entries are detected by comparing against the live count.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BinaryHeap, HashMap};
use std::rc::Rc;

use sha2::{Digest, Sha256};

use super::table::{MergeRule, MergeTable};
use crate::corpus::{Corpus, Symbol, Word};
use crate::error::{Error, Result};

/// Pairs seen fewer times than this are never merged.
pub const MIN_PAIR_FREQUENCY: u64 = 2;

type Pair = (u32, u32);

#[derive(Debug)]
pub struct Training {
    pub table: MergeTable,
    /// Each type's symbol sequence when training stopped.
    pub final_segments: BTreeMap<Word, Vec<String>>,
}

pub fn bpe_train(corpus: &Corpus, op: usize) -> Result<MergeTable> {
    Ok(train_with_state(corpus, op)?.table)
}

/// Trains until `op` rules or until no pair reaches [`MIN_PAIR_FREQUENCY`].
/// Ties go to the smallest `(left, right)` in codepoint order.
pub fn train_with_state(corpus: &Corpus, op: usize) -> Result<Training> {
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    if op == 0 {
        return Err(Error::Config("number of merge operations must be at least 1".into()));
    }
    let mut state = State::new(corpus);
    let mut rules = Vec::new();
    while rules.len() < op {
        let Some(cand) = state.heap.pop() else { break };
        if state.counts.get(&cand.pair).copied().unwrap_or(0) != cand.count {
            continue;
        }
        if cand.count < MIN_PAIR_FREQUENCY {
            break;
        }
        rules.push(MergeRule {
            left: Symbol::new(&cand.left).unwrap(),
            right: Symbol::new(&cand.right).unwrap(),
            rank: rules.len(),
        });
        state.merge(cand.pair);
    }
    let final_segments = corpus
        .type_counts()
        .keys()
        .zip(&state.words)
        .map(|(w, syms)| {
            let units = syms.iter().map(|&id| state.text[id as usize].to_string()).collect();
            (w.clone(), units)
        })
        .collect();
    Ok(Training {
        table: MergeTable::from_trusted(rules, Some(fingerprint(corpus))),
        final_segments,
    })
}

/// Hex SHA-256 over the sorted `word\tcount\n` lines of the corpus.
pub fn fingerprint(corpus: &Corpus) -> String {
    let mut h = Sha256::new();
    for (w, n) in corpus.type_counts() {
        h.update(w.as_str().as_bytes());
        h.update(b"\t");
        h.update(n.to_string().as_bytes());
        h.update(b"\n");
    }
    hex::encode(h.finalize())
}

#[derive(PartialEq, Eq)]
struct Candidate {
    count: u64,
    left: Rc<str>,
    right: Rc<str>,
    pair: Pair,
}

impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> Ordering {
        self.count
            .cmp(&other.count)
            .then_with(|| other.left.cmp(&self.left))
            .then_with(|| other.right.cmp(&self.right))
    }
}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

struct State {
    text: Vec<Rc<str>>,
    ids: HashMap<Rc<str>, u32>,
    words: Vec<Vec<u32>>,
    freqs: Vec<u64>,
    counts: HashMap<Pair, u64>,
    /// Words that contained the pair at some point; may hold stale entries.
    occurs: HashMap<Pair, Vec<u32>>,
    heap: BinaryHeap<Candidate>,
}

impl State {
    fn new(corpus: &Corpus) -> Self {
        let mut st = State {
            text: Vec::new(),
            ids: HashMap::new(),
            words: Vec::with_capacity(corpus.type_counts().len()),
            freqs: Vec::with_capacity(corpus.type_counts().len()),
            counts: HashMap::new(),
            occurs: HashMap::new(),
            heap: BinaryHeap::new(),
        };
        let mut buf = [0u8; 4];
        for (wi, (w, &n)) in corpus.type_counts().iter().enumerate() {
            let syms: Vec<u32> = w
                .as_str()
                .chars()
                .map(|c| st.intern(c.encode_utf8(&mut buf)))
                .collect();
            for p in syms.windows(2) {
                let pair = (p[0], p[1]);
                *st.counts.entry(pair).or_insert(0) += n;
                st.occurs.entry(pair).or_default().push(wi as u32);
            }
            st.words.push(syms);
            st.freqs.push(n);
        }
        let pairs: Vec<(Pair, u64)> = st.counts.iter().map(|(&p, &c)| (p, c)).collect();
        for (pair, count) in pairs {
            st.push(pair, count);
        }
        st
    }

    fn intern(&mut self, s: &str) -> u32 {
        if let Some(&id) = self.ids.get(s) {
            return id;
        }
        let id = self.text.len() as u32;
        let rc: Rc<str> = s.into();
        self.text.push(rc.clone());
        self.ids.insert(rc, id);
        id
    }

    fn push(&mut self, pair: Pair, count: u64) {
        self.heap.push(Candidate {
            count,
            left: self.text[pair.0 as usize].clone(),
            right: self.text[pair.1 as usize].clone(),
            pair,
        });
    }

    fn merge(&mut self, pair: Pair) {
        let merged = format!("{}{}", self.text[pair.0 as usize], self.text[pair.1 as usize]);
        let new_id = self.intern(&merged);
        let mut touched = self.occurs.remove(&pair).unwrap_or_default();
        touched.sort_unstable();
        touched.dedup();

        let mut delta: HashMap<Pair, i64> = HashMap::new();
        for wi in touched {
            let wi = wi as usize;
            let old = &self.words[wi];
            if !old.windows(2).any(|p| (p[0], p[1]) == pair) {
                continue;
            }
            let replaced = merge_word(old, pair, new_id);
            let f = self.freqs[wi] as i64;
            for p in old.windows(2) {
                *delta.entry((p[0], p[1])).or_insert(0) -= f;
            }
            for p in replaced.windows(2) {
                let np = (p[0], p[1]);
                *delta.entry(np).or_insert(0) += f;
                if np.0 == new_id || np.1 == new_id {
                    self.occurs.entry(np).or_default().push(wi as u32);
                }
            }
            self.words[wi] = replaced;
        }

        let mut changed: Vec<(Pair, i64)> = delta.into_iter().filter(|&(_, d)| d != 0).collect();
        changed.sort_unstable();
        for (p, d) in changed {
            let entry = self.counts.entry(p).or_insert(0);
            *entry = (*entry as i64 + d) as u64;
            let c = *entry;
            if c == 0 {
                self.counts.remove(&p);
            } else {
                self.push(p, c);
            }
        }
    }
}

/// Leftmost-first, non-overlapping replacement of every occurrence of `pair`.
fn merge_word(syms: &[u32], pair: Pair, new_id: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(syms.len());
    let mut i = 0;
    while i < syms.len() {
        if i + 1 < syms.len() && (syms[i], syms[i + 1]) == pair {
            out.push(new_id);
            i += 2;
        } else {
            out.push(syms[i]);
            i += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pairs(t: &MergeTable) -> Vec<(String, String)> {
        t.rules()
            .iter()
            .map(|r| (r.left.to_string(), r.right.to_string()))
            .collect()
    }

    fn p(l: &str, r: &str) -> (String, String) {
        (l.to_string(), r.to_string())
    }

    #[test]
    fn two_rule_golden() {
        let c = Corpus::from_counts(&[("abc", 3), ("abd", 2)]);
        let t = bpe_train(&c, 2).unwrap();
        assert_eq!(pairs(&t), vec![p("a", "b"), p("ab", "c")]);
        assert_eq!(t.rules()[1].rank, 1);
    }

    #[test]
    fn single_char_types_yield_empty_table() {
        let c = Corpus::from_counts(&[("a", 5)]);
        assert!(bpe_train(&c, 10).unwrap().is_empty());
    }

    #[test]
    fn hapax_pairs_are_not_merged() {
        let c = Corpus::from_counts(&[("ab", 1), ("cd", 1)]);
        assert!(bpe_train(&c, 5).unwrap().is_empty());
        let c = Corpus::from_counts(&[("ab", 2), ("cd", 1)]);
        assert_eq!(pairs(&bpe_train(&c, 5).unwrap()), vec![p("a", "b")]);
    }

    #[test]
    fn ties_break_lexicographically() {
        let c = Corpus::from_counts(&[("zy", 2), ("cd", 2), ("ab", 2)]);
        let t = bpe_train(&c, 3).unwrap();
        assert_eq!(pairs(&t), vec![p("a", "b"), p("c", "d"), p("z", "y")]);
    }

    #[test]
    fn overlapping_runs() {
        // "aaaa" has three (a,a) occurrences, weight 2 each
        let c = Corpus::from_counts(&[("aaaa", 2)]);
        let tr = train_with_state(&c, 10).unwrap();
        assert_eq!(pairs(&tr.table), vec![p("a", "a"), p("aa", "aa")]);
        assert_eq!(tr.final_segments[&Word::new("aaaa").unwrap()], vec!["aaaa"]);
    }

    #[test]
    fn errors() {
        assert!(matches!(bpe_train(&Corpus::default(), 3), Err(Error::EmptyCorpus)));
        assert!(matches!(bpe_train(&Corpus::parse("\n\n"), 3), Err(Error::EmptyCorpus)));
        assert!(bpe_train(&Corpus::parse("ab"), 0).is_err());
    }

    #[test]
    fn deterministic_fingerprint() {
        let a = bpe_train(&Corpus::parse("ab ab cd\nab"), 4).unwrap();
        let b = bpe_train(&Corpus::parse("ab\nab cd ab"), 4).unwrap();
        assert_eq!(a.write(), b.write());
        assert_eq!(a.trained_on().unwrap().len(), 64);
    }
}
