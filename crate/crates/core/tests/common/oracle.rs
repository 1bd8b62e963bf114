//! Independent reference implementations used only by tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

/// Naive trainer: recounts every pair from scratch each round.
pub fn brute_force_train(types: &BTreeMap<String, u64>, op: usize) -> (Vec<(String, String)>, BTreeMap<String, Vec<String>>) {
    let mut state: Vec<(String, Vec<String>, u64)> = types
        .iter()
        .map(|(w, &n)| (w.clone(), w.chars().map(|c| c.to_string()).collect(), n))
        .collect();
    let mut rules = Vec::new();
    while rules.len() < op {
        let mut counts: BTreeMap<(String, String), u64> = BTreeMap::new();
        for (_, syms, n) in &state {
            for i in 0..syms.len().saturating_sub(1) {
                *counts.entry((syms[i].clone(), syms[i + 1].clone())).or_insert(0) += n;
            }
        }
        // BTreeMap iterates pairs in ascending order; keep the first maximum.
        let mut best: Option<(&(String, String), u64)> = None;
        for (p, &c) in &counts {
            if best.map_or(true, |(_, bc)| c > bc) {
                best = Some((p, c));
            }
        }
        let Some((pair, count)) = best else { break };
        if count < 2 {
            break;
        }
        let pair = pair.clone();
        for (_, syms, _) in state.iter_mut() {
            *syms = merge_all(syms, &pair);
        }
        rules.push(pair);
    }
    let finals = state.into_iter().map(|(w, s, _)| (w, s)).collect();
    (rules, finals)
}

fn merge_all(syms: &[String], pair: &(String, String)) -> Vec<String> {
    let mut out = Vec::with_capacity(syms.len());
    let mut i = 0;
    while i < syms.len() {
        if i + 1 < syms.len() && syms[i] == pair.0 && syms[i + 1] == pair.1 {
            out.push(format!("{}{}", pair.0, pair.1));
            i += 2;
        } else {
            out.push(syms[i].clone());
            i += 1;
        }
    }
    out
}

/// Literal replay of the first `k` rules, one full pass per rule.
pub fn replay_apply(rules: &[(String, String)], k: usize, word: &str) -> Vec<String> {
    let mut syms: Vec<String> = word.chars().map(|c| c.to_string()).collect();
    for pair in &rules[..k] {
        loop {
            let next = merge_all(&syms, pair);
            if next.len() == syms.len() {
                break;
            }
            syms = next;
        }
    }
    syms
}

/// Every pair of distinct words, compared directly.
pub fn brute_force_divergence(
    types: &[(String, Vec<String>, u64)],
    min_lcp: usize,
) -> BTreeSet<(String, String, usize, u64)> {
    let mut out = BTreeSet::new();
    for i in 0..types.len() {
        for j in 0..types.len() {
            let (a, b) = (&types[i], &types[j]);
            if a.0 >= b.0 {
                continue;
            }
            let lcp = a.0.chars().zip(b.0.chars()).take_while(|(x, y)| x == y).count();
            if lcp < min_lcp {
                continue;
            }
            let splits = |units: &[String]| -> BTreeSet<usize> {
                let mut pos = 0;
                let mut s = BTreeSet::new();
                for u in &units[..units.len() - 1] {
                    pos += u.chars().count();
                    if pos <= lcp {
                        s.insert(pos);
                    }
                }
                s
            };
            if splits(&a.1) != splits(&b.1) {
                out.insert((a.0.clone(), b.0.clone(), lcp, a.2 + b.2));
            }
        }
    }
    out
}
