//! Brute-force oracles shared by the integration suites. These deliberately
//! avoid the library's enumeration and relation code paths: the relations are
//! restated from their definitions and the language oracle searches
//! derivations directly.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet, VecDeque};

use relsub::grammar::{Cfg, Symbol};

/// Equality, or both strings long enough to share their first `k` and last
/// `l` symbols.
pub fn kl_related_direct(k: usize, l: usize, x: &str, y: &str) -> bool {
    if x == y {
        return true;
    }
    let xs: Vec<char> = x.chars().collect();
    let ys: Vec<char> = y.chars().collect();
    xs.len() >= k + l
        && ys.len() >= k + l
        && xs[..k] == ys[..k]
        && xs[xs.len() - l..] == ys[ys.len() - l..]
}

/// Same bounded occurrence count, or both counts past the bound.
pub fn count_related_direct(symbol: char, bound: usize, x: &str, y: &str) -> bool {
    let cx = x.chars().filter(|&c| c == symbol).count();
    let cy = y.chars().filter(|&c| c == symbol).count();
    (cx == cy && cx <= bound) || (cx > bound && cy > bound)
}

/// All strings over the alphabet up to the length bound, shortest first.
pub fn all_strings(alphabet: &[char], max_len: usize) -> Vec<String> {
    let mut out = vec![String::new()];
    let mut layer = vec![String::new()];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|s| {
                alphabet.iter().map(move |&c| {
                    let mut t = s.clone();
                    t.push(c);
                    t
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

/// Bounded language by breadth-first derivation search over sentential
/// forms, independent of the library's fixpoint enumeration. Requires every
/// non-start nonterminal to derive a nonempty string, which holds for all
/// grammars the suites feed it.
pub fn derivation_enumerate(g: &Cfg, max_len: usize) -> BTreeSet<String> {
    let mut min_len = vec![usize::MAX; g.nonterminal_count()];
    loop {
        let mut changed = false;
        for p in g.productions() {
            let mut total = 0usize;
            let mut ok = true;
            for s in &p.rhs {
                match s {
                    Symbol::T(_) => total += 1,
                    Symbol::Nt(v) => {
                        if min_len[*v] == usize::MAX {
                            ok = false;
                            break;
                        }
                        total += min_len[*v];
                    }
                }
            }
            if ok && total < min_len[p.lhs] {
                min_len[p.lhs] = total;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    for v in 0..g.nonterminal_count() {
        if v != g.start_id() && min_len[v] == 0 {
            panic!("oracle requires nonempty yields outside the start symbol");
        }
    }

    let completion = |form: &[Symbol]| -> usize {
        form.iter()
            .map(|s| match s {
                Symbol::T(_) => 1,
                Symbol::Nt(v) => min_len[*v],
            })
            .fold(0usize, usize::saturating_add)
    };

    let mut out = BTreeSet::new();
    let mut seen: HashSet<Vec<Symbol>> = HashSet::new();
    let mut queue: VecDeque<Vec<Symbol>> = VecDeque::new();
    let initial = vec![Symbol::Nt(g.start_id())];
    seen.insert(initial.clone());
    queue.push_back(initial);
    while let Some(form) = queue.pop_front() {
        if completion(&form) > max_len {
            continue;
        }
        match form.iter().position(|s| matches!(s, Symbol::Nt(_))) {
            None => {
                let w: String = form
                    .iter()
                    .map(|s| match s {
                        Symbol::T(ch) => *ch,
                        Symbol::Nt(_) => unreachable!(),
                    })
                    .collect();
                out.insert(w);
            }
            Some(i) => {
                let Symbol::Nt(v) = form[i] else { unreachable!() };
                for p in g.productions().iter().filter(|p| p.lhs == v) {
                    let mut next = Vec::with_capacity(form.len() + p.rhs.len());
                    next.extend_from_slice(&form[..i]);
                    next.extend_from_slice(&p.rhs);
                    next.extend_from_slice(&form[i + 1..]);
                    if completion(&next) <= max_len && seen.insert(next.clone()) {
                        queue.push_back(next);
                    }
                }
            }
        }
    }
    out
}

/// All context pairs of `x` inside the sample strings, by direct splitting.
pub fn contexts_direct(sample: &[&str], x: &str) -> BTreeSet<(String, String)> {
    let mut out = BTreeSet::new();
    let needle: Vec<char> = x.chars().collect();
    for w in sample {
        let chars: Vec<char> = w.chars().collect();
        for i in 0..=chars.len() {
            for j in i..=chars.len() {
                if chars[i..j] == needle[..] {
                    out.insert((
                        chars[..i].iter().collect(),
                        chars[j..].iter().collect(),
                    ));
                }
            }
        }
    }
    out
}

/// All nonempty windows of the sample strings.
pub fn substrings_direct(sample: &[&str]) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    for w in sample {
        let chars: Vec<char> = w.chars().collect();
        for i in 0..chars.len() {
            for j in i + 1..=chars.len() {
                out.insert(chars[i..j].iter().collect());
            }
        }
    }
    out
}
