//! Ordered alphabets. The declaration order of the symbols fixes every
//! length-lexicographic comparison downstream, so two alphabets with the same
//! symbols in different orders are distinct values.

use std::cmp::Ordering;
use std::collections::HashMap;

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Vec<char>,
    rank: HashMap<char, usize>,
}

impl Alphabet {
    /// Builds an alphabet from symbols in declaration order. Duplicates are
    /// rejected; an empty alphabet is allowed (grammars with no terminals).
    pub fn new(symbols: impl IntoIterator<Item = char>) -> Result<Self> {
        let symbols: Vec<char> = symbols.into_iter().collect();
        let mut rank = HashMap::new();
        for (i, &ch) in symbols.iter().enumerate() {
            if rank.insert(ch, i).is_some() {
                return Err(Error::DuplicateSymbol(ch));
            }
        }
        Ok(Alphabet { symbols, rank })
    }

    pub fn symbols(&self) -> &[char] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn contains(&self, ch: char) -> bool {
        self.rank.contains_key(&ch)
    }

    pub fn rank(&self, ch: char) -> Option<usize> {
        self.rank.get(&ch).copied()
    }

    /// Errors with the first symbol of `w` that is not declared.
    pub fn check_str(&self, w: &str) -> Result<()> {
        match w.chars().find(|&ch| !self.contains(ch)) {
            Some(ch) => Err(Error::SymbolNotInAlphabet(ch)),
            None => Ok(()),
        }
    }

    /// Length first, then position by position in declaration order. Symbols
    /// outside the alphabet sort after all declared ones, by scalar value, so
    /// the comparison is still total.
    pub fn cmp_length_lex(&self, a: &str, b: &str) -> Ordering {
        let la = a.chars().count();
        let lb = b.chars().count();
        la.cmp(&lb).then_with(|| {
            for (x, y) in a.chars().zip(b.chars()) {
                let rx = self.key(x);
                let ry = self.key(y);
                match rx.cmp(&ry) {
                    Ordering::Equal => continue,
                    other => return other,
                }
            }
            Ordering::Equal
        })
    }

    fn key(&self, ch: char) -> (u8, usize) {
        match self.rank(ch) {
            Some(r) => (0, r),
            None => (1, ch as usize),
        }
    }

    /// Rank sequence of a string, usable as a sort key for the lexicographic
    /// part of the order above.
    pub fn rank_vec(&self, w: &str) -> Vec<(u8, usize)> {
        w.chars().map(|ch| self.key(ch)).collect()
    }

    pub fn sort_length_lex(&self, strings: &mut [String]) {
        strings.sort_by(|a, b| self.cmp_length_lex(a, b));
    }
}
