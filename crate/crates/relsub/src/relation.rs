//! Equivalence relations on strings decided by a finite monoid.
//!
//! A relation is given by a monoid `M` with an explicit operation table, a
//! morphism from strings into `M` (one element per alphabet symbol, extended
//! by folding), and a set `F` of related element pairs: `x ~ y` iff
//! `(h(x), h(y)) ∈ F`. Built-in constructors cover the relations the learner
//! cares about; arbitrary tables can be loaded from a text file.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::path::{Path, PathBuf};

use crate::alphabet::Alphabet;
use crate::{Error, Result};

/// Hard cap on constructed monoid sizes. The built-in constructors are
/// exponential in their parameters (`prefix_suffix(k, l)` has on the order of
/// `|Σ|^(k+l)` elements), so a runaway CLI argument would otherwise OOM.
const MAX_MONOID_SIZE: u128 = 1_000_000;

/// A finite monoid over dense element indices `0..size` with an explicit
/// operation table.
///
/// Construction only checks that indices are in range. The monoid laws are
/// checked by [`FiniteMonoid::law_violations`] (and transitively by
/// [`RecognizableRelation::validate`]) so that hand-written tables can be
/// loaded first and diagnosed afterwards.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteMonoid {
    size: usize,
    identity: usize,
    op: Vec<usize>, // row-major size × size
    names: Vec<String>,
}

impl FiniteMonoid {
    pub fn new(identity: usize, table: Vec<Vec<usize>>) -> Result<Self> {
        let size = table.len();
        let names = (0..size).map(|i| i.to_string()).collect();
        Self::with_names(identity, table, names)
    }

    /// Like [`FiniteMonoid::new`] but with a display name per element.
    pub fn with_names(identity: usize, table: Vec<Vec<usize>>, names: Vec<String>) -> Result<Self> {
        let size = table.len();
        let check = |index: usize| {
            if index < size {
                Ok(index)
            } else {
                Err(Error::ElementOutOfRange { index, size })
            }
        };
        check(identity)?;
        if names.len() != size {
            return Err(Error::Parse(format!(
                "expected {} element names, got {}",
                size,
                names.len()
            )));
        }
        let mut op = Vec::with_capacity(size * size);
        for row in &table {
            if row.len() != size {
                return Err(Error::Parse(format!(
                    "operation table row has {} entries, expected {}",
                    row.len(),
                    size
                )));
            }
            for &e in row {
                op.push(check(e)?);
            }
        }
        Ok(FiniteMonoid {
            size,
            identity,
            op,
            names,
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn op(&self, x: usize, y: usize) -> usize {
        self.op[x * self.size + y]
    }

    pub fn name(&self, element: usize) -> &str {
        &self.names[element]
    }

    /// Identity-law and associativity violations over the whole table.
    pub fn law_violations(&self) -> Vec<RelationDiagnostic> {
        let mut out = Vec::new();
        for x in 0..self.size {
            if self.op(self.identity, x) != x {
                out.push(RelationDiagnostic::LeftIdentityBroken { element: x });
            }
            if self.op(x, self.identity) != x {
                out.push(RelationDiagnostic::RightIdentityBroken { element: x });
            }
        }
        for x in 0..self.size {
            for y in 0..self.size {
                for z in 0..self.size {
                    if self.op(self.op(x, y), z) != self.op(x, self.op(y, z)) {
                        out.push(RelationDiagnostic::AssociativityBroken { x, y, z });
                    }
                }
            }
        }
        out
    }
}

/// A morphism from strings over an alphabet into a finite monoid: the empty
/// string maps to the identity and concatenation maps to the monoid
/// operation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonoidMorphism {
    monoid: FiniteMonoid,
    alphabet: Alphabet,
    symbol_map: Vec<usize>, // one element per alphabet symbol
}

impl MonoidMorphism {
    pub fn new(monoid: FiniteMonoid, alphabet: Alphabet, symbol_map: Vec<usize>) -> Result<Self> {
        if symbol_map.len() != alphabet.len() {
            return Err(Error::Parse(format!(
                "morphism maps {} symbols but the alphabet has {}",
                symbol_map.len(),
                alphabet.len()
            )));
        }
        for &e in &symbol_map {
            if e >= monoid.size() {
                return Err(Error::ElementOutOfRange {
                    index: e,
                    size: monoid.size(),
                });
            }
        }
        Ok(MonoidMorphism {
            monoid,
            alphabet,
            symbol_map,
        })
    }

    pub fn monoid(&self) -> &FiniteMonoid {
        &self.monoid
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn symbol_image(&self, ch: char) -> Result<usize> {
        self.alphabet
            .rank(ch)
            .map(|i| self.symbol_map[i])
            .ok_or(Error::SymbolNotInAlphabet(ch))
    }

    /// Image of a whole string: left fold of the symbol images starting from
    /// the identity.
    pub fn eval(&self, w: &str) -> Result<usize> {
        let mut acc = self.monoid.identity();
        for ch in w.chars() {
            acc = self.monoid.op(acc, self.symbol_image(ch)?);
        }
        Ok(acc)
    }

    /// Elements reachable as images of strings: the closure of the identity
    /// and the symbol images under the operation.
    pub fn reachable_elements(&self) -> BTreeSet<usize> {
        let mut reach: BTreeSet<usize> = BTreeSet::new();
        reach.insert(self.monoid.identity());
        reach.extend(self.symbol_map.iter().copied());
        loop {
            let snapshot: Vec<usize> = reach.iter().copied().collect();
            let before = reach.len();
            for &x in &snapshot {
                for &y in &snapshot {
                    reach.insert(self.monoid.op(x, y));
                }
            }
            if reach.len() == before {
                return reach;
            }
        }
    }
}

/// Number of positions of `w` holding `symbol`.
pub fn count_occurrences(symbol: char, w: &str) -> usize {
    w.chars().filter(|&ch| ch == symbol).count()
}

/// An equivalence relation on strings decided by a finite monoid: `x ~ y` iff
/// the images of `x` and `y` form a related pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecognizableRelation {
    morphism: MonoidMorphism,
    related_pairs: BTreeSet<(usize, usize)>,
}

impl RecognizableRelation {
    pub fn new(morphism: MonoidMorphism, related_pairs: BTreeSet<(usize, usize)>) -> Result<Self> {
        let size = morphism.monoid().size();
        for &(p, q) in &related_pairs {
            for index in [p, q] {
                if index >= size {
                    return Err(Error::ElementOutOfRange { index, size });
                }
            }
        }
        Ok(RecognizableRelation {
            morphism,
            related_pairs,
        })
    }

    pub fn morphism(&self) -> &MonoidMorphism {
        &self.morphism
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.morphism.alphabet()
    }

    pub fn related_pairs(&self) -> &BTreeSet<(usize, usize)> {
        &self.related_pairs
    }

    pub fn elements_related(&self, p: usize, q: usize) -> bool {
        self.related_pairs.contains(&(p, q))
    }

    pub fn related(&self, x: &str, y: &str) -> Result<bool> {
        Ok(self.elements_related(self.morphism.eval(x)?, self.morphism.eval(y)?))
    }

    /// The all-pairs relation: a one-element monoid, so any two strings are
    /// related. Substitutability modulo this relation is plain
    /// substitutability.
    pub fn trivial(alphabet: &[char]) -> Result<Self> {
        if alphabet.is_empty() {
            return Err(Error::EmptyAlphabet);
        }
        let alpha = Alphabet::new(alphabet.iter().copied())?;
        let monoid = FiniteMonoid::with_names(0, vec![vec![0]], vec!["1".to_string()])?;
        let symbol_map = vec![0; alpha.len()];
        let morphism = MonoidMorphism::new(monoid, alpha, symbol_map)?;
        Self::new(morphism, BTreeSet::from([(0, 0)]))
    }

    /// Strings are related iff they are equal, or both are long enough to
    /// have a `k`-prefix and an `l`-suffix and those agree.
    ///
    /// Monoid elements are (a) every string of length `< k + l`, kept
    /// exactly, and (b) a (prefix, suffix) pair for every longer string. The
    /// operation recomputes the canonical form of the concatenation of
    /// representatives, and the related pairs are the diagonal.
    pub fn prefix_suffix(k: usize, l: usize, alphabet: &[char]) -> Result<Self> {
        if alphabet.is_empty() {
            return Err(Error::EmptyAlphabet);
        }
        let alpha = Alphabet::new(alphabet.iter().copied())?;
        let n = alpha.len() as u128;
        let cut = k + l;
        let mut total: u128 = 0;
        for i in 0..cut {
            total += n.pow(i as u32);
            if total > MAX_MONOID_SIZE {
                return Err(Error::MonoidTooLarge(total));
            }
        }
        total += n
            .checked_pow(cut as u32)
            .ok_or(Error::MonoidTooLarge(u128::MAX))?;
        if total > MAX_MONOID_SIZE {
            return Err(Error::MonoidTooLarge(total));
        }

        // Elements in a fixed order: short strings by length then rank, then
        // saturated (prefix, suffix) pairs by rank.
        let mut elements: Vec<PrefixSuffixElem> = Vec::new();
        for len in 0..cut {
            for s in strings_of_length(&alpha, len) {
                elements.push(PrefixSuffixElem::Short(s));
            }
        }
        for u in strings_of_length(&alpha, k) {
            for v in strings_of_length(&alpha, l) {
                elements.push(PrefixSuffixElem::Saturated(u.clone(), v));
            }
        }
        let index: HashMap<PrefixSuffixElem, usize> = elements
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, e)| (e, i))
            .collect();

        let canon = |chars: &[char]| -> PrefixSuffixElem {
            if chars.len() < cut {
                PrefixSuffixElem::Short(chars.to_vec())
            } else {
                PrefixSuffixElem::Saturated(
                    chars[..k].to_vec(),
                    chars[chars.len() - l..].to_vec(),
                )
            }
        };

        let size = elements.len();
        let mut table = vec![vec![0usize; size]; size];
        for (i, a) in elements.iter().enumerate() {
            for (j, b) in elements.iter().enumerate() {
                let mut rep = a.representative();
                rep.extend(b.representative());
                table[i][j] = index[&canon(&rep)];
            }
        }
        let names = elements.iter().map(PrefixSuffixElem::name).collect();
        let identity = index[&canon(&[])];
        let monoid = FiniteMonoid::with_names(identity, table, names)?;
        let symbol_map = alpha
            .symbols()
            .iter()
            .map(|&ch| index[&canon(&[ch])])
            .collect();
        let morphism = MonoidMorphism::new(monoid, alpha, symbol_map)?;
        let diagonal = (0..size).map(|i| (i, i)).collect();
        Self::new(morphism, diagonal)
    }

    /// Strings are related iff they hold the same number of `symbol`
    /// occurrences and that number is at most `bound`, or both exceed
    /// `bound`. The monoid is `{0, 1, …, bound, >bound}` with saturating
    /// addition.
    pub fn symbol_count(symbol: char, bound: usize, alphabet: &[char]) -> Result<Self> {
        if alphabet.is_empty() {
            return Err(Error::EmptyAlphabet);
        }
        let alpha = Alphabet::new(alphabet.iter().copied())?;
        if !alpha.contains(symbol) {
            return Err(Error::SymbolNotInAlphabet(symbol));
        }
        let size = bound + 2; // 0..=bound plus the saturated class
        if size as u128 > MAX_MONOID_SIZE {
            return Err(Error::MonoidTooLarge(size as u128));
        }
        let sat = bound + 1;
        let table = (0..size)
            .map(|i| (0..size).map(|j| (i + j).min(sat)).collect())
            .collect();
        let names = (0..size)
            .map(|i| {
                if i == sat {
                    format!(">{bound}")
                } else {
                    i.to_string()
                }
            })
            .collect();
        let monoid = FiniteMonoid::with_names(0, table, names)?;
        let symbol_map = alpha
            .symbols()
            .iter()
            .map(|&ch| usize::from(ch == symbol).min(sat))
            .collect();
        let morphism = MonoidMorphism::new(monoid, alpha, symbol_map)?;
        let diagonal = (0..size).map(|i| (i, i)).collect();
        Self::new(morphism, diagonal)
    }

    /// Conjunction of two relations over the same alphabet, realized as the
    /// direct-product monoid with componentwise operation and related pairs.
    pub fn product(&self, other: &Self) -> Result<Self> {
        if self.alphabet() != other.alphabet() {
            return Err(Error::AlphabetMismatch);
        }
        let m1 = self.morphism.monoid();
        let m2 = other.morphism.monoid();
        let (s1, s2) = (m1.size(), m2.size());
        let size = (s1 as u128) * (s2 as u128);
        if size > MAX_MONOID_SIZE {
            return Err(Error::MonoidTooLarge(size));
        }
        let pair = |a: usize, b: usize| a * s2 + b;
        let mut table = Vec::with_capacity(s1 * s2);
        let mut names = Vec::with_capacity(s1 * s2);
        for a in 0..s1 {
            for b in 0..s2 {
                names.push(format!("({},{})", m1.name(a), m2.name(b)));
                table.push(
                    (0..s1)
                        .flat_map(|c| (0..s2).map(move |d| (c, d)))
                        .map(|(c, d)| pair(m1.op(a, c), m2.op(b, d)))
                        .collect::<Vec<_>>(),
                );
            }
        }
        let identity = pair(m1.identity(), m2.identity());
        let monoid = FiniteMonoid::with_names(identity, table, names)?;
        let symbol_map = self
            .alphabet()
            .symbols()
            .iter()
            .map(|&ch| {
                Ok(pair(
                    self.morphism.symbol_image(ch)?,
                    other.morphism.symbol_image(ch)?,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        let morphism = MonoidMorphism::new(monoid, self.alphabet().clone(), symbol_map)?;
        let mut related = BTreeSet::new();
        for &(p1, q1) in &self.related_pairs {
            for &(p2, q2) in &other.related_pairs {
                related.insert((pair(p1, p2), pair(q1, q2)));
            }
        }
        Self::new(morphism, related)
    }

    /// Diagnoses monoid-law violations over the whole table and
    /// reflexivity/symmetry/transitivity of the related pairs restricted to
    /// the submonoid generated by the symbol images. Only string images can
    /// ever reach that submonoid, so junk pairs on unreachable elements are
    /// deliberately not reported. An empty result means the relation is a
    /// genuine equivalence on strings.
    pub fn validate(&self) -> Vec<RelationDiagnostic> {
        let mut out = self.morphism.monoid().law_violations();
        let reach = self.morphism.reachable_elements();
        for &m in &reach {
            if !self.elements_related(m, m) {
                out.push(RelationDiagnostic::NotReflexive { element: m });
            }
        }
        let on_reach: Vec<(usize, usize)> = self
            .related_pairs
            .iter()
            .copied()
            .filter(|(p, q)| reach.contains(p) && reach.contains(q))
            .collect();
        for &(p, q) in &on_reach {
            if !self.elements_related(q, p) {
                out.push(RelationDiagnostic::NotSymmetric { pair: (p, q) });
            }
        }
        for &(p, q) in &on_reach {
            for &(q2, r) in &on_reach {
                if q == q2 && !self.elements_related(p, r) {
                    out.push(RelationDiagnostic::NotTransitive { chain: (p, q, r) });
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum PrefixSuffixElem {
    Short(Vec<char>),
    Saturated(Vec<char>, Vec<char>),
}

impl PrefixSuffixElem {
    fn representative(&self) -> Vec<char> {
        match self {
            PrefixSuffixElem::Short(s) => s.clone(),
            PrefixSuffixElem::Saturated(u, v) => {
                let mut rep = u.clone();
                rep.extend(v);
                rep
            }
        }
    }

    fn name(&self) -> String {
        let join = |cs: &[char]| cs.iter().collect::<String>();
        match self {
            PrefixSuffixElem::Short(s) if s.is_empty() => "ε".to_string(),
            PrefixSuffixElem::Short(s) => join(s),
            PrefixSuffixElem::Saturated(u, v) => format!("{}*{}", join(u), join(v)),
        }
    }
}

fn strings_of_length(alpha: &Alphabet, len: usize) -> Vec<Vec<char>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|s| {
                alpha.symbols().iter().map(move |&ch| {
                    let mut t = s.clone();
                    t.push(ch);
                    t
                })
            })
            .collect();
    }
    out
}

/// One violation found by [`RecognizableRelation::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RelationDiagnostic {
    LeftIdentityBroken { element: usize },
    RightIdentityBroken { element: usize },
    AssociativityBroken { x: usize, y: usize, z: usize },
    NotReflexive { element: usize },
    NotSymmetric { pair: (usize, usize) },
    NotTransitive { chain: (usize, usize, usize) },
}

impl fmt::Display for RelationDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RelationDiagnostic::LeftIdentityBroken { element } => {
                write!(f, "identity law broken: op(identity, {element}) != {element}")
            }
            RelationDiagnostic::RightIdentityBroken { element } => {
                write!(f, "identity law broken: op({element}, identity) != {element}")
            }
            RelationDiagnostic::AssociativityBroken { x, y, z } => {
                write!(f, "associativity broken at ({x}, {y}, {z})")
            }
            RelationDiagnostic::NotReflexive { element } => {
                write!(f, "related pairs miss the reachable diagonal element ({element}, {element})")
            }
            RelationDiagnostic::NotSymmetric { pair: (p, q) } => {
                write!(f, "related pairs contain ({p}, {q}) but not ({q}, {p})")
            }
            RelationDiagnostic::NotTransitive { chain: (p, q, r) } => {
                write!(f, "related pairs contain ({p}, {q}) and ({q}, {r}) but not ({p}, {r})")
            }
        }
    }
}

/// A relation description in the mini-DSL used on the command line:
/// `trivial`, `kl:<k>,<l>`, `count:<symbol>,<d>`,
/// `product:(<spec>;<spec>)`, or `table:<path>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RelationSpec {
    Trivial,
    PrefixSuffix { k: usize, l: usize },
    SymbolCount { symbol: char, bound: usize },
    Product(Box<RelationSpec>, Box<RelationSpec>),
    Table(PathBuf),
}

impl RelationSpec {
    pub fn parse(input: &str) -> Result<Self> {
        let s = input.trim();
        if s == "trivial" {
            return Ok(RelationSpec::Trivial);
        }
        if let Some(rest) = s.strip_prefix("kl:") {
            let (k, l) = split_two(rest, ',', "kl:<k>,<l>")?;
            return Ok(RelationSpec::PrefixSuffix {
                k: parse_num(&k)?,
                l: parse_num(&l)?,
            });
        }
        if let Some(rest) = s.strip_prefix("count:") {
            let (sym, d) = split_two(rest, ',', "count:<symbol>,<d>")?;
            let mut chars = sym.chars();
            let symbol = match (chars.next(), chars.next()) {
                (Some(ch), None) => ch,
                _ => {
                    return Err(Error::Parse(format!(
                        "count symbol must be a single character, got '{sym}'"
                    )))
                }
            };
            return Ok(RelationSpec::SymbolCount {
                symbol,
                bound: parse_num(&d)?,
            });
        }
        if let Some(rest) = s.strip_prefix("product:") {
            let inner = rest
                .strip_prefix('(')
                .and_then(|r| r.strip_suffix(')'))
                .ok_or_else(|| {
                    Error::Parse("product spec must look like product:(<spec>;<spec>)".to_string())
                })?;
            let mut depth = 0usize;
            let mut split = None;
            for (i, ch) in inner.char_indices() {
                match ch {
                    '(' => depth += 1,
                    ')' => {
                        depth = depth.checked_sub(1).ok_or_else(|| {
                            Error::Parse(format!("unbalanced parentheses in '{s}'"))
                        })?
                    }
                    ';' if depth == 0 => {
                        split = Some(i);
                        break;
                    }
                    _ => {}
                }
            }
            let at = split.ok_or_else(|| {
                Error::Parse("product spec needs two ';'-separated operands".to_string())
            })?;
            let left = RelationSpec::parse(&inner[..at])?;
            let right = RelationSpec::parse(&inner[at + 1..])?;
            return Ok(RelationSpec::Product(Box::new(left), Box::new(right)));
        }
        if let Some(rest) = s.strip_prefix("table:") {
            return Ok(RelationSpec::Table(PathBuf::from(rest)));
        }
        Err(Error::Parse(format!("unknown relation spec '{s}'")))
    }

    /// Symbols the spec itself mentions, used when inferring an alphabet.
    pub fn declared_symbols(&self) -> Vec<char> {
        match self {
            RelationSpec::SymbolCount { symbol, .. } => vec![*symbol],
            RelationSpec::Product(a, b) => {
                let mut out = a.declared_symbols();
                out.extend(b.declared_symbols());
                out
            }
            _ => Vec::new(),
        }
    }

    /// Instantiates the spec over the given alphabet. A `table:` spec carries
    /// its own alphabet; it must have the same symbols as the requested one
    /// and is reordered to match.
    pub fn build(&self, alphabet: &[char]) -> Result<RecognizableRelation> {
        match self {
            RelationSpec::Trivial => RecognizableRelation::trivial(alphabet),
            RelationSpec::PrefixSuffix { k, l } => {
                RecognizableRelation::prefix_suffix(*k, *l, alphabet)
            }
            RelationSpec::SymbolCount { symbol, bound } => {
                RecognizableRelation::symbol_count(*symbol, *bound, alphabet)
            }
            RelationSpec::Product(a, b) => a.build(alphabet)?.product(&b.build(alphabet)?),
            RelationSpec::Table(path) => {
                let rel = load_monoid_table(path)?;
                reorder_alphabet(rel, alphabet)
            }
        }
    }
}

impl fmt::Display for RelationSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RelationSpec::Trivial => write!(f, "trivial"),
            RelationSpec::PrefixSuffix { k, l } => write!(f, "kl:{k},{l}"),
            RelationSpec::SymbolCount { symbol, bound } => write!(f, "count:{symbol},{bound}"),
            RelationSpec::Product(a, b) => write!(f, "product:({a};{b})"),
            RelationSpec::Table(path) => write!(f, "table:{}", path.display()),
        }
    }
}

fn split_two(s: &str, sep: char, shape: &str) -> Result<(String, String)> {
    match s.split_once(sep) {
        Some((a, b)) => Ok((a.to_string(), b.to_string())),
        None => Err(Error::Parse(format!("expected {shape}, got '{s}'"))),
    }
}

fn parse_num(s: &str) -> Result<usize> {
    s.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("expected a number, got '{s}'")))
}

fn reorder_alphabet(
    rel: RecognizableRelation,
    alphabet: &[char],
) -> Result<RecognizableRelation> {
    if rel.alphabet().symbols() == alphabet {
        return Ok(rel);
    }
    let want: HashSet<char> = alphabet.iter().copied().collect();
    let have: HashSet<char> = rel.alphabet().symbols().iter().copied().collect();
    if want != have {
        return Err(Error::AlphabetMismatch);
    }
    let alpha = Alphabet::new(alphabet.iter().copied())?;
    let symbol_map = alphabet
        .iter()
        .map(|&ch| rel.morphism().symbol_image(ch))
        .collect::<Result<Vec<_>>>()?;
    let morphism = MonoidMorphism::new(rel.morphism().monoid().clone(), alpha, symbol_map)?;
    RecognizableRelation::new(morphism, rel.related_pairs().clone())
}

/// Loads a relation from the monoid table file format:
///
/// ```text
/// # comment
/// size: 3
/// identity: 0
/// op:
/// 0 1 2
/// 1 2 2
/// 2 2 2
/// hom: a->1 b->0
/// F:
/// 0 0
/// 1 1
/// 2 2
/// ```
///
/// The `hom:` line declares the alphabet; its order is the declaration order.
pub fn load_monoid_table(path: &Path) -> Result<RecognizableRelation> {
    parse_monoid_table(&std::fs::read_to_string(path)?)
}

pub fn parse_monoid_table(text: &str) -> Result<RecognizableRelation> {
    let mut size: Option<usize> = None;
    let mut identity: Option<usize> = None;
    let mut rows: Vec<Vec<usize>> = Vec::new();
    let mut hom: Option<(Vec<char>, Vec<usize>)> = None;
    let mut pairs: BTreeSet<(usize, usize)> = BTreeSet::new();

    #[derive(PartialEq)]
    enum Section {
        Preamble,
        Op,
        Pairs,
    }
    let mut section = Section::Preamble;

    for (lineno, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let fail = |msg: String| Error::Parse(format!("line {}: {}", lineno + 1, msg));

        if let Some(rest) = line.strip_prefix("size:") {
            size = Some(parse_num(rest)?);
            continue;
        }
        if let Some(rest) = line.strip_prefix("identity:") {
            identity = Some(parse_num(rest)?);
            continue;
        }
        if line == "op:" {
            section = Section::Op;
            continue;
        }
        if let Some(rest) = line.strip_prefix("hom:") {
            let mut symbols = Vec::new();
            let mut images = Vec::new();
            for entry in rest.split_whitespace() {
                let (sym, idx) = entry
                    .split_once("->")
                    .ok_or_else(|| fail(format!("expected <symbol>-><index>, got '{entry}'")))?;
                let mut chars = sym.chars();
                match (chars.next(), chars.next()) {
                    (Some(ch), None) => symbols.push(ch),
                    _ => return Err(fail(format!("symbol must be a single character: '{sym}'"))),
                }
                images.push(parse_num(idx)?);
            }
            hom = Some((symbols, images));
            section = Section::Preamble;
            continue;
        }
        if line == "F:" {
            section = Section::Pairs;
            continue;
        }
        match section {
            Section::Op => {
                rows.push(
                    line.split_whitespace()
                        .map(parse_num)
                        .collect::<Result<Vec<_>>>()?,
                );
            }
            Section::Pairs => {
                let nums: Vec<usize> = line
                    .split_whitespace()
                    .map(parse_num)
                    .collect::<Result<Vec<_>>>()?;
                if nums.len() != 2 {
                    return Err(fail(format!("expected an element pair, got '{line}'")));
                }
                pairs.insert((nums[0], nums[1]));
            }
            Section::Preamble => {
                return Err(fail(format!("unexpected line '{line}'")));
            }
        }
    }

    let size = size.ok_or_else(|| Error::Parse("missing 'size:' line".to_string()))?;
    let identity = identity.ok_or_else(|| Error::Parse("missing 'identity:' line".to_string()))?;
    if rows.len() != size {
        return Err(Error::Parse(format!(
            "operation table has {} rows, expected {}",
            rows.len(),
            size
        )));
    }
    let (symbols, images) = hom.ok_or_else(|| Error::Parse("missing 'hom:' line".to_string()))?;
    if symbols.is_empty() {
        return Err(Error::EmptyAlphabet);
    }
    let monoid = FiniteMonoid::new(identity, rows)?;
    let alpha = Alphabet::new(symbols)?;
    let morphism = MonoidMorphism::new(monoid, alpha, images)?;
    RecognizableRelation::new(morphism, pairs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> [char; 2] {
        ['a', 'b']
    }

    #[test]
    fn eval_on_empty_string_is_identity() {
        let rel = RecognizableRelation::symbol_count('a', 1, &ab()).unwrap();
        let m = rel.morphism();
        assert_eq!(m.eval("").unwrap(), m.monoid().identity());
    }

    #[test]
    fn count_morphism_saturates() {
        // elements 0, 1, >1 for bound 1
        let rel = RecognizableRelation::symbol_count('a', 1, &ab()).unwrap();
        let m = rel.morphism();
        assert_eq!(m.eval("bab").unwrap(), 1);
        assert_eq!(m.monoid().name(m.eval("bab").unwrap()), "1");
        assert_eq!(m.eval("aa").unwrap(), 2);
        assert_eq!(m.monoid().name(m.eval("aa").unwrap()), ">1");
        assert!(matches!(
            m.eval("abc"),
            Err(Error::SymbolNotInAlphabet('c'))
        ));
    }

    #[test]
    fn count_relation_examples() {
        let d1 = RecognizableRelation::symbol_count('a', 1, &ab()).unwrap();
        assert!(d1.related("bab", "ab").unwrap());
        assert!(!d1.related("aa", "b").unwrap());
        assert!(d1.related("aab", "aaab").unwrap()); // both exceed the bound
        let d2 = RecognizableRelation::symbol_count('a', 2, &ab()).unwrap();
        assert!(!d2.related("aab", "aaab").unwrap());
    }

    #[test]
    fn count_requires_declared_symbol() {
        assert!(matches!(
            RecognizableRelation::symbol_count('c', 1, &ab()),
            Err(Error::SymbolNotInAlphabet('c'))
        ));
    }

    #[test]
    fn prefix_suffix_monoid_size() {
        // strings of length < 2 (λ, a, b) plus the 4 prefix/suffix pairs
        let rel = RecognizableRelation::prefix_suffix(1, 1, &ab()).unwrap();
        assert_eq!(rel.morphism().monoid().size(), 7);
    }

    #[test]
    fn prefix_suffix_relation_examples() {
        let rel = RecognizableRelation::prefix_suffix(1, 1, &ab()).unwrap();
        assert!(rel.related("aba", "aa").unwrap()); // both a…a
        assert!(!rel.related("ab", "ba").unwrap());
        assert!(rel.related("b", "b").unwrap()); // short strings only relate to themselves
        assert!(!rel.related("a", "aa").unwrap());
    }

    #[test]
    fn trivial_relates_everything() {
        let rel = RecognizableRelation::trivial(&['a', 'b', 'c', 'z']).unwrap();
        assert!(rel.related("abc", "z").unwrap());
        assert!(rel.related("", "a").unwrap());
        assert_eq!(rel.morphism().eval("abab").unwrap(), 0);
        assert!(matches!(
            RecognizableRelation::trivial(&[]),
            Err(Error::EmptyAlphabet)
        ));
    }

    #[test]
    fn product_is_conjunction() {
        let kl = RecognizableRelation::prefix_suffix(1, 1, &ab()).unwrap();
        let cnt = RecognizableRelation::symbol_count('a', 1, &ab()).unwrap();
        let prod = kl.product(&cnt).unwrap();
        // prefix/suffix holds but the a-counts 1 vs 2 differ under bound 1
        assert!(kl.related("ab", "aab").unwrap());
        assert!(!cnt.related("ab", "aab").unwrap());
        assert!(!prod.related("ab", "aab").unwrap());
        // both counts saturate past the bound, so the product keeps the pair
        assert!(prod.related("aba", "aa").unwrap());
        // trivial is neutral
        let triv = RecognizableRelation::trivial(&ab()).unwrap();
        let tp = triv.product(&cnt).unwrap();
        for (x, y) in [("a", "ab"), ("aa", "b"), ("bab", "ab"), ("", "")] {
            assert_eq!(tp.related(x, y).unwrap(), cnt.related(x, y).unwrap());
        }
    }

    #[test]
    fn product_rejects_mismatched_alphabets() {
        let r1 = RecognizableRelation::trivial(&['a']).unwrap();
        let r2 = RecognizableRelation::trivial(&['b']).unwrap();
        assert!(matches!(r1.product(&r2), Err(Error::AlphabetMismatch)));
    }

    #[test]
    fn validate_accepts_builtins() {
        for rel in [
            RecognizableRelation::trivial(&ab()).unwrap(),
            RecognizableRelation::prefix_suffix(1, 1, &ab()).unwrap(),
            RecognizableRelation::prefix_suffix(0, 0, &ab()).unwrap(),
            RecognizableRelation::symbol_count('a', 0, &ab()).unwrap(),
        ] {
            assert!(rel.validate().is_empty());
        }
    }

    #[test]
    fn validate_reports_broken_symmetry() {
        // two elements, F = {(0,0), (1,1), (0,1)} with no (1,0)
        let monoid = FiniteMonoid::new(0, vec![vec![0, 1], vec![1, 1]]).unwrap();
        let alpha = Alphabet::new(['a']).unwrap();
        let morphism = MonoidMorphism::new(monoid, alpha, vec![1]).unwrap();
        let rel = RecognizableRelation::new(
            morphism,
            BTreeSet::from([(0, 0), (1, 1), (0, 1)]),
        )
        .unwrap();
        let diags = rel.validate();
        assert!(diags
            .iter()
            .any(|d| matches!(d, RelationDiagnostic::NotSymmetric { pair: (0, 1) })));
    }

    #[test]
    fn validate_reports_broken_identity() {
        // op(identity, 1) = 0, violating the identity law
        let monoid = FiniteMonoid::new(0, vec![vec![0, 0], vec![1, 1]]).unwrap();
        let alpha = Alphabet::new(['a']).unwrap();
        let morphism = MonoidMorphism::new(monoid, alpha, vec![1]).unwrap();
        let rel =
            RecognizableRelation::new(morphism, BTreeSet::from([(0, 0), (1, 1)])).unwrap();
        assert!(rel
            .validate()
            .iter()
            .any(|d| matches!(d, RelationDiagnostic::LeftIdentityBroken { element: 1 })));
    }

    #[test]
    fn junk_on_unreachable_elements_is_ignored() {
        // element 2 is unreachable; its missing diagonal pair is not reported
        let table = vec![vec![0, 1, 2], vec![1, 1, 2], vec![2, 2, 2]];
        let monoid = FiniteMonoid::new(0, table).unwrap();
        let alpha = Alphabet::new(['a']).unwrap();
        let morphism = MonoidMorphism::new(monoid, alpha, vec![1]).unwrap();
        let rel =
            RecognizableRelation::new(morphism, BTreeSet::from([(0, 0), (1, 1)])).unwrap();
        assert!(rel.validate().is_empty());
    }

    #[test]
    fn count_occurrences_examples() {
        assert_eq!(count_occurrences('a', ""), 0);
        assert_eq!(count_occurrences('a', "bab"), 1);
        assert_eq!(count_occurrences('b', "bbab"), 3);
    }

    #[test]
    fn spec_parsing_round_trips() {
        for text in [
            "trivial",
            "kl:1,2",
            "count:a,1",
            "product:(kl:1,1;count:a,1)",
            "product:(product:(trivial;kl:0,2);count:b,0)",
            "table:some/file.monoid",
        ] {
            let spec = RelationSpec::parse(text).unwrap();
            assert_eq!(spec.to_string(), text);
        }
        assert!(RelationSpec::parse("nonsense").is_err());
        assert!(RelationSpec::parse("count:ab,1").is_err());
        assert!(RelationSpec::parse("product:(trivial)").is_err());
    }

    #[test]
    fn spec_builds_match_constructors() {
        let spec = RelationSpec::parse("product:(kl:1,1;count:a,1)").unwrap();
        let built = spec.build(&ab()).unwrap();
        let direct = RecognizableRelation::prefix_suffix(1, 1, &ab())
            .unwrap()
            .product(&RecognizableRelation::symbol_count('a', 1, &ab()).unwrap())
            .unwrap();
        assert_eq!(built, direct);
    }

    #[test]
    fn table_format_parses() {
        let rel = parse_monoid_table(
            "# saturating a-counter with bound 1\n\
             size: 3\n\
             identity: 0\n\
             op:\n\
             0 1 2\n\
             1 2 2\n\
             2 2 2\n\
             hom: a->1 b->0\n\
             F:\n\
             0 0\n\
             1 1\n\
             2 2\n",
        )
        .unwrap();
        assert!(rel.validate().is_empty());
        let direct = RecognizableRelation::symbol_count('a', 1, &ab()).unwrap();
        for (x, y) in [("bab", "ab"), ("aa", "b"), ("aab", "aaab"), ("", "b")] {
            assert_eq!(rel.related(x, y).unwrap(), direct.related(x, y).unwrap());
        }
    }

    #[test]
    fn homomorphism_law_exhaustive() {
        let rels = [
            RecognizableRelation::prefix_suffix(1, 1, &ab()).unwrap(),
            RecognizableRelation::prefix_suffix(2, 0, &ab()).unwrap(),
            RecognizableRelation::symbol_count('b', 2, &ab()).unwrap(),
        ];
        let words = all_words(4);
        for rel in &rels {
            let m = rel.morphism();
            for u in &words {
                for v in &words {
                    let uv = format!("{u}{v}");
                    assert_eq!(
                        m.eval(&uv).unwrap(),
                        m.monoid().op(m.eval(u).unwrap(), m.eval(v).unwrap()),
                        "homomorphism law failed at u={u:?} v={v:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn equivalence_law_exhaustive() {
        let rels = [
            RecognizableRelation::trivial(&ab()).unwrap(),
            RecognizableRelation::prefix_suffix(1, 1, &ab()).unwrap(),
            RecognizableRelation::symbol_count('a', 1, &ab()).unwrap(),
            RecognizableRelation::prefix_suffix(1, 1, &ab())
                .unwrap()
                .product(&RecognizableRelation::symbol_count('a', 1, &ab()).unwrap())
                .unwrap(),
        ];
        let words = all_words(4);
        for rel in &rels {
            for x in &words {
                assert!(rel.related(x, x).unwrap(), "not reflexive at {x:?}");
                for y in &words {
                    let xy = rel.related(x, y).unwrap();
                    assert_eq!(xy, rel.related(y, x).unwrap(), "not symmetric at {x:?} {y:?}");
                    if xy {
                        for z in &words {
                            if rel.related(y, z).unwrap() {
                                assert!(
                                    rel.related(x, z).unwrap(),
                                    "not transitive at {x:?} {y:?} {z:?}"
                                );
                            }
                        }
                    }
                }
            }
        }
    }

    fn all_words(max_len: usize) -> Vec<String> {
        let mut out = vec![String::new()];
        let mut layer = vec![String::new()];
        for _ in 0..max_len {
            layer = layer
                .iter()
                .flat_map(|s| ['a', 'b'].iter().map(move |&c| format!("{s}{c}")))
                .collect();
            out.extend(layer.iter().cloned());
        }
        out
    }
}
