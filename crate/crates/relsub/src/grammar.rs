//! Context-free grammars: representation, a line-oriented text format,
//! Chomsky normal form, CYK membership with unit-rule closure, trimming, and
//! bounded language enumeration.
//!
//! Enumeration is deliberately simple (length-stratified fixpoint) because it
//! doubles as the brute-force oracle for every language-level claim in the
//! crate: soundness, completeness, and normal-form conversions are all
//! checked by comparing enumerations.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::rc::Rc;

use crate::alphabet::Alphabet;
use crate::{Error, Result};

/// Construction-facing symbol: a nonterminal by name or a terminal character.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Sym {
    Nt(String),
    T(char),
}

/// Shorthand for [`Sym::Nt`].
pub fn nt(name: impl Into<String>) -> Sym {
    Sym::Nt(name.into())
}

/// Shorthand for [`Sym::T`].
pub fn t(ch: char) -> Sym {
    Sym::T(ch)
}

/// Interned symbol inside a grammar: nonterminals are dense indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    Nt(usize),
    T(char),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Production {
    pub lhs: usize,
    pub rhs: Vec<Symbol>,
}

/// A context-free grammar. Nonterminal identity is the name; the terminal
/// alphabet is ordered and that order drives every length-lexicographic
/// comparison made with this grammar.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cfg {
    names: Vec<String>,
    name_index: HashMap<String, usize>,
    alphabet: Alphabet,
    productions: Vec<Production>, // grouped by lhs in nonterminal order
    start: usize,
}

impl Cfg {
    pub fn builder(start: impl Into<String>) -> CfgBuilder {
        CfgBuilder {
            start: start.into(),
            alphabet_override: None,
            rules: Vec::new(),
        }
    }

    pub fn start(&self) -> &str {
        &self.names[self.start]
    }

    pub fn start_id(&self) -> usize {
        self.start
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn nonterminals(&self) -> impl Iterator<Item = &str> {
        self.names.iter().map(String::as_str)
    }

    pub fn nonterminal_count(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, id: usize) -> &str {
        &self.names[id]
    }

    pub fn nt_id(&self, name: &str) -> Option<usize> {
        self.name_index.get(name).copied()
    }

    pub fn productions(&self) -> &[Production] {
        &self.productions
    }

    pub fn rule_count(&self) -> usize {
        self.productions.len()
    }

    /// Production indices per nonterminal, one pass.
    fn by_lhs(&self) -> Vec<Vec<usize>> {
        let mut buckets = vec![Vec::new(); self.names.len()];
        for (i, p) in self.productions.iter().enumerate() {
            buckets[p.lhs].push(i);
        }
        buckets
    }

    /// Per-nonterminal flag: derives at least one terminal string.
    pub fn productive(&self) -> Vec<bool> {
        let mut productive = vec![false; self.names.len()];
        loop {
            let mut changed = false;
            for p in &self.productions {
                if productive[p.lhs] {
                    continue;
                }
                let ok = p.rhs.iter().all(|s| match s {
                    Symbol::T(_) => true,
                    Symbol::Nt(v) => productive[*v],
                });
                if ok {
                    productive[p.lhs] = true;
                    changed = true;
                }
            }
            if !changed {
                return productive;
            }
        }
    }

    /// Per-nonterminal flag: reachable from the start symbol through rules
    /// whose nonterminals are all productive.
    pub fn reachable(&self) -> Vec<bool> {
        let productive = self.productive();
        let by_lhs = self.by_lhs();
        let mut reachable = vec![false; self.names.len()];
        let mut stack = vec![self.start];
        reachable[self.start] = true;
        while let Some(v) = stack.pop() {
            for &pi in &by_lhs[v] {
                let p = &self.productions[pi];
                let alive = p.rhs.iter().all(|s| match s {
                    Symbol::T(_) => true,
                    Symbol::Nt(u) => productive[*u],
                });
                if !alive {
                    continue;
                }
                for s in &p.rhs {
                    if let Symbol::Nt(u) = s {
                        if !reachable[*u] {
                            reachable[*u] = true;
                            stack.push(*u);
                        }
                    }
                }
            }
        }
        reachable
    }

    pub fn is_trim(&self) -> bool {
        let productive = self.productive();
        let reachable = self.reachable();
        (0..self.names.len()).all(|v| reachable[v] && (productive[v] || v == self.start))
            && self.productions.iter().all(|p| {
                p.rhs.iter().all(|s| match s {
                    Symbol::T(_) => true,
                    Symbol::Nt(u) => productive[*u],
                })
            })
    }

    /// Language-preserving removal of nonterminals that derive no terminal
    /// string or are unreachable from the start. The start symbol itself is
    /// always kept, so the empty language stays representable.
    pub fn trim(&self) -> Cfg {
        let productive = self.productive();
        let reachable = self.reachable();
        let keep: Vec<bool> = (0..self.names.len())
            .map(|v| reachable[v] && (productive[v] || v == self.start))
            .collect();
        let mut remap = vec![usize::MAX; self.names.len()];
        let mut names = Vec::new();
        for (v, &k) in keep.iter().enumerate() {
            if k {
                remap[v] = names.len();
                names.push(self.names[v].clone());
            }
        }
        let productions: Vec<Production> = self
            .productions
            .iter()
            .filter(|p| {
                keep[p.lhs]
                    && p.rhs.iter().all(|s| match s {
                        Symbol::T(_) => true,
                        Symbol::Nt(u) => keep[*u] && productive[*u],
                    })
            })
            .map(|p| Production {
                lhs: remap[p.lhs],
                rhs: p
                    .rhs
                    .iter()
                    .map(|s| match s {
                        Symbol::T(ch) => Symbol::T(*ch),
                        Symbol::Nt(u) => Symbol::Nt(remap[*u]),
                    })
                    .collect(),
            })
            .collect();
        let name_index = names
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, n)| (n, i))
            .collect();
        Cfg {
            names,
            name_index,
            alphabet: self.alphabet.clone(),
            productions,
            start: remap[self.start],
        }
    }

    /// Minimal length of a terminal string derivable from each nonterminal;
    /// `None` for unproductive ones.
    pub fn min_yield_lengths(&self) -> Vec<Option<usize>> {
        let mut best: Vec<Option<usize>> = vec![None; self.names.len()];
        loop {
            let mut changed = false;
            for p in &self.productions {
                let mut total = 0usize;
                let mut ok = true;
                for s in &p.rhs {
                    match s {
                        Symbol::T(_) => total += 1,
                        Symbol::Nt(v) => match best[*v] {
                            Some(l) => total += l,
                            None => {
                                ok = false;
                                break;
                            }
                        },
                    }
                }
                if ok && best[p.lhs].map_or(true, |cur| total < cur) {
                    best[p.lhs] = Some(total);
                    changed = true;
                }
            }
            if !changed {
                return best;
            }
        }
    }

    /// True iff the empty string is in the language.
    pub fn derives_empty(&self) -> bool {
        let mut nullable = vec![false; self.names.len()];
        loop {
            let mut changed = false;
            for p in &self.productions {
                if nullable[p.lhs] {
                    continue;
                }
                let all = p.rhs.iter().all(|s| match s {
                    Symbol::T(_) => false,
                    Symbol::Nt(v) => nullable[*v],
                });
                if all {
                    nullable[p.lhs] = true;
                    changed = true;
                }
            }
            if !changed {
                return nullable[self.start];
            }
        }
    }

    /// Parses the grammar text format:
    ///
    /// ```text
    /// # comment
    /// start: S
    /// S -> A X | A B
    /// A -> 'a'
    /// B -> 'b'
    /// X -> S B
    /// E -> ()
    /// ```
    ///
    /// Terminals are quoted single characters, nonterminals are bare
    /// identifiers, and the empty right-hand side is spelled `()`. The
    /// terminal alphabet is ordered by first occurrence in the text.
    pub fn parse(text: &str) -> Result<Cfg> {
        let mut start_name: Option<String> = None;
        let mut raw_rules: Vec<(String, Vec<Sym>)> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let tokens = tokenize(raw, lineno + 1)?;
            if tokens.is_empty() {
                continue;
            }
            let fail = |msg: String| Error::Parse(format!("line {}: {}", lineno + 1, msg));
            if let Token::Ident(first) = &tokens[0] {
                if first == "start:" {
                    if tokens.len() != 2 {
                        return Err(fail("expected 'start: <nonterminal>'".to_string()));
                    }
                    let Token::Ident(name) = &tokens[1] else {
                        return Err(fail("start symbol must be a bare identifier".to_string()));
                    };
                    if start_name.replace(name.clone()).is_some() {
                        return Err(fail("duplicate 'start:' line".to_string()));
                    }
                    continue;
                }
            }
            let Token::Ident(lhs) = &tokens[0] else {
                return Err(fail("rule must begin with a nonterminal".to_string()));
            };
            if !matches!(&tokens.get(1), Some(Token::Ident(a)) if a == "->") {
                return Err(fail(format!("expected '->' after '{lhs}'")));
            }
            for alt in tokens[2..].split(|tk| matches!(tk, Token::Pipe)) {
                let rhs = parse_alternative(alt).map_err(fail)?;
                raw_rules.push((lhs.clone(), rhs));
            }
        }
        let start_name =
            start_name.ok_or_else(|| Error::Parse("missing 'start:' line".to_string()))?;
        let mut b = Cfg::builder(start_name);
        for (lhs, rhs) in raw_rules {
            b = b.rule(lhs, rhs);
        }
        b.build()
    }
}

fn parse_alternative(tokens: &[Token]) -> std::result::Result<Vec<Sym>, String> {
    if tokens.is_empty() {
        return Err("empty alternative (use '()' for the empty string)".to_string());
    }
    if tokens.iter().any(|tk| matches!(tk, Token::Lambda)) {
        if tokens.len() != 1 {
            return Err("'()' must stand alone in an alternative".to_string());
        }
        return Ok(Vec::new());
    }
    tokens
        .iter()
        .map(|tk| match tk {
            Token::Ident(name) if name == "->" => Err("unexpected '->'".to_string()),
            Token::Ident(name) => Ok(Sym::Nt(name.clone())),
            Token::Terminal(ch) => Ok(Sym::T(*ch)),
            Token::Pipe | Token::Lambda => unreachable!(),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Ident(String),
    Terminal(char),
    Pipe,
    Lambda,
}

fn tokenize(line: &str, lineno: usize) -> Result<Vec<Token>> {
    let fail = |msg: String| Error::Parse(format!("line {lineno}: {msg}"));
    let chars: Vec<char> = line.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let ch = chars[i];
        match ch {
            '#' => break,
            c if c.is_whitespace() => i += 1,
            '|' => {
                tokens.push(Token::Pipe);
                i += 1;
            }
            '\'' => {
                let content = *chars
                    .get(i + 1)
                    .ok_or_else(|| fail("unterminated terminal quote".to_string()))?;
                if chars.get(i + 2) != Some(&'\'') {
                    return Err(fail(
                        "terminal must be a single quoted character".to_string(),
                    ));
                }
                tokens.push(Token::Terminal(content));
                i += 3;
            }
            '(' => {
                if chars.get(i + 1) != Some(&')') {
                    return Err(fail("expected '()'".to_string()));
                }
                tokens.push(Token::Lambda);
                i += 2;
            }
            ')' => return Err(fail("unexpected ')'".to_string())),
            _ => {
                let begin = i;
                while i < chars.len()
                    && !chars[i].is_whitespace()
                    && !matches!(chars[i], '#' | '|' | '\'' | '(' | ')')
                {
                    i += 1;
                }
                tokens.push(Token::Ident(chars[begin..i].iter().collect()));
            }
        }
    }
    Ok(tokens)
}

impl fmt::Display for Cfg {
    /// The text format above. Printing then parsing reproduces the grammar
    /// exactly as long as nonterminal names avoid the format's reserved
    /// characters (whitespace, `' | # ( )`).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "start: {}", self.start())?;
        let by_lhs = self.by_lhs();
        for v in 0..self.names.len() {
            if by_lhs[v].is_empty() {
                continue;
            }
            let alts: Vec<String> = by_lhs[v]
                .iter()
                .map(|&pi| {
                    let p = &self.productions[pi];
                    if p.rhs.is_empty() {
                        "()".to_string()
                    } else {
                        p.rhs
                            .iter()
                            .map(|s| match s {
                                Symbol::Nt(u) => self.names[*u].clone(),
                                Symbol::T(ch) => format!("'{ch}'"),
                            })
                            .collect::<Vec<_>>()
                            .join(" ")
                    }
                })
                .collect();
            writeln!(f, "{} -> {}", self.names[v], alts.join(" | "))?;
        }
        Ok(())
    }
}

pub struct CfgBuilder {
    start: String,
    alphabet_override: Option<Vec<char>>,
    rules: Vec<(String, Vec<Sym>)>,
}

impl CfgBuilder {
    pub fn rule(mut self, lhs: impl Into<String>, rhs: impl IntoIterator<Item = Sym>) -> Self {
        self.rules.push((lhs.into(), rhs.into_iter().collect()));
        self
    }

    /// Fixes the terminal alphabet (and its order) instead of deriving it
    /// from first occurrence. Must cover every terminal used.
    pub fn alphabet(mut self, symbols: impl IntoIterator<Item = char>) -> Self {
        self.alphabet_override = Some(symbols.into_iter().collect());
        self
    }

    pub fn build(self) -> Result<Cfg> {
        let mut names: Vec<String> = Vec::new();
        let mut name_index: HashMap<String, usize> = HashMap::new();
        fn intern(
            name: &str,
            names: &mut Vec<String>,
            idx: &mut HashMap<String, usize>,
        ) -> usize {
            if let Some(&i) = idx.get(name) {
                i
            } else {
                let i = names.len();
                names.push(name.to_string());
                idx.insert(name.to_string(), i);
                i
            }
        }
        // nonterminal order: start, then left-hand sides by first occurrence,
        // then body-only names; this makes print-then-parse a fixpoint
        let start = intern(&self.start, &mut names, &mut name_index);
        for (lhs, _) in &self.rules {
            intern(lhs, &mut names, &mut name_index);
        }
        let mut buckets: Vec<Vec<&(String, Vec<Sym>)>> = vec![Vec::new(); names.len()];
        for rule in &self.rules {
            buckets[name_index[&rule.0]].push(rule);
        }
        let grouped: Vec<&(String, Vec<Sym>)> = buckets.into_iter().flatten().collect();

        let mut terminal_order: Vec<char> = Vec::new();
        let mut terminal_seen: HashSet<char> = HashSet::new();
        let mut productions = Vec::with_capacity(grouped.len());
        for (lhs, rhs) in grouped {
            let lhs_id = name_index[lhs];
            let rhs_syms = rhs
                .iter()
                .map(|s| match s {
                    Sym::Nt(name) => Symbol::Nt(intern(name, &mut names, &mut name_index)),
                    Sym::T(ch) => {
                        if terminal_seen.insert(*ch) {
                            terminal_order.push(*ch);
                        }
                        Symbol::T(*ch)
                    }
                })
                .collect();
            productions.push(Production {
                lhs: lhs_id,
                rhs: rhs_syms,
            });
        }
        let alphabet = match self.alphabet_override {
            Some(symbols) => {
                let alpha = Alphabet::new(symbols)?;
                for ch in &terminal_order {
                    if !alpha.contains(*ch) {
                        return Err(Error::SymbolNotInAlphabet(*ch));
                    }
                }
                alpha
            }
            None => Alphabet::new(terminal_order)?,
        };
        Ok(Cfg {
            names,
            name_index,
            alphabet,
            productions,
            start,
        })
    }
}

/// A grammar in Chomsky normal form: every rule is `A -> B C`, `A -> 'a'`, or
/// `S -> ()` for the start symbol only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfCfg {
    inner: Cfg,
}

impl CnfCfg {
    pub fn new(g: Cfg) -> Result<CnfCfg> {
        let start = g.start_id();
        let mut has_lambda = false;
        for p in g.productions() {
            match p.rhs.as_slice() {
                [] if p.lhs == start => has_lambda = true,
                [] => {
                    return Err(Error::NotNormalForm(format!(
                        "empty rule on non-start nonterminal '{}'",
                        g.name(p.lhs)
                    )))
                }
                [Symbol::T(_)] => {}
                [Symbol::Nt(_), Symbol::Nt(_)] => {}
                _ => {
                    return Err(Error::NotNormalForm(format!(
                        "rule on '{}' is neither binary, terminal, nor start -> ()",
                        g.name(p.lhs)
                    )))
                }
            }
        }
        if has_lambda {
            let start_on_rhs = g
                .productions()
                .iter()
                .any(|p| p.rhs.contains(&Symbol::Nt(start)));
            if start_on_rhs {
                return Err(Error::NotNormalForm(
                    "start symbol derives the empty string but occurs on a right-hand side"
                        .to_string(),
                ));
            }
        }
        Ok(CnfCfg { inner: g })
    }

    pub fn as_cfg(&self) -> &Cfg {
        &self.inner
    }

    pub fn into_cfg(self) -> Cfg {
        self.inner
    }
}

impl std::ops::Deref for CnfCfg {
    type Target = Cfg;

    fn deref(&self) -> &Cfg {
        &self.inner
    }
}

impl fmt::Display for CnfCfg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.inner.fmt(f)
    }
}

fn fresh_name(base: &str, taken: &HashSet<String>) -> String {
    for i in 0.. {
        let candidate = format!("{base}{i}");
        if !taken.contains(&candidate) {
            return candidate;
        }
    }
    unreachable!()
}

/// Converts any grammar to Chomsky normal form. The steps run in a fixed
/// order: fresh start, terminal isolation, binarization, nullable
/// elimination, unit elimination, useless-symbol removal.
pub fn to_cnf(g: &Cfg) -> CnfCfg {
    type WRule = (String, Vec<Sym>);
    let mut taken: HashSet<String> = g.nonterminals().map(str::to_string).collect();
    let mut rules: Vec<WRule> = g
        .productions()
        .iter()
        .map(|p| {
            (
                g.name(p.lhs).to_string(),
                p.rhs
                    .iter()
                    .map(|s| match s {
                        Symbol::Nt(v) => Sym::Nt(g.name(*v).to_string()),
                        Symbol::T(ch) => Sym::T(*ch),
                    })
                    .collect(),
            )
        })
        .collect();

    // fresh start, never on a right-hand side
    let start = fresh_name(g.start(), &taken);
    taken.insert(start.clone());
    rules.insert(0, (start.clone(), vec![Sym::Nt(g.start().to_string())]));

    // terminal isolation: terminals may only appear in length-1 bodies
    let mut helper_for: HashMap<char, String> = HashMap::new();
    let mut helper_rules: Vec<WRule> = Vec::new();
    for (_, rhs) in rules.iter_mut() {
        if rhs.len() < 2 {
            continue;
        }
        for sym in rhs.iter_mut() {
            if let Sym::T(ch) = *sym {
                let name = helper_for.entry(ch).or_insert_with(|| {
                    let base = if ch.is_alphanumeric() {
                        format!("T_{ch}")
                    } else {
                        format!("T_u{:x}_", ch as u32)
                    };
                    let name = fresh_name(&base, &taken);
                    taken.insert(name.clone());
                    helper_rules.push((name.clone(), vec![Sym::T(ch)]));
                    name
                });
                *sym = Sym::Nt(name.clone());
            }
        }
    }
    rules.extend(helper_rules);

    // binarization
    let mut binarized: Vec<WRule> = Vec::new();
    for (lhs, rhs) in rules {
        if rhs.len() <= 2 {
            binarized.push((lhs, rhs));
            continue;
        }
        let mut current = lhs;
        let mut rest = rhs;
        while rest.len() > 2 {
            let head = rest.remove(0);
            let link = fresh_name("B", &taken);
            taken.insert(link.clone());
            binarized.push((current, vec![head, Sym::Nt(link.clone())]));
            current = link;
        }
        binarized.push((current, rest));
    }

    // nullable elimination
    let mut nullable: HashSet<String> = HashSet::new();
    loop {
        let before = nullable.len();
        for (lhs, rhs) in &binarized {
            if rhs
                .iter()
                .all(|s| matches!(s, Sym::Nt(n) if nullable.contains(n)))
            {
                nullable.insert(lhs.clone());
            }
        }
        if nullable.len() == before {
            break;
        }
    }
    let start_nullable = nullable.contains(&start);
    let mut expanded: Vec<WRule> = Vec::new();
    let mut seen_rules: HashSet<WRule> = HashSet::new();
    for (lhs, rhs) in &binarized {
        let nullable_at: Vec<usize> = rhs
            .iter()
            .enumerate()
            .filter(|(_, s)| matches!(s, Sym::Nt(n) if nullable.contains(n)))
            .map(|(i, _)| i)
            .collect();
        for mask in 0..(1usize << nullable_at.len()) {
            let dropped: HashSet<usize> = nullable_at
                .iter()
                .enumerate()
                .filter(|(bit, _)| mask & (1 << bit) != 0)
                .map(|(_, &i)| i)
                .collect();
            let variant: Vec<Sym> = rhs
                .iter()
                .enumerate()
                .filter(|(i, _)| !dropped.contains(i))
                .map(|(_, s)| s.clone())
                .collect();
            if !variant.is_empty() {
                let rule = (lhs.clone(), variant);
                if seen_rules.insert(rule.clone()) {
                    expanded.push(rule);
                }
            }
        }
    }
    if start_nullable {
        let rule = (start.clone(), Vec::new());
        if seen_rules.insert(rule.clone()) {
            expanded.push(rule);
        }
    }

    // unit elimination
    let unit_target = |rhs: &[Sym]| match rhs {
        [Sym::Nt(n)] => Some(n.clone()),
        _ => None,
    };
    let mut lhs_order: Vec<String> = Vec::new();
    let mut lhs_seen: HashSet<String> = HashSet::new();
    for (lhs, _) in &expanded {
        if lhs_seen.insert(lhs.clone()) {
            lhs_order.push(lhs.clone());
        }
    }
    let mut unit_free: Vec<WRule> = Vec::new();
    let mut emitted: HashSet<WRule> = HashSet::new();
    for lhs in &lhs_order {
        // unit-reachable targets from lhs, in visit order
        let mut reach: Vec<String> = vec![lhs.clone()];
        let mut seen: HashSet<String> = HashSet::from([lhs.clone()]);
        let mut i = 0;
        while i < reach.len() {
            let cur = reach[i].clone();
            for (l, rhs) in &expanded {
                if *l == cur {
                    if let Some(next) = unit_target(rhs) {
                        if seen.insert(next.clone()) {
                            reach.push(next);
                        }
                    }
                }
            }
            i += 1;
        }
        for target in &reach {
            for (l, rhs) in &expanded {
                if l == target && unit_target(rhs).is_none() {
                    let rule = (lhs.clone(), rhs.clone());
                    if emitted.insert(rule.clone()) {
                        unit_free.push(rule);
                    }
                }
            }
        }
    }

    // useless-symbol removal happens on the assembled grammar
    let mut b = Cfg::builder(start).alphabet(g.alphabet().symbols().iter().copied());
    for (lhs, rhs) in unit_free {
        b = b.rule(lhs, rhs);
    }
    let assembled = b.build().expect("normal-form assembly cannot fail").trim();
    CnfCfg::new(assembled).expect("conversion produces Chomsky normal form")
}

fn cyk_shaped(g: &Cfg) -> bool {
    let mut has_lambda = false;
    for p in g.productions() {
        match p.rhs.as_slice() {
            [] if p.lhs == g.start_id() => has_lambda = true,
            [] => return false,
            [Symbol::T(_)] | [Symbol::Nt(_)] => {}
            [Symbol::Nt(_), Symbol::Nt(_)] => {}
            _ => return false,
        }
    }
    if has_lambda {
        // a nullable start inside a body would need general nullable handling
        let start = g.start_id();
        if g.productions()
            .iter()
            .any(|p| p.rhs.contains(&Symbol::Nt(start)))
        {
            return false;
        }
    }
    true
}

/// CYK recognizer with unit-rule closure, prepared once per grammar.
///
/// Accepts grammars whose rules are binary nonterminal pairs, single
/// nonterminals, single terminals, or an empty body on the start symbol;
/// anything else is converted to normal form first.
pub struct Recognizer {
    grammar: Cfg,
    term_rules: HashMap<char, Vec<usize>>,
    bin_by_left: Vec<Vec<(usize, usize)>>, // B -> [(A, C)] for A -> B C
    unit_parents: Vec<Vec<usize>>,         // X -> [A] for A -> X
    accepts_empty: bool,
}

impl Recognizer {
    pub fn new(g: &Cfg) -> Recognizer {
        let grammar = if cyk_shaped(g) {
            g.clone()
        } else {
            to_cnf(g).into_cfg()
        };
        let n = grammar.nonterminal_count();
        let mut term_rules: HashMap<char, Vec<usize>> = HashMap::new();
        let mut bin_by_left = vec![Vec::new(); n];
        let mut unit_parents = vec![Vec::new(); n];
        let mut accepts_empty = false;
        for p in grammar.productions() {
            match p.rhs.as_slice() {
                [] => accepts_empty = true,
                [Symbol::T(ch)] => term_rules.entry(*ch).or_default().push(p.lhs),
                [Symbol::Nt(x)] => unit_parents[*x].push(p.lhs),
                [Symbol::Nt(b), Symbol::Nt(c)] => bin_by_left[*b].push((p.lhs, *c)),
                _ => unreachable!("recognizer grammar is CYK-shaped"),
            }
        }
        Recognizer {
            grammar,
            term_rules,
            bin_by_left,
            unit_parents,
            accepts_empty,
        }
    }

    pub fn grammar(&self) -> &Cfg {
        &self.grammar
    }

    fn close_unit(&self, cell: &mut HashSet<usize>) {
        let mut work: Vec<usize> = cell.iter().copied().collect();
        while let Some(x) = work.pop() {
            for &a in &self.unit_parents[x] {
                if cell.insert(a) {
                    work.push(a);
                }
            }
        }
    }

    pub fn accepts(&self, w: &str) -> bool {
        let chars: Vec<char> = w.chars().collect();
        let n = chars.len();
        if n == 0 {
            return self.accepts_empty;
        }
        // chart[i][l - 1]: nonterminals deriving chars[i..i + l]
        let mut chart: Vec<Vec<HashSet<usize>>> =
            (0..n).map(|i| vec![HashSet::new(); n - i]).collect();
        for (i, &ch) in chars.iter().enumerate() {
            let mut cell = HashSet::new();
            if let Some(lhss) = self.term_rules.get(&ch) {
                cell.extend(lhss.iter().copied());
            }
            self.close_unit(&mut cell);
            chart[i][0] = cell;
        }
        for l in 2..=n {
            for i in 0..=n - l {
                let mut cell = HashSet::new();
                for s in 1..l {
                    let left = &chart[i][s - 1];
                    let right = &chart[i + s][l - s - 1];
                    for &b in left {
                        for &(a, c) in &self.bin_by_left[b] {
                            if right.contains(&c) {
                                cell.insert(a);
                            }
                        }
                    }
                }
                self.close_unit(&mut cell);
                chart[i][l - 1] = cell;
            }
        }
        chart[0][n - 1].contains(&self.grammar.start_id())
    }
}

/// One-shot membership test. Symbols outside the grammar's alphabet simply
/// make the answer `false`. Prefer [`Recognizer`] when testing many strings
/// against one grammar.
pub fn member(g: &Cfg, w: &str) -> bool {
    Recognizer::new(g).accepts(w)
}

/// Bounded languages of every nonterminal, computed bottom-up per length.
pub struct LanguageTable {
    names: Vec<String>,
    name_index: HashMap<String, usize>,
    start: usize,
    max_len: usize,
    sets: Vec<Vec<BTreeSet<Rc<str>>>>, // [nonterminal][length]
}

impl LanguageTable {
    pub fn build(g: &Cfg, max_len: usize) -> LanguageTable {
        let n = g.nonterminal_count();
        let min_len = g.min_yield_lengths();
        let mut pool: HashSet<Rc<str>> = HashSet::new();
        let mut sets: Vec<Vec<BTreeSet<Rc<str>>>> = vec![vec![BTreeSet::new(); max_len + 1]; n];
        for len in 0..=max_len {
            // same-length dependencies (unit chains, empty bodies) need a
            // fixpoint within each length stratum
            loop {
                let mut changed = false;
                for p in g.productions() {
                    let mut fresh: Vec<String> = Vec::new();
                    expand(&p.rhs, len, &mut String::new(), &sets, &min_len, &mut fresh);
                    for s in fresh {
                        let interned = match pool.get(s.as_str()) {
                            Some(rc) => rc.clone(),
                            None => {
                                let rc: Rc<str> = Rc::from(s);
                                pool.insert(rc.clone());
                                rc
                            }
                        };
                        if sets[p.lhs][len].insert(interned) {
                            changed = true;
                        }
                    }
                }
                if !changed {
                    break;
                }
            }
        }
        LanguageTable {
            names: g.nonterminals().map(str::to_string).collect(),
            name_index: g
                .nonterminals()
                .enumerate()
                .map(|(i, s)| (s.to_string(), i))
                .collect(),
            start: g.start_id(),
            max_len,
            sets,
        }
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub fn nonterminals(&self) -> impl Iterator<Item = &str> {
        self.names.iter().map(String::as_str)
    }

    /// All strings of length at most the table bound derivable from the
    /// nonterminal.
    pub fn strings_of(&self, nt: &str) -> Result<BTreeSet<String>> {
        let &id = self
            .name_index
            .get(nt)
            .ok_or_else(|| Error::UnknownNonterminal(nt.to_string()))?;
        Ok(self.sets[id]
            .iter()
            .flatten()
            .map(|rc| rc.to_string())
            .collect())
    }

    pub fn language(&self) -> BTreeSet<String> {
        self.sets[self.start]
            .iter()
            .flatten()
            .map(|rc| rc.to_string())
            .collect()
    }
}

fn expand(
    rhs: &[Symbol],
    remaining: usize,
    prefix: &mut String,
    sets: &[Vec<BTreeSet<Rc<str>>>],
    min_len: &[Option<usize>],
    out: &mut Vec<String>,
) {
    let Some((head, rest)) = rhs.split_first() else {
        if remaining == 0 {
            out.push(prefix.clone());
        }
        return;
    };
    // lower bound on what the rest of the body still needs
    let mut rest_min = 0usize;
    for s in rest {
        match s {
            Symbol::T(_) => rest_min = rest_min.saturating_add(1),
            Symbol::Nt(v) => match min_len[*v] {
                Some(l) => rest_min = rest_min.saturating_add(l),
                None => return, // unproductive tail, nothing to enumerate
            },
        }
    }
    match head {
        Symbol::T(ch) => {
            if remaining >= 1 && remaining - 1 >= rest_min {
                prefix.push(*ch);
                expand(rest, remaining - 1, prefix, sets, min_len, out);
                prefix.pop();
            }
        }
        Symbol::Nt(v) => {
            let Some(own_min) = min_len[*v] else {
                return;
            };
            if remaining < rest_min.saturating_add(own_min) {
                return;
            }
            let upper = remaining - rest_min;
            for l in own_min..=upper {
                for s in &sets[*v][l] {
                    let before = prefix.len();
                    prefix.push_str(s);
                    expand(rest, remaining - l, prefix, sets, min_len, out);
                    prefix.truncate(before);
                }
            }
        }
    }
}

/// Exactly the strings of the language with length at most `max_len`.
pub fn enumerate(g: &Cfg, max_len: usize) -> BTreeSet<String> {
    LanguageTable::build(g, max_len).language()
}

/// Bounded language equality: both grammars enumerate the same strings up to
/// length `n`.
pub fn equivalent_up_to(g1: &Cfg, g2: &Cfg, n: usize) -> bool {
    enumerate(g1, n) == enumerate(g2, n)
}
