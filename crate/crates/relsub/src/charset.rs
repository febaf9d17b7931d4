//! Characteristic-set machinery: minimal terminal yields, minimal contexts,
//! the characteristic sample of a trim grammar, and the transform that
//! annotates nonterminals with the monoid element of their yields.
//!
//! "Minimal" is always length-then-lexicographic under the grammar's declared
//! alphabet order. Pure lexicographic order has no minimum in infinite
//! languages (an ever-growing prefix can keep winning), so the length-first
//! order is the one that makes the minima well defined.

use std::cmp::{Ordering, Reverse};
use std::collections::{BTreeMap, BTreeSet, BinaryHeap, HashMap};
use std::fmt;

use crate::grammar::{Cfg, CnfCfg, Sym, Symbol};
use crate::relation::MonoidMorphism;
use crate::{Error, Result};

/// A pair of flanking strings; wrapping `y` yields `left · y · right`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Context {
    pub left: String,
    pub right: String,
}

impl Context {
    pub fn new(left: impl Into<String>, right: impl Into<String>) -> Context {
        Context {
            left: left.into(),
            right: right.into(),
        }
    }

    pub fn empty() -> Context {
        Context::new("", "")
    }

    pub fn wrap(&self, middle: &str) -> String {
        format!("{}{}{}", self.left, middle, self.right)
    }

    pub fn flank_len(&self) -> usize {
        self.left.chars().count() + self.right.chars().count()
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}, {:?})", self.left, self.right)
    }
}

/// Context order used for all minimization: total flank length, then the
/// left flank length-lexicographically, then the right.
pub fn context_cmp(g: &Cfg, a: &Context, b: &Context) -> Ordering {
    let alpha = g.alphabet();
    a.flank_len()
        .cmp(&b.flank_len())
        .then_with(|| alpha.cmp_length_lex(&a.left, &b.left))
        .then_with(|| alpha.cmp_length_lex(&a.right, &b.right))
}

/// Length-lexicographically minimal terminal string derivable from each
/// nonterminal; `None` for unproductive ones.
fn min_yield_table(g: &Cfg) -> Vec<Option<String>> {
    let alpha = g.alphabet();
    let mut best: Vec<Option<String>> = vec![None; g.nonterminal_count()];
    loop {
        let mut changed = false;
        for p in g.productions() {
            let mut candidate = String::new();
            let mut ok = true;
            for s in &p.rhs {
                match s {
                    Symbol::T(ch) => candidate.push(*ch),
                    Symbol::Nt(v) => match &best[*v] {
                        Some(w) => candidate.push_str(w),
                        None => {
                            ok = false;
                            break;
                        }
                    },
                }
            }
            if !ok {
                continue;
            }
            let better = match &best[p.lhs] {
                None => true,
                Some(cur) => alpha.cmp_length_lex(&candidate, cur) == Ordering::Less,
            };
            if better {
                best[p.lhs] = Some(candidate);
                changed = true;
            }
        }
        if !changed {
            return best;
        }
    }
}

fn resolve(g: &Cfg, alpha: &[Sym]) -> Result<Vec<Symbol>> {
    alpha
        .iter()
        .map(|s| match s {
            Sym::T(ch) => Ok(Symbol::T(*ch)),
            Sym::Nt(name) => g
                .nt_id(name)
                .map(Symbol::Nt)
                .ok_or_else(|| Error::UnknownNonterminal(name.clone())),
        })
        .collect()
}

/// Minimal terminal string derivable from a sentential form. Minimality is
/// compositional under the length-lexicographic order, so the result is the
/// concatenation of the per-symbol minima.
pub fn min_yield(g: &Cfg, alpha: &[Sym]) -> Result<String> {
    let symbols = resolve(g, alpha)?;
    let table = min_yield_table(g);
    yield_of(g, &symbols, &table)
}

fn yield_of(g: &Cfg, symbols: &[Symbol], table: &[Option<String>]) -> Result<String> {
    let mut out = String::new();
    for s in symbols {
        match s {
            Symbol::T(ch) => out.push(*ch),
            Symbol::Nt(v) => match &table[*v] {
                Some(w) => out.push_str(w),
                None => return Err(Error::Unproductive(g.name(*v).to_string())),
            },
        }
    }
    Ok(out)
}

/// Minimal terminal string derivable from a single nonterminal.
pub fn min_yield_of(g: &Cfg, nonterminal: &str) -> Result<String> {
    min_yield(g, &[Sym::Nt(nonterminal.to_string())])
}

/// One minimal context of each nonterminal: flanking terminal strings `x, z`
/// with `start ⇒* x A z`, minimized under [`context_cmp`]. Cheapest-first
/// search from the start symbol; flanking sentential symbols are
/// terminalized with their minimal yields, which is exactly the minimum over
/// all terminalizations.
fn min_context_table(g: &Cfg) -> Vec<Option<Context>> {
    let yields = min_yield_table(g);
    let alpha = g.alphabet();
    let n = g.nonterminal_count();
    let mut by_lhs: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, p) in g.productions().iter().enumerate() {
        by_lhs[p.lhs].push(i);
    }

    type Key = (usize, usize, Vec<(u8, usize)>, Vec<(u8, usize)>);
    let key = |left: &str, right: &str| -> Key {
        (
            left.chars().count() + right.chars().count(),
            left.chars().count(),
            alpha.rank_vec(left),
            alpha.rank_vec(right),
        )
    };

    let mut settled: Vec<Option<Context>> = vec![None; n];
    let mut heap: BinaryHeap<Reverse<(Key, usize, String, String)>> = BinaryHeap::new();
    heap.push(Reverse((key("", ""), g.start_id(), String::new(), String::new())));
    while let Some(Reverse((_, v, left, right))) = heap.pop() {
        if settled[v].is_some() {
            continue;
        }
        settled[v] = Some(Context::new(left.clone(), right.clone()));
        for &pi in &by_lhs[v] {
            let p = &g.productions()[pi];
            for (i, s) in p.rhs.iter().enumerate() {
                let Symbol::Nt(child) = s else { continue };
                if settled[*child].is_some() {
                    continue;
                }
                let Ok(prefix) = yield_of(g, &p.rhs[..i], &yields) else {
                    continue; // unproductive flank, the context never terminalizes
                };
                let Ok(suffix) = yield_of(g, &p.rhs[i + 1..], &yields) else {
                    continue;
                };
                let child_left = format!("{left}{prefix}");
                let child_right = format!("{suffix}{right}");
                heap.push(Reverse((
                    key(&child_left, &child_right),
                    *child,
                    child_left,
                    child_right,
                )));
            }
        }
    }
    settled
}

/// One minimal context of the nonterminal, per [`min_context_table`]. The
/// start symbol's context is the empty pair.
pub fn min_context(g: &Cfg, nonterminal: &str) -> Result<Context> {
    let id = g
        .nt_id(nonterminal)
        .ok_or_else(|| Error::UnknownNonterminal(nonterminal.to_string()))?;
    min_context_table(g)[id]
        .clone()
        .ok_or_else(|| Error::Unreachable(nonterminal.to_string()))
}

fn check_trim(g: &Cfg) -> Result<()> {
    let productive = g.productive();
    let reachable = g.reachable();
    for v in 0..g.nonterminal_count() {
        if !productive[v] && v != g.start_id() {
            return Err(Error::NotTrim(format!(
                "nonterminal '{}' derives no terminal string",
                g.name(v)
            )));
        }
        if !reachable[v] {
            return Err(Error::NotTrim(format!(
                "nonterminal '{}' is unreachable",
                g.name(v)
            )));
        }
    }
    Ok(())
}

/// The characteristic sample of a trim grammar: for every distinct rule body
/// `β`, the minimal yield of `β` wrapped in the minimal context among the
/// rule's left-hand sides. Every string in the sample belongs to the
/// language.
pub fn characteristic_set(g: &Cfg) -> Result<BTreeSet<String>> {
    check_trim(g)?;
    let yields = min_yield_table(g);
    let contexts = min_context_table(g);
    let mut chosen: BTreeMap<Vec<Symbol>, Context> = BTreeMap::new();
    for p in g.productions() {
        let ctx = contexts[p.lhs]
            .clone()
            .ok_or_else(|| Error::Unreachable(g.name(p.lhs).to_string()))?;
        match chosen.get_mut(&p.rhs) {
            None => {
                chosen.insert(p.rhs.clone(), ctx);
            }
            Some(cur) => {
                if context_cmp(g, &ctx, cur) == Ordering::Less {
                    *cur = ctx;
                }
            }
        }
    }
    let mut out = BTreeSet::new();
    for (rhs, ctx) in &chosen {
        out.insert(ctx.wrap(&yield_of(g, rhs, &yields)?));
    }
    Ok(out)
}

/// A grammar whose nonterminals each carry a monoid element: every terminal
/// string derivable from an annotated nonterminal maps to that element.
#[derive(Debug, Clone)]
pub struct TypedCfg {
    cfg: Cfg,
    origins: HashMap<String, (String, usize)>,
}

impl TypedCfg {
    pub fn cfg(&self) -> &Cfg {
        &self.cfg
    }

    pub fn into_cfg(self) -> Cfg {
        self.cfg
    }

    /// `(typed name, original name, monoid element)` for every surviving
    /// annotated nonterminal, in grammar order. The fresh start symbol is not
    /// annotated.
    pub fn typed_nonterminals(&self) -> Vec<(&str, &str, usize)> {
        self.cfg
            .nonterminals()
            .filter_map(|name| {
                self.origins
                    .get(name)
                    .map(|(orig, p)| (name, orig.as_str(), *p))
            })
            .collect()
    }

    pub fn origin(&self, typed_name: &str) -> Option<(&str, usize)> {
        self.origins.get(typed_name).map(|(o, p)| (o.as_str(), *p))
    }
}

/// Annotates a normal-form grammar with monoid elements: `A@p` derives
/// exactly the strings of `A` whose image is `p`. A fresh start symbol is
/// linked to every annotated copy of the old start, and the result is
/// trimmed. The language is unchanged.
///
/// Grammars deriving the empty string are rejected: the empty string is
/// excluded by the learning premise and would force the fresh start to carry
/// the identity annotation only.
pub fn type_transform(g: &CnfCfg, m: &MonoidMorphism) -> Result<TypedCfg> {
    if g.productions().iter().any(|p| p.rhs.is_empty()) {
        return Err(Error::PremiseViolation(
            "the grammar derives the empty string".to_string(),
        ));
    }
    let monoid = m.monoid();
    let size = monoid.size();
    let typed = |name: &str, p: usize| format!("{name}@{p}");
    let start_name = format!("{}@start", g.start());

    let mut b = Cfg::builder(&start_name).alphabet(g.alphabet().symbols().iter().copied());
    for p in 0..size {
        b = b.rule(&start_name, [Sym::Nt(typed(g.start(), p))]);
    }
    for prod in g.productions() {
        match prod.rhs.as_slice() {
            [Symbol::Nt(x), Symbol::Nt(y)] => {
                for p in 0..size {
                    for q in 0..size {
                        b = b.rule(
                            typed(g.name(prod.lhs), monoid.op(p, q)),
                            [
                                Sym::Nt(typed(g.name(*x), p)),
                                Sym::Nt(typed(g.name(*y), q)),
                            ],
                        );
                    }
                }
            }
            [Symbol::T(ch)] => {
                let p = m.symbol_image(*ch)?;
                b = b.rule(typed(g.name(prod.lhs), p), [Sym::T(*ch)]);
            }
            _ => unreachable!("normal form has binary and terminal rules only"),
        }
    }
    let cfg = b.build()?.trim();
    let mut origins = HashMap::new();
    for v in 0..g.nonterminal_count() {
        for p in 0..size {
            let name = typed(g.name(v), p);
            if cfg.nt_id(&name).is_some() {
                origins.insert(name, (g.name(v).to_string(), p));
            }
        }
    }
    Ok(TypedCfg { cfg, origins })
}
