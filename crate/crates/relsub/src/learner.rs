//! The incremental learner. From a finite positive sample it builds a
//! hypothesis grammar with one nonterminal per distinct substring:
//!
//! * a branching rule for every way of splitting a substring in two,
//! * a unit rule between two substrings that share a context in the sample
//!   *and* are related under the supplied equivalence relation,
//! * a terminal rule per single-symbol substring,
//! * a start rule per sample string.
//!
//! The learning loop feeds strings one at a time and rebuilds the hypothesis
//! from the whole accumulated sample whenever the current hypothesis misses
//! one. Growing the sample only ever adds rules, so hypothesis languages grow
//! monotonically along a run.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::sync::Arc;

use crate::charset::Context;
use crate::grammar::{Cfg, Recognizer, Sym};
use crate::relation::RecognizableRelation;
use crate::{Error, Result};

/// A finite set of nonempty positive examples, with the two size measures
/// the complexity accounting is stated in: total length and maximum length.
#[derive(Debug, Clone, Default)]
pub struct Sample {
    strings: Vec<String>,
    index: HashSet<String>,
    desk: usize,
    max_len: usize,
}

impl Sample {
    pub fn empty() -> Sample {
        Sample::default()
    }

    pub fn new<I, S>(strings: I) -> Result<Sample>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut sample = Sample::empty();
        for s in strings {
            sample.insert(&s.into())?;
        }
        Ok(sample)
    }

    /// Adds a string; duplicates are ignored. The empty string is rejected:
    /// the learner's premise excludes it, and dropping it silently would hide
    /// a target outside the learnable class.
    pub fn insert(&mut self, w: &str) -> Result<bool> {
        if w.is_empty() {
            return Err(Error::PremiseViolation(
                "the empty string cannot appear in a sample".to_string(),
            ));
        }
        if self.index.contains(w) {
            return Ok(false);
        }
        self.index.insert(w.to_string());
        self.strings.push(w.to_string());
        self.desk += w.chars().count();
        self.max_len = self.max_len.max(w.chars().count());
        Ok(true)
    }

    pub fn strings(&self) -> &[String] {
        &self.strings
    }

    pub fn contains(&self, w: &str) -> bool {
        self.index.contains(w)
    }

    pub fn len(&self) -> usize {
        self.strings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strings.is_empty()
    }

    /// Sum of the lengths of the sample strings.
    pub fn desk(&self) -> usize {
        self.desk
    }

    /// Length of the longest sample string; 0 for the empty sample.
    pub fn max_len(&self) -> usize {
        self.max_len
    }

    /// All contexts of `x` in the sample: pairs `(l, r)` with `l·x·r` a
    /// sample string. Empty if `x` occurs nowhere.
    pub fn contexts(&self, x: &str) -> BTreeSet<Context> {
        let needle: Vec<char> = x.chars().collect();
        let mut out = BTreeSet::new();
        for w in &self.strings {
            let chars: Vec<char> = w.chars().collect();
            if needle.len() > chars.len() {
                continue;
            }
            for i in 0..=chars.len() - needle.len() {
                if chars[i..i + needle.len()] == needle[..] {
                    out.insert(Context::new(
                        chars[..i].iter().collect::<String>(),
                        chars[i + needle.len()..].iter().collect::<String>(),
                    ));
                }
            }
        }
        out
    }

    /// All distinct nonempty contiguous substrings of the sample strings.
    pub fn substrings(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for w in &self.strings {
            let chars: Vec<char> = w.chars().collect();
            for i in 0..chars.len() {
                for j in i + 1..=chars.len() {
                    out.insert(chars[i..j].iter().collect());
                }
            }
        }
        out
    }
}

fn start_symbol_name(substrings: &[String]) -> String {
    let taken: HashSet<&str> = substrings.iter().map(String::as_str).collect();
    if !taken.contains("S") {
        return "S".to_string();
    }
    for i in 0.. {
        let candidate = format!("S{i}");
        if !taken.contains(candidate.as_str()) {
            return candidate;
        }
    }
    unreachable!()
}

/// Builds the hypothesis grammar for a sample under a relation. Nonterminals
/// are named by their substring; the start symbol gets a fresh name. Unit
/// rules are added in both directions of each qualifying pair; the reflexive
/// ones are omitted as derivable no-ops.
pub fn build_hypothesis(sample: &Sample, relation: &RecognizableRelation) -> Result<Cfg> {
    let alphabet = relation.alphabet();
    for w in sample.strings() {
        alphabet.check_str(w)?;
    }

    // distinct substrings, in length-lex order under the relation's alphabet
    let mut subs: Vec<Vec<char>> = Vec::new();
    let mut sub_id: HashMap<Vec<char>, usize> = HashMap::new();
    let mut occurrences: Vec<(usize, usize, usize)> = Vec::new(); // (string, from, to)
    let words: Vec<Vec<char>> = sample.strings().iter().map(|w| w.chars().collect()).collect();
    for (wi, chars) in words.iter().enumerate() {
        for i in 0..chars.len() {
            for j in i + 1..=chars.len() {
                let key = chars[i..j].to_vec();
                let next = subs.len();
                sub_id.entry(key.clone()).or_insert_with(|| {
                    subs.push(key);
                    next
                });
                occurrences.push((wi, i, j));
            }
        }
    }
    let mut order: Vec<usize> = (0..subs.len()).collect();
    order.sort_by(|&x, &y| {
        let sx: String = subs[x].iter().collect();
        let sy: String = subs[y].iter().collect();
        alphabet.cmp_length_lex(&sx, &sy)
    });
    let names: Vec<String> = subs.iter().map(|cs| cs.iter().collect()).collect();
    let start = start_symbol_name(&names);

    // group substrings by shared context; only pairs inside one group can
    // ever satisfy the shared-context requirement
    let mut context_groups: HashMap<(Vec<char>, Vec<char>), Vec<usize>> = HashMap::new();
    for &(wi, i, j) in &occurrences {
        let chars = &words[wi];
        let key = (chars[..i].to_vec(), chars[j..].to_vec());
        let id = sub_id[&chars[i..j].to_vec()];
        context_groups.entry(key).or_default().push(id);
    }

    let image: Vec<usize> = names
        .iter()
        .map(|s| relation.morphism().eval(s))
        .collect::<Result<Vec<_>>>()?;

    let mut unit_pairs: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut considered: HashSet<(usize, usize)> = HashSet::new();
    for members in context_groups.values() {
        let mut distinct: Vec<usize> = members.clone();
        distinct.sort_unstable();
        distinct.dedup();
        for ai in 0..distinct.len() {
            for bi in ai + 1..distinct.len() {
                let (x, y) = (distinct[ai], distinct[bi]);
                if !considered.insert((x, y)) {
                    continue;
                }
                if relation.elements_related(image[x], image[y]) {
                    unit_pairs.insert((x, y));
                }
                if relation.elements_related(image[y], image[x]) {
                    unit_pairs.insert((y, x));
                }
            }
        }
    }

    let mut unit_by_source: Vec<Vec<usize>> = vec![Vec::new(); subs.len()];
    for &(x, y) in &unit_pairs {
        unit_by_source[x].push(y);
    }

    let mut b = Cfg::builder(&start).alphabet(alphabet.symbols().iter().copied());
    let mut sorted_samples: Vec<String> = sample.strings().to_vec();
    alphabet.sort_length_lex(&mut sorted_samples);
    for w in &sorted_samples {
        b = b.rule(&start, [Sym::Nt(w.clone())]);
    }
    for &id in &order {
        let chars = &subs[id];
        let name = &names[id];
        for split in 1..chars.len() {
            b = b.rule(
                name.clone(),
                [
                    Sym::Nt(chars[..split].iter().collect::<String>()),
                    Sym::Nt(chars[split..].iter().collect::<String>()),
                ],
            );
        }
        let mut targets: Vec<&str> = unit_by_source[id]
            .iter()
            .map(|&y| names[y].as_str())
            .collect();
        targets.sort_by(|a, b| alphabet.cmp_length_lex(a, b));
        for target in targets {
            b = b.rule(name.clone(), [Sym::Nt(target.to_string())]);
        }
        if chars.len() == 1 {
            b = b.rule(name.clone(), [Sym::T(chars[0])]);
        }
    }
    b.build()
}

/// The learner's state between examples: the accumulated sample, the current
/// hypothesis with its prepared recognizer, and the rebuild count.
#[derive(Clone)]
pub struct LearnerState {
    sample: Sample,
    relation: Arc<RecognizableRelation>,
    hypothesis: Arc<Cfg>,
    recognizer: Arc<Recognizer>,
    rebuilds: usize,
}

impl LearnerState {
    /// Initial state: empty sample, empty-language hypothesis.
    pub fn initial(relation: RecognizableRelation) -> LearnerState {
        let hypothesis = Cfg::builder("S")
            .alphabet(relation.alphabet().symbols().iter().copied())
            .build()
            .expect("an empty grammar is well formed");
        let recognizer = Arc::new(Recognizer::new(&hypothesis));
        LearnerState {
            sample: Sample::empty(),
            relation: Arc::new(relation),
            hypothesis: Arc::new(hypothesis),
            recognizer,
            rebuilds: 0,
        }
    }

    pub fn sample(&self) -> &Sample {
        &self.sample
    }

    pub fn relation(&self) -> &RecognizableRelation {
        &self.relation
    }

    pub fn hypothesis(&self) -> &Cfg {
        &self.hypothesis
    }

    pub fn hypothesis_arc(&self) -> Arc<Cfg> {
        Arc::clone(&self.hypothesis)
    }

    pub fn rebuilds(&self) -> usize {
        self.rebuilds
    }

    pub fn generates(&self, w: &str) -> bool {
        self.recognizer.accepts(w)
    }

    /// One step of the loop: the example always joins the sample; the
    /// hypothesis is rebuilt from the whole sample only when it fails to
    /// generate the example.
    pub fn learn_step(&self, w: &str) -> Result<LearnerState> {
        if w.is_empty() {
            return Err(Error::PremiseViolation(
                "the empty string cannot be learned".to_string(),
            ));
        }
        self.relation.alphabet().check_str(w)?;
        let accepted = self.recognizer.accepts(w);
        let mut sample = self.sample.clone();
        sample.insert(w)?;
        if accepted {
            return Ok(LearnerState {
                sample,
                relation: Arc::clone(&self.relation),
                hypothesis: Arc::clone(&self.hypothesis),
                recognizer: Arc::clone(&self.recognizer),
                rebuilds: self.rebuilds,
            });
        }
        let hypothesis = build_hypothesis(&sample, &self.relation)?;
        let recognizer = Arc::new(Recognizer::new(&hypothesis));
        Ok(LearnerState {
            sample,
            relation: Arc::clone(&self.relation),
            hypothesis: Arc::new(hypothesis),
            recognizer,
            rebuilds: self.rebuilds + 1,
        })
    }
}

/// The whole run: one hypothesis per input, plus the final state.
pub struct LearnRun {
    pub hypotheses: Vec<Arc<Cfg>>,
    pub final_state: LearnerState,
}

/// Folds [`LearnerState::learn_step`] over a word sequence from the initial
/// state, emitting the hypothesis after each input.
pub fn learn_all<I, S>(words: I, relation: RecognizableRelation) -> Result<LearnRun>
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let mut state = LearnerState::initial(relation);
    let mut hypotheses = Vec::new();
    for w in words {
        state = state.learn_step(w.as_ref())?;
        hypotheses.push(state.hypothesis_arc());
    }
    Ok(LearnRun {
        hypotheses,
        final_state: state,
    })
}
