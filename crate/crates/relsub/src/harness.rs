//! Experiment infrastructure: length-lexicographic presentations, convergence
//! runs with per-step metrics, soundness and completeness checks against
//! bounded enumerations, a brute-force substitutability checker, a pigeonhole
//! search for non-substitutability witnesses, and build-time measurement.
//!
//! Everything here is bounded and deterministic: identical inputs give
//! identical reports (timing values aside).

use std::collections::BTreeSet;
use std::fmt;
use std::time::{Duration, Instant};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::charset::{characteristic_set, type_transform, Context};
use crate::grammar::{enumerate, Cfg, CnfCfg, Recognizer, Symbol};
use crate::learner::{build_hypothesis, LearnerState, Sample};
use crate::relation::RecognizableRelation;
use crate::{Error, Result};

/// Reference grammars used across the experiments and tests.
pub mod corpus {
    use crate::grammar::Cfg;

    /// `{ aⁿbⁿ | n ≥ 1 }`, already in normal form.
    pub fn nested_ab() -> Cfg {
        Cfg::parse("start: S\nS -> A X | A B\nA -> 'a'\nB -> 'b'\nX -> S B\n")
            .expect("corpus grammar parses")
    }

    /// Nonempty strings over {a, b} with at most one `a`.
    pub fn at_most_one_a() -> Cfg {
        Cfg::parse("start: S\nS -> 'a' T | 'b' S | 'a' | 'b'\nT -> 'b' T | 'b'\n")
            .expect("corpus grammar parses")
    }

    /// The Łukasiewicz language, `S -> aSS | b`: prefix-closed under the
    /// "one more b than a" discipline. Substituting related factors inside
    /// its contexts escapes the language for every finite-monoid relation,
    /// which makes it the standard negative control.
    pub fn lukasiewicz() -> Cfg {
        Cfg::parse("start: S\nS -> 'a' S S | 'b'\n").expect("corpus grammar parses")
    }
}

/// The language enumerated to `max_len` and sorted length-lexicographically
/// under the grammar's alphabet order: the canonical finite presentation
/// prefix. Rejects languages containing the empty string.
pub fn presentation_lenlex(g: &Cfg, max_len: usize) -> Result<Vec<String>> {
    let lang = enumerate(g, max_len);
    if lang.contains("") {
        return Err(Error::PremiseViolation(
            "the target language contains the empty string".to_string(),
        ));
    }
    let mut words: Vec<String> = lang.into_iter().collect();
    g.alphabet().sort_length_lex(&mut words);
    Ok(words)
}

/// Per-step measurements of a convergence run.
#[derive(Debug, Clone)]
pub struct StepStats {
    pub duration: Duration,
    pub desk: usize,
    pub nonterminals: usize,
    pub rules: usize,
}

/// Outcome of feeding a finite presentation through the learner.
#[derive(Debug, Clone)]
pub struct ConvergenceReport {
    /// The hypothesis stopped changing strictly before the run ended.
    pub converged: bool,
    /// 1-based index of the last rebuild; `None` if no rebuild happened.
    pub convergence_index: Option<usize>,
    /// Final hypothesis enumerates exactly the target up to the check bound.
    pub final_equivalent: bool,
    pub rebuilds: usize,
    pub steps: Vec<StepStats>,
    /// Shortest string the final hypothesis generates but the target does
    /// not, within the check bound.
    pub overgenerated: Option<String>,
    /// Shortest target string the final hypothesis misses, within the bound.
    pub missing: Option<String>,
    /// Total sample length at the end of the run.
    pub desk: usize,
    /// Rule count of the final hypothesis.
    pub rules_total: usize,
}

impl ConvergenceReport {
    /// Machine-readable key=value lines.
    pub fn to_kv(&self) -> String {
        let index = match self.convergence_index {
            Some(i) => i.to_string(),
            None => "none".to_string(),
        };
        format!(
            "converged={}\nconvergence_index={}\nfinal_equivalent={}\nrebuilds={}\ndesk={}\nrules_total={}\n",
            self.converged, index, self.final_equivalent, self.rebuilds, self.desk, self.rules_total
        )
    }
}

impl fmt::Display for ConvergenceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_kv())?;
        if let Some(w) = &self.overgenerated {
            writeln!(f, "overgenerated={w}")?;
        }
        if let Some(w) = &self.missing {
            writeln!(f, "missing={w}")?;
        }
        let total: Duration = self.steps.iter().map(|s| s.duration).sum();
        writeln!(f, "steps={} total_ms={}", self.steps.len(), total.as_millis())
    }
}

/// Feeds the length-lexicographic presentation of the target through the
/// learner and reports convergence behavior, equivalence at `check_len`, and
/// per-step sizes and timings.
pub fn run_convergence(
    target: &Cfg,
    relation: &RecognizableRelation,
    max_len: usize,
    check_len: usize,
) -> Result<ConvergenceReport> {
    let words = presentation_lenlex(target, max_len)?;
    let mut state = LearnerState::initial(relation.clone());
    let mut steps = Vec::with_capacity(words.len());
    let mut last_rebuild: Option<usize> = None;
    for (i, w) in words.iter().enumerate() {
        let before = state.rebuilds();
        let t0 = Instant::now();
        state = state.learn_step(w)?;
        let duration = t0.elapsed();
        if state.rebuilds() > before {
            last_rebuild = Some(i + 1);
        }
        steps.push(StepStats {
            duration,
            desk: state.sample().desk(),
            nonterminals: state.hypothesis().nonterminal_count(),
            rules: state.hypothesis().rule_count(),
        });
    }
    let target_lang = enumerate(target, check_len);
    let hyp_lang = enumerate(state.hypothesis(), check_len);
    let first_sorted = |set: BTreeSet<String>| -> Option<String> {
        let mut v: Vec<String> = set.into_iter().collect();
        target.alphabet().sort_length_lex(&mut v);
        v.into_iter().next()
    };
    let overgenerated = first_sorted(hyp_lang.difference(&target_lang).cloned().collect());
    let missing = first_sorted(target_lang.difference(&hyp_lang).cloned().collect());
    Ok(ConvergenceReport {
        converged: last_rebuild.map_or(true, |i| i < words.len()),
        convergence_index: last_rebuild,
        final_equivalent: overgenerated.is_none() && missing.is_none(),
        rebuilds: state.rebuilds(),
        steps,
        overgenerated,
        missing,
        desk: state.sample().desk(),
        rules_total: state.hypothesis().rule_count(),
    })
}

/// Outcome of the completeness check: the characteristic sample of the typed
/// target, and whether the hypothesis built from it covers the target.
#[derive(Debug, Clone)]
pub struct CompletenessReport {
    pub char_sample: Vec<String>,
    pub desk: usize,
    pub holds: bool,
    /// Shortest target string the hypothesis misses, if any.
    pub missing: Option<String>,
}

/// Builds the hypothesis from exactly the characteristic sample of the
/// monoid-typed target and verifies that the target's enumeration up to
/// `check_len` is covered.
pub fn completeness_check(
    target: &CnfCfg,
    relation: &RecognizableRelation,
    check_len: usize,
) -> Result<CompletenessReport> {
    let typed = type_transform(target, relation.morphism())?;
    let cs = characteristic_set(typed.cfg())?;
    let mut char_sample: Vec<String> = cs.iter().cloned().collect();
    target.alphabet().sort_length_lex(&mut char_sample);
    let sample = Sample::new(char_sample.clone())?;
    let hypothesis = build_hypothesis(&sample, relation)?;
    let hyp_lang = enumerate(&hypothesis, check_len);
    let mut missing: Vec<String> = enumerate(target.as_cfg(), check_len)
        .difference(&hyp_lang)
        .cloned()
        .collect();
    target.alphabet().sort_length_lex(&mut missing);
    Ok(CompletenessReport {
        desk: sample.desk(),
        char_sample,
        holds: missing.is_empty(),
        missing: missing.into_iter().next(),
    })
}

/// Outcome of the soundness check: whether the hypothesis built from the
/// sample stays inside the target language up to the bound.
#[derive(Debug, Clone)]
pub struct SoundnessReport {
    pub holds: bool,
    /// Shortest hypothesis string outside the target, if any.
    pub overgenerated: Option<String>,
    pub hypothesis_rules: usize,
}

/// Verifies that the hypothesis built from `sample` enumerates a subset of
/// the target up to `check_len`. The sample must lie inside the target
/// language; the check is only meaningful when the target is substitutable
/// under the relation (see [`check_substitutable`]), which the caller is
/// expected to have established.
pub fn soundness_check(
    target: &Cfg,
    relation: &RecognizableRelation,
    sample: &Sample,
    check_len: usize,
) -> Result<SoundnessReport> {
    let rec = Recognizer::new(target);
    for w in sample.strings() {
        if !rec.accepts(w) {
            return Err(Error::InvalidSample(w.clone()));
        }
    }
    let hypothesis = build_hypothesis(sample, relation)?;
    let mut over: Vec<String> = enumerate(&hypothesis, check_len)
        .difference(&enumerate(target, check_len))
        .cloned()
        .collect();
    target.alphabet().sort_length_lex(&mut over);
    Ok(SoundnessReport {
        holds: over.is_empty(),
        overgenerated: over.into_iter().next(),
        hypothesis_rules: hypothesis.rule_count(),
    })
}

/// A concrete failure of substitutability found in a bounded language
/// sample: two related substrings share a context, yet another context
/// accepts one and rejects the other.
#[derive(Debug, Clone)]
pub struct SubstitutabilityViolation {
    pub x: String,
    pub y: String,
    /// Context witnessing that the pair shares a context.
    pub shared: Context,
    /// Context distinguishing the pair; both wrapped strings fit within the
    /// bound, so the violation is conclusive for the full language whenever
    /// the sample is a full bounded enumeration.
    pub distinguishing: Context,
    pub in_language: String,
    pub out_of_language: String,
}

/// Verdict of [`check_substitutable`]. `NoViolation` is relative to the
/// bound: longer contexts could still distinguish some pair.
#[derive(Debug, Clone)]
pub enum SubstitutabilityVerdict {
    NoViolation { bound: usize, pairs_checked: usize },
    Violation(Box<SubstitutabilityViolation>),
}

impl SubstitutabilityVerdict {
    pub fn is_violation(&self) -> bool {
        matches!(self, SubstitutabilityVerdict::Violation(_))
    }
}

impl fmt::Display for SubstitutabilityVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubstitutabilityVerdict::NoViolation {
                bound,
                pairs_checked,
            } => write!(
                f,
                "no violation up to bound {bound} ({pairs_checked} related sharing pairs checked)"
            ),
            SubstitutabilityVerdict::Violation(v) => write!(
                f,
                "violation: x={:?} y={:?} shared={} distinguishing={}\nin language: {}\nnot in language: {}",
                v.x, v.y, v.shared, v.distinguishing, v.in_language, v.out_of_language
            ),
        }
    }
}

/// Brute-force bounded substitutability check over a language sample,
/// normally a full enumeration up to some length `B`.
///
/// For every pair of distinct nonempty substrings that are related and share
/// a context in the sample, the two context sets must agree. Only contexts
/// whose wrap of *both* strings stays within the bound are compared:
/// anything longer leaves the sample for length reasons alone and would
/// produce spurious violations. The empty substring is excluded, matching
/// the learner, which never builds a nonterminal for it.
pub fn check_substitutable(
    language_sample: &BTreeSet<String>,
    relation: &RecognizableRelation,
) -> Result<SubstitutabilityVerdict> {
    let alphabet = relation.alphabet();
    let bound = language_sample
        .iter()
        .map(|w| w.chars().count())
        .max()
        .unwrap_or(0);
    let sample = Sample::new(language_sample.iter().filter(|w| !w.is_empty()).cloned())?;
    let mut subs: Vec<String> = sample.substrings().into_iter().collect();
    alphabet.sort_length_lex(&mut subs);
    let contexts: Vec<BTreeSet<Context>> = subs.iter().map(|x| sample.contexts(x)).collect();
    let image: Vec<usize> = subs
        .iter()
        .map(|x| relation.morphism().eval(x))
        .collect::<Result<Vec<_>>>()?;
    let lengths: Vec<usize> = subs.iter().map(|x| x.chars().count()).collect();
    let member = |w: &str| language_sample.contains(w);

    let mut pairs_checked = 0usize;
    for i in 0..subs.len() {
        for j in i + 1..subs.len() {
            if !relation.elements_related(image[i], image[j]) {
                continue;
            }
            let shared = match contexts[i].intersection(&contexts[j]).next() {
                Some(c) => c.clone(),
                None => continue,
            };
            pairs_checked += 1;
            // one direction at a time so the reported orientation is the
            // failing one
            let check = |from: usize, to: usize| -> Option<SubstitutabilityViolation> {
                for ctx in &contexts[from] {
                    if ctx.flank_len() + lengths[to] > bound {
                        continue;
                    }
                    let wrapped = ctx.wrap(&subs[to]);
                    if !member(&wrapped) {
                        return Some(SubstitutabilityViolation {
                            x: subs[from].clone(),
                            y: subs[to].clone(),
                            shared: shared.clone(),
                            distinguishing: ctx.clone(),
                            in_language: ctx.wrap(&subs[from]),
                            out_of_language: wrapped,
                        });
                    }
                }
                None
            };
            if let Some(v) = check(i, j).or_else(|| check(j, i)) {
                return Ok(SubstitutabilityVerdict::Violation(Box::new(v)));
            }
        }
    }
    Ok(SubstitutabilityVerdict::NoViolation {
        bound,
        pairs_checked,
    })
}

/// A pigeonhole witness that a language is not substitutable under a
/// relation: two related factors `bⁿaⁿ` and `bⁿ⁺ᵏaⁿ⁺ᵏ` such that a context
/// accepting both exists while another context accepts only one.
#[derive(Debug, Clone)]
pub struct NonSubstitutabilityWitness {
    pub n: usize,
    pub k: usize,
    pub factors: (String, String),
    /// The four decisive strings: the first two establish the shared
    /// context, the third is in the language, the fourth is the substitution
    /// that escapes it.
    pub strings: [String; 4],
    /// Membership of each string in the Łukasiewicz language, as verified by
    /// the recognizer.
    pub memberships: [bool; 4],
}

impl NonSubstitutabilityWitness {
    /// The expected membership pattern: in, in, in, out.
    pub fn pattern_holds(&self) -> bool {
        self.memberships == [true, true, true, false]
    }

    pub fn to_kv(&self) -> String {
        format!("witness_n={}\nwitness_k={}\n", self.n, self.k)
    }
}

impl fmt::Display for NonSubstitutabilityWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_kv())?;
        writeln!(f, "factors: {:?} ~ {:?}", self.factors.0, self.factors.1)?;
        for (i, (s, m)) in self.strings.iter().zip(self.memberships).enumerate() {
            writeln!(f, "s{} = {}", i + 1, s)?;
            writeln!(f, "s{} member: {}", i + 1, m)?;
        }
        Ok(())
    }
}

/// Searches for related factor pairs `bⁿaⁿ ~ bⁿ⁺ᵏaⁿ⁺ᵏ` with `n, k ≤ n_max`
/// and emits the four strings showing that substituting one factor for the
/// other inside a shared context escapes the Łukasiewicz language. Because
/// the factors range over an infinite family and the monoid is finite, a
/// pair always exists once `n_max` reaches the monoid size; `None` means the
/// bound was too small.
pub fn find_nonsubstitutability_witness(
    relation: &RecognizableRelation,
    n_max: usize,
) -> Result<Option<NonSubstitutabilityWitness>> {
    let factor = |n: usize| format!("{}{}", "b".repeat(n), "a".repeat(n));
    let target = Recognizer::new(&corpus::lukasiewicz());
    for n in 1..=n_max {
        for k in 1..=n_max {
            if !relation.related(&factor(n), &factor(n + k))? {
                continue;
            }
            let a = |c: usize| "a".repeat(c);
            let b = |c: usize| "b".repeat(c);
            let strings = [
                format!("{}{}{}", a(n + k), factor(n), b(n + k + 1)),
                format!("{}{}{}", a(n + k), factor(n + k), b(n + k + 1)),
                format!("{}{}{}", a(n), factor(n), b(n + 1)),
                format!("{}{}{}", a(n), factor(n + k), b(n + 1)),
            ];
            let memberships = [
                target.accepts(&strings[0]),
                target.accepts(&strings[1]),
                target.accepts(&strings[2]),
                target.accepts(&strings[3]),
            ];
            return Ok(Some(NonSubstitutabilityWitness {
                n,
                k,
                factors: (factor(n), factor(n + k)),
                strings,
                memberships,
            }));
        }
    }
    Ok(None)
}

/// Size and timing measurements of one hypothesis build.
#[derive(Debug, Clone)]
pub struct BuildMetrics {
    pub desk: usize,
    pub max_len: usize,
    pub duration: Duration,
    pub nonterminals: usize,
    pub start_rules: usize,
    pub branching_rules: usize,
    pub unit_rules: usize,
    pub terminal_rules: usize,
}

impl BuildMetrics {
    pub fn total_rules(&self) -> usize {
        self.start_rules + self.branching_rules + self.unit_rules + self.terminal_rules
    }
}

impl fmt::Display for BuildMetrics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "desk={} max_len={} ms={} nonterminals={} rules_total={}",
            self.desk,
            self.max_len,
            self.duration.as_millis(),
            self.nonterminals,
            self.total_rules()
        )?;
        writeln!(
            f,
            "start_rules={} branching_rules={} unit_rules={} terminal_rules={}",
            self.start_rules, self.branching_rules, self.unit_rules, self.terminal_rules
        )
    }
}

/// Times one hypothesis build and counts rules per family.
pub fn measure_build(sample: &Sample, relation: &RecognizableRelation) -> Result<BuildMetrics> {
    let t0 = Instant::now();
    let g = build_hypothesis(sample, relation)?;
    let duration = t0.elapsed();
    let start = g.start_id();
    let mut metrics = BuildMetrics {
        desk: sample.desk(),
        max_len: sample.max_len(),
        duration,
        nonterminals: g.nonterminal_count(),
        start_rules: 0,
        branching_rules: 0,
        unit_rules: 0,
        terminal_rules: 0,
    };
    for p in g.productions() {
        match p.rhs.as_slice() {
            _ if p.lhs == start => metrics.start_rules += 1,
            [Symbol::Nt(_), Symbol::Nt(_)] => metrics.branching_rules += 1,
            [Symbol::Nt(_)] => metrics.unit_rules += 1,
            [Symbol::T(_)] => metrics.terminal_rules += 1,
            _ => unreachable!("hypothesis grammars have no other rule shapes"),
        }
    }
    Ok(metrics)
}

/// Deterministic pseudo-random sample over {a, b} with the exact requested
/// total length. String lengths are drawn from 8..=16; the last string is
/// shortened to land on the target.
pub fn random_sample(target_desk: usize, seed: u64) -> Sample {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sample = Sample::empty();
    while sample.desk() < target_desk {
        let remaining = target_desk - sample.desk();
        let len = if remaining <= 16 {
            remaining
        } else {
            // never strand fewer than 8 symbols for the remainder
            rng.gen_range(8..=16.min(remaining - 8))
        };
        let w: String = (0..len)
            .map(|_| if rng.gen_bool(0.5) { 'a' } else { 'b' })
            .collect();
        // duplicates do not advance desk; draw again
        let _ = sample.insert(&w).expect("lengths are nonzero");
    }
    sample
}
