//! Acceptance suite: one test per criterion, each printing a PASS line with
//! its measured numbers (run with `--nocapture` to see them). Expected values
//! come from independent oracles in `common/` or are verified against the
//! bounded enumeration oracle; bounds and tolerances are pinned here.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use relsub::charset::{characteristic_set, min_context, min_yield_of, type_transform};
use relsub::grammar::{enumerate, equivalent_up_to, to_cnf, Cfg, CnfCfg, LanguageTable, Recognizer};
use relsub::harness::{
    check_substitutable, completeness_check, corpus, find_nonsubstitutability_witness,
    measure_build, presentation_lenlex, random_sample, run_convergence, soundness_check,
    SubstitutabilityVerdict,
};
use relsub::learner::{build_hypothesis, Sample};
use relsub::relation::RecognizableRelation;

const AB: [char; 2] = ['a', 'b'];

fn kl(k: usize, l: usize) -> RecognizableRelation {
    RecognizableRelation::prefix_suffix(k, l, &AB).unwrap()
}

fn count_a(d: usize) -> RecognizableRelation {
    RecognizableRelation::symbol_count('a', d, &AB).unwrap()
}

fn trivial() -> RecognizableRelation {
    RecognizableRelation::trivial(&AB).unwrap()
}

#[test]
fn criterion_01_prefix_suffix_oracle_equivalence() {
    let t0 = Instant::now();
    let words = common::all_strings(&AB, 5);
    let mut pairs = 0usize;
    for k in 0..=2 {
        for l in 0..=2 {
            let rel = kl(k, l);
            for x in &words {
                for y in &words {
                    pairs += 1;
                    assert_eq!(
                        rel.related(x, y).unwrap(),
                        common::kl_related_direct(k, l, x, y),
                        "mismatch at k={k} l={l} x={x:?} y={y:?}"
                    );
                }
            }
        }
    }
    let elapsed = t0.elapsed();
    assert!(elapsed < Duration::from_secs(10), "took {elapsed:?}");
    println!(
        "criterion 01 PASS — prefix/suffix relation matches the direct definition \
         (9 parameterizations, {pairs} pairs, 0 mismatches, {elapsed:?})"
    );
}

#[test]
fn criterion_02_symbol_count_oracle_equivalence() {
    let words = common::all_strings(&AB, 5);
    let mut pairs = 0usize;
    for d in 0..=2 {
        let rel = count_a(d);
        for x in &words {
            for y in &words {
                pairs += 1;
                assert_eq!(
                    rel.related(x, y).unwrap(),
                    common::count_related_direct('a', d, x, y),
                    "mismatch at d={d} x={x:?} y={y:?}"
                );
            }
        }
    }
    println!(
        "criterion 02 PASS — bounded symbol counting matches the direct definition \
         (3 bounds, {pairs} pairs, 0 mismatches)"
    );
}

#[test]
fn criterion_03_product_is_pointwise_conjunction() {
    let words = common::all_strings(&AB, 4);
    let operands = [
        (kl(1, 1), count_a(1)),
        (trivial(), kl(1, 1)),
        (count_a(0), RecognizableRelation::symbol_count('b', 2, &AB).unwrap()),
        (kl(2, 0), count_a(2)),
    ];
    let mut pairs = 0usize;
    for (r1, r2) in &operands {
        let prod = r1.product(r2).unwrap();
        for x in &words {
            for y in &words {
                pairs += 1;
                assert_eq!(
                    prod.related(x, y).unwrap(),
                    r1.related(x, y).unwrap() && r2.related(x, y).unwrap(),
                    "conjunction law broken at x={x:?} y={y:?}"
                );
            }
        }
    }
    println!(
        "criterion 03 PASS — product relation equals the conjunction of its operands \
         ({} operand pairs, {pairs} string pairs, 0 mismatches)",
        operands.len()
    );
}

fn cnf_corpus() -> Vec<(&'static str, CnfCfg)> {
    vec![
        ("nested_ab", CnfCfg::new(corpus::nested_ab()).unwrap()),
        ("lukasiewicz", to_cnf(&corpus::lukasiewicz())),
        ("at_most_one_a", to_cnf(&corpus::at_most_one_a())),
    ]
}

#[test]
fn criterion_04_typing_transform_soundness_and_equivalence() {
    let t0 = Instant::now();
    let mut checked_strings = 0usize;
    for (gname, g) in cnf_corpus() {
        let original = LanguageTable::build(g.as_cfg(), 7);
        for (rname, rel) in [
            ("trivial", trivial()),
            ("kl:1,1", kl(1, 1)),
            ("count:a,1", count_a(1)),
        ] {
            let typed = type_transform(&g, rel.morphism()).unwrap();
            assert!(
                equivalent_up_to(g.as_cfg(), typed.cfg(), 8),
                "{gname} under {rname}: typed grammar changes the language"
            );
            let table = LanguageTable::build(typed.cfg(), 7);
            for (name, orig, p) in typed.typed_nonterminals() {
                let own = table.strings_of(name).unwrap();
                for w in &own {
                    checked_strings += 1;
                    assert_eq!(
                        rel.morphism().eval(w).unwrap(),
                        p,
                        "{gname}/{rname}: {name} derives {w:?} outside its element"
                    );
                }
                // the annotated copy carries exactly the original's strings
                // with that image
                let filtered: BTreeSet<String> = original
                    .strings_of(orig)
                    .unwrap()
                    .into_iter()
                    .filter(|w| rel.morphism().eval(w).unwrap() == p)
                    .collect();
                assert_eq!(
                    own, filtered,
                    "{gname}/{rname}: {name} disagrees with {orig} restricted to element {p}"
                );
            }
        }
    }
    let elapsed = t0.elapsed();
    assert!(elapsed < Duration::from_secs(60), "took {elapsed:?}");
    println!(
        "criterion 04 PASS — typing preserves languages to length 8 and annotates \
         soundly and completely to length 7 (9 grammar/relation pairs, \
         {checked_strings} strings, 0 violations, {elapsed:?})"
    );
}

#[test]
fn criterion_05_minimal_wraps_are_characteristic() {
    let mut checked = 0usize;
    for (gname, g) in cnf_corpus() {
        let cs = characteristic_set(g.as_cfg()).unwrap();
        for v in g.as_cfg().nonterminals() {
            let wrapped = min_context(g.as_cfg(), v)
                .unwrap()
                .wrap(&min_yield_of(g.as_cfg(), v).unwrap());
            assert!(
                cs.contains(&wrapped),
                "{gname}: minimal wrap {wrapped:?} of {v} missing from {cs:?}"
            );
            checked += 1;
        }
    }
    println!(
        "criterion 05 PASS — every nonterminal's minimal yield in its minimal context \
         lies in the characteristic sample ({checked} nonterminals, 0 violations)"
    );
}

/// The two corpus pairs that are actually substitutable under their
/// relation. The spec text pairs the nested language with the all-pairs
/// relation, but that pairing falsifies its own precondition (see the
/// negative-control test below); the prefix/suffix relation is the one the
/// construction is about.
fn substitutable_pairs() -> Vec<(&'static str, Cfg, RecognizableRelation, usize)> {
    vec![
        ("nested_ab/kl:1,1", corpus::nested_ab(), kl(1, 1), 12),
        (
            "at_most_one_a/count:a,1",
            corpus::at_most_one_a(),
            count_a(1),
            8,
        ),
    ]
}

#[test]
fn criterion_06_soundness_on_substitutable_pairs() {
    let mut runs = 0usize;
    for (name, target, rel, max_len) in substitutable_pairs() {
        // the soundness statement presumes the pairing is substitutable
        let verdict = check_substitutable(&enumerate(&target, 8), &rel).unwrap();
        assert!(!verdict.is_violation(), "{name}: {verdict}");
        let words = presentation_lenlex(&target, max_len).unwrap();
        assert!(words.len() >= 6, "{name}: presentation too short");
        for m in 1..=6 {
            let sample = Sample::new(words[..m].to_vec()).unwrap();
            let report = soundness_check(&target, &rel, &sample, 10).unwrap();
            assert!(
                report.holds,
                "{name} m={m}: overgenerated {:?}",
                report.overgenerated
            );
            runs += 1;
        }
    }
    println!(
        "criterion 06 PASS — hypotheses from presentation prefixes stay inside both \
         substitutable targets to length 10 ({runs} samples, 0 overgenerations)"
    );
}

#[test]
fn criterion_07_completeness_from_characteristic_samples() {
    // nested language: the characteristic sample is exactly {ab, aabb} and
    // the hypothesis built from it is exactly the target
    let target = CnfCfg::new(corpus::nested_ab()).unwrap();
    let rel = kl(1, 1);
    let report = completeness_check(&target, &rel, 10).unwrap();
    assert_eq!(report.char_sample, vec!["ab", "aabb"]);
    assert!(report.holds, "missing: {:?}", report.missing);
    let sample = Sample::new(report.char_sample.clone()).unwrap();
    let hypothesis = build_hypothesis(&sample, &rel).unwrap();
    assert!(
        equivalent_up_to(target.as_cfg(), &hypothesis, 12),
        "hypothesis from {:?} is not exactly the target to length 12",
        report.char_sample
    );

    let target2 = to_cnf(&corpus::at_most_one_a());
    let report2 = completeness_check(&target2, &count_a(1), 10).unwrap();
    assert!(report2.holds, "missing: {:?}", report2.missing);

    println!(
        "criterion 07 PASS — characteristic samples force completeness to length 10 \
         (nested_ab sample {:?} gives exact equality to 12; at_most_one_a desk {})",
        report.char_sample, report2.desk
    );
}

#[test]
fn criterion_08_convergence_on_substitutable_pairs() {
    let t0 = Instant::now();
    let mut lines = Vec::new();
    for (name, target, rel, _) in substitutable_pairs() {
        let report = run_convergence(&target, &rel, 8, 12).unwrap();
        assert!(report.converged, "{name} did not converge: {report}");
        assert!(
            report.final_equivalent,
            "{name} not equivalent at 12: over={:?} missing={:?}",
            report.overgenerated, report.missing
        );
        lines.push(format!(
            "{name}: rebuilds={} convergence_index={:?}",
            report.rebuilds, report.convergence_index
        ));
    }
    let elapsed = t0.elapsed();
    assert!(elapsed < Duration::from_secs(60), "took {elapsed:?}");
    println!(
        "criterion 08 PASS — learner converges and is exactly right at length 12 on \
         both substitutable pairs ({}; {elapsed:?})",
        lines.join("; ")
    );
}

#[test]
fn criterion_09_nonsubstitutability_witnesses() {
    // pigeonhole witnesses within the pinned bound, membership verified
    let w_kl = find_nonsubstitutability_witness(&kl(1, 1), 5)
        .unwrap()
        .expect("witness within n_max=5");
    assert_eq!((w_kl.n, w_kl.k), (1, 1));
    assert_eq!(w_kl.strings[2], "ababb");
    assert_eq!(w_kl.strings[3], "abbaabb");
    assert!(w_kl.pattern_holds(), "{w_kl}");

    let w_count = find_nonsubstitutability_witness(&count_a(1), 5)
        .unwrap()
        .expect("witness within n_max=5");
    assert!(w_count.pattern_holds(), "{w_count}");

    let w_triv = find_nonsubstitutability_witness(&trivial(), 5)
        .unwrap()
        .expect("witness within n_max=5");
    assert!(w_triv.pattern_holds(), "{w_triv}");

    // the same related pair makes the batch hypothesis overgenerate: the
    // presentation to length 9 contains both strings sharing the context
    // (aa, bbb) around the related factors ba ~ bbaa
    let target = corpus::lukasiewicz();
    let sample = Sample::new(presentation_lenlex(&target, 9).unwrap()).unwrap();
    let report = soundness_check(&target, &kl(1, 1), &sample, 10).unwrap();
    assert!(!report.holds);
    let over = report.overgenerated.expect("a concrete overgenerated string");
    assert!(!Recognizer::new(&target).accepts(&over));
    assert_eq!(over, "abbab"); // shortest escape, found by enumeration
    // the substitution instance from the witness is generated too
    let hypothesis = build_hypothesis(&sample, &kl(1, 1)).unwrap();
    assert!(Recognizer::new(&hypothesis).accepts(&w_kl.strings[3]));

    // the incremental loop on the length-lexicographic presentation happens
    // to dodge those merges: rebuilds stop before the diagnostic strings
    // arrive, and the surviving hypothesis checks out as far as enumeration
    // can see. The loop's laziness protects it on this ordering; the
    // unsoundness above is therefore pinned on the batch hypothesis.
    let run = run_convergence(&target, &kl(1, 1), 9, 10).unwrap();
    assert!(run.converged);
    assert_eq!(run.convergence_index, Some(4));
    assert!(run.final_equivalent);

    println!(
        "criterion 09 PASS — pigeonhole witnesses found for kl:1,1 (n=1,k=1), count:a,1 \
         (n={},k={}), trivial (n={},k={}); batch hypothesis overgenerates {over:?}; \
         incremental run documented (converges on this ordering)",
        w_count.n, w_count.k, w_triv.n, w_triv.k
    );
}

#[test]
fn criterion_10_substitutability_separation() {
    let sample = enumerate(&corpus::at_most_one_a(), 8);
    let verdict = check_substitutable(&sample, &count_a(1)).unwrap();
    assert!(!verdict.is_violation(), "{verdict}");

    let ones = |s: &str| s.chars().filter(|&c| c == 'a').count();
    let mut found = Vec::new();
    for k in 1..=2usize {
        for l in 1..=2usize {
            let verdict = check_substitutable(&sample, &kl(k, l)).unwrap();
            let SubstitutabilityVerdict::Violation(v) = verdict else {
                panic!("kl:{k},{l} should violate substitutability on this language");
            };
            // the violating pair is a pure-b string against a single-a
            // string, and the distinguishing context carries the second a
            assert_eq!(
                ones(&v.x) + ones(&v.y),
                1,
                "kl:{k},{l}: unexpected pair {:?} / {:?}",
                v.x,
                v.y
            );
            assert_eq!(ones(&v.distinguishing.left) + ones(&v.distinguishing.right), 1);
            assert!(sample.contains(&v.in_language));
            assert!(!sample.contains(&v.out_of_language));
            assert!(v.out_of_language.chars().count() <= 8, "witness exceeds the bound");
            found.push(format!("kl:{k},{l} x={:?} y={:?}", v.x, v.y));

            // the wrapped instance from the proof sketch is itself a
            // violation: the all-b string b^k·b·b^l against b^k·a·b^l,
            // related, both in the language, told apart by (λ, "ab")
            let x = format!("{}b{}", "b".repeat(k), "b".repeat(l));
            let y = format!("{}a{}", "b".repeat(k), "b".repeat(l));
            let rel = kl(k, l);
            assert!(rel.related(&x, &y).unwrap());
            assert!(sample.contains(&x) && sample.contains(&y)); // share (λ, λ)
            let stays_in = format!("{x}ab");
            let escapes = format!("{y}ab");
            assert!(stays_in.chars().count() <= 8 && escapes.chars().count() <= 8);
            assert!(sample.contains(&stays_in));
            assert!(!sample.contains(&escapes));
        }
    }
    println!(
        "criterion 10 PASS — count:a,1 substitutable to bound 8, every kl:k,l with \
         k,l in {{1,2}} refuted ({})",
        found.join("; ")
    );
}

#[test]
fn criterion_11_build_scaling() {
    let desks = [50usize, 100, 200, 400];
    let rel = kl(1, 1);
    let mut points = Vec::new();
    let mut lines = Vec::new();
    for (i, &desk) in desks.iter().enumerate() {
        let sample = random_sample(desk, 41 + i as u64);
        assert_eq!(sample.desk(), desk);
        // fastest of three runs to tame scheduler noise
        let mut best: Option<relsub::harness::BuildMetrics> = None;
        for _ in 0..3 {
            let m = measure_build(&sample, &rel).unwrap();
            if best.as_ref().map_or(true, |b| m.duration < b.duration) {
                best = Some(m);
            }
        }
        let m = best.unwrap();
        assert!(m.duration < Duration::from_secs(30), "desk {desk} took {:?}", m.duration);

        // rule-family counts inside the stated bound shapes, constant 1
        let k = sample.len();
        let ml = sample.max_len();
        assert!(m.start_rules <= desk, "start family exceeds desk");
        assert!(
            m.unit_rules <= k * k * (ml * (ml - 1)).pow(2),
            "unit family out of shape: {} vs {}",
            m.unit_rules,
            k * k * (ml * (ml - 1)).pow(2)
        );
        assert!(
            m.branching_rules <= k * ml * (ml - 1) * (ml - 1),
            "branching family out of shape: {} vs {}",
            m.branching_rules,
            k * ml * (ml - 1) * (ml - 1)
        );
        points.push((desk as f64, m.duration.as_secs_f64().max(1e-6)));
        lines.push(format!(
            "desk={} rules={} ms={:.2}",
            desk,
            m.total_rules(),
            m.duration.as_secs_f64() * 1e3
        ));
    }
    // least-squares slope in log-log space
    let n = points.len() as f64;
    let (sx, sy, sxx, sxy) = points.iter().fold((0.0, 0.0, 0.0, 0.0), |acc, (x, y)| {
        let (lx, ly) = (x.ln(), y.ln());
        (acc.0 + lx, acc.1 + ly, acc.2 + lx * lx, acc.3 + lx * ly)
    });
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    assert!(slope < 4.0, "log-log slope {slope:.2} is not polynomial-looking");
    println!(
        "criterion 11 PASS — hypothesis builds scale polynomially (log-log slope {slope:.2} < 4; {})",
        lines.join("; ")
    );
}

/// Negative control for the literal spec pairing: the nested language is
/// *not* substitutable under the all-pairs relation, and the learner
/// concretely overgenerates on it. This is why criteria 6–8 run the nested
/// target with the prefix/suffix relation instead.
#[test]
fn negative_control_trivial_pairing_is_unsound() {
    let target = corpus::nested_ab();

    // "a" and "aab" share (λ, b) but (λ, abb) tells them apart
    let verdict = check_substitutable(&enumerate(&target, 8), &trivial()).unwrap();
    let SubstitutabilityVerdict::Violation(v) = verdict else {
        panic!("expected a substitutability violation");
    };
    assert!(!v.out_of_language.is_empty());

    // the characteristic sample itself already overgenerates
    let sample = Sample::new(["ab", "aabb"]).unwrap();
    let hypothesis = build_hypothesis(&sample, &trivial()).unwrap();
    let lang = enumerate(&hypothesis, 10);
    assert!(lang.contains("aababb"), "expected the (a, aab) merge to fire");
    assert!(!Recognizer::new(&target).accepts("aababb"));

    // and the convergence run reports exactly that
    let report = run_convergence(&target, &trivial(), 8, 12).unwrap();
    assert!(!report.final_equivalent);
    assert_eq!(report.overgenerated.as_deref(), Some("aababb"));

    println!(
        "negative control PASS — trivial pairing on the nested language is unsound \
         (violation pair {:?}/{:?}, overgenerated \"aababb\")",
        v.x, v.y
    );
}
