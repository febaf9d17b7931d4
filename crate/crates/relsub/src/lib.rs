//! Learning context-free grammars from positive examples, for languages that
//! are substitutable *modulo a user-supplied equivalence relation*.
//!
//! Two substrings of a language are interchangeable when they share a context
//! and every context of one is a context of the other. Classic distributional
//! learners merge any two substrings that share a single context; that is only
//! sound for languages where sharing one context already forces sharing all of
//! them ("substitutable" languages). This crate generalizes the merge test:
//! substrings are merged only when they additionally lie in the same class of
//! an equivalence relation decided by a finite monoid. Choosing the relation
//! tunes how aggressive the learner is, and enlarges the class of languages it
//! identifies in the limit from positive data.
//!
//! The pieces:
//!
//! * [`relation`] — finite monoids, morphisms, and monoid-recognizable
//!   equivalence relations on strings (equality of bounded prefixes/suffixes,
//!   bounded symbol counting, products, hand-written tables).
//! * [`grammar`] — context-free grammars, a text format, Chomsky normal form,
//!   CYK membership with unit-rule closure, and bounded language enumeration
//!   used as a brute-force oracle throughout.
//! * [`charset`] — minimal yields, minimal contexts, characteristic sets, and
//!   the transform that annotates every nonterminal with the monoid element of
//!   its yields.
//! * [`learner`] — the incremental learner itself: substring nonterminals,
//!   context-directed unit rules, and rebuild-on-counterexample.
//! * [`harness`] — experiment infrastructure: length-lexicographic
//!   presentations, convergence runs, soundness/completeness checks, a
//!   brute-force substitutability checker, and a pigeonhole search for
//!   witnesses of non-substitutability.
//!
//! The `examples/` directory has one runnable program per capability; start
//! with `cargo run --example learning_loop`. A thin `relsub` binary exposes
//! the same operations for scripting.

pub mod alphabet;
pub mod charset;
pub mod grammar;
pub mod harness;
pub mod learner;
pub mod relation;

mod error;

pub use error::{Error, Result};
