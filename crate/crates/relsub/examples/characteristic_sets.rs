//! Minimal yields, minimal contexts, and the characteristic sample: the
//! finite positive data that forces the learner to cover a target.
//!
//! Run with: cargo run --example characteristic_sets

use relsub::charset::{characteristic_set, min_context, min_yield_of, type_transform};
use relsub::grammar::{to_cnf, CnfCfg};
use relsub::harness::corpus;
use relsub::relation::RecognizableRelation;

fn main() -> relsub::Result<()> {
    let g = corpus::nested_ab();
    println!("target:\n{g}");

    println!("nonterminal  min yield  min context");
    for v in g.nonterminals() {
        println!(
            "{v:11}  {:9}  {}",
            min_yield_of(&g, v)?,
            min_context(&g, v)?
        );
    }

    let cs = characteristic_set(&g)?;
    println!("\ncharacteristic sample: {cs:?}");

    // the learning premise types the target first; with a one-element monoid
    // that is a renaming and the sample is unchanged
    let trivial = RecognizableRelation::trivial(&['a', 'b'])?;
    let typed = type_transform(&CnfCfg::new(g)?, trivial.morphism())?;
    assert_eq!(characteristic_set(typed.cfg())?, cs);

    // a richer monoid can enlarge the sample: the typed copies each
    // contribute their own minimal wraps
    let count = RecognizableRelation::symbol_count('a', 1, &['a', 'b'])?;
    let one_a = to_cnf(&corpus::at_most_one_a());
    let typed = type_transform(&one_a, count.morphism())?;
    println!(
        "\nat_most_one_a typed by the bounded a-counter: {:?}",
        characteristic_set(typed.cfg())?
    );
    Ok(())
}
