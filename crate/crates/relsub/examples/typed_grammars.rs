//! The monoid-typing transform: every nonterminal splits into one copy per
//! monoid element, and each copy derives exactly the strings with that image.
//!
//! Run with: cargo run --example typed_grammars

use relsub::charset::type_transform;
use relsub::grammar::{equivalent_up_to, to_cnf, LanguageTable};
use relsub::harness::corpus;
use relsub::relation::RecognizableRelation;

fn main() -> relsub::Result<()> {
    let g = to_cnf(&corpus::lukasiewicz());
    let count = RecognizableRelation::symbol_count('a', 1, &['a', 'b'])?;
    let typed = type_transform(&g, count.morphism())?;

    println!("typed grammar:\n{}", typed.cfg());
    assert!(equivalent_up_to(g.as_cfg(), typed.cfg(), 8));
    println!("language unchanged up to length 8: true\n");

    let monoid = count.morphism().monoid();
    let table = LanguageTable::build(typed.cfg(), 7);
    for (name, orig, element) in typed.typed_nonterminals() {
        let strings = table.strings_of(name)?;
        println!(
            "{name} (copy of {orig}, element {}) derives {} strings up to length 7",
            monoid.name(element),
            strings.len()
        );
        // spot check: every derived string maps to the annotation
        for w in &strings {
            assert_eq!(count.morphism().eval(w)?, element);
        }
    }

    // the start copy annotated "more than one a" holds exactly the members
    // with at least two a's
    let saturated: Vec<&str> = typed
        .typed_nonterminals()
        .iter()
        .filter(|(_, orig, p)| *p == 2 && typed.cfg().nt_id(orig).is_none())
        .map(|(name, _, _)| *name)
        .collect();
    println!("\nsaturated copies: {saturated:?}");
    Ok(())
}
