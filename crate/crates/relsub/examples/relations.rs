//! Tour of the relation zoo: build the stock relations, decide pairs, take a
//! product, and diagnose a broken hand-written table.
//!
//! Run with: cargo run --example relations

use std::collections::BTreeSet;

use relsub::relation::{
    parse_monoid_table, FiniteMonoid, MonoidMorphism, RecognizableRelation, RelationSpec,
};

fn main() -> relsub::Result<()> {
    let ab = ['a', 'b'];

    let trivial = RecognizableRelation::trivial(&ab)?;
    let ends = RecognizableRelation::prefix_suffix(1, 1, &ab)?;
    let count = RecognizableRelation::symbol_count('a', 1, &ab)?;

    println!("pair            trivial  kl:1,1  count:a,1");
    for (x, y) in [("bab", "ab"), ("aba", "aa"), ("ab", "ba"), ("aab", "aaab")] {
        println!(
            "{:7} ~ {:5} {:7}  {:6}  {}",
            x,
            y,
            trivial.related(x, y)?,
            ends.related(x, y)?,
            count.related(x, y)?
        );
    }

    // the product decides the conjunction
    let both = ends.product(&count)?;
    println!(
        "\nproduct(kl:1,1, count:a,1): ab ~ aab -> {}",
        both.related("ab", "aab")?
    );
    println!(
        "monoid sizes: {} x {} = {}",
        ends.morphism().monoid().size(),
        count.morphism().monoid().size(),
        both.morphism().monoid().size()
    );

    // the same relations are expressible in the CLI mini-DSL
    let spec = RelationSpec::parse("product:(kl:1,1;count:a,1)")?;
    assert_eq!(spec.build(&ab)?, both);

    // hand-written tables are validated, not trusted
    let broken = parse_monoid_table(
        "size: 2\nidentity: 0\nop:\n0 1\n1 1\nhom: a->1\nF:\n0 0\n1 1\n0 1\n",
    )?;
    println!("\ndiagnostics for a table whose F is not symmetric:");
    for d in broken.validate() {
        println!("  {d}");
    }

    // a lawful table passes
    let monoid = FiniteMonoid::new(0, vec![vec![0, 1], vec![1, 0]])?;
    let alphabet = relsub::alphabet::Alphabet::new(ab)?;
    let parity = RecognizableRelation::new(
        MonoidMorphism::new(monoid, alphabet, vec![1, 0])?,
        BTreeSet::from([(0, 0), (1, 1)]),
    )?;
    assert!(parity.validate().is_empty());
    println!("\nparity-of-a relation: aa ~ bb -> {}", parity.related("aa", "bb")?);
    Ok(())
}
