//! The grammar toolkit: parse the text format, convert to normal form, test
//! membership, and enumerate bounded languages.
//!
//! Run with: cargo run --example grammar_toolkit

use relsub::grammar::{enumerate, equivalent_up_to, to_cnf, Cfg, Recognizer};

fn main() -> relsub::Result<()> {
    let g = Cfg::parse(
        "# one more b than a, every prefix balanced\n\
         start: S\n\
         S -> 'a' S S | 'b'\n",
    )?;
    println!("grammar:\n{g}");

    let rec = Recognizer::new(&g);
    for w in ["b", "abb", "ababb", "abbaabb", ""] {
        println!("member {w:?}: {}", rec.accepts(w));
    }

    let mut language: Vec<String> = enumerate(&g, 7).into_iter().collect();
    g.alphabet().sort_length_lex(&mut language);
    println!("\nlanguage up to length 7: {language:?}");

    let cnf = to_cnf(&g);
    println!("\nnormal form:\n{cnf}");
    assert!(equivalent_up_to(&g, cnf.as_cfg(), 9));
    println!("equivalent to the original up to length 9: true");

    // the printed form parses back to the same grammar
    let reparsed = Cfg::parse(&g.to_string())?;
    assert_eq!(reparsed, g);
    Ok(())
}
