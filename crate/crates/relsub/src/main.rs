//! Thin command-line front end. All logic lives in the library; this binary
//! parses flags, wires files and streams to the corresponding operations, and
//! prints their stable text forms.
//!
//! Exit codes: 0 on success, 1 on domain errors (parse failures, premise
//! violations), 2 on usage errors.

use std::collections::BTreeSet;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use relsub::charset::{characteristic_set, type_transform};
use relsub::grammar::{enumerate, member, to_cnf, Cfg};
use relsub::harness::{
    check_substitutable, find_nonsubstitutability_witness, run_convergence,
};
use relsub::learner::LearnerState;
use relsub::relation::{load_monoid_table, RecognizableRelation, RelationSpec};

#[derive(Parser)]
#[command(
    name = "relsub",
    version,
    about = "Grammar learning for substitutable languages modulo a monoid-recognizable relation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RelationArg {
    /// Relation spec: trivial | kl:<k>,<l> | count:<sym>,<d> |
    /// product:(<spec>;<spec>) | table:<path>
    #[arg(long)]
    relation: String,
    /// Alphabet symbols in declaration order (default: inferred from the
    /// other inputs, sorted)
    #[arg(long)]
    alphabet: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether two strings are related
    Relate {
        #[command(flatten)]
        relation: RelationArg,
        x: String,
        y: String,
    },
    /// Decide membership of a word in a grammar's language
    Member {
        #[arg(long)]
        grammar: PathBuf,
        word: String,
    },
    /// List all language members up to a length bound, sorted
    Enumerate {
        #[arg(long)]
        grammar: PathBuf,
        #[arg(long = "max-len")]
        max_len: usize,
    },
    /// Convert a grammar to Chomsky normal form
    Cnf {
        #[arg(long)]
        grammar: PathBuf,
    },
    /// Characteristic sample of the monoid-typed grammar
    Charset {
        #[arg(long)]
        grammar: PathBuf,
        #[command(flatten)]
        relation: RelationArg,
    },
    /// Annotate a normal-form grammar with monoid elements
    #[command(name = "type-transform")]
    TypeTransform {
        #[arg(long)]
        grammar: PathBuf,
        #[command(flatten)]
        relation: RelationArg,
    },
    /// Run the incremental learner over a stream of examples
    Learn {
        #[command(flatten)]
        relation: RelationArg,
        /// Input stream path, or '-' for stdin (one string per line)
        #[arg(long, default_value = "-")]
        stream: String,
    },
    /// Experiment drivers
    Experiment {
        #[command(subcommand)]
        what: ExperimentCommand,
    },
    /// Witness searches
    Witness {
        #[command(subcommand)]
        what: WitnessCommand,
    },
    /// Brute-force property checks
    Check {
        #[command(subcommand)]
        what: CheckCommand,
    },
}

#[derive(Subcommand)]
enum ExperimentCommand {
    /// Feed a target grammar's presentation through the learner and report
    Convergence {
        #[arg(long)]
        grammar: PathBuf,
        #[command(flatten)]
        relation: RelationArg,
        #[arg(long = "max-len")]
        max_len: usize,
        #[arg(long = "check-len")]
        check_len: usize,
    },
}

#[derive(Subcommand)]
enum WitnessCommand {
    /// Pigeonhole witness that the Łukasiewicz language is not substitutable
    /// under the relation
    Nonsubstitutable {
        #[command(flatten)]
        relation: RelationArg,
        #[arg(long = "max-n")]
        max_n: usize,
    },
}

#[derive(Subcommand)]
enum CheckCommand {
    /// Bounded substitutability check of a language sample under a relation
    Substitutable {
        /// Grammar whose enumeration up to --max-len forms the sample
        #[arg(long, conflicts_with = "stream")]
        grammar: Option<PathBuf>,
        /// Sample stream path or '-' (one string per line) instead of a grammar
        #[arg(long)]
        stream: Option<String>,
        #[command(flatten)]
        relation: RelationArg,
        #[arg(long = "max-len")]
        max_len: Option<usize>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn read_stream(path: &str) -> relsub::Result<String> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf)?;
        Ok(buf)
    } else {
        Ok(std::fs::read_to_string(path)?)
    }
}

fn load_grammar(path: &PathBuf) -> relsub::Result<Cfg> {
    Cfg::parse(&std::fs::read_to_string(path)?)
}

/// Builds the relation over an explicit alphabet if given, otherwise over
/// the inferred one: symbols named by the spec plus everything in `extra`,
/// sorted. A bare `table:` spec falls back to the table's own alphabet.
fn build_relation(
    arg: &RelationArg,
    extra: impl IntoIterator<Item = char>,
) -> relsub::Result<RecognizableRelation> {
    let spec = RelationSpec::parse(&arg.relation)?;
    if let Some(alphabet) = &arg.alphabet {
        let symbols: Vec<char> = alphabet.chars().collect();
        return spec.build(&symbols);
    }
    let mut symbols: BTreeSet<char> = extra.into_iter().collect();
    symbols.extend(spec.declared_symbols());
    if symbols.is_empty() {
        if let RelationSpec::Table(path) = &spec {
            return load_monoid_table(path);
        }
    }
    let symbols: Vec<char> = symbols.into_iter().collect();
    spec.build(&symbols)
}

fn sorted_lines(g: &Cfg, set: impl IntoIterator<Item = String>) -> Vec<String> {
    let mut v: Vec<String> = set.into_iter().collect();
    g.alphabet().sort_length_lex(&mut v);
    v
}

fn run(command: Command) -> relsub::Result<()> {
    match command {
        Command::Relate { relation, x, y } => {
            let rel = build_relation(&relation, x.chars().chain(y.chars()))?;
            let verdict = if rel.related(&x, &y)? {
                "related"
            } else {
                "unrelated"
            };
            println!("{verdict}");
        }
        Command::Member { grammar, word } => {
            let g = load_grammar(&grammar)?;
            println!("{}", member(&g, &word));
        }
        Command::Enumerate { grammar, max_len } => {
            let g = load_grammar(&grammar)?;
            for w in sorted_lines(&g, enumerate(&g, max_len)) {
                println!("{w}");
            }
        }
        Command::Cnf { grammar } => {
            let g = load_grammar(&grammar)?;
            print!("{}", to_cnf(&g));
        }
        Command::Charset { grammar, relation } => {
            let g = load_grammar(&grammar)?;
            let rel = build_relation(&relation, g.alphabet().symbols().iter().copied())?;
            let typed = type_transform(&to_cnf(&g), rel.morphism())?;
            for w in sorted_lines(&g, characteristic_set(typed.cfg())?) {
                println!("{w}");
            }
        }
        Command::TypeTransform { grammar, relation } => {
            let g = load_grammar(&grammar)?;
            let rel = build_relation(&relation, g.alphabet().symbols().iter().copied())?;
            let typed = type_transform(&to_cnf(&g), rel.morphism())?;
            print!("{}", typed.cfg());
        }
        Command::Learn { relation, stream } => {
            let text = read_stream(&stream)?;
            let words: Vec<&str> = text.lines().collect();
            if let Some(_empty) = words.iter().find(|w| w.is_empty()) {
                return Err(relsub::Error::PremiseViolation(
                    "the input stream contains an empty line".to_string(),
                ));
            }
            let rel = build_relation(&relation, words.iter().flat_map(|w| w.chars()))?;
            let mut state = LearnerState::initial(rel);
            for (i, w) in words.iter().enumerate() {
                let before = state.rebuilds();
                state = state.learn_step(w)?;
                if state.rebuilds() > before {
                    println!("=== hypothesis after n={} ===", i + 1);
                    print!("{}", state.hypothesis());
                }
            }
            println!("=== final hypothesis ===");
            print!("{}", state.hypothesis());
        }
        Command::Experiment {
            what:
                ExperimentCommand::Convergence {
                    grammar,
                    relation,
                    max_len,
                    check_len,
                },
        } => {
            let g = load_grammar(&grammar)?;
            let rel = build_relation(&relation, g.alphabet().symbols().iter().copied())?;
            let report = run_convergence(&g, &rel, max_len, check_len)?;
            print!("{}", report.to_kv());
            if let Some(w) = &report.overgenerated {
                println!("overgenerated={w}");
            }
            if let Some(w) = &report.missing {
                println!("missing={w}");
            }
        }
        Command::Witness {
            what: WitnessCommand::Nonsubstitutable { relation, max_n },
        } => {
            let rel = build_relation(&relation, ['a', 'b'])?;
            match find_nonsubstitutability_witness(&rel, max_n)? {
                Some(w) => print!("{w}"),
                None => println!("no witness within max-n={max_n}"),
            }
        }
        Command::Check {
            what:
                CheckCommand::Substitutable {
                    grammar,
                    stream,
                    relation,
                    max_len,
                },
        } => {
            let (sample, extra): (BTreeSet<String>, Vec<char>) = match (&grammar, &stream) {
                (Some(path), None) => {
                    let g = load_grammar(path)?;
                    let bound = max_len.ok_or_else(|| {
                        relsub::Error::Parse("--max-len is required with --grammar".to_string())
                    })?;
                    (
                        enumerate(&g, bound),
                        g.alphabet().symbols().to_vec(),
                    )
                }
                (None, Some(path)) => {
                    let text = read_stream(path)?;
                    let sample: BTreeSet<String> =
                        text.lines().map(str::to_string).collect();
                    let extra = sample.iter().flat_map(|w| w.chars()).collect();
                    (sample, extra)
                }
                _ => {
                    return Err(relsub::Error::Parse(
                        "exactly one of --grammar or --stream is required".to_string(),
                    ))
                }
            };
            let rel = build_relation(&relation, extra)?;
            println!("{}", check_substitutable(&sample, &rel)?);
        }
    }
    Ok(())
}
