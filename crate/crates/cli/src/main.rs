//! `ptaut`: classify automata, decide language properties, generate gadgets.
//!
//! Exit codes: 0 when the decided property holds (or the command succeeded), 1 when it
//! fails, 2 on malformed input, 3 when a budget or size cap is exceeded.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ptaut::classify::classify;
use ptaut::constructions::{self, Cnf3Formula, Dag, DnfFormula, TmLimits, TmSpec};
use ptaut::deciders::{self, Budget, Decision};
use ptaut::piecewise::{self, KptWitness};
use ptaut::{dot, oracle, random, Error, Nfa, Word};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "ptaut", version, about = "Partially ordered automata and piecewise testable languages")]
struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Largest number of macro-states a decider may create.
    #[arg(long, global = true, value_name = "N", default_value_t = Budget::DEFAULT_MAX)]
    max_macrostates: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Report determinism, completeness, partial order, confluence, UMS and depth.
    Classify { file: PathBuf },
    /// Decide a language property; exit 0 if it holds, 1 with a witness if not.
    #[command(subcommand)]
    Decide(Decide),
    /// Build a word or an automaton and print it.
    #[command(subcommand)]
    Gen(Gen),
    /// Bounded brute-force refutation by enumerating words.
    #[command(subcommand)]
    Oracle(Oracle),
    /// Convert an automaton to another format.
    #[command(subcommand)]
    Export(Export),
}

#[derive(Subcommand)]
enum Decide {
    /// Is every word accepted?
    Universal { file: PathBuf },
    /// Is L(A) contained in L(B)?
    Includes { a: PathBuf, b: PathBuf },
    /// Do A and B accept the same language?
    Equiv { a: PathBuf, b: PathBuf },
    /// Is the language piecewise testable?
    Pt { file: PathBuf },
    /// Is the language k-piecewise testable?
    Kpt {
        file: PathBuf,
        #[arg(short)]
        k: usize,
    },
    /// Least k for which the language is k-piecewise testable.
    Mink { file: PathBuf },
}

#[derive(Subcommand)]
enum Gen {
    /// The word W_{k,n}.
    Wword {
        #[arg(short)]
        k: usize,
        #[arg(short)]
        n: usize,
    },
    /// The ptNFA A_{k,n} accepting everything except W_{k,n}.
    Aknn {
        #[arg(short)]
        k: usize,
        #[arg(short)]
        n: usize,
        /// Drop the non-accepting states (k+1;m)..(2k;m).
        #[arg(long)]
        strip: bool,
    },
    /// Unary ptNFA, universal iff t is reachable from s. Input: {"n", "edges", "s", "t"}.
    Dag { file: PathBuf },
    /// Binary ptNFA, universal iff the DNF formula is valid.
    DnfPtnfa { file: PathBuf },
    /// One poDFA per conjunct; a JSON array.
    DnfPodfas { file: PathBuf },
    /// M_k: k-piecewise testable iff the input automaton is universal.
    Mk {
        file: PathBuf,
        #[arg(short)]
        k: usize,
    },
    /// Unary NFA, universal iff the 3-CNF formula is unsatisfiable.
    Cnf3Unary { file: PathBuf },
    /// rpoNFA, piecewise testable iff the input rpoNFA is universal.
    PtHardness { file: PathBuf },
    /// rpoNFA, piecewise testable iff the DNF formula is valid.
    DnfRponfa { file: PathBuf },
    /// ptNFA, universal iff the machine does not accept the input word.
    Tm {
        file: PathBuf,
        /// Input word, symbols separated by spaces.
        #[arg(long)]
        word: String,
        /// Print the encoding of the accepting run instead of the automaton.
        #[arg(long)]
        emit_run: bool,
        /// Largest number of states to build.
        #[arg(long, default_value_t = TmLimits::default().max_states)]
        max_states: usize,
    },
    /// A seeded random instance.
    Random(RandomArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Nfa,
    Dfa,
    Ponfa,
    Rponfa,
    Podfa,
    Dnf,
    Cnf3,
    Dag,
}

#[derive(Args)]
struct RandomArgs {
    #[arg(long, value_enum)]
    kind: Kind,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// States, variables or DAG nodes.
    #[arg(long, default_value_t = 4)]
    size: usize,
    /// Alphabet size, conjuncts or clauses.
    #[arg(long, default_value_t = 2)]
    width: usize,
    #[arg(long, default_value_t = 0.3)]
    density: f64,
    /// Give every state a transition on every letter.
    #[arg(long)]
    complete: bool,
}

#[derive(Subcommand)]
enum Oracle {
    /// Shortest rejected word up to the bound.
    Universal {
        file: PathBuf,
        #[arg(long)]
        max_len: usize,
    },
    /// Shortest word with different acceptance up to the bound.
    Equiv {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        max_len: usize,
    },
    /// A separated pair of k-equivalent words up to the bound.
    Kpt {
        file: PathBuf,
        #[arg(short)]
        k: usize,
        #[arg(long)]
        max_len: usize,
    },
}

#[derive(Subcommand)]
enum Export {
    /// Graphviz DOT.
    Dot { file: PathBuf },
}

/// Errors with their exit code.
struct Failure(u8, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BudgetExceeded(_) | Error::CapExceeded(_) => 3,
            _ => 2,
        };
        Failure(code, e.to_string())
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure(2, format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<Nfa, Failure> {
    Nfa::from_json(&read(path)?).map_err(|e| Failure(2, format!("{}: {e}", path.display())))
}

fn load_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    serde_json::from_str(&read(path)?).map_err(|e| Failure(2, format!("{}: {e}", path.display())))
}

struct Out {
    json: bool,
    text: String,
}

impl Out {
    fn line(&mut self, s: impl AsRef<str>) {
        self.text.push_str(s.as_ref());
        self.text.push('\n');
    }

    fn value(&mut self, v: impl serde::Serialize) {
        self.line(serde_json::to_string_pretty(&v).expect("serializable"));
    }

    fn automaton(&mut self, a: &Nfa) {
        self.text.push_str(&a.to_json());
    }
}

fn word_json(w: &Word) -> Value {
    json!(w.to_string())
}

fn decision(out: &mut Out, d: &Decision) -> u8 {
    if out.json {
        out.value(json!({ "holds": d.holds, "witness": d.witness.as_ref().map(word_json) }));
    } else {
        out.line(if d.holds { "holds" } else { "fails" });
        if let Some(w) = &d.witness {
            out.line(w.to_string());
        }
    }
    u8::from(!d.holds)
}

fn pair(out: &mut Out, holds: bool, w: Option<&KptWitness>) -> u8 {
    if out.json {
        let witness = w.map(|w| json!({ "k": w.k(), "u": word_json(w.u()), "v": word_json(w.v()) }));
        out.value(json!({ "holds": holds, "witness": witness }));
    } else {
        out.line(if holds { "holds" } else { "fails" });
        if let Some(w) = w {
            out.line(w.u().to_string());
            out.line(w.v().to_string());
        }
    }
    u8::from(!holds)
}

fn run(cli: Cli, out: &mut Out) -> Result<u8, Failure> {
    let budget = Budget::new(cli.max_macrostates);
    match cli.command {
        Command::Classify { file } => {
            let r = classify(&load(&file)?);
            if out.json {
                out.value(&r);
            } else {
                out.line(r.to_string());
            }
            Ok(0)
        }
        Command::Decide(d) => match d {
            Decide::Universal { file } => Ok(decision(out, &deciders::universal(&load(&file)?, &budget)?)),
            Decide::Includes { a, b } => Ok(decision(out, &deciders::includes(&load(&a)?, &load(&b)?, &budget)?)),
            Decide::Equiv { a, b } => Ok(decision(out, &deciders::equivalent(&load(&a)?, &load(&b)?, &budget)?)),
            Decide::Pt { file } => {
                let d = piecewise::is_pt(&load(&file)?, &budget)?;
                if out.json {
                    out.value(json!({
                        "holds": d.holds,
                        "minimal_dfa_states": d.minimal_dfa.num_states(),
                        "partially_ordered": d.partially_ordered,
                        "ums": d.ums,
                        "confluent": d.confluent,
                    }));
                } else {
                    out.line(if d.holds { "holds" } else { "fails" });
                }
                Ok(u8::from(!d.holds))
            }
            Decide::Kpt { file, k } => {
                let d = piecewise::is_kpt(&load(&file)?, k, &budget)?;
                Ok(pair(out, d.holds, d.witness.as_ref()))
            }
            Decide::Mink { file } => {
                let k = piecewise::min_k(&load(&file)?, &budget)?;
                if out.json {
                    out.value(json!({ "holds": k.is_some(), "k": k }));
                } else {
                    out.line(k.map_or_else(|| "not piecewise testable".to_string(), |k| k.to_string()));
                }
                Ok(u8::from(k.is_none()))
            }
        },
        Command::Gen(g) => generate(g, out).map(|()| 0),
        Command::Oracle(o) => match o {
            Oracle::Universal { file, max_len } => {
                let w = oracle::oracle_universal(&load(&file)?, max_len);
                Ok(decision(out, &w.map_or_else(Decision::holds, Decision::fails)))
            }
            Oracle::Equiv { a, b, max_len } => {
                let w = oracle::oracle_equivalent(&load(&a)?, &load(&b)?, max_len)?;
                Ok(decision(out, &w.map_or_else(Decision::holds, Decision::fails)))
            }
            Oracle::Kpt { file, k, max_len } => {
                let w = oracle::oracle_kpt(&load(&file)?, k, max_len);
                Ok(pair(out, w.is_none(), w.as_ref()))
            }
        },
        Command::Export(Export::Dot { file }) => {
            out.text.push_str(&dot::export_dot(&load(&file)?));
            Ok(0)
        }
    }
}

fn generate(g: Gen, out: &mut Out) -> Result<(), Failure> {
    let a = match g {
        Gen::Wword { k, n } => {
            let w = constructions::w_word(k, n)?;
            if out.json {
                out.value(word_json(&w));
            } else {
                out.line(w.to_string());
            }
            return Ok(());
        }
        Gen::Aknn { k, n, strip } => {
            let a = constructions::a_kn(k, n)?;
            if strip {
                constructions::strip_redundant(&a)?
            } else {
                a
            }
        }
        Gen::Dag { file } => constructions::dag_gadget(&load_json::<Dag>(&file)?)?,
        Gen::DnfPtnfa { file } => constructions::dnf_to_ptnfa(&load_json::<DnfFormula>(&file)?)?,
        Gen::DnfPodfas { file } => {
            let family = constructions::dnf_to_podfa_family(&load_json::<DnfFormula>(&file)?)?;
            let parts: Vec<String> = family.iter().map(|a| a.to_json().trim_end().to_string()).collect();
            out.line(format!("[\n{}\n]", parts.join(",\n")));
            return Ok(());
        }
        Gen::Mk { file, k } => constructions::mk_gadget(&load(&file)?, k)?,
        Gen::Cnf3Unary { file } => constructions::cnf3_to_unary_nfa(&load_json::<Cnf3Formula>(&file)?)?,
        Gen::PtHardness { file } => constructions::pt_hardness_gadget(&load(&file)?)?,
        Gen::DnfRponfa { file } => constructions::dnf_to_rponfa(&load_json::<DnfFormula>(&file)?)?,
        Gen::Tm { file, word, emit_run, max_states } => {
            let spec: TmSpec = load_json(&file)?;
            let x = Word::parse(&word)?;
            let limits = TmLimits { max_states, ..TmLimits::default() };
            if emit_run {
                let n = constructions::tm::choose_n(&spec)?;
                let run = constructions::encode_run(&spec, &x, n)?;
                if out.json {
                    out.value(json!(run.as_ref().map(Word::to_string)));
                } else if let Some(w) = &run {
                    out.line(w.to_string());
                }
                return match run {
                    Some(_) => Ok(()),
                    None => Err(Failure(1, "the machine does not accept the input".into())),
                };
            }
            constructions::tm_to_ptnfa(&spec, &x, &limits)?.automaton
        }
        Gen::Random(r) => {
            if !(0.0..=1.0).contains(&r.density) {
                return Err(Failure(2, "density must lie in [0, 1]".into()));
            }
            if r.size == 0 {
                return Err(Failure(2, "size must be positive".into()));
            }
            let mut rng = random::rng(r.seed);
            let shape = random::Shape { states: r.size, symbols: r.width, density: r.density, complete: r.complete };
            match r.kind {
                Kind::Nfa => random::nfa(&mut rng, &shape),
                Kind::Dfa => random::dfa(&mut rng, &shape),
                Kind::Ponfa => random::ponfa(&mut rng, &shape),
                Kind::Rponfa => random::rponfa(&mut rng, &shape),
                Kind::Podfa => random::podfa(&mut rng, &shape),
                Kind::Dnf | Kind::Cnf3 if r.width == 0 => {
                    return Err(Failure(2, "width must be positive".into()));
                }
                Kind::Dnf => {
                    out.value(random::dnf(&mut rng, r.size, r.width));
                    return Ok(());
                }
                Kind::Cnf3 => {
                    out.value(random::cnf3(&mut rng, r.size, r.width));
                    return Ok(());
                }
                Kind::Dag => {
                    out.value(random::dag(&mut rng, r.size, r.density));
                    return Ok(());
                }
            }
        }
    };
    out.automaton(&a);
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = Out { json: cli.json, text: String::new() };
    let code = match run(cli, &mut out) {
        Ok(code) => code,
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            code
        }
    };
    print!("{}", out.text);
    ExitCode::from(code)
}
