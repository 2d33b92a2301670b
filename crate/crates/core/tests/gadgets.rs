//! Each construction against direct evaluation of its source instance: truth tables, graph
//! search, residue arithmetic and Turing machine simulation.

use rand::Rng;

use ptaut::classify::{classify, is_partially_ordered, is_rponfa};
use ptaut::constructions::cnf_unary::primes;
use ptaut::constructions::tm::{DeltaAlphabet, RunOutcome};
use ptaut::constructions::{
    a_kn, cnf3_to_unary_nfa, dag_gadget, dnf_to_podfa_family, dnf_to_ptnfa, dnf_to_rponfa, encode_computation,
    encode_run, mk_gadget, pt_hardness_gadget, strip_redundant, tm_to_ptnfa, w_word, Cnf3Formula, DnfFormula,
    Move, TmLimits, TmSpec,
};
use ptaut::deciders::{equivalent, universal, Budget};
use ptaut::oracle::words_up_to;
use ptaut::piecewise::{is_pt, sim_k};
use ptaut::random::{self, Shape};
use ptaut::{Nfa, Symbol, Word};

fn budget() -> Budget {
    Budget::default()
}

/// Bits of a word over `{0, 1}`, read through the automaton's alphabet.
fn bits(a: &Nfa, w: &[usize]) -> Vec<bool> {
    w.iter().map(|&c| a.symbol(c).as_str() == "1").collect()
}

fn dnf_instances(seed: u64) -> Vec<DnfFormula> {
    let mut r = random::rng(seed);
    (0..60)
        .map(|_| {
            let (vars, conjuncts) = (r.gen_range(1..=4), r.gen_range(1..=4));
            random::dnf(&mut r, vars, conjuncts)
        })
        .collect()
}

#[test]
fn dnf_ptnfa_language() {
    for phi in dnf_instances(1) {
        let a = dnf_to_ptnfa(&phi).unwrap();
        assert_eq!(classify(&a).ptnfa, Some(true));
        for w in words_up_to(2, phi.vars + 1) {
            let expected = w.len() != phi.vars || phi.evaluate(&bits(&a, &w));
            assert_eq!(a.accepts_indices(&w), expected, "{phi:?} on {}", a.decode(&w));
        }
        assert_eq!(universal(&a, &budget()).unwrap().holds, phi.is_valid());
    }
}

#[test]
fn dnf_ptnfa_worked_example() {
    let phi: DnfFormula = serde_json::from_str(include_str!("fixtures/dnf.json")).unwrap();
    let a = dnf_to_ptnfa(&phi).unwrap();
    assert!(!a.accepts(&Word::parse("0 1 0").unwrap()).unwrap());
    let taut = DnfFormula { vars: 3, conjuncts: vec![vec![]] };
    assert!(universal(&dnf_to_ptnfa(&taut).unwrap(), &budget()).unwrap().holds);
}

#[test]
fn podfa_family_complements_conjuncts() {
    for phi in dnf_instances(2) {
        let family = dnf_to_podfa_family(&phi).unwrap();
        assert_eq!(family.len(), phi.conjuncts.len());
        for (i, a) in family.iter().enumerate() {
            let r = classify(a);
            assert!(r.deterministic && r.complete && r.partially_ordered);
            for w in words_up_to(2, phi.vars + 1) {
                let conj = DnfFormula { vars: phi.vars, conjuncts: vec![phi.conjuncts[i].clone()] };
                let in_beta = w.len() == phi.vars && conj.evaluate(&bits(a, &w));
                assert_eq!(a.accepts_indices(&w), !in_beta);
            }
        }
        let common = words_up_to(2, phi.vars)
            .filter(|w| w.len() == phi.vars)
            .any(|w| family.iter().all(|a| a.accepts_indices(&w)));
        assert_eq!(common, !phi.is_valid());
    }
}

#[test]
fn dnf_rponfa_language() {
    for phi in dnf_instances(3) {
        let a = dnf_to_rponfa(&phi).unwrap();
        let r = classify(&a);
        assert!(r.self_loop_deterministic && is_rponfa(&a));
        for w in words_up_to(2, phi.vars + 2) {
            let b = bits(&a, &w);
            let expected = w.len() < phi.vars || phi.evaluate(&b[..phi.vars]);
            assert_eq!(a.accepts_indices(&w), expected, "{phi:?} on {}", a.decode(&w));
        }
        assert_eq!(is_pt(&a, &budget()).unwrap().holds, phi.is_valid());
    }
}

#[test]
fn dag_gadget_reachability() {
    let mut r = random::rng(4);
    let (mut reachable, mut unreachable) = (0, 0);
    for _ in 0..80 {
        let (n, density) = (r.gen_range(1..=8), r.gen_range(0.1..0.6));
        let g = random::dag(&mut r, n, density);
        let a = dag_gadget(&g).unwrap();
        assert_eq!(classify(&a).ptnfa, Some(true));
        let u = universal(&a, &budget()).unwrap();
        assert_eq!(u.holds, g.reachable(), "{g:?}");
        if let Some(w) = u.witness {
            assert!(w.len() < g.n && !a.accepts(&w).unwrap());
            unreachable += 1;
        } else {
            reachable += 1;
        }
    }
    assert!(reachable > 0 && unreachable > 0);
}

/// `0^j` encodes `x_k = j mod p_k` when every residue is 0 or 1.
fn cnf_accepts(phi: &Cnf3Formula, j: u64) -> bool {
    let ps = primes(phi.vars);
    if ps.iter().any(|&p| j % p >= 2) {
        return true;
    }
    let assignment: Vec<bool> = ps.iter().map(|&p| j % p == 1).collect();
    !phi.evaluate(&assignment)
}

#[test]
fn cnf_unary_residues() {
    let mut r = random::rng(5);
    for _ in 0..60 {
        let (vars, clauses) = (r.gen_range(1..=3), r.gen_range(1..=6));
        let phi = random::cnf3(&mut r, vars, clauses);
        let a = cnf3_to_unary_nfa(&phi).unwrap();
        let period: u64 = primes(vars).iter().product();
        for j in 0..3 * period + 5 {
            assert_eq!(a.accepts_indices(&vec![0; j as usize]), cnf_accepts(&phi, j), "{phi:?} at {j}");
        }
        let u = universal(&a, &budget()).unwrap().holds;
        assert_eq!(u, !phi.is_satisfiable());
        assert_eq!(is_pt(&a, &budget()).unwrap().holds, u);
    }
    let contradiction = Cnf3Formula { vars: 1, clauses: vec![vec![1], vec![-1]] };
    assert!(universal(&cnf3_to_unary_nfa(&contradiction).unwrap(), &budget()).unwrap().holds);
}

#[test]
fn pt_hardness_witness_classes() {
    let mut r = random::rng(6);
    for i in 0..60 {
        let (n, s) = (r.gen_range(1..=5), r.gen_range(1..=2));
        let shape = if i % 2 == 0 { Shape::new(n, s).complete() } else { Shape::new(n, s) };
        let m = random::rponfa(&mut r, &shape);
        let b = pt_hardness_gadget(&m).unwrap();
        assert!(is_rponfa(&b));
        let mut fresh: Vec<Symbol> = b.alphabet().iter().filter(|c| m.symbol_id(c).is_none()).cloned().collect();
        fresh.sort();
        assert_eq!(fresh.len(), 2);
        let (fa, fb) = (Word::new(vec![fresh[0].clone()]), Word::new(vec![fresh[1].clone()]));
        // The separating pair needs a rejected word that keeps some state alive; the least
        // rejected word may instead leave the empty set when `m` is partial.
        let live = words_up_to(m.num_symbols(), 6)
            .find(|w| !m.accepts_indices(w) && !m.run(m.initial(), w).is_empty())
            .map(|w| m.decode(&w));
        match universal(&m, &budget()).unwrap().witness {
            None => {
                let ids: Vec<usize> = fresh.iter().map(|c| b.symbol_id(c).unwrap()).collect();
                for w in words_up_to(b.num_symbols(), 4) {
                    assert_eq!(b.accepts_indices(&w), w.iter().any(|c| ids.contains(c)));
                }
                assert!(is_pt(&b, &budget()).unwrap().holds);
            }
            Some(_) => {
                assert!(!is_pt(&b, &budget()).unwrap().holds);
                let Some(w) = live else { continue };
                for k in 1..=3 {
                    let u = w.concat(&fa).concat(&fb.concat(&fa).repeat(k));
                    let v = w.concat(&fb).concat(&fa.concat(&fb).repeat(k));
                    assert!(sim_k(&u, &v, k));
                    assert_ne!(b.accepts(&u).unwrap(), b.accepts(&v).unwrap(), "k={k}");
                }
            }
        }
    }
}

#[test]
fn mk_language_and_class() {
    let mut r = random::rng(7);
    for i in 0..60 {
        let k = r.gen_range(1..=2);
        let m = if i % 2 == 0 {
            let n = r.gen_range(1..=4);
            random::rponfa(&mut r, &Shape::new(n, 2))
        } else {
            let (vars, conjuncts) = (r.gen_range(1..=2), r.gen_range(1..=2));
            dnf_to_ptnfa(&random::dnf(&mut r, vars, conjuncts)).unwrap()
        };
        let Ok(g) = mk_gadget(&m, k) else {
            assert!(m.is_empty().0);
            continue;
        };
        if classify(&m).ptnfa == Some(true) {
            assert_eq!(classify(&g).ptnfa, Some(true));
        }
        if is_rponfa(&m) {
            assert!(is_rponfa(&g));
        }
        let sk = m.num_symbols() * k;
        for w in words_up_to(2, sk + 3) {
            let expected = (k..sk).contains(&w.len())
                || (w.len() >= sk && m.accepts_indices(&w[sk..]));
            assert_eq!(g.accepts_indices(&w), expected, "k={k} on {}", g.decode(&w));
        }
    }
}

#[test]
fn stripped_a_kn_is_equivalent() {
    for k in 1..=2 {
        for n in 1..=3 {
            let a = a_kn(k, n).unwrap();
            assert_eq!(classify(&a).ptnfa, Some(true));
            let s = strip_redundant(&a).unwrap();
            assert!(equivalent(&a, &s, &budget()).unwrap().holds);
            assert!(is_rponfa(&s));
            // For n = 1 the removed states are unreachable, so the DFA left behind is complete.
            assert_eq!(s.is_complete(), n == 1);
        }
    }
}

fn tm(name: &str) -> TmSpec {
    let text = match name {
        "accept" => include_str!("fixtures/tm_accept.json"),
        _ => include_str!("fixtures/tm_reject.json"),
    };
    serde_json::from_str(text).unwrap()
}

/// Words of length `|W_{n,n}|` whose first projection is `W_{n,n}` and whose second
/// projection is random.
fn random_projection_word(r: &mut impl Rng, spec: &TmSpec, n: usize) -> Word {
    let delta = DeltaAlphabet::new(spec);
    let w = w_word(n, n).unwrap();
    let letters = w
        .symbols()
        .iter()
        .map(|a| Symbol::new(format!("{a}:{}", delta.name(r.gen_range(0..delta.len())))).unwrap())
        .collect();
    Word::new(letters)
}

#[test]
fn rejecting_tm_accepts_short_and_projected_words() {
    let spec = tm("reject");
    let x = Word::parse("1").unwrap();
    let g = tm_to_ptnfa(&spec, &x, &TmLimits::default()).unwrap();
    let a = &g.automaton;
    assert_eq!(encode_run(&spec, &x, g.n).unwrap(), None);
    assert!(words_up_to(a.num_symbols(), 4).all(|w| a.accepts_indices(&w)));
    assert!(a.accepts(&encode_computation(&spec, &x, g.n).unwrap()).unwrap());
    let mut r = random::rng(8);
    for _ in 0..200 {
        assert!(a.accepts(&random_projection_word(&mut r, &spec, g.n)).unwrap());
    }
}

/// Machine over `{1, _}` with states `q0, q1, qf` on two cells. Entering `qf` always moves
/// left, so the head ends on the first cell.
fn random_tm(r: &mut impl Rng) -> TmSpec {
    let states = ["q0", "q1", "qf"];
    let tape = ["1", "_"];
    let moves = [Move::L, Move::R, Move::S];
    let mut delta = Vec::new();
    for q in &states[..2] {
        for t in tape {
            let q2 = states[r.gen_range(0..3)];
            let mv = if q2 == "qf" { Move::L } else { moves[r.gen_range(0..3)] };
            delta.push((q.to_string(), t.to_string(), q2.to_string(), tape[r.gen_range(0..2)].to_string(), mv));
        }
    }
    for t in tape {
        delta.push(("qf".into(), t.to_string(), "qf".into(), t.to_string(), Move::S));
    }
    TmSpec {
        states: states.map(String::from).to_vec(),
        tape: tape.map(String::from).to_vec(),
        input: vec!["1".into()],
        blank: "_".into(),
        q0: "q0".into(),
        qf: "qf".into(),
        delta,
        space: 2,
    }
}

#[test]
fn random_tms_witness_based() {
    let mut r = random::rng(9);
    let (mut accepting, mut rejecting) = (0, 0);
    for i in 0..50 {
        let spec = random_tm(&mut r);
        let x = Word::parse(if i % 2 == 0 { "1" } else { "1 1" }).unwrap();
        let g = tm_to_ptnfa(&spec, &x, &TmLimits::default()).unwrap();
        let a = &g.automaton;
        assert_eq!(classify(a).ptnfa, Some(true), "machine {i}");
        assert!(is_partially_ordered(a));
        let accepts = matches!(spec.simulate(&x, 1 << 12).unwrap(), RunOutcome::Accepts(_));
        let run = encode_run(&spec, &x, g.n).unwrap();
        assert_eq!(run.is_some(), accepts);
        match run {
            Some(w) => {
                accepting += 1;
                assert!(!a.accepts(&w).unwrap(), "machine {i}");
                let mut idx = a.encode(&w).unwrap();
                for _ in 0..20 {
                    let pos = r.gen_range(0..idx.len());
                    let old = idx[pos];
                    idx[pos] = (old + r.gen_range(1..a.num_symbols())) % a.num_symbols();
                    assert!(a.accepts_indices(&idx), "machine {i}, position {pos}");
                    idx[pos] = old;
                }
            }
            None => {
                rejecting += 1;
                assert!(a.accepts(&encode_computation(&spec, &x, g.n).unwrap()).unwrap());
            }
        }
        for _ in 0..20 {
            let w = random_projection_word(&mut r, &spec, g.n);
            let is_run = encode_run(&spec, &x, g.n).unwrap().as_ref() == Some(&w);
            assert_eq!(a.accepts(&w).unwrap(), !is_run);
        }
    }
    assert!(accepting > 0 && rejecting > 0, "{accepting} accepting, {rejecting} rejecting");
}

#[test]
fn accepting_fixture_rejects_only_its_run() {
    let spec = tm("accept");
    let x = Word::parse("1").unwrap();
    let g = tm_to_ptnfa(&spec, &x, &TmLimits::default()).unwrap();
    let run = encode_run(&spec, &x, g.n).unwrap().unwrap();
    assert_eq!(run.len() as u128, g.word_length);
    assert!(!g.automaton.accepts(&run).unwrap());
    assert!(words_up_to(g.automaton.num_symbols(), 3).all(|w| g.automaton.accepts_indices(&w)));
}
