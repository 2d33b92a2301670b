//! Structural predicates on automata and a summary report.
//!
//! A poNFA has only trivial strongly connected components. An rpoNFA is a poNFA where
//! `q ∈ δ(q, a)` forces `δ(q, a) = {q}`. A ptNFA is a complete, confluent rpoNFA, which
//! coincides with a complete poNFA having the unique maximal state (UMS) property.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use rustc_hash::{FxHashMap, FxHashSet};
use serde::{Deserialize, Serialize};

use crate::automaton::{Nfa, Symbol};
use crate::error::{Error, Result};
use crate::graph;

/// `Σ(q) = {a | q ∈ δ(q, a)}` for every state, as sorted symbol indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelfLoopAlphabet(Vec<Vec<usize>>);

impl SelfLoopAlphabet {
    pub fn of(&self, q: usize) -> &[usize] {
        &self.0[q]
    }

    pub fn contains(&self, q: usize, a: usize) -> bool {
        self.0[q].binary_search(&a).is_ok()
    }

    pub fn symbols(&self, a: &Nfa, q: usize) -> Vec<Symbol> {
        self.0[q].iter().map(|&s| a.symbol(s).clone()).collect()
    }
}

pub fn self_loop_alphabet(a: &Nfa) -> SelfLoopAlphabet {
    SelfLoopAlphabet(
        (0..a.num_states())
            .map(|q| (0..a.num_symbols()).filter(|&s| a.succ(q, s).binary_search(&q).is_ok()).collect())
            .collect(),
    )
}

pub fn is_deterministic(a: &Nfa) -> bool {
    a.is_deterministic()
}

pub fn is_complete(a: &Nfa) -> bool {
    a.is_complete()
}

pub fn is_partially_ordered(a: &Nfa) -> bool {
    graph::is_acyclic_ignoring_loops(&a.adjacency())
}

/// Whenever `q ∈ δ(q, a)`, `δ(q, a) = {q}`.
pub fn is_self_loop_deterministic(a: &Nfa) -> bool {
    (0..a.num_states()).all(|q| {
        (0..a.num_symbols()).all(|s| {
            let t = a.succ(q, s);
            t.binary_search(&q).is_err() || t.len() == 1
        })
    })
}

pub fn is_rponfa(a: &Nfa) -> bool {
    is_partially_ordered(a) && is_self_loop_deterministic(a)
}

/// For all `q`, letters `x, y` (possibly equal), `s ∈ δ(q, x)`, `t ∈ δ(q, y)`, some
/// `w ∈ {x, y}*` has `δ(s, w) ∩ δ(t, w) ≠ ∅`.
pub fn is_confluent(a: &Nfa) -> bool {
    confluence_violation(a).is_none()
}

/// A triple `(q, x, y)` witnessing non-confluence, if any.
pub fn confluence_violation(a: &Nfa) -> Option<(usize, usize, usize)> {
    let m = a.num_symbols();
    for x in 0..m {
        for y in x..m {
            let mut memo: FxHashMap<(usize, usize), bool> = FxHashMap::default();
            for q in 0..a.num_states() {
                for &s in a.succ(q, x) {
                    for &t in a.succ(q, y) {
                        if s != t && !joinable(a, ordered(s, t), x, y, &mut memo) {
                            return Some((q, x, y));
                        }
                    }
                }
            }
        }
    }
    None
}

fn ordered(s: usize, t: usize) -> (usize, usize) {
    if s <= t {
        (s, t)
    } else {
        (t, s)
    }
}

/// Search in the synchronous pair graph over `{x, y}` for a diagonal pair.
fn joinable(a: &Nfa, start: (usize, usize), x: usize, y: usize, memo: &mut FxHashMap<(usize, usize), bool>) -> bool {
    if let Some(&v) = memo.get(&start) {
        return v;
    }
    let letters: &[usize] = if x == y { &[x] } else { &[x, y] };
    let mut visited: FxHashSet<(usize, usize)> = FxHashSet::from_iter([start]);
    let mut queue = VecDeque::from([start]);
    let mut found = false;
    'search: while let Some((s, t)) = queue.pop_front() {
        if s == t {
            found = true;
            break;
        }
        match memo.get(&(s, t)) {
            Some(true) => {
                found = true;
                break;
            }
            Some(false) => continue,
            None => {}
        }
        for &c in letters {
            for &s2 in a.succ(s, c) {
                for &t2 in a.succ(t, c) {
                    if s2 == t2 {
                        found = true;
                        break 'search;
                    }
                    let p = ordered(s2, t2);
                    if visited.insert(p) {
                        queue.push_back(p);
                    }
                }
            }
        }
    }
    if found {
        memo.insert(start, true);
    } else {
        for p in visited {
            memo.insert(p, false);
        }
    }
    found
}

/// UMS: for every `q`, `q` is the only state without an outgoing edge to a different state
/// inside the weakly connected component of `G(A, Σ(q))` that contains `q`.
pub fn is_ums(a: &Nfa) -> Result<bool> {
    Ok(ums_violation(a)?.is_none())
}

/// First state breaking the UMS property.
pub fn ums_violation(a: &Nfa) -> Result<Option<usize>> {
    if !is_partially_ordered(a) {
        return Err(Error::NotPartiallyOrdered);
    }
    let loops = self_loop_alphabet(a);
    let mut cache: HashMap<Vec<usize>, LetterGraph> = HashMap::new();
    for q in 0..a.num_states() {
        let letters = loops.of(q);
        if letters.is_empty() {
            continue;
        }
        let g = cache.entry(letters.to_vec()).or_insert_with(|| LetterGraph::new(a, letters));
        if g.sinks[g.component[q]] != [q] {
            return Ok(Some(q));
        }
    }
    Ok(None)
}

/// Weak components of `G(A, Γ)` and the states of each component with no exit.
struct LetterGraph {
    component: Vec<usize>,
    sinks: Vec<Vec<usize>>,
}

impl LetterGraph {
    fn new(a: &Nfa, letters: &[usize]) -> Self {
        let n = a.num_states();
        let mut undirected = vec![Vec::new(); n];
        let mut has_exit = vec![false; n];
        for p in 0..n {
            for &c in letters {
                for &t in a.succ(p, c) {
                    if t != p {
                        has_exit[p] = true;
                        undirected[p].push(t);
                        undirected[t].push(p);
                    }
                }
            }
        }
        let mut component = vec![usize::MAX; n];
        let mut sinks = Vec::new();
        for root in 0..n {
            if component[root] != usize::MAX {
                continue;
            }
            let id = sinks.len();
            let mut members = Vec::new();
            component[root] = id;
            let mut stack = vec![root];
            while let Some(v) = stack.pop() {
                members.push(v);
                for &w in &undirected[v] {
                    if component[w] == usize::MAX {
                        component[w] = id;
                        stack.push(w);
                    }
                }
            }
            members.sort_unstable();
            sinks.push(members.into_iter().filter(|&v| !has_exit[v]).collect());
        }
        LetterGraph { component, sinks }
    }
}

/// Complete, confluent rpoNFA. Also evaluated as complete + partially ordered + UMS and
/// the two answers are checked to agree.
pub fn is_ptnfa(a: &Nfa) -> bool {
    let complete = a.is_complete();
    let po = is_partially_ordered(a);
    let by_confluence = complete && po && is_self_loop_deterministic(a) && is_confluent(a);
    let by_ums = complete && po && is_ums(a).expect("partially ordered");
    assert_eq!(by_confluence, by_ums, "the two characterisations of ptNFAs disagree");
    by_confluence
}

/// Summary of all predicates; optional fields are filled only where they are defined.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub deterministic: bool,
    pub complete: bool,
    pub partially_ordered: bool,
    pub self_loop_deterministic: bool,
    pub confluent: Option<bool>,
    pub ums: Option<bool>,
    pub ptnfa: Option<bool>,
    pub depth: Option<usize>,
}

pub fn classify(a: &Nfa) -> ClassificationReport {
    let complete = a.is_complete();
    let po = is_partially_ordered(a);
    let slod = is_self_loop_deterministic(a);
    let confluent = is_confluent(a);
    let ums = po.then(|| is_ums(a).expect("partially ordered"));
    let by_confluence = complete && po && slod && confluent;
    let by_ums = complete && po && ums == Some(true);
    assert_eq!(by_confluence, by_ums, "the two characterisations of ptNFAs disagree");
    ClassificationReport {
        deterministic: a.is_deterministic(),
        complete,
        partially_ordered: po,
        self_loop_deterministic: slod,
        confluent: Some(confluent),
        ums,
        ptnfa: Some(by_confluence),
        depth: po.then(|| a.depth().expect("partially ordered")),
    }
}

impl fmt::Display for ClassificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn opt<T: fmt::Display>(v: &Option<T>) -> String {
            v.as_ref().map_or_else(|| "n/a".to_string(), T::to_string)
        }
        writeln!(f, "deterministic: {}", self.deterministic)?;
        writeln!(f, "complete: {}", self.complete)?;
        writeln!(f, "partially_ordered: {}", self.partially_ordered)?;
        writeln!(f, "self_loop_deterministic: {}", self.self_loop_deterministic)?;
        writeln!(f, "confluent: {}", opt(&self.confluent))?;
        writeln!(f, "ums: {}", opt(&self.ums))?;
        writeln!(f, "ptnfa: {}", opt(&self.ptnfa))?;
        write!(f, "depth: {}", opt(&self.depth))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn confluent_sample() -> Nfa {
        Nfa::from_json(
            r#"{"alphabet":["a","b"],"states":["0","1","2"],"initial":["0"],"accepting":["1"],
            "transitions":[["0","a","0"],["0","b","0"],["0","a","1"],["1","a","1"],["1","b","2"],
            ["2","a","2"],["2","b","2"]]}"#,
        )
        .unwrap()
    }

    #[test]
    fn confluent_sample_report() {
        let r = classify(&confluent_sample());
        assert_eq!(
            r,
            ClassificationReport {
                deterministic: false,
                complete: true,
                partially_ordered: true,
                self_loop_deterministic: false,
                confluent: Some(true),
                ums: Some(false),
                ptnfa: Some(false),
                depth: Some(2),
            }
        );
        assert_eq!(ums_violation(&confluent_sample()).unwrap(), Some(0));
    }

    #[test]
    fn report_json_keys() {
        let v = serde_json::to_value(classify(&confluent_sample())).unwrap();
        let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
        for k in ["deterministic", "complete", "partially_ordered", "self_loop_deterministic", "confluent", "ums", "ptnfa", "depth"] {
            assert!(keys.contains(&k), "{k}");
        }
    }

    #[test]
    fn ums_needs_partial_order() {
        let cyc = Nfa::from_json(
            r#"{"alphabet":["a"],"states":["0","1"],"initial":["0"],"accepting":[],
            "transitions":[["0","a","1"],["1","a","0"]]}"#,
        )
        .unwrap();
        assert!(matches!(is_ums(&cyc), Err(Error::NotPartiallyOrdered)));
        let r = classify(&cyc);
        assert_eq!((r.ums, r.depth, r.ptnfa), (None, None, Some(false)));
    }

    #[test]
    fn non_confluent_rponfa() {
        // 0 branches on `a` to two distinct sinks.
        let a = Nfa::from_json(
            r#"{"alphabet":["a"],"states":["0","1","2"],"initial":["0"],"accepting":["1"],
            "transitions":[["0","a","1"],["0","a","2"],["1","a","1"],["2","a","2"]]}"#,
        )
        .unwrap();
        assert!(is_rponfa(&a));
        assert!(!is_confluent(&a));
        assert_eq!(confluence_violation(&a), Some((0, 0, 0)));
        assert!(!is_ums(&a).unwrap());
        assert!(!is_ptnfa(&a));
    }

    #[test]
    fn self_loop_alphabet_lists_loops() {
        let b = confluent_sample();
        let s = self_loop_alphabet(&b);
        assert_eq!(s.of(0), &[0, 1]);
        assert_eq!(s.of(1), &[0]);
        assert_eq!(s.symbols(&b, 1), vec![Symbol::new("a").unwrap()]);
    }
}
