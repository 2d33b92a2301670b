//! DAG reachability as universality of a unary ptNFA.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::automaton::{Nfa, NfaBuilder, Symbol};
use crate::error::{Error, Result};
use crate::graph;

/// Directed acyclic graph on nodes `0..n` with source `s` and target `t`.
/// `t` must have no outgoing edges.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Dag {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
    pub s: usize,
    pub t: usize,
}

impl Dag {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidDag(m));
        if self.n == 0 {
            return bad("no nodes".into());
        }
        if self.s >= self.n || self.t >= self.n {
            return bad("source or target out of range".into());
        }
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            if u >= self.n || v >= self.n {
                return bad(format!("edge ({u}, {v}) out of range"));
            }
            if u == v {
                return bad(format!("self-loop on {u}"));
            }
            if u == self.t {
                return bad("the target has an outgoing edge".into());
            }
            adj[u].push(v);
        }
        if graph::topo_order(&adj).is_none() {
            return bad("the graph has a cycle".into());
        }
        Ok(())
    }

    /// Breadth-first reachability of `t` from `s`.
    pub fn reachable(&self) -> bool {
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([self.s]);
        seen[self.s] = true;
        while let Some(u) = queue.pop_front() {
            if u == self.t {
                return true;
            }
            for &(a, b) in &self.edges {
                if a == u && !seen[b] {
                    seen[b] = true;
                    queue.push_back(b);
                }
            }
        }
        false
    }
}

/// Nodes become accepting states `v0..`, edges become `a`-transitions, `s` is initial.
/// A chain `f_1 -> ... -> f_{n-1} -> t` of non-accepting states is added, `t` loops, and
/// every node other than `t` moves to `f_1`. The result is universal iff `t` is reachable
/// from `s`; otherwise `a^{n-1}` is rejected.
pub fn dag_gadget(g: &Dag) -> Result<Nfa> {
    g.validate()?;
    let mut b = NfaBuilder::with_alphabet(&[Symbol::new("a")?]);
    b.set_name("dag");
    let nodes: Vec<usize> = (0..g.n).map(|i| b.add_state(format!("v{i}"))).collect::<Result<_>>()?;
    let chain: Vec<usize> = (1..g.n).map(|i| b.add_state(format!("f{i}"))).collect::<Result<_>>()?;
    for &(u, v) in &g.edges {
        b.add_transition(nodes[u], 0, nodes[v]);
    }
    for w in chain.windows(2) {
        b.add_transition(w[0], 0, w[1]);
    }
    if let Some(&last) = chain.last() {
        b.add_transition(last, 0, nodes[g.t]);
    }
    b.add_transition(nodes[g.t], 0, nodes[g.t]);
    if let Some(&f1) = chain.first() {
        for (i, &q) in nodes.iter().enumerate() {
            if i != g.t {
                b.add_transition(q, 0, f1);
            }
        }
    }
    for &q in &nodes {
        b.set_accepting(q);
    }
    b.set_initial(nodes[g.s]);
    Ok(b.build())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::is_ptnfa;
    use crate::automaton::Word;

    #[test]
    fn isolated_target() {
        let g = Dag { n: 3, edges: vec![(0, 1)], s: 0, t: 2 };
        assert!(!g.reachable());
        let a = dag_gadget(&g).unwrap();
        assert!(is_ptnfa(&a));
        assert!(!a.accepts(&Word::parse("a a").unwrap()).unwrap());
        assert!(a.accepts(&Word::parse("a").unwrap()).unwrap());
    }

    #[test]
    fn validation() {
        assert!(Dag { n: 2, edges: vec![(0, 1), (1, 0)], s: 0, t: 1 }.validate().is_err());
        assert!(Dag { n: 2, edges: vec![(1, 0)], s: 0, t: 1 }.validate().is_err());
        assert!(Dag { n: 2, edges: vec![(0, 2)], s: 0, t: 1 }.validate().is_err());
        assert!(Dag { n: 1, edges: vec![], s: 0, t: 0 }.validate().is_ok());
    }
}
