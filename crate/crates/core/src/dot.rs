//! Graphviz export.

use std::collections::BTreeMap;
use std::fmt::Write;

use crate::automaton::Nfa;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// A DOT digraph: one node per state (double circle when accepting), a point node with an
/// arrow for each initial state, and one edge per pair of states with its letters joined by
/// commas. Output order follows state and symbol indices.
pub fn export_dot(a: &Nfa) -> String {
    let mut out = String::new();
    let name = a.name().unwrap_or("automaton");
    writeln!(out, "digraph {} {{", quote(name)).unwrap();
    writeln!(out, "  rankdir=LR;").unwrap();
    for (q, s) in a.states().iter().enumerate() {
        let shape = if a.is_accepting(q) { "doublecircle" } else { "circle" };
        writeln!(out, "  {} [shape={shape}];", quote(s)).unwrap();
    }
    for &q in a.initial() {
        let entry = quote(&format!("__init_{}", a.state_name(q)));
        writeln!(out, "  {entry} [shape=point];").unwrap();
        writeln!(out, "  {entry} -> {};", quote(a.state_name(q))).unwrap();
    }
    let mut edges: BTreeMap<(usize, usize), Vec<&str>> = BTreeMap::new();
    for (p, x, q) in a.transitions() {
        edges.entry((p, q)).or_default().push(a.symbol(x).as_str());
    }
    for ((p, q), labels) in edges {
        writeln!(out, "  {} -> {} [label={}];", quote(a.state_name(p)), quote(a.state_name(q)), quote(&labels.join(",")))
            .unwrap();
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::tests::confluent_sample;

    #[test]
    fn single_state() {
        let a = Nfa::from_json(r#"{"alphabet":["a"],"states":["x"],"initial":["x"],"accepting":["x"],"transitions":[]}"#)
            .unwrap();
        let dot = export_dot(&a);
        assert_eq!(dot.lines().count(), 6);
        assert_eq!(
            dot,
            "digraph \"automaton\" {\n  rankdir=LR;\n  \"x\" [shape=doublecircle];\n  \"__init_x\" [shape=point];\n  \"__init_x\" -> \"x\";\n}\n"
        );
    }

    #[test]
    fn confluent_sample_edges_are_merged() {
        let dot = export_dot(&confluent_sample());
        assert_eq!(dot.lines().filter(|l| l.contains("[label=")).count(), 5);
        assert_eq!(dot.lines().filter(|l| l.contains("circle]")).count(), 3);
        assert_eq!(dot, export_dot(&confluent_sample()));
    }
}
