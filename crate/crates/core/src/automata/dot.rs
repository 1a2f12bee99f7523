use std::fmt::Write as _;

use super::BuchiAutomaton;

/// Graphviz rendering. Nodes appear in state order and edges sorted, so the
/// output is stable.
pub fn to_dot(a: &BuchiAutomaton, name: &str) -> String {
    let ab = a.alphabet();
    let mut out = String::new();
    let _ = writeln!(out, "digraph \"{}\" {{", name.replace('"', "\\\""));
    out.push_str("  rankdir=LR;\n  node [shape=circle];\n");
    for q in 0..a.num_states() {
        let shape = if a.is_accepting(q) { "doublecircle" } else { "circle" };
        let _ = writeln!(out, "  q{q} [label=\"q{q}\", shape={shape}];");
    }
    for (i, &q) in a.initial().iter().enumerate() {
        let _ = writeln!(out, "  init{i} [shape=point];\n  init{i} -> q{q};");
    }
    for q in 0..a.num_states() {
        let mut edges = a.edges(q).to_vec();
        edges.sort_by_key(|e| (e.target, e.guard));
        for e in edges {
            let _ = writeln!(out, "  q{q} -> q{} [label=\"{}\"];", e.target, e.guard.display(ab));
        }
    }
    out.push_str("}\n");
    out
}
