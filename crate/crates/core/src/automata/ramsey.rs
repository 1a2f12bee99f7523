//! Ramsey-based inclusion check with subsumption.
//!
//! A word `v` is summarised in `b` by its graph: for every pair of states,
//! whether some run on `v` connects them and whether such a run can visit an
//! accepting state. A counterexample to `L(a) ⊆ L(b)` is a stem `u` reaching
//! state `q` of `a` together with a loop word `v` that brings `q` back to
//! itself through an accepting state, such that no run of `b` on `v^ω`
//! starting in `δ_b(I, u)` is accepting. Only minimal stems (smaller `b`
//! subsets) and minimal loops (fewer `b` connections, more `a` acceptance)
//! are kept; both orders are preserved by appending letters.

use std::collections::HashMap;

use super::complement::{bits, Classes};
use super::{BuchiAutomaton, StateId};
use crate::alphabet::{Cube, Letter};
use crate::error::Result;
use crate::formula::UPTrace;
use crate::limits::{Limits, MAX_COMPLEMENT_CAP};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Graph {
    /// `reach[p]`: states reachable from `p` on the word
    reach: Vec<u64>,
    /// `acc[p]`: states reachable from `p` through an accepting state
    acc: Vec<u64>,
}

impl Graph {
    fn compose(&self, other: &Graph) -> Graph {
        let n = self.reach.len();
        let mut reach = vec![0u64; n];
        let mut acc = vec![0u64; n];
        for p in 0..n {
            for m in bits(self.reach[p]) {
                reach[p] |= other.reach[m];
                acc[p] |= other.acc[m];
            }
            for m in bits(self.acc[p]) {
                acc[p] |= other.reach[m];
            }
        }
        Graph { reach, acc }
    }

    fn below(&self, other: &Graph) -> bool {
        self.reach.iter().zip(&other.reach).all(|(x, y)| x & !y == 0)
            && self.acc.iter().zip(&other.acc).all(|(x, y)| x & !y == 0)
    }

    /// States from which `v^ω` has an accepting run, `v` being the word.
    fn accepting_starts(&self) -> u64 {
        let n = self.reach.len();
        // reflexive-transitive closure of the one-word step relation
        let mut closure: Vec<u64> = (0..n).map(|p| self.reach[p] | 1 << p).collect();
        for k in 0..n {
            for i in 0..n {
                if closure[i] & (1 << k) != 0 {
                    closure[i] |= closure[k];
                }
            }
        }
        let mut on_cycle = 0u64;
        for r in 0..n {
            if bits(self.acc[r]).any(|t| closure[t] & (1 << r) != 0) {
                on_cycle |= 1 << r;
            }
        }
        (0..n)
            .filter(|&p| closure[p] & on_cycle != 0)
            .fold(0, |m, p| m | 1 << p)
    }
}

/// Finite words kept as parent links.
struct Words {
    nodes: Vec<(usize, Letter)>,
}

const ROOT: usize = usize::MAX;

impl Words {
    fn push(&mut self, parent: usize, letter: Letter) -> usize {
        self.nodes.push((parent, letter));
        self.nodes.len() - 1
    }

    fn spell(&self, mut id: usize) -> Vec<Letter> {
        let mut out = Vec::new();
        while id != ROOT {
            let (parent, l) = self.nodes[id];
            out.push(l);
            id = parent;
        }
        out.reverse();
        out
    }
}

struct Loop {
    accepting: bool,
    graph: Graph,
    word: usize,
    live: bool,
}

/// A trace in `L(a) ∖ L(b)`, if any. `b` must have at most 64 states.
pub(crate) fn counterexample(a: &BuchiAutomaton, b: &BuchiAutomaton, limits: &Limits) -> Result<Option<UPTrace>> {
    let nb = b.num_states();
    assert!(nb <= MAX_COMPLEMENT_CAP);
    let guards: Vec<Cube> = [a, b]
        .iter()
        .flat_map(|x| (0..x.num_states()).flat_map(move |q| x.edges(q).iter().map(|e| e.guard)))
        .collect();
    let letters = Classes::of_guards(&guards, a.alphabet()).reps;
    let b_acc = b.accepting_states().fold(0u64, |m, q| m | 1 << q);
    let letter_graphs: Vec<Graph> = letters
        .iter()
        .map(|&l| {
            let reach: Vec<u64> = (0..nb).map(|p| b.successors(p, l).fold(0, |m, t| m | 1 << t)).collect();
            let acc = (0..nb)
                .map(|p| {
                    if b_acc & (1 << p) != 0 {
                        reach[p]
                    } else {
                        reach[p] & b_acc
                    }
                })
                .collect();
            Graph { reach, acc }
        })
        .collect();
    let a_succ: Vec<Vec<Vec<StateId>>> = letters
        .iter()
        .map(|&l| (0..a.num_states()).map(|q| a.successors(q, l).collect()).collect())
        .collect();
    let mut words = Words { nodes: Vec::new() };
    let mut steps = 0usize;

    // minimal stems per state of `a`
    let b_init = b.initial().iter().fold(0u64, |m, &q| m | 1 << q);
    let mut stems: Vec<Vec<(u64, usize)>> = vec![Vec::new(); a.num_states()];
    let mut queue: Vec<(StateId, u64, usize)> = Vec::new();
    for &q in a.initial() {
        if insert_stem(&mut stems[q], b_init, ROOT) {
            queue.push((q, b_init, ROOT));
        }
    }
    while let Some((q, set, word)) = queue.pop() {
        if !stems[q].iter().any(|&(s, w)| s == set && w == word) {
            continue;
        }
        steps += 1;
        if steps.is_multiple_of(256) {
            limits.check_cancelled()?;
            limits.check_budget(words.nodes.len())?;
        }
        for (c, g) in letter_graphs.iter().enumerate() {
            let next = bits(set).fold(0u64, |m, p| m | g.reach[p]);
            for &q2 in &a_succ[c][q] {
                if insert_stem_probe(&stems[q2], next) {
                    let w = words.push(word, letters[c]);
                    insert_stem(&mut stems[q2], next, w);
                    queue.push((q2, next, w));
                }
            }
        }
    }

    // minimal loops per arc of `a`
    let a_acc = |q: StateId| a.is_accepting(q);
    let mut loops: HashMap<(StateId, StateId), Vec<Loop>> = HashMap::new();
    let mut pending: Vec<((StateId, StateId), usize)> = Vec::new();
    for (c, g) in letter_graphs.iter().enumerate() {
        for p in 0..a.num_states() {
            for &q in &a_succ[c][p] {
                let w = words.push(ROOT, letters[c]);
                let accepting = a_acc(p) || a_acc(q);
                if let Some(i) = insert_loop(&mut loops, (p, q), accepting, g.clone(), w) {
                    pending.push(((p, q), i));
                }
            }
        }
    }
    while let Some((arc, i)) = pending.pop() {
        let (accepting, graph, word) = {
            let l = &loops[&arc][i];
            if !l.live {
                continue;
            }
            (l.accepting, l.graph.clone(), l.word)
        };
        steps += 1;
        if steps.is_multiple_of(256) {
            limits.check_cancelled()?;
            limits.check_budget(words.nodes.len())?;
        }
        let (p, q) = arc;
        if p == q && accepting {
            let good = graph.accepting_starts();
            if let Some(&(_, stem)) = stems[q].iter().find(|&&(s, _)| s & good == 0) {
                let pi = UPTrace::new(words.spell(stem), words.spell(word)).expect("loop word is nonempty");
                return Ok(Some(pi.normalized()));
            }
        }
        for (c, g) in letter_graphs.iter().enumerate() {
            let next = graph.compose(g);
            for &q2 in &a_succ[c][q] {
                let acc2 = accepting || a_acc(q2);
                if loop_subsumed(&loops, (p, q2), acc2, &next) {
                    continue;
                }
                let w = words.push(word, letters[c]);
                if let Some(j) = insert_loop(&mut loops, (p, q2), acc2, next.clone(), w) {
                    pending.push(((p, q2), j));
                }
            }
        }
    }
    Ok(None)
}

/// Whether `set` would be a new minimal stem.
fn insert_stem_probe(stems: &[(u64, usize)], set: u64) -> bool {
    !stems.iter().any(|&(s, _)| s & !set == 0)
}

fn insert_stem(stems: &mut Vec<(u64, usize)>, set: u64, word: usize) -> bool {
    if !insert_stem_probe(stems, set) {
        return false;
    }
    stems.retain(|&(s, _)| set & !s != 0);
    stems.push((set, word));
    true
}

fn loop_subsumed(
    loops: &HashMap<(StateId, StateId), Vec<Loop>>,
    arc: (StateId, StateId),
    accepting: bool,
    graph: &Graph,
) -> bool {
    loops.get(&arc).is_some_and(|ls| {
        ls.iter()
            .any(|l| l.live && (l.accepting || !accepting) && l.graph.below(graph))
    })
}

/// Adds a loop unless an existing one subsumes it, retiring the ones it
/// subsumes. Returns the index of the new entry.
fn insert_loop(
    loops: &mut HashMap<(StateId, StateId), Vec<Loop>>,
    arc: (StateId, StateId),
    accepting: bool,
    graph: Graph,
    word: usize,
) -> Option<usize> {
    if loop_subsumed(loops, arc, accepting, &graph) {
        return None;
    }
    let ls = loops.entry(arc).or_default();
    for l in ls.iter_mut() {
        if l.live && (accepting || !l.accepting) && graph.below(&l.graph) {
            l.live = false;
        }
    }
    ls.push(Loop {
        accepting,
        graph,
        word,
        live: true,
    });
    Some(ls.len() - 1)
}
