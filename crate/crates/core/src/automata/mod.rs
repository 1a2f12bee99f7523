//! Büchi automata over `2^AP` with cube-labelled transitions, their boolean
//! closure, LTL and Kripke translations, emptiness, and inclusion.

mod complement;
mod dot;
mod emptiness;
mod hoa;
mod inclusion;
mod ltl;
mod ops;
mod ramsey;
mod simulation;

use std::collections::VecDeque;
use std::sync::Arc;

pub use complement::complement;
pub use dot::to_dot;
pub use emptiness::{is_empty, LassoWitness};
pub use hoa::{parse_hoa, to_hoa, HoaDocument};
pub use inclusion::{equivalent, includes, inclusion_counterexample};
pub use ltl::from_ltl;
pub use ops::{accepts_up, from_kripke, intersect, lasso_automaton, union};
pub use simulation::{direct_simulation, simulation_included};

use crate::alphabet::{cover_letters, AlphabetRef, Cube, Letter};
use crate::error::{Error, Result};

pub type StateId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub guard: Cube,
    pub target: StateId,
}

/// A nondeterministic Büchi automaton. Transitions carry propositional cubes;
/// a run is accepting iff it visits a recurrence state infinitely often.
#[derive(Debug, Clone)]
pub struct BuchiAutomaton {
    alphabet: AlphabetRef,
    edges: Vec<Vec<Edge>>,
    initial: Vec<StateId>,
    accepting: Vec<bool>,
}

impl PartialEq for BuchiAutomaton {
    /// Structural equality. Language equivalence is [`equivalent`].
    fn eq(&self, other: &Self) -> bool {
        self.alphabet == other.alphabet
            && self.edges == other.edges
            && self.initial == other.initial
            && self.accepting == other.accepting
    }
}

impl BuchiAutomaton {
    /// An automaton with no states, hence the empty language.
    pub fn new(alphabet: AlphabetRef) -> BuchiAutomaton {
        BuchiAutomaton {
            alphabet,
            edges: Vec::new(),
            initial: Vec::new(),
            accepting: Vec::new(),
        }
    }

    /// One accepting state looping on every letter.
    pub fn universal(alphabet: AlphabetRef) -> BuchiAutomaton {
        let mut a = BuchiAutomaton::new(alphabet);
        let q = a.add_state(true);
        a.add_initial(q);
        a.add_edge(q, Cube::TOP, q);
        a
    }

    pub fn add_state(&mut self, accepting: bool) -> StateId {
        self.edges.push(Vec::new());
        self.accepting.push(accepting);
        self.edges.len() - 1
    }

    pub fn add_initial(&mut self, q: StateId) {
        assert!(q < self.num_states(), "initial state out of range");
        if let Err(pos) = self.initial.binary_search(&q) {
            self.initial.insert(pos, q);
        }
    }

    pub fn set_accepting(&mut self, q: StateId, accepting: bool) {
        self.accepting[q] = accepting;
    }

    pub fn add_edge(&mut self, source: StateId, guard: Cube, target: StateId) {
        assert!(
            source < self.num_states() && target < self.num_states(),
            "edge endpoint out of range"
        );
        let edge = Edge { guard, target };
        if !self.edges[source].contains(&edge) {
            self.edges[source].push(edge);
        }
    }

    /// Adds an edge the caller knows to be new.
    pub(crate) fn push_edge(&mut self, source: StateId, guard: Cube, target: StateId) {
        self.edges[source].push(Edge { guard, target });
    }

    pub fn alphabet(&self) -> &AlphabetRef {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.edges.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.iter().map(Vec::len).sum()
    }

    pub fn initial(&self) -> &[StateId] {
        &self.initial
    }

    pub fn is_accepting(&self, q: StateId) -> bool {
        self.accepting[q]
    }

    pub fn accepting_states(&self) -> impl Iterator<Item = StateId> + '_ {
        (0..self.num_states()).filter(|&q| self.accepting[q])
    }

    pub fn all_accepting(&self) -> bool {
        self.accepting.iter().all(|&b| b)
    }

    pub fn edges(&self, q: StateId) -> &[Edge] {
        &self.edges[q]
    }

    pub fn successors(&self, q: StateId, letter: Letter) -> impl Iterator<Item = StateId> + '_ {
        self.edges[q]
            .iter()
            .filter(move |e| e.guard.matches(letter))
            .map(|e| e.target)
    }

    pub(crate) fn props(&self) -> usize {
        self.alphabet.len()
    }

    pub(crate) fn same_alphabet(&self, other: &BuchiAutomaton) -> Result<()> {
        if Arc::ptr_eq(&self.alphabet, &other.alphabet) || self.alphabet == other.alphabet {
            Ok(())
        } else {
            Err(Error::AlphabetMismatch {
                left: self.alphabet.to_string(),
                right: other.alphabet.to_string(),
            })
        }
    }

    /// Rebuilds the automaton keeping only `keep` states, renumbered in
    /// increasing order.
    fn restrict_to(&self, keep: &[bool]) -> BuchiAutomaton {
        let mut map = vec![usize::MAX; self.num_states()];
        let mut out = BuchiAutomaton::new(self.alphabet.clone());
        for q in 0..self.num_states() {
            if keep[q] {
                map[q] = out.add_state(self.accepting[q]);
            }
        }
        for q in 0..self.num_states() {
            if !keep[q] {
                continue;
            }
            for e in &self.edges[q] {
                if keep[e.target] {
                    out.add_edge(map[q], e.guard, map[e.target]);
                }
            }
        }
        for &q in &self.initial {
            if keep[q] {
                out.add_initial(map[q]);
            }
        }
        out
    }

    pub(crate) fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.num_states()];
        let mut queue: VecDeque<StateId> = VecDeque::new();
        for &q in &self.initial {
            if !seen[q] {
                seen[q] = true;
                queue.push_back(q);
            }
        }
        while let Some(q) = queue.pop_front() {
            for e in &self.edges[q] {
                if !seen[e.target] {
                    seen[e.target] = true;
                    queue.push_back(e.target);
                }
            }
        }
        seen
    }

    /// Removes unreachable states and states from which no accepting cycle is
    /// reachable, and merges parallel edges whose guards combine into a cube.
    /// The language is unchanged.
    pub fn trim(&self) -> BuchiAutomaton {
        let reach = self.reachable();
        let live = emptiness::live_states(self);
        let keep: Vec<bool> = reach.iter().zip(&live).map(|(a, b)| *a && *b).collect();
        let mut out = self.restrict_to(&keep);
        out.merge_parallel_edges();
        out
    }

    /// [`trim`](Self::trim) followed by quotienting with direct-simulation
    /// equivalence and dropping edges into strictly simulated siblings.
    pub fn reduce(&self) -> BuchiAutomaton {
        simulation::reduce(&self.trim())
    }

    fn merge_parallel_edges(&mut self) {
        let n = self.props();
        for edges in &mut self.edges {
            edges.sort_by_key(|e| (e.target, e.guard));
            let mut merged: Vec<Edge> = Vec::with_capacity(edges.len());
            let mut i = 0;
            while i < edges.len() {
                let target = edges[i].target;
                let mut guards: Vec<Cube> = Vec::new();
                while i < edges.len() && edges[i].target == target {
                    guards.push(edges[i].guard);
                    i += 1;
                }
                for g in simplify_cubes(guards, n) {
                    merged.push(Edge { guard: g, target });
                }
            }
            *edges = merged;
        }
    }

    /// Partition of all letters into classes on which every guard agrees.
    /// Each class is returned with its letters (ascending).
    pub(crate) fn letter_classes(&self) -> Vec<Vec<Letter>> {
        let mut guards: Vec<Cube> = self.edges.iter().flatten().map(|e| e.guard).collect();
        guards.sort();
        guards.dedup();
        let mut classes: Vec<(Vec<bool>, Vec<Letter>)> = Vec::new();
        for letter in self.alphabet.letters() {
            let sig: Vec<bool> = guards.iter().map(|g| g.matches(letter)).collect();
            match classes.iter_mut().find(|(s, _)| *s == sig) {
                Some((_, ls)) => ls.push(letter),
                None => classes.push((sig, vec![letter])),
            }
        }
        classes.into_iter().map(|(_, ls)| ls).collect()
    }

    /// States renumbered by breadth-first search from the initial states,
    /// visiting edges in guard order, and edges sorted. Two runs of the same
    /// construction produce identical canonical automata.
    pub fn canonical(&self) -> BuchiAutomaton {
        let mut order: Vec<StateId> = Vec::new();
        let mut map = vec![usize::MAX; self.num_states()];
        let mut queue = VecDeque::new();
        for &q in &self.initial {
            if map[q] == usize::MAX {
                map[q] = order.len();
                order.push(q);
                queue.push_back(q);
            }
        }
        while let Some(q) = queue.pop_front() {
            let mut edges = self.edges[q].clone();
            edges.sort();
            for e in edges {
                if map[e.target] == usize::MAX {
                    map[e.target] = order.len();
                    order.push(e.target);
                    queue.push_back(e.target);
                }
            }
        }
        let mut out = BuchiAutomaton::new(self.alphabet.clone());
        for &q in &order {
            out.add_state(self.accepting[q]);
        }
        for &q in &order {
            let mut edges: Vec<Edge> = self.edges[q]
                .iter()
                .map(|e| Edge {
                    guard: e.guard,
                    target: map[e.target],
                })
                .collect();
            edges.sort();
            edges.dedup();
            out.edges[map[q]] = edges;
        }
        for &q in &self.initial {
            out.add_initial(map[q]);
        }
        out
    }
}

/// Merges cubes pairwise until no two combine, then drops subsumed ones.
pub(crate) fn simplify_cubes(mut cubes: Vec<Cube>, n: usize) -> Vec<Cube> {
    cubes.sort();
    cubes.dedup();
    if cubes.len() <= 1 {
        return cubes;
    }
    if n <= 10 {
        let total: u64 = cubes.iter().map(|c| c.size(n)).sum();
        // cheap exact path: re-cover the union of letters
        if total <= 1024 {
            let mut letters: Vec<Letter> = cubes.iter().flat_map(|c| c.letters(n)).collect();
            letters.sort();
            letters.dedup();
            let cover = cover_letters(&letters, n);
            if cover.len() <= cubes.len() {
                return cover;
            }
        }
    }
    loop {
        let mut changed = false;
        'outer: for i in 0..cubes.len() {
            for j in (i + 1)..cubes.len() {
                if let Some(m) = cubes[i].merge(cubes[j]) {
                    cubes.swap_remove(j);
                    cubes[i] = m;
                    changed = true;
                    break 'outer;
                }
            }
        }
        if !changed {
            break;
        }
    }
    cubes.sort();
    cubes
}

/// Convenience used by tests and fixtures: builds an automaton from explicit
/// letter-labelled transitions.
pub fn from_letter_table(
    alphabet: AlphabetRef,
    states: usize,
    initial: &[StateId],
    accepting: &[StateId],
    transitions: &[(StateId, Letter, StateId)],
) -> BuchiAutomaton {
    let mut a = BuchiAutomaton::new(alphabet);
    for q in 0..states {
        a.add_state(accepting.contains(&q));
    }
    for &q in initial {
        a.add_initial(q);
    }
    let n = a.props();
    for &(s, l, t) in transitions {
        a.add_edge(s, Cube::letter(l, n), t);
    }
    a
}
