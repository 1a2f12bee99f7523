use std::collections::VecDeque;

use super::{BuchiAutomaton, StateId};
use crate::alphabet::{Alphabet, Letter};
use crate::formula::UPTrace;

/// An accepted lasso `stem · cycle^ω` together with the run that accepts it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LassoWitness {
    pub stem: Vec<Letter>,
    pub cycle: Vec<Letter>,
    /// `stem.len() + 1` states: an initial state, then one per stem letter.
    /// The last one is where the cycle starts and ends.
    pub stem_states: Vec<StateId>,
    /// `cycle.len()` states following the cycle start; the last equals the
    /// cycle start. At least one of them is a recurrence state.
    pub cycle_states: Vec<StateId>,
}

impl LassoWitness {
    pub fn to_trace(&self) -> UPTrace {
        UPTrace::new(self.stem.clone(), self.cycle.clone()).expect("cycle is nonempty")
    }

    pub fn display(&self, alphabet: &Alphabet) -> String {
        self.to_trace().display(alphabet)
    }

    /// Replays the annotated run against `a`.
    pub fn is_valid_run(&self, a: &BuchiAutomaton) -> bool {
        let Some(&start) = self.stem_states.first() else {
            return false;
        };
        if !a.initial().contains(&start)
            || self.cycle.is_empty()
            || self.stem_states.len() != self.stem.len() + 1
            || self.cycle_states.len() != self.cycle.len()
        {
            return false;
        }
        let step = |from: StateId, l: Letter, to: StateId| a.successors(from, l).any(|t| t == to);
        for (i, &l) in self.stem.iter().enumerate() {
            if !step(self.stem_states[i], l, self.stem_states[i + 1]) {
                return false;
            }
        }
        let anchor = *self.stem_states.last().unwrap();
        let mut cur = anchor;
        for (i, &l) in self.cycle.iter().enumerate() {
            if !step(cur, l, self.cycle_states[i]) {
                return false;
            }
            cur = self.cycle_states[i];
        }
        cur == anchor && self.cycle_states.iter().any(|&q| a.is_accepting(q))
    }
}

/// Strongly connected components (iterative Tarjan). Returns the component
/// index of every state.
pub(crate) fn scc(a: &BuchiAutomaton) -> (Vec<usize>, usize) {
    let n = a.num_states();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![usize::MAX; n];
    let mut stack = Vec::new();
    let mut next_index = 0;
    let mut ncomp = 0;
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        let mut call: Vec<(StateId, usize)> = vec![(root, 0)];
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut ei)) = call.last_mut() {
            let edges = a.edges(v);
            if *ei < edges.len() {
                let w = edges[*ei].target;
                *ei += 1;
                if index[w] == usize::MAX {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(u, _)) = call.last() {
                    low[u] = low[u].min(low[v]);
                }
                if low[v] == index[v] {
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w] = false;
                        comp[w] = ncomp;
                        if w == v {
                            break;
                        }
                    }
                    ncomp += 1;
                }
            }
        }
    }
    (comp, ncomp)
}

/// States lying in a nontrivial SCC that contains a recurrence state.
pub(crate) fn accepting_cycle_states(a: &BuchiAutomaton) -> Vec<bool> {
    let (comp, ncomp) = scc(a);
    let mut size = vec![0usize; ncomp];
    let mut has_acc = vec![false; ncomp];
    let mut self_loop = vec![false; ncomp];
    for q in 0..a.num_states() {
        size[comp[q]] += 1;
        if a.is_accepting(q) {
            has_acc[comp[q]] = true;
        }
        if a.edges(q).iter().any(|e| e.target == q) {
            self_loop[comp[q]] = true;
        }
    }
    (0..a.num_states())
        .map(|q| {
            let c = comp[q];
            has_acc[c] && (size[c] > 1 || self_loop[c])
        })
        .collect()
}

/// States from which some accepting cycle is reachable.
pub(crate) fn live_states(a: &BuchiAutomaton) -> Vec<bool> {
    let n = a.num_states();
    let mut live = accepting_cycle_states(a);
    let mut preds: Vec<Vec<StateId>> = vec![Vec::new(); n];
    for q in 0..n {
        for e in a.edges(q) {
            preds[e.target].push(q);
        }
    }
    let mut queue: VecDeque<StateId> = (0..n).filter(|&q| live[q]).collect();
    while let Some(q) = queue.pop_front() {
        for &p in &preds[q] {
            if !live[p] {
                live[p] = true;
                queue.push_back(p);
            }
        }
    }
    live
}

/// Successor list of `q` as (smallest letter of the guard, target), sorted.
fn ordered_moves(a: &BuchiAutomaton, q: StateId) -> Vec<(Letter, StateId)> {
    let mut moves: Vec<(Letter, StateId)> = a.edges(q).iter().map(|e| (e.guard.min_letter(), e.target)).collect();
    moves.sort();
    moves.dedup();
    moves
}

/// Returns `None` iff `L(a) = ∅`; otherwise an accepted lasso with minimal
/// stem length, then minimal cycle length, then lexicographically smallest
/// letters (letters compared as bitmasks over the proposition order).
pub fn is_empty(a: &BuchiAutomaton) -> Option<LassoWitness> {
    let n = a.num_states();
    let good = accepting_cycle_states(a);
    if !good.iter().any(|&g| g) {
        return None;
    }
    // layered BFS from the initial states; queue order is (length, word)
    let mut parent: Vec<Option<(StateId, Letter)>> = vec![None; n];
    let mut dist = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    for &q in a.initial() {
        dist[q] = 0;
        queue.push_back(q);
    }
    let mut best_dist = usize::MAX;
    let mut candidates: Vec<StateId> = Vec::new();
    while let Some(q) = queue.pop_front() {
        if dist[q] > best_dist {
            break;
        }
        if good[q] {
            best_dist = dist[q];
            candidates.push(q);
            continue;
        }
        for (l, t) in ordered_moves(a, q) {
            if dist[t] == usize::MAX {
                dist[t] = dist[q] + 1;
                parent[t] = Some((q, l));
                queue.push_back(t);
            }
        }
    }
    // candidates are in (word) order; pick the shortest cycle, first wins ties
    let mut best: Option<(usize, StateId, Vec<(Letter, StateId)>)> = None;
    for &s in &candidates {
        if let Some(cycle) = shortest_accepting_cycle(a, s) {
            if best.as_ref().is_none_or(|(len, _, _)| cycle.len() < *len) {
                best = Some((cycle.len(), s, cycle));
            }
        }
    }
    let (_, anchor, cycle) = best?;
    let mut stem = Vec::new();
    let mut stem_states = vec![anchor];
    let mut cur = anchor;
    while let Some((p, l)) = parent[cur] {
        stem.push(l);
        stem_states.push(p);
        cur = p;
    }
    stem.reverse();
    stem_states.reverse();
    Some(LassoWitness {
        stem,
        cycle: cycle.iter().map(|(l, _)| *l).collect(),
        stem_states,
        cycle_states: cycle.iter().map(|(_, q)| *q).collect(),
    })
}

/// Shortest (then lexicographically least) nonempty path `s → … → s`
/// visiting a recurrence state.
fn shortest_accepting_cycle(a: &BuchiAutomaton, s: StateId) -> Option<Vec<(Letter, StateId)>> {
    let n = a.num_states();
    let node = |q: StateId, flag: bool| q * 2 + flag as usize;
    let start_flag = a.is_accepting(s);
    let mut parent: Vec<Option<(usize, Letter)>> = vec![None; 2 * n];
    let mut seen = vec![false; 2 * n];
    let mut queue = VecDeque::new();
    let start = node(s, start_flag);
    queue.push_back(start);
    seen[start] = true;
    let goal = node(s, true);
    let mut found = None;
    'bfs: while let Some(u) = queue.pop_front() {
        let (q, flag) = (u / 2, u % 2 == 1);
        for (l, t) in ordered_moves(a, q) {
            let v = node(t, flag || a.is_accepting(t));
            if v == goal {
                found = Some((u, l));
                break 'bfs;
            }
            if !seen[v] {
                seen[v] = true;
                parent[v] = Some((u, l));
                queue.push_back(v);
            }
        }
    }
    let (mut u, l) = found?;
    let mut path = vec![(l, s)];
    while u != start {
        let (p, l) = parent[u].expect("bfs tree");
        path.push((l, u / 2));
        u = p;
    }
    path.reverse();
    Some(path)
}
