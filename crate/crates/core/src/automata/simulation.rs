//! Direct simulation: `q ≤ r` iff `r` can match every move of `q` forever,
//! being accepting whenever `q` is. Delayed simulation relaxes the last
//! condition to "accepting at the same time or later".

use super::{BuchiAutomaton, StateId};
use crate::alphabet::Letter;

/// Above this size [`reduce`] returns its input unchanged.
const REDUCE_LIMIT: usize = 2000;

/// Above this size [`reduce`] skips the delayed-simulation quotient, whose
/// game has `O(n²)` positions.
const DELAYED_LIMIT: usize = 300;

/// Letter-class successor lists: `succ[c][q]` are the targets of `q` on any
/// letter of class `c`.
fn successor_table(a: &BuchiAutomaton) -> Vec<Vec<Vec<StateId>>> {
    let reps: Vec<Letter> = a.letter_classes().iter().map(|c| c[0]).collect();
    reps.iter()
        .map(|&l| {
            (0..a.num_states())
                .map(|q| {
                    let mut t: Vec<StateId> = a.successors(q, l).collect();
                    t.sort_unstable();
                    t.dedup();
                    t
                })
                .collect()
        })
        .collect()
}

struct BitMatrix {
    words: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    fn new(rows: usize, cols: usize) -> BitMatrix {
        let words = cols.div_ceil(64);
        BitMatrix {
            words,
            bits: vec![0; rows * words],
        }
    }

    fn row(&self, r: usize) -> &[u64] {
        &self.bits[r * self.words..(r + 1) * self.words]
    }

    fn get(&self, r: usize, c: usize) -> bool {
        self.bits[r * self.words + c / 64] & (1 << (c % 64)) != 0
    }

    fn set(&mut self, r: usize, c: usize) {
        self.bits[r * self.words + c / 64] |= 1 << (c % 64);
    }

    fn clear(&mut self, r: usize, c: usize) {
        self.bits[r * self.words + c / 64] &= !(1 << (c % 64));
    }
}

/// The direct-simulation preorder as a matrix: `sim[q][r]` iff `r` simulates `q`.
pub fn direct_simulation(a: &BuchiAutomaton) -> Vec<Vec<bool>> {
    let n = a.num_states();
    let sim = simulation_matrix(a);
    (0..n).map(|q| (0..n).map(|r| sim.get(q, r)).collect()).collect()
}

/// Greatest fixpoint by counting refinement: `count[c][q2][r]` is the number
/// of `c`-successors of `r` that still simulate `q2`. When it reaches zero,
/// no `c`-predecessor of `q2` is simulated by `r` any more.
fn simulation_matrix(a: &BuchiAutomaton) -> BitMatrix {
    let n = a.num_states();
    let succ = successor_table(a);
    let classes = succ.len();
    let mut pred: Vec<Vec<Vec<StateId>>> = vec![vec![Vec::new(); n]; classes];
    let mut succ_bits: Vec<BitMatrix> = Vec::with_capacity(classes);
    for (c, table) in succ.iter().enumerate() {
        let mut m = BitMatrix::new(n, n);
        for (q, ts) in table.iter().enumerate() {
            for &t in ts {
                m.set(q, t);
                pred[c][t].push(q);
            }
        }
        succ_bits.push(m);
    }
    let mut sim = BitMatrix::new(n, n);
    for q in 0..n {
        for r in 0..n {
            if !a.is_accepting(q) || a.is_accepting(r) {
                sim.set(q, r);
            }
        }
    }
    let idx = |c: usize, q2: usize, r: usize| (c * n + q2) * n + r;
    let mut count = vec![0u16; classes * n * n];
    for c in 0..classes {
        for q2 in 0..n {
            let row = sim.row(q2);
            for r in 0..n {
                let k: u32 = row
                    .iter()
                    .zip(succ_bits[c].row(r))
                    .map(|(x, y)| (x & y).count_ones())
                    .sum();
                count[idx(c, q2, r)] = k as u16;
            }
        }
    }
    let mut dropped: Vec<(usize, usize)> = Vec::new();
    for q in 0..n {
        for r in 0..n {
            let unanswered = (0..classes).any(|c| succ[c][q].iter().any(|&q2| count[idx(c, q2, r)] == 0));
            if q != r && sim.get(q, r) && unanswered {
                sim.clear(q, r);
                dropped.push((q, r));
            }
        }
    }
    while let Some((q2, r2)) = dropped.pop() {
        for c in 0..classes {
            for &r in &pred[c][r2] {
                let k = &mut count[idx(c, q2, r)];
                *k -= 1;
                if *k > 0 {
                    continue;
                }
                for &q in &pred[c][q2] {
                    if q != r && sim.get(q, r) {
                        sim.clear(q, r);
                        dropped.push((q, r));
                    }
                }
            }
        }
    }
    sim
}

/// Sound, incomplete inclusion test: every initial state of `a` is simulated
/// by some initial state of `b`.
pub fn simulation_included(a: &BuchiAutomaton, b: &BuchiAutomaton) -> bool {
    if a.initial().is_empty() {
        return true;
    }
    if a.num_states() + b.num_states() > REDUCE_LIMIT {
        return false;
    }
    let (u, offset) = super::ops::disjoint_union(a, b);
    let sim = simulation_matrix(&u);
    a.initial()
        .iter()
        .all(|&i| b.initial().iter().any(|&j| sim.get(i, j + offset)))
}

/// Delayed simulation as a Büchi game. Spoiler positions are `(p, q, b)`
/// where `b` records an accepting visit of `p` not yet answered by an
/// accepting visit of `q`; Duplicator wins iff `b` is clear infinitely often.
fn delayed_simulation_matrix(a: &BuchiAutomaton) -> BitMatrix {
    let n = a.num_states();
    let succ = successor_table(a);
    let classes = succ.len();
    let acc: Vec<bool> = (0..n).map(|q| a.is_accepting(q)).collect();
    let spoiler = |p: usize, q: usize, b: usize| (p * n + q) * 2 + b;
    let base = 2 * n * n;
    let dup = |c: usize, p: usize, q: usize, b: usize| base + ((c * n + p) * n + q) * 2 + b;
    let total = base + 2 * classes * n * n;
    let mut moves: Vec<Vec<u32>> = vec![Vec::new(); total];
    for p in 0..n {
        for q in 0..n {
            for b in 0..2 {
                for c in 0..classes {
                    for &p2 in &succ[c][p] {
                        moves[spoiler(p, q, b)].push(dup(c, p2, q, b) as u32);
                        let d = dup(c, p2, q, b);
                        if moves[d].is_empty() {
                            for &q2 in &succ[c][q] {
                                let b2 = if acc[q2] {
                                    0
                                } else if acc[p2] {
                                    1
                                } else {
                                    b
                                };
                                moves[d].push(spoiler(p2, q2, b2) as u32);
                            }
                        }
                    }
                }
            }
        }
    }
    let mut pred: Vec<Vec<u32>> = vec![Vec::new(); total];
    for (v, ws) in moves.iter().enumerate() {
        for &w in ws {
            pred[w as usize].push(v as u32);
        }
    }
    let duplicator_owns = |v: usize| v >= base;
    let target = |v: usize| v < base && v.is_multiple_of(2);
    let mut alive = vec![true; total];
    loop {
        let reach = attractor(&moves, &pred, &alive, true, duplicator_owns, target);
        let trap: Vec<bool> = (0..total).map(|v| alive[v] && !reach[v]).collect();
        if !trap.iter().any(|&t| t) {
            break;
        }
        let lost = attractor(&moves, &pred, &alive, false, duplicator_owns, |v| trap[v]);
        for v in 0..total {
            if lost[v] {
                alive[v] = false;
            }
        }
    }
    let mut sim = BitMatrix::new(n, n);
    for p in 0..n {
        for q in 0..n {
            let b = usize::from(acc[p] && !acc[q]);
            if alive[spoiler(p, q, b)] {
                sim.set(p, q);
            }
        }
    }
    sim
}

/// Positions among `alive` from which `player` (true = Duplicator) can force
/// a visit to `goal` without leaving `alive`.
fn attractor(
    moves: &[Vec<u32>],
    pred: &[Vec<u32>],
    alive: &[bool],
    player: bool,
    owns: impl Fn(usize) -> bool,
    goal: impl Fn(usize) -> bool,
) -> Vec<bool> {
    let total = moves.len();
    let mut inside = vec![false; total];
    let mut remaining: Vec<u32> = moves
        .iter()
        .map(|ws| ws.iter().filter(|&&w| alive[w as usize]).count() as u32)
        .collect();
    let mut stack: Vec<usize> = Vec::new();
    for v in 0..total {
        // a stuck opponent loses
        if alive[v] && (goal(v) || (owns(v) != player && remaining[v] == 0)) {
            inside[v] = true;
            stack.push(v);
        }
    }
    while let Some(w) = stack.pop() {
        for &v in &pred[w] {
            let v = v as usize;
            if !alive[v] || inside[v] {
                continue;
            }
            if owns(v) == player {
                inside[v] = true;
                stack.push(v);
            } else {
                remaining[v] -= 1;
                if remaining[v] == 0 {
                    inside[v] = true;
                    stack.push(v);
                }
            }
        }
    }
    inside
}

/// Mutual-simulation classes: `class[q]` and one representative per class.
fn equivalence_classes(n: usize, sim: &BitMatrix) -> (Vec<usize>, Vec<StateId>) {
    let mut class = vec![usize::MAX; n];
    let mut reps: Vec<StateId> = Vec::new();
    for q in 0..n {
        if class[q] != usize::MAX {
            continue;
        }
        class[q] = reps.len();
        for r in (q + 1)..n {
            if class[r] == usize::MAX && sim.get(q, r) && sim.get(r, q) {
                class[r] = reps.len();
            }
        }
        reps.push(q);
    }
    (class, reps)
}

/// Quotient by delayed-simulation equivalence; a class accepts if any
/// member does. Unlike the direct relation, delayed simulation only
/// supports merging, not pruning edges into simulated siblings.
fn delayed_quotient(a: &BuchiAutomaton) -> BuchiAutomaton {
    let n = a.num_states();
    let sim = delayed_simulation_matrix(a);
    let (class, reps) = equivalence_classes(n, &sim);
    if reps.len() == n {
        return a.clone();
    }
    let mut out = BuchiAutomaton::new(a.alphabet().clone());
    for _ in &reps {
        out.add_state(false);
    }
    for q in 0..n {
        if a.is_accepting(q) {
            out.set_accepting(class[q], true);
        }
        for e in a.edges(q) {
            out.add_edge(class[q], e.guard, class[e.target]);
        }
    }
    for &i in a.initial() {
        out.add_initial(class[i]);
    }
    out.trim()
}

/// Quotients `a` by simulation equivalence, removes edges and initial
/// states that are strictly simulated by a sibling, and then merges
/// delayed-simulation-equivalent states. Expects a trimmed input.
pub(crate) fn reduce(a: &BuchiAutomaton) -> BuchiAutomaton {
    let r = direct_reduce(a);
    let n = r.num_states();
    if n <= 1 || n > DELAYED_LIMIT {
        return r;
    }
    let q = delayed_quotient(&r);
    if q.num_states() < n {
        direct_reduce(&q)
    } else {
        r
    }
}

fn direct_reduce(a: &BuchiAutomaton) -> BuchiAutomaton {
    let n = a.num_states();
    if n <= 1 || n > REDUCE_LIMIT {
        return a.clone();
    }
    let sim = simulation_matrix(a);
    let (class, reps) = equivalence_classes(n, &sim);
    let strictly_below = |c1: usize, c2: usize| {
        let (x, y) = (reps[c1], reps[c2]);
        sim.get(x, y) && !sim.get(y, x)
    };
    let mut out = BuchiAutomaton::new(a.alphabet().clone());
    for &r in &reps {
        out.add_state(a.is_accepting(r));
    }
    for q in 0..n {
        for e in a.edges(q) {
            out.add_edge(class[q], e.guard, class[e.target]);
        }
    }
    let inits: Vec<usize> = a.initial().iter().map(|&q| class[q]).collect();
    for &i in &inits {
        if !inits.iter().any(|&j| strictly_below(i, j)) {
            out.add_initial(i);
        }
    }
    for s in 0..out.num_states() {
        let edges = out.edges[s].clone();
        out.edges[s] = edges
            .iter()
            .enumerate()
            .filter(|&(i, e1)| {
                !edges.iter().enumerate().any(|(j, e2)| {
                    i != j
                        && e1.guard.implies(e2.guard)
                        && (strictly_below(e1.target, e2.target)
                            || (e1.target == e2.target && (e1.guard != e2.guard || j < i)))
                })
            })
            .map(|(_, e)| *e)
            .collect();
    }
    out.trim()
}
