//! Rank-based complementation with tight level rankings.
//!
//! A complement run first tracks the plain subset of reachable states, then
//! guesses a tight level ranking and keeps its maximal odd rank fixed from
//! there on. Even-ranked states owe a visit to an odd rank; the run recurs
//! whenever that obligation set empties.

use std::cell::Cell;
use std::collections::{HashMap, VecDeque};
use std::hash::Hash;

use super::ops::product;
use super::{BuchiAutomaton, StateId};
use crate::alphabet::{cover_letters, Alphabet, Cube, Letter};
use crate::error::{Error, Result};
use crate::limits::{CancelToken, Limits, MAX_COMPLEMENT_CAP};

const NO_RANK: u8 = u8::MAX;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) enum CState {
    Subset(u64),
    Ranked { s: u64, o: u64, f: Vec<u8> },
    Sink,
}

/// The complement of an automaton, explored on demand.
pub(crate) struct LazyComplement {
    n: usize,
    acc: u64,
    initial: u64,
    /// letter → class index
    class_of: Vec<u32>,
    /// `succ[c][q]`: successors of `q` on class `c`, as a mask
    succ: Vec<Vec<u64>>,
    cancel: Option<CancelToken>,
    /// search steps spent enumerating rankings
    ticks: Cell<u64>,
    work_limit: u64,
    /// rankings emitted by one `post` before enumeration stops
    budget: usize,
}

impl LazyComplement {
    /// Complement of `a`, which must have at most 64 states. Ranking
    /// enumeration stops early once `limits` is cancelled.
    pub(crate) fn new(a: &BuchiAutomaton, limits: &Limits) -> LazyComplement {
        let n = a.num_states();
        assert!(n <= MAX_COMPLEMENT_CAP);
        let classes = a.letter_classes();
        let mut class_of = vec![0u32; a.alphabet().letter_count()];
        for (c, letters) in classes.iter().enumerate() {
            for l in letters {
                class_of[l.0 as usize] = c as u32;
            }
        }
        let succ = classes
            .iter()
            .map(|ls| {
                (0..n)
                    .map(|q| a.successors(q, ls[0]).fold(0u64, |m, t| m | 1 << t))
                    .collect()
            })
            .collect();
        LazyComplement {
            n,
            acc: a.accepting_states().fold(0, |m, q| m | 1 << q),
            initial: a.initial().iter().fold(0, |m, &q| m | 1 << q),
            class_of,
            succ,
            cancel: limits.cancel.clone(),
            ticks: Cell::new(0),
            work_limit: limits.state_budget as u64 * 256,
            budget: limits.state_budget,
        }
    }

    /// Counts one search step; true once the work limit is spent or the
    /// limits are cancelled.
    fn should_stop(&self) -> bool {
        let t = self.ticks.get() + 1;
        self.ticks.set(t);
        t > self.work_limit || (t.is_multiple_of(4096) && self.cancel.as_ref().is_some_and(|c| c.is_cancelled()))
    }

    /// Whether ranking enumeration was cut short by the work limit, leaving
    /// any explored result incomplete.
    pub(crate) fn exhausted(&self) -> bool {
        self.ticks.get() > self.work_limit
    }

    pub(crate) fn initial(&self) -> CState {
        if self.initial == 0 {
            CState::Sink
        } else {
            CState::Subset(self.initial)
        }
    }

    pub(crate) fn is_accepting(&self, s: &CState) -> bool {
        match s {
            CState::Subset(_) => false,
            CState::Ranked { o, .. } => *o == 0,
            CState::Sink => true,
        }
    }

    fn image(&self, set: u64, c: usize) -> u64 {
        bits(set).fold(0, |m, q| m | self.succ[c][q])
    }

    pub(crate) fn post(&self, s: &CState, letter: Letter) -> Vec<CState> {
        let c = self.class_of[letter.0 as usize] as usize;
        match s {
            CState::Sink => vec![CState::Sink],
            CState::Subset(set) => {
                let next = self.image(*set, c);
                if next == 0 {
                    return vec![CState::Sink];
                }
                let mut out = vec![CState::Subset(next)];
                let free = (next & !self.acc).count_ones() as u8;
                for r in (1..=2 * free).step_by(2) {
                    let bound = vec![r; self.n];
                    self.tight_rankings(next, &bound, r, &mut |f| {
                        out.push(self.ranked(next, 0, f, true));
                        out.len() <= self.budget
                    });
                }
                out
            }
            CState::Ranked { s: set, o, f } => {
                let next = self.image(*set, c);
                if next == 0 {
                    return vec![CState::Sink];
                }
                let r = *f
                    .iter()
                    .filter(|&&x| x != NO_RANK)
                    .max()
                    .expect("ranked state is nonempty");
                let mut bound = vec![NO_RANK; self.n];
                for q in bits(*set) {
                    for t in bits(self.succ[c][q]) {
                        bound[t] = bound[t].min(f[q]);
                    }
                }
                let obliged = if *o == 0 { next } else { self.image(*o, c) };
                let mut out = Vec::new();
                self.tight_rankings(next, &bound, r, &mut |g| {
                    out.push(self.ranked(next, obliged, g, false));
                    out.len() <= self.budget
                });
                out
            }
        }
    }

    fn ranked(&self, s: u64, obliged: u64, f: &[u8], fresh: bool) -> CState {
        let even = bits(s)
            .filter(|&q| f[q].is_multiple_of(2))
            .fold(0u64, |m, q| m | 1 << q);
        CState::Ranked {
            s,
            o: if fresh { 0 } else { obliged & even },
            f: f.to_vec(),
        }
    }

    /// Calls `emit` with every ranking of `set` below `bound` that assigns
    /// even ranks to accepting states, has maximum exactly `r`, and uses every
    /// odd rank up to `r`. Stops once `emit` returns false.
    fn tight_rankings(&self, set: u64, bound: &[u8], r: u8, emit: &mut dyn FnMut(&[u8]) -> bool) {
        let states: Vec<usize> = bits(set).collect();
        let mut f = vec![NO_RANK; self.n];
        let odd_count = (r as usize).div_ceil(2);
        let mut used = vec![0u32; odd_count];
        self.rank_rec(&states, 0, bound, r, &mut f, &mut used, emit);
    }

    /// Returns false when enumeration should stop.
    #[allow(clippy::too_many_arguments)]
    fn rank_rec(
        &self,
        states: &[usize],
        i: usize,
        bound: &[u8],
        r: u8,
        f: &mut Vec<u8>,
        used: &mut Vec<u32>,
        emit: &mut dyn FnMut(&[u8]) -> bool,
    ) -> bool {
        let missing = used.iter().filter(|&&u| u == 0).count();
        if self.should_stop() {
            return false;
        }
        if states.len() - i < missing {
            return true;
        }
        if i == states.len() {
            return emit(f);
        }
        let q = states[i];
        let top = bound[q].min(r);
        let accepting = self.acc & (1 << q) != 0;
        for k in 0..=top {
            if accepting && k % 2 == 1 {
                continue;
            }
            f[q] = k;
            if k % 2 == 1 {
                used[(k / 2) as usize] += 1;
            }
            let go_on = self.rank_rec(states, i + 1, bound, r, f, used, emit);
            if k % 2 == 1 {
                used[(k / 2) as usize] -= 1;
            }
            if !go_on {
                f[q] = NO_RANK;
                return false;
            }
        }
        f[q] = NO_RANK;
        true
    }
}

pub(crate) fn bits(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        }
    })
}

/// A letter partition with one representative letter and a cube cover per class.
pub(crate) struct Classes {
    pub(crate) reps: Vec<Letter>,
    pub(crate) cubes: Vec<Vec<Cube>>,
}

impl Classes {
    /// Letters are equivalent when every cube in `guards` agrees on them.
    pub(crate) fn of_guards(guards: &[Cube], alphabet: &Alphabet) -> Classes {
        let n = alphabet.len();
        let mut guards = guards.to_vec();
        guards.sort();
        guards.dedup();
        let mut index: HashMap<Vec<bool>, usize> = HashMap::new();
        let mut members: Vec<Vec<Letter>> = Vec::new();
        for letter in alphabet.letters() {
            let sig: Vec<bool> = guards.iter().map(|g| g.matches(letter)).collect();
            let c = *index.entry(sig).or_insert_with(|| {
                members.push(Vec::new());
                members.len() - 1
            });
            members[c].push(letter);
        }
        Classes {
            reps: members.iter().map(|m| m[0]).collect(),
            cubes: members.iter().map(|m| class_cover(m, n)).collect(),
        }
    }
}

/// Cube cover of a letter set: exact minimization for small alphabets,
/// Shannon splitting otherwise.
fn class_cover(letters: &[Letter], n: usize) -> Vec<Cube> {
    if n <= 8 {
        return cover_letters(letters, n);
    }
    let mut member = vec![false; 1 << n];
    for l in letters {
        member[l.0 as usize] = true;
    }
    let mut out = Vec::new();
    let mut stack = vec![(Cube::TOP, 0usize)];
    while let Some((cube, var)) = stack.pop() {
        let mut all = true;
        let mut any = false;
        for l in cube.letters(n) {
            if member[l.0 as usize] {
                any = true;
            } else {
                all = false;
            }
            if any && !all {
                break;
            }
        }
        if all {
            out.push(cube);
        } else if any {
            stack.push((cube.and(Cube::literal(var, false)).unwrap(), var + 1));
            stack.push((cube.and(Cube::literal(var, true)).unwrap(), var + 1));
        }
    }
    super::simplify_cubes(out, n)
}

/// Breadth-first exploration of an implicitly given automaton into an
/// explicit one, polling for cancellation.
pub(crate) fn explore<S, P, A>(
    alphabet: &crate::alphabet::AlphabetRef,
    initial: Vec<S>,
    classes: &Classes,
    mut post: P,
    accepting: A,
    limits: &Limits,
) -> Result<BuchiAutomaton>
where
    S: Clone + Eq + Hash,
    P: FnMut(&S, Letter) -> Vec<S>,
    A: Fn(&S) -> bool,
{
    let mut out = BuchiAutomaton::new(alphabet.clone());
    let mut ids: HashMap<S, StateId> = HashMap::new();
    let mut queue: VecDeque<(S, StateId)> = VecDeque::new();
    for s in initial {
        let id = match ids.get(&s) {
            Some(&d) => d,
            None => {
                let d = out.add_state(accepting(&s));
                ids.insert(s.clone(), d);
                queue.push_back((s, d));
                d
            }
        };
        out.add_initial(id);
    }
    let mut steps = 0usize;
    while let Some((s, src)) = queue.pop_front() {
        steps += 1;
        if steps.is_multiple_of(64) {
            limits.check_cancelled()?;
        }
        for (c, &rep) in classes.reps.iter().enumerate() {
            let next = post(&s, rep);
            limits.check_cancelled()?;
            limits.check_budget(next.len())?;
            let mut dsts: Vec<StateId> = Vec::with_capacity(next.len());
            for t in next {
                let dst = match ids.get(&t) {
                    Some(&d) => d,
                    None => {
                        let d = out.add_state(accepting(&t));
                        ids.insert(t.clone(), d);
                        queue.push_back((t, d));
                        d
                    }
                };
                dsts.push(dst);
            }
            limits.check_budget(ids.len())?;
            dsts.sort_unstable();
            dsts.dedup();
            // classes partition the letters, so these edges are all new
            for dst in dsts {
                for &g in &classes.cubes[c] {
                    out.push_edge(src, g, dst);
                }
            }
        }
    }
    limits.check_cancelled()?;
    Ok(out)
}

/// Reduces `a` and checks it against the cap.
pub(crate) fn prepare(a: &BuchiAutomaton, limits: &Limits) -> Result<BuchiAutomaton> {
    let r = a.reduce();
    let cap = limits.complement_cap.min(MAX_COMPLEMENT_CAP);
    if r.num_states() > cap {
        return Err(Error::CapacityExceeded {
            states: r.num_states(),
            cap,
        });
    }
    Ok(r)
}

/// Whether every state has the same successors on every letter.
pub(crate) fn is_letter_blind(a: &BuchiAutomaton) -> bool {
    let classes = a.letter_classes();
    (0..a.num_states()).all(|q| {
        let targets = |l: Letter| {
            let mut t: Vec<StateId> = a.successors(q, l).collect();
            t.sort_unstable();
            t.dedup();
            t
        };
        let first = targets(classes[0][0]);
        classes[1..].iter().all(|c| targets(c[0]) == first)
    })
}

/// Whether every state has pairwise disjoint guards and there is at most
/// one initial state.
pub(crate) fn is_deterministic(a: &BuchiAutomaton) -> bool {
    a.initial().len() <= 1
        && (0..a.num_states()).all(|q| {
            let es = a.edges(q);
            es.iter()
                .enumerate()
                .all(|(i, e)| es[i + 1..].iter().all(|e2| !e.guard.intersects(e2.guard)))
        })
}

/// Complement of a deterministic automaton: follow the run, and guess the
/// point after which it never recurs again (or dies).
fn complement_deterministic(d: &BuchiAutomaton) -> BuchiAutomaton {
    let n = d.num_states();
    let mut out = BuchiAutomaton::new(d.alphabet().clone());
    // 0..n follows the run, n..2n waits out non-recurrence, 2n is the dead run
    for _ in 0..n {
        out.add_state(false);
    }
    for q in 0..n {
        out.add_state(!d.is_accepting(q));
    }
    let dead = out.add_state(true);
    out.add_edge(dead, Cube::TOP, dead);
    out.add_initial(d.initial().first().copied().unwrap_or(dead));
    let wait = |q: StateId| n + q;
    for q in 0..n {
        for e in d.edges(q) {
            out.add_edge(q, e.guard, e.target);
            if !d.is_accepting(e.target) {
                out.add_edge(q, e.guard, wait(e.target));
                if !d.is_accepting(q) {
                    out.add_edge(wait(q), e.guard, wait(e.target));
                }
            }
        }
        let missing: Vec<Letter> = d
            .alphabet()
            .letters()
            .filter(|&l| d.successors(q, l).next().is_none())
            .collect();
        for g in cover_letters_any(&missing, d.props()) {
            out.add_edge(q, g, dead);
            if !d.is_accepting(q) {
                out.add_edge(wait(q), g, dead);
            }
        }
    }
    out
}

fn cover_letters_any(letters: &[Letter], n: usize) -> Vec<Cube> {
    if letters.is_empty() {
        Vec::new()
    } else {
        class_cover(letters, n)
    }
}

/// The weakly connected components of `a` as separate automata, in order
/// of their smallest state.
fn components(a: &BuchiAutomaton) -> Vec<BuchiAutomaton> {
    let n = a.num_states();
    let mut comp = vec![usize::MAX; n];
    let mut undirected: Vec<Vec<StateId>> = vec![Vec::new(); n];
    for q in 0..n {
        for e in a.edges(q) {
            undirected[q].push(e.target);
            undirected[e.target].push(q);
        }
    }
    let mut count = 0;
    for start in 0..n {
        if comp[start] != usize::MAX {
            continue;
        }
        comp[start] = count;
        let mut stack = vec![start];
        while let Some(q) = stack.pop() {
            for &t in &undirected[q] {
                if comp[t] == usize::MAX {
                    comp[t] = count;
                    stack.push(t);
                }
            }
        }
        count += 1;
    }
    if count <= 1 {
        return vec![a.clone()];
    }
    (0..count)
        .map(|c| {
            let members: Vec<StateId> = (0..n).filter(|&q| comp[q] == c).collect();
            let mut local = vec![usize::MAX; n];
            let mut out = BuchiAutomaton::new(a.alphabet().clone());
            for &q in &members {
                local[q] = out.add_state(a.is_accepting(q));
            }
            for &q in &members {
                for e in a.edges(q) {
                    out.add_edge(local[q], e.guard, local[e.target]);
                }
            }
            for &q in a.initial() {
                if comp[q] == c {
                    out.add_initial(local[q]);
                }
            }
            out
        })
        .collect()
}

/// `Σ^ω ∖ L(a)`. Fails when the reduced input has more states than the cap.
pub fn complement(a: &BuchiAutomaton, limits: &Limits) -> Result<BuchiAutomaton> {
    let r = prepare(a, limits)?;
    if r.num_states() > 0 && is_letter_blind(&r) {
        // every word follows every path, so a trimmed one accepts everything
        return Ok(BuchiAutomaton::new(r.alphabet().clone()));
    }
    if is_deterministic(&r) {
        return Ok(complement_deterministic(&r).reduce());
    }
    let parts = components(&r);
    if parts.len() > 1 {
        // the language is the union of the parts' languages
        let mut out = BuchiAutomaton::universal(r.alphabet().clone());
        for part in &parts {
            out = product(&out, &complement(part, limits)?).reduce();
            limits.check_budget(out.num_states())?;
            limits.check_cancelled()?;
        }
        return Ok(out);
    }
    let lazy = LazyComplement::new(&r, limits);
    let guards: Vec<Cube> = (0..r.num_states())
        .flat_map(|q| r.edges(q).iter().map(|e| e.guard))
        .collect();
    let classes = Classes::of_guards(&guards, r.alphabet());
    let out = explore(
        r.alphabet(),
        vec![lazy.initial()],
        &classes,
        |s, l| lazy.post(s, l),
        |s| lazy.is_accepting(s),
        limits,
    );
    if lazy.exhausted() {
        return Err(Error::StateBudgetExceeded {
            budget: limits.state_budget,
        });
    }
    Ok(out?.reduce())
}
