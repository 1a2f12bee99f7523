use std::collections::{HashMap, VecDeque};

use super::{BuchiAutomaton, StateId};
use crate::alphabet::{AlphabetRef, Cube};
use crate::error::Result;
use crate::formula::UPTrace;
use crate::kripke::KripkeStructure;

/// Both automata side by side; states of `b` are shifted by the returned offset.
pub(crate) fn disjoint_union(a: &BuchiAutomaton, b: &BuchiAutomaton) -> (BuchiAutomaton, usize) {
    let offset = a.num_states();
    let mut out = a.clone();
    for q in 0..b.num_states() {
        out.add_state(b.is_accepting(q));
    }
    for q in 0..b.num_states() {
        for e in b.edges(q) {
            out.add_edge(q + offset, e.guard, e.target + offset);
        }
    }
    for &q in b.initial() {
        out.add_initial(q + offset);
    }
    (out, offset)
}

/// `L(a) ∪ L(b)`: the disjoint union, trimmed.
pub fn union(a: &BuchiAutomaton, b: &BuchiAutomaton) -> Result<BuchiAutomaton> {
    a.same_alphabet(b)?;
    Ok(disjoint_union(a, b).0.trim())
}

/// Synchronous product. When neither side is all-accepting, a phase bit
/// alternates between waiting for `a` and waiting for `b` to recur.
pub(crate) fn product(a: &BuchiAutomaton, b: &BuchiAutomaton) -> BuchiAutomaton {
    #[derive(Clone, Copy)]
    enum Mode {
        LeftOnly,
        RightOnly,
        Phased,
    }
    let mode = if b.all_accepting() {
        Mode::LeftOnly
    } else if a.all_accepting() {
        Mode::RightOnly
    } else {
        Mode::Phased
    };
    let accepting = |(p, q, phase): (StateId, StateId, u8)| match mode {
        Mode::LeftOnly => a.is_accepting(p),
        Mode::RightOnly => b.is_accepting(q),
        Mode::Phased => phase == 0 && a.is_accepting(p),
    };
    let next_phase = |(p, q, phase): (StateId, StateId, u8)| match mode {
        Mode::Phased if phase == 0 && a.is_accepting(p) => 1,
        Mode::Phased if phase == 1 && b.is_accepting(q) => 0,
        _ => phase,
    };
    let mut out = BuchiAutomaton::new(a.alphabet().clone());
    let mut ids: HashMap<(StateId, StateId, u8), StateId> = HashMap::new();
    let mut queue = VecDeque::new();
    let mut intern = |key, out: &mut BuchiAutomaton, queue: &mut VecDeque<_>| {
        *ids.entry(key).or_insert_with(|| {
            queue.push_back(key);
            out.add_state(accepting(key))
        })
    };
    for &p in a.initial() {
        for &q in b.initial() {
            let id = intern((p, q, 0), &mut out, &mut queue);
            out.add_initial(id);
        }
    }
    while let Some(key) = queue.pop_front() {
        let src = intern(key, &mut out, &mut queue);
        let (p, q, _) = key;
        let phase = next_phase(key);
        for e1 in a.edges(p) {
            for e2 in b.edges(q) {
                if let Some(g) = e1.guard.and(e2.guard) {
                    let dst = intern((e1.target, e2.target, phase), &mut out, &mut queue);
                    out.add_edge(src, g, dst);
                }
            }
        }
    }
    out
}

/// `L(a) ∩ L(b)`.
pub fn intersect(a: &BuchiAutomaton, b: &BuchiAutomaton) -> Result<BuchiAutomaton> {
    a.same_alphabet(b)?;
    Ok(product(a, b).reduce())
}

/// The automaton accepting exactly the trace `pi`.
pub fn lasso_automaton(pi: &UPTrace, alphabet: AlphabetRef) -> BuchiAutomaton {
    let n = alphabet.len();
    let mut out = BuchiAutomaton::new(alphabet);
    let positions = pi.positions();
    for _ in 0..positions {
        out.add_state(true);
    }
    out.add_initial(0);
    for i in 0..positions {
        out.add_edge(i, Cube::letter(pi.letter_at_position(i), n), pi.successor(i));
    }
    out
}

/// Whether `a` accepts `pi`.
pub fn accepts_up(a: &BuchiAutomaton, pi: &UPTrace) -> bool {
    let lasso = lasso_automaton(pi, a.alphabet().clone());
    super::is_empty(&product(a, &lasso)).is_some()
}

/// The automaton whose language is the trace set of `m`: a fresh initial
/// state, one state per Kripke state, each edge labelled by its target's
/// valuation, every state recurrent.
pub fn from_kripke(m: &KripkeStructure) -> Result<BuchiAutomaton> {
    m.validate()?;
    let n = m.alphabet().len();
    let mut out = BuchiAutomaton::new(m.alphabet().clone());
    let init = out.add_state(true);
    out.add_initial(init);
    for _ in 0..m.num_states() {
        out.add_state(true);
    }
    for &s in m.initial() {
        out.add_edge(init, Cube::letter(m.label(s), n), s + 1);
    }
    for s in 0..m.num_states() {
        for &t in m.successors(s) {
            out.add_edge(s + 1, Cube::letter(m.label(t), n), t + 1);
        }
    }
    Ok(out.trim())
}
