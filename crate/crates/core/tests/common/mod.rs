//! Fixtures and generators shared by the integration tests.

#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::Arc;

use omega_agm::automata::{from_letter_table, BuchiAutomaton};
use omega_agm::kripke::KripkeStructure;
use omega_agm::preference::BuchiMealyAutomaton;
use omega_agm::{parse_ltl, Alphabet, AlphabetRef, Cube, Formula, Letter, UPTrace};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::Rng;

pub fn ap_p() -> AlphabetRef {
    Alphabet::shared(["p"]).unwrap()
}

pub fn ap_pq() -> AlphabetRef {
    Alphabet::shared(["p", "q"]).unwrap()
}

pub fn ltl(text: &str, ab: &AlphabetRef) -> Formula {
    parse_ltl(text, ab).unwrap_or_else(|e| panic!("{text}: {e}"))
}

pub fn trace(text: &str, ab: &AlphabetRef) -> UPTrace {
    UPTrace::parse(text, ab).unwrap_or_else(|e| panic!("{text}: {e}"))
}

const E: Letter = Letter(0);
const P: Letter = Letter(1);

/// A_K: q0 guesses when to start, then `p` must hold at every other step.
pub fn every_other_p() -> BuchiAutomaton {
    from_letter_table(
        ap_p(),
        3,
        &[0],
        &[1, 2],
        &[
            (0, E, 0),
            (0, P, 0),
            (0, E, 1),
            (0, P, 1),
            (1, P, 2),
            (2, E, 1),
            (2, P, 1),
        ],
    )
}

/// The chosen countermodels of `G F p`: `p` now, eventually never again.
pub fn p_then_eventually_never() -> BuchiAutomaton {
    from_letter_table(
        ap_p(),
        3,
        &[0],
        &[2],
        &[(0, P, 1), (1, E, 1), (1, P, 1), (1, E, 2), (2, E, 2)],
    )
}

/// A_K side by side with the chosen countermodels.
pub fn every_other_p_or_chosen() -> BuchiAutomaton {
    from_letter_table(
        ap_p(),
        6,
        &[0, 3],
        &[1, 2, 5],
        &[
            (0, E, 0),
            (0, P, 0),
            (0, E, 1),
            (0, P, 1),
            (1, P, 2),
            (2, E, 1),
            (2, P, 1),
            (3, P, 4),
            (4, E, 4),
            (4, P, 4),
            (4, E, 5),
            (5, E, 5),
        ],
    )
}

/// Pairs `(x, y)` over AP={p} as letters of the doubled alphabet.
fn pair(x: Letter, y: Letter) -> Letter {
    Letter(x.0 | (y.0 << 1))
}

/// B: wait while neither trace has seen `p`, accept once `y` sees it first.
pub fn earliest_p_pref() -> BuchiMealyAutomaton {
    let ab = ap_p();
    let doubled = Arc::new(ab.doubled().unwrap());
    let all: Vec<Letter> = doubled.letters().collect();
    let mut table = vec![(0, pair(E, E), 0), (0, pair(E, P), 1)];
    table.extend(all.iter().map(|&l| (1, l, 1)));
    BuchiMealyAutomaton::new(ab, from_letter_table(doubled, 2, &[0], &[1], &table)).unwrap()
}

/// B′: eventually the second trace is `∅` forever.
pub fn eventually_no_p_pref() -> BuchiMealyAutomaton {
    let ab = ap_p();
    let doubled = Arc::new(ab.doubled().unwrap());
    let mut table = Vec::new();
    for x in [E, P] {
        for y in [E, P] {
            table.push((0, pair(x, y), 0));
        }
        table.push((0, pair(x, E), 1));
        table.push((1, pair(x, E), 1));
    }
    BuchiMealyAutomaton::new(ab, from_letter_table(doubled, 2, &[0], &[1], &table)).unwrap()
}

pub const ALTERNATING_KRIPKE: &str = "\
# l0 initial, alternating with l1 or l2
state l0 init {p}
state l1 {}
state l2 {p}
edge l0 l1
edge l1 l0
edge l0 l2
edge l2 l0
";

pub fn alternating_kripke() -> KripkeStructure {
    KripkeStructure::parse(ALTERNATING_KRIPKE, ap_p()).unwrap()
}

/// A random formula of nesting depth at most `depth`.
pub fn random_formula(rng: &mut StdRng, depth: usize, atoms: &[&str]) -> Formula {
    if depth == 0 || rng.gen_bool(0.2) {
        return match rng.gen_range(0..atoms.len() + 2) {
            0 if rng.gen_bool(0.3) => Formula::Top,
            1 if rng.gen_bool(0.3) => Formula::Bottom,
            _ => Formula::atom(atoms[rng.gen_range(0..atoms.len())]),
        };
    }
    let sub = |rng: &mut StdRng| random_formula(rng, depth - 1, atoms);
    match rng.gen_range(0..9) {
        0 => Formula::not(sub(rng)),
        1 => Formula::and(sub(rng), sub(rng)),
        2 => Formula::or(sub(rng), sub(rng)),
        3 => Formula::implies(sub(rng), sub(rng)),
        4 => Formula::next(sub(rng)),
        5 => Formula::until(sub(rng), sub(rng)),
        6 => Formula::finally(sub(rng)),
        7 => Formula::globally(sub(rng)),
        _ => Formula::not(sub(rng)),
    }
}

/// `count` pairwise distinct random formulae of depth at most `depth`.
pub fn formula_corpus(rng: &mut StdRng, count: usize, depth: usize, atoms: &[&str]) -> Vec<Formula> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    while out.len() < count {
        let f = random_formula(rng, depth, atoms);
        assert!(f.depth() <= depth);
        if seen.insert(f.clone()) {
            out.push(f);
        }
    }
    out
}

/// A random automaton with `n` states, letter-labelled edges and state 0
/// initial.
pub fn random_automaton(rng: &mut StdRng, ab: &AlphabetRef, n: usize) -> BuchiAutomaton {
    let mut a = BuchiAutomaton::new(ab.clone());
    for _ in 0..n {
        a.add_state(rng.gen_bool(0.4));
    }
    a.add_initial(0);
    let density = (1.5 / n as f64).min(0.9);
    for q in 0..n {
        for l in ab.letters() {
            for t in 0..n {
                if rng.gen_bool(density) {
                    a.add_edge(q, Cube::letter(l, ab.len()), t);
                }
            }
        }
    }
    a
}

/// Formulae over `atoms` up to the given depth, for property tests.
pub fn arb_formula(depth: u32, atoms: &'static [&'static str]) -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        Just(Formula::Top),
        Just(Formula::Bottom),
        proptest::sample::select(atoms).prop_map(Formula::atom),
    ];
    leaf.prop_recursive(depth, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            inner.clone().prop_map(Formula::next),
            inner.clone().prop_map(Formula::finally),
            inner.clone().prop_map(Formula::globally),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::until(a, b)),
        ]
    })
}

/// Ultimately periodic traces with short prefix and period.
pub fn arb_trace(props: usize, max_prefix: usize, max_period: usize) -> impl Strategy<Value = UPTrace> {
    let letter = (0u32..1 << props).prop_map(Letter);
    (
        proptest::collection::vec(letter.clone(), 0..=max_prefix),
        proptest::collection::vec(letter, 1..=max_period),
    )
        .prop_map(|(pre, per)| UPTrace::new(pre, per).unwrap())
}

/// Lasso membership computed by brute force, independent of the library's
/// product and emptiness code: explore `(state, position)` pairs of the
/// lasso and look for a reachable cycle through an accepting state.
pub fn oracle_accepts(a: &BuchiAutomaton, pi: &UPTrace) -> bool {
    let positions = pi.prefix().len() + pi.period().len();
    let next_pos = |i: usize| {
        if i + 1 < positions {
            i + 1
        } else {
            pi.prefix().len()
        }
    };
    let letter = |i: usize| pi.letter(i);
    let nodes = a.num_states() * positions;
    let id = |q: usize, i: usize| q * positions + i;
    let mut succ = vec![Vec::new(); nodes];
    for q in 0..a.num_states() {
        for i in 0..positions {
            for e in a.edges(q) {
                if e.guard.matches(letter(i)) {
                    succ[id(q, i)].push(id(e.target, next_pos(i)));
                }
            }
        }
    }
    let reach = |from: &[usize]| {
        let mut seen = vec![false; nodes];
        let mut stack: Vec<usize> = from.to_vec();
        while let Some(v) = stack.pop() {
            for &w in &succ[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen
    };
    let starts: Vec<usize> = a.initial().iter().map(|&q| id(q, 0)).collect();
    let mut reachable = reach(&starts);
    for &s in &starts {
        reachable[s] = true;
    }
    (0..nodes).any(|v| {
        let q = v / positions;
        reachable[v] && a.is_accepting(q) && reach(&[v])[v]
    })
}

/// Whether two automata accept the same bounded lassos, by the brute-force
/// oracle.
pub fn bounded_agree(a: &BuchiAutomaton, b: &BuchiAutomaton, max_prefix: usize, max_period: usize) -> bool {
    UPTrace::enumerate(a.alphabet(), max_prefix, max_period)
        .iter()
        .all(|pi| oracle_accepts(a, pi) == oracle_accepts(b, pi))
}

/// Whether `a` accepts exactly the bounded lassos satisfying `f`.
pub fn bounded_matches(a: &BuchiAutomaton, f: &Formula, max_prefix: usize, max_period: usize) -> bool {
    UPTrace::enumerate(a.alphabet(), max_prefix, max_period)
        .iter()
        .all(|pi| oracle_accepts(a, pi) == omega_agm::eval_up(pi, f, a.alphabet()))
}

/// Random automata with between one and `max_states` states over `ab`.
pub fn arb_automaton(ab: AlphabetRef, max_states: usize) -> impl Strategy<Value = BuchiAutomaton> {
    let letters = ab.letter_count();
    (1..=max_states).prop_flat_map(move |n| {
        let ab = ab.clone();
        (
            proptest::collection::vec(any::<bool>(), n),
            proptest::collection::vec(proptest::bool::weighted((1.5 / n as f64).min(0.9)), n * letters * n),
            proptest::collection::vec(any::<bool>(), n),
        )
            .prop_map(move |(acc, edges, init)| {
                let mut a = BuchiAutomaton::new(ab.clone());
                for &x in &acc {
                    a.add_state(x);
                }
                a.add_initial(0);
                for (q, &i) in init.iter().enumerate().skip(1) {
                    if i && q % 2 == 1 {
                        a.add_initial(q);
                    }
                }
                for (k, &on) in edges.iter().enumerate() {
                    if on {
                        let (q, rest) = (k / (letters * n), k % (letters * n));
                        let (l, t) = (rest / n, rest % n);
                        a.add_edge(q, Cube::letter(Letter(l as u32), ab.len()), t);
                    }
                }
                a
            })
    })
}

/// Random left-total Kripke structures with at most `max_states` states.
pub fn arb_kripke(ab: AlphabetRef, max_states: usize) -> impl Strategy<Value = KripkeStructure> {
    let letters = ab.letter_count() as u32;
    (1..=max_states).prop_flat_map(move |n| {
        let ab = ab.clone();
        (
            proptest::collection::vec(0..letters, n),
            proptest::collection::vec(proptest::collection::btree_set(0..n, 1..=n.min(2)), n),
            proptest::collection::vec(any::<bool>(), n),
        )
            .prop_map(move |(labels, succ, init)| {
                let mut m = KripkeStructure::new(ab.clone());
                for (s, &l) in labels.iter().enumerate() {
                    m.add_state(format!("s{s}"), Letter(l), s == 0 || init[s]);
                }
                for (s, ts) in succ.iter().enumerate() {
                    for &t in ts {
                        m.add_edge(s, t);
                    }
                }
                m
            })
    })
}

/// Random preference relations over `base`, as automata over the doubled alphabet.
pub fn arb_preference(base: AlphabetRef, max_states: usize) -> impl Strategy<Value = BuchiMealyAutomaton> {
    let doubled = Arc::new(base.doubled().unwrap());
    arb_automaton(doubled, max_states).prop_map(move |a| BuchiMealyAutomaton::new(base.clone(), a).unwrap())
}

/// Passes a result through, rejecting the case when an operand exceeds the
/// complement cap or a construction runs past the state budget.
pub fn within_limits<T>(r: omega_agm::Result<T>) -> Result<T, TestCaseError> {
    match r {
        Err(omega_agm::Error::CapacityExceeded { .. }) => Err(TestCaseError::reject("over the complement cap")),
        Err(omega_agm::Error::StateBudgetExceeded { .. }) => Err(TestCaseError::reject("over the state budget")),
        other => Ok(other.unwrap()),
    }
}
