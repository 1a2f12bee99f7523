//! Fixtures shared by unit tests.

use std::sync::Arc;

use crate::alphabet::{Alphabet, AlphabetRef, Cube};
use crate::automata::BuchiAutomaton;

pub(crate) fn ap_p() -> AlphabetRef {
    Arc::new(Alphabet::new(["p"]).unwrap())
}

pub(crate) fn ap_pq() -> AlphabetRef {
    Arc::new(Alphabet::new(["p", "q"]).unwrap())
}

/// Three states: q0 loops and moves to q1 on anything, q1 needs `p` to reach
/// q2, q2 returns to q1 on anything. q1 and q2 recur.
pub(crate) fn every_other_p() -> BuchiAutomaton {
    let mut a = BuchiAutomaton::new(ap_p());
    let q0 = a.add_state(false);
    let q1 = a.add_state(true);
    let q2 = a.add_state(true);
    a.add_initial(q0);
    a.add_edge(q0, Cube::TOP, q0);
    a.add_edge(q0, Cube::TOP, q1);
    a.add_edge(q1, Cube::literal(0, true), q2);
    a.add_edge(q2, Cube::TOP, q1);
    a
}
