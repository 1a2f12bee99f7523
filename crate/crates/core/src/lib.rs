//! AGM belief contraction over LTL epistemic states, with epistemic states
//! finitely represented by Büchi automata.

pub mod alphabet;
pub mod automata;
pub mod belief;
pub mod error;
pub mod formula;
pub mod kripke;
pub mod limits;
pub mod preference;

#[cfg(test)]
mod testutil;

pub use alphabet::{Alphabet, AlphabetRef, Cube, Letter};
pub use error::{Error, Result};
pub use formula::{eval_up, identifying_formula, parse_ltl, render, Formula, UPTrace};
