use super::{Formula, UPTrace};
use crate::alphabet::{Alphabet, Letter};
use crate::error::{Error, Result};

/// The shape conjunct ranges over all `2^|AP|` letters, so the formula grows
/// exponentially in the alphabet; larger alphabets are rejected.
pub const IDENTIFYING_MAX_PROPS: usize = 8;

/// The conjunction of a letter's atoms and the negations of the absent ones.
fn letter_formula(letter: Letter, alphabet: &Alphabet) -> Formula {
    Formula::conjunction((0..alphabet.len()).map(|i| {
        let atom = Formula::atom(alphabet.name(i));
        if letter.contains(i) {
            atom
        } else {
            Formula::not(atom)
        }
    }))
}

/// A formula satisfied by `pi` and by no other trace:
///
/// `⋀ X^(i-1) a_i  ∧  ⋀ X^(n+i) b_i  ∧  X^n G ⋀_{a ∈ Σ} (a → X^(m+1) a)`
///
/// for `pi = a_1…a_n (b_0…b_m)^ω`. The representation is used as given.
pub fn identifying_formula(pi: &UPTrace, alphabet: &Alphabet) -> Result<Formula> {
    if alphabet.len() > IDENTIFYING_MAX_PROPS {
        return Err(Error::TooManyProps {
            limit: IDENTIFYING_MAX_PROPS,
            actual: alphabet.len(),
        });
    }
    let n = pi.prefix().len() as u32;
    let period_len = pi.period().len() as u32;
    let mut conjuncts = Vec::new();
    for (i, &a) in pi.prefix().iter().enumerate() {
        conjuncts.push(Formula::next_pow(i as u32, letter_formula(a, alphabet)));
    }
    for (i, &b) in pi.period().iter().enumerate() {
        conjuncts.push(Formula::next_pow(n + i as u32, letter_formula(b, alphabet)));
    }
    // letters from the full set down to ∅
    let shape = Formula::conjunction(alphabet.letters().rev().map(|a| {
        let lf = letter_formula(a, alphabet);
        Formula::implies(lf.clone(), Formula::next_pow(period_len, lf))
    }));
    conjuncts.push(Formula::next_pow(n, Formula::globally(shape)));
    Ok(Formula::conjunction(conjuncts))
}
