use super::complement::{is_deterministic, is_letter_blind, prepare};
use super::ops::product;
use super::{complement, is_empty, simulation_included, BuchiAutomaton};
use crate::error::Result;
use crate::formula::UPTrace;
use crate::limits::Limits;

/// A trace in `L(a) ∖ L(b)`, if any; the cap applies to `b`. A deterministic
/// `b` is complemented outright, otherwise the search runs on summaries of
/// `b`'s runs over finite words.
pub fn inclusion_counterexample(a: &BuchiAutomaton, b: &BuchiAutomaton, limits: &Limits) -> Result<Option<UPTrace>> {
    a.same_alphabet(b)?;
    let a = a.reduce();
    if a.num_states() == 0 {
        return Ok(None);
    }
    if simulation_included(&a, &b.trim()) {
        return Ok(None);
    }
    let b = prepare(b, limits)?;
    if b.num_states() > 0 && is_letter_blind(&b) {
        return Ok(None);
    }
    if is_deterministic(&b) {
        let prod = product(&a, &complement(&b, limits)?);
        return Ok(is_empty(&prod).map(|w| w.to_trace()));
    }
    super::ramsey::counterexample(&a, &b, limits)
}

/// `L(a) ⊆ L(b)`.
pub fn includes(a: &BuchiAutomaton, b: &BuchiAutomaton, limits: &Limits) -> Result<bool> {
    Ok(inclusion_counterexample(a, b, limits)?.is_none())
}

/// `L(a) = L(b)`, as inclusion both ways.
pub fn equivalent(a: &BuchiAutomaton, b: &BuchiAutomaton, limits: &Limits) -> Result<bool> {
    Ok(includes(a, b, limits)? && includes(b, a, limits)?)
}
