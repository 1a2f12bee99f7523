//! Epistemic states as Büchi automata: the state denotes the theory of
//! formulae satisfied by every trace the automaton accepts.

use std::fmt;

use crate::alphabet::AlphabetRef;
use crate::automata::{equivalent, from_ltl, includes, intersect, is_empty, union, BuchiAutomaton, HoaDocument};
use crate::error::{Error, Result};
use crate::formula::{Formula, UPTrace};
use crate::kripke::KripkeStructure;
use crate::limits::Limits;

#[derive(Debug, Clone)]
pub struct EpistemicState {
    automaton: BuchiAutomaton,
    label: Option<String>,
}

impl EpistemicState {
    pub fn new(automaton: BuchiAutomaton) -> EpistemicState {
        EpistemicState { automaton, label: None }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> EpistemicState {
        self.label = Some(label.into());
        self
    }

    /// The state whose models are exactly the traces satisfying `f`.
    pub fn from_formula(f: &Formula, alphabet: &AlphabetRef) -> Result<EpistemicState> {
        Ok(EpistemicState::new(from_ltl(f, alphabet)?))
    }

    pub fn automaton(&self) -> &BuchiAutomaton {
        &self.automaton
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn alphabet(&self) -> &AlphabetRef {
        self.automaton.alphabet()
    }

    pub fn to_hoa(&self) -> String {
        HoaDocument {
            automaton: self.automaton.clone(),
            label: self.label.clone(),
            mealy_inputs: None,
        }
        .render()
    }

    pub fn from_hoa(doc: HoaDocument) -> EpistemicState {
        EpistemicState {
            automaton: doc.automaton,
            label: doc.label,
        }
    }
}

/// Maps each formula to an automaton whose language is nonempty and which
/// supports the formula's negation. Implementations must be safe to query
/// from several threads.
pub trait BuchiChoice: Send + Sync {
    fn choose(&self, f: &Formula, limits: &Limits) -> Result<BuchiAutomaton>;
}

/// A fixed formula → automaton table. Lookup is up to logical equivalence,
/// so equivalent formulae receive the same automaton.
#[derive(Debug, Clone)]
pub struct TableChoice {
    alphabet: AlphabetRef,
    entries: Vec<(Formula, BuchiAutomaton, BuchiAutomaton)>,
}

impl TableChoice {
    pub fn new(alphabet: AlphabetRef) -> TableChoice {
        TableChoice {
            alphabet,
            entries: Vec::new(),
        }
    }

    pub fn insert(&mut self, f: Formula, choice: BuchiAutomaton) -> Result<()> {
        let key = from_ltl(&f, &self.alphabet)?;
        self.entries.push((f, key, choice));
        Ok(())
    }
}

impl BuchiChoice for TableChoice {
    fn choose(&self, f: &Formula, limits: &Limits) -> Result<BuchiAutomaton> {
        let key = from_ltl(f, &self.alphabet)?;
        for (_, k, choice) in &self.entries {
            if equivalent(&key, k, limits)? {
                return Ok(choice.clone());
            }
        }
        Err(Error::ChoiceViolation {
            formula: f.to_string(),
            reason: "no table entry for an equivalent formula".into(),
        })
    }
}

/// `⊨ f`, decided by emptiness of the automaton for `¬f`.
pub fn is_tautology(f: &Formula, alphabet: &AlphabetRef) -> Result<bool> {
    Ok(is_empty(&from_ltl(&Formula::not(f.clone()), alphabet)?).is_none())
}

/// A trace of `k` violating `f`, if there is one.
pub fn entailment_counterexample(k: &EpistemicState, f: &Formula) -> Result<Option<UPTrace>> {
    let neg = from_ltl(&Formula::not(f.clone()), k.alphabet())?;
    let both = intersect(k.automaton(), &neg)?;
    Ok(is_empty(&both).map(|w| w.to_trace()))
}

/// Whether `f` belongs to the theory of `k`.
pub fn entails(k: &EpistemicState, f: &Formula) -> Result<bool> {
    Ok(entailment_counterexample(k, f)?.is_none())
}

/// Whether every trace of `m` is a model of `k`.
pub fn model_consistent(k: &EpistemicState, m: &KripkeStructure, limits: &Limits) -> Result<bool> {
    let traces = m.to_buchi()?;
    includes(&traces, k.automaton(), limits)
}

/// Theory inclusion `K1 ⊆ K2`, which is language inclusion `L(A2) ⊆ L(A1)`.
pub fn state_includes(k1: &EpistemicState, k2: &EpistemicState, limits: &Limits) -> Result<bool> {
    includes(k2.automaton(), k1.automaton(), limits)
}

/// Equality of theories, i.e. language equivalence.
pub fn same_state(k1: &EpistemicState, k2: &EpistemicState, limits: &Limits) -> Result<bool> {
    equivalent(k1.automaton(), k2.automaton(), limits)
}

pub fn is_consistent(k: &EpistemicState) -> bool {
    is_empty(k.automaton()).is_some()
}

/// `K + f`: keep only the models of `k` satisfying `f`.
pub fn expand(k: &EpistemicState, f: &Formula) -> Result<EpistemicState> {
    let b = from_ltl(f, k.alphabet())?;
    Ok(EpistemicState::new(intersect(k.automaton(), &b)?))
}

/// Which case of the contraction definition applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContractionBranch {
    /// `f` is a tautology; the state is unchanged.
    Tautology,
    /// `k` does not entail `f`; the state is unchanged.
    NotEntailed,
    /// The chosen countermodels were added.
    Contracted,
}

impl fmt::Display for ContractionBranch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ContractionBranch::Tautology => "tautology (state unchanged)",
            ContractionBranch::NotEntailed => "not entailed (state unchanged)",
            ContractionBranch::Contracted => "contracted (union with chosen countermodels)",
        })
    }
}

#[derive(Debug, Clone)]
pub struct Contraction {
    pub state: EpistemicState,
    pub branch: ContractionBranch,
}

/// Checks the per-query choice conditions: a nonempty language that supports `¬f`.
fn checked_choice(
    choose: &dyn BuchiChoice,
    f: &Formula,
    k: &EpistemicState,
    limits: &Limits,
) -> Result<BuchiAutomaton> {
    let g = choose.choose(f, limits)?;
    g.same_alphabet(k.automaton())?;
    if is_empty(&g).is_none() {
        return Err(Error::ChoiceViolation {
            formula: f.to_string(),
            reason: "chosen automaton has an empty language".into(),
        });
    }
    let chosen = EpistemicState::new(g.clone());
    if !entails(&chosen, &Formula::not(f.clone()))? {
        return Err(Error::ChoiceViolation {
            formula: f.to_string(),
            reason: "chosen automaton accepts a model of the formula".into(),
        });
    }
    Ok(g)
}

/// `K ÷ f` induced by the choice function.
pub fn contract(k: &EpistemicState, f: &Formula, choose: &dyn BuchiChoice, limits: &Limits) -> Result<Contraction> {
    f.check_atoms(k.alphabet())?;
    if is_tautology(f, k.alphabet())? {
        return Ok(Contraction {
            state: k.clone(),
            branch: ContractionBranch::Tautology,
        });
    }
    if !entails(k, f)? {
        return Ok(Contraction {
            state: k.clone(),
            branch: ContractionBranch::NotEntailed,
        });
    }
    let g = checked_choice(choose, f, k, limits)?;
    Ok(Contraction {
        state: EpistemicState::new(union(k.automaton(), &g)?),
        branch: ContractionBranch::Contracted,
    })
}

/// Verdicts of the basic contraction postulates on one instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PostulateReport {
    /// Always true: the support of an automaton is a theory.
    pub closure: bool,
    pub inclusion: bool,
    pub vacuity: bool,
    pub success: bool,
    pub recovery: bool,
    pub extensionality: bool,
    /// Whether the two formulae were equivalent, so that extensionality
    /// was actually tested rather than vacuously true.
    pub extensionality_tested: bool,
}

impl PostulateReport {
    pub fn all_hold(&self) -> bool {
        self.closure && self.inclusion && self.vacuity && self.success && self.recovery && self.extensionality
    }
}

impl fmt::Display for PostulateReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "closure: {} (by construction)", self.closure)?;
        writeln!(f, "inclusion: {}", self.inclusion)?;
        writeln!(f, "vacuity: {}", self.vacuity)?;
        writeln!(f, "success: {}", self.success)?;
        writeln!(f, "recovery: {}", self.recovery)?;
        let note = if self.extensionality_tested {
            ""
        } else {
            " (formulae not equivalent, vacuous)"
        };
        write!(f, "extensionality: {}{note}", self.extensionality)
    }
}

/// Checks closure, inclusion, vacuity, success, recovery and extensionality
/// for contracting `k` by `f`, with `g` as the extensionality partner.
pub fn check_postulates(
    k: &EpistemicState,
    f: &Formula,
    g: &Formula,
    choose: &dyn BuchiChoice,
    limits: &Limits,
) -> Result<PostulateReport> {
    let ab = k.alphabet();
    let r = contract(k, f, choose, limits)?.state;
    let inclusion = state_includes(&r, k, limits)?;
    let vacuity = entails(k, f)? || same_state(&r, k, limits)?;
    let success = is_tautology(f, ab)? || !entails(&r, f)?;
    let recovery = state_includes(k, &expand(&r, f)?, limits)?;
    let (bf, bg) = (from_ltl(f, ab)?, from_ltl(g, ab)?);
    let extensionality_tested = equivalent(&bf, &bg, limits)?;
    let extensionality = !extensionality_tested || {
        let rg = contract(k, g, choose, limits)?.state;
        same_state(&r, &rg, limits)?
    };
    Ok(PostulateReport {
        closure: true,
        inclusion,
        vacuity,
        success,
        recovery,
        extensionality,
        extensionality_tested,
    })
}

/// Instances of the supplementary postulates for one pair `(φ, ψ)`. These
/// are samples, not proofs: the postulates quantify over all pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SupplementarySample {
    /// `K÷φ ∩ K÷ψ ⊆ K÷(φ∧ψ)`.
    pub conjunctive_overlap: bool,
    /// `φ ∉ K÷(φ∧ψ)` implies `K÷(φ∧ψ) ⊆ K÷φ`; `None` when the premise fails.
    pub conjunctive_inclusion: Option<bool>,
}

pub fn sample_supplementary(
    k: &EpistemicState,
    phi: &Formula,
    psi: &Formula,
    choose: &dyn BuchiChoice,
    limits: &Limits,
) -> Result<SupplementarySample> {
    let both = Formula::and(phi.clone(), psi.clone());
    let r_phi = contract(k, phi, choose, limits)?.state;
    let r_psi = contract(k, psi, choose, limits)?.state;
    let r_both = contract(k, &both, choose, limits)?.state;
    let meet = EpistemicState::new(union(r_phi.automaton(), r_psi.automaton())?);
    let conjunctive_overlap = state_includes(&meet, &r_both, limits)?;
    let conjunctive_inclusion = if entails(&r_both, phi)? {
        None
    } else {
        Some(state_includes(&r_both, &r_phi, limits)?)
    };
    Ok(SupplementarySample {
        conjunctive_overlap,
        conjunctive_inclusion,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_ltl;
    use crate::testutil::{ap_p, every_other_p};

    fn f(text: &str) -> Formula {
        parse_ltl(text, &ap_p()).unwrap()
    }

    fn state(text: &str) -> EpistemicState {
        EpistemicState::from_formula(&f(text), &ap_p()).unwrap()
    }

    #[test]
    fn shareable_across_threads() {
        fn check<T: Send + Sync>() {}
        check::<EpistemicState>();
        check::<TableChoice>();
    }

    #[test]
    fn every_other_p_support() {
        let k = EpistemicState::new(every_other_p());
        assert!(entails(&k, &f("F p")).unwrap());
        assert!(entails(&k, &f("G F p")).unwrap());
        assert!(!entails(&k, &f("G p")).unwrap());
        assert!(!entails(&k, &f("!G p")).unwrap());
        assert!(entails(&k, &Formula::Top).unwrap());
        assert!(is_consistent(&k));
        assert!(!is_consistent(&state("ff")));
        assert!(!is_consistent(&state("p & !p")));
    }

    #[test]
    fn theory_inclusion_is_reversed_language_inclusion() {
        let l = Limits::default();
        assert!(state_includes(&state("F p"), &state("G p"), &l).unwrap());
        assert!(!state_includes(&state("G p"), &state("F p"), &l).unwrap());
        let k = state("G F p");
        assert!(state_includes(&k, &k, &l).unwrap());
    }

    #[test]
    fn expansion() {
        let l = Limits::default();
        let e = expand(&state("F p"), &f("G p")).unwrap();
        assert!(entails(&e, &f("G p")).unwrap());
        let k = state("G F p");
        assert!(same_state(&expand(&k, &Formula::Top).unwrap(), &k, &l).unwrap());
        assert!(!is_consistent(&expand(&state("G p"), &f("!p")).unwrap()));
    }

    #[test]
    fn contraction_branches() {
        let l = Limits::default();
        let table = TableChoice::new(ap_p());
        let k = state("G p");
        let r = contract(&k, &Formula::Top, &table, &l).unwrap();
        assert_eq!(r.branch, ContractionBranch::Tautology);
        let r = contract(&k, &f("G !p"), &table, &l).unwrap();
        assert_eq!(r.branch, ContractionBranch::NotEntailed);
        // entailed but no entry: the table refuses
        assert!(matches!(
            contract(&k, &f("F p"), &table, &l),
            Err(Error::ChoiceViolation { .. })
        ));
    }

    #[test]
    fn choice_conditions_are_enforced() {
        let l = Limits::default();
        let ab = ap_p();
        let k = state("G p");
        let mut bad = TableChoice::new(ab.clone());
        bad.insert(f("F p"), from_ltl(&f("ff"), &ab).unwrap()).unwrap();
        let err = contract(&k, &f("F p"), &bad, &l).unwrap_err();
        assert!(matches!(err, Error::ChoiceViolation { ref reason, .. } if reason.contains("empty")));
        let mut bad = TableChoice::new(ab.clone());
        bad.insert(f("F p"), from_ltl(&f("p"), &ab).unwrap()).unwrap();
        let err = contract(&k, &f("F p"), &bad, &l).unwrap_err();
        assert!(matches!(err, Error::ChoiceViolation { ref reason, .. } if reason.contains("model")));
    }

    #[test]
    fn table_choice_postulates() {
        let l = Limits::default();
        let ab = ap_p();
        let k = EpistemicState::new(every_other_p());
        let mut table = TableChoice::new(ab.clone());
        table
            .insert(f("G F p"), from_ltl(&f("p & !G F p"), &ab).unwrap())
            .unwrap();
        let r = contract(&k, &f("G F p"), &table, &l).unwrap();
        assert_eq!(r.branch, ContractionBranch::Contracted);
        assert!(!entails(&r.state, &f("G F p")).unwrap());
        let report = check_postulates(&k, &f("G F p"), &f("!!G F p"), &table, &l).unwrap();
        assert!(report.all_hold(), "{report}");
        assert!(report.extensionality_tested);
    }
}
