mod common;

use common::*;
use omega_agm::automata::{equivalent, from_ltl};
use omega_agm::belief::*;
use omega_agm::limits::Limits;
use omega_agm::{eval_up, Formula, UPTrace};

fn ak() -> EpistemicState {
    EpistemicState::new(every_other_p()).with_label("A_K")
}

fn state(text: &str) -> EpistemicState {
    EpistemicState::from_formula(&ltl(text, &ap_p()), &ap_p()).unwrap()
}

fn f(text: &str) -> Formula {
    ltl(text, &ap_p())
}

/// A table choice: `G F p` is answered with `p ∧ ¬G F p`.
fn gfp_table_choice() -> TableChoice {
    let mut t = TableChoice::new(ap_p());
    t.insert(f("G F p"), p_then_eventually_never()).unwrap();
    t
}

#[test]
fn entailment_examples() {
    assert!(entails(&ak(), &f("F p")).unwrap());
    assert!(!entails(&ak(), &f("G p")).unwrap());
    assert!(!entails(&ak(), &f("!G p")).unwrap());
    assert!(entails(&ak(), &Formula::Top).unwrap());
    assert!(entails(&state("G p"), &Formula::Top).unwrap());
}

#[test]
fn model_consistency_examples() {
    let l = Limits::default();
    let m = alternating_kripke();
    assert!(model_consistent(&state("G F p"), &m, &l).unwrap());
    assert!(!model_consistent(&state("G p"), &m, &l).unwrap());
    assert!(model_consistent(&state("tt"), &m, &l).unwrap());
    // a bounded lasso of the structure through l1 falsifies G p
    let ab = ap_p();
    assert!(m.bounded_traces(2, 2).iter().any(|pi| !eval_up(pi, &f("G p"), &ab)));
}

#[test]
fn theory_inclusion_examples() {
    let l = Limits::default();
    assert!(state_includes(&state("F p"), &state("G p"), &l).unwrap());
    assert!(state_includes(&ak(), &ak(), &l).unwrap());
    assert!(!state_includes(&state("G p"), &state("F p"), &l).unwrap());
}

#[test]
fn consistency_examples() {
    assert!(!is_consistent(&state("ff")));
    assert!(is_consistent(&ak()));
    assert!(!is_consistent(&state("p & !p")));
}

#[test]
fn expansion_examples() {
    let l = Limits::default();
    assert!(entails(&expand(&state("F p"), &f("G p")).unwrap(), &f("G p")).unwrap());
    assert!(same_state(&expand(&ak(), &Formula::Top).unwrap(), &ak(), &l).unwrap());
    assert!(!is_consistent(&expand(&state("G p"), &f("!p")).unwrap()));
}

#[test]
fn contraction_examples() {
    let l = Limits::default();
    let c = contract(&ak(), &f("G F p"), &gfp_table_choice(), &l).unwrap();
    assert_eq!(c.branch, ContractionBranch::Contracted);
    assert!(equivalent(c.state.automaton(), &every_other_p_or_chosen(), &l).unwrap());
    assert!(!entails(&c.state, &f("G F p")).unwrap());

    let taut = contract(&ak(), &Formula::Top, &gfp_table_choice(), &l).unwrap();
    assert_eq!(taut.branch, ContractionBranch::Tautology);
    assert!(same_state(&taut.state, &ak(), &l).unwrap());

    let pq = ap_pq();
    let k = EpistemicState::from_formula(&ltl("G p", &pq), &pq).unwrap();
    let unchanged = contract(&k, &ltl("G q", &pq), &TableChoice::new(pq.clone()), &l).unwrap();
    assert_eq!(unchanged.branch, ContractionBranch::NotEntailed);
    assert!(same_state(&unchanged.state, &k, &l).unwrap());
}

#[test]
fn postulate_examples() {
    let l = Limits::default();
    let r = check_postulates(&ak(), &f("G F p"), &f("G F p"), &gfp_table_choice(), &l).unwrap();
    assert!(r.all_hold(), "{r}");
    assert!(r.extensionality_tested);

    let r = check_postulates(&ak(), &Formula::Top, &Formula::Top, &gfp_table_choice(), &l).unwrap();
    assert!(r.all_hold(), "{r}");

    let r = check_postulates(&ak(), &f("G F p"), &f("!!G F p"), &gfp_table_choice(), &l).unwrap();
    assert!(r.extensionality && r.extensionality_tested, "{r}");
}

#[test]
fn contraction_result_checked_on_bounded_lassos() {
    // Independent reading of the union: a lasso is a model of the result iff
    // it is a model of A_K or satisfies p ∧ ¬G F p.
    let l = Limits::default();
    let ab = ap_p();
    let c = contract(&ak(), &f("G F p"), &gfp_table_choice(), &l).unwrap();
    let chosen = f("p & !G F p");
    for pi in UPTrace::enumerate(&ab, 3, 3) {
        let expected = oracle_accepts(&every_other_p(), &pi) || eval_up(&pi, &chosen, &ab);
        assert_eq!(
            oracle_accepts(c.state.automaton(), &pi),
            expected,
            "{}",
            pi.display(&ab)
        );
    }
}

#[test]
fn hoa_round_trip_keeps_label() {
    let text = ak().to_hoa();
    let back = EpistemicState::from_hoa(omega_agm::automata::parse_hoa(&text).unwrap());
    assert_eq!(back.label(), Some("A_K"));
    assert!(same_state(&back, &ak(), &Limits::default()).unwrap());
    let gfp = from_ltl(&f("G F p"), &ap_p()).unwrap();
    assert!(!equivalent(back.automaton(), &gfp, &Limits::default()).unwrap());
}
