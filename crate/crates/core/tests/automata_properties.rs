mod common;

use common::*;
use omega_agm::automata::*;
use omega_agm::limits::Limits;
use omega_agm::{eval_up, UPTrace};
use proptest::prelude::*;

const PQ: &[&str] = &["p", "q"];

fn wide() -> Limits {
    Limits::with_cap(64)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn translation_agrees_with_evaluation(f in arb_formula(4, PQ)) {
        let ab = ap_pq();
        let a = from_ltl(&f, &ab).unwrap();
        for pi in UPTrace::enumerate(&ab, 2, 2) {
            prop_assert_eq!(accepts_up(&a, &pi), eval_up(&pi, &f, &ab), "{} on {}", f, pi.display(&ab));
        }
    }

    #[test]
    fn membership_agrees_with_brute_force(a in arb_automaton(ap_pq(), 5), pi in arb_trace(2, 3, 3)) {
        prop_assert_eq!(accepts_up(&a, &pi), oracle_accepts(&a, &pi));
    }

    #[test]
    fn reduction_preserves_acceptance(a in arb_automaton(ap_p(), 7), b in arb_automaton(ap_pq(), 5)) {
        for (x, depth) in [(a, 3), (b, 2)] {
            let r = x.reduce();
            prop_assert!(r.num_states() <= x.num_states());
            for pi in UPTrace::enumerate(x.alphabet(), depth, depth) {
                prop_assert_eq!(oracle_accepts(&r, &pi), oracle_accepts(&x, &pi), "{}", pi.display(x.alphabet()));
            }
        }
    }

    #[test]
    fn witnesses_are_accepting_runs(a in arb_automaton(ap_pq(), 6)) {
        match is_empty(&a) {
            Some(w) => {
                prop_assert!(w.is_valid_run(&a));
                prop_assert!(accepts_up(&a, &w.to_trace()));
                prop_assert!(oracle_accepts(&a, &w.to_trace()));
            }
            None => {
                for pi in UPTrace::enumerate(a.alphabet(), 2, 2) {
                    prop_assert!(!oracle_accepts(&a, &pi));
                }
            }
        }
    }

    #[test]
    fn union_and_intersection_are_pointwise(
        a in arb_automaton(ap_pq(), 4),
        b in arb_automaton(ap_pq(), 4),
        pi in arb_trace(2, 2, 3),
    ) {
        let (x, y) = (oracle_accepts(&a, &pi), oracle_accepts(&b, &pi));
        prop_assert_eq!(oracle_accepts(&union(&a, &b).unwrap(), &pi), x || y);
        prop_assert_eq!(oracle_accepts(&intersect(&a, &b).unwrap(), &pi), x && y);
    }

    #[test]
    fn complement_is_pointwise(a in arb_automaton(ap_p(), 6)) {
        let c = complement(&a, &wide()).unwrap();
        for pi in UPTrace::enumerate(a.alphabet(), 3, 3) {
            prop_assert_ne!(oracle_accepts(&c, &pi), oracle_accepts(&a, &pi), "{}", pi.display(a.alphabet()));
        }
    }

    #[test]
    fn complement_is_an_involution(a in arb_automaton(ap_p(), 6)) {
        // complement is only defined up to the cap, so inputs whose first
        // complement is too large fall outside the property
        let l = Limits::default();
        let c = complement(&a, &l).unwrap();
        let cc = within_limits(complement(&c, &l))?;
        for pi in UPTrace::enumerate(a.alphabet(), 3, 3) {
            prop_assert_eq!(oracle_accepts(&cc, &pi), oracle_accepts(&a, &pi));
        }
        prop_assert!(within_limits(equivalent(&cc, &a, &wide()))?);
    }

    #[test]
    fn de_morgan(a in arb_automaton(ap_p(), 4), b in arb_automaton(ap_p(), 4)) {
        let l = Limits::default();
        let lhs = within_limits(complement(&union(&a, &b).unwrap(), &l))?;
        let rhs = intersect(&complement(&a, &l).unwrap(), &complement(&b, &l).unwrap()).unwrap();
        for pi in UPTrace::enumerate(a.alphabet(), 3, 3) {
            prop_assert_eq!(oracle_accepts(&lhs, &pi), oracle_accepts(&rhs, &pi));
        }
        prop_assert!(within_limits(equivalent(&lhs, &rhs, &wide()))?);
    }

    #[test]
    fn inclusion_is_a_preorder(
        a in arb_automaton(ap_p(), 4),
        b in arb_automaton(ap_p(), 4),
        c in arb_automaton(ap_p(), 4),
    ) {
        let l = wide();
        prop_assert!(includes(&a, &a, &l).unwrap());
        if includes(&a, &b, &l).unwrap() && includes(&b, &c, &l).unwrap() {
            prop_assert!(includes(&a, &c, &l).unwrap());
        }
        // a counterexample is a word of a outside b
        if let Some(w) = inclusion_counterexample(&a, &b, &l).unwrap() {
            prop_assert!(oracle_accepts(&a, &w) && !oracle_accepts(&b, &w));
        }
    }

    #[test]
    fn hoa_round_trip(a in arb_automaton(ap_pq(), 5)) {
        let text = to_hoa(&a);
        let back = parse_hoa(&text).unwrap().automaton;
        prop_assert_eq!(to_hoa(&back), text);
        prop_assert_eq!(back.initial(), a.initial());
        for q in 0..a.num_states() {
            let mut x = a.edges(q).to_vec();
            let mut y = back.edges(q).to_vec();
            x.sort_by_key(|e| (e.guard, e.target));
            y.sort_by_key(|e| (e.guard, e.target));
            prop_assert_eq!(x, y);
            prop_assert_eq!(a.is_accepting(q), back.is_accepting(q));
        }
    }

    #[test]
    fn canonical_form_is_stable(a in arb_automaton(ap_pq(), 5)) {
        let c = a.canonical();
        prop_assert_eq!(c.canonical(), c.clone());
        prop_assert!(equivalent(&c, &a, &wide()).unwrap());
    }

    #[test]
    fn model_checking_agrees_with_bounded_traces(m in arb_kripke(ap_pq(), 4), f in arb_formula(3, PQ)) {
        let ab = ap_pq();
        let holds = includes(&m.to_buchi().unwrap(), &from_ltl(&f, &ab).unwrap(), &wide()).unwrap();
        let bounded = m.bounded_traces(4, 4).iter().all(|pi| eval_up(pi, &f, &ab));
        prop_assert_eq!(holds, bounded, "{} on\n{}", f, m.to_text());
    }
}
