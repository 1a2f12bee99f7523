mod common;

use common::*;
use omega_agm::kripke::KripkeStructure;
use omega_agm::{eval_up, identifying_formula, parse_ltl, render, Error, Formula};

#[test]
fn parse_examples() {
    let ab = ap_pq();
    let p = || Formula::atom("p");
    assert_eq!(ltl("G F p", &ab), Formula::globally(Formula::finally(p())));
    assert_eq!(
        ltl("p U (q | X p)", &ab),
        Formula::until(p(), Formula::or(Formula::atom("q"), Formula::next(p())))
    );
    assert_eq!(parse_ltl("G F r", &ap_p()).unwrap_err(), Error::UnknownAtom("r".into()));
}

#[test]
fn render_examples() {
    assert_eq!(
        render(&Formula::globally(Formula::finally(Formula::atom("p")))),
        "G F p"
    );
    assert_eq!(render(&Formula::Bottom), "ff");
    assert_eq!(render(&Formula::until(Formula::atom("p"), Formula::atom("q"))), "p U q");
}

#[test]
fn evaluation_examples() {
    let ab = ap_p();
    let ev = |t: &str, f: &str| eval_up(&trace(t, &ab), &ltl(f, &ab), &ab);
    assert!(ev("; {p}", "G p"));
    assert!(!ev("{} ; {p}", "G p"));
    assert!(ev("{} ; {p}", "F p"));
    assert!(!ev("{p} ; {}", "G F p"));
}

#[test]
fn identifying_formula_examples() {
    let ab = ap_p();
    let id = |t: &str| identifying_formula(&trace(t, &ab), &ab).unwrap();
    let shape = "G((p -> X p) & (!p -> X !p))";
    let same = |f: &Formula, g: &str| {
        let g = ltl(g, &ab);
        omega_agm::UPTrace::enumerate(&ab, 3, 3)
            .iter()
            .all(|pi| eval_up(pi, f, &ab) == eval_up(pi, &g, &ab))
    };
    assert!(same(&id("; {p}"), &format!("p & {shape}")));
    assert!(same(&id("{} ; {p}"), &format!("!p & X p & X {shape}")));
    assert!(!eval_up(&trace("{p} ; {p}", &ab), &id("{} ; {p}"), &ab));
}

#[test]
fn kripke_validation_examples() {
    let ab = ap_p();
    assert!(alternating_kripke().validate().is_ok());
    let stuck = KripkeStructure::parse("state s init {}\n", ab.clone()).unwrap();
    assert_eq!(stuck.validate().unwrap_err(), Error::NotLeftTotal("s".into()));
    let no_init = KripkeStructure::parse("state s {}\nedge s s\n", ab.clone()).unwrap();
    assert_eq!(no_init.validate().unwrap_err(), Error::EmptyInitialSet);
    assert!(KripkeStructure::parse("state s init {r}\n", ab).is_err());
}

#[test]
fn kripke_to_buchi_examples() {
    let ab = ap_p();
    let a = alternating_kripke().to_buchi().unwrap();
    assert!(oracle_accepts(&a, &trace("{p} ; {} {p}", &ab)));
    assert!(!oracle_accepts(&a, &trace("; {}", &ab)));
    assert!(omega_agm::automata::accepts_up(&a, &trace("{p} ; {} {p}", &ab)));
    assert!(!omega_agm::automata::accepts_up(&a, &trace("; {}", &ab)));
    let l = omega_agm::limits::Limits::default();
    let gfp = omega_agm::automata::from_ltl(&ltl("G F p", &ab), &ab).unwrap();
    assert!(omega_agm::automata::includes(&a, &gfp, &l).unwrap());
}

#[test]
fn kripke_text_round_trip() {
    let m = alternating_kripke();
    let again = KripkeStructure::parse(&m.to_text(), ap_p()).unwrap();
    assert_eq!(again, m);
}
