//! Büchi-Mealy automata: Büchi automata over pairs of letters, stored over
//! a doubled proposition list `p, q, …, p_out, q_out, …`. A pair `(x, y)` in
//! the recognised relation reads as "`y` is at least as plausible as `x`".

use std::sync::Arc;

use crate::alphabet::{mask, Alphabet, AlphabetRef, Cube, Letter};
use crate::automata::{self, complement, from_ltl, intersect, is_empty, BuchiAutomaton, HoaDocument};
use crate::belief::{is_tautology, BuchiChoice};
use crate::error::{Error, Result};
use crate::formula::{Formula, UPTrace};
use crate::limits::Limits;

#[derive(Debug, Clone)]
pub struct BuchiMealyAutomaton {
    base: AlphabetRef,
    automaton: BuchiAutomaton,
}

impl BuchiMealyAutomaton {
    /// Wraps an automaton over `base.doubled()`.
    pub fn new(base: AlphabetRef, automaton: BuchiAutomaton) -> Result<BuchiMealyAutomaton> {
        let doubled = base.doubled()?;
        if **automaton.alphabet() != doubled {
            return Err(Error::AlphabetMismatch {
                left: doubled.to_string(),
                right: automaton.alphabet().to_string(),
            });
        }
        Ok(BuchiMealyAutomaton { base, automaton })
    }

    /// The empty relation.
    pub fn empty(base: AlphabetRef) -> Result<BuchiMealyAutomaton> {
        let doubled = Arc::new(base.doubled()?);
        BuchiMealyAutomaton::new(base, BuchiAutomaton::new(doubled))
    }

    /// The relation `Σ^ω × Σ^ω`: every trace is dominated by every trace.
    pub fn total(base: AlphabetRef) -> Result<BuchiMealyAutomaton> {
        let doubled = Arc::new(base.doubled()?);
        BuchiMealyAutomaton::new(base, BuchiAutomaton::universal(doubled))
    }

    pub fn base(&self) -> &AlphabetRef {
        &self.base
    }

    pub fn automaton(&self) -> &BuchiAutomaton {
        &self.automaton
    }

    fn inputs(&self) -> usize {
        self.base.len()
    }

    pub fn to_hoa(&self) -> String {
        HoaDocument {
            automaton: self.automaton.clone(),
            label: None,
            mealy_inputs: Some(self.inputs()),
        }
        .render()
    }

    /// Reads a document carrying the `buchi-mealy` header. The first half of
    /// the AP list names the base alphabet; the second half is renamed to
    /// the `_out` convention.
    pub fn from_hoa(doc: HoaDocument) -> Result<BuchiMealyAutomaton> {
        let k = doc
            .mealy_inputs
            .ok_or_else(|| Error::Hoa("missing `buchi-mealy` header".into()))?;
        let names = doc.automaton.alphabet().props();
        let base = Arc::new(Alphabet::new(names[..k].iter().cloned())?);
        let doubled = Arc::new(base.doubled()?);
        let a = relabel(&doc.automaton, doubled, |g| g);
        BuchiMealyAutomaton::new(base, a)
    }
}

/// Copies `a` over another alphabet, mapping every guard.
fn relabel(a: &BuchiAutomaton, alphabet: AlphabetRef, map: impl Fn(Cube) -> Cube) -> BuchiAutomaton {
    let mut out = BuchiAutomaton::new(alphabet);
    for q in 0..a.num_states() {
        out.add_state(a.is_accepting(q));
    }
    for &q in a.initial() {
        out.add_initial(q);
    }
    for q in 0..a.num_states() {
        for e in a.edges(q) {
            out.add_edge(q, map(e.guard), e.target);
        }
    }
    out
}

/// Recognises `Σ^ω × L(a)`: each guard constrains only the output component.
pub fn lift_right(a: &BuchiAutomaton) -> Result<BuchiMealyAutomaton> {
    let base = a.alphabet().clone();
    let k = base.len();
    let doubled = Arc::new(base.doubled()?);
    BuchiMealyAutomaton::new(base, relabel(a, doubled, |g| g.shift(k)))
}

/// Recognises `L(a) × Σ^ω`.
pub fn lift_left(a: &BuchiAutomaton) -> Result<BuchiMealyAutomaton> {
    let base = a.alphabet().clone();
    let doubled = Arc::new(base.doubled()?);
    BuchiMealyAutomaton::new(base, relabel(a, doubled, |g| g))
}

/// `{ x | ∃y. (x, y) ∈ rel(b) }`.
pub fn proj1(b: &BuchiMealyAutomaton) -> BuchiAutomaton {
    let keep = mask(b.inputs());
    relabel(&b.automaton, b.base.clone(), |g| g.restrict(keep)).trim()
}

/// `{ y | ∃x. (x, y) ∈ rel(b) }`.
pub fn proj2(b: &BuchiMealyAutomaton) -> BuchiAutomaton {
    let k = b.inputs();
    relabel(&b.automaton, b.base.clone(), |g| g.unshift(k)).trim()
}

/// `rel(b1) ∩ rel(b2)`.
pub fn intersect_bm(b1: &BuchiMealyAutomaton, b2: &BuchiMealyAutomaton) -> Result<BuchiMealyAutomaton> {
    BuchiMealyAutomaton::new(b1.base.clone(), intersect(&b1.automaton, &b2.automaton)?)
}

/// `rel(b) ∩ ({pi} × Σ^ω)`.
pub fn restrict_input(b: &BuchiMealyAutomaton, pi: &UPTrace) -> Result<BuchiMealyAutomaton> {
    let lasso = automata::lasso_automaton(pi, b.base.clone());
    intersect_bm(b, &lift_left(&lasso)?)
}

/// The traces satisfying `f` that no trace satisfying `f` dominates:
/// `L(f) ∖ proj1(rel(b) ∩ (Σ^ω × L(f)))`.
pub fn max_automaton(b: &BuchiMealyAutomaton, f: &Formula, limits: &Limits) -> Result<BuchiAutomaton> {
    let bf = from_ltl(f, &b.base)?;
    let dominated = proj1(&intersect_bm(b, &lift_right(&bf)?)?);
    intersect(&bf, &complement(&dominated, limits)?)
}

/// A trace `y ⊨ f` with `(pi, y) ∈ rel(b)`, if one exists.
pub fn dominating_witness(b: &BuchiMealyAutomaton, pi: &UPTrace, f: &Formula) -> Result<Option<UPTrace>> {
    let bf = from_ltl(f, &b.base)?;
    let pairs = intersect_bm(&restrict_input(b, pi)?, &lift_right(&bf)?)?;
    Ok(is_empty(&proj2(&pairs)).map(|w| w.to_trace()))
}

/// The choice function `φ ↦ max(b, ¬φ)` (and `φ ↦ L(φ)` for tautologies).
#[derive(Debug, Clone)]
pub struct PreferenceChoice {
    preference: BuchiMealyAutomaton,
}

pub fn choice(b: &BuchiMealyAutomaton) -> PreferenceChoice {
    PreferenceChoice { preference: b.clone() }
}

impl PreferenceChoice {
    pub fn preference(&self) -> &BuchiMealyAutomaton {
        &self.preference
    }
}

impl BuchiChoice for PreferenceChoice {
    fn choose(&self, f: &Formula, limits: &Limits) -> Result<BuchiAutomaton> {
        let base = &self.preference.base;
        if is_tautology(f, base)? {
            return from_ltl(f, base);
        }
        let m = max_automaton(&self.preference, &Formula::not(f.clone()), limits)?;
        if is_empty(&m).is_none() {
            return Err(Error::MaximalCutViolated { formula: f.to_string() });
        }
        Ok(m)
    }
}

/// The relation "`p` occurs strictly earlier in the second trace":
/// `first_p(x) > first_p(y)`, with `first_p = ∞` when `p` never occurs.
pub fn earliest_occurrence(base: &AlphabetRef, p: &str) -> Result<BuchiMealyAutomaton> {
    let i = base.index_of(p).ok_or_else(|| Error::UnknownAtom(p.to_string()))?;
    let k = base.len();
    let doubled = Arc::new(base.doubled()?);
    let mut a = BuchiAutomaton::new(doubled);
    let q0 = a.add_state(false);
    let q1 = a.add_state(true);
    a.add_initial(q0);
    let absent = Cube::literal(i, false);
    let out = |positive| Cube::literal(i + k, positive);
    a.add_edge(q0, absent.and(out(false)).expect("distinct props"), q0);
    a.add_edge(q0, absent.and(out(true)).expect("distinct props"), q1);
    a.add_edge(q1, Cube::TOP, q1);
    BuchiMealyAutomaton::new(base.clone(), a)
}

/// Zips two traces into one trace over pairs, aligned on prefix length
/// `max(n1, n2)` and period length `lcm(m1, m2)`.
pub fn pair_trace(x: &UPTrace, y: &UPTrace, inputs: usize) -> UPTrace {
    let n = x.prefix().len().max(y.prefix().len());
    let (m1, m2) = (x.period().len(), y.period().len());
    let m = m1 / gcd(m1, m2) * m2;
    let zip = |t: usize| Letter(x.letter(t).0 | (y.letter(t).0 << inputs));
    UPTrace::new((0..n).map(zip).collect(), (n..n + m).map(zip).collect()).expect("nonempty period")
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Whether `(x, y) ∈ rel(b)`.
pub fn bm_accepts(b: &BuchiMealyAutomaton, x: &UPTrace, y: &UPTrace) -> bool {
    automata::accepts_up(&b.automaton, &pair_trace(x, y, b.inputs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{accepts_up, equivalent, parse_hoa};
    use crate::formula::{eval_up, parse_ltl};
    use crate::testutil::{ap_p, ap_pq};

    fn up(s: &str) -> UPTrace {
        UPTrace::parse(s, &ap_p()).unwrap()
    }

    fn ltl(s: &str) -> Formula {
        parse_ltl(s, &ap_p()).unwrap()
    }

    #[test]
    fn earliest_p_pairs() {
        let b = earliest_occurrence(&ap_p(), "p").unwrap();
        assert!(bm_accepts(&b, &up("{} ; {p}"), &up("{p} ; {p}")));
        assert!(!bm_accepts(&b, &up("{p} ; {p}"), &up("{p} ; {p}")));
        assert!(bm_accepts(&b, &up("; {}"), &up("{} {} ; {p}")));
        assert!(!bm_accepts(&b, &up("{} {} ; {p}"), &up("; {}")));
    }

    #[test]
    fn earliest_p_agrees_with_first_occurrence() {
        let ab = ap_p();
        let b = earliest_occurrence(&ab, "p").unwrap();
        let first = |t: &UPTrace| (0..t.prefix().len() + t.period().len()).find(|&i| t.letter(i).contains(0));
        let traces = UPTrace::enumerate(&ab, 2, 2);
        for x in &traces {
            for y in &traces {
                let expect = match (first(x), first(y)) {
                    (_, None) => false,
                    (None, Some(_)) => true,
                    (Some(a), Some(b)) => a > b,
                };
                assert_eq!(bm_accepts(&b, x, y), expect);
            }
        }
    }

    #[test]
    fn earliest_over_two_props_ignores_q() {
        let ab = ap_pq();
        let b = earliest_occurrence(&ab, "q").unwrap();
        let t = |s: &str| UPTrace::parse(s, &ab).unwrap();
        assert!(bm_accepts(&b, &t("{p} ; {q}"), &t("; {q}")));
        assert!(!bm_accepts(&b, &t("; {q}"), &t("{p} ; {p,q}")));
    }

    #[test]
    fn projections() {
        let ab = ap_p();
        let l = Limits::default();
        let a = from_ltl(&ltl("F p"), &ab).unwrap();
        let lifted = lift_right(&a).unwrap();
        let top = from_ltl(&Formula::Top, &ab).unwrap();
        assert!(equivalent(&proj1(&lifted), &top, &l).unwrap());
        assert!(equivalent(&proj2(&lifted), &a, &l).unwrap());
        let empty = BuchiMealyAutomaton::empty(ab.clone()).unwrap();
        assert!(is_empty(&proj1(&empty)).is_none());
        let ff = from_ltl(&Formula::Bottom, &ab).unwrap();
        assert!(is_empty(lift_right(&ff).unwrap().automaton()).is_none());
    }

    #[test]
    fn max_of_never_p_is_first_p() {
        let ab = ap_p();
        let l = Limits::default();
        let b = earliest_occurrence(&ab, "p").unwrap();
        let m = max_automaton(&b, &ltl("!G F p"), &l).unwrap();
        let expected = from_ltl(&ltl("p & !G F p"), &ab).unwrap();
        assert!(equivalent(&m, &expected, &l).unwrap());
        let g = choice(&b).choose(&ltl("G F p"), &l).unwrap();
        assert!(equivalent(&g, &expected, &l).unwrap());
    }

    #[test]
    fn degenerate_preferences() {
        let ab = ap_p();
        let l = Limits::default();
        let f = ltl("F p");
        let empty = BuchiMealyAutomaton::empty(ab.clone()).unwrap();
        let m = max_automaton(&empty, &f, &l).unwrap();
        assert!(equivalent(&m, &from_ltl(&f, &ab).unwrap(), &l).unwrap());
        let total = BuchiMealyAutomaton::total(ab.clone()).unwrap();
        assert!(is_empty(&max_automaton(&total, &f, &l).unwrap()).is_none());
        assert_eq!(
            choice(&total).choose(&ltl("p"), &l).unwrap_err(),
            Error::MaximalCutViolated { formula: "p".into() }
        );
        let universal = choice(&total).choose(&Formula::Top, &l).unwrap();
        assert!(accepts_up(&universal, &up("; {}")));
    }

    #[test]
    fn dominating_witnesses() {
        let ab = ap_p();
        let b = earliest_occurrence(&ab, "p").unwrap();
        let f = ltl("!G F p");
        let late = up("{} ; {}");
        let w = dominating_witness(&b, &late, &f).unwrap().unwrap();
        assert!(eval_up(&w, &f, &ab));
        assert!(bm_accepts(&b, &late, &w));
        assert!(dominating_witness(&b, &up("{p} ; {}"), &f).unwrap().is_none());
    }

    #[test]
    fn hoa_round_trip() {
        let b = earliest_occurrence(&ap_p(), "p").unwrap();
        let text = b.to_hoa();
        assert!(text.contains("/* buchi-mealy: 1 */"));
        assert!(text.contains("AP: 2 \"p\" \"p_out\""));
        let back = BuchiMealyAutomaton::from_hoa(parse_hoa(&text).unwrap()).unwrap();
        assert_eq!(back.automaton(), b.automaton());
    }
}
