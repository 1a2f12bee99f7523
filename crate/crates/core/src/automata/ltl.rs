//! LTL to Büchi: negation normal form, a tableau producing a generalized
//! Büchi automaton, then counter-based degeneralization.

use std::collections::{BTreeSet, HashMap, VecDeque};

use super::BuchiAutomaton;
use crate::alphabet::{Alphabet, AlphabetRef, Cube};
use crate::error::{Error, Result};
use crate::formula::Formula;

type NodeId = u32;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Nnf {
    True,
    False,
    Lit(usize, bool),
    And(Vec<NodeId>),
    Or(Vec<NodeId>),
    Next(NodeId),
    Until(NodeId, NodeId),
    Release(NodeId, NodeId),
}

/// Hash-consed NNF formulas. Commutative operands are flattened, sorted and
/// deduplicated, so syntactically different but trivially equal inputs
/// (e.g. `f` and `!!f`) share one node.
#[derive(Default)]
struct Arena {
    nodes: Vec<Nnf>,
    ids: HashMap<Nnf, NodeId>,
}

impl Arena {
    fn intern(&mut self, n: Nnf) -> NodeId {
        if let Some(&id) = self.ids.get(&n) {
            return id;
        }
        let id = self.nodes.len() as NodeId;
        self.nodes.push(n.clone());
        self.ids.insert(n, id);
        id
    }

    fn get(&self, id: NodeId) -> &Nnf {
        &self.nodes[id as usize]
    }

    fn tt(&mut self) -> NodeId {
        self.intern(Nnf::True)
    }

    fn ff(&mut self) -> NodeId {
        self.intern(Nnf::False)
    }

    fn negated_literal(&self, id: NodeId) -> Option<NodeId> {
        match self.get(id) {
            Nnf::Lit(p, b) => self.ids.get(&Nnf::Lit(*p, !*b)).copied(),
            _ => None,
        }
    }

    fn junction(&mut self, conj: bool, items: Vec<NodeId>) -> NodeId {
        let (unit, zero) = if conj {
            (Nnf::True, Nnf::False)
        } else {
            (Nnf::False, Nnf::True)
        };
        let mut flat = Vec::new();
        for id in items {
            match self.get(id) {
                Nnf::And(cs) if conj => flat.extend(cs.iter().copied()),
                Nnf::Or(cs) if !conj => flat.extend(cs.iter().copied()),
                n if *n == unit => {}
                n if *n == zero => return self.intern(zero),
                _ => flat.push(id),
            }
        }
        flat.sort_unstable();
        flat.dedup();
        if flat.iter().any(|&id| {
            self.negated_literal(id)
                .is_some_and(|neg| flat.binary_search(&neg).is_ok())
        }) {
            return self.intern(zero);
        }
        match flat.len() {
            0 => self.intern(unit),
            1 => flat[0],
            _ if conj => self.intern(Nnf::And(flat)),
            _ => self.intern(Nnf::Or(flat)),
        }
    }

    fn next(&mut self, x: NodeId) -> NodeId {
        match self.get(x) {
            Nnf::True | Nnf::False => x,
            _ => self.intern(Nnf::Next(x)),
        }
    }

    fn until(&mut self, a: NodeId, b: NodeId) -> NodeId {
        match (self.get(a), self.get(b)) {
            (_, Nnf::True | Nnf::False) => b,
            (Nnf::False, _) => b,
            _ if a == b => b,
            _ => self.intern(Nnf::Until(a, b)),
        }
    }

    fn release(&mut self, a: NodeId, b: NodeId) -> NodeId {
        match (self.get(a), self.get(b)) {
            (_, Nnf::True | Nnf::False) => b,
            (Nnf::True, _) => b,
            _ if a == b => b,
            _ => self.intern(Nnf::Release(a, b)),
        }
    }

    /// NNF of `f` (or of `¬f` when `neg`).
    fn nnf(&mut self, f: &Formula, neg: bool, ab: &Alphabet) -> Result<NodeId> {
        Ok(match f {
            Formula::Bottom if neg => self.tt(),
            Formula::Bottom => self.ff(),
            Formula::Top if neg => self.ff(),
            Formula::Top => self.tt(),
            Formula::Atom(name) => {
                let p = ab.index_of(name).ok_or_else(|| Error::UnknownAtom(name.clone()))?;
                self.intern(Nnf::Lit(p, !neg))
            }
            Formula::Not(g) => self.nnf(g, !neg, ab)?,
            Formula::Or(a, b) | Formula::And(a, b) => {
                let conj = matches!(f, Formula::And(..)) != neg;
                let x = self.nnf(a, neg, ab)?;
                let y = self.nnf(b, neg, ab)?;
                self.junction(conj, vec![x, y])
            }
            Formula::Implies(a, b) => {
                let x = self.nnf(a, !neg, ab)?;
                let y = self.nnf(b, neg, ab)?;
                self.junction(neg, vec![x, y])
            }
            Formula::Next(g) => {
                let x = self.nnf(g, neg, ab)?;
                self.next(x)
            }
            Formula::NextPow(k, g) => {
                let mut x = self.nnf(g, neg, ab)?;
                for _ in 0..*k {
                    x = self.next(x);
                }
                x
            }
            Formula::Until(a, b) => {
                let x = self.nnf(a, neg, ab)?;
                let y = self.nnf(b, neg, ab)?;
                if neg {
                    self.release(x, y)
                } else {
                    self.until(x, y)
                }
            }
            Formula::Finally(g) | Formula::Globally(g) => {
                let x = self.nnf(g, neg, ab)?;
                if matches!(f, Formula::Finally(_)) != neg {
                    let t = self.tt();
                    self.until(t, x)
                } else {
                    let z = self.ff();
                    self.release(z, x)
                }
            }
        })
    }
}

/// A tableau node under construction.
#[derive(Clone)]
struct Partial {
    from: Option<usize>,
    new: BTreeSet<NodeId>,
    old: BTreeSet<NodeId>,
    next: BTreeSet<NodeId>,
}

struct Tableau {
    old: Vec<BTreeSet<NodeId>>,
    incoming: Vec<BTreeSet<Option<usize>>>,
}

fn branches(n: &Nnf) -> bool {
    matches!(n, Nnf::Or(_) | Nnf::Until(..) | Nnf::Release(..))
}

fn tableau(arena: &Arena, root: NodeId) -> Tableau {
    let mut t = Tableau {
        old: Vec::new(),
        incoming: Vec::new(),
    };
    let mut index: HashMap<(BTreeSet<NodeId>, BTreeSet<NodeId>), usize> = HashMap::new();
    let mut stack = vec![Partial {
        from: None,
        new: BTreeSet::from([root]),
        old: BTreeSet::new(),
        next: BTreeSet::new(),
    }];
    'outer: while let Some(mut node) = stack.pop() {
        loop {
            // settle non-branching obligations first
            let pick = node
                .new
                .iter()
                .copied()
                .find(|&id| !branches(arena.get(id)))
                .or_else(|| node.new.iter().next().copied());
            let Some(eta) = pick else {
                let key = (node.old, node.next);
                if let Some(&id) = index.get(&key) {
                    t.incoming[id].insert(node.from);
                } else {
                    let id = t.old.len();
                    t.old.push(key.0.clone());
                    t.incoming.push(BTreeSet::from([node.from]));
                    stack.push(Partial {
                        from: Some(id),
                        new: key.1.clone(),
                        old: BTreeSet::new(),
                        next: BTreeSet::new(),
                    });
                    index.insert(key, id);
                }
                continue 'outer;
            };
            node.new.remove(&eta);
            if node.old.contains(&eta) {
                continue;
            }
            let contradicts = |old: &BTreeSet<NodeId>, id: NodeId| {
                matches!(arena.get(id), Nnf::False) || arena.negated_literal(id).is_some_and(|n| old.contains(&n))
            };
            match arena.get(eta) {
                Nnf::True => {}
                Nnf::False => continue 'outer,
                Nnf::Lit(..) => {
                    if contradicts(&node.old, eta) {
                        continue 'outer;
                    }
                }
                Nnf::And(cs) => {
                    node.new.extend(cs.iter().filter(|c| !node.old.contains(c)));
                }
                Nnf::Next(x) => {
                    node.next.insert(*x);
                }
                Nnf::Or(cs) => {
                    node.old.insert(eta);
                    if cs.iter().any(|c| node.old.contains(c)) {
                        continue;
                    }
                    let live: Vec<NodeId> = cs.iter().copied().filter(|&c| !contradicts(&node.old, c)).collect();
                    let Some((&first, rest)) = live.split_first() else {
                        continue 'outer;
                    };
                    for &c in rest.iter().rev() {
                        let mut other = node.clone();
                        other.new.insert(c);
                        stack.push(other);
                    }
                    node.new.insert(first);
                    continue;
                }
                Nnf::Until(a, b) => {
                    node.old.insert(eta);
                    let mut other = node.clone();
                    other.new.insert(*a);
                    other.next.insert(eta);
                    stack.push(other);
                    node.new.insert(*b);
                    continue;
                }
                Nnf::Release(a, b) => {
                    node.old.insert(eta);
                    let mut other = node.clone();
                    other.new.insert(*b);
                    other.next.insert(eta);
                    stack.push(other);
                    node.new.insert(*a);
                    node.new.insert(*b);
                    continue;
                }
            }
            node.old.insert(eta);
        }
    }
    t
}

/// A Büchi automaton accepting exactly the traces satisfying `f`.
pub fn from_ltl(f: &Formula, alphabet: &AlphabetRef) -> Result<BuchiAutomaton> {
    let mut arena = Arena::default();
    let root = arena.nnf(f, false, alphabet)?;
    let t = tableau(&arena, root);
    let n = t.old.len();

    let guards: Vec<Cube> = t
        .old
        .iter()
        .map(|old| {
            old.iter().fold(Cube::TOP, |c, &id| match arena.get(id) {
                Nnf::Lit(p, b) => c.and(Cube::literal(*p, *b)).expect("consistent node"),
                _ => c,
            })
        })
        .collect();
    let mut succs: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut starts = Vec::new();
    for q in 0..n {
        for &src in &t.incoming[q] {
            match src {
                None => starts.push(q),
                Some(p) => succs[p].push(q),
            }
        }
    }

    let mut acc_sets: Vec<Vec<bool>> = Vec::new();
    for (id, node) in arena.nodes.iter().enumerate() {
        if let Nnf::Until(_, b) = node {
            let u = id as NodeId;
            let set: Vec<bool> = t.old.iter().map(|old| !old.contains(&u) || old.contains(b)).collect();
            if !set.iter().all(|&x| x) && !acc_sets.contains(&set) {
                acc_sets.push(set);
            }
        }
    }
    let k = acc_sets.len();

    let mut out = BuchiAutomaton::new(alphabet.clone());
    let iota = out.add_state(k == 0);
    out.add_initial(iota);
    let mut ids: HashMap<(usize, usize), usize> = HashMap::new();
    let mut queue = VecDeque::new();
    let accepting = |q: usize, i: usize| k == 0 || (i == 0 && acc_sets[0][q]);
    let mut state = |q: usize, i: usize, out: &mut BuchiAutomaton, queue: &mut VecDeque<(usize, usize)>| {
        *ids.entry((q, i)).or_insert_with(|| {
            queue.push_back((q, i));
            out.add_state(accepting(q, i))
        })
    };
    for &q in &starts {
        let s = state(q, 0, &mut out, &mut queue);
        out.add_edge(iota, guards[q], s);
    }
    while let Some((p, i)) = queue.pop_front() {
        let src = state(p, i, &mut out, &mut queue);
        let j = if k > 0 && acc_sets[i][p] { (i + 1) % k } else { i };
        for &q in &succs[p] {
            let dst = state(q, j, &mut out, &mut queue);
            out.add_edge(src, guards[q], dst);
        }
    }
    Ok(out.reduce())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{accepts_up, is_empty};
    use crate::formula::{eval_up, parse_ltl, UPTrace};
    use crate::testutil::{ap_p, ap_pq};

    fn check_against_eval(text: &str, ab: &AlphabetRef, traces: &[UPTrace]) {
        let f = parse_ltl(text, ab).unwrap();
        let a = from_ltl(&f, ab).unwrap();
        for pi in traces {
            assert_eq!(accepts_up(&a, pi), eval_up(pi, &f, ab), "{text} on {}", pi.display(ab));
        }
    }

    #[test]
    fn constants() {
        let ab = ap_p();
        assert!(is_empty(&from_ltl(&Formula::Bottom, &ab).unwrap()).is_none());
        assert!(is_empty(&from_ltl(&parse_ltl("p & !p", &ab).unwrap(), &ab).unwrap()).is_none());
        let top = from_ltl(&Formula::Top, &ab).unwrap();
        assert_eq!(top.num_states(), 1);
    }

    #[test]
    fn small_formulas_agree_with_evaluation() {
        let ab = ap_pq();
        let traces = UPTrace::enumerate(&ab, 2, 2);
        for text in [
            "p",
            "X p",
            "F p",
            "G p",
            "G F p",
            "F G p",
            "p U q",
            "!(p U q)",
            "G (p -> X q)",
            "F (p & X !p) | G q",
            "(p U q) U !p",
            "X X p -> F q",
        ] {
            check_against_eval(text, &ab, &traces);
        }
    }

    #[test]
    fn double_negation_gives_the_same_automaton() {
        let ab = ap_pq();
        let f = parse_ltl("G (p -> F q)", &ab).unwrap();
        let g = Formula::not(Formula::not(f.clone()));
        assert_eq!(from_ltl(&f, &ab).unwrap(), from_ltl(&g, &ab).unwrap());
    }

    #[test]
    fn eventually_never_p_is_two_states() {
        let ab = ap_p();
        let a = from_ltl(&parse_ltl("!G F p", &ab).unwrap(), &ab).unwrap();
        assert_eq!(a.num_states(), 2);
    }

    #[test]
    fn unknown_atom() {
        let ab = ap_p();
        assert_eq!(from_ltl(&Formula::atom("r"), &ab), Err(Error::UnknownAtom("r".into())));
    }
}
