use super::{Formula, UPTrace};
use crate::alphabet::Alphabet;

/// Decides `prefix · period^ω ⊨ f` by tabulating each subformula over the
/// `|prefix| + |period|` lasso positions. Atoms outside `alphabet` never hold.
pub fn eval_up(pi: &UPTrace, f: &Formula, alphabet: &Alphabet) -> bool {
    Lasso { pi, alphabet }.table(f)[0]
}

struct Lasso<'a> {
    pi: &'a UPTrace,
    alphabet: &'a Alphabet,
}

impl Lasso<'_> {
    fn len(&self) -> usize {
        self.pi.positions()
    }

    fn table(&self, f: &Formula) -> Vec<bool> {
        use Formula::*;
        let n = self.len();
        match f {
            Bottom => vec![false; n],
            Top => vec![true; n],
            Atom(name) => match self.alphabet.index_of(name) {
                Some(idx) => (0..n).map(|i| self.pi.letter_at_position(i).contains(idx)).collect(),
                None => vec![false; n],
            },
            Not(g) => self.table(g).into_iter().map(|b| !b).collect(),
            Or(a, b) => zip(self.table(a), self.table(b), |x, y| x || y),
            And(a, b) => zip(self.table(a), self.table(b), |x, y| x && y),
            Implies(a, b) => zip(self.table(a), self.table(b), |x, y| !x || y),
            Next(g) => self.shift(&self.table(g), 1),
            NextPow(k, g) => {
                let t = self.table(g);
                self.shift(&t, *k as usize)
            }
            Until(a, b) => self.until(&self.table(a), &self.table(b)),
            Finally(g) => self.until(&vec![true; n], &self.table(g)),
            Globally(g) => {
                let neg: Vec<bool> = self.table(g).into_iter().map(|b| !b).collect();
                self.until(&vec![true; n], &neg).into_iter().map(|b| !b).collect()
            }
        }
    }

    fn shift(&self, t: &[bool], k: usize) -> Vec<bool> {
        (0..self.len())
            .map(|i| {
                let mut j = i;
                for _ in 0..k {
                    j = self.pi.successor(j);
                }
                t[j]
            })
            .collect()
    }

    /// Least fixpoint of `u[i] = b[i] ∨ (a[i] ∧ u[succ(i)])`: two backward
    /// passes over the cycle settle it, then one pass over the prefix.
    fn until(&self, a: &[bool], b: &[bool]) -> Vec<bool> {
        let n = self.len();
        let start = self.pi.prefix().len();
        let mut u = vec![false; n];
        for _ in 0..2 {
            for i in (start..n).rev() {
                u[i] = b[i] || (a[i] && u[self.pi.successor(i)]);
            }
        }
        for i in (0..start).rev() {
            u[i] = b[i] || (a[i] && u[i + 1]);
        }
        u
    }
}

fn zip(a: Vec<bool>, b: Vec<bool>, op: impl Fn(bool, bool) -> bool) -> Vec<bool> {
    a.into_iter().zip(b).map(|(x, y)| op(x, y)).collect()
}
