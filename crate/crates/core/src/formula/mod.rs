//! LTL syntax: the formula tree, parsing and printing, evaluation over
//! ultimately periodic traces, and identifying formulae.

mod eval;
mod ident;
mod parse;
mod trace;

use std::collections::BTreeSet;
use std::fmt;

pub use eval::eval_up;
pub use ident::{identifying_formula, IDENTIFYING_MAX_PROPS};
pub use parse::parse_ltl;
pub use trace::UPTrace;

use crate::alphabet::Alphabet;
use crate::error::{Error, Result};

/// An LTL formula. The first six variants form the core language; the rest
/// are abbreviations that [`Formula::desugar`] rewrites into core form.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Bottom,
    Atom(String),
    Not(Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Next(Box<Formula>),
    Until(Box<Formula>, Box<Formula>),
    Top,
    And(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Finally(Box<Formula>),
    Globally(Box<Formula>),
    NextPow(u32, Box<Formula>),
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Formula {
        Formula::Atom(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn next(f: Formula) -> Formula {
        Formula::Next(Box::new(f))
    }

    /// `X^k f`, collapsing `k = 0` and `k = 1` to `f` and `X f`.
    pub fn next_pow(k: u32, f: Formula) -> Formula {
        match k {
            0 => f,
            1 => Formula::next(f),
            _ => Formula::NextPow(k, Box::new(f)),
        }
    }

    pub fn until(a: Formula, b: Formula) -> Formula {
        Formula::Until(Box::new(a), Box::new(b))
    }

    pub fn finally(f: Formula) -> Formula {
        Formula::Finally(Box::new(f))
    }

    pub fn globally(f: Formula) -> Formula {
        Formula::Globally(Box::new(f))
    }

    /// Left-nested conjunction; `tt` for an empty list.
    pub fn conjunction(items: impl IntoIterator<Item = Formula>) -> Formula {
        items.into_iter().reduce(Formula::and).unwrap_or(Formula::Top)
    }

    /// Rewrites all abbreviations into the core grammar
    /// `⊥ | p | ¬φ | φ ∨ φ | X φ | φ U φ`.
    pub fn desugar(&self) -> Formula {
        use Formula::*;
        let top = || Formula::not(Bottom);
        match self {
            Bottom => Bottom,
            Atom(p) => Atom(p.clone()),
            Not(f) => Formula::not(f.desugar()),
            Or(a, b) => Formula::or(a.desugar(), b.desugar()),
            Next(f) => Formula::next(f.desugar()),
            Until(a, b) => Formula::until(a.desugar(), b.desugar()),
            Top => top(),
            And(a, b) => Formula::not(Formula::or(Formula::not(a.desugar()), Formula::not(b.desugar()))),
            Implies(a, b) => Formula::or(Formula::not(a.desugar()), b.desugar()),
            Finally(f) => Formula::until(top(), f.desugar()),
            Globally(f) => Formula::not(Formula::until(top(), Formula::not(f.desugar()))),
            NextPow(k, f) => (0..*k).fold(f.desugar(), |acc, _| Formula::next(acc)),
        }
    }

    /// Names of all atoms occurring in the formula, sorted.
    pub fn atoms(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<String>) {
        use Formula::*;
        match self {
            Bottom | Top => {}
            Atom(p) => {
                out.insert(p.clone());
            }
            Not(f) | Next(f) | Finally(f) | Globally(f) | NextPow(_, f) => f.collect_atoms(out),
            Or(a, b) | Until(a, b) | And(a, b) | Implies(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    /// Fails with the first atom not in `alphabet`.
    pub fn check_atoms(&self, alphabet: &Alphabet) -> Result<()> {
        match self.atoms().into_iter().find(|a| alphabet.index_of(a).is_none()) {
            Some(a) => Err(Error::UnknownAtom(a)),
            None => Ok(()),
        }
    }

    /// Height of the syntax tree (atoms and constants have depth 0).
    pub fn depth(&self) -> usize {
        use Formula::*;
        match self {
            Bottom | Top | Atom(_) => 0,
            Not(f) | Next(f) | Finally(f) | Globally(f) | NextPow(_, f) => 1 + f.depth(),
            Or(a, b) | Until(a, b) | And(a, b) | Implies(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    fn precedence(&self) -> u8 {
        use Formula::*;
        match self {
            Implies(..) => 1,
            Or(..) => 2,
            And(..) => 3,
            Until(..) => 4,
            Not(_) | Next(_) | Finally(_) | Globally(_) => 5,
            NextPow(k, f) => match k {
                0 => f.precedence(),
                _ => 5,
            },
            Bottom | Top | Atom(_) => 6,
        }
    }

    /// Renders in the ASCII concrete syntax accepted by [`parse_ltl`].
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.write(&mut out);
        out
    }

    fn write_child(&self, out: &mut String, parens: bool) {
        if parens {
            out.push('(');
            self.write(out);
            out.push(')');
        } else {
            self.write(out);
        }
    }

    fn write(&self, out: &mut String) {
        use Formula::*;
        let prec = self.precedence();
        match self {
            Bottom => out.push_str("ff"),
            Top => out.push_str("tt"),
            Atom(p) => out.push_str(p),
            Not(f) => {
                out.push('!');
                f.write_child(out, f.precedence() < 5);
            }
            Next(f) | Finally(f) | Globally(f) => {
                out.push_str(match self {
                    Next(_) => "X ",
                    Finally(_) => "F ",
                    _ => "G ",
                });
                f.write_child(out, f.precedence() < 5);
            }
            NextPow(k, f) => {
                for _ in 0..*k {
                    out.push_str("X ");
                }
                f.write_child(out, *k > 0 && f.precedence() < 5);
            }
            // right-associative
            Until(a, b) | Implies(a, b) => {
                a.write_child(out, a.precedence() <= prec);
                out.push_str(if matches!(self, Until(..)) { " U " } else { " -> " });
                b.write_child(out, b.precedence() < prec);
            }
            // left-associative
            Or(a, b) | And(a, b) => {
                a.write_child(out, a.precedence() < prec);
                out.push_str(if matches!(self, Or(..)) { " | " } else { " & " });
                b.write_child(out, b.precedence() <= prec);
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Free-function form of [`Formula::render`].
pub fn render(f: &Formula) -> String {
    f.render()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Formula {
        Formula::atom("p")
    }
    fn q() -> Formula {
        Formula::atom("q")
    }

    #[test]
    fn render_examples() {
        assert_eq!(Formula::globally(Formula::finally(p())).render(), "G F p");
        assert_eq!(Formula::Bottom.render(), "ff");
        assert_eq!(Formula::until(p(), q()).render(), "p U q");
        assert_eq!(
            Formula::until(p(), Formula::or(q(), Formula::next(p()))).render(),
            "p U (q | X p)"
        );
        assert_eq!(Formula::not(Formula::globally(p())).render(), "!G p");
        assert_eq!(Formula::not(Formula::and(p(), q())).render(), "!(p & q)");
        assert_eq!(Formula::until(Formula::until(p(), q()), p()).render(), "(p U q) U p");
        assert_eq!(
            Formula::implies(Formula::implies(p(), q()), p()).render(),
            "(p -> q) -> p"
        );
        assert_eq!(Formula::next_pow(3, p()).render(), "X X X p");
    }

    #[test]
    fn desugar_is_core_only() {
        let f = Formula::globally(Formula::implies(p(), Formula::next_pow(2, Formula::Top)));
        fn core(f: &Formula) -> bool {
            use Formula::*;
            match f {
                Bottom | Atom(_) => true,
                Not(a) | Next(a) => core(a),
                Or(a, b) | Until(a, b) => core(a) && core(b),
                _ => false,
            }
        }
        assert!(core(&f.desugar()));
        assert_eq!(
            Formula::finally(p()).desugar(),
            Formula::until(Formula::not(Formula::Bottom), p())
        );
    }

    #[test]
    fn atoms_and_depth() {
        let f = Formula::until(p(), Formula::or(q(), Formula::next(p())));
        assert_eq!(f.atoms().into_iter().collect::<Vec<_>>(), vec!["p", "q"]);
        assert_eq!(f.depth(), 3);
        let ab = Alphabet::new(["p"]).unwrap();
        assert_eq!(f.check_atoms(&ab), Err(Error::UnknownAtom("q".into())));
    }
}
