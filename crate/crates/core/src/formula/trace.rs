use std::collections::BTreeSet;

use crate::alphabet::{Alphabet, Letter};
use crate::error::{Error, Result};

/// An ultimately periodic trace `prefix · period^ω`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UPTrace {
    prefix: Vec<Letter>,
    period: Vec<Letter>,
}

impl UPTrace {
    pub fn new(prefix: Vec<Letter>, period: Vec<Letter>) -> Result<UPTrace> {
        if period.is_empty() {
            return Err(Error::Parse("trace period must be nonempty".into()));
        }
        Ok(UPTrace { prefix, period })
    }

    pub fn prefix(&self) -> &[Letter] {
        &self.prefix
    }

    pub fn period(&self) -> &[Letter] {
        &self.period
    }

    /// Number of lasso positions, `|prefix| + |period|`.
    pub fn positions(&self) -> usize {
        self.prefix.len() + self.period.len()
    }

    /// Lasso successor of position `i`.
    pub fn successor(&self, i: usize) -> usize {
        if i + 1 < self.positions() {
            i + 1
        } else {
            self.prefix.len()
        }
    }

    /// Letter at lasso position `i < positions()`.
    pub fn letter_at_position(&self, i: usize) -> Letter {
        if i < self.prefix.len() {
            self.prefix[i]
        } else {
            self.period[i - self.prefix.len()]
        }
    }

    /// Letter at time step `t` of the infinite trace.
    pub fn letter(&self, t: usize) -> Letter {
        if t < self.prefix.len() {
            self.prefix[t]
        } else {
            self.period[(t - self.prefix.len()) % self.period.len()]
        }
    }

    /// The suffix `π¹`, dropping the first letter.
    pub fn tail(&self) -> UPTrace {
        if self.prefix.is_empty() {
            let mut period = self.period.clone();
            period.rotate_left(1);
            UPTrace {
                prefix: Vec::new(),
                period,
            }
        } else {
            UPTrace {
                prefix: self.prefix[1..].to_vec(),
                period: self.period.clone(),
            }
        }
    }

    /// Minimal prefix and primitive period denoting the same trace.
    pub fn normalized(&self) -> UPTrace {
        let mut prefix = self.prefix.clone();
        let mut period = primitive_root(&self.period);
        while let (Some(&last), Some(&plast)) = (prefix.last(), period.last()) {
            if last != plast {
                break;
            }
            prefix.pop();
            period.rotate_right(1);
        }
        UPTrace { prefix, period }
    }

    /// Equality of the denoted infinite traces.
    pub fn same_trace(&self, other: &UPTrace) -> bool {
        self.normalized() == other.normalized()
    }

    /// Every normalized trace with `|prefix| ≤ max_prefix` and
    /// `1 ≤ |period| ≤ max_period`, deduplicated and sorted.
    pub fn enumerate(alphabet: &Alphabet, max_prefix: usize, max_period: usize) -> Vec<UPTrace> {
        let letters: Vec<Letter> = alphabet.letters().collect();
        let mut out = BTreeSet::new();
        for plen in 0..=max_prefix {
            for prefix in words(&letters, plen) {
                for qlen in 1..=max_period {
                    for period in words(&letters, qlen) {
                        out.insert(
                            UPTrace {
                                prefix: prefix.clone(),
                                period,
                            }
                            .normalized(),
                        );
                    }
                }
            }
        }
        out.into_iter().collect()
    }

    /// Parses `prefix ; period`, letters separated by whitespace, e.g.
    /// `{} ; {p}` or `; {p,q} {}`. An empty prefix may also be written `ε`.
    pub fn parse(text: &str, alphabet: &Alphabet) -> Result<UPTrace> {
        let (pre, per) = text
            .split_once(';')
            .ok_or_else(|| Error::Parse(format!("trace `{text}` lacks `;`")))?;
        let prefix = parse_word(pre, alphabet)?;
        let period = parse_word(per, alphabet)?;
        UPTrace::new(prefix, period)
    }

    pub fn display(&self, alphabet: &Alphabet) -> String {
        let word = |w: &[Letter]| {
            w.iter()
                .map(|l| alphabet.format_letter(*l))
                .collect::<Vec<_>>()
                .join(" ")
        };
        if self.prefix.is_empty() {
            format!("; {}", word(&self.period))
        } else {
            format!("{} ; {}", word(&self.prefix), word(&self.period))
        }
    }
}

fn parse_word(text: &str, alphabet: &Alphabet) -> Result<Vec<Letter>> {
    let t = text.trim();
    if t.is_empty() || t == "ε" {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut rest = t;
    while !rest.is_empty() {
        let close = rest
            .find('}')
            .ok_or_else(|| Error::Parse(format!("unterminated letter in `{t}`")))?;
        out.push(alphabet.parse_letter(&rest[..=close])?);
        rest = rest[close + 1..].trim_start();
    }
    Ok(out)
}

fn words(letters: &[Letter], len: usize) -> Vec<Vec<Letter>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w| {
                letters.iter().map(move |&l| {
                    let mut w = w.clone();
                    w.push(l);
                    w
                })
            })
            .collect();
    }
    out
}

fn primitive_root(period: &[Letter]) -> Vec<Letter> {
    let n = period.len();
    for d in 1..=n {
        if n.is_multiple_of(d) && (d..n).all(|i| period[i] == period[i - d]) {
            return period[..d].to_vec();
        }
    }
    period.to_vec()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::new(["p"]).unwrap()
    }

    fn t(s: &str) -> UPTrace {
        UPTrace::parse(s, &ab()).unwrap()
    }

    #[test]
    fn normalization() {
        assert_eq!(t("; {p} {p}").normalized(), t("; {p}"));
        assert_eq!(t("{p} ; {p}").normalized(), t("; {p}"));
        assert_eq!(t("{} {p} ; {} {p}").normalized(), t("; {} {p}"));
        assert_eq!(t("{p} {} ; {p} {}").normalized(), t("; {p} {}"));
        assert_eq!(t("{} ; {p}").normalized(), t("{} ; {p}"));
        assert!(t("{p} ; {} {p}").same_trace(&t("; {p} {}")));
    }

    #[test]
    fn tail_rotates_period() {
        assert_eq!(t("; {p} {}").tail(), t("; {} {p}"));
        assert_eq!(t("{} ; {p}").tail(), t("; {p}"));
    }

    #[test]
    fn enumerate_is_normalized_and_distinct() {
        let all = UPTrace::enumerate(&ab(), 2, 2);
        for (i, a) in all.iter().enumerate() {
            assert_eq!(&a.normalized(), a);
            for b in &all[i + 1..] {
                assert!(!a.same_trace(b));
            }
        }
        // brute force: distinct traces by their first 12 letters
        let mut seen = BTreeSet::new();
        for a in &all {
            let w: Vec<Letter> = (0..12).map(|i| a.letter(i)).collect();
            assert!(seen.insert(w));
        }
    }

    #[test]
    fn parse_and_display() {
        let ab = Alphabet::new(["p", "q"]).unwrap();
        let tr = UPTrace::parse("{} {p,q} ; {q}", &ab).unwrap();
        assert_eq!(tr.display(&ab), "{} {p,q} ; {q}");
        assert_eq!(UPTrace::parse(tr.display(&ab).as_str(), &ab).unwrap(), tr);
        assert_eq!(UPTrace::parse("ε ; {p}", &ab).unwrap().prefix().len(), 0);
        assert!(UPTrace::parse("{p} ;", &ab).is_err());
        assert!(UPTrace::parse("{p}", &ab).is_err());
        assert!(UPTrace::parse("; {r}", &ab).is_err());
    }
}
