//! Atomic propositions, letters over `2^AP`, and propositional cubes.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Upper bound on the number of propositions in an alphabet. Letters are
/// stored as `u32` bitmasks, and Büchi-Mealy automata double the set.
pub const MAX_PROPS: usize = 16;

/// A letter of `2^AP`: bit `i` is set iff proposition `i` holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Letter(pub u32);

impl Letter {
    pub const EMPTY: Letter = Letter(0);

    pub fn contains(self, prop: usize) -> bool {
        self.0 & (1 << prop) != 0
    }

    pub fn with(self, prop: usize) -> Letter {
        Letter(self.0 | (1 << prop))
    }
}

/// Ordered, finite, nonempty set of atomic propositions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    props: Vec<String>,
}

/// Shared handle; automata and formulae over the same alphabet share one.
pub type AlphabetRef = Arc<Alphabet>;

pub(crate) fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_lowercase() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
}

impl Alphabet {
    pub fn new<I, S>(props: I) -> Result<Alphabet>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let props: Vec<String> = props.into_iter().map(Into::into).collect();
        if props.is_empty() {
            return Err(Error::InvalidAlphabet("alphabet must be nonempty".into()));
        }
        if props.len() > MAX_PROPS {
            return Err(Error::InvalidAlphabet(format!(
                "at most {MAX_PROPS} propositions are supported, got {}",
                props.len()
            )));
        }
        for (i, p) in props.iter().enumerate() {
            if !is_identifier(p) || p == "tt" || p == "ff" {
                return Err(Error::InvalidAlphabet(format!("`{p}` is not a valid proposition name")));
            }
            if props[..i].contains(p) {
                return Err(Error::InvalidAlphabet(format!("duplicate proposition `{p}`")));
            }
        }
        Ok(Alphabet { props })
    }

    /// Convenience constructor returning a shared handle.
    pub fn shared<I, S>(props: I) -> Result<AlphabetRef>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Alphabet::new(props).map(Arc::new)
    }

    pub fn len(&self) -> usize {
        self.props.len()
    }

    pub fn is_empty(&self) -> bool {
        self.props.is_empty()
    }

    pub fn props(&self) -> &[String] {
        &self.props
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.props.iter().position(|p| p == name)
    }

    pub fn name(&self, prop: usize) -> &str {
        &self.props[prop]
    }

    /// Number of letters, `2^|AP|`.
    pub fn letter_count(&self) -> usize {
        1usize << self.props.len()
    }

    /// All letters in ascending bitmask order.
    pub fn letters(&self) -> impl DoubleEndedIterator<Item = Letter> + Clone {
        (0..self.letter_count() as u32).map(Letter)
    }

    pub fn full_mask(&self) -> u32 {
        mask(self.props.len())
    }

    /// Renders a letter as `{p,q}` (or `{}`).
    pub fn format_letter(&self, letter: Letter) -> String {
        let names: Vec<&str> = (0..self.len())
            .filter(|&i| letter.contains(i))
            .map(|i| self.name(i))
            .collect();
        format!("{{{}}}", names.join(","))
    }

    /// Parses `{}` / `{p,q}` into a letter.
    pub fn parse_letter(&self, text: &str) -> Result<Letter> {
        let t = text.trim();
        let inner = t
            .strip_prefix('{')
            .and_then(|s| s.strip_suffix('}'))
            .ok_or_else(|| Error::Parse(format!("malformed letter `{t}`")))?;
        let mut letter = Letter::EMPTY;
        for name in inner.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let idx = self
                .index_of(name)
                .ok_or_else(|| Error::UnknownAtom(name.to_string()))?;
            letter = letter.with(idx);
        }
        Ok(letter)
    }

    /// The alphabet `AP ⊎ AP_out` used for Büchi-Mealy automata.
    pub fn doubled(&self) -> Result<Alphabet> {
        let mut props = self.props.clone();
        props.extend(self.props.iter().map(|p| format!("{p}_out")));
        Alphabet::new(props)
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.props.join(","))
    }
}

pub(crate) fn mask(n: usize) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

/// A conjunction of literals: `pos` holds the propositions required true,
/// `neg` those required false. The two masks are always disjoint, so a cube
/// denotes at least one letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Cube {
    pos: u32,
    neg: u32,
}

impl Cube {
    /// The unconstrained cube `tt`.
    pub const TOP: Cube = Cube { pos: 0, neg: 0 };

    pub fn new(pos: u32, neg: u32) -> Option<Cube> {
        (pos & neg == 0).then_some(Cube { pos, neg })
    }

    /// The cube matching exactly `letter` over `n` propositions.
    pub fn letter(letter: Letter, n: usize) -> Cube {
        let m = mask(n);
        Cube {
            pos: letter.0 & m,
            neg: !letter.0 & m,
        }
    }

    pub fn literal(prop: usize, positive: bool) -> Cube {
        if positive {
            Cube { pos: 1 << prop, neg: 0 }
        } else {
            Cube { pos: 0, neg: 1 << prop }
        }
    }

    pub fn pos(self) -> u32 {
        self.pos
    }

    pub fn neg(self) -> u32 {
        self.neg
    }

    pub fn care(self) -> u32 {
        self.pos | self.neg
    }

    pub fn is_top(self) -> bool {
        self.care() == 0
    }

    pub fn matches(self, letter: Letter) -> bool {
        letter.0 & self.pos == self.pos && letter.0 & self.neg == 0
    }

    pub fn and(self, other: Cube) -> Option<Cube> {
        Cube::new(self.pos | other.pos, self.neg | other.neg)
    }

    pub fn intersects(self, other: Cube) -> bool {
        self.and(other).is_some()
    }

    /// `self ⊆ other` as letter sets.
    pub fn implies(self, other: Cube) -> bool {
        self.pos & other.pos == other.pos && self.neg & other.neg == other.neg
    }

    /// Smallest letter (as a bitmask) in the cube.
    pub fn min_letter(self) -> Letter {
        Letter(self.pos)
    }

    /// Drops every literal outside `keep`.
    pub fn restrict(self, keep: u32) -> Cube {
        Cube {
            pos: self.pos & keep,
            neg: self.neg & keep,
        }
    }

    /// Moves every literal `k` positions up.
    pub fn shift(self, k: usize) -> Cube {
        Cube {
            pos: self.pos << k,
            neg: self.neg << k,
        }
    }

    /// Moves every literal `k` positions down, discarding the low `k`.
    pub fn unshift(self, k: usize) -> Cube {
        Cube {
            pos: self.pos >> k,
            neg: self.neg >> k,
        }
    }

    /// Letters of the cube over `n` propositions, ascending.
    pub fn letters(self, n: usize) -> impl Iterator<Item = Letter> {
        let free = mask(n) & !self.care();
        let pos = self.pos;
        // Enumerate submasks of `free` in ascending order.
        let mut sub: Option<u32> = Some(0);
        std::iter::from_fn(move || {
            let cur = sub?;
            sub = if cur == free {
                None
            } else {
                Some(((cur | !free).wrapping_add(1)) & free)
            };
            Some(Letter(pos | cur))
        })
    }

    /// Number of letters of the cube over `n` propositions.
    pub fn size(self, n: usize) -> u64 {
        1u64 << (n as u32 - (mask(n) & self.care()).count_ones())
    }

    /// If `self ∪ other` is itself a cube, returns it.
    pub fn merge(self, other: Cube) -> Option<Cube> {
        if self.implies(other) {
            return Some(other);
        }
        if other.implies(self) {
            return Some(self);
        }
        if self.care() != other.care() {
            return None;
        }
        let diff = self.pos ^ other.pos;
        if diff.count_ones() == 1 {
            Some(Cube {
                pos: self.pos & !diff,
                neg: self.neg & !diff,
            })
        } else {
            None
        }
    }

    /// HOA-style label over proposition indices, e.g. `0&!1`, or `t`.
    pub fn hoa_label(self) -> String {
        if self.is_top() {
            return "t".into();
        }
        let mut parts = Vec::new();
        for i in 0..32 {
            if self.pos & (1 << i) != 0 {
                parts.push(format!("{i}"));
            } else if self.neg & (1 << i) != 0 {
                parts.push(format!("!{i}"));
            }
        }
        parts.join("&")
    }

    /// Human-readable label using proposition names.
    pub fn display(self, alphabet: &Alphabet) -> String {
        if self.is_top() {
            return "tt".into();
        }
        let mut parts = Vec::new();
        for i in 0..alphabet.len() {
            if self.pos & (1 << i) != 0 {
                parts.push(alphabet.name(i).to_string());
            } else if self.neg & (1 << i) != 0 {
                parts.push(format!("!{}", alphabet.name(i)));
            }
        }
        parts.join(" & ")
    }
}

/// Whether the union of `cubes` covers every letter of `target`.
pub fn cubes_cover(target: Cube, cubes: &[Cube]) -> bool {
    let relevant: Vec<Cube> = cubes.iter().copied().filter(|c| c.intersects(target)).collect();
    cover_rec(target, &relevant)
}

fn cover_rec(target: Cube, cubes: &[Cube]) -> bool {
    if cubes.iter().any(|c| target.implies(*c)) {
        return true;
    }
    // pick a variable free in target but constrained by some intersecting cube
    let mut split = None;
    for c in cubes {
        if !c.intersects(target) {
            continue;
        }
        let extra = c.care() & !target.care();
        if extra != 0 {
            split = Some(extra.trailing_zeros() as usize);
            break;
        }
    }
    let Some(v) = split else {
        return false;
    };
    [true, false].into_iter().all(|positive| {
        let t = target.and(Cube::literal(v, positive)).expect("free variable");
        let sub: Vec<Cube> = cubes.iter().copied().filter(|c| c.intersects(t)).collect();
        cover_rec(t, &sub)
    })
}

/// A small cube cover of a set of letters over `n` propositions
/// (prime implicants, then a greedy cover).
pub fn cover_letters(letters: &[Letter], n: usize) -> Vec<Cube> {
    if letters.is_empty() {
        return Vec::new();
    }
    let full = 1usize << n;
    let mut member = vec![false; full];
    for l in letters {
        member[l.0 as usize] = true;
    }
    if member.iter().all(|&m| m) {
        return vec![Cube::TOP];
    }
    // prime implicants by iterated merging
    let mut current: Vec<Cube> = letters.iter().map(|&l| Cube::letter(l, n)).collect();
    current.sort();
    current.dedup();
    let mut primes: Vec<Cube> = Vec::new();
    while !current.is_empty() {
        let mut merged_flags = vec![false; current.len()];
        let mut next = Vec::new();
        for i in 0..current.len() {
            for j in (i + 1)..current.len() {
                let (a, b) = (current[i], current[j]);
                if a.care() == b.care() && (a.pos ^ b.pos).count_ones() == 1 {
                    if let Some(m) = a.merge(b) {
                        next.push(m);
                        merged_flags[i] = true;
                        merged_flags[j] = true;
                    }
                }
            }
        }
        for (i, c) in current.iter().enumerate() {
            if !merged_flags[i] {
                primes.push(*c);
            }
        }
        next.sort();
        next.dedup();
        current = next;
    }
    // greedy set cover, largest first; ties by cube order
    let mut uncovered: Vec<Letter> = letters.to_vec();
    uncovered.sort();
    uncovered.dedup();
    let mut chosen = Vec::new();
    while !uncovered.is_empty() {
        let best = primes
            .iter()
            .copied()
            .max_by_key(|c| {
                let count = uncovered.iter().filter(|l| c.matches(**l)).count();
                (count, std::cmp::Reverse(*c))
            })
            .expect("primes cover all letters");
        uncovered.retain(|l| !best.matches(*l));
        chosen.push(best);
    }
    chosen.sort();
    chosen
}
