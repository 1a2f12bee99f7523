//! Kripke structures: finite models whose infinite paths generate traces.
//!
//! Text format, one declaration per line:
//!
//! ```text
//! # comment
//! state l0 init {p}
//! state l1 {}
//! edge l0 l1
//! edge l1 l0
//! ```

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::alphabet::{AlphabetRef, Letter};
use crate::automata::{self, BuchiAutomaton};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KripkeStructure {
    alphabet: AlphabetRef,
    names: Vec<String>,
    labels: Vec<Letter>,
    initial: Vec<usize>,
    successors: Vec<Vec<usize>>,
}

impl KripkeStructure {
    pub fn new(alphabet: AlphabetRef) -> KripkeStructure {
        KripkeStructure {
            alphabet,
            names: Vec::new(),
            labels: Vec::new(),
            initial: Vec::new(),
            successors: Vec::new(),
        }
    }

    pub fn add_state(&mut self, name: impl Into<String>, label: Letter, initial: bool) -> usize {
        let id = self.names.len();
        self.names.push(name.into());
        self.labels.push(label);
        self.successors.push(Vec::new());
        if initial {
            self.initial.push(id);
        }
        id
    }

    pub fn add_edge(&mut self, from: usize, to: usize) {
        if !self.successors[from].contains(&to) {
            self.successors[from].push(to);
            self.successors[from].sort_unstable();
        }
    }

    pub fn alphabet(&self) -> &AlphabetRef {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, s: usize) -> &str {
        &self.names[s]
    }

    pub fn label(&self, s: usize) -> Letter {
        self.labels[s]
    }

    pub fn initial(&self) -> &[usize] {
        &self.initial
    }

    pub fn successors(&self, s: usize) -> &[usize] {
        &self.successors[s]
    }

    /// Checks that some state is initial and every state has a successor.
    pub fn validate(&self) -> Result<()> {
        if self.initial.is_empty() {
            return Err(Error::EmptyInitialSet);
        }
        if let Some(s) = (0..self.num_states()).find(|&s| self.successors[s].is_empty()) {
            return Err(Error::NotLeftTotal(self.names[s].clone()));
        }
        Ok(())
    }

    /// The Büchi automaton accepting exactly the traces of this structure.
    pub fn to_buchi(&self) -> Result<BuchiAutomaton> {
        automata::from_kripke(self)
    }

    pub fn parse(text: &str, alphabet: AlphabetRef) -> Result<KripkeStructure> {
        let mut m = KripkeStructure::new(alphabet.clone());
        let mut ids: HashMap<String, usize> = HashMap::new();
        let mut edges: Vec<(usize, String, String)> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let lineno = lineno + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |msg: &str| Error::InvalidKripke(format!("line {lineno}: {msg}"));
            let (keyword, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
            match keyword {
                "state" => {
                    let rest = rest.trim();
                    let open = rest.find('{').ok_or_else(|| bad("missing label `{...}`"))?;
                    let mut head = rest[..open].split_whitespace();
                    let name = head.next().ok_or_else(|| bad("missing state name"))?;
                    let initial = match head.next() {
                        None => false,
                        Some("init") => true,
                        Some(other) => return Err(bad(&format!("unexpected `{other}`"))),
                    };
                    if head.next().is_some() {
                        return Err(bad("too many fields"));
                    }
                    let label = alphabet
                        .parse_letter(rest[open..].trim())
                        .map_err(|e| bad(&e.to_string()))?;
                    if ids.contains_key(name) {
                        return Err(bad(&format!("duplicate state `{name}`")));
                    }
                    let id = m.add_state(name, label, initial);
                    ids.insert(name.to_string(), id);
                }
                "edge" => {
                    let parts: Vec<&str> = rest.split_whitespace().collect();
                    if parts.len() != 2 {
                        return Err(bad("expected `edge <from> <to>`"));
                    }
                    edges.push((lineno, parts[0].to_string(), parts[1].to_string()));
                }
                other => return Err(bad(&format!("unknown declaration `{other}`"))),
            }
        }
        for (lineno, from, to) in edges {
            let lookup = |n: &str| {
                ids.get(n)
                    .copied()
                    .ok_or_else(|| Error::InvalidKripke(format!("line {lineno}: unknown state `{n}`")))
            };
            let (f, t) = (lookup(&from)?, lookup(&to)?);
            m.add_edge(f, t);
        }
        Ok(m)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for s in 0..self.num_states() {
            let init = if self.initial.contains(&s) { " init" } else { "" };
            let _ = writeln!(
                out,
                "state {}{} {}",
                self.names[s],
                init,
                self.alphabet.format_letter(self.labels[s])
            );
        }
        for s in 0..self.num_states() {
            for &t in &self.successors[s] {
                let _ = writeln!(out, "edge {} {}", self.names[s], self.names[t]);
            }
        }
        out
    }

    /// Every ultimately periodic trace generated by a path with a stem of at
    /// most `max_stem` states followed by a simple-or-not cycle of at most
    /// `max_cycle` states. Normalized and deduplicated.
    pub fn bounded_traces(&self, max_stem: usize, max_cycle: usize) -> Vec<crate::formula::UPTrace> {
        use crate::formula::UPTrace;
        use std::collections::BTreeSet;
        let mut out = BTreeSet::new();
        // all paths of length ≤ max_stem + max_cycle from initial states
        let mut paths: Vec<Vec<usize>> = self.initial.iter().map(|&s| vec![s]).collect();
        let max_len = max_stem + max_cycle;
        while let Some(path) = paths.pop() {
            let last = *path.last().unwrap();
            // close a cycle: the path's suffix starting at j loops back via last → path[j]
            for j in 0..path.len() {
                if j <= max_stem && path.len() - j <= max_cycle && self.successors[last].contains(&path[j]) {
                    let labels: Vec<Letter> = path.iter().map(|&s| self.labels[s]).collect();
                    let pi = UPTrace::new(labels[..j].to_vec(), labels[j..].to_vec()).expect("nonempty cycle");
                    out.insert(pi.normalized());
                }
            }
            if path.len() < max_len {
                for &t in &self.successors[last] {
                    let mut p = path.clone();
                    p.push(t);
                    paths.push(p);
                }
            }
        }
        out.into_iter().collect()
    }
}
