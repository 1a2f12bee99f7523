//! A subset of the Hanoi Omega-Automata format (v1): state-based Büchi
//! acceptance, explicit edge labels over AP indices.

use std::fmt::Write as _;
use std::sync::Arc;

use super::{simplify_cubes, BuchiAutomaton};
use crate::alphabet::{Alphabet, Cube};
use crate::error::{Error, Result};

/// An automaton with the optional comment headers this crate reads and writes:
/// `/* label: ... */` names an epistemic state, `/* buchi-mealy: k */` marks
/// the first `k` propositions as the input component.
#[derive(Debug, Clone, PartialEq)]
pub struct HoaDocument {
    pub automaton: BuchiAutomaton,
    pub label: Option<String>,
    pub mealy_inputs: Option<usize>,
}

impl HoaDocument {
    pub fn new(automaton: BuchiAutomaton) -> HoaDocument {
        HoaDocument {
            automaton,
            label: None,
            mealy_inputs: None,
        }
    }

    pub fn render(&self) -> String {
        let a = &self.automaton;
        let ab = a.alphabet();
        let mut out = String::from("HOA: v1\n");
        if let Some(label) = &self.label {
            let _ = writeln!(out, "/* label: {} */", label.replace("*/", "* /"));
        }
        if let Some(k) = self.mealy_inputs {
            let _ = writeln!(out, "/* buchi-mealy: {k} */");
        }
        let _ = writeln!(out, "States: {}", a.num_states());
        for &q in a.initial() {
            let _ = writeln!(out, "Start: {q}");
        }
        let _ = write!(out, "AP: {}", ab.len());
        for name in ab.props() {
            let _ = write!(out, " \"{name}\"");
        }
        out.push('\n');
        out.push_str(
            "acc-name: Buchi\nAcceptance: 1 Inf(0)\nproperties: trans-labels explicit-labels state-acc\n--BODY--\n",
        );
        for q in 0..a.num_states() {
            let acc = if a.is_accepting(q) { " {0}" } else { "" };
            let _ = writeln!(out, "State: {q}{acc}");
            let mut edges = a.edges(q).to_vec();
            edges.sort_by_key(|e| (e.target, e.guard));
            for e in edges {
                let _ = writeln!(out, "[{}] {}", e.guard.hoa_label(), e.target);
            }
        }
        out.push_str("--END--\n");
        out
    }
}

/// HOA text for `a` without comment headers.
pub fn to_hoa(a: &BuchiAutomaton) -> String {
    HoaDocument::new(a.clone()).render()
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Header(String),
    Int(usize),
    Str(String),
    Ident(String),
    Punct(char),
}

fn hoa_err(msg: impl Into<String>) -> Error {
    Error::Hoa(msg.into())
}

/// Splits off comments, returning the remaining text and the comment bodies.
fn strip_comments(text: &str) -> Result<(String, Vec<String>)> {
    let mut rest = text;
    let mut plain = String::new();
    let mut comments = Vec::new();
    while let Some(start) = rest.find("/*") {
        // a `/*` inside a string literal is not a comment
        let before = &rest[..start];
        if before.matches('"').count() % 2 == 1 {
            let close = rest[start..].find('"').ok_or_else(|| hoa_err("unterminated string"))?;
            plain.push_str(&rest[..start + close + 1]);
            rest = &rest[start + close + 1..];
            continue;
        }
        let end = rest[start + 2..]
            .find("*/")
            .ok_or_else(|| hoa_err("unterminated comment"))?;
        plain.push_str(before);
        plain.push(' ');
        comments.push(rest[start + 2..start + 2 + end].trim().to_string());
        rest = &rest[start + 2 + end + 2..];
    }
    plain.push_str(rest);
    Ok((plain, comments))
}

fn tokenize(text: &str) -> Result<Vec<Tok>> {
    let mut toks = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c == '"' {
            let mut s = String::new();
            i += 1;
            while i < chars.len() && chars[i] != '"' {
                if chars[i] == '\\' && i + 1 < chars.len() {
                    i += 1;
                }
                s.push(chars[i]);
                i += 1;
            }
            if i == chars.len() {
                return Err(hoa_err("unterminated string"));
            }
            i += 1;
            toks.push(Tok::Str(s));
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            toks.push(Tok::Int(s.parse().map_err(|_| hoa_err(format!("bad integer `{s}`")))?));
        } else if c.is_alphabetic() || c == '_' || c == '-' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '-') {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            if i < chars.len() && chars[i] == ':' {
                i += 1;
                toks.push(Tok::Header(s));
            } else {
                toks.push(Tok::Ident(s));
            }
        } else if "[]{}()!&|@".contains(c) {
            toks.push(Tok::Punct(c));
            i += 1;
        } else {
            return Err(hoa_err(format!("unexpected character `{c}`")));
        }
    }
    Ok(toks)
}

enum Label {
    Const(bool),
    Prop(usize),
    Not(Box<Label>),
    And(Box<Label>, Box<Label>),
    Or(Box<Label>, Box<Label>),
}

struct LabelParser<'a> {
    toks: &'a [Tok],
    pos: usize,
    props: usize,
}

impl LabelParser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn or(&mut self) -> Result<Label> {
        let mut l = self.and()?;
        while self.peek() == Some(&Tok::Punct('|')) {
            self.pos += 1;
            l = Label::Or(Box::new(l), Box::new(self.and()?));
        }
        Ok(l)
    }

    fn and(&mut self) -> Result<Label> {
        let mut l = self.unary()?;
        while self.peek() == Some(&Tok::Punct('&')) {
            self.pos += 1;
            l = Label::And(Box::new(l), Box::new(self.unary()?));
        }
        Ok(l)
    }

    fn unary(&mut self) -> Result<Label> {
        let tok = self.peek().cloned().ok_or_else(|| hoa_err("unexpected end of label"))?;
        self.pos += 1;
        match tok {
            Tok::Punct('!') => Ok(Label::Not(Box::new(self.unary()?))),
            Tok::Punct('(') => {
                let l = self.or()?;
                if self.peek() != Some(&Tok::Punct(')')) {
                    return Err(hoa_err("expected `)` in label"));
                }
                self.pos += 1;
                Ok(l)
            }
            Tok::Ident(s) if s == "t" => Ok(Label::Const(true)),
            Tok::Ident(s) if s == "f" => Ok(Label::Const(false)),
            Tok::Int(i) if i < self.props => Ok(Label::Prop(i)),
            Tok::Int(i) => Err(hoa_err(format!("AP index {i} out of range"))),
            other => Err(hoa_err(format!("unexpected {other:?} in label"))),
        }
    }
}

/// Disjunctive normal form of `l` (or of `¬l` when `neg`).
fn dnf(l: &Label, neg: bool) -> Vec<Cube> {
    match l {
        Label::Const(b) => {
            if *b != neg {
                vec![Cube::TOP]
            } else {
                vec![]
            }
        }
        Label::Prop(i) => vec![Cube::literal(*i, !neg)],
        Label::Not(x) => dnf(x, !neg),
        Label::And(x, y) | Label::Or(x, y) => {
            let conj = matches!(l, Label::And(..)) != neg;
            let (dx, dy) = (dnf(x, neg), dnf(y, neg));
            if conj {
                dx.iter()
                    .flat_map(|a| dy.iter().filter_map(move |b| a.and(*b)))
                    .collect()
            } else {
                dx.into_iter().chain(dy).collect()
            }
        }
    }
}

pub fn parse_hoa(text: &str) -> Result<HoaDocument> {
    let (plain, comments) = strip_comments(text)?;
    let mut label = None;
    let mut mealy_inputs = None;
    for c in &comments {
        if let Some(rest) = c.strip_prefix("label:") {
            label = Some(rest.trim().to_string());
        } else if let Some(rest) = c.strip_prefix("buchi-mealy:") {
            mealy_inputs = Some(
                rest.trim()
                    .parse::<usize>()
                    .map_err(|_| hoa_err(format!("bad buchi-mealy count `{}`", rest.trim())))?,
            );
        }
    }
    let toks = tokenize(&plain)?;
    let body_at = toks
        .iter()
        .position(|t| *t == Tok::Ident("--BODY--".into()))
        .ok_or_else(|| hoa_err("missing --BODY--"))?;
    let end_at = toks
        .iter()
        .position(|t| *t == Tok::Ident("--END--".into()))
        .ok_or_else(|| hoa_err("missing --END--"))?;
    if end_at < body_at {
        return Err(hoa_err("--END-- before --BODY--"));
    }

    // headers
    let header = &toks[..body_at];
    if header.first() != Some(&Tok::Header("HOA".into())) || header.get(1) != Some(&Tok::Ident("v1".into())) {
        return Err(hoa_err("expected `HOA: v1` first"));
    }
    let mut states: Option<usize> = None;
    let mut starts: Vec<usize> = Vec::new();
    let mut aps: Option<Vec<String>> = None;
    let mut all_accepting = false;
    let mut saw_acceptance = false;
    let mut i = 2;
    while i < header.len() {
        let Tok::Header(name) = &header[i] else {
            return Err(hoa_err(format!("unexpected {:?} in header", header[i])));
        };
        let mut j = i + 1;
        while j < header.len() && !matches!(header[j], Tok::Header(_)) {
            j += 1;
        }
        let args = &header[i + 1..j];
        match name.as_str() {
            "States" => match args {
                [Tok::Int(n)] => states = Some(*n),
                _ => return Err(hoa_err("bad States header")),
            },
            "Start" => match args {
                [Tok::Int(q)] => starts.push(*q),
                _ => return Err(hoa_err("only single-state Start headers are supported")),
            },
            "AP" => {
                let Some((Tok::Int(n), names)) = args.split_first() else {
                    return Err(hoa_err("bad AP header"));
                };
                let names: Vec<String> = names
                    .iter()
                    .map(|t| match t {
                        Tok::Str(s) => Ok(s.clone()),
                        _ => Err(hoa_err("AP names must be quoted")),
                    })
                    .collect::<Result<_>>()?;
                if names.len() != *n {
                    return Err(hoa_err(format!("AP header declares {n} names, lists {}", names.len())));
                }
                aps = Some(names);
            }
            "Acceptance" => {
                saw_acceptance = true;
                let inf0 = [
                    Tok::Int(1),
                    Tok::Ident("Inf".into()),
                    Tok::Punct('('),
                    Tok::Int(0),
                    Tok::Punct(')'),
                ];
                if args == inf0 {
                    all_accepting = false;
                } else if args == [Tok::Int(0), Tok::Ident("t".into())] {
                    all_accepting = true;
                } else {
                    return Err(hoa_err("only `Acceptance: 1 Inf(0)` (Büchi) is supported"));
                }
            }
            "acc-name" => match args.first() {
                Some(Tok::Ident(s)) if s == "Buchi" || s == "all" => {}
                _ => return Err(hoa_err("only Büchi acceptance is supported")),
            },
            _ => {}
        }
        i = j;
    }
    if !saw_acceptance {
        return Err(hoa_err("missing Acceptance header"));
    }
    let aps = aps.ok_or_else(|| hoa_err("missing AP header"))?;
    let alphabet = Arc::new(Alphabet::new(aps).map_err(|e| hoa_err(e.to_string()))?);
    if let Some(k) = mealy_inputs {
        if 2 * k != alphabet.len() {
            return Err(hoa_err(format!(
                "buchi-mealy header says {k} inputs, but AP has {} names",
                alphabet.len()
            )));
        }
    }
    let n_props = alphabet.len();

    // body
    let body = &toks[body_at + 1..end_at];
    let mut declared: Vec<Option<(bool, Vec<(Vec<Cube>, usize)>)>> = Vec::new();
    let mut pos = 0;
    while pos < body.len() {
        if body[pos] != Tok::Header("State".into()) {
            return Err(hoa_err(format!("expected `State:`, found {:?}", body[pos])));
        }
        pos += 1;
        let Some(Tok::Int(q)) = body.get(pos) else {
            return Err(hoa_err("expected state number"));
        };
        let q = *q;
        pos += 1;
        if let Some(Tok::Str(_)) = body.get(pos) {
            pos += 1;
        }
        let mut accepting = all_accepting;
        if body.get(pos) == Some(&Tok::Punct('{')) {
            pos += 1;
            while let Some(Tok::Int(s)) = body.get(pos) {
                if *s != 0 {
                    return Err(hoa_err(format!("acceptance set {s} out of range")));
                }
                accepting = true;
                pos += 1;
            }
            if body.get(pos) != Some(&Tok::Punct('}')) {
                return Err(hoa_err("expected `}`"));
            }
            pos += 1;
        }
        let mut edges = Vec::new();
        while pos < body.len() && body[pos] != Tok::Header("State".into()) {
            if body[pos] != Tok::Punct('[') {
                return Err(hoa_err("only explicitly labelled edges are supported"));
            }
            let mut lp = LabelParser {
                toks: body,
                pos: pos + 1,
                props: n_props,
            };
            let lab = lp.or()?;
            pos = lp.pos;
            if body.get(pos) != Some(&Tok::Punct(']')) {
                return Err(hoa_err("expected `]`"));
            }
            pos += 1;
            let Some(Tok::Int(t)) = body.get(pos) else {
                return Err(hoa_err("expected edge target"));
            };
            pos += 1;
            if body.get(pos) == Some(&Tok::Punct('{')) {
                return Err(hoa_err("transition-based acceptance is not supported"));
            }
            edges.push((dnf(&lab, false), *t));
        }
        if q >= declared.len() {
            declared.resize(q + 1, None);
        }
        if declared[q].is_some() {
            return Err(hoa_err(format!("state {q} declared twice")));
        }
        declared[q] = Some((accepting, edges));
    }
    let n = states.unwrap_or(declared.len());
    if declared.len() > n {
        return Err(hoa_err(format!("state {} exceeds States: {n}", declared.len() - 1)));
    }
    let mut a = BuchiAutomaton::new(alphabet);
    for q in 0..n {
        a.add_state(declared.get(q).and_then(|d| d.as_ref()).is_some_and(|d| d.0));
    }
    for &q in &starts {
        if q >= n {
            return Err(hoa_err(format!("start state {q} out of range")));
        }
        a.add_initial(q);
    }
    for (q, d) in declared.iter().enumerate() {
        let Some((_, edges)) = d else { continue };
        for (cubes, t) in edges {
            if *t >= n {
                return Err(hoa_err(format!("edge target {t} out of range")));
            }
            for g in simplify_cubes(cubes.clone(), n_props) {
                a.add_edge(q, g, *t);
            }
        }
    }
    Ok(HoaDocument {
        automaton: a,
        label,
        mealy_inputs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::every_other_p;

    #[test]
    fn round_trip() {
        let a = every_other_p();
        let mut doc = HoaDocument::new(a.clone());
        doc.label = Some("swimmer".into());
        let text = doc.render();
        assert!(text.contains("/* label: swimmer */"));
        let back = parse_hoa(&text).unwrap();
        assert_eq!(back.label.as_deref(), Some("swimmer"));
        assert_eq!(back.automaton.canonical(), a.canonical());
    }

    #[test]
    fn label_expressions() {
        let text = r#"HOA: v1
States: 2
Start: 0
AP: 2 "p" "q"
Acceptance: 1 Inf(0)
--BODY--
State: 0 "init"
[!(0 | 1)] 0
[0 & !1 | t & 1] 1
State: 1 {0}
[t] 1
--END--
"#;
        let a = parse_hoa(text).unwrap().automaton;
        let ab = a.alphabet().clone();
        let succ = |q, l: &str| {
            let mut v: Vec<usize> = a.successors(q, ab.parse_letter(l).unwrap()).collect();
            v.sort();
            v.dedup();
            v
        };
        assert_eq!(succ(0, "{}"), vec![0]);
        assert_eq!(succ(0, "{p}"), vec![1]);
        assert_eq!(succ(0, "{q}"), vec![1]);
        assert_eq!(succ(0, "{p,q}"), vec![1]);
        assert!(a.is_accepting(1));
    }

    #[test]
    fn rejects_unsupported_inputs() {
        let base = |acc: &str, body: &str| {
            format!("HOA: v1\nStates: 1\nStart: 0\nAP: 1 \"p\"\nAcceptance: {acc}\n--BODY--\n{body}--END--\n")
        };
        assert!(parse_hoa(&base("1 Inf(0)", "State: 0\n[0] 0\n")).is_ok());
        assert!(parse_hoa(&base("2 Inf(0)&Inf(1)", "State: 0\n[0] 0\n")).is_err());
        assert!(parse_hoa(&base("1 Inf(0)", "State: 0\n[0] 0 {0}\n")).is_err());
        assert!(parse_hoa(&base("1 Inf(0)", "State: 0\n[3] 0\n")).is_err());
        assert!(parse_hoa(&base("1 Inf(0)", "State: 0\n[0] 5\n")).is_err());
        assert!(parse_hoa("States: 1").is_err());
        let mealy = base("1 Inf(0)", "State: 0\n[0] 0\n").replace("HOA: v1\n", "HOA: v1\n/* buchi-mealy: 1 */\n");
        assert!(parse_hoa(&mealy).is_err());
    }
}
