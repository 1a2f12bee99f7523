use super::Formula;
use crate::alphabet::Alphabet;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Ident(String),
    True,
    False,
    Not,
    And,
    Or,
    Implies,
    Next,
    Finally,
    Globally,
    Until,
    LParen,
    RParen,
}

impl Token {
    fn describe(&self) -> String {
        match self {
            Token::Ident(s) => format!("`{s}`"),
            Token::True => "`tt`".into(),
            Token::False => "`ff`".into(),
            Token::Not => "`!`".into(),
            Token::And => "`&`".into(),
            Token::Or => "`|`".into(),
            Token::Implies => "`->`".into(),
            Token::Next => "`X`".into(),
            Token::Finally => "`F`".into(),
            Token::Globally => "`G`".into(),
            Token::Until => "`U`".into(),
            Token::LParen => "`(`".into(),
            Token::RParen => "`)`".into(),
        }
    }
}

fn syntax(position: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        position,
        message: message.into(),
    }
}

fn lex(text: &str) -> Result<Vec<(Token, usize)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'!' => Token::Not,
            b'(' => Token::LParen,
            b')' => Token::RParen,
            b'&' => {
                if bytes.get(i + 1) == Some(&b'&') {
                    i += 1;
                }
                Token::And
            }
            b'|' => {
                if bytes.get(i + 1) == Some(&b'|') {
                    i += 1;
                }
                Token::Or
            }
            b'-' => {
                if bytes.get(i + 1) == Some(&b'>') {
                    i += 1;
                    Token::Implies
                } else {
                    return Err(syntax(start, "expected `->`"));
                }
            }
            b'X' => Token::Next,
            b'F' => Token::Finally,
            b'G' => Token::Globally,
            b'U' => Token::Until,
            b'a'..=b'z' => {
                let mut j = i + 1;
                while j < bytes.len()
                    && (bytes[j].is_ascii_lowercase() || bytes[j].is_ascii_digit() || bytes[j] == b'_')
                {
                    j += 1;
                }
                let word = &text[i..j];
                i = j;
                out.push((
                    match word {
                        "tt" => Token::True,
                        "ff" => Token::False,
                        _ => Token::Ident(word.to_string()),
                    },
                    start,
                ));
                continue;
            }
            _ => {
                let ch = text[i..].chars().next().unwrap_or('?');
                return Err(syntax(start, format!("unexpected character `{ch}`")));
            }
        };
        i += 1;
        out.push((tok, start));
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<(Token, usize)>,
    pos: usize,
    end: usize,
    alphabet: &'a Alphabet,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |(_, o)| *o)
    }

    fn eat(&mut self, tok: &Token) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn implies(&mut self) -> Result<Formula> {
        let lhs = self.or()?;
        if self.eat(&Token::Implies) {
            let rhs = self.implies()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula> {
        let mut lhs = self.and()?;
        while self.eat(&Token::Or) {
            lhs = Formula::or(lhs, self.and()?);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula> {
        let mut lhs = self.until()?;
        while self.eat(&Token::And) {
            lhs = Formula::and(lhs, self.until()?);
        }
        Ok(lhs)
    }

    fn until(&mut self) -> Result<Formula> {
        let lhs = self.unary()?;
        if self.eat(&Token::Until) {
            let rhs = self.until()?;
            return Ok(Formula::until(lhs, rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula> {
        match self.peek() {
            Some(Token::Not) => {
                self.pos += 1;
                Ok(Formula::not(self.unary()?))
            }
            Some(Token::Next) => {
                self.pos += 1;
                Ok(Formula::next(self.unary()?))
            }
            Some(Token::Finally) => {
                self.pos += 1;
                Ok(Formula::finally(self.unary()?))
            }
            Some(Token::Globally) => {
                self.pos += 1;
                Ok(Formula::globally(self.unary()?))
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<Formula> {
        let at = self.offset();
        let Some(tok) = self.peek().cloned() else {
            return Err(syntax(at, "unexpected end of input"));
        };
        self.pos += 1;
        match tok {
            Token::True => Ok(Formula::Top),
            Token::False => Ok(Formula::Bottom),
            Token::Ident(name) => {
                if self.alphabet.index_of(&name).is_none() {
                    return Err(Error::UnknownAtom(name));
                }
                Ok(Formula::Atom(name))
            }
            Token::LParen => {
                let inner = self.implies()?;
                if !self.eat(&Token::RParen) {
                    return Err(syntax(self.offset(), "expected `)`"));
                }
                Ok(inner)
            }
            other => Err(syntax(at, format!("unexpected {}", other.describe()))),
        }
    }
}

/// Parses the ASCII LTL syntax. Unary operators (`!`, `X`, `F`, `G`) bind
/// tighter than `U` (right-associative), then `&`, `|`, and `->`
/// (right-associative). Every atom must belong to `alphabet`.
pub fn parse_ltl(text: &str, alphabet: &Alphabet) -> Result<Formula> {
    if text.trim().is_empty() {
        return Err(syntax(0, "empty formula"));
    }
    let tokens = lex(text)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        end: text.len(),
        alphabet,
    };
    let f = parser.implies()?;
    if let Some(tok) = parser.peek() {
        let at = parser.offset();
        return Err(syntax(at, format!("unexpected {} after formula", tok.describe())));
    }
    Ok(f)
}
