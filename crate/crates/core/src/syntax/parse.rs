use thiserror::Error;

use super::{Consecution, Formula, FormulaSet};

/// A syntax error, located by character offset into the input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

impl ParseError {
    fn new(position: usize, message: impl Into<String>) -> Self {
        ParseError {
            position,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    True,
    False,
    LParen,
    RParen,
    Bang,
    Box,
    And,
    Or,
    Sto,
    Imp,
    Sep,
    LBrace,
    RBrace,
    Turnstile,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("atom `{s}`"),
            Tok::True => "`true`".into(),
            Tok::False => "`false`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Bang => "`!`".into(),
            Tok::Box => "`[]`".into(),
            Tok::And => "`&`".into(),
            Tok::Or => "`|`".into(),
            Tok::Sto => "`~>`".into(),
            Tok::Imp => "`->`".into(),
            Tok::Sep => "separator".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::Turnstile => "turnstile".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let next = chars.get(i + 1).copied();
        let start = i;
        let tok = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            ',' | ';' => Tok::Sep,
            '!' | '¬' => Tok::Bang,
            '&' | '∧' => Tok::And,
            '∨' => Tok::Or,
            '→' => Tok::Imp,
            '⊐' => Tok::Sto,
            '□' => Tok::Box,
            '⊤' => Tok::True,
            '⊥' => Tok::False,
            '⇒' | '⊢' => Tok::Turnstile,
            '|' if next == Some('-') && chars.get(i + 2) != Some(&'>') => {
                i += 1;
                Tok::Turnstile
            }
            '|' => Tok::Or,
            '[' if next == Some(']') => {
                i += 1;
                Tok::Box
            }
            '~' if next == Some('>') => {
                i += 1;
                Tok::Sto
            }
            '-' if next == Some('>') => {
                i += 1;
                Tok::Imp
            }
            '=' if next == Some('>') => {
                i += 1;
                Tok::Turnstile
            }
            c if c.is_ascii_lowercase() => {
                let mut j = i + 1;
                while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                    j += 1;
                }
                let word: String = chars[i..j].iter().collect();
                i = j - 1;
                match word.as_str() {
                    "true" | "top" => Tok::True,
                    "false" | "bot" => Tok::False,
                    _ => Tok::Ident(word),
                }
            }
            other => return Err(ParseError::new(start, format!("unexpected character `{other}`"))),
        };
        out.push((start, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Self, ParseError> {
        Ok(Parser {
            toks: lex(text)?,
            pos: 0,
            end: text.chars().count(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        match self.peek() {
            Some(t) => ParseError::new(self.offset(), format!("expected {wanted}, found {}", t.describe())),
            None => ParseError::new(self.offset(), format!("expected {wanted}, found end of input")),
        }
    }

    fn imp(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.sto()?;
        if self.eat(&Tok::Imp) {
            let rhs = self.imp()?;
            return Ok(Formula::imp(lhs, rhs));
        }
        Ok(lhs)
    }

    fn sto(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if self.eat(&Tok::Sto) {
            let rhs = self.sto()?;
            return Ok(Formula::sto(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and()?;
        while self.eat(&Tok::Or) {
            let rhs = self.and()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.prefix()?;
        while self.eat(&Tok::And) {
            let rhs = self.prefix()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn prefix(&mut self) -> Result<Formula, ParseError> {
        if self.eat(&Tok::Bang) {
            return Ok(Formula::neg(self.prefix()?));
        }
        if self.eat(&Tok::Box) {
            return Ok(Formula::boxed(self.prefix()?));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                Ok(Formula::atom(&name))
            }
            Some(Tok::True) => {
                self.pos += 1;
                Ok(Formula::Top)
            }
            Some(Tok::False) => {
                self.pos += 1;
                Ok(Formula::Bot)
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.imp()?;
                if !self.eat(&Tok::RParen) {
                    return Err(self.unexpected("`)`"));
                }
                Ok(inner)
            }
            _ => Err(self.unexpected("a formula")),
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        if self.pos < self.toks.len() {
            Err(self.unexpected("end of input"))
        } else {
            Ok(())
        }
    }

    /// Comma- or semicolon-separated formulas, optionally in braces.
    fn list(&mut self, stop_at_turnstile: bool) -> Result<Vec<Formula>, ParseError> {
        let braced = self.eat(&Tok::LBrace);
        let mut out = Vec::new();
        loop {
            match self.peek() {
                None => break,
                Some(Tok::RBrace) if braced => break,
                Some(Tok::Turnstile) if stop_at_turnstile => break,
                Some(Tok::Sep) => {
                    self.pos += 1;
                    continue;
                }
                _ => {}
            }
            out.push(self.imp()?);
            match self.peek() {
                Some(Tok::Sep) => self.pos += 1,
                Some(Tok::RBrace) if braced => {}
                Some(Tok::Turnstile) if stop_at_turnstile => {}
                None => {}
                _ => return Err(self.unexpected("`,` or end of list")),
            }
        }
        if braced && !self.eat(&Tok::RBrace) {
            return Err(self.unexpected("`}`"));
        }
        Ok(out)
    }
}

/// Parses one formula from the surface grammar.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser::new(text)?;
    let f = p.imp()?;
    p.finish()?;
    Ok(f)
}

/// Parses a list such as `p, q -> r` or `{p; q}`.
pub fn parse_list(text: &str) -> Result<Vec<Formula>, ParseError> {
    let mut p = Parser::new(text)?;
    let out = p.list(false)?;
    p.finish()?;
    Ok(out)
}

/// Parses `Γ => φ` (also `Γ |- φ`). Premises are separated by `,` or `;` and
/// may be wrapped in braces; a bare formula is read as `∅ => φ`.
pub fn parse_consecution(text: &str) -> Result<Consecution, ParseError> {
    let mut p = Parser::new(text)?;
    if !p.toks.iter().any(|(_, t)| *t == Tok::Turnstile) {
        let f = p.imp()?;
        p.finish()?;
        return Ok(Consecution::theorem(f));
    }
    let premises = p.list(true)?;
    if !p.eat(&Tok::Turnstile) {
        return Err(p.unexpected("`=>`"));
    }
    let conclusion = p.imp()?;
    p.finish()?;
    Ok(Consecution::new(
        premises.into_iter().collect::<FormulaSet>(),
        conclusion,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn box_sugar_round_trips() {
        let f = p("true ~> p");
        assert_eq!(f, Formula::sto(Formula::Top, Formula::atom("p")));
        assert_eq!(f.to_string(), "[]p");
        assert_eq!(p("[]p"), f);
    }

    #[test]
    fn di_axiom_shape() {
        let f = p("(p ~> r) & (q ~> r) -> ((p | q) ~> r)");
        let (a, q, r) = (Formula::atom("p"), Formula::atom("q"), Formula::atom("r"));
        let expected = Formula::imp(
            Formula::and(Formula::sto(a.clone(), r.clone()), Formula::sto(q.clone(), r.clone())),
            Formula::sto(Formula::or(a, q), r),
        );
        assert_eq!(f, expected);
        assert_eq!(p(&f.to_string()), f);
    }

    #[test]
    fn implication_is_right_associative() {
        let (a, b, c) = (Formula::atom("p"), Formula::atom("q"), Formula::atom("r"));
        assert_eq!(
            p("p -> q -> r"),
            Formula::imp(a.clone(), Formula::imp(b.clone(), c.clone()))
        );
        assert_eq!(
            p("p ~> q ~> r"),
            Formula::sto(a.clone(), Formula::sto(b.clone(), c.clone()))
        );
        assert_eq!(
            p("p & q & r"),
            Formula::and(Formula::and(a.clone(), b.clone()), c.clone())
        );
        assert_eq!(p("p | q & r"), Formula::or(a, Formula::and(b, c)));
    }

    #[test]
    fn negation_is_sugar() {
        assert_eq!(p("!p"), Formula::imp(Formula::atom("p"), Formula::Bot));
        assert_eq!(p("p -> false").to_string(), "!p");
        assert_eq!(p("!!p").to_string(), "!!p");
        assert_eq!(p("!(p & q)").to_string(), "!(p & q)");
    }

    #[test]
    fn precedence_printing() {
        for s in [
            "(p -> q) -> r",
            "(p ~> q) ~> r",
            "p ~> q -> r",
            "p -> q ~> r",
            "(p | q) & r",
            "[](p -> q) -> p ~> q",
            "[][]p",
            "p | q ~> r",
        ] {
            let f = p(s);
            assert_eq!(p(&f.to_string()), f, "{s}");
        }
        assert_eq!(p("(p | q) ~> r").to_string(), "p | q ~> r");
    }

    #[test]
    fn unicode_and_aliases() {
        assert_eq!(p("□p → ⊥"), p("[]p -> false"));
        assert_eq!(p("top ~> bot"), Formula::sto(Formula::Top, Formula::Bot));
        assert_eq!(p("¬p ∨ q ∧ r ⊐ ⊤"), p("!p | q & r ~> true"));
    }

    #[test]
    fn malformed_input_reports_position() {
        let e = parse("p & ").unwrap_err();
        assert_eq!(e.position, 4);
        let e = parse("(p -> q").unwrap_err();
        assert!(e.message.contains("`)`"));
        let e = parse("p q").unwrap_err();
        assert_eq!(e.position, 2);
        assert!(parse("P").is_err());
        assert!(parse("").is_err());
        assert!(parse("p ->").is_err());
    }

    #[test]
    fn consecutions() {
        let c = parse_consecution("{p, p->q} => q").unwrap();
        assert_eq!(c.premises.len(), 2);
        assert_eq!(c.conclusion, Formula::atom("q"));
        let d = parse_consecution("p; p -> q |- q").unwrap();
        assert_eq!(c, d);
        let e = parse_consecution("=> p ~> p").unwrap();
        assert!(e.premises.is_empty());
        let bare = parse_consecution("p ~> p").unwrap();
        assert_eq!(bare, e);
        assert_eq!(parse_consecution("{} => true").unwrap().premises.len(), 0);
        assert!(parse_consecution("p => ").is_err());
        // `|->` is disjunction followed by implication, not a turnstile.
        assert!(parse("p |->q").is_err());
    }

    #[test]
    fn lists() {
        let l = parse_list("top, q").unwrap();
        assert_eq!(l, vec![Formula::Top, Formula::atom("q")]);
        assert_eq!(parse_list("").unwrap(), vec![]);
    }
}
