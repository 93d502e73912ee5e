use thiserror::Error;

use super::Formula;
use super::{is_keyword, IVar, InterpTerm, Label, LabelError};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{kind} at offset {pos}")]
pub struct ParseError {
    /// Byte offset into the input.
    pub pos: usize,
    pub kind: ParseErrorKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected character `{0}`")]
    BadChar(char),
    #[error("unexpected {found}, expected {expected}")]
    Unexpected { found: String, expected: &'static str },
    #[error("ill-formed label: {0}")]
    Label(LabelError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    LBrack,
    RBrack,
    Comma,
    Not,
    Box,
    Diamond,
    And,
    Or,
    Rhd,
    Implies,
    Turnstile,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBrack => "`[`".into(),
            Tok::RBrack => "`]`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Not => "`~`".into(),
            Tok::Box => "`#`".into(),
            Tok::Diamond => "`<>`".into(),
            Tok::And => "`&`".into(),
            Tok::Or => "`|`".into(),
            Tok::Rhd => "`|>`".into(),
            Tok::Implies => "`->`".into(),
            Tok::Turnstile => "`|-`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let two = |s: &[u8]| bytes[i..].starts_with(s);
        let tok = match c {
            b' ' | b'\t' | b'\r' | b'\n' => {
                i += 1;
                continue;
            }
            b'%' => break,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'[' => Tok::LBrack,
            b']' => Tok::RBrack,
            b',' => Tok::Comma,
            b'~' => Tok::Not,
            b'#' => Tok::Box,
            b'&' => Tok::And,
            b'<' if two(b"<>") => {
                i += 1;
                Tok::Diamond
            }
            b'-' if two(b"->") => {
                i += 1;
                Tok::Implies
            }
            b'\\' if two(b"\\/") => {
                i += 1;
                Tok::Or
            }
            b'|' if two(b"|>") => {
                i += 1;
                Tok::Rhd
            }
            b'|' if two(b"|-") => {
                i += 1;
                Tok::Turnstile
            }
            b'|' => Tok::Or,
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i + 1 < bytes.len()
                    && (bytes[i + 1].is_ascii_alphanumeric() || bytes[i + 1] == b'_' || bytes[i + 1] == b'\'')
                {
                    i += 1;
                }
                Tok::Ident(src[start..=i].to_string())
            }
            _ => {
                let ch = src[i..].chars().next().unwrap_or('?');
                return Err(ParseError { pos: i, kind: ParseErrorKind::BadChar(ch) });
            }
        };
        out.push((tok, start));
        i += 1;
    }
    out.push((Tok::End, src.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if t != Tok::End {
            self.at += 1;
        }
        t
    }

    fn unexpected(&self, expected: &'static str) -> ParseError {
        ParseError {
            pos: self.pos(),
            kind: ParseErrorKind::Unexpected { found: self.peek().describe(), expected },
        }
    }

    fn expect(&mut self, t: Tok, what: &'static str) -> Result<(), ParseError> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(what))
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.rhd()?;
        if *self.peek() == Tok::Implies {
            self.bump();
            let rhs = self.formula()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn rhd(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disj()?;
        if *self.peek() == Tok::Rhd {
            self.bump();
            let label = self.opt_label()?;
            let rhs = self.disj()?;
            return Ok(Formula::rhd(label, lhs, rhs));
        }
        Ok(lhs)
    }

    fn disj(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.conj()?;
        while *self.peek() == Tok::Or {
            self.bump();
            acc = Formula::or(acc, self.conj()?);
        }
        Ok(acc)
    }

    fn conj(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.unary()?;
        while *self.peek() == Tok::And {
            self.bump();
            acc = Formula::and(acc, self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Tok::Not => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::Box => {
                self.bump();
                let label = self.opt_label()?;
                Ok(Formula::boxed(label, self.unary()?))
            }
            Tok::Diamond => {
                self.bump();
                let label = self.opt_label()?;
                Ok(Formula::diamond(label, self.unary()?))
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                self.bump();
                Ok(match name.as_str() {
                    "true" => Formula::Top,
                    "false" => Formula::Bot,
                    _ => Formula::Var(name),
                })
            }
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            _ => Err(self.unexpected("a formula")),
        }
    }

    fn opt_label(&mut self) -> Result<Label, ParseError> {
        if *self.peek() == Tok::LBrack {
            self.label()
        } else {
            Ok(Label::empty())
        }
    }

    fn label(&mut self) -> Result<Label, ParseError> {
        let start = self.pos();
        self.expect(Tok::LBrack, "`[`")?;
        let mut terms = Vec::new();
        if *self.peek() != Tok::RBrack {
            loop {
                let pos = self.pos();
                match self.bump() {
                    Tok::Ident(name) if name == "id" => terms.push(InterpTerm::Id),
                    Tok::Ident(name) if !is_keyword(&name) => {
                        let v = IVar::new(name)
                            .map_err(|e| ParseError { pos, kind: ParseErrorKind::Label(e) })?;
                        terms.push(InterpTerm::Var(v));
                    }
                    _ => {
                        self.at -= 1;
                        return Err(self.unexpected("an interpretation variable"));
                    }
                }
                if *self.peek() == Tok::Comma {
                    self.bump();
                } else {
                    break;
                }
            }
        }
        self.expect(Tok::RBrack, "`]`")?;
        Label::from_terms(terms).map_err(|e| ParseError { pos: start, kind: ParseErrorKind::Label(e) })
    }

    fn finish(&self) -> Result<(), ParseError> {
        if *self.peek() == Tok::End {
            Ok(())
        } else {
            Err(self.unexpected("end of input"))
        }
    }
}

/// Parses one formula. `%` starts a comment running to the end of the input line.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser { toks: lex(text)?, at: 0 };
    let f = p.formula()?;
    p.finish()?;
    Ok(f)
}

/// Parses a comma-separated, possibly empty, list of formulas.
pub fn parse_formula_list(text: &str) -> Result<Vec<Formula>, ParseError> {
    let mut p = Parser { toks: lex(text)?, at: 0 };
    let mut out = Vec::new();
    if *p.peek() == Tok::End {
        return Ok(out);
    }
    loop {
        out.push(p.formula()?);
        if *p.peek() == Tok::Comma {
            p.bump();
        } else {
            break;
        }
    }
    p.finish()?;
    Ok(out)
}

/// Parses a bracketed label such as `[k,j]` or `[]`.
pub fn parse_label(text: &str) -> Result<Label, ParseError> {
    let mut p = Parser { toks: lex(text)?, at: 0 };
    let l = p.label()?;
    p.finish()?;
    Ok(l)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> Formula {
        Formula::var(s)
    }

    #[test]
    fn smallest_implication() {
        assert_eq!(parse("p -> p").unwrap(), Formula::implies(v("p"), v("p")));
    }

    #[test]
    fn precedence() {
        // A ⊳ B → ◇A ∧ □C ⊳ B ∧ □C
        let f = parse("a |> b -> <>a & #c |> b & #c").unwrap();
        let e = Label::empty();
        let expected = Formula::implies(
            Formula::rhd(e.clone(), v("a"), v("b")),
            Formula::rhd(
                e.clone(),
                Formula::and(Formula::diamond(e.clone(), v("a")), Formula::boxed(e.clone(), v("c"))),
                Formula::and(v("b"), Formula::boxed(e, v("c"))),
            ),
        );
        assert_eq!(f, expected);
    }

    #[test]
    fn slim_zero_display() {
        let f = parse("a0 |> b0 -> ~(a0 |> ~c0) |> (b0 & # c0)").unwrap();
        match f {
            Formula::Implies(l, r) => {
                assert!(matches!(*l, Formula::Rhd(..)));
                assert!(matches!(*r, Formula::Rhd(..)));
            }
            _ => panic!("expected implication"),
        }
    }

    #[test]
    fn duplicate_label_entry() {
        let err = parse("#[k] p |>[k,k] q").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::Label(LabelError::Duplicate("k".into())));
        assert_eq!(err.pos, 9);
    }

    #[test]
    fn errors_carry_positions() {
        let err = parse("p -> ").unwrap_err();
        assert_eq!(err.pos, 5);
        let err = parse("p $ q").unwrap_err();
        assert_eq!(err, ParseError { pos: 2, kind: ParseErrorKind::BadChar('$') });
        assert!(parse("a |> b |> c").is_err());
        assert!(parse("(p").is_err());
    }

    #[test]
    fn implication_is_right_associative() {
        assert_eq!(parse("p -> q -> r").unwrap(), Formula::implies(v("p"), Formula::implies(v("q"), v("r"))));
    }

    #[test]
    fn both_or_spellings() {
        assert_eq!(parse("p \\/ q").unwrap(), parse("p | q").unwrap());
    }

    #[test]
    fn lists_and_labels() {
        let xs = parse_formula_list("#[k,j] p, q |>[k] r").unwrap();
        assert_eq!(xs.len(), 2);
        assert!(parse_formula_list("  ").unwrap().is_empty());
        assert_eq!(parse_label("[]").unwrap(), Label::empty());
        assert_eq!(parse_label("[k, j]").unwrap().len(), 2);
        assert!(parse_label("[k,k]").is_err());
    }

    #[test]
    fn comments_are_skipped() {
        assert_eq!(parse("p % trailing note").unwrap(), v("p"));
    }
}
