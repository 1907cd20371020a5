//! Recursive-descent parser for propositional formulas.
//!
//! ```text
//! implies := or ( "->" implies )?          right-associative, loosest
//! or      := and ( "|" and )*
//! and     := unary ( "&" unary )*
//! unary   := "~" unary | primary
//! primary := ident | "true" | "false" | "(" implies ")"
//! ident   := [a-zA-Z_][a-zA-Z0-9_]*
//! ```

use crate::error::{Error, Result};
use crate::formula::Formula;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    True,
    False,
    Tilde,
    Amp,
    Bar,
    Arrow,
    LParen,
    RParen,
    End,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("`{s}`"),
        Tok::True => "`true`".into(),
        Tok::False => "`false`".into(),
        Tok::Tilde => "`~`".into(),
        Tok::Amp => "`&`".into(),
        Tok::Bar => "`|`".into(),
        Tok::Arrow => "`->`".into(),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::End => "end of input".into(),
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'~' => Tok::Tilde,
            b'&' => Tok::Amp,
            b'|' => Tok::Bar,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 1;
                Tok::Arrow
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i + 1 < bytes.len() && (bytes[i + 1].is_ascii_alphanumeric() || bytes[i + 1] == b'_') {
                    i += 1;
                }
                match &text[start..=i] {
                    "true" => Tok::True,
                    "false" => Tok::False,
                    name => Tok::Ident(name.to_string()),
                }
            }
            _ => {
                let ch = text[i..].chars().next().unwrap_or('?');
                return Err(Error::syntax(i, format!("unexpected character `{ch}`")));
            }
        };
        i += 1;
        toks.push((tok, start));
    }
    toks.push((Tok::End, text.len()));
    Ok(toks)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    open: Vec<usize>,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, expected: &str) -> Error {
        if *self.peek() == Tok::End {
            if let Some(&paren) = self.open.last() {
                return Error::syntax(paren, "unclosed parenthesis");
            }
        }
        Error::syntax(
            self.offset(),
            format!("expected {expected}, found {}", describe(self.peek())),
        )
    }

    fn implies(&mut self) -> Result<Formula> {
        let lhs = self.or()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.implies()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula> {
        let mut lhs = self.and()?;
        while *self.peek() == Tok::Bar {
            self.bump();
            let rhs = self.and()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula> {
        if *self.peek() == Tok::Tilde {
            self.bump();
            return Ok(Formula::not(self.unary()?));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Formula> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                self.bump();
                Ok(Formula::Prop(name))
            }
            Tok::True => {
                self.bump();
                Ok(Formula::True)
            }
            Tok::False => {
                self.bump();
                Ok(Formula::False)
            }
            Tok::LParen => {
                self.open.push(self.offset());
                self.bump();
                let inner = self.implies()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.unexpected("`)`"));
                }
                self.bump();
                self.open.pop();
                Ok(inner)
            }
            _ => Err(self.unexpected("a formula")),
        }
    }
}

/// Parses a formula. Errors carry the byte offset of the offending token;
/// input that ends inside a parenthesis reports the unmatched `(`.
pub fn parse_formula(text: &str) -> Result<Formula> {
    if text.trim().is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        open: Vec::new(),
    };
    let f = p.implies()?;
    if *p.peek() != Tok::End {
        return Err(Error::syntax(p.offset(), format!("unexpected {}", describe(p.peek()))));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use Formula as F;

    fn p(s: &str) -> Formula {
        F::prop(s)
    }

    #[test]
    fn conjunction_with_negation() {
        assert_eq!(parse_formula("p & ~q").unwrap(), F::and(p("p"), F::not(p("q"))));
    }

    #[test]
    fn precedence() {
        assert_eq!(
            parse_formula("~p & q | r").unwrap(),
            F::or(F::and(F::not(p("p")), p("q")), p("r"))
        );
        assert_eq!(
            parse_formula("a -> b -> c").unwrap(),
            F::implies(p("a"), F::implies(p("b"), p("c")))
        );
        assert_eq!(
            parse_formula("a | b -> c & d").unwrap(),
            F::implies(F::or(p("a"), p("b")), F::and(p("c"), p("d")))
        );
        assert_eq!(
            parse_formula("a & b & c").unwrap(),
            F::and(F::and(p("a"), p("b")), p("c"))
        );
    }

    #[test]
    fn literals_and_identifiers() {
        assert_eq!(parse_formula("true").unwrap(), F::True);
        assert_eq!(parse_formula("~false").unwrap(), F::not(F::False));
        assert_eq!(parse_formula("_x1 & truth").unwrap(), F::and(p("_x1"), p("truth")));
    }

    #[test]
    fn unbalanced_parenthesis_reports_its_offset() {
        assert_eq!(
            parse_formula("p & ("),
            Err(Error::Syntax {
                offset: 4,
                message: "unclosed parenthesis".into()
            })
        );
        assert!(matches!(parse_formula("((p)"), Err(Error::Syntax { offset: 0, .. })));
    }

    #[test]
    fn other_errors() {
        assert_eq!(parse_formula("   "), Err(Error::EmptyInput));
        assert!(matches!(parse_formula("p &"), Err(Error::Syntax { offset: 3, .. })));
        assert!(matches!(parse_formula("p q"), Err(Error::Syntax { offset: 2, .. })));
        assert!(matches!(parse_formula("p)"), Err(Error::Syntax { offset: 1, .. })));
        assert!(matches!(parse_formula("p $ q"), Err(Error::Syntax { offset: 2, .. })));
        assert!(matches!(parse_formula("p - q"), Err(Error::Syntax { offset: 2, .. })));
    }
}
