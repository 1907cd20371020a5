//! Surface syntax for weight constraints.
//!
//! ```text
//! 0.6 <= w(p)
//! w(p & q) <= 0.1
//! 1*w(p) + -2*w(q) <= 0.25      # comment
//! ```
//!
//! Both sides are linear sums of `coefficient*w(formula)` terms and
//! rational constants; everything is normalised to `Σ aᵢ·w(φᵢ) ⋈ c`.

use super::{Comparison, WeightConstraint, WeightTerm};
use crate::error::{Error, Result};
use crate::parser::parse_formula;
use crate::rational::{parse_rational, Rational};
use num_traits::{One, Zero};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Number(Rational),
    Weight(crate::formula::Formula),
    Plus,
    Minus,
    Star,
    Cmp(Comparison),
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        match c {
            b' ' | b'\t' | b'\r' | b'\n' => {
                i += 1;
            }
            b'+' => {
                out.push((Tok::Plus, start));
                i += 1;
            }
            b'-' => {
                out.push((Tok::Minus, start));
                i += 1;
            }
            b'*' => {
                out.push((Tok::Star, start));
                i += 1;
            }
            b'<' | b'>' | b'=' => {
                let (cmp, len) = match (c, bytes.get(i + 1)) {
                    (b'<', Some(b'=')) => (Comparison::Le, 2),
                    (b'>', Some(b'=')) => (Comparison::Ge, 2),
                    (b'=', Some(b'=')) => (Comparison::Eq, 2),
                    (b'<', _) => (Comparison::Lt, 1),
                    (b'>', _) => (Comparison::Gt, 1),
                    _ => (Comparison::Eq, 1),
                };
                out.push((Tok::Cmp(cmp), start));
                i += len;
            }
            b'0'..=b'9' | b'.' => {
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.' || bytes[i] == b'/') {
                    i += 1;
                }
                let q = parse_rational(&text[start..i])
                    .map_err(|_| Error::syntax(start, format!("invalid number `{}`", &text[start..i])))?;
                out.push((Tok::Number(q), start));
            }
            b'w' if bytes.get(i + 1) == Some(&b'(') => {
                let open = i + 1;
                let mut depth = 0usize;
                let mut close = None;
                for (j, &b) in bytes.iter().enumerate().skip(open) {
                    match b {
                        b'(' => depth += 1,
                        b')' => {
                            depth -= 1;
                            if depth == 0 {
                                close = Some(j);
                                break;
                            }
                        }
                        _ => {}
                    }
                }
                let close = close.ok_or_else(|| Error::syntax(open, "unclosed parenthesis"))?;
                let inner = &text[open + 1..close];
                let f = parse_formula(inner).map_err(|e| match e {
                    Error::EmptyInput => Error::syntax(open + 1, "empty formula in w(...)"),
                    e => e.shifted(open + 1),
                })?;
                out.push((Tok::Weight(f), start));
                i = close + 1;
            }
            _ => {
                let ch = text[i..].chars().next().unwrap_or('?');
                match ch {
                    '≤' => out.push((Tok::Cmp(Comparison::Le), start)),
                    '≥' => out.push((Tok::Cmp(Comparison::Ge), start)),
                    _ => return Err(Error::syntax(i, format!("unexpected character `{ch}`"))),
                }
                i += ch.len_utf8();
            }
        }
    }
    Ok(out)
}

/// Parses one linear side into a term, starting at `pos`.
fn side(toks: &[(Tok, usize)], pos: &mut usize, end_offset: usize) -> Result<WeightTerm> {
    let mut term = WeightTerm::default();
    let mut first = true;
    loop {
        let mut sign = Rational::one();
        if !first {
            match toks.get(*pos) {
                Some((Tok::Plus, _)) => *pos += 1,
                Some((Tok::Minus, _)) => {
                    sign = -sign;
                    *pos += 1;
                }
                _ => break,
            }
        }
        first = false;
        while let Some((t @ (Tok::Plus | Tok::Minus), _)) = toks.get(*pos) {
            if *t == Tok::Minus {
                sign = -sign;
            }
            *pos += 1;
        }
        match toks.get(*pos) {
            Some((Tok::Number(q), _)) => {
                let q = &sign * q;
                *pos += 1;
                let star = matches!(toks.get(*pos), Some((Tok::Star, _)));
                if star {
                    *pos += 1;
                }
                match toks.get(*pos) {
                    Some((Tok::Weight(f), _)) => {
                        term.terms.push((q, f.clone()));
                        *pos += 1;
                    }
                    Some((_, off)) if star => return Err(Error::syntax(*off, "expected w(...) after `*`")),
                    None if star => return Err(Error::syntax(end_offset, "expected w(...) after `*`")),
                    _ => term.constant += q,
                }
            }
            Some((Tok::Weight(f), _)) => {
                term.terms.push((sign, f.clone()));
                *pos += 1;
            }
            Some((_, off)) => return Err(Error::syntax(*off, "expected a number or w(...)")),
            None => return Err(Error::syntax(end_offset, "expected a number or w(...)")),
        }
    }
    Ok(term)
}

/// Parses a single constraint.
pub fn parse_constraint(text: &str) -> Result<WeightConstraint> {
    if text.trim().is_empty() {
        return Err(Error::EmptyInput);
    }
    let toks = lex(text)?;
    let mut pos = 0;
    let lhs = side(&toks, &mut pos, text.len())?;
    let relation = match toks.get(pos) {
        Some((Tok::Cmp(c), _)) => *c,
        Some((_, off)) => return Err(Error::syntax(*off, "expected a comparison")),
        None => return Err(Error::syntax(text.len(), "expected a comparison")),
    };
    pos += 1;
    let rhs = side(&toks, &mut pos, text.len())?;
    if let Some((_, off)) = toks.get(pos) {
        return Err(Error::syntax(*off, "unexpected token after constraint"));
    }
    // lhs ⋈ rhs  ⇔  lhs.terms − rhs.terms ⋈ rhs.constant − lhs.constant
    let mut terms = lhs.terms;
    terms.extend(rhs.terms.into_iter().map(|(a, f)| (-a, f)));
    let bound = rhs.constant - lhs.constant;
    Ok(WeightConstraint::new(
        WeightTerm {
            terms,
            constant: Rational::zero(),
        },
        relation,
        bound,
    ))
}

/// A linear weight expression such as `w(p & q)` or `2*w(p) - w(q) + 1/2`.
pub fn parse_weight_term(text: &str) -> Result<WeightTerm> {
    if text.trim().is_empty() {
        return Err(Error::EmptyInput);
    }
    let toks = lex(text)?;
    let mut pos = 0;
    let term = side(&toks, &mut pos, text.len())?;
    if let Some((_, off)) = toks.get(pos) {
        return Err(Error::syntax(*off, "unexpected token after expression"));
    }
    Ok(term)
}

/// One constraint per line (or `;`-separated); `#` starts a comment.
/// Error offsets are relative to the whole document.
pub fn parse_constraints(text: &str) -> Result<Vec<WeightConstraint>> {
    let mut out = Vec::new();
    let mut line_start = 0;
    for line in text.split_inclusive('\n') {
        let content = line.split('#').next().unwrap_or("");
        let mut piece_start = line_start;
        for piece in content.split(';') {
            if !piece.trim().is_empty() {
                out.push(parse_constraint(piece).map_err(|e| e.shifted(piece_start))?);
            }
            piece_start += piece.len() + 1;
        }
        line_start += line.len();
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Formula;
    use crate::rational::{int, ratio};

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn surface_examples() {
        let c = parse_constraint("0.6 <= w(p)").unwrap();
        assert_eq!(c.lhs.terms, vec![(int(-1), f("p"))]);
        assert_eq!(c.relation, Comparison::Le);
        assert_eq!(c.rhs, ratio(-3, 5));

        let c = parse_constraint("w(p & q) <= 0.1").unwrap();
        assert_eq!(c.lhs.terms, vec![(int(1), f("p & q"))]);
        assert_eq!(c.rhs, ratio(1, 10));

        let c = parse_constraint("1*w(p) + -2*w(q) <= 0.25").unwrap();
        assert_eq!(c.lhs.terms, vec![(int(1), f("p")), (int(-2), f("q"))]);
        assert_eq!(c.rhs, ratio(1, 4));
    }

    #[test]
    fn relations_and_fractions() {
        assert_eq!(parse_constraint("w(p) >= 3/5").unwrap().relation, Comparison::Ge);
        assert_eq!(parse_constraint("w(p) = 3/10").unwrap().rhs, ratio(3, 10));
        assert_eq!(parse_constraint("w(p) == 1").unwrap().relation, Comparison::Eq);
        assert_eq!(parse_constraint("w(p) < 1").unwrap().relation, Comparison::Lt);
        assert_eq!(parse_constraint("w(p) ≥ 1/2").unwrap().relation, Comparison::Ge);
        let c = parse_constraint("1/2*w((p | q)) - w(p) + 1 >= 0").unwrap();
        assert_eq!(c.lhs.terms, vec![(ratio(1, 2), f("p | q")), (int(-1), f("p"))]);
        assert_eq!(c.rhs, int(-1));
    }

    #[test]
    fn printed_constraints_reparse() {
        for s in ["w(p) + -2*w((q & ~p)) <= 1/4", "w(true) = 1", "-3/7*w(p) >= -1"] {
            let c = parse_constraint(s).unwrap();
            assert_eq!(parse_constraint(&c.to_string()).unwrap(), c, "{s}");
        }
    }

    #[test]
    fn errors_have_document_offsets() {
        assert!(matches!(
            parse_constraint("w(p) <="),
            Err(Error::Syntax { offset: 7, .. })
        ));
        assert!(matches!(
            parse_constraint("w(p &) <= 1"),
            Err(Error::Syntax { offset: 5, .. })
        ));
        assert!(matches!(
            parse_constraint("w(p <= 1"),
            Err(Error::Syntax { offset: 1, .. })
        ));
        assert!(matches!(
            parse_constraint("w(p) 1"),
            Err(Error::Syntax { offset: 5, .. })
        ));
        assert!(matches!(
            parse_constraint("2* <= 1"),
            Err(Error::Syntax { offset: 3, .. })
        ));
        let doc = "w(p) <= 1\n# note\nw(q) >= ?\n";
        assert!(matches!(parse_constraints(doc), Err(Error::Syntax { offset: 25, .. })));
    }

    #[test]
    fn documents() {
        let doc = "# frechet\n0.6 <= w(p)\nw(q) >= 0.6 ; w(p & q) <= 0.1\n\n";
        assert_eq!(parse_constraints(doc).unwrap().len(), 3);
        assert!(parse_constraints("").unwrap().is_empty());
    }

    #[test]
    fn weight_terms() {
        let t = parse_weight_term("w(p & q)").unwrap();
        assert_eq!(t, WeightTerm::weight(f("p & q")));
        let t = parse_weight_term("2*w(p) - w(q) + 1/2").unwrap();
        assert_eq!(t.terms, vec![(int(2), f("p")), (int(-1), f("q"))]);
        assert_eq!(t.constant, ratio(1, 2));
    }
}
