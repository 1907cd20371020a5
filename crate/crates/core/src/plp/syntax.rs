//! Program surface syntax:
//!
//! ```text
//! % comment
//! a : [0.5, 1] <- (b & ~c) : [0.3, 0.6], d : [0, 0.2].
//! d : [1/10, 1/10].
//! ```

use super::{AnnotatedFormula, AnnotatedRule, GroundProgram};
use crate::error::{Error, Result};
use crate::parser::parse_formula;
use crate::rational::parse_rational;

pub fn parse_program(text: &str) -> Result<GroundProgram> {
    let clean = strip_comments(text);
    let mut rules = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, b) in clean.bytes().enumerate() {
        match b {
            b'[' | b'(' => depth += 1,
            b']' | b')' => depth -= 1,
            b'.' if depth == 0 => {
                rules.push(parse_rule(&clean[start..i], start)?);
                start = i + 1;
            }
            _ => {}
        }
    }
    let rest = &clean[start..];
    if !rest.trim().is_empty() {
        return Err(Error::syntax(
            clean.trim_end().len(),
            "expected `.` at the end of the rule",
        ));
    }
    if rules.is_empty() {
        return Err(Error::EmptyInput);
    }
    GroundProgram::new(rules)
}

fn strip_comments(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut in_comment = false;
    for c in text.chars() {
        if c == '\n' {
            in_comment = false;
        } else if c == '%' || c == '#' {
            in_comment = true;
        }
        if in_comment {
            out.extend(std::iter::repeat_n(' ', c.len_utf8()));
        } else {
            out.push(c);
        }
    }
    out
}

/// Splits at `sep` occurring outside brackets and parentheses.
fn split_top(text: &str, sep: &str) -> Vec<(usize, usize)> {
    let bytes = text.as_bytes();
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] {
            b'[' | b'(' => depth += 1,
            b']' | b')' => depth -= 1,
            _ if depth == 0 && bytes[i..].starts_with(sep.as_bytes()) => {
                parts.push((start, i));
                i += sep.len();
                start = i;
                continue;
            }
            _ => {}
        }
        i += 1;
    }
    parts.push((start, bytes.len()));
    parts
}

fn parse_rule(text: &str, base: usize) -> Result<AnnotatedRule> {
    if text.trim().is_empty() {
        return Err(Error::syntax(base + text.len(), "empty rule"));
    }
    let sides = split_top(text, "<-");
    if sides.len() > 2 {
        return Err(Error::syntax(base + sides[1].1, "more than one `<-` in a rule"));
    }
    let (hs, he) = sides[0];
    let head = parse_annotated(&text[hs..he], base + hs)?;
    let mut body = Vec::new();
    if let Some(&(bs, be)) = sides.get(1) {
        for (s, e) in split_top(&text[bs..be], ",") {
            body.push(parse_annotated(&text[bs + s..bs + e], base + bs + s)?);
        }
    }
    AnnotatedRule::new(head, body)
}

fn parse_annotated(text: &str, base: usize) -> Result<AnnotatedFormula> {
    let parts = split_top(text, ":");
    if parts.len() != 2 {
        let at = if parts.len() > 2 {
            parts[1].1
        } else {
            text.trim_end().len()
        };
        return Err(Error::syntax(base + at, "expected `formula : [lo, hi]`"));
    }
    let (fs, fe) = parts[0];
    let formula_text = &text[fs..fe];
    check_ground(formula_text, base + fs)?;
    let body = parse_formula(formula_text).map_err(|e| e.shifted(base + fs))?;
    let (is, ie) = parts[1];
    let (lo, hi) = parse_interval(&text[is..ie], base + is)?;
    AnnotatedFormula::new(body, lo, hi)
}

/// Atoms with arguments, such as `p(X)`, need grounding first.
fn check_ground(text: &str, base: usize) -> Result<()> {
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i].is_ascii_alphabetic() || bytes[i] == b'_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            let mut j = i;
            while j < bytes.len() && bytes[j].is_ascii_whitespace() {
                j += 1;
            }
            if bytes.get(j) == Some(&b'(') {
                return Err(Error::NonGround {
                    offset: base + start,
                    message: format!(
                        "atom `{}` has arguments; only ground programs are supported",
                        &text[start..i]
                    ),
                });
            }
        } else {
            i += 1;
        }
    }
    Ok(())
}

fn parse_interval(text: &str, base: usize) -> Result<(crate::Rational, crate::Rational)> {
    let lead = text.len() - text.trim_start().len();
    let t = text.trim();
    if !t.starts_with('[') {
        return Err(Error::syntax(base + lead, "expected `[`"));
    }
    if !t.ends_with(']') {
        return Err(Error::syntax(base + lead + t.len(), "expected `]`"));
    }
    let inner = &t[1..t.len() - 1];
    let inner_base = base + lead + 1;
    let parts = split_top(inner, ",");
    if parts.len() != 2 {
        return Err(Error::syntax(inner_base, "expected two bounds `[lo, hi]`"));
    }
    let number = |(s, e): (usize, usize)| {
        let raw = &inner[s..e];
        let off = inner_base + s + (raw.len() - raw.trim_start().len());
        parse_rational(raw.trim()).map_err(|_| Error::syntax(off, format!("invalid bound `{}`", raw.trim())))
    };
    Ok((number(parts[0])?, number(parts[1])?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn facts_and_rules() {
        let p = parse_program("a : [1,1].").unwrap();
        assert_eq!(p.alphabet.props(), ["a"]);
        assert!(p.rules[0].is_fact());
        assert_eq!(p.rules[0].head.lo, int(1));

        let p = parse_program("a : [0.7,1] <- (b & ~c) : [0.5,1].").unwrap();
        assert_eq!(p.alphabet.props(), ["a", "b", "c"]);
        assert_eq!(p.rules[0].body.len(), 1);
        assert_eq!(p.rules[0].body[0].lo, ratio(1, 2));
    }

    #[test]
    fn comments_and_multiple_rules() {
        let text = "% header\na : [0.5, 1] <- (b & ~c) : [0.3, 0.6], d : [0, 0.2]. # trailing\nd : [1/10, 1/10].\n";
        let p = parse_program(text).unwrap();
        assert_eq!(p.rules.len(), 2);
        assert_eq!(p.alphabet.props(), ["a", "b", "c", "d"]);
        assert_eq!(p.rules[1].head.hi, ratio(1, 10));
    }

    #[test]
    fn print_parse_round_trip() {
        let text = "a : [0.5, 1] <- (b & ~c) : [0.3, 0.6], d | e -> f : [0, 0.2].\ng : [1,1].";
        let p = parse_program(text).unwrap();
        assert_eq!(parse_program(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn interval_errors() {
        let e = parse_program("a : [0.9, 0.1].").unwrap_err();
        assert!(matches!(&e, Error::InvalidInterval { reason, .. } if reason == "empty interval"));
        assert!(e.to_string().contains("empty interval"));
        assert!(matches!(
            parse_program("a : [0, 1.5]."),
            Err(Error::InvalidInterval { .. })
        ));
        assert!(matches!(
            parse_program("a : [0, x]."),
            Err(Error::Syntax { offset: 8, .. })
        ));
    }

    #[test]
    fn structural_errors() {
        assert!(matches!(parse_program("a & b : [0, 1]."), Err(Error::NonAtomicHead(_))));
        assert!(matches!(
            parse_program("p(X) : [0, 1]."),
            Err(Error::NonGround { offset: 0, .. })
        ));
        assert!(matches!(parse_program("a : [0, 1]"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_program("a [0, 1]."), Err(Error::Syntax { .. })));
        assert!(matches!(
            parse_program("a : [0, 1] <- b &  : [0,1]."),
            Err(Error::Syntax { offset: 19, .. })
        ));
        assert!(matches!(parse_program("  % nothing\n"), Err(Error::EmptyInput)));
    }
}
