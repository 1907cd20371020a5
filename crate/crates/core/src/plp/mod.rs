//! Annotated probabilistic logic programs.
//!
//! A rule `A : [b₀, c₀] <- φ₁ : [b₁, c₁], …, φₘ : [bₘ, cₘ].` is read as a
//! material implication between interval constraints on one global
//! measure: if every body formula has probability within its interval, so
//! does the head.

mod syntax;

pub use syntax::parse_program;

use crate::bridge::{embed, extract, kripke_model};
use crate::constraint::{Comparison, Reasoner, WeightConstraint, WeightTerm};
use crate::error::{Error, Result};
use crate::formula::{Alphabet, Formula};
use crate::intensional::{AbstractTerm, BuiltinPred, DomainElement, IFormula, KripkeModel, Particular, Term};
use crate::nilsson::NilssonStructure;
use crate::rational::{format_exact, is_probability, Rational};
use num_traits::{One, Zero};
use std::fmt;

/// `φ : [lo, hi]`
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnotatedFormula {
    pub body: Formula,
    pub lo: Rational,
    pub hi: Rational,
}

impl AnnotatedFormula {
    pub fn new(body: Formula, lo: Rational, hi: Rational) -> Result<Self> {
        if !is_probability(&lo) || !is_probability(&hi) {
            return Err(Error::InvalidInterval {
                lo: lo.to_string(),
                hi: hi.to_string(),
                reason: "bounds must lie in [0, 1]".into(),
            });
        }
        if lo > hi {
            return Err(Error::InvalidInterval {
                lo: lo.to_string(),
                hi: hi.to_string(),
                reason: "empty interval".into(),
            });
        }
        Ok(AnnotatedFormula { body, lo, hi })
    }

    /// `lo ≤ weight(φ) ≤ hi` under `n`.
    pub fn holds(&self, n: &NilssonStructure) -> Result<bool> {
        let w = n.weight(&self.body)?;
        Ok(self.lo <= w && w <= self.hi)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnotatedRule {
    pub head: AnnotatedFormula,
    pub body: Vec<AnnotatedFormula>,
}

impl AnnotatedRule {
    pub fn new(head: AnnotatedFormula, body: Vec<AnnotatedFormula>) -> Result<Self> {
        if !matches!(head.body, Formula::Prop(_)) {
            return Err(Error::NonAtomicHead(head.body.to_string()));
        }
        Ok(AnnotatedRule { head, body })
    }

    pub fn is_fact(&self) -> bool {
        self.body.is_empty()
    }

    /// Some body constraint fails, or the head constraint holds.
    pub fn holds(&self, n: &NilssonStructure) -> Result<bool> {
        for b in &self.body {
            if !b.holds(n)? {
                return Ok(true);
            }
        }
        self.head.holds(n)
    }

    /// The same rule with every formula in `{⊤, ¬, ∧}` form.
    pub fn desugar(&self) -> AnnotatedRule {
        let d = |a: &AnnotatedFormula| AnnotatedFormula {
            body: a.body.desugar(),
            lo: a.lo.clone(),
            hi: a.hi.clone(),
        };
        AnnotatedRule {
            head: d(&self.head),
            body: self.body.iter().map(d).collect(),
        }
    }
}

/// A ground program; its alphabet is the Herbrand base.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundProgram {
    pub alphabet: Alphabet,
    pub rules: Vec<AnnotatedRule>,
}

impl GroundProgram {
    /// Builds a program whose alphabet is every atom mentioned, in order of
    /// first appearance.
    pub fn new(rules: Vec<AnnotatedRule>) -> Result<Self> {
        let formulas: Vec<&Formula> = rules
            .iter()
            .flat_map(|r| std::iter::once(&r.head.body).chain(r.body.iter().map(|b| &b.body)))
            .collect();
        if formulas.is_empty() {
            return Err(Error::EmptyInput);
        }
        let alphabet = Alphabet::covering(formulas)?;
        Ok(GroundProgram { alphabet, rules })
    }

    pub fn holds(&self, n: &NilssonStructure) -> Result<bool> {
        for r in &self.rules {
            if !r.holds(n)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// `{lo ≤ w(φ), w(φ) ≤ hi}`
pub fn annotate_to_constraint(af: &AnnotatedFormula) -> (WeightConstraint, WeightConstraint) {
    let w = WeightTerm::weight(af.body.clone());
    (
        WeightConstraint::new(w.clone(), Comparison::Ge, af.lo.clone()),
        WeightConstraint::new(w, Comparison::Le, af.hi.clone()),
    )
}

/// A rule whose head and body conjuncts are existential weight
/// constraints `∃x(w_N(⋖φ⋗, x) ∧ ≤(b, x) ∧ ≤(x, c))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntensionalRule {
    pub head: IFormula,
    pub body: Vec<IFormula>,
}

impl IntensionalRule {
    /// Recovers the annotated rule, with formulas in desugared form.
    pub fn to_annotated(&self) -> Result<AnnotatedRule> {
        let head = decode(&self.head)?;
        let body = self.body.iter().map(decode).collect::<Result<_>>()?;
        AnnotatedRule::new(head, body)
    }

    /// Evaluates head and body conjuncts through the intensional algebra in
    /// a model whose `w_N` is backed by `n`.
    pub fn holds(&self, m: &KripkeModel) -> Result<bool> {
        for b in &self.body {
            if !m.extension(0, b)?.is_true() {
                return Ok(true);
            }
        }
        Ok(m.extension(0, &self.head)?.is_true())
    }
}

fn encode(af: &AnnotatedFormula, var: &str) -> IFormula {
    let prop = Term::Abstract(Box::new(AbstractTerm::closed(embed(&af.body))));
    let x = || Term::var(var);
    let w = IFormula::Builtin {
        pred: BuiltinPred::Weight,
        args: vec![prop, x()],
    };
    let lo = IFormula::Builtin {
        pred: BuiltinPred::Leq,
        args: vec![Term::number(af.lo.clone()), x()],
    };
    let hi = IFormula::Builtin {
        pred: BuiltinPred::Leq,
        args: vec![x(), Term::number(af.hi.clone())],
    };
    IFormula::exists(var, IFormula::and(w, IFormula::and(lo, hi)))
}

fn decode(f: &IFormula) -> Result<AnnotatedFormula> {
    let bad = || Error::Unsupported(format!("`{f}` is not an existential weight constraint"));
    let IFormula::Exists(x, inner) = f else {
        return Err(bad());
    };
    let IFormula::And(w, bounds) = inner.as_ref() else {
        return Err(bad());
    };
    let IFormula::And(lo, hi) = bounds.as_ref() else {
        return Err(bad());
    };
    let is_x = |t: &Term| matches!(t, Term::Var(v) if v == x);
    let number = |t: &Term| match t {
        Term::Const(DomainElement::Particular(Particular::Number(q))) => Some(q.clone()),
        _ => None,
    };
    let body = match w.as_ref() {
        IFormula::Builtin {
            pred: BuiltinPred::Weight,
            args,
        } if is_x(&args[1]) => match &args[0] {
            Term::Abstract(t) if t.alpha.is_empty() && t.beta.is_empty() => extract(&t.body).ok_or_else(bad)?,
            _ => return Err(bad()),
        },
        _ => return Err(bad()),
    };
    let lo = match lo.as_ref() {
        IFormula::Builtin {
            pred: BuiltinPred::Leq,
            args,
        } if is_x(&args[1]) => number(&args[0]).ok_or_else(bad)?,
        _ => return Err(bad()),
    };
    let hi = match hi.as_ref() {
        IFormula::Builtin {
            pred: BuiltinPred::Leq,
            args,
        } if is_x(&args[0]) => number(&args[1]).ok_or_else(bad)?,
        _ => return Err(bad()),
    };
    AnnotatedFormula::new(body, lo, hi)
}

/// Head with variable `x0`, body conjuncts with `x1 … xm`.
pub fn translate_rule(r: &AnnotatedRule) -> IntensionalRule {
    IntensionalRule {
        head: encode(&r.head, "x0"),
        body: r
            .body
            .iter()
            .enumerate()
            .map(|(i, b)| encode(b, &format!("x{}", i + 1)))
            .collect(),
    }
}

pub fn translate_program(p: &GroundProgram) -> Vec<IntensionalRule> {
    p.rules.iter().map(translate_rule).collect()
}

/// Whether `af` holds under `n`, decided through the intensional algebra.
pub fn holds_intensionally(n: &NilssonStructure, af: &AnnotatedFormula) -> Result<bool> {
    let m = kripke_model(n)?;
    Ok(m.extension(0, &encode(af, "x"))?.is_true())
}

/// The constraints asserted by each way a rule can be satisfied: the head
/// holds, or one body conjunct falls strictly below or above its interval.
pub fn rule_branches(r: &AnnotatedRule) -> Vec<Vec<WeightConstraint>> {
    let (lo, hi) = annotate_to_constraint(&r.head);
    let mut out = vec![vec![lo, hi]];
    for b in &r.body {
        let w = WeightTerm::weight(b.body.clone());
        if !b.lo.is_zero() {
            out.push(vec![WeightConstraint::new(w.clone(), Comparison::Lt, b.lo.clone())]);
        }
        if !b.hi.is_one() {
            out.push(vec![WeightConstraint::new(w, Comparison::Gt, b.hi.clone())]);
        }
    }
    out
}

/// Depth-first search over rule branches, pruning with the PSAT reasoner.
/// Returns the first satisfying measure in branch order.
pub fn find_model(p: &GroundProgram, reasoner: &Reasoner) -> Result<Option<NilssonStructure>> {
    p.alphabet.check_cap(reasoner.world_cap)?;
    let branches: Vec<Vec<Vec<WeightConstraint>>> = p.rules.iter().map(rule_branches).collect();
    let mut asserted = Vec::new();
    let found = search(p, reasoner, &branches, 0, &mut asserted)?;
    if let Some(n) = &found {
        if !p.holds(n)? {
            return Err(Error::Unsupported("solver witness fails the program".into()));
        }
    }
    Ok(found)
}

fn search(
    p: &GroundProgram,
    reasoner: &Reasoner,
    branches: &[Vec<Vec<WeightConstraint>>],
    depth: usize,
    asserted: &mut Vec<WeightConstraint>,
) -> Result<Option<NilssonStructure>> {
    let result = reasoner.satisfiable(&p.alphabet, asserted)?;
    if !result.is_sat() {
        return Ok(None);
    }
    if depth == branches.len() {
        return Ok(result.witness);
    }
    for choice in &branches[depth] {
        let mark = asserted.len();
        asserted.extend(choice.iter().cloned());
        let found = search(p, reasoner, branches, depth + 1, asserted)?;
        asserted.truncate(mark);
        if found.is_some() {
            return Ok(found);
        }
    }
    Ok(None)
}

impl fmt::Display for AnnotatedFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} : [{}, {}]",
            self.body,
            format_exact(&self.lo),
            format_exact(&self.hi)
        )
    }
}

impl fmt::Display for AnnotatedRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.head)?;
        for (i, b) in self.body.iter().enumerate() {
            f.write_str(if i == 0 { " <- " } else { ", " })?;
            write!(f, "{b}")?;
        }
        f.write_str(".")
    }
}

impl fmt::Display for GroundProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rules {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

impl fmt::Display for IntensionalRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.head)?;
        for (i, b) in self.body.iter().enumerate() {
            f.write_str(if i == 0 { " <- " } else { ", " })?;
            write!(f, "{b}")?;
        }
        f.write_str(".")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn program(text: &str) -> GroundProgram {
        parse_program(text).unwrap()
    }

    #[test]
    fn constraint_pairs() {
        let af = AnnotatedFormula::new(crate::parse_formula("b & ~c").unwrap(), ratio(3, 10), ratio(3, 5)).unwrap();
        let (lo, hi) = annotate_to_constraint(&af);
        assert_eq!(lo.to_string(), "w((b & ~c)) >= 3/10");
        assert_eq!(hi.to_string(), "w((b & ~c)) <= 3/5");
    }

    #[test]
    fn fact_translation() {
        let p = program("a : [1,1].");
        let t = translate_rule(&p.rules[0]);
        assert!(t.body.is_empty());
        assert_eq!(t.to_string(), "exists x0. (w_N(<a>, x0) & (leq(1, x0) & leq(x0, 1))).");
        assert_eq!(t.to_annotated().unwrap(), p.rules[0]);
    }

    #[test]
    fn rule_translation_uses_fresh_variables() {
        let p = program("a : [0.5, 1] <- (b & ~c) : [0.3, 0.6], d | e : [0, 0.2].");
        let t = translate_rule(&p.rules[0]);
        assert_eq!(t.body.len(), 2);
        assert!(t.to_string().contains("exists x2."));
        assert_eq!(t.to_annotated().unwrap(), p.rules[0].desugar());
    }

    #[test]
    fn find_model_examples() {
        let r = Reasoner::default();
        let n = find_model(&program("a : [1,1]."), &r).unwrap().unwrap();
        assert_eq!(n.weight(&Formula::prop("a")).unwrap(), int(1));

        assert!(find_model(&program("a : [0,0]. a : [1,1]."), &r).unwrap().is_none());

        let p = program("a : [0.8,1] <- b : [0.6,1]. b : [0.7,1].");
        let n = find_model(&p, &r).unwrap().unwrap();
        assert!(n.weight(&Formula::prop("b")).unwrap() >= ratio(7, 10));
        assert!(n.weight(&Formula::prop("a")).unwrap() >= ratio(4, 5));
    }

    #[test]
    fn falsified_body_branch() {
        // the head cannot hold, so the body must be pushed out of its interval
        let p = program("a : [1,1] <- b : [0.5,1]. a : [0,0].");
        let n = find_model(&p, &Reasoner::default()).unwrap().unwrap();
        assert!(n.weight(&Formula::prop("b")).unwrap() < ratio(1, 2));
    }

    #[test]
    fn intensional_evaluation_agrees() {
        let a = Alphabet::new(["p", "q"]).unwrap();
        let n = NilssonStructure::uniform(a).unwrap();
        let f = crate::parse_formula("p & q").unwrap();
        for (lo, hi, expect) in [(ratio(1, 5), ratio(1, 3), true), (ratio(1, 3), int(1), false)] {
            let af = AnnotatedFormula::new(f.clone(), lo, hi).unwrap();
            assert_eq!(af.holds(&n).unwrap(), expect);
            assert_eq!(holds_intensionally(&n, &af).unwrap(), expect);
        }
        let m = kripke_model(&n).unwrap();
        let p = program("p : [0.5, 0.5] <- q : [0, 0.25].");
        assert!(translate_rule(&p.rules[0]).holds(&m).unwrap());
    }
}
