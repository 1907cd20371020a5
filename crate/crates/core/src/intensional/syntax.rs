//! Formulas of the intensional first-order language with abstraction.

use super::relation::DomainElement;
use crate::error::{Error, Result};
use std::collections::BTreeMap;
use std::fmt;

/// Rigid predicates with a fixed extension in every world.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BuiltinPred {
    /// `≤(u, v)`
    Leq,
    /// `⊕(u₁, u₂, u₃)`: `u₁ + u₂ = u₃`
    Sum,
    /// `⊙(u₁, u₂, u₃)`: `u₁ · u₂ = u₃`
    Product,
    /// `≐(u, v)`
    Id,
    /// `w_N(c, r)`: `r` is the probability of the proposition `c`.
    Weight,
}

impl BuiltinPred {
    pub const ALL: [BuiltinPred; 5] = [
        BuiltinPred::Leq,
        BuiltinPred::Sum,
        BuiltinPred::Product,
        BuiltinPred::Id,
        BuiltinPred::Weight,
    ];

    pub fn arity(self) -> usize {
        match self {
            BuiltinPred::Sum | BuiltinPred::Product => 3,
            _ => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BuiltinPred::Leq => "leq",
            BuiltinPred::Sum => "sum",
            BuiltinPred::Product => "prod",
            BuiltinPred::Id => "id",
            BuiltinPred::Weight => "w_N",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|b| b.name() == name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String),
    Const(DomainElement),
    /// A proper name, resolved through the interpretation's constants table.
    Name(String),
    Abstract(Box<AbstractTerm>),
}

impl Term {
    pub fn var(x: impl Into<String>) -> Self {
        Term::Var(x.into())
    }

    pub fn number(q: crate::Rational) -> Self {
        Term::Const(DomainElement::number(q))
    }

    pub fn symbol(s: impl Into<String>) -> Self {
        Term::Const(DomainElement::symbol(s))
    }

    fn free_vars(&self, out: &mut Vec<String>) {
        match self {
            Term::Var(x) => push_new(out, x),
            Term::Abstract(t) => {
                for x in &t.beta {
                    push_new(out, x);
                }
            }
            Term::Const(_) | Term::Name(_) => {}
        }
    }

    fn substitute(&self, x: &str, e: &DomainElement) -> Term {
        match self {
            Term::Var(y) if y == x => Term::Const(e.clone()),
            Term::Abstract(t) => Term::Abstract(Box::new(t.substitute(x, e))),
            other => other.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum IFormula {
    Top,
    Atom { pred: String, args: Vec<Term> },
    Builtin { pred: BuiltinPred, args: Vec<Term> },
    Not(Box<IFormula>),
    And(Box<IFormula>, Box<IFormula>),
    Exists(String, Box<IFormula>),
    Necessarily(Box<IFormula>),
    Possibly(Box<IFormula>),
}

impl IFormula {
    pub fn atom(pred: impl Into<String>, args: Vec<Term>) -> Self {
        IFormula::Atom {
            pred: pred.into(),
            args,
        }
    }

    /// A 0-ary atom.
    pub fn prop(pred: impl Into<String>) -> Self {
        Self::atom(pred, Vec::new())
    }

    pub fn builtin(pred: BuiltinPred, args: Vec<Term>) -> Result<Self> {
        if args.len() != pred.arity() {
            return Err(Error::ArityMismatch(format!(
                "{} takes {} arguments, got {}",
                pred.name(),
                pred.arity(),
                args.len()
            )));
        }
        Ok(IFormula::Builtin { pred, args })
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: IFormula) -> Self {
        IFormula::Not(Box::new(f))
    }

    pub fn and(a: IFormula, b: IFormula) -> Self {
        IFormula::And(Box::new(a), Box::new(b))
    }

    /// `¬(¬a ∧ ¬b)`
    pub fn or(a: IFormula, b: IFormula) -> Self {
        Self::not(Self::and(Self::not(a), Self::not(b)))
    }

    pub fn exists(x: impl Into<String>, f: IFormula) -> Self {
        IFormula::Exists(x.into(), Box::new(f))
    }

    pub fn necessarily(f: IFormula) -> Self {
        IFormula::Necessarily(Box::new(f))
    }

    pub fn possibly(f: IFormula) -> Self {
        IFormula::Possibly(Box::new(f))
    }

    /// Conjunction of a non-empty list, nested to the right.
    pub fn conjunction(mut parts: Vec<IFormula>) -> Option<IFormula> {
        let mut acc = parts.pop()?;
        while let Some(f) = parts.pop() {
            acc = Self::and(f, acc);
        }
        Some(acc)
    }

    /// Free variables in order of first appearance; for `φ ∧ ψ` the free
    /// variables of `φ` come first, then the new ones of `ψ`.
    pub fn free_vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_free(&mut out);
        out
    }

    fn collect_free(&self, out: &mut Vec<String>) {
        match self {
            IFormula::Top => {}
            IFormula::Atom { args, .. } | IFormula::Builtin { args, .. } => {
                for a in args {
                    a.free_vars(out);
                }
            }
            IFormula::Not(f) | IFormula::Necessarily(f) | IFormula::Possibly(f) => f.collect_free(out),
            IFormula::And(a, b) => {
                a.collect_free(out);
                b.collect_free(out);
            }
            IFormula::Exists(x, f) => {
                for y in f.free_vars() {
                    if &y != x {
                        push_new(out, &y);
                    }
                }
            }
        }
    }

    pub fn is_ground(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// `φ[x/e]`
    pub fn substitute(&self, x: &str, e: &DomainElement) -> IFormula {
        match self {
            IFormula::Top => IFormula::Top,
            IFormula::Atom { pred, args } => IFormula::Atom {
                pred: pred.clone(),
                args: args.iter().map(|a| a.substitute(x, e)).collect(),
            },
            IFormula::Builtin { pred, args } => IFormula::Builtin {
                pred: *pred,
                args: args.iter().map(|a| a.substitute(x, e)).collect(),
            },
            IFormula::Not(f) => Self::not(f.substitute(x, e)),
            IFormula::And(a, b) => Self::and(a.substitute(x, e), b.substitute(x, e)),
            IFormula::Exists(y, f) if y == x => self.clone(),
            IFormula::Exists(y, f) => Self::exists(y.clone(), f.substitute(x, e)),
            IFormula::Necessarily(f) => Self::necessarily(f.substitute(x, e)),
            IFormula::Possibly(f) => Self::possibly(f.substitute(x, e)),
        }
    }

    /// `φ/g`: every free variable bound by `g` replaced by its value.
    pub fn ground(&self, g: &Assignment) -> IFormula {
        g.iter().fold(self.clone(), |f, (x, e)| f.substitute(x, e))
    }

    pub fn is_modal(&self) -> bool {
        match self {
            IFormula::Necessarily(_) | IFormula::Possibly(_) => true,
            IFormula::Top => false,
            IFormula::Atom { args, .. } | IFormula::Builtin { args, .. } => args.iter().any(|a| match a {
                Term::Abstract(t) => t.body.is_modal(),
                _ => false,
            }),
            IFormula::Not(f) | IFormula::Exists(_, f) => f.is_modal(),
            IFormula::And(a, b) => a.is_modal() || b.is_modal(),
        }
    }
}

fn push_new(out: &mut Vec<String>, x: &str) {
    if !out.iter().any(|y| y == x) {
        out.push(x.to_string());
    }
}

/// Variable assignment `g`.
pub type Assignment = BTreeMap<String, DomainElement>;

/// `⋖φ⋗_α^β`: `α` are the abstracted variables, `β` the ones left open to
/// external quantification.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AbstractTerm {
    pub body: IFormula,
    pub alpha: Vec<String>,
    pub beta: Vec<String>,
}

impl AbstractTerm {
    /// Checks that `α` and `β` are disjoint lists of distinct variables.
    /// Whether they cover the free variables of the body is not required
    /// here; see [`AbstractTerm::is_well_formed`].
    pub fn new(body: IFormula, alpha: Vec<String>, beta: Vec<String>) -> Result<Self> {
        for (i, x) in alpha.iter().chain(&beta).enumerate() {
            if alpha.iter().chain(&beta).skip(i + 1).any(|y| y == x) {
                return Err(Error::Unsupported(format!("variable `{x}` repeated in abstraction")));
            }
        }
        Ok(AbstractTerm { body, alpha, beta })
    }

    /// `⋖φ⋗` with every free variable of `φ` abstracted.
    pub fn closed(body: IFormula) -> Self {
        let alpha = body.free_vars();
        AbstractTerm {
            body,
            alpha,
            beta: Vec::new(),
        }
    }

    /// `⋖φ⋗_α^β` with `β` the free variables of `φ` outside `α`.
    pub fn abstracting(body: IFormula, alpha: Vec<String>) -> Result<Self> {
        let beta = body.free_vars().into_iter().filter(|x| !alpha.contains(x)).collect();
        Self::new(body, alpha, beta)
    }

    /// `α ∪ β = fv(φ)`.
    pub fn is_well_formed(&self) -> bool {
        let fv = self.body.free_vars();
        fv.len() == self.alpha.len() + self.beta.len() && self.alpha.iter().chain(&self.beta).all(|x| fv.contains(x))
    }

    pub fn arity(&self) -> usize {
        self.alpha.len()
    }

    fn substitute(&self, x: &str, e: &DomainElement) -> AbstractTerm {
        if self.alpha.iter().any(|a| a == x) {
            return self.clone();
        }
        AbstractTerm {
            body: self.body.substitute(x, e),
            alpha: self.alpha.clone(),
            beta: self.beta.iter().filter(|b| *b != x).cloned().collect(),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(x) | Term::Name(x) => f.write_str(x),
            Term::Const(e) => e.fmt(f),
            Term::Abstract(t) => t.fmt(f),
        }
    }
}

impl fmt::Display for AbstractTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.body)?;
        if !self.alpha.is_empty() {
            write!(f, "_[{}]", self.alpha.join(", "))?;
        }
        if !self.beta.is_empty() {
            write!(f, "^[{}]", self.beta.join(", "))?;
        }
        Ok(())
    }
}

fn write_args(f: &mut fmt::Formatter<'_>, name: &str, args: &[Term]) -> fmt::Result {
    f.write_str(name)?;
    if args.is_empty() {
        return Ok(());
    }
    f.write_str("(")?;
    for (i, a) in args.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{a}")?;
    }
    f.write_str(")")
}

impl fmt::Display for IFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IFormula::Top => f.write_str("true"),
            IFormula::Atom { pred, args } => write_args(f, pred, args),
            IFormula::Builtin { pred, args } => write_args(f, pred.name(), args),
            IFormula::Not(g) => write!(f, "~{g}"),
            IFormula::And(a, b) => write!(f, "({a} & {b})"),
            IFormula::Exists(x, g) => write!(f, "exists {x}. {g}"),
            IFormula::Necessarily(g) => write!(f, "[]{g}"),
            IFormula::Possibly(g) => write!(f, "<>{g}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn p(x: &str) -> IFormula {
        IFormula::atom("p", vec![Term::var(x)])
    }

    #[test]
    fn free_variable_order() {
        let f = IFormula::and(
            IFormula::atom("r", vec![Term::var("y"), Term::var("x")]),
            IFormula::atom("s", vec![Term::var("x"), Term::var("z")]),
        );
        assert_eq!(f.free_vars(), ["y", "x", "z"]);
        assert_eq!(IFormula::exists("x", f).free_vars(), ["y", "z"]);
    }

    #[test]
    fn substitution_respects_binders() {
        let f = IFormula::and(p("x"), IFormula::exists("x", p("x")));
        let g = f.substitute("x", &DomainElement::number(int(1)));
        assert_eq!(g.to_string(), "(p(1) & exists x. p(x))");
        assert!(g.is_ground());
    }

    #[test]
    fn abstracts() {
        let body = IFormula::and(p("x"), IFormula::atom("q", vec![Term::var("y")]));
        let t = AbstractTerm::abstracting(body.clone(), vec!["x".into()]).unwrap();
        assert_eq!(t.beta, ["y"]);
        assert!(t.is_well_formed());
        assert_eq!(t.to_string(), "<(p(x) & q(y))>_[x]^[y]");
        let bad = AbstractTerm::new(body.clone(), vec!["x".into()], vec![]).unwrap();
        assert!(!bad.is_well_formed());
        assert!(AbstractTerm::new(body, vec!["x".into()], vec!["x".into()]).is_err());

        let outer = IFormula::atom("b", vec![Term::Abstract(Box::new(t))]);
        assert_eq!(outer.free_vars(), ["y"]);
        let g = outer.substitute("y", &DomainElement::symbol("a"));
        assert!(g.is_ground());
        assert_eq!(g.to_string(), "b(<(p(x) & q('a'))>_[x])");
    }

    #[test]
    fn builtin_arity_checked() {
        assert!(IFormula::builtin(BuiltinPred::Sum, vec![Term::var("x")]).is_err());
        let w = IFormula::builtin(BuiltinPred::Leq, vec![Term::number(int(0)), Term::var("x")]).unwrap();
        assert_eq!(w.to_string(), "leq(0, x)");
    }
}
