//! Intensional concepts and the interpretation `I`.
//!
//! Concepts are interned by the structure of the algebra expression that
//! produced them: two distinct predicate atoms always get distinct
//! concepts, even when their extensions coincide in every world.

use super::relation::{ConceptRef, DomainElement};
use super::syntax::{AbstractTerm, Assignment, BuiltinPred, IFormula, Term};
use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::nilsson::NilssonStructure;
use crate::rational::Rational;
use num_traits::Zero;
use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

/// Argument position of an atomic concept: a column of the concept or a
/// fixed element.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Slot {
    Var(usize),
    Const(DomainElement),
}

/// The algebra expression a concept was built from.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ConceptExpr {
    /// `Truth ∈ D₀`
    Truth,
    Atom {
        pred: String,
        pattern: Vec<Slot>,
    },
    Builtin {
        pred: BuiltinPred,
        pattern: Vec<Slot>,
    },
    /// `conj_S(u, v)` with 1-based column pairs.
    Conj {
        pairs: Vec<(usize, usize)>,
        left: ConceptRef,
        right: ConceptRef,
    },
    Neg(ConceptRef),
    /// `exists_n(u)`
    Exists {
        column: usize,
        of: ConceptRef,
    },
    Necess(ConceptRef),
}

/// What an abstract term denotes: a concept, or the empty tuple `⟨⟩ ∈ D₋₁`
/// when its abstracted and open variables do not match the free variables
/// of its body.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Denotation {
    Concept(ConceptRef),
    EmptyTuple { reason: String },
}

impl Denotation {
    pub fn element(&self) -> DomainElement {
        match self {
            Denotation::Concept(c) => DomainElement::Concept(*c),
            Denotation::EmptyTuple { .. } => DomainElement::unit(),
        }
    }

    pub fn concept(&self) -> Option<ConceptRef> {
        match self {
            Denotation::Concept(c) => Some(*c),
            Denotation::EmptyTuple { .. } => None,
        }
    }
}

/// Result of checking a tuple against a built-in relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Membership {
    Holds(bool),
    Mismatch(String),
}

#[derive(Debug, Default)]
struct Table {
    exprs: Vec<(ConceptExpr, usize)>,
    index: HashMap<ConceptExpr, usize>,
}

#[derive(Debug)]
pub struct Interpretation {
    domain: Vec<DomainElement>,
    predicates: BTreeMap<String, usize>,
    constants: BTreeMap<String, DomainElement>,
    structure: Option<NilssonStructure>,
    table: Mutex<Table>,
}

impl Clone for Interpretation {
    fn clone(&self) -> Self {
        let table = self.table.lock().expect("concept table poisoned");
        Interpretation {
            domain: self.domain.clone(),
            predicates: self.predicates.clone(),
            constants: self.constants.clone(),
            structure: self.structure.clone(),
            table: Mutex::new(Table {
                exprs: table.exprs.clone(),
                index: table.index.clone(),
            }),
        }
    }
}

impl Interpretation {
    /// An interpretation over a finite active domain with declared
    /// predicate arities.
    pub fn new(
        domain: impl IntoIterator<Item = DomainElement>,
        predicates: impl IntoIterator<Item = (String, usize)>,
    ) -> Result<Self> {
        let mut domain: Vec<DomainElement> = domain.into_iter().collect();
        domain.sort();
        domain.dedup();
        let mut preds = BTreeMap::new();
        for (name, arity) in predicates {
            if BuiltinPred::from_name(&name).is_some() {
                return Err(Error::Unsupported(format!("`{name}` is a built-in predicate")));
            }
            if preds.insert(name.clone(), arity).is_some_and(|a| a != arity) {
                return Err(Error::ArityMismatch(format!("predicate `{name}` declared twice")));
            }
        }
        Ok(Interpretation {
            domain,
            predicates: preds,
            constants: BTreeMap::new(),
            structure: None,
            table: Mutex::new(Table::default()),
        })
    }

    /// Binds the structure backing `w_N`; its propositions become 0-ary
    /// predicates.
    pub fn with_structure(mut self, n: NilssonStructure) -> Result<Self> {
        for p in n.alphabet().props() {
            match self.predicates.get(p) {
                Some(&a) if a != 0 => {
                    return Err(Error::ArityMismatch(format!(
                        "proposition `{p}` declared with arity {a}"
                    )))
                }
                _ => {
                    self.predicates.insert(p.clone(), 0);
                }
            }
        }
        self.structure = Some(n);
        Ok(self)
    }

    pub fn with_constant(mut self, name: impl Into<String>, value: DomainElement) -> Self {
        self.constants.insert(name.into(), value);
        self
    }

    /// Adds elements (for instance concepts used as arguments) to the
    /// active domain.
    pub fn extend_domain(&mut self, elements: impl IntoIterator<Item = DomainElement>) {
        self.domain.extend(elements);
        self.domain.sort();
        self.domain.dedup();
    }

    pub fn domain(&self) -> &[DomainElement] {
        &self.domain
    }

    pub fn predicates(&self) -> &BTreeMap<String, usize> {
        &self.predicates
    }

    pub fn arity_of(&self, pred: &str) -> Result<usize> {
        self.predicates
            .get(pred)
            .copied()
            .ok_or_else(|| Error::UnknownPredicate(pred.to_string()))
    }

    pub fn constant(&self, name: &str) -> Option<&DomainElement> {
        self.constants.get(name)
    }

    pub fn structure(&self) -> Option<&NilssonStructure> {
        self.structure.as_ref()
    }

    pub fn expr(&self, c: ConceptRef) -> Result<ConceptExpr> {
        let table = self.table.lock().expect("concept table poisoned");
        table
            .exprs
            .get(c.id)
            .filter(|(_, a)| *a == c.arity)
            .map(|(e, _)| e.clone())
            .ok_or_else(|| Error::Unsupported(format!("concept {c} does not belong to this interpretation")))
    }

    fn intern(&self, expr: ConceptExpr) -> Result<ConceptRef> {
        let arity = self.arity_of_expr(&expr)?;
        let mut table = self.table.lock().expect("concept table poisoned");
        if let Some(&id) = table.index.get(&expr) {
            return Ok(ConceptRef { arity, id });
        }
        let id = table.exprs.len();
        table.exprs.push((expr.clone(), arity));
        table.index.insert(expr, id);
        Ok(ConceptRef { arity, id })
    }

    fn arity_of_expr(&self, expr: &ConceptExpr) -> Result<usize> {
        Ok(match expr {
            ConceptExpr::Truth => 0,
            ConceptExpr::Atom { pattern, .. } | ConceptExpr::Builtin { pattern, .. } => pattern_arity(pattern)?,
            ConceptExpr::Conj { pairs, left, right } => {
                for &(i1, i2) in pairs {
                    if i1 == 0 || i1 > left.arity || i2 == 0 || i2 > right.arity {
                        return Err(Error::IndexOutOfRange(format!(
                            "join pair ({i1}, {i2}) for arities {} and {}",
                            left.arity, right.arity
                        )));
                    }
                }
                let mut joined: Vec<usize> = pairs.iter().map(|p| p.1).collect();
                joined.sort_unstable();
                joined.dedup();
                left.arity + right.arity - joined.len()
            }
            ConceptExpr::Neg(u) | ConceptExpr::Necess(u) => u.arity,
            ConceptExpr::Exists { column, of } => {
                if *column >= 1 && *column <= of.arity {
                    of.arity - 1
                } else {
                    of.arity
                }
            }
        })
    }

    /// `Truth ∈ D₀`
    pub fn truth(&self) -> ConceptRef {
        self.intern(ConceptExpr::Truth).expect("truth concept")
    }

    /// `Id ∈ D₂`, the concept of the identity predicate.
    pub fn identity(&self) -> ConceptRef {
        self.intern(ConceptExpr::Builtin {
            pred: BuiltinPred::Id,
            pattern: vec![Slot::Var(0), Slot::Var(1)],
        })
        .expect("identity concept")
    }

    pub fn conj(&self, pairs: &[(usize, usize)], u: ConceptRef, v: ConceptRef) -> Result<ConceptRef> {
        self.intern(ConceptExpr::Conj {
            pairs: pairs.to_vec(),
            left: u,
            right: v,
        })
    }

    pub fn neg(&self, u: ConceptRef) -> Result<ConceptRef> {
        self.intern(ConceptExpr::Neg(u))
    }

    pub fn exists(&self, column: usize, u: ConceptRef) -> Result<ConceptRef> {
        self.intern(ConceptExpr::Exists { column, of: u })
    }

    pub fn necess(&self, u: ConceptRef) -> Result<ConceptRef> {
        self.intern(ConceptExpr::Necess(u))
    }

    /// `◊` as `neg(necess(neg u))`.
    pub fn possibly(&self, u: ConceptRef) -> Result<ConceptRef> {
        let inner = self.neg(u)?;
        let nec = self.necess(inner)?;
        self.neg(nec)
    }

    /// `union(B)`: `u₁` for a singleton, otherwise
    /// `neg(conj_S(neg u₁, union(B \ {u₁})))` with `S = {(l, l)}`.
    pub fn union_concepts(&self, b: &[ConceptRef]) -> Result<ConceptRef> {
        let mut members = b.to_vec();
        members.sort();
        members.dedup();
        let first = *members.first().ok_or(Error::EmptyUnion)?;
        if let Some(c) = members.iter().find(|c| c.arity != first.arity) {
            return Err(Error::ArityMismatch(format!(
                "union of concepts with arities {} and {}",
                first.arity, c.arity
            )));
        }
        if members.len() == 1 {
            return Ok(first);
        }
        let pairs: Vec<(usize, usize)> = (1..=first.arity).map(|l| (l, l)).collect();
        let mut negs = members.iter().rev().map(|&u| self.neg(u));
        let mut acc = negs.next().expect("non-empty")?;
        for n in negs {
            acc = self.conj(&pairs, n?, acc)?;
        }
        self.neg(acc)
    }

    /// `I(φ)`. Columns of the concept follow the free variables of `φ` in
    /// order of first appearance.
    pub fn interpret(&self, f: &IFormula) -> Result<ConceptRef> {
        match f {
            IFormula::Top => Ok(self.truth()),
            IFormula::Atom { pred, args } => {
                let arity = self.arity_of(pred)?;
                if arity != args.len() {
                    return Err(Error::ArityMismatch(format!(
                        "`{pred}` has arity {arity}, applied to {} arguments",
                        args.len()
                    )));
                }
                let pattern = self.pattern(args)?;
                self.intern(ConceptExpr::Atom {
                    pred: pred.clone(),
                    pattern,
                })
            }
            IFormula::Builtin { pred, args } => {
                if pred.arity() != args.len() {
                    return Err(Error::ArityMismatch(format!(
                        "{} applied to {} arguments",
                        pred.name(),
                        args.len()
                    )));
                }
                let pattern = self.pattern(args)?;
                self.intern(ConceptExpr::Builtin { pred: *pred, pattern })
            }
            IFormula::Not(g) => {
                let u = self.interpret(g)?;
                self.neg(u)
            }
            IFormula::And(a, b) => {
                let (u, v) = (self.interpret(a)?, self.interpret(b)?);
                let (fa, fb) = (a.free_vars(), b.free_vars());
                let pairs: Vec<(usize, usize)> = fb
                    .iter()
                    .enumerate()
                    .filter_map(|(j, x)| fa.iter().position(|y| y == x).map(|i| (i + 1, j + 1)))
                    .collect();
                self.conj(&pairs, u, v)
            }
            IFormula::Exists(x, g) => {
                let u = self.interpret(g)?;
                match g.free_vars().iter().position(|y| y == x) {
                    Some(i) => self.exists(i + 1, u),
                    None => Ok(u),
                }
            }
            IFormula::Necessarily(g) => {
                let u = self.interpret(g)?;
                self.necess(u)
            }
            IFormula::Possibly(g) => {
                let u = self.interpret(g)?;
                self.possibly(u)
            }
        }
    }

    fn pattern(&self, args: &[Term]) -> Result<Vec<Slot>> {
        let mut vars: Vec<&str> = Vec::new();
        args.iter()
            .map(|a| {
                Ok(match a {
                    Term::Var(x) => match vars.iter().position(|y| y == x) {
                        Some(i) => Slot::Var(i),
                        None => {
                            vars.push(x);
                            Slot::Var(vars.len() - 1)
                        }
                    },
                    Term::Const(e) => Slot::Const(e.clone()),
                    Term::Name(n) => Slot::Const(self.resolve_name(n)?),
                    Term::Abstract(t) => {
                        if !t.beta.is_empty() {
                            return Err(Error::Unsupported(format!(
                                "abstract term `{t}` with open variables used as an argument"
                            )));
                        }
                        Slot::Const(self.interpret_abstract(t)?.element())
                    }
                })
            })
            .collect()
    }

    fn resolve_name(&self, n: &str) -> Result<DomainElement> {
        self.constants
            .get(n)
            .cloned()
            .ok_or_else(|| Error::Unsupported(format!("unknown constant `{n}`")))
    }

    /// `I(⋖φ⋗_α^β) = union({I(φ[β/g(β)]) | g})` with `g` ranging over the
    /// active domain. For `β = ∅` this is `I(φ)`.
    pub fn interpret_abstract(&self, t: &AbstractTerm) -> Result<Denotation> {
        if let Some(reason) = ill_formed(t) {
            return Ok(Denotation::EmptyTuple { reason });
        }
        if t.beta.is_empty() {
            return Ok(Denotation::Concept(self.interpret(&t.body)?));
        }
        if self.domain.is_empty() {
            return Err(Error::EmptyUnion);
        }
        let mut concepts = Vec::new();
        let mut idx = vec![0usize; t.beta.len()];
        loop {
            let mut body = t.body.clone();
            for (x, &i) in t.beta.iter().zip(&idx) {
                body = body.substitute(x, &self.domain[i]);
            }
            concepts.push(self.interpret(&body)?);
            let mut k = 0;
            while k < idx.len() {
                idx[k] += 1;
                if idx[k] < self.domain.len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == idx.len() {
                break;
            }
        }
        Ok(Denotation::Concept(self.union_concepts(&concepts)?))
    }

    /// `g*(⋖φ⋗_α^β) = I(φ[β/g(β)])`.
    pub fn instantiate_abstract(&self, t: &AbstractTerm, g: &Assignment) -> Result<Denotation> {
        if let Some(reason) = ill_formed(t) {
            return Ok(Denotation::EmptyTuple { reason });
        }
        let mut body = t.body.clone();
        for x in &t.beta {
            let e = g.get(x).ok_or_else(|| Error::Unassigned(x.clone()))?;
            body = body.substitute(x, e);
        }
        Ok(Denotation::Concept(self.interpret(&body)?))
    }

    /// `g*(t)` for any term.
    pub fn term_value(&self, t: &Term, g: &Assignment) -> Result<DomainElement> {
        match t {
            Term::Var(x) => g.get(x).cloned().ok_or_else(|| Error::Unassigned(x.clone())),
            Term::Const(e) => Ok(e.clone()),
            Term::Name(n) => self.resolve_name(n),
            Term::Abstract(a) => Ok(self.instantiate_abstract(a, g)?.element()),
        }
    }

    /// The proposition of `L(Φ)` a 0-ary concept interprets, if any.
    pub fn proposition_of(&self, c: ConceptRef) -> Option<Formula> {
        if c.arity != 0 {
            return None;
        }
        let alphabet = self.structure.as_ref()?.alphabet();
        match self.expr(c).ok()? {
            ConceptExpr::Truth => Some(Formula::True),
            ConceptExpr::Atom { pred, pattern } if pattern.is_empty() && alphabet.contains(&pred) => {
                Some(Formula::Prop(pred))
            }
            ConceptExpr::Neg(u) => Some(Formula::not(self.proposition_of(u)?)),
            ConceptExpr::Conj { left, right, .. } => {
                Some(Formula::and(self.proposition_of(left)?, self.proposition_of(right)?))
            }
            ConceptExpr::Exists { of, .. } => self.proposition_of(of),
            _ => None,
        }
    }

    /// Membership in a built-in relation. Fails on arity or type mismatch.
    pub fn builtin_membership(&self, pred: BuiltinPred, tuple: &[DomainElement]) -> Result<bool> {
        if tuple.len() != pred.arity() {
            return Err(Error::ArityMismatch(format!(
                "{} takes {} arguments, got {}",
                pred.name(),
                pred.arity(),
                tuple.len()
            )));
        }
        match self.check_builtin(pred, tuple)? {
            Membership::Holds(b) => Ok(b),
            Membership::Mismatch(m) => Err(Error::TypeMismatch(m)),
        }
    }

    pub(crate) fn check_builtin(&self, pred: BuiltinPred, t: &[DomainElement]) -> Result<Membership> {
        let nums: Option<Vec<&Rational>> = t.iter().map(DomainElement::as_number).collect();
        Ok(match pred {
            BuiltinPred::Id => Membership::Holds(t[0] == t[1]),
            BuiltinPred::Leq => match nums {
                Some(v) => Membership::Holds(v[0] <= v[1]),
                None => mismatch(pred, t),
            },
            BuiltinPred::Sum => match nums {
                Some(v) => Membership::Holds(v[0] + v[1] == *v[2]),
                None => mismatch(pred, t),
            },
            BuiltinPred::Product => match nums {
                Some(v) => Membership::Holds(v[0] * v[1] == *v[2]),
                None => mismatch(pred, t),
            },
            BuiltinPred::Weight => match (t[0].as_concept(), t[1].as_number()) {
                (Some(c), Some(r)) if c.arity == 0 => match self.weight_of(c)? {
                    Some(w) => Membership::Holds(&w == r),
                    None => Membership::Holds(false),
                },
                _ => mismatch(pred, t),
            },
        })
    }

    fn weight_of(&self, c: ConceptRef) -> Result<Option<Rational>> {
        let n = self
            .structure
            .as_ref()
            .ok_or_else(|| Error::Unsupported("w_N used without a probability structure".into()))?;
        match self.proposition_of(c) {
            Some(f) => Ok(Some(n.weight(&f)?)),
            None => Ok(None),
        }
    }

    /// For a built-in tuple with exactly one position functionally
    /// determined by the bound ones, returns that position and its value.
    pub(crate) fn determine(
        &self,
        pred: BuiltinPred,
        args: &[Option<DomainElement>],
    ) -> Result<Option<(usize, DomainElement)>> {
        let num = |i: usize| args[i].as_ref().and_then(DomainElement::as_number);
        let unbound: Vec<usize> = (0..args.len()).filter(|&i| args[i].is_none()).collect();
        if unbound.len() != 1 {
            return Ok(None);
        }
        let i = unbound[0];
        let number = |q: Option<Rational>| q.map(DomainElement::number);
        let value = match (pred, i) {
            (BuiltinPred::Id, _) => args[1 - i].clone(),
            (BuiltinPred::Sum, 2) => number(num(0).zip(num(1)).map(|(a, b)| a + b)),
            (BuiltinPred::Sum, 1) => number(num(2).zip(num(0)).map(|(c, a)| c - a)),
            (BuiltinPred::Sum, 0) => number(num(2).zip(num(1)).map(|(c, b)| c - b)),
            (BuiltinPred::Product, 2) => number(num(0).zip(num(1)).map(|(a, b)| a * b)),
            (BuiltinPred::Product, 1) => number(num(2).zip(num(0)).filter(|(_, a)| !a.is_zero()).map(|(c, a)| c / a)),
            (BuiltinPred::Product, 0) => number(num(2).zip(num(1)).filter(|(_, b)| !b.is_zero()).map(|(c, b)| c / b)),
            (BuiltinPred::Weight, 1) => match args[0].as_ref().and_then(DomainElement::as_concept) {
                Some(c) if c.arity == 0 => number(self.weight_of(c)?),
                _ => None,
            },
            _ => None,
        };
        Ok(value.map(|v| (i, v)))
    }
}

fn mismatch(pred: BuiltinPred, t: &[DomainElement]) -> Membership {
    Membership::Mismatch(format!("{} applied to {}", pred.name(), super::relation::show_tuple(t)))
}

fn pattern_arity(pattern: &[Slot]) -> Result<usize> {
    let mut next = 0;
    for s in pattern {
        if let Slot::Var(i) = s {
            if *i > next {
                return Err(Error::Unsupported("atom pattern columns out of order".into()));
            }
            if *i == next {
                next += 1;
            }
        }
    }
    Ok(next)
}

fn ill_formed(t: &AbstractTerm) -> Option<String> {
    if t.is_well_formed() {
        None
    } else {
        Some(format!(
            "abstracted and open variables of `{t}` do not match the free variables {:?} of its body",
            t.body.free_vars()
        ))
    }
}
