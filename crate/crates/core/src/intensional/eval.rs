//! Extensionalization functions and the computation of `h(u)` for concepts.
//!
//! User predicates have finite extensions and go through the relational
//! operators directly. Built-in relations range over the rationals, so they
//! stay symbolic as literals of a conjunctive query until every variable is
//! bound by a finite generator or by functional propagation (`⊕`, `⊙`,
//! `w_N`, `Id`).

use super::concept::{ConceptExpr, Interpretation, Membership, Slot};
use super::relation::{complement, natural_join, project_out, ConceptRef, DomainElement, Relation, Tuple};
use super::syntax::{BuiltinPred, IFormula};
use crate::error::{Error, Result};
use std::collections::{BTreeMap, HashMap};

/// A possible world `h`: the extension of every user predicate. Predicates
/// without an entry have the empty extension.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Extensionalization {
    base: BTreeMap<String, Relation>,
}

impl Extensionalization {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, pred: impl Into<String>, r: Relation) -> Self {
        self.base.insert(pred.into(), r);
        self
    }

    pub fn set(&mut self, pred: impl Into<String>, r: Relation) {
        self.base.insert(pred.into(), r);
    }

    pub fn get(&self, pred: &str) -> Option<&Relation> {
        self.base.get(pred)
    }

    pub fn predicates(&self) -> impl Iterator<Item = (&String, &Relation)> {
        self.base.iter()
    }

    /// Checks every extension against the interpretation's declared arities.
    pub fn validate(&self, i: &Interpretation) -> Result<()> {
        for (p, r) in &self.base {
            let a = i.arity_of(p)?;
            if a != r.arity() {
                return Err(Error::ArityMismatch(format!(
                    "extension of `{p}` has arity {}, declared {a}",
                    r.arity()
                )));
            }
        }
        Ok(())
    }

    pub(crate) fn relation(&self, pred: &str, arity: usize) -> Result<Relation> {
        match self.base.get(pred) {
            Some(r) if r.arity() != arity => Err(Error::ArityMismatch(format!(
                "extension of `{pred}` has arity {}, expected {arity}",
                r.arity()
            ))),
            Some(r) => Ok(r.clone()),
            None => Ok(Relation::empty(arity)),
        }
    }
}

/// `h(I(φ))` for a non-modal formula.
pub fn extensionalize(i: &Interpretation, h: &Extensionalization, f: &IFormula) -> Result<Relation> {
    let c = i.interpret(f)?;
    concept_extension(i, h, &[], c)
}

/// `h(u)`. `worlds` is the full set of extensionalizations, needed only for
/// modal concepts.
pub fn concept_extension(
    i: &Interpretation,
    h: &Extensionalization,
    worlds: &[Extensionalization],
    c: ConceptRef,
) -> Result<Relation> {
    let mut ev = Evaluator::new(i, h, worlds);
    let p = ev.eval(c)?;
    p.materialize(i)
}

/// Extension of `□u`: the intersection of `h(u)` over all worlds.
pub fn necess_extension(i: &Interpretation, c: ConceptRef, worlds: &[Extensionalization]) -> Result<Relation> {
    let n = i.necess(c)?;
    let first = worlds.first().ok_or(Error::EmptyWorldSet)?;
    concept_extension(i, first, worlds, n)
}

/// Extension of `◊u`, computed as `neg(necess(neg u))`.
pub fn possibility_extension(i: &Interpretation, c: ConceptRef, worlds: &[Extensionalization]) -> Result<Relation> {
    let n = i.possibly(c)?;
    let first = worlds.first().ok_or(Error::EmptyWorldSet)?;
    concept_extension(i, first, worlds, n)
}

type Var = usize;

#[derive(Debug, Clone)]
enum Arg {
    Var(Var),
    Const(DomainElement),
}

#[derive(Debug, Clone)]
enum Lit {
    Pos(BuiltinPred, Vec<Arg>),
    /// Negation of a conjunction; variables not bound outside must be
    /// determined inside.
    NegConj(Vec<Lit>),
}

impl Lit {
    fn rename(&self, f: &impl Fn(Var) -> Var) -> Lit {
        match self {
            Lit::Pos(p, args) => Lit::Pos(
                *p,
                args.iter()
                    .map(|a| match a {
                        Arg::Var(v) => Arg::Var(f(*v)),
                        c => c.clone(),
                    })
                    .collect(),
            ),
            Lit::NegConj(ls) => Lit::NegConj(ls.iter().map(|l| l.rename(f)).collect()),
        }
    }
}

/// `{ out | ∃ other vars: gen(gen_vars) ∧ lits }`
#[derive(Debug, Clone)]
struct Pending {
    out: Vec<Var>,
    gen_vars: Vec<Var>,
    gen: Relation,
    lits: Vec<Lit>,
    nvars: usize,
}

impl Pending {
    fn finite(r: Relation) -> Self {
        let k = r.arity();
        Pending {
            out: (0..k).collect(),
            gen_vars: (0..k).collect(),
            gen: r,
            lits: Vec::new(),
            nvars: k,
        }
    }

    fn builtin(pred: BuiltinPred, pattern: &[Slot]) -> Self {
        let mut nvars = 0;
        let args = pattern
            .iter()
            .map(|s| match s {
                Slot::Var(v) => {
                    nvars = nvars.max(v + 1);
                    Arg::Var(*v)
                }
                Slot::Const(e) => Arg::Const(e.clone()),
            })
            .collect();
        Pending {
            out: (0..nvars).collect(),
            gen_vars: Vec::new(),
            gen: Relation::truth(),
            lits: vec![Lit::Pos(pred, args)],
            nvars,
        }
    }

    fn as_finite(&self) -> Option<&Relation> {
        (self.lits.is_empty() && self.gen_vars == self.out).then_some(&self.gen)
    }

    fn arity(&self) -> usize {
        self.out.len()
    }

    fn materialize(&self, i: &Interpretation) -> Result<Relation> {
        if let Some(r) = self.as_finite() {
            return Ok(r.clone());
        }
        let mut out = Relation::empty(self.out.len());
        'tuples: for t in self.gen.tuples() {
            let mut b: Vec<Option<DomainElement>> = vec![None; self.nvars];
            for (&v, e) in self.gen_vars.iter().zip(t) {
                match &b[v] {
                    Some(prev) if prev != e => continue 'tuples,
                    _ => b[v] = Some(e.clone()),
                }
            }
            if !solve(i, &self.lits, &mut b)? {
                continue;
            }
            let row: Result<Tuple> = self.out.iter().map(|&v| b[v].clone().ok_or_else(unbound)).collect();
            out.insert(row?)?;
        }
        Ok(out)
    }

    fn join(a: Pending, b: Pending, pairs: &[(usize, usize)]) -> Result<Pending> {
        for &(i1, i2) in pairs {
            if i1 == 0 || i1 > a.arity() || i2 == 0 || i2 > b.arity() {
                return Err(Error::IndexOutOfRange(format!(
                    "join pair ({i1}, {i2}) for arities {} and {}",
                    a.arity(),
                    b.arity()
                )));
            }
        }
        if let (Some(ra), Some(rb)) = (a.as_finite(), b.as_finite()) {
            return Ok(Pending::finite(natural_join(ra, rb, pairs)?));
        }
        let off = a.nvars;
        let n = a.nvars + b.nvars;
        let mut parent: Vec<Var> = (0..n).collect();
        fn find(parent: &mut [Var], v: Var) -> Var {
            let mut r = v;
            while parent[r] != r {
                r = parent[r];
            }
            parent[v] = r;
            r
        }
        for &(i1, i2) in pairs {
            let x = find(&mut parent, a.out[i1 - 1]);
            let y = find(&mut parent, b.out[i2 - 1] + off);
            if x != y {
                parent[x.max(y)] = x.min(y);
            }
        }
        let canon: Vec<Var> = (0..n).map(|v| find(&mut parent, v)).collect();
        let ra = |v: Var| canon[v];
        let rb = |v: Var| canon[v + off];

        let a_gen: Vec<Var> = a.gen_vars.iter().map(|&v| ra(v)).collect();
        let b_gen: Vec<Var> = b.gen_vars.iter().map(|&v| rb(v)).collect();
        let gen_pairs: Vec<(usize, usize)> = b_gen
            .iter()
            .enumerate()
            .filter_map(|(j, v)| a_gen.iter().position(|u| u == v).map(|i| (i + 1, j + 1)))
            .collect();
        let gen = natural_join(&a.gen, &b.gen, &gen_pairs)?;
        let mut gen_vars = a_gen;
        gen_vars.extend(
            b_gen
                .iter()
                .enumerate()
                .filter(|(j, _)| !gen_pairs.iter().any(|p| p.1 == j + 1))
                .map(|(_, &v)| v),
        );

        let mut out: Vec<Var> = a.out.iter().map(|&v| ra(v)).collect();
        out.extend(
            b.out
                .iter()
                .enumerate()
                .filter(|(j, _)| !pairs.iter().any(|p| p.1 == j + 1))
                .map(|(_, &v)| rb(v)),
        );
        let mut lits: Vec<Lit> = a.lits.iter().map(|l| l.rename(&ra)).collect();
        lits.extend(b.lits.iter().map(|l| l.rename(&rb)));
        Ok(Pending {
            out,
            gen_vars,
            gen,
            lits,
            nvars: n,
        })
    }

    fn negate(self, i: &Interpretation) -> Result<Pending> {
        if !self.lits.is_empty() && self.gen_vars.is_empty() && self.gen.is_true() {
            return Ok(Pending {
                out: self.out,
                gen_vars: Vec::new(),
                gen: Relation::truth(),
                lits: vec![Lit::NegConj(self.lits)],
                nvars: self.nvars,
            });
        }
        let r = self.materialize(i)?;
        Ok(Pending::finite(complement(&r, i.domain())?))
    }

    fn project(mut self, m: usize) -> Pending {
        if let Some(r) = self.as_finite() {
            return Pending::finite(project_out(r, m));
        }
        let k = self.arity();
        if m >= 1 && m <= k {
            self.out.remove(m - 1);
        }
        self
    }
}

fn unbound() -> Error {
    Error::InfiniteCarrier("a built-in argument is not determined by any finite relation".into())
}

/// Binds what the positive literals determine, then checks every literal.
fn solve(i: &Interpretation, lits: &[Lit], b: &mut [Option<DomainElement>]) -> Result<bool> {
    loop {
        let mut changed = false;
        for l in lits {
            if let Lit::Pos(p, args) = l {
                let vals: Vec<Option<DomainElement>> = args.iter().map(|a| value(a, b)).collect();
                if let Some((k, e)) = i.determine(*p, &vals)? {
                    if let Arg::Var(v) = args[k] {
                        b[v] = Some(e);
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    for l in lits {
        match l {
            Lit::Pos(p, args) => {
                let vals: Option<Vec<DomainElement>> = args.iter().map(|a| value(a, b)).collect();
                let vals = vals.ok_or_else(unbound)?;
                match i.check_builtin(*p, &vals)? {
                    Membership::Holds(true) => {}
                    Membership::Holds(false) | Membership::Mismatch(_) => return Ok(false),
                }
            }
            Lit::NegConj(inner) => {
                let mut local = b.to_vec();
                if solve(i, inner, &mut local)? {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

fn value(a: &Arg, b: &[Option<DomainElement>]) -> Option<DomainElement> {
    match a {
        Arg::Var(v) => b[*v].clone(),
        Arg::Const(e) => Some(e.clone()),
    }
}

struct Evaluator<'a> {
    interp: &'a Interpretation,
    h: &'a Extensionalization,
    worlds: &'a [Extensionalization],
    memo: HashMap<ConceptRef, Pending>,
}

impl<'a> Evaluator<'a> {
    fn new(interp: &'a Interpretation, h: &'a Extensionalization, worlds: &'a [Extensionalization]) -> Self {
        Evaluator {
            interp,
            h,
            worlds,
            memo: HashMap::new(),
        }
    }

    fn eval(&mut self, c: ConceptRef) -> Result<Pending> {
        if let Some(p) = self.memo.get(&c) {
            return Ok(p.clone());
        }
        let p = match self.interp.expr(c)? {
            ConceptExpr::Truth => Pending::finite(Relation::truth()),
            ConceptExpr::Atom { pred, pattern } => Pending::finite(self.atom(&pred, &pattern, c.arity)?),
            ConceptExpr::Builtin { pred, pattern } => Pending::builtin(pred, &pattern),
            ConceptExpr::Conj { pairs, left, right } => {
                let (a, b) = (self.eval(left)?, self.eval(right)?);
                Pending::join(a, b, &pairs)?
            }
            ConceptExpr::Neg(u) => self.eval(u)?.negate(self.interp)?,
            ConceptExpr::Exists { column, of } => self.eval(of)?.project(column),
            ConceptExpr::Necess(u) => {
                if self.worlds.is_empty() {
                    return Err(Error::Unsupported(
                        "modal concept evaluated outside a Kripke model".into(),
                    ));
                }
                let mut acc: Option<Relation> = None;
                for w in self.worlds {
                    let r = Evaluator::new(self.interp, w, self.worlds)
                        .eval(u)?
                        .materialize(self.interp)?;
                    acc = Some(match acc {
                        None => r,
                        Some(prev) => prev.intersection(&r)?,
                    });
                }
                Pending::finite(acc.expect("non-empty world set"))
            }
        };
        self.memo.insert(c, p.clone());
        Ok(p)
    }

    /// `{ ū | p(pattern[ū]) ∈ h(p) }` with columns in pattern variable order.
    fn atom(&self, pred: &str, pattern: &[Slot], arity: usize) -> Result<Relation> {
        let base = self.h.relation(pred, pattern.len())?;
        let mut out = Relation::empty(arity);
        'tuples: for t in base.tuples() {
            let mut row: Vec<Option<&DomainElement>> = vec![None; arity];
            for (slot, e) in pattern.iter().zip(t) {
                match slot {
                    Slot::Const(c) if c != e => continue 'tuples,
                    Slot::Const(_) => {}
                    Slot::Var(v) => match row[*v] {
                        Some(prev) if prev != e => continue 'tuples,
                        _ => row[*v] = Some(e),
                    },
                }
            }
            out.insert(
                row.into_iter()
                    .map(|e| e.expect("every column bound").clone())
                    .collect(),
            )?;
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intensional::syntax::{AbstractTerm, Term};
    use crate::rational::{int, ratio};

    fn n(v: i64) -> DomainElement {
        DomainElement::number(int(v))
    }

    fn rel(arity: usize, rows: &[&[i64]]) -> Relation {
        Relation::new(arity, rows.iter().map(|r| r.iter().map(|&v| n(v)).collect())).unwrap()
    }

    fn setup() -> (Interpretation, Extensionalization) {
        let i = Interpretation::new(
            (1..=3).map(n),
            [("p".to_string(), 1), ("q".to_string(), 1), ("r".to_string(), 2)],
        )
        .unwrap();
        let h = Extensionalization::new()
            .with("p", rel(1, &[&[1], &[2]]))
            .with("q", rel(1, &[&[2], &[3]]))
            .with("r", rel(2, &[&[1, 2], &[2, 3]]));
        (i, h)
    }

    fn atom(p: &str, vars: &[&str]) -> IFormula {
        IFormula::atom(p, vars.iter().map(|v| Term::var(*v)).collect())
    }

    #[test]
    fn conjunction_joins_shared_variables() {
        let (i, h) = setup();
        let f = IFormula::and(atom("p", &["x"]), atom("q", &["x"]));
        assert_eq!(extensionalize(&i, &h, &f).unwrap(), rel(1, &[&[2]]));
        assert_eq!(extensionalize(&i, &h, &IFormula::Top).unwrap(), Relation::truth());
    }

    #[test]
    fn negation_and_quantifier() {
        let (i, h) = setup();
        let f = IFormula::not(atom("p", &["x"]));
        assert_eq!(extensionalize(&i, &h, &f).unwrap(), rel(1, &[&[3]]));
        let f = IFormula::exists("y", atom("r", &["x", "y"]));
        assert_eq!(extensionalize(&i, &h, &f).unwrap(), rel(1, &[&[1], &[2]]));
        let f = IFormula::exists("x", atom("p", &["x"]));
        assert_eq!(extensionalize(&i, &h, &f).unwrap(), Relation::truth());
    }

    #[test]
    fn repeated_variables_and_constants() {
        let (i, mut h) = setup();
        h.set("r", rel(2, &[&[1, 1], &[1, 2]]));
        assert_eq!(
            extensionalize(&i, &h, &atom("r", &["x", "x"])).unwrap(),
            rel(1, &[&[1]])
        );
        let f = IFormula::atom("r", vec![Term::Const(n(1)), Term::var("y")]);
        assert_eq!(extensionalize(&i, &h, &f).unwrap(), rel(1, &[&[1], &[2]]));
    }

    #[test]
    fn builtins_filter_and_compute() {
        let (i, h) = setup();
        let leq = IFormula::builtin(BuiltinPred::Leq, vec![Term::var("x"), Term::number(int(1))]).unwrap();
        let f = IFormula::and(atom("p", &["x"]), leq.clone());
        assert_eq!(extensionalize(&i, &h, &f).unwrap(), rel(1, &[&[1]]));
        assert!(matches!(extensionalize(&i, &h, &leq), Err(Error::InfiniteCarrier(_))));

        let sum = IFormula::builtin(BuiltinPred::Sum, vec![Term::var("x"), Term::var("x"), Term::var("y")]).unwrap();
        let f = IFormula::and(atom("p", &["x"]), sum);
        assert_eq!(extensionalize(&i, &h, &f).unwrap(), rel(2, &[&[1, 2], &[2, 4]]));

        let half = IFormula::builtin(
            BuiltinPred::Sum,
            vec![Term::number(ratio(1, 2)), Term::number(ratio(1, 4)), Term::var("z")],
        )
        .unwrap();
        let r = extensionalize(&i, &h, &half).unwrap();
        assert!(r.contains(&[DomainElement::number(ratio(3, 4))]));
        let f = IFormula::and(atom("p", &["z"]), IFormula::not(half));
        assert_eq!(extensionalize(&i, &h, &f).unwrap(), rel(1, &[&[1], &[2]]));
    }

    #[test]
    fn abstracts_with_open_variables() {
        let (i, h) = setup();
        let body = atom("r", &["x", "y"]);
        let t = AbstractTerm::abstracting(body, vec!["x".into()]).unwrap();
        let c = i.interpret_abstract(&t).unwrap().concept().unwrap();
        assert_eq!(concept_extension(&i, &h, &[], c).unwrap(), rel(1, &[&[1], &[2]]));

        let contradiction = IFormula::and(atom("p", &["x"]), IFormula::not(atom("p", &["x"])));
        let t = AbstractTerm::abstracting(contradiction, vec![]).unwrap();
        let c = i.interpret_abstract(&t).unwrap().concept().unwrap();
        assert_eq!(concept_extension(&i, &h, &[], c).unwrap(), Relation::falsity());
    }

    #[test]
    fn union_is_set_union() {
        let (i, h) = setup();
        let u = i.interpret(&atom("p", &["x"])).unwrap();
        let v = i.interpret(&atom("q", &["x"])).unwrap();
        let w = i.union_concepts(&[u, v]).unwrap();
        assert_eq!(concept_extension(&i, &h, &[], w).unwrap(), rel(1, &[&[1], &[2], &[3]]));
        assert_eq!(i.union_concepts(&[u]).unwrap(), u);
        assert!(matches!(i.union_concepts(&[]), Err(Error::EmptyUnion)));
        let r = i.interpret(&atom("r", &["x", "y"])).unwrap();
        assert!(matches!(i.union_concepts(&[u, r]), Err(Error::ArityMismatch(_))));
    }

    #[test]
    fn modal_concepts() {
        let (i, h0) = setup();
        let h1 = h0.clone().with("p", rel(1, &[&[2], &[3]]));
        let worlds = [h0.clone(), h1];
        let u = i.interpret(&atom("p", &["x"])).unwrap();
        assert_eq!(necess_extension(&i, u, &worlds).unwrap(), rel(1, &[&[2]]));
        assert_eq!(
            possibility_extension(&i, u, &worlds).unwrap(),
            rel(1, &[&[1], &[2], &[3]])
        );
        assert!(matches!(necess_extension(&i, u, &[]), Err(Error::EmptyWorldSet)));
        let boxed = IFormula::necessarily(atom("p", &["x"]));
        assert!(extensionalize(&i, &h0, &boxed).is_err());
    }

    #[test]
    fn distinct_atoms_get_distinct_concepts() {
        let i = Interpretation::new([n(1)], [("bought".to_string(), 1), ("sold".to_string(), 1)]).unwrap();
        let a = i.interpret(&atom("bought", &["x"])).unwrap();
        let b = i.interpret(&atom("sold", &["x"])).unwrap();
        assert_ne!(a, b);
        assert_eq!(a, i.interpret(&atom("bought", &["y"])).unwrap());
        assert_eq!(i.identity().arity, 2);
    }
}
