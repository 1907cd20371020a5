//! S5 Kripke models over extensionalization functions.

use super::concept::{Interpretation, Membership};
use super::eval::{concept_extension, Extensionalization};
use super::relation::{DomainElement, Relation};
use super::syntax::{AbstractTerm, Assignment, BuiltinPred, IFormula, Term};
use crate::error::{Error, Result};
use std::collections::BTreeSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EquivalenceMode {
    /// `≍`: equal extensions in every world.
    Strong,
    /// `≈`: equal unions of extensions over all worlds.
    Weak,
}

/// A Kripke model whose worlds are extensionalization functions, with
/// universal accessibility.
#[derive(Debug, Clone)]
pub struct KripkeModel {
    interp: Interpretation,
    worlds: Vec<Extensionalization>,
}

impl KripkeModel {
    pub fn new(interp: Interpretation, worlds: Vec<Extensionalization>) -> Result<Self> {
        if worlds.is_empty() {
            return Err(Error::EmptyWorldSet);
        }
        for h in &worlds {
            h.validate(&interp)?;
        }
        Ok(KripkeModel { interp, worlds })
    }

    pub fn interpretation(&self) -> &Interpretation {
        &self.interp
    }

    pub fn worlds(&self) -> &[Extensionalization] {
        &self.worlds
    }

    fn world(&self, w: usize) -> Result<&Extensionalization> {
        self.worlds.get(w).ok_or(Error::UnknownWorld(w))
    }

    /// `h_w(I(φ))`, modal operators included.
    pub fn extension(&self, w: usize, f: &IFormula) -> Result<Relation> {
        let c = self.interp.interpret(f)?;
        concept_extension(&self.interp, self.world(w)?, &self.worlds, c)
    }

    pub fn concept_extension(&self, w: usize, c: super::relation::ConceptRef) -> Result<Relation> {
        concept_extension(&self.interp, self.world(w)?, &self.worlds, c)
    }

    /// `M ⊨_{w,g} φ`, by the satisfaction clauses directly.
    pub fn satisfies(&self, w: usize, g: &Assignment, f: &IFormula) -> Result<bool> {
        let h = self.world(w)?;
        match f {
            IFormula::Top => Ok(true),
            IFormula::Atom { pred, args } => {
                let arity = self.interp.arity_of(pred)?;
                if arity != args.len() {
                    return Err(Error::ArityMismatch(format!("`{pred}` has arity {arity}")));
                }
                let t = self.values(args, g)?;
                Ok(h.get(pred).is_some_and(|r| r.contains(&t)))
            }
            IFormula::Builtin { pred, args } => {
                let t = self.values(args, g)?;
                Ok(matches!(self.interp.check_builtin(*pred, &t)?, Membership::Holds(true)))
            }
            IFormula::Not(a) => Ok(!self.satisfies(w, g, a)?),
            IFormula::And(a, b) => Ok(self.satisfies(w, g, a)? && self.satisfies(w, g, b)?),
            IFormula::Exists(x, a) => {
                if !a.free_vars().contains(x) {
                    return self.satisfies(w, g, a);
                }
                let mut candidates: BTreeSet<DomainElement> = self.interp.domain().iter().cloned().collect();
                candidates.extend(self.witness(x, a, g)?);
                let mut g2 = g.clone();
                for u in candidates {
                    g2.insert(x.clone(), u);
                    if self.satisfies(w, &g2, a)? {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
            IFormula::Necessarily(a) => {
                for v in 0..self.worlds.len() {
                    if !self.satisfies(v, g, a)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            IFormula::Possibly(a) => {
                for v in 0..self.worlds.len() {
                    if self.satisfies(v, g, a)? {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
        }
    }

    fn values(&self, args: &[Term], g: &Assignment) -> Result<Vec<DomainElement>> {
        args.iter().map(|a| self.interp.term_value(a, g)).collect()
    }

    /// A value for `x` forced by the built-in atoms of `φ` given `g`, if
    /// any. Such values may lie outside the active domain (computed
    /// weights, sums, products).
    fn witness(&self, x: &str, f: &IFormula, g: &Assignment) -> Result<Option<DomainElement>> {
        let mut atoms = Vec::new();
        collect_builtins(f, &mut atoms);
        let mut known = g.clone();
        known.remove(x);
        loop {
            let mut changed = false;
            for (pred, args) in &atoms {
                let vals: Vec<Option<DomainElement>> = args
                    .iter()
                    .map(|a| match a {
                        Term::Var(y) => known.get(y).cloned(),
                        t => self.interp.term_value(t, &known).ok(),
                    })
                    .collect();
                if let Some((k, e)) = self.interp.determine(*pred, &vals)? {
                    if let Term::Var(y) = &args[k] {
                        known.insert(y.clone(), e);
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        Ok(known.get(x).cloned())
    }

    /// `t₁/g ≍ t₂/g` or `t₁/g ≈ t₂/g`.
    pub fn equivalent(
        &self,
        t1: &AbstractTerm,
        t2: &AbstractTerm,
        g: &Assignment,
        mode: EquivalenceMode,
    ) -> Result<bool> {
        if t1.arity() != t2.arity() {
            return Err(Error::ArityMismatch(format!(
                "abstracts of arity {} and {}",
                t1.arity(),
                t2.arity()
            )));
        }
        let concept = |t: &AbstractTerm| {
            self.interp
                .instantiate_abstract(t, g)?
                .concept()
                .ok_or_else(|| Error::Unsupported(format!("`{t}` does not denote a concept")))
        };
        let (c1, c2) = (concept(t1)?, concept(t2)?);
        match mode {
            EquivalenceMode::Strong => {
                for w in 0..self.worlds.len() {
                    if self.concept_extension(w, c1)? != self.concept_extension(w, c2)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            EquivalenceMode::Weak => {
                let (p1, p2) = (self.interp.possibly(c1)?, self.interp.possibly(c2)?);
                Ok(self.concept_extension(0, p1)? == self.concept_extension(0, p2)?)
            }
        }
    }
}

fn collect_builtins<'a>(f: &'a IFormula, out: &mut Vec<(BuiltinPred, &'a [Term])>) {
    match f {
        IFormula::Builtin { pred, args } => out.push((*pred, args)),
        IFormula::Top | IFormula::Atom { .. } => {}
        IFormula::Not(a) | IFormula::Exists(_, a) | IFormula::Necessarily(a) | IFormula::Possibly(a) => {
            collect_builtins(a, out)
        }
        IFormula::And(a, b) => {
            collect_builtins(a, out);
            collect_builtins(b, out);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn sym(s: &str) -> DomainElement {
        DomainElement::symbol(s)
    }

    fn unary(items: &[&str]) -> Relation {
        Relation::new(1, items.iter().map(|s| vec![sym(s)])).unwrap()
    }

    fn model(bought: [&[&str]; 2], sold: [&[&str]; 2]) -> KripkeModel {
        let i = Interpretation::new([sym("a"), sym("b")], [("bought".into(), 1), ("sold".into(), 1)]).unwrap();
        let worlds = (0..2)
            .map(|k| {
                Extensionalization::new()
                    .with("bought", unary(bought[k]))
                    .with("sold", unary(sold[k]))
            })
            .collect();
        KripkeModel::new(i, worlds).unwrap()
    }

    fn concept(p: &str) -> AbstractTerm {
        AbstractTerm::closed(IFormula::atom(p, vec![Term::var("x")]))
    }

    #[test]
    fn equal_extensions_everywhere_are_strongly_equivalent() {
        let m = model([&["a"], &["a", "b"]], [&["a"], &["a", "b"]]);
        let g = Assignment::new();
        assert!(m
            .equivalent(&concept("bought"), &concept("sold"), &g, EquivalenceMode::Strong)
            .unwrap());
        let i = m.interpretation();
        let a = i.interpret(&IFormula::atom("bought", vec![Term::var("x")])).unwrap();
        let b = i.interpret(&IFormula::atom("sold", vec![Term::var("x")])).unwrap();
        assert_ne!(a, b);
    }

    #[test]
    fn one_differing_world() {
        let g = Assignment::new();
        let m = model([&["a"], &["b"]], [&["a"], &["a"]]);
        assert!(!m
            .equivalent(&concept("bought"), &concept("sold"), &g, EquivalenceMode::Strong)
            .unwrap());
        assert!(!m
            .equivalent(&concept("bought"), &concept("sold"), &g, EquivalenceMode::Weak)
            .unwrap());
        let m = model([&["a"], &["b"]], [&["b"], &["a"]]);
        assert!(!m
            .equivalent(&concept("bought"), &concept("sold"), &g, EquivalenceMode::Strong)
            .unwrap());
        assert!(m
            .equivalent(&concept("bought"), &concept("sold"), &g, EquivalenceMode::Weak)
            .unwrap());
    }

    #[test]
    fn satisfaction_clauses() {
        let m = model([&["a"], &[]], [&["a"], &["b"]]);
        let g = Assignment::new();
        let bought = |t: Term| IFormula::atom("bought", vec![t]);
        let sold = |t: Term| IFormula::atom("sold", vec![t]);
        let both = IFormula::and(bought(Term::symbol("a")), sold(Term::symbol("a")));
        assert!(m.satisfies(0, &g, &both).unwrap());
        assert!(!m.satisfies(1, &g, &both).unwrap());
        let vacuous = IFormula::exists("y", bought(Term::symbol("a")));
        assert_eq!(
            m.satisfies(0, &g, &vacuous).unwrap(),
            m.satisfies(0, &g, &bought(Term::symbol("a"))).unwrap()
        );
        let some_sold = IFormula::exists("x", sold(Term::var("x")));
        assert!(m.satisfies(1, &g, &IFormula::necessarily(some_sold)).unwrap());
        assert!(matches!(
            m.satisfies(5, &g, &IFormula::Top),
            Err(Error::UnknownWorld(5))
        ));
        assert!(matches!(
            m.satisfies(0, &g, &bought(Term::var("z"))),
            Err(Error::Unassigned(_))
        ));
    }

    #[test]
    fn existential_over_computed_values() {
        let m = model([&[], &[]], [&[], &[]]);
        let g = Assignment::new();
        let f = IFormula::exists(
            "x",
            IFormula::builtin(
                BuiltinPred::Sum,
                vec![Term::number(int(2)), Term::number(int(3)), Term::var("x")],
            )
            .unwrap(),
        );
        assert!(m.satisfies(0, &g, &f).unwrap());
        assert_eq!(m.extension(0, &f).unwrap(), Relation::truth());
    }
}
