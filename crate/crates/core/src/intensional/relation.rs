//! Finite relations over the intensional domain and the three relational
//! operators of the algebra: natural join `⋈_S`, complement `∼` relative to
//! an active domain, and column elimination `π₋ₘ`.

use crate::error::{Error, Result};
use crate::rational::Rational;
use std::collections::{BTreeSet, HashSet};
use std::fmt;

/// Extensional entity of `D₋₁`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Particular {
    Number(Rational),
    Symbol(String),
    /// The empty tuple `⟨⟩`.
    Unit,
}

/// Handle of an intensional entity of `Dₙ`, `n = arity`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ConceptRef {
    pub arity: usize,
    pub id: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DomainElement {
    Particular(Particular),
    Concept(ConceptRef),
}

impl DomainElement {
    pub fn number(q: Rational) -> Self {
        DomainElement::Particular(Particular::Number(q))
    }

    pub fn symbol(s: impl Into<String>) -> Self {
        DomainElement::Particular(Particular::Symbol(s.into()))
    }

    pub fn unit() -> Self {
        DomainElement::Particular(Particular::Unit)
    }

    pub fn as_number(&self) -> Option<&Rational> {
        match self {
            DomainElement::Particular(Particular::Number(q)) => Some(q),
            _ => None,
        }
    }

    pub fn as_concept(&self) -> Option<ConceptRef> {
        match self {
            DomainElement::Concept(c) => Some(*c),
            _ => None,
        }
    }
}

pub type Tuple = Vec<DomainElement>;

/// A finite `k`-ary relation. Arity-0 relations are the truth values
/// `f = {}` and `t = {⟨⟩}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    arity: usize,
    tuples: BTreeSet<Tuple>,
}

impl Relation {
    pub fn empty(arity: usize) -> Self {
        Relation {
            arity,
            tuples: BTreeSet::new(),
        }
    }

    pub fn new(arity: usize, tuples: impl IntoIterator<Item = Tuple>) -> Result<Self> {
        let mut r = Self::empty(arity);
        for t in tuples {
            r.insert(t)?;
        }
        Ok(r)
    }

    /// `t = {⟨⟩}`.
    pub fn truth() -> Self {
        let mut r = Self::empty(0);
        r.tuples.insert(Vec::new());
        r
    }

    /// `f = {}`.
    pub fn falsity() -> Self {
        Self::empty(0)
    }

    pub fn truth_value(b: bool) -> Self {
        if b {
            Self::truth()
        } else {
            Self::falsity()
        }
    }

    pub fn insert(&mut self, t: Tuple) -> Result<()> {
        if t.len() != self.arity {
            return Err(Error::ArityMismatch(format!(
                "tuple of length {} in a relation of arity {}",
                t.len(),
                self.arity
            )));
        }
        self.tuples.insert(t);
        Ok(())
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn tuples(&self) -> &BTreeSet<Tuple> {
        &self.tuples
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn contains(&self, t: &[DomainElement]) -> bool {
        self.tuples.contains(t)
    }

    /// For arity 0: whether this is `t`.
    pub fn is_true(&self) -> bool {
        self.arity == 0 && !self.tuples.is_empty()
    }

    pub fn union(&self, other: &Relation) -> Result<Relation> {
        self.same_arity(other)?;
        Ok(Relation {
            arity: self.arity,
            tuples: self.tuples.union(&other.tuples).cloned().collect(),
        })
    }

    pub fn intersection(&self, other: &Relation) -> Result<Relation> {
        self.same_arity(other)?;
        Ok(Relation {
            arity: self.arity,
            tuples: self.tuples.intersection(&other.tuples).cloned().collect(),
        })
    }

    fn same_arity(&self, other: &Relation) -> Result<()> {
        if self.arity != other.arity {
            return Err(Error::ArityMismatch(format!(
                "relations of arity {} and {}",
                self.arity, other.arity
            )));
        }
        Ok(())
    }
}

/// `f_<>(R)`: `t` if `R` is non-empty, `f` otherwise.
pub fn nonempty(r: &Relation) -> Relation {
    Relation::truth_value(!r.is_empty())
}

/// `R₁ ⋈_S R₂` with 1-based column pairs `(i₁, i₂)`. The result lists all
/// columns of `R₁` followed by the columns of `R₂` that are not joined; with
/// `S = ∅` it is the cartesian product.
pub fn natural_join(r1: &Relation, r2: &Relation, s: &[(usize, usize)]) -> Result<Relation> {
    for &(i1, i2) in s {
        if i1 == 0 || i1 > r1.arity || i2 == 0 || i2 > r2.arity {
            return Err(Error::IndexOutOfRange(format!(
                "join pair ({i1}, {i2}) for arities {} and {}",
                r1.arity, r2.arity
            )));
        }
    }
    let joined: HashSet<usize> = s.iter().map(|&(_, i2)| i2 - 1).collect();
    let kept: Vec<usize> = (0..r2.arity).filter(|j| !joined.contains(j)).collect();
    let mut out = Relation::empty(r1.arity + kept.len());
    for t1 in &r1.tuples {
        for t2 in &r2.tuples {
            if s.iter().all(|&(i1, i2)| t1[i1 - 1] == t2[i2 - 1]) {
                let mut t = t1.clone();
                t.extend(kept.iter().map(|&j| t2[j].clone()));
                out.tuples.insert(t);
            }
        }
    }
    Ok(out)
}

/// `∼R = Dᵏ \ R` over the active domain `D`.
pub fn complement(r: &Relation, domain: &[DomainElement]) -> Result<Relation> {
    let members: HashSet<&DomainElement> = domain.iter().collect();
    for t in &r.tuples {
        if let Some(e) = t.iter().find(|e| !members.contains(e)) {
            return Err(Error::OutsideDomain(format!("{e} in {}", show_tuple(t))));
        }
    }
    let mut distinct: Vec<&DomainElement> = members.into_iter().collect();
    distinct.sort();
    let mut out = Relation::empty(r.arity);
    let mut current: Tuple = Vec::with_capacity(r.arity);
    fill(&distinct, r, &mut current, &mut out);
    Ok(out)
}

fn fill(domain: &[&DomainElement], r: &Relation, current: &mut Tuple, out: &mut Relation) {
    if current.len() == r.arity {
        if !r.tuples.contains(current) {
            out.tuples.insert(current.clone());
        }
        return;
    }
    for &e in domain {
        current.push(e.clone());
        fill(domain, r, current, out);
        current.pop();
    }
}

/// `π₋ₘ(R)`: drops column `m` (1-based) when `1 ≤ m ≤ k` and `k ≥ 2`; gives
/// `f_<>(R)` when `m = k = 1`; otherwise returns `R` unchanged.
pub fn project_out(r: &Relation, m: usize) -> Relation {
    let k = r.arity;
    if m == 1 && k == 1 {
        return nonempty(r);
    }
    if m == 0 || m > k || k < 2 {
        return r.clone();
    }
    Relation {
        arity: k - 1,
        tuples: r
            .tuples
            .iter()
            .map(|t| {
                let mut t = t.clone();
                t.remove(m - 1);
                t
            })
            .collect(),
    }
}

pub(crate) fn show_tuple(t: &[DomainElement]) -> String {
    let parts: Vec<String> = t.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

impl fmt::Display for Particular {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Particular::Number(q) => write!(f, "{q}"),
            Particular::Symbol(s) => write!(f, "'{s}'"),
            Particular::Unit => f.write_str("<>"),
        }
    }
}

impl fmt::Display for ConceptRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c{}/{}", self.id, self.arity)
    }
}

impl fmt::Display for DomainElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DomainElement::Particular(p) => p.fmt(f),
            DomainElement::Concept(c) => c.fmt(f),
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.arity == 0 {
            return f.write_str(if self.is_true() { "t" } else { "f" });
        }
        let parts: Vec<String> = self.tuples.iter().map(|t| show_tuple(t)).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn n(v: i64) -> DomainElement {
        DomainElement::number(int(v))
    }

    fn rel(arity: usize, rows: &[&[i64]]) -> Relation {
        Relation::new(arity, rows.iter().map(|r| r.iter().map(|&v| n(v)).collect())).unwrap()
    }

    #[test]
    fn join_attribute_ordering() {
        // φ(xi,xj,xk,xl,xm) ∧ ψ(xl,yi,xj,yj) with S = {(4,1),(2,3)}
        let r1 = rel(5, &[&[1, 2, 3, 4, 5], &[1, 9, 3, 4, 5]]);
        let r2 = rel(4, &[&[4, 6, 2, 7], &[4, 6, 8, 7]]);
        let j = natural_join(&r1, &r2, &[(4, 1), (2, 3)]).unwrap();
        assert_eq!(j.arity(), 7);
        assert_eq!(j, rel(7, &[&[1, 2, 3, 4, 5, 6, 7]]));
    }

    #[test]
    fn join_examples() {
        let j = natural_join(&rel(2, &[&[1, 2]]), &rel(2, &[&[1, 3], &[2, 9]]), &[(1, 1)]).unwrap();
        assert_eq!(j, rel(3, &[&[1, 2, 3]]));
        let r = rel(2, &[&[1, 2], &[3, 4]]);
        assert_eq!(natural_join(&r, &Relation::truth(), &[]).unwrap(), r);
        assert_eq!(natural_join(&r, &Relation::falsity(), &[]).unwrap(), Relation::empty(2));
        let product = natural_join(&rel(1, &[&[1], &[2]]), &rel(1, &[&[5]]), &[]).unwrap();
        assert_eq!(product, rel(2, &[&[1, 5], &[2, 5]]));
    }

    #[test]
    fn join_index_errors() {
        let r = rel(2, &[&[1, 2]]);
        assert!(matches!(
            natural_join(&r, &r, &[(3, 1)]),
            Err(Error::IndexOutOfRange(_))
        ));
        assert!(matches!(
            natural_join(&r, &r, &[(1, 0)]),
            Err(Error::IndexOutOfRange(_))
        ));
    }

    #[test]
    fn complement_examples() {
        let d = vec![n(1), n(2)];
        assert_eq!(complement(&Relation::truth(), &d).unwrap(), Relation::falsity());
        assert_eq!(complement(&Relation::falsity(), &d).unwrap(), Relation::truth());
        assert_eq!(complement(&rel(1, &[&[1]]), &d).unwrap(), rel(1, &[&[2]]));
        let full = rel(2, &[&[1, 1], &[1, 2], &[2, 1], &[2, 2]]);
        assert!(complement(&full, &d).unwrap().is_empty());
        assert!(matches!(complement(&rel(1, &[&[3]]), &d), Err(Error::OutsideDomain(_))));
    }

    #[test]
    fn projection_examples() {
        assert_eq!(project_out(&rel(2, &[&[1, 2], &[1, 3]]), 2), rel(1, &[&[1]]));
        assert_eq!(project_out(&rel(1, &[&[5]]), 1), Relation::truth());
        assert_eq!(project_out(&Relation::empty(1), 1), Relation::falsity());
        let r3 = rel(3, &[&[1, 2, 3]]);
        assert_eq!(project_out(&r3, 7), r3);
        assert_eq!(project_out(&r3, 0), r3);
        assert_eq!(project_out(&Relation::truth(), 1), Relation::truth());
    }

    #[test]
    fn arity_is_enforced() {
        assert!(Relation::new(2, vec![vec![n(1)]]).is_err());
        assert!(rel(1, &[]).union(&rel(2, &[])).is_err());
    }
}
