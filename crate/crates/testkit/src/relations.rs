//! Relational operators written as set comprehensions over explicit
//! tuples.

use problogic::intensional::{DomainElement, Relation};
use std::collections::BTreeSet;

pub type Tuple = Vec<DomainElement>;

/// `{ t1 ++ (t2 minus joined columns) | t1[i] = t2[j] for all (i, j) }`,
/// with 1-based column pairs.
pub fn join(r1: &Relation, r2: &Relation, pairs: &[(usize, usize)]) -> BTreeSet<Tuple> {
    let dropped: Vec<usize> = pairs.iter().map(|&(_, j)| j - 1).collect();
    let mut out = BTreeSet::new();
    for t1 in r1.tuples() {
        for t2 in r2.tuples() {
            if pairs.iter().all(|&(i, j)| t1[i - 1] == t2[j - 1]) {
                let mut t = t1.clone();
                t.extend(
                    t2.iter()
                        .enumerate()
                        .filter(|(k, _)| !dropped.contains(k))
                        .map(|(_, e)| e.clone()),
                );
                out.insert(t);
            }
        }
    }
    out
}

pub fn complement(r: &Relation, domain: &[DomainElement]) -> BTreeSet<Tuple> {
    crate::gen::tuples(domain, r.arity())
        .into_iter()
        .filter(|t| !r.contains(t))
        .collect()
}

/// Drops column `m` (1-based).
pub fn project(r: &Relation, m: usize) -> BTreeSet<Tuple> {
    r.tuples()
        .iter()
        .map(|t| {
            let mut t = t.clone();
            t.remove(m - 1);
            t
        })
        .collect()
}

pub fn same(r: &Relation, expected: &BTreeSet<Tuple>) -> bool {
    r.tuples() == expected
}
