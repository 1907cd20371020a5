//! Fourier–Motzkin elimination over exact rationals, with strict rows.
//!
//! Worlds that no constraint (or objective) can tell apart are merged into
//! one variable before elimination, and equalities are substituted away
//! first; both are exact and keep the row count manageable.

use num_traits::{One, Signed, Zero};
use problogic::constraint::{Comparison, WeightConstraint, WeightTerm};
use problogic::formula::eval_world;
use problogic::{Alphabet, Rational};
use std::collections::{BTreeSet, HashSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rel {
    Le,
    Lt,
    Eq,
}

/// `coeffs · y rel rhs`
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Row {
    pub coeffs: Vec<Rational>,
    pub rel: Rel,
    pub rhs: Rational,
}

impl Row {
    fn scaled(&self, k: &Rational) -> Row {
        Row {
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
            rel: self.rel,
            rhs: &self.rhs * k,
        }
    }

    /// Divides by the first non-zero coefficient's magnitude.
    fn normalised(self) -> Row {
        match self.coeffs.iter().find(|c| !c.is_zero()) {
            Some(c) => {
                let k = Rational::one() / c.abs();
                self.scaled(&k)
            }
            None => self,
        }
    }

    fn is_constant(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Truth of a row with no variables.
    fn constant_holds(&self) -> bool {
        match self.rel {
            Rel::Le => !self.rhs.is_negative(),
            Rel::Lt => self.rhs.is_positive(),
            Rel::Eq => self.rhs.is_zero(),
        }
    }
}

/// Substitutes every equality away, leaving only `≤`/`<` rows, or `None`
/// when a constant row fails. Column `keep` is never chosen as the pivot;
/// an equality in `keep` alone is split into two inequalities.
fn substitute_equalities(rows: Vec<Row>, keep: Option<usize>) -> Option<Vec<Row>> {
    let (mut eqs, mut rest): (Vec<Row>, Vec<Row>) = rows.into_iter().partition(|r| r.rel == Rel::Eq);
    while let Some(e) = eqs.pop() {
        let pivot = e
            .coeffs
            .iter()
            .enumerate()
            .position(|(j, c)| !c.is_zero() && Some(j) != keep);
        let Some(j) = pivot else {
            if e.is_constant() {
                if !e.constant_holds() {
                    return None;
                }
            } else {
                let neg = e.scaled(&-Rational::one());
                rest.push(Row { rel: Rel::Le, ..e });
                rest.push(Row { rel: Rel::Le, ..neg });
            }
            continue;
        };
        for r in eqs.iter_mut().chain(rest.iter_mut()) {
            if r.coeffs[j].is_zero() {
                continue;
            }
            let k = &r.coeffs[j] / &e.coeffs[j];
            for (c, ec) in r.coeffs.iter_mut().zip(&e.coeffs) {
                *c -= &k * ec;
            }
            r.rhs -= &k * &e.rhs;
        }
    }
    Some(rest)
}

fn eliminate(rows: Vec<Row>, v: usize) -> Vec<Row> {
    let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
    for r in rows {
        if r.coeffs[v].is_positive() {
            pos.push(r);
        } else if r.coeffs[v].is_negative() {
            neg.push(r);
        } else {
            rest.push(r);
        }
    }
    for p in &pos {
        let a = p.scaled(&(Rational::one() / &p.coeffs[v]));
        for n in &neg {
            let b = n.scaled(&(Rational::one() / -&n.coeffs[v]));
            let mut coeffs: Vec<Rational> = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect();
            coeffs[v] = Rational::zero();
            let rel = if a.rel == Rel::Lt || b.rel == Rel::Lt {
                Rel::Lt
            } else {
                Rel::Le
            };
            rest.push(
                Row {
                    coeffs,
                    rel,
                    rhs: &a.rhs + &b.rhs,
                }
                .normalised(),
            );
        }
    }
    rest
}

/// Drops satisfied constant rows and duplicates; `None` if a constant row
/// fails.
fn tidy(rows: Vec<Row>) -> Option<Vec<Row>> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for r in rows {
        let r = r.normalised();
        if r.is_constant() {
            if !r.constant_holds() {
                return None;
            }
        } else if seen.insert(r.clone()) {
            out.push(r);
        }
    }
    Some(out)
}

/// Eliminates every column except `keep`, cheapest first. `None` means
/// infeasible.
fn project(rows: Vec<Row>, nvars: usize, keep: Option<usize>) -> Option<Vec<Row>> {
    let mut rows = tidy(substitute_equalities(rows, keep)?)?;
    let mut live: Vec<usize> = (0..nvars).filter(|&v| Some(v) != keep).collect();
    while !live.is_empty() {
        let (pick, _) = live
            .iter()
            .enumerate()
            .map(|(k, &v)| {
                let pos = rows.iter().filter(|r| r.coeffs[v].is_positive()).count();
                let neg = rows.iter().filter(|r| r.coeffs[v].is_negative()).count();
                (k, pos * neg)
            })
            .min_by_key(|&(_, cost)| cost)
            .expect("live variable");
        let v = live.remove(pick);
        rows = tidy(eliminate(rows, v))?;
    }
    Some(rows)
}

/// Decides whether the system has a real solution.
pub fn feasible(rows: &[Row], nvars: usize) -> bool {
    project(rows.to_vec(), nvars, None).is_some()
}

/// Per-world coefficients of a weight term, by direct truth-table
/// evaluation.
pub fn world_row(alphabet: &Alphabet, t: &WeightTerm) -> Vec<Rational> {
    alphabet
        .worlds()
        .map(|w| {
            t.terms
                .iter()
                .filter(|(_, f)| eval_world(f, w, alphabet).expect("formula over alphabet"))
                .map(|(a, _)| a.clone())
                .sum()
        })
        .collect()
}

/// Measure constraints over merged world classes: one column per distinct
/// coefficient pattern across `terms`, each column non-negative, columns
/// summing to one. Row `k` carries the coefficients of `terms[k]`.
fn classes(alphabet: &Alphabet, terms: &[&WeightTerm]) -> (Vec<Vec<Rational>>, Vec<Row>) {
    let per_term: Vec<Vec<Rational>> = terms.iter().map(|t| world_row(alphabet, t)).collect();
    let columns: Vec<Vec<Rational>> = (0..alphabet.world_count())
        .map(|w| per_term.iter().map(|r| r[w].clone()).collect())
        .collect::<BTreeSet<Vec<Rational>>>()
        .into_iter()
        .collect();
    let n = columns.len();
    let coeffs: Vec<Vec<Rational>> = (0..terms.len())
        .map(|k| columns.iter().map(|c| c[k].clone()).collect())
        .collect();
    let mut measure = Vec::new();
    for i in 0..n {
        let mut c = vec![Rational::zero(); n];
        c[i] = -Rational::one();
        measure.push(Row {
            coeffs: c,
            rel: Rel::Le,
            rhs: Rational::zero(),
        });
    }
    measure.push(Row {
        coeffs: vec![Rational::one(); n],
        rel: Rel::Eq,
        rhs: Rational::one(),
    });
    (coeffs, measure)
}

fn constraint_rows(cs: &[WeightConstraint], coeffs: &[Vec<Rational>]) -> Vec<Row> {
    let mut rows = Vec::new();
    for (c, a) in cs.iter().zip(coeffs) {
        let b = &c.rhs - &c.lhs.constant;
        let neg: Vec<Rational> = a.iter().map(|x| -x).collect();
        let row = |coeffs, rel, rhs| Row { coeffs, rel, rhs };
        rows.push(match c.relation {
            Comparison::Le => row(a.clone(), Rel::Le, b),
            Comparison::Lt => row(a.clone(), Rel::Lt, b),
            Comparison::Eq => row(a.clone(), Rel::Eq, b),
            Comparison::Ge => row(neg, Rel::Le, -b),
            Comparison::Gt => row(neg, Rel::Lt, -b),
        });
    }
    rows
}

/// Whether some probability measure satisfies `cs`.
pub fn psat(alphabet: &Alphabet, cs: &[WeightConstraint]) -> bool {
    let terms: Vec<&WeightTerm> = cs.iter().map(|c| &c.lhs).collect();
    let (coeffs, measure) = classes(alphabet, &terms);
    let n = measure.len() - 1;
    let mut rows = constraint_rows(cs, &coeffs);
    rows.extend(measure);
    feasible(&rows, n)
}

/// `[min, max]` of `objective` over measures satisfying `cs`, or `None`
/// when there are none. The objective becomes an extra column `z` and
/// everything else is projected out.
pub fn bounds(alphabet: &Alphabet, cs: &[WeightConstraint], objective: &WeightTerm) -> Option<(Rational, Rational)> {
    let mut terms: Vec<&WeightTerm> = cs.iter().map(|c| &c.lhs).collect();
    terms.push(objective);
    let (mut coeffs, measure) = classes(alphabet, &terms);
    let n = measure.len() - 1;
    let obj = coeffs.pop().expect("objective row");
    let widen = |mut r: Row| {
        r.coeffs.push(Rational::zero());
        r
    };
    let mut rows: Vec<Row> = constraint_rows(cs, &coeffs)
        .into_iter()
        .chain(measure)
        .map(widen)
        .collect();
    let mut z = obj;
    z.push(-Rational::one());
    rows.push(Row {
        coeffs: z,
        rel: Rel::Eq,
        rhs: -objective.constant.clone(),
    });
    let projected = project(rows, n + 1, Some(n))?;
    let mut lo: Option<Rational> = None;
    let mut hi: Option<Rational> = None;
    for r in projected {
        let c = &r.coeffs[n];
        let v = &r.rhs / c;
        if c.is_positive() {
            hi = Some(hi.map_or(v.clone(), |h| h.min(v)));
        } else {
            lo = Some(lo.map_or(v.clone(), |l| l.max(v)));
        }
    }
    let (lo, hi) = (lo?, hi?);
    (lo <= hi).then_some((lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use problogic::constraint::parse_constraints;
    use problogic::rational::ratio;
    use problogic::{parse_formula, Alphabet};

    #[test]
    fn frechet_instance_is_infeasible() {
        let a = Alphabet::new(["p", "q"]).unwrap();
        let cs = parse_constraints("w(p) >= 3/5\nw(q) >= 3/5\nw(p & q) <= 1/10").unwrap();
        assert!(!psat(&a, &cs));
        let cs = parse_constraints("w(p) >= 3/5\nw(q) >= 3/5\nw(p & q) <= 1/5").unwrap();
        assert!(psat(&a, &cs));
        let cs = parse_constraints("w(p) >= 3/5\nw(q) >= 3/5\nw(p & q) < 1/5").unwrap();
        assert!(!psat(&a, &cs));
    }

    #[test]
    fn frechet_bounds() {
        let a = Alphabet::new(["p", "q"]).unwrap();
        let cs = parse_constraints("w(p) = 3/5\nw(q) = 7/10").unwrap();
        let obj = WeightTerm::weight(parse_formula("p & q").unwrap());
        assert_eq!(bounds(&a, &cs, &obj), Some((ratio(3, 10), ratio(3, 5))));
        let cs = parse_constraints("w(p) = 3/5\nw(p) = 7/10").unwrap();
        assert_eq!(bounds(&a, &cs, &obj), None);
    }

    #[test]
    fn strict_rows_and_merged_worlds() {
        let a = Alphabet::new(["p", "q", "r"]).unwrap();
        let cs = parse_constraints("w(p) > 1\n").unwrap();
        assert!(!psat(&a, &cs));
        let cs = parse_constraints("w(p) < 1\nw(p | q) = 1\nw(q) <= 0").unwrap();
        assert!(!psat(&a, &cs));
        let cs = parse_constraints("w(p) < 1\nw(p | q) = 1").unwrap();
        assert!(psat(&a, &cs));
    }
}
