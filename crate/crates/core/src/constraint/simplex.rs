//! Dense two-phase simplex over exact rationals.
//!
//! Every variable is implicitly non-negative. Pivoting follows Bland's rule
//! (lowest-index entering column, lowest-index leaving basic variable on
//! ratio ties), so the method terminates without cycling.

use crate::error::{Error, Result};
use crate::rational::Rational;
use num_traits::{Signed, Zero};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RowRelation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sense {
    Min,
    Max,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpRow {
    pub coeffs: Vec<Rational>,
    pub relation: RowRelation,
    pub rhs: Rational,
}

/// `optimize objective·y subject to rows, y ≥ 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearProgram {
    pub num_vars: usize,
    pub objective: Vec<Rational>,
    pub rows: Vec<LpRow>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { value: Rational, point: Vec<Rational> },
    Infeasible,
    Unbounded,
}

impl LinearProgram {
    pub fn new(num_vars: usize) -> Self {
        LinearProgram {
            num_vars,
            objective: vec![Rational::zero(); num_vars],
            rows: Vec::new(),
        }
    }

    pub fn push_row(&mut self, coeffs: Vec<Rational>, relation: RowRelation, rhs: Rational) {
        self.rows.push(LpRow { coeffs, relation, rhs });
    }

    fn validate(&self) -> Result<()> {
        if self.objective.len() != self.num_vars {
            return Err(Error::DimensionMismatch(format!(
                "objective has {} entries for {} variables",
                self.objective.len(),
                self.num_vars
            )));
        }
        for (i, row) in self.rows.iter().enumerate() {
            if row.coeffs.len() != self.num_vars {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} entries for {} variables",
                    row.coeffs.len(),
                    self.num_vars
                )));
            }
        }
        Ok(())
    }

    /// Checks a point against every row and the sign constraints.
    pub fn is_feasible(&self, point: &[Rational]) -> bool {
        point.len() == self.num_vars
            && point.iter().all(|v| !v.is_negative())
            && self.rows.iter().all(|row| {
                let lhs: Rational = row.coeffs.iter().zip(point).map(|(a, y)| a * y).sum();
                match row.relation {
                    RowRelation::Le => lhs <= row.rhs,
                    RowRelation::Ge => lhs >= row.rhs,
                    RowRelation::Eq => lhs == row.rhs,
                }
            })
    }
}

struct Tableau {
    /// `m` rows of `cols + 1` entries; the last entry is the right-hand side.
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    cols: usize,
}

enum Phase {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn rhs(&self, i: usize) -> &Rational {
        &self.rows[i][self.cols]
    }

    fn pivot(&mut self, r: usize, e: usize, reduced: &mut [Rational]) {
        let p = self.rows[r][e].clone();
        for v in self.rows[r].iter_mut() {
            *v /= &p;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[e].is_zero() {
                continue;
            }
            let factor = row[e].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &factor * pv;
                }
            }
        }
        if !reduced[e].is_zero() {
            let factor = reduced[e].clone();
            for (v, pv) in reduced.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &factor * pv;
                }
            }
        }
        self.basis[r] = e;
    }

    /// Reduced costs `c_j − c_B·B⁻¹A_j`, with `−c_B·B⁻¹b` in the last slot.
    fn reduced_costs(&self, cost: &[Rational]) -> Vec<Rational> {
        let mut d: Vec<Rational> = cost.to_vec();
        d.push(Rational::zero());
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            let cb = &cost[b];
            if cb.is_zero() {
                continue;
            }
            for (dj, a) in d.iter_mut().zip(row) {
                if !a.is_zero() {
                    *dj -= cb * a;
                }
            }
        }
        d
    }

    /// Minimises `cost` over the current basis using only `allowed` columns.
    fn minimize(&mut self, cost: &[Rational], allowed: &[bool]) -> Phase {
        let mut d = self.reduced_costs(cost);
        loop {
            let entering = (0..self.cols).find(|&j| allowed[j] && d[j].is_negative());
            let Some(e) = entering else {
                return Phase::Optimal;
            };
            let mut leave: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][e];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(i) / a;
                let better = match &leave {
                    None => true,
                    Some((r, best)) => ratio < *best || (ratio == *best && self.basis[i] < self.basis[*r]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let Some((r, _)) = leave else {
                return Phase::Unbounded;
            };
            self.pivot(r, e, &mut d);
        }
    }
}

/// Solves `lp` exactly.
pub fn lp_solve(lp: &LinearProgram, sense: Sense) -> Result<LpOutcome> {
    lp.validate()?;
    let n = lp.num_vars;
    let m = lp.rows.len();

    // Normalise to non-negative right-hand sides.
    let rows: Vec<(Vec<Rational>, RowRelation, Rational)> = lp
        .rows
        .iter()
        .map(|row| {
            if row.rhs.is_negative() {
                let rel = match row.relation {
                    RowRelation::Le => RowRelation::Ge,
                    RowRelation::Ge => RowRelation::Le,
                    RowRelation::Eq => RowRelation::Eq,
                };
                (row.coeffs.iter().map(|a| -a).collect(), rel, -&row.rhs)
            } else {
                (row.coeffs.clone(), row.relation, row.rhs.clone())
            }
        })
        .collect();

    let slack_count = rows.iter().filter(|r| r.1 != RowRelation::Eq).count();
    let artificial_count = rows.iter().filter(|r| r.1 != RowRelation::Le).count();
    let cols = n + slack_count + artificial_count;
    let first_artificial = n + slack_count;

    let mut tab = Tableau {
        rows: Vec::with_capacity(m),
        basis: Vec::with_capacity(m),
        cols,
    };
    let (mut next_slack, mut next_art) = (n, first_artificial);
    for (coeffs, rel, rhs) in rows {
        let mut row = coeffs;
        row.resize(cols + 1, Rational::zero());
        row[cols] = rhs;
        match rel {
            RowRelation::Le => {
                row[next_slack] = Rational::from_integer(1.into());
                tab.basis.push(next_slack);
                next_slack += 1;
            }
            RowRelation::Ge => {
                row[next_slack] = Rational::from_integer((-1).into());
                row[next_art] = Rational::from_integer(1.into());
                tab.basis.push(next_art);
                next_slack += 1;
                next_art += 1;
            }
            RowRelation::Eq => {
                row[next_art] = Rational::from_integer(1.into());
                tab.basis.push(next_art);
                next_art += 1;
            }
        }
        tab.rows.push(row);
    }

    // Phase 1: minimise the sum of artificials.
    if artificial_count > 0 {
        let mut cost = vec![Rational::zero(); cols];
        for c in cost.iter_mut().skip(first_artificial) {
            *c = Rational::from_integer(1.into());
        }
        let all = vec![true; cols];
        tab.minimize(&cost, &all);
        let infeasibility: Rational = tab
            .basis
            .iter()
            .enumerate()
            .filter(|(_, &b)| b >= first_artificial)
            .map(|(i, _)| tab.rhs(i).clone())
            .sum();
        if infeasibility.is_positive() {
            return Ok(LpOutcome::Infeasible);
        }
        // Drive remaining (zero-valued) artificials out of the basis; rows
        // where that is impossible are redundant and dropped.
        let mut i = 0;
        while i < tab.rows.len() {
            if tab.basis[i] >= first_artificial {
                match (0..first_artificial).find(|&j| !tab.rows[i][j].is_zero()) {
                    Some(j) => {
                        let mut scratch = vec![Rational::zero(); cols + 1];
                        tab.pivot(i, j, &mut scratch);
                    }
                    None => {
                        tab.rows.remove(i);
                        tab.basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
    }

    // Phase 2.
    let mut cost = vec![Rational::zero(); cols];
    for (c, o) in cost.iter_mut().zip(&lp.objective) {
        *c = match sense {
            Sense::Min => o.clone(),
            Sense::Max => -o,
        };
    }
    let allowed: Vec<bool> = (0..cols).map(|j| j < first_artificial).collect();
    if let Phase::Unbounded = tab.minimize(&cost, &allowed) {
        return Ok(LpOutcome::Unbounded);
    }

    let mut point = vec![Rational::zero(); n];
    for (i, &b) in tab.basis.iter().enumerate() {
        if b < n {
            point[b] = tab.rhs(i).clone();
        }
    }
    let value = lp.objective.iter().zip(&point).map(|(c, y)| c * y).sum();
    Ok(LpOutcome::Optimal { value, point })
}

impl fmt::Display for RowRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RowRelation::Le => "<=",
            RowRelation::Ge => ">=",
            RowRelation::Eq => "=",
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn q(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    fn simplex2() -> LinearProgram {
        let mut lp = LinearProgram::new(2);
        lp.push_row(q(&[1, 1]), RowRelation::Eq, int(1));
        lp
    }

    #[test]
    fn vertex_of_the_simplex() {
        let mut lp = simplex2();
        lp.objective = q(&[0, 1]);
        assert_eq!(
            lp_solve(&lp, Sense::Max).unwrap(),
            LpOutcome::Optimal {
                value: int(1),
                point: q(&[0, 1])
            }
        );
    }

    #[test]
    fn infeasible_rows() {
        let mut lp = simplex2();
        lp.push_row(q(&[0, 1]), RowRelation::Ge, int(2));
        assert_eq!(lp_solve(&lp, Sense::Max).unwrap(), LpOutcome::Infeasible);
    }

    #[test]
    fn constant_objective_on_feasible_set() {
        let mut lp = simplex2();
        lp.objective = q(&[1, 1]);
        match lp_solve(&lp, Sense::Max).unwrap() {
            LpOutcome::Optimal { value, point } => {
                assert_eq!(value, int(1));
                assert!(lp.is_feasible(&point));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unbounded() {
        let mut lp = LinearProgram::new(2);
        lp.push_row(q(&[1, -1]), RowRelation::Le, int(1));
        lp.objective = q(&[1, 0]);
        assert_eq!(lp_solve(&lp, Sense::Max).unwrap(), LpOutcome::Unbounded);
        assert!(matches!(lp_solve(&lp, Sense::Min).unwrap(), LpOutcome::Optimal { .. }));
    }

    #[test]
    fn dimension_mismatch() {
        let mut lp = simplex2();
        lp.push_row(q(&[1]), RowRelation::Le, int(1));
        assert!(matches!(lp_solve(&lp, Sense::Min), Err(Error::DimensionMismatch(_))));
        let mut lp = simplex2();
        lp.objective = q(&[1, 2, 3]);
        assert!(matches!(lp_solve(&lp, Sense::Min), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn negative_rhs_and_redundant_rows() {
        // -y0 <= -1/3 (i.e. y0 >= 1/3), duplicated equality row
        let mut lp = simplex2();
        lp.push_row(q(&[1, 1]), RowRelation::Eq, int(1));
        lp.push_row(q(&[-1, 0]), RowRelation::Le, ratio(-1, 3));
        lp.objective = q(&[1, 0]);
        match lp_solve(&lp, Sense::Min).unwrap() {
            LpOutcome::Optimal { value, point } => {
                assert_eq!(value, ratio(1, 3));
                assert_eq!(point, vec![ratio(1, 3), ratio(2, 3)]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn degenerate_problem_terminates() {
        // A classic cycling example under the largest-coefficient rule.
        let mut lp = LinearProgram::new(4);
        lp.push_row(vec![ratio(1, 4), int(-8), int(-1), int(9)], RowRelation::Le, int(0));
        lp.push_row(
            vec![ratio(1, 2), int(-12), ratio(-1, 2), int(3)],
            RowRelation::Le,
            int(0),
        );
        lp.push_row(q(&[0, 0, 1, 0]), RowRelation::Le, int(1));
        lp.objective = vec![ratio(3, 4), int(-20), ratio(1, 2), int(-6)];
        match lp_solve(&lp, Sense::Max).unwrap() {
            LpOutcome::Optimal { value, point } => {
                assert_eq!(value, ratio(5, 4));
                assert!(lp.is_feasible(&point));
            }
            other => panic!("{other:?}"),
        }
    }
}
