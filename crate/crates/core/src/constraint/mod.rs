//! Linear constraints over formula weights and their exact decision and
//! optimisation through the world-variable linear program.
//!
//! Every weight `w(φ)` is expanded to `Σ_{s ⊨ φ} y_s`, where `y_s` is the mass
//! of world `s`. Column `j` of a compiled program is the mass of `World(j)`;
//! the compiled program always carries the row `Σ_s y_s = 1`, and `y ≥ 0` is
//! implicit in the solver.

pub mod simplex;
pub mod syntax;

use crate::error::{Error, Result};
use crate::formula::{models, Alphabet, Formula};
use crate::nilsson::NilssonStructure;
use crate::rational::Rational;
use num_traits::{One, Signed, Zero};
use std::fmt;

pub use simplex::{lp_solve, LinearProgram, LpOutcome, LpRow, RowRelation, Sense};
pub use syntax::{parse_constraint, parse_constraints, parse_weight_term};

/// Default alphabet cap for compiling to a dense world-variable program.
pub const DEFAULT_WORLD_CAP: usize = 20;

/// `constant + Σ coefficient·w(formula)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct WeightTerm {
    pub terms: Vec<(Rational, Formula)>,
    pub constant: Rational,
}

impl WeightTerm {
    pub fn constant(c: Rational) -> Self {
        WeightTerm {
            terms: Vec::new(),
            constant: c,
        }
    }

    pub fn weight(f: Formula) -> Self {
        WeightTerm {
            terms: vec![(Rational::one(), f)],
            constant: Rational::zero(),
        }
    }

    pub fn plus(mut self, coefficient: Rational, f: Formula) -> Self {
        self.terms.push((coefficient, f));
        self
    }

    pub fn formulas(&self) -> impl Iterator<Item = &Formula> {
        self.terms.iter().map(|(_, f)| f)
    }

    /// Value of the term under a concrete measure.
    pub fn evaluate(&self, n: &NilssonStructure) -> Result<Rational> {
        let mut total = self.constant.clone();
        for (a, f) in &self.terms {
            total += a * n.weight(f)?;
        }
        Ok(total)
    }

    /// Per-world coefficients of the weight part.
    fn world_coefficients(&self, alphabet: &Alphabet) -> Result<Vec<Rational>> {
        let mut row = vec![Rational::zero(); alphabet.world_count()];
        for (a, f) in &self.terms {
            for w in models(f, alphabet)?.iter() {
                row[w.index()] += a;
            }
        }
        Ok(row)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Comparison {
    Le,
    Ge,
    Eq,
    /// Strict forms; only [`Reasoner::satisfiable`] accepts them.
    Lt,
    Gt,
}

impl Comparison {
    pub fn symbol(self) -> &'static str {
        match self {
            Comparison::Le => "<=",
            Comparison::Ge => ">=",
            Comparison::Eq => "=",
            Comparison::Lt => "<",
            Comparison::Gt => ">",
        }
    }

    pub fn holds(self, lhs: &Rational, rhs: &Rational) -> bool {
        match self {
            Comparison::Le => lhs <= rhs,
            Comparison::Ge => lhs >= rhs,
            Comparison::Eq => lhs == rhs,
            Comparison::Lt => lhs < rhs,
            Comparison::Gt => lhs > rhs,
        }
    }

    fn is_strict(self) -> bool {
        matches!(self, Comparison::Lt | Comparison::Gt)
    }
}

/// `lhs relation rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightConstraint {
    pub lhs: WeightTerm,
    pub relation: Comparison,
    pub rhs: Rational,
}

impl WeightConstraint {
    pub fn new(lhs: WeightTerm, relation: Comparison, rhs: Rational) -> Self {
        WeightConstraint { lhs, relation, rhs }
    }

    pub fn holds(&self, n: &NilssonStructure) -> Result<bool> {
        Ok(self.relation.holds(&self.lhs.evaluate(n)?, &self.rhs))
    }

    pub fn formulas(&self) -> impl Iterator<Item = &Formula> {
        self.lhs.formulas()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SatStatus {
    Sat,
    Unsat,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SatResult {
    pub status: SatStatus,
    /// Present iff `status` is `Sat`; satisfies every input constraint.
    pub witness: Option<NilssonStructure>,
}

impl SatResult {
    pub fn is_sat(&self) -> bool {
        self.status == SatStatus::Sat
    }

    fn unsat() -> Self {
        SatResult {
            status: SatStatus::Unsat,
            witness: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoundOutcome {
    Optimal { value: Rational, witness: NilssonStructure },
    Unsat,
    Unbounded,
}

/// Compiles and solves weight-constraint systems under a world cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Reasoner {
    pub world_cap: usize,
}

impl Default for Reasoner {
    fn default() -> Self {
        Reasoner {
            world_cap: DEFAULT_WORLD_CAP,
        }
    }
}

impl Reasoner {
    pub fn with_cap(world_cap: usize) -> Self {
        Reasoner { world_cap }
    }

    /// World-variable program for `cs`: one row per constraint (`≥` rows are
    /// negated into `≤`), then `Σ y = 1`. The objective is zero.
    pub fn compile(&self, alphabet: &Alphabet, cs: &[WeightConstraint]) -> Result<LinearProgram> {
        alphabet.check_cap(self.world_cap)?;
        let n = alphabet.world_count();
        let mut lp = LinearProgram::new(n);
        for c in cs {
            if c.relation.is_strict() {
                return Err(Error::Unsupported(format!(
                    "strict `{}` cannot be compiled to a closed program",
                    c.relation.symbol()
                )));
            }
            let coeffs = c.lhs.world_coefficients(alphabet)?;
            let rhs = &c.rhs - &c.lhs.constant;
            match c.relation {
                Comparison::Le => lp.push_row(coeffs, RowRelation::Le, rhs),
                Comparison::Ge => lp.push_row(coeffs.into_iter().map(|a| -a).collect(), RowRelation::Le, -rhs),
                Comparison::Eq => lp.push_row(coeffs, RowRelation::Eq, rhs),
                Comparison::Lt | Comparison::Gt => unreachable!(),
            }
        }
        lp.push_row(vec![Rational::one(); n], RowRelation::Eq, Rational::one());
        Ok(lp)
    }

    /// Decides whether some measure satisfies all of `cs`, returning an exact
    /// witness when one exists.
    ///
    /// Strict constraints are handled with a shared margin variable `t ≥ 0`:
    /// `lhs < rhs` becomes `lhs + t ≤ rhs` (and symmetrically for `>`), `t` is
    /// maximised, and the system is satisfiable iff the optimum is positive.
    pub fn satisfiable(&self, alphabet: &Alphabet, cs: &[WeightConstraint]) -> Result<SatResult> {
        let (closed, strict): (Vec<_>, Vec<_>) = cs.iter().cloned().partition(|c| !c.relation.is_strict());
        let mut lp = self.compile(alphabet, &closed)?;
        let worlds = alphabet.world_count();
        let outcome = if strict.is_empty() {
            lp_solve(&lp, Sense::Min)?
        } else {
            let margin = worlds;
            lp.num_vars += 1;
            for row in &mut lp.rows {
                row.coeffs.push(Rational::zero());
            }
            for c in &strict {
                let mut coeffs = c.lhs.world_coefficients(alphabet)?;
                let rhs = &c.rhs - &c.lhs.constant;
                if c.relation == Comparison::Lt {
                    coeffs.push(Rational::one());
                    lp.push_row(coeffs, RowRelation::Le, rhs);
                } else {
                    coeffs.push(-Rational::one());
                    lp.push_row(coeffs, RowRelation::Ge, rhs);
                }
            }
            let mut cap = vec![Rational::zero(); worlds + 1];
            cap[margin] = Rational::one();
            lp.push_row(cap, RowRelation::Le, Rational::one());
            lp.objective = vec![Rational::zero(); worlds + 1];
            lp.objective[margin] = Rational::one();
            match lp_solve(&lp, Sense::Max)? {
                LpOutcome::Optimal { value, .. } if !value.is_positive() => LpOutcome::Infeasible,
                other => other,
            }
        };
        match outcome {
            LpOutcome::Optimal { mut point, .. } => {
                point.truncate(worlds);
                let witness = NilssonStructure::from_dense(alphabet.clone(), point)?;
                Ok(SatResult {
                    status: SatStatus::Sat,
                    witness: Some(witness),
                })
            }
            LpOutcome::Infeasible => Ok(SatResult::unsat()),
            LpOutcome::Unbounded => unreachable!("feasibility program has a zero objective"),
        }
    }

    /// Exact optimum of `objective` over all measures satisfying `cs`.
    pub fn bound(
        &self,
        alphabet: &Alphabet,
        cs: &[WeightConstraint],
        objective: &WeightTerm,
        sense: Sense,
    ) -> Result<BoundOutcome> {
        let mut lp = self.compile(alphabet, cs)?;
        lp.objective = objective.world_coefficients(alphabet)?;
        Ok(match lp_solve(&lp, sense)? {
            LpOutcome::Optimal { value, point } => BoundOutcome::Optimal {
                value: value + &objective.constant,
                witness: NilssonStructure::from_dense(alphabet.clone(), point)?,
            },
            LpOutcome::Infeasible => BoundOutcome::Unsat,
            LpOutcome::Unbounded => BoundOutcome::Unbounded,
        })
    }
}

pub fn compile(alphabet: &Alphabet, cs: &[WeightConstraint]) -> Result<LinearProgram> {
    Reasoner::default().compile(alphabet, cs)
}

pub fn satisfiable(alphabet: &Alphabet, cs: &[WeightConstraint]) -> Result<SatResult> {
    Reasoner::default().satisfiable(alphabet, cs)
}

pub fn bound(
    alphabet: &Alphabet,
    cs: &[WeightConstraint],
    objective: &WeightTerm,
    sense: Sense,
) -> Result<BoundOutcome> {
    Reasoner::default().bound(alphabet, cs, objective, sense)
}

impl fmt::Display for WeightTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (a, phi) in &self.terms {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            if a.is_one() {
                write!(f, "w({phi})")?;
            } else {
                write!(f, "{a}*w({phi})")?;
            }
        }
        if first || !self.constant.is_zero() {
            if !first {
                f.write_str(" + ")?;
            }
            write!(f, "{}", self.constant)?;
        }
        Ok(())
    }
}

impl fmt::Display for WeightConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.lhs, self.relation.symbol(), self.rhs)
    }
}
