//! Program satisfiability by enumerating every combination of rule
//! alternatives and deciding each with Fourier–Motzkin.

use crate::fm;
use problogic::constraint::{Comparison, WeightConstraint, WeightTerm};
use problogic::plp::{AnnotatedFormula, GroundProgram};

fn within(af: &AnnotatedFormula) -> Vec<WeightConstraint> {
    let w = WeightTerm::weight(af.body.clone());
    vec![
        WeightConstraint::new(w.clone(), Comparison::Ge, af.lo.clone()),
        WeightConstraint::new(w, Comparison::Le, af.hi.clone()),
    ]
}

/// Ways to satisfy `head <- body` as an implication: the head interval
/// holds, or some body weight leaves its interval on either side. Empty
/// alternatives (below 0, above 1) are kept; the oracle discards them.
fn alternatives(head: &AnnotatedFormula, body: &[AnnotatedFormula]) -> Vec<Vec<WeightConstraint>> {
    let mut out = vec![within(head)];
    for b in body {
        let w = WeightTerm::weight(b.body.clone());
        out.push(vec![WeightConstraint::new(w.clone(), Comparison::Lt, b.lo.clone())]);
        out.push(vec![WeightConstraint::new(w, Comparison::Gt, b.hi.clone())]);
    }
    out
}

pub fn satisfiable(p: &GroundProgram) -> bool {
    let options: Vec<_> = p.rules.iter().map(|r| alternatives(&r.head, &r.body)).collect();
    let mut choice = vec![0usize; options.len()];
    loop {
        let cs: Vec<WeightConstraint> = choice
            .iter()
            .zip(&options)
            .flat_map(|(&k, o)| o[k].iter().cloned())
            .collect();
        if fm::psat(&p.alphabet, &cs) {
            return true;
        }
        // odometer increment
        let mut i = 0;
        loop {
            if i == choice.len() {
                return false;
            }
            choice[i] += 1;
            if choice[i] < options[i].len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}
