//! Correspondence between Nilsson structures and intensional Kripke models:
//! each world `s ∈ 2^Φ` becomes the extensionalization `is(s)` in which a
//! proposition has extension `t` exactly when `s` makes it true.

use crate::error::{Error, Result};
use crate::formula::{Alphabet, Formula};
use crate::intensional::{concept_extension, Extensionalization, IFormula, Interpretation, KripkeModel, Relation};
use crate::nilsson::NilssonStructure;
use crate::worlds::World;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WorldBijection {
    alphabet: Alphabet,
}

impl WorldBijection {
    pub fn new(alphabet: Alphabet) -> Self {
        WorldBijection { alphabet }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// `is(s)`
    pub fn is(&self, w: World) -> Extensionalization {
        let mut h = Extensionalization::new();
        for (k, p) in self.alphabet.props().iter().enumerate() {
            h.set(p.clone(), Relation::truth_value(w.get(k)));
        }
        h
    }

    /// `v = is₂⁻¹ ∘ h ∘ I` on the propositions of the alphabet.
    pub fn valuation(&self, interp: &Interpretation, h: &Extensionalization) -> Result<World> {
        let mut w = World(0);
        for (k, p) in self.alphabet.props().iter().enumerate() {
            let c = interp.interpret(&IFormula::prop(p.clone()))?;
            let r = concept_extension(interp, h, &[], c)?;
            if r.arity() != 0 {
                return Err(Error::ArityMismatch(format!(
                    "proposition `{p}` has a non-nullary extension"
                )));
            }
            w = w.with(k, r.is_true());
        }
        Ok(w)
    }
}

/// The formula of `L(Φ)` as an intensional sentence.
pub fn embed(f: &Formula) -> IFormula {
    match f {
        Formula::True => IFormula::Top,
        Formula::False => IFormula::not(IFormula::Top),
        Formula::Prop(p) => IFormula::prop(p.clone()),
        Formula::Not(a) => IFormula::not(embed(a)),
        Formula::And(a, b) => IFormula::and(embed(a), embed(b)),
        Formula::Or(a, b) => IFormula::or(embed(a), embed(b)),
        Formula::Implies(a, b) => IFormula::not(IFormula::and(embed(a), IFormula::not(embed(b)))),
    }
}

/// Inverse of [`embed`] on sentences built from `⊤`, 0-ary atoms, `¬`
/// and `∧`; yields the [`Formula::desugar`] form.
pub fn extract(f: &IFormula) -> Option<Formula> {
    match f {
        IFormula::Top => Some(Formula::True),
        IFormula::Atom { pred, args } if args.is_empty() => Some(Formula::Prop(pred.clone())),
        IFormula::Not(a) => Some(Formula::not(extract(a)?)),
        IFormula::And(a, b) => Some(Formula::and(extract(a)?, extract(b)?)),
        _ => None,
    }
}

/// The Kripke model of a structure: one world per truth assignment, in
/// world-index order, with `w_N` backed by the structure.
pub fn kripke_model(n: &NilssonStructure) -> Result<KripkeModel> {
    let interp = Interpretation::new([], [])?.with_structure(n.clone())?;
    let bij = WorldBijection::new(n.alphabet().clone());
    let worlds = n.alphabet().worlds().map(|w| bij.is(w)).collect();
    KripkeModel::new(interp, worlds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intensional::{Assignment, BuiltinPred, DomainElement, Term};
    use crate::parser::parse_formula;
    use crate::rational::ratio;

    #[test]
    fn worlds_round_trip() {
        let a = Alphabet::new(["p", "q"]).unwrap();
        let n = NilssonStructure::uniform(a.clone()).unwrap();
        let m = kripke_model(&n).unwrap();
        let bij = WorldBijection::new(a.clone());
        for w in a.worlds() {
            assert_eq!(bij.valuation(m.interpretation(), &bij.is(w)).unwrap(), w);
        }
    }

    #[test]
    fn satisfaction_matches_truth_tables() {
        let a = Alphabet::new(["p"]).unwrap();
        let m = kripke_model(&NilssonStructure::uniform(a).unwrap()).unwrap();
        let g = Assignment::new();
        let p = IFormula::prop("p");
        assert!(m.satisfies(1, &g, &p).unwrap());
        assert!(!m.satisfies(0, &g, &p).unwrap());
        let f = embed(&parse_formula("p -> false").unwrap());
        assert!(m.satisfies(0, &g, &f).unwrap());
        assert_eq!(m.extension(0, &f).unwrap(), Relation::truth());
    }

    #[test]
    fn weight_builtin() {
        let a = Alphabet::new(["p", "q"]).unwrap();
        let m = kripke_model(&NilssonStructure::uniform(a).unwrap()).unwrap();
        let i = m.interpretation();
        let cp = i.interpret(&IFormula::prop("p")).unwrap();
        let half = DomainElement::number(ratio(1, 2));
        assert!(i
            .builtin_membership(BuiltinPred::Weight, &[DomainElement::Concept(cp), half.clone()])
            .unwrap());
        let third = DomainElement::number(ratio(1, 3));
        assert!(!i
            .builtin_membership(BuiltinPred::Weight, &[DomainElement::Concept(cp), third])
            .unwrap());
        assert!(i
            .builtin_membership(BuiltinPred::Weight, &[half.clone(), half])
            .is_err());
        let pq = i.interpret(&embed(&parse_formula("p & q").unwrap())).unwrap();
        let f = IFormula::builtin(
            BuiltinPred::Weight,
            vec![Term::Const(DomainElement::Concept(pq)), Term::var("x")],
        )
        .unwrap();
        let r = m.extension(0, &f).unwrap();
        assert!(r.contains(&[DomainElement::number(ratio(1, 4))]));
    }
}
