//! Finite Nilsson probability structures and the truth-functional
//! probabilistic algebra over them.
//!
//! A structure assigns an exact mass to each of the `2^|Φ|` worlds. The
//! probability of a formula can then be computed in two independent ways:
//! [`NilssonStructure::weight`] sums the masses of its models, while
//! [`NilssonStructure::mv_eval`] evaluates it bottom-up in the algebra of
//! pairs `(Im f, x)` with the p-conjunction and p-negation operators.

use crate::error::{Error, Result};
use crate::formula::{models, Alphabet, Formula, ENUMERATION_CAP};
use crate::rational::Rational;
use crate::worlds::{World, WorldSet};
use num_traits::{One, Signed, Zero};

/// A probability measure over all worlds of an alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NilssonStructure {
    alphabet: Alphabet,
    masses: Vec<Rational>,
}

/// Truth value of the probabilistic algebra: a world set (the image of the
/// characteristic function `f ∈ 2^S`) and a probability.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PValue {
    pub indicator: WorldSet,
    pub prob: Rational,
}

impl NilssonStructure {
    /// Builds and validates a structure. Worlds absent from `masses` get
    /// mass zero; the result must be non-negative and sum to exactly one.
    pub fn new(alphabet: Alphabet, masses: impl IntoIterator<Item = (World, Rational)>) -> Result<Self> {
        alphabet.check_cap(ENUMERATION_CAP)?;
        let n = alphabet.world_count();
        let mut dense: Vec<Option<Rational>> = vec![None; n];
        for (w, m) in masses {
            let slot = dense.get_mut(w.index()).ok_or_else(|| Error::WorldOutOfRange {
                world: w.0.to_string(),
                props: alphabet.len(),
            })?;
            if slot.is_some() {
                return Err(Error::Document(format!(
                    "duplicate mass for world {}",
                    w.key(alphabet.len())
                )));
            }
            *slot = Some(m);
        }
        Self::from_dense(alphabet, dense.into_iter().map(Option::unwrap_or_default).collect())
    }

    /// Masses indexed by world number.
    pub fn from_dense(alphabet: Alphabet, masses: Vec<Rational>) -> Result<Self> {
        alphabet.check_cap(ENUMERATION_CAP)?;
        if masses.len() != alphabet.world_count() {
            return Err(Error::DimensionMismatch(format!(
                "{} masses for {} worlds",
                masses.len(),
                alphabet.world_count()
            )));
        }
        for (i, m) in masses.iter().enumerate() {
            if m.is_negative() {
                return Err(Error::NegativeMass {
                    world: World(i as u64).key(alphabet.len()),
                    mass: m.to_string(),
                });
            }
        }
        let total: Rational = masses.iter().sum();
        if !total.is_one() {
            return Err(Error::TotalMass(total.to_string()));
        }
        Ok(NilssonStructure { alphabet, masses })
    }

    pub fn uniform(alphabet: Alphabet) -> Result<Self> {
        alphabet.check_cap(ENUMERATION_CAP)?;
        let n = alphabet.world_count();
        let each = Rational::new(1.into(), (n as u64).into());
        Self::from_dense(alphabet, vec![each; n])
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn mass(&self, w: World) -> &Rational {
        &self.masses[w.index()]
    }

    pub fn masses(&self) -> &[Rational] {
        &self.masses
    }

    /// `μ(X) = Σ_{s∈X} μ({s})`; additivity over disjoint sets holds by
    /// construction.
    pub fn measure(&self, set: &WorldSet) -> Rational {
        set.iter().map(|w| &self.masses[w.index()]).sum()
    }

    /// Probability of `f` as the total mass of the worlds satisfying it.
    pub fn weight(&self, f: &Formula) -> Result<Rational> {
        let bound = f.bind(&self.alphabet)?;
        Ok(self
            .alphabet
            .worlds()
            .filter(|w| bound.eval(*w))
            .map(|w| &self.masses[w.index()])
            .sum())
    }

    /// The algebra value assigned to a proposition: `(f_p, μ(Im f_p))` with
    /// `f_p(s) = s(p)`.
    pub fn atom(&self, prop: &str) -> Result<PValue> {
        let i = self
            .alphabet
            .position(prop)
            .ok_or_else(|| Error::UnknownProposition(prop.to_string()))?;
        let mut indicator = WorldSet::empty(self.alphabet.world_count());
        for w in self.alphabet.worlds().filter(|w| w.get(i)) {
            indicator.insert(w);
        }
        let prob = self.measure(&indicator);
        Ok(PValue { indicator, prob })
    }

    /// p-conjunction. Designated inputs yield `(f∩g, μ(Im(f∩g)))`; any
    /// non-designated input forces the probability to zero.
    pub fn conj(&self, x: &PValue, y: &PValue) -> PValue {
        let indicator = x.indicator.intersection(&y.indicator);
        let prob = if self.is_designated(x) && self.is_designated(y) {
            self.measure(&indicator)
        } else {
            Rational::zero()
        };
        PValue { indicator, prob }
    }

    /// p-negation, with the same designation guard as [`Self::conj`].
    pub fn neg(&self, x: &PValue) -> PValue {
        let indicator = x.indicator.complement();
        let prob = if self.is_designated(x) {
            self.measure(&indicator)
        } else {
            Rational::zero()
        };
        PValue { indicator, prob }
    }

    /// Truth-functional evaluation of `f` in the probabilistic algebra. The
    /// formula is first rewritten over `{∧, ¬}`.
    pub fn mv_eval(&self, f: &Formula) -> Result<PValue> {
        self.mv_eval_core(&f.expand(&self.alphabet))
    }

    fn mv_eval_core(&self, f: &Formula) -> Result<PValue> {
        match f {
            Formula::Prop(p) => self.atom(p),
            Formula::Not(a) => Ok(self.neg(&self.mv_eval_core(a)?)),
            Formula::And(a, b) => Ok(self.conj(&self.mv_eval_core(a)?, &self.mv_eval_core(b)?)),
            other => unreachable!("expanded formula contains {other:?}"),
        }
    }

    pub fn is_designated(&self, v: &PValue) -> bool {
        v.indicator.universe() == self.alphabet.world_count() && v.prob == self.measure(&v.indicator)
    }

    /// Worlds satisfying `f`, as a world set.
    pub fn models(&self, f: &Formula) -> Result<WorldSet> {
        models(f, &self.alphabet)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_formula;
    use crate::rational::{int, ratio};

    fn uniform(props: &[&str]) -> NilssonStructure {
        NilssonStructure::uniform(Alphabet::new(props.iter().copied()).unwrap()).unwrap()
    }

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    fn worlds(keys: &[&str], width: usize) -> WorldSet {
        WorldSet::from_worlds(1 << width, keys.iter().map(|k| World::from_key(k, width).unwrap())).unwrap()
    }

    #[test]
    fn make_structure_examples() {
        let p = Alphabet::new(["p"]).unwrap();
        let ok = NilssonStructure::new(p.clone(), [(World(0), ratio(1, 2)), (World(1), ratio(1, 2))]);
        assert!(ok.is_ok());
        let err = NilssonStructure::new(p.clone(), [(World(0), ratio(3, 4)), (World(1), ratio(3, 4))]);
        assert_eq!(err, Err(Error::TotalMass("3/2".into())));
        assert_eq!(Error::TotalMass("3/2".into()).to_string(), "total mass 3/2 ≠ 1");
        let pq = Alphabet::new(["p", "q"]).unwrap();
        let quarters = (0..4).map(|i| (World(i), ratio(1, 4)));
        assert!(NilssonStructure::new(pq, quarters).is_ok());
    }

    #[test]
    fn make_structure_rejects_bad_masses() {
        let p = Alphabet::new(["p"]).unwrap();
        assert!(matches!(
            NilssonStructure::new(p.clone(), [(World(0), int(2)), (World(1), int(-1))]),
            Err(Error::NegativeMass { .. })
        ));
        assert!(matches!(
            NilssonStructure::new(p.clone(), [(World(2), int(1))]),
            Err(Error::WorldOutOfRange { .. })
        ));
        // sparse input is completed with zeros
        let point = NilssonStructure::new(p, [(World(1), int(1))]).unwrap();
        assert_eq!(point.mass(World(0)), &int(0));
    }

    #[test]
    fn weight_examples() {
        let n = uniform(&["p", "q"]);
        assert_eq!(n.weight(&f("p")).unwrap(), ratio(1, 2));
        assert_eq!(n.weight(&Formula::True).unwrap(), int(1));
        assert_eq!(n.weight(&f("p & q")).unwrap(), ratio(1, 4));
        assert_eq!(n.weight(&f("r")), Err(Error::UnknownProposition("r".into())));
    }

    #[test]
    fn mv_eval_examples() {
        let n = uniform(&["p"]);
        let v = n.mv_eval(&f("~p")).unwrap();
        assert_eq!(
            v,
            PValue {
                indicator: worlds(&["0"], 1),
                prob: ratio(1, 2)
            }
        );

        let c = n.mv_eval(&f("p & ~p")).unwrap();
        assert!(c.indicator.is_empty());
        assert_eq!(c.prob, int(0));

        let n2 = uniform(&["p", "q"]);
        let v = n2.mv_eval(&f("p & q")).unwrap();
        assert_eq!(v.indicator, worlds(&["11"], 2));
        assert_eq!(v.prob, ratio(1, 4));
        assert_eq!(v.prob, n2.weight(&f("p & q")).unwrap());
        assert!(n2.is_designated(&v));
    }

    #[test]
    fn designation_examples() {
        let n = uniform(&["p"]);
        assert!(n.is_designated(&PValue {
            indicator: WorldSet::empty(2),
            prob: int(0)
        }));
        assert!(n.is_designated(&PValue {
            indicator: worlds(&["1"], 1),
            prob: ratio(1, 2)
        }));
        assert!(!n.is_designated(&PValue {
            indicator: worlds(&["1"], 1),
            prob: ratio(1, 3)
        }));
        // foreign sample space
        assert!(!n.is_designated(&PValue {
            indicator: WorldSet::empty(4),
            prob: int(0)
        }));
    }

    #[test]
    fn non_designated_inputs_force_zero() {
        let n = uniform(&["p", "q"]);
        let p = n.atom("p").unwrap();
        let q = n.atom("q").unwrap();
        let bogus = PValue {
            indicator: p.indicator.clone(),
            prob: ratio(1, 3),
        };

        let c = n.conj(&bogus, &q);
        assert_eq!(c.indicator, worlds(&["11"], 2));
        assert_eq!(c.prob, int(0));
        assert!(!n.is_designated(&c));
        assert_eq!(n.conj(&q, &bogus).prob, int(0));

        let m = n.neg(&bogus);
        assert_eq!(m.indicator, p.indicator.complement());
        assert_eq!(m.prob, int(0));

        assert_eq!(n.conj(&p, &q).prob, ratio(1, 4));
        assert_eq!(n.neg(&p).prob, ratio(1, 2));
    }

    #[test]
    fn sugar_goes_through_the_algebra() {
        let n = NilssonStructure::new(
            Alphabet::new(["p", "q"]).unwrap(),
            [
                (World(0), ratio(1, 10)),
                (World(1), ratio(2, 10)),
                (World(2), ratio(3, 10)),
                (World(3), ratio(4, 10)),
            ],
        )
        .unwrap();
        for s in ["p | q", "p -> q", "true", "false", "~(p -> ~q)"] {
            let v = n.mv_eval(&f(s)).unwrap();
            assert_eq!(v.prob, n.weight(&f(s)).unwrap(), "{s}");
            assert_eq!(v.indicator, n.models(&f(s)).unwrap(), "{s}");
        }
    }
}
