//! Random inputs. Every generator takes the RNG explicitly so that suites
//! are reproducible from a seed.

use problogic::constraint::{Comparison, WeightConstraint, WeightTerm};
use problogic::intensional::{
    DomainElement, Extensionalization, IFormula, Interpretation, KripkeModel, Relation, Term,
};
use problogic::plp::{AnnotatedFormula, AnnotatedRule, GroundProgram};
use problogic::rational::{int, ratio};
use problogic::{Alphabet, Formula, NilssonStructure, Rational};
use rand::seq::SliceRandom;
use rand::Rng;

pub const PROPS: [&str; 4] = ["p", "q", "r", "s"];

pub fn alphabet<R: Rng>(rng: &mut R, max: usize) -> Alphabet {
    let n = rng.gen_range(1..=max);
    Alphabet::new(PROPS[..n].iter().copied()).expect("distinct names")
}

/// Formulas over `alphabet`, sugar and constants included.
pub fn formula<R: Rng>(rng: &mut R, alphabet: &Alphabet, depth: usize) -> Formula {
    let leaf = depth == 0 || rng.gen_bool(0.3);
    if leaf {
        return match rng.gen_range(0..10) {
            0 => Formula::True,
            1 => Formula::False,
            _ => Formula::prop(alphabet.props().choose(rng).expect("non-empty alphabet").clone()),
        };
    }
    let d = depth - 1;
    match rng.gen_range(0..5) {
        0 => Formula::not(formula(rng, alphabet, d)),
        1 => Formula::and(formula(rng, alphabet, d), formula(rng, alphabet, d)),
        2 => Formula::or(formula(rng, alphabet, d), formula(rng, alphabet, d)),
        3 => Formula::implies(formula(rng, alphabet, d), formula(rng, alphabet, d)),
        _ => Formula::and(formula(rng, alphabet, d), Formula::not(formula(rng, alphabet, d))),
    }
}

/// A measure whose masses have denominators up to `4·2^|Φ|`, with a fair
/// share of zero-mass worlds.
pub fn structure<R: Rng>(rng: &mut R, alphabet: &Alphabet) -> NilssonStructure {
    let n = alphabet.world_count();
    let mut raw: Vec<i64> = (0..n)
        .map(|_| if rng.gen_bool(0.25) { 0 } else { rng.gen_range(1..=4) })
        .collect();
    if raw.iter().all(|&m| m == 0) {
        raw[rng.gen_range(0..n)] = 1;
    }
    let total: i64 = raw.iter().sum();
    NilssonStructure::from_dense(alphabet.clone(), raw.into_iter().map(|m| ratio(m, total)).collect())
        .expect("normalised masses")
}

/// A rewrite of `f` that is classically equivalent to it.
pub fn equivalent_rewrite<R: Rng>(rng: &mut R, f: &Formula) -> Formula {
    let g = match f {
        Formula::True | Formula::False | Formula::Prop(_) => f.clone(),
        Formula::Not(a) => Formula::not(equivalent_rewrite(rng, a)),
        Formula::And(a, b) => {
            let (a, b) = (equivalent_rewrite(rng, a), equivalent_rewrite(rng, b));
            match rng.gen_range(0..3) {
                0 => Formula::and(b, a),
                1 => Formula::not(Formula::or(Formula::not(a), Formula::not(b))),
                _ => Formula::and(a, b),
            }
        }
        Formula::Or(a, b) => {
            let (a, b) = (equivalent_rewrite(rng, a), equivalent_rewrite(rng, b));
            match rng.gen_range(0..3) {
                0 => Formula::or(b, a),
                1 => Formula::not(Formula::and(Formula::not(a), Formula::not(b))),
                _ => Formula::implies(Formula::not(a), b),
            }
        }
        Formula::Implies(a, b) => {
            let (a, b) = (equivalent_rewrite(rng, a), equivalent_rewrite(rng, b));
            match rng.gen_range(0..2) {
                0 => Formula::or(Formula::not(a), b),
                _ => Formula::implies(Formula::not(b), Formula::not(a)),
            }
        }
    };
    if rng.gen_bool(0.15) {
        Formula::not(Formula::not(g))
    } else {
        g
    }
}

const BOUNDS: [(i64, i64); 5] = [(0, 1), (1, 4), (1, 2), (3, 4), (1, 1)];

pub fn bound<R: Rng>(rng: &mut R) -> Rational {
    let (n, d) = BOUNDS[rng.gen_range(0..BOUNDS.len())];
    ratio(n, d)
}

/// One to four constraints, each a sum of one to three weighted terms
/// with coefficients in `-2..=2`.
pub fn constraint_system<R: Rng>(rng: &mut R, alphabet: &Alphabet) -> Vec<WeightConstraint> {
    (0..rng.gen_range(1..=4))
        .map(|_| {
            let mut lhs = WeightTerm::default();
            for _ in 0..rng.gen_range(1..=3) {
                let depth = rng.gen_range(0..=2);
                lhs = lhs.plus(int(rng.gen_range(-2..=2)), formula(rng, alphabet, depth));
            }
            let relation = [Comparison::Le, Comparison::Ge, Comparison::Eq][rng.gen_range(0..3)];
            WeightConstraint::new(lhs, relation, bound(rng))
        })
        .collect()
}

pub fn number(k: i64) -> DomainElement {
    DomainElement::number(int(k))
}

/// Domain `{1..d}`, up to three predicates of arity at most three, and
/// one to three worlds with random extensions.
pub fn kripke_model<R: Rng>(rng: &mut R) -> KripkeModel {
    let d = rng.gen_range(1..=4);
    let domain: Vec<DomainElement> = (1..=d).map(number).collect();
    let preds: Vec<(String, usize)> = (0..rng.gen_range(1..=3))
        .map(|k| (format!("p{k}"), rng.gen_range(0..=3)))
        .collect();
    let interp = Interpretation::new(domain.clone(), preds.clone()).expect("fresh predicate names");
    let worlds = (0..rng.gen_range(1..=3))
        .map(|_| {
            let mut h = Extensionalization::new();
            for (p, a) in &preds {
                h.set(p.clone(), relation(rng, &domain, *a));
            }
            h
        })
        .collect();
    KripkeModel::new(interp, worlds).expect("valid worlds")
}

pub fn tuples(domain: &[DomainElement], arity: usize) -> Vec<Vec<DomainElement>> {
    let mut out = vec![Vec::new()];
    for _ in 0..arity {
        out = out
            .into_iter()
            .flat_map(|t| {
                domain.iter().map(move |e| {
                    let mut t = t.clone();
                    t.push(e.clone());
                    t
                })
            })
            .collect();
    }
    out
}

/// Each tuple of `domain^arity` kept with probability one half.
pub fn relation<R: Rng>(rng: &mut R, domain: &[DomainElement], arity: usize) -> Relation {
    let kept: Vec<_> = tuples(domain, arity)
        .into_iter()
        .filter(|_| rng.gen_bool(0.5))
        .collect();
    Relation::new(arity, kept).expect("tuples of the declared arity")
}

pub const VARS: [&str; 3] = ["x", "y", "z"];

/// Intensional formulas over the model's predicates, with variables from
/// [`VARS`] and constants from the domain.
pub fn iformula<R: Rng>(rng: &mut R, m: &KripkeModel, depth: usize) -> IFormula {
    let interp = m.interpretation();
    if depth == 0 || rng.gen_bool(0.3) {
        let preds: Vec<(&String, &usize)> = interp.predicates().iter().collect();
        let (p, &a) = preds[rng.gen_range(0..preds.len())];
        let args = (0..a)
            .map(|_| {
                if rng.gen_bool(0.8) {
                    Term::var(VARS[rng.gen_range(0..VARS.len())])
                } else {
                    Term::Const(interp.domain().choose(rng).expect("non-empty domain").clone())
                }
            })
            .collect();
        return IFormula::atom(p.clone(), args);
    }
    let d = depth - 1;
    match rng.gen_range(0..6) {
        0 => IFormula::not(iformula(rng, m, d)),
        1 | 2 => IFormula::and(iformula(rng, m, d), iformula(rng, m, d)),
        3 => IFormula::exists(VARS[rng.gen_range(0..VARS.len())], iformula(rng, m, d)),
        4 => IFormula::necessarily(iformula(rng, m, d)),
        _ => IFormula::possibly(iformula(rng, m, d)),
    }
}

/// Half of the intervals are single points, which makes conflicts likely.
fn interval<R: Rng>(rng: &mut R) -> (Rational, Rational) {
    if rng.gen_bool(0.5) {
        let x = bound(rng);
        return (x.clone(), x);
    }
    let (a, b) = (bound(rng), bound(rng));
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// At most three rules over at most three atoms.
pub fn program<R: Rng>(rng: &mut R) -> GroundProgram {
    let alphabet = alphabet(rng, 3);
    let annotated = |rng: &mut R, body: Formula| {
        let (lo, hi) = interval(rng);
        AnnotatedFormula::new(body, lo, hi).expect("ordered bounds")
    };
    let rules = (0..rng.gen_range(1..=3))
        .map(|_| {
            let head = Formula::prop(alphabet.props().choose(rng).expect("non-empty").clone());
            let head = annotated(rng, head);
            let len = if rng.gen_bool(0.5) { 0 } else { rng.gen_range(1..=2) };
            let body = (0..len)
                .map(|_| {
                    let depth = rng.gen_range(0..=1);
                    let f = formula(rng, &alphabet, depth);
                    annotated(rng, f)
                })
                .collect();
            AnnotatedRule::new(head, body).expect("atomic head")
        })
        .collect();
    GroundProgram::new(rules).expect("non-empty program")
}
