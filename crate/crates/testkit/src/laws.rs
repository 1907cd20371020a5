//! Single-instance property checks. Each returns `Err` with a readable
//! counterexample; [`Tally`] aggregates them over a sample.

use crate::{fm, gen, relations};
use problogic::bridge::{embed, kripke_model};
use problogic::constraint::{BoundOutcome, Comparison, Reasoner, Sense, WeightConstraint, WeightTerm};
use problogic::intensional::{
    AbstractTerm, Assignment, BuiltinPred, DomainElement, Extensionalization, IFormula, Interpretation, KripkeModel,
    Relation,
};
use problogic::plp::{find_model, GroundProgram};
use problogic::rational::{one, zero};
use problogic::{eval_world, Alphabet, Formula, NilssonStructure, Rational};
use rand::Rng;

pub type Check = Result<(), String>;

fn fail(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: problogic::Error) -> String {
    format!("error: {e}")
}

#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct Tally {
    pub passed: usize,
    pub failed: usize,
    pub first_failure: Option<String>,
}

impl Tally {
    pub fn record(&mut self, c: Check) {
        match c {
            Ok(()) => self.passed += 1,
            Err(m) => {
                self.failed += 1;
                self.first_failure.get_or_insert(m);
            }
        }
    }

    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

/// `eval_world` commutes with `∧` and `¬` at every world.
pub fn homomorphism(alphabet: &Alphabet, a: &Formula, b: &Formula) -> Check {
    for w in alphabet.worlds() {
        let ev = |f: &Formula| eval_world(f, w, alphabet).map_err(err);
        let (x, y) = (ev(a)?, ev(b)?);
        fail(ev(&Formula::and(a.clone(), b.clone()))? == (x && y), || {
            format!("{a} & {b} at {w}")
        })?;
        fail(ev(&Formula::not(a.clone()))? == !x, || format!("~{a} at {w}"))?;
    }
    Ok(())
}

/// The probability component of the many-valued value is the weight, and
/// the value is designated.
pub fn many_valued(n: &NilssonStructure, f: &Formula) -> Check {
    let v = n.mv_eval(f).map_err(err)?;
    let w = n.weight(f).map_err(err)?;
    fail(v.prob == w, || format!("{f}: mv prob {} vs weight {w}", v.prob))?;
    fail(n.is_designated(&v), || format!("{f}: value not designated"))
}

/// Non-negativity, normalisation, additivity over `ψ`, and invariance
/// under the equivalent rewrite `g` of `f`.
pub fn axioms(n: &NilssonStructure, f: &Formula, psi: &Formula, g: &Formula) -> Check {
    let w = |x: &Formula| n.weight(x).map_err(err);
    let wf = w(f)?;
    fail(wf >= zero(), || format!("w({f}) = {wf} < 0"))?;
    fail(w(&Formula::True)? == one(), || "w(true) ≠ 1".into())?;
    let split = w(&Formula::and(f.clone(), psi.clone()))? + w(&Formula::and(f.clone(), Formula::not(psi.clone())))?;
    fail(split == wf, || {
        format!("w({f} & {psi}) + w({f} & ~{psi}) = {split} ≠ {wf}")
    })?;
    let eq = problogic::equivalent(f, g, n.alphabet()).map_err(err)?;
    fail(eq, || format!("rewrite {g} is not equivalent to {f}"))?;
    fail(w(g)? == wf, || format!("w({g}) ≠ w({f})"))
}

/// The reasoner and Fourier–Motzkin agree, and any witness satisfies the
/// system when re-evaluated by weight.
pub fn psat_agrees(alphabet: &Alphabet, cs: &[WeightConstraint]) -> Check {
    let r = Reasoner::default().satisfiable(alphabet, cs).map_err(err)?;
    let oracle = fm::psat(alphabet, cs);
    let show = || cs.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ");
    fail(r.is_sat() == oracle, || {
        format!("reasoner {} vs oracle {oracle} on {}", r.is_sat(), show())
    })?;
    if let Some(n) = &r.witness {
        for c in cs {
            let lhs = c.lhs.evaluate(n).map_err(err)?;
            fail(c.relation.holds(&lhs, &c.rhs), || format!("witness violates {c}"))?;
        }
    }
    Ok(())
}

/// `[min, max]` of `objective` agrees with the projection oracle.
pub fn bounds_agree(alphabet: &Alphabet, cs: &[WeightConstraint], objective: &WeightTerm) -> Check {
    let r = Reasoner::default();
    let min = r.bound(alphabet, cs, objective, Sense::Min).map_err(err)?;
    let max = r.bound(alphabet, cs, objective, Sense::Max).map_err(err)?;
    match (fm::bounds(alphabet, cs, objective), min, max) {
        (None, BoundOutcome::Unsat, BoundOutcome::Unsat) => Ok(()),
        (Some((lo, hi)), BoundOutcome::Optimal { value: a, .. }, BoundOutcome::Optimal { value: b, .. }) => {
            fail(lo == a && hi == b, || {
                format!("[{a}, {b}] vs oracle [{lo}, {hi}] for {objective}")
            })
        }
        (o, a, b) => Err(format!("oracle {o:?} vs {a:?} / {b:?}")),
    }
}

/// Tight bounds on `w(p ∧ q)` given `w(p) = a` and `w(q) = b`.
pub fn frechet(a: &Rational, b: &Rational) -> Check {
    let alphabet = Alphabet::new(["p", "q"]).map_err(err)?;
    let cs = vec![
        WeightConstraint::new(WeightTerm::weight(Formula::prop("p")), Comparison::Eq, a.clone()),
        WeightConstraint::new(WeightTerm::weight(Formula::prop("q")), Comparison::Eq, b.clone()),
    ];
    let obj = WeightTerm::weight(Formula::and(Formula::prop("p"), Formula::prop("q")));
    let value = |s| match Reasoner::default().bound(&alphabet, &cs, &obj, s) {
        Ok(BoundOutcome::Optimal { value, .. }) => Ok(value),
        other => Err(format!("{other:?}")),
    };
    let lo = std::cmp::max(zero(), a + b - one());
    let hi = std::cmp::min(a.clone(), b.clone());
    let (min, max) = (value(Sense::Min)?, value(Sense::Max)?);
    fail(min == lo && max == hi, || {
        format!("a={a}, b={b}: [{min}, {max}] vs [{lo}, {hi}]")
    })
}

fn assignments(vars: &[String], domain: &[DomainElement]) -> Vec<Assignment> {
    gen::tuples(domain, vars.len())
        .into_iter()
        .map(|t| vars.iter().cloned().zip(t).collect())
        .collect()
}

/// For every world and assignment of the free variables:
/// `h(I(φ/g)) = t` iff `g(x⃗) ∈ h(I(φ))` iff `w, g ⊨ φ`.
pub fn tarski(m: &KripkeModel, f: &IFormula) -> Check {
    let fv = f.free_vars();
    for w in 0..m.worlds().len() {
        let ext = m.extension(w, f).map_err(err)?;
        for g in assignments(&fv, m.interpretation().domain()) {
            let tuple: Vec<DomainElement> = fv.iter().map(|x| g[x].clone()).collect();
            let ground = m.extension(w, &f.ground(&g)).map_err(err)?.is_true();
            let sat = m.satisfies(w, &g, f).map_err(err)?;
            let member = ext.contains(&tuple);
            fail(ground == member && member == sat, || {
                format!("{f} at world {w}, g = {g:?}: ground {ground}, member {member}, satisfied {sat}")
            })?;
        }
    }
    Ok(())
}

/// `h(I(⋖φ⋗_α^β)) = π₋β(h(I(φ)))` for `α` drawn from the free variables.
pub fn abstraction<R: Rng>(rng: &mut R, m: &KripkeModel, f: &IFormula) -> Check {
    let fv = f.free_vars();
    if fv.is_empty() {
        return Ok(());
    }
    let alpha: Vec<String> = fv.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect();
    let t = AbstractTerm::abstracting(f.clone(), alpha).map_err(err)?;
    let c = m
        .interpretation()
        .interpret_abstract(&t)
        .map_err(err)?
        .concept()
        .ok_or_else(|| format!("{t} has no concept"))?;
    for w in 0..m.worlds().len() {
        let got = m.concept_extension(w, c).map_err(err)?;
        let mut expected = m.extension(w, f).map_err(err)?;
        for (k, x) in fv.iter().enumerate().rev() {
            if t.beta.contains(x) {
                expected = Relation::new(expected.arity() - 1, relations::project(&expected, k + 1)).map_err(err)?;
            }
        }
        fail(got == expected, || format!("{t} at world {w}: {got} vs {expected}"))?;
    }
    Ok(())
}

/// Join, complement, projection and union over two random relations.
pub fn algebra<R: Rng>(rng: &mut R) -> Check {
    let d = rng.gen_range(1..=3);
    let domain: Vec<DomainElement> = (1..=d).map(gen::number).collect();
    let (a1, a2) = (rng.gen_range(0..=3), rng.gen_range(0..=3));
    let a3 = a1;
    let i = Interpretation::new(domain.clone(), [("u".into(), a1), ("v".into(), a2), ("z".into(), a3)]).map_err(err)?;
    let (r1, r2, r3) = (
        gen::relation(rng, &domain, a1),
        gen::relation(rng, &domain, a2),
        gen::relation(rng, &domain, a3),
    );
    let h = Extensionalization::new()
        .with("u", r1.clone())
        .with("v", r2.clone())
        .with("z", r3.clone());
    let concept = |p: &str, a: usize| {
        let args = (0..a)
            .map(|k| problogic::intensional::Term::var(format!("x{k}")))
            .collect();
        i.interpret(&IFormula::atom(p, args)).map_err(err)
    };
    let (u, v, z) = (concept("u", a1)?, concept("v", a2)?, concept("z", a3)?);
    let ext = |c| problogic::intensional::concept_extension(&i, &h, &[], c).map_err(err);

    let mut pairs = Vec::new();
    if a1 > 0 && a2 > 0 {
        for _ in 0..rng.gen_range(0..=2) {
            pairs.push((rng.gen_range(1..=a1), rng.gen_range(1..=a2)));
        }
    }
    let joined = ext(i.conj(&pairs, u, v).map_err(err)?)?;
    let expected = relations::join(&r1, &r2, &pairs);
    fail(relations::same(&joined, &expected), || {
        format!("{r1} ⋈{pairs:?} {r2} gave {joined}")
    })?;
    let direct = problogic::intensional::natural_join(&r1, &r2, &pairs).map_err(err)?;
    fail(relations::same(&direct, &expected), || {
        format!("natural_join {r1} {r2} {pairs:?}")
    })?;

    let negated = ext(i.neg(u).map_err(err)?)?;
    fail(relations::same(&negated, &relations::complement(&r1, &domain)), || {
        format!("~{r1} gave {negated}")
    })?;

    if a1 > 0 {
        let n = rng.gen_range(1..=a1);
        let projected = ext(i.exists(n, u).map_err(err)?)?;
        fail(relations::same(&projected, &relations::project(&r1, n)), || {
            format!("π₋{n} {r1} gave {projected}")
        })?;
    }

    let members: Vec<_> = [u, z].into_iter().take(rng.gen_range(1..=2)).collect();
    let unioned = ext(i.union_concepts(&members).map_err(err)?)?;
    let mut expected = r1.clone();
    if members.len() == 2 {
        expected = expected.union(&r3).map_err(err)?;
    }
    fail(unioned == expected, || {
        format!("union of {members:?} gave {unioned}, expected {expected}")
    })
}

/// `h(I(⋖p(x) ∧ ¬p(x)⋗^x)) = f` over a random model with a unary `p`.
pub fn contradiction_abstract<R: Rng>(rng: &mut R) -> Check {
    let d = rng.gen_range(1..=4);
    let domain: Vec<DomainElement> = (1..=d).map(gen::number).collect();
    let i = Interpretation::new(domain.clone(), [("p".to_string(), 1)]).map_err(err)?;
    let worlds = (0..rng.gen_range(1..=3))
        .map(|_| Extensionalization::new().with("p", gen::relation(rng, &domain, 1)))
        .collect();
    let m = KripkeModel::new(i, worlds).map_err(err)?;
    let x = problogic::intensional::Term::var("x");
    let body = IFormula::and(
        IFormula::atom("p", vec![x.clone()]),
        IFormula::not(IFormula::atom("p", vec![x])),
    );
    let t = AbstractTerm::new(body, vec![], vec!["x".into()]).map_err(err)?;
    let c = m
        .interpretation()
        .interpret_abstract(&t)
        .map_err(err)?
        .concept()
        .ok_or("no concept")?;
    for w in 0..m.worlds().len() {
        let r = m.concept_extension(w, c).map_err(err)?;
        fail(r == Relation::falsity(), || format!("{t} at world {w} is {r}"))?;
    }
    Ok(())
}

/// On the Kripke model of `n`, satisfaction at world `s` is `eval_world`
/// at `s`, and `w_N(⋖φ⋗, x)` holds exactly for `x = weight(φ)`.
pub fn bridge(n: &NilssonStructure, f: &Formula) -> Check {
    let m = kripke_model(n).map_err(err)?;
    let e = embed(f);
    for w in n.alphabet().worlds() {
        let sat = m.satisfies(w.index(), &Assignment::new(), &e).map_err(err)?;
        let truth = eval_world(f, w, n.alphabet()).map_err(err)?;
        fail(sat == truth, || {
            format!("{f} at {w}: Kripke {sat}, truth table {truth}")
        })?;
    }
    let i = m.interpretation();
    let c = DomainElement::Concept(i.interpret(&e).map_err(err)?);
    let weight = n.weight(f).map_err(err)?;
    let x = problogic::intensional::Term::var("x");
    let wf = IFormula::builtin(
        BuiltinPred::Weight,
        vec![problogic::intensional::Term::Const(c.clone()), x],
    )
    .map_err(err)?;
    let expected = Relation::new(1, [vec![DomainElement::number(weight.clone())]]).map_err(err)?;
    for w in 0..m.worlds().len() {
        let r = m.extension(w, &wf).map_err(err)?;
        fail(r == expected, || {
            format!("w_N extension of {f} at world {w} is {r}, weight {weight}")
        })?;
    }
    let member = |q: Rational| i.builtin_membership(BuiltinPred::Weight, &[c.clone(), DomainElement::number(q)]);
    fail(member(weight.clone()).map_err(err)?, || {
        format!("w_N({f}, {weight}) fails")
    })?;
    fail(!member(weight.clone() + one()).map_err(err)?, || {
        format!("w_N({f}) not functional")
    })
}

/// `find_model` and exhaustive branch enumeration agree, and a returned
/// witness satisfies the program.
pub fn plp_agrees(p: &GroundProgram) -> Check {
    let found = find_model(p, &Reasoner::default()).map_err(err)?;
    let oracle = crate::plp::satisfiable(p);
    fail(found.is_some() == oracle, || {
        format!("find_model {} vs oracle {oracle} on\n{p}", found.is_some())
    })?;
    if let Some(n) = &found {
        fail(p.holds(n).map_err(err)?, || format!("witness fails\n{p}"))?;
    }
    Ok(())
}

/// Runs the structure-level suites over `samples` random formulas.
pub fn check_structure<R: Rng>(rng: &mut R, n: &NilssonStructure, samples: usize) -> Vec<(&'static str, Tally)> {
    let a = n.alphabet();
    let mut suites: Vec<(&'static str, Tally)> = ["homomorphism", "many-valued", "axioms", "bridge"]
        .into_iter()
        .map(|s| (s, Tally::default()))
        .collect();
    for _ in 0..samples {
        let f = gen::formula(rng, a, 3);
        let g = gen::formula(rng, a, 2);
        let rewrite = gen::equivalent_rewrite(rng, &f);
        suites[0].1.record(homomorphism(a, &f, &g));
        suites[1].1.record(many_valued(n, &f));
        suites[2].1.record(axioms(n, &f, &g, &rewrite));
        if a.len() <= 3 {
            suites[3].1.record(bridge(n, &f));
        }
    }
    suites
}
