use problogic::intensional::{
    AbstractTerm, Assignment, BuiltinPred, DomainElement, EquivalenceMode, Extensionalization, IFormula,
    Interpretation, KripkeModel, Relation, Term,
};
use problogic::rational::int;
use problogic_testkit::{gen, laws, rng, Rng};

#[test]
fn tarski_constraint_holds() {
    let mut r = rng(21);
    for _ in 0..150 {
        let m = gen::kripke_model(&mut r);
        let depth = r.gen_range(0..=3);
        let f = gen::iformula(&mut r, &m, depth);
        laws::tarski(&m, &f).unwrap();
    }
}

#[test]
fn abstraction_projects_out_open_variables() {
    let mut r = rng(22);
    for _ in 0..150 {
        let m = gen::kripke_model(&mut r);
        let depth = r.gen_range(0..=3);
        let f = gen::iformula(&mut r, &m, depth);
        laws::abstraction(&mut r, &m, &f).unwrap();
    }
}

#[test]
fn algebra_laws_hold() {
    let mut r = rng(23);
    for _ in 0..200 {
        laws::algebra(&mut r).unwrap();
    }
}

#[test]
fn contradiction_abstract_is_false() {
    let mut r = rng(24);
    for _ in 0..50 {
        laws::contradiction_abstract(&mut r).unwrap();
    }
}

#[test]
fn union_of_propositions_is_disjunction() {
    let i = Interpretation::new([], [("a".to_string(), 0), ("b".to_string(), 0)]).unwrap();
    let (a, b) = (
        i.interpret(&IFormula::prop("a")).unwrap(),
        i.interpret(&IFormula::prop("b")).unwrap(),
    );
    let u = i.union_concepts(&[a, b]).unwrap();
    for (x, y) in [(false, false), (false, true), (true, false), (true, true)] {
        let h = Extensionalization::new()
            .with("a", Relation::truth_value(x))
            .with("b", Relation::truth_value(y));
        let r = problogic::intensional::concept_extension(&i, &h, &[], u).unwrap();
        assert_eq!(r.is_true(), x || y);
    }
    assert_eq!(i.union_concepts(&[a]).unwrap(), a);
}

fn sold_bought(worlds: &[(&[i64], &[i64])]) -> KripkeModel {
    let domain: Vec<DomainElement> = (1..=3).map(gen::number).collect();
    let i = Interpretation::new(domain, [("sold".to_string(), 1), ("bought".to_string(), 1)]).unwrap();
    let rel = |xs: &[i64]| Relation::new(1, xs.iter().map(|&k| vec![gen::number(k)])).unwrap();
    let hs = worlds
        .iter()
        .map(|(s, b)| Extensionalization::new().with("sold", rel(s)).with("bought", rel(b)))
        .collect();
    KripkeModel::new(i, hs).unwrap()
}

fn unary(pred: &str) -> AbstractTerm {
    AbstractTerm::closed(IFormula::atom(pred, vec![Term::var("x")]))
}

#[test]
fn strong_and_weak_equivalence() {
    let g = Assignment::new();
    let same = sold_bought(&[(&[1], &[1]), (&[2, 3], &[2, 3])]);
    assert!(same
        .equivalent(&unary("sold"), &unary("bought"), &g, EquivalenceMode::Strong)
        .unwrap());

    let differ = sold_bought(&[(&[1], &[1]), (&[2], &[3])]);
    assert!(!differ
        .equivalent(&unary("sold"), &unary("bought"), &g, EquivalenceMode::Strong)
        .unwrap());
    // world unions {1,2} and {1,3}
    assert!(!differ
        .equivalent(&unary("sold"), &unary("bought"), &g, EquivalenceMode::Weak)
        .unwrap());

    let swapped = sold_bought(&[(&[1], &[2]), (&[2], &[1])]);
    assert!(!swapped
        .equivalent(&unary("sold"), &unary("bought"), &g, EquivalenceMode::Strong)
        .unwrap());
    assert!(swapped
        .equivalent(&unary("sold"), &unary("bought"), &g, EquivalenceMode::Weak)
        .unwrap());
}

#[test]
fn builtins_are_rigid() {
    let mut r = rng(25);
    let x = Term::var("x");
    let sum = IFormula::builtin(
        BuiltinPred::Sum,
        vec![Term::number(int(1)), Term::number(int(2)), x.clone()],
    )
    .unwrap();
    for _ in 0..20 {
        let m = gen::kripke_model(&mut r);
        let first = m.extension(0, &sum).unwrap();
        assert_eq!(first, Relation::new(1, [vec![gen::number(3)]]).unwrap());
        for w in 1..m.worlds().len() {
            assert_eq!(m.extension(w, &sum).unwrap(), first);
        }
    }
}

#[test]
fn empty_tuple_for_mismatched_abstraction() {
    let i = Interpretation::new([gen::number(1)], [("p".to_string(), 1)]).unwrap();
    let t = AbstractTerm::new(IFormula::atom("p", vec![Term::var("x")]), vec![], vec![]).unwrap();
    let d = i.interpret_abstract(&t).unwrap();
    assert_eq!(d.element(), DomainElement::unit());
    assert!(d.concept().is_none());
}
