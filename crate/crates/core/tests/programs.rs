use problogic::constraint::Reasoner;
use problogic::plp::{
    annotate_to_constraint, find_model, holds_intensionally, parse_program, translate_program, translate_rule,
};
use problogic::rational::ratio;
use problogic::{parse_formula, Error};
use problogic_testkit::{gen, laws, rng};

#[test]
fn find_model_examples() {
    let r = Reasoner::default();
    let a = parse_formula("a").unwrap();
    let n = find_model(&parse_program("a : [1,1].").unwrap(), &r).unwrap().unwrap();
    assert_eq!(n.weight(&a).unwrap(), ratio(1, 1));

    assert!(find_model(&parse_program("a : [0,0]. a : [1,1].").unwrap(), &r)
        .unwrap()
        .is_none());

    let p = parse_program("a : [0.8,1] <- b : [0.6,1]. b : [0.7,1].").unwrap();
    let n = find_model(&p, &r).unwrap().unwrap();
    assert!(n.weight(&parse_formula("b").unwrap()).unwrap() >= ratio(7, 10));
    assert!(n.weight(&a).unwrap() >= ratio(4, 5));
}

#[test]
fn find_model_agrees_with_enumeration() {
    let mut r = rng(41);
    for _ in 0..60 {
        laws::plp_agrees(&gen::program(&mut r)).unwrap();
    }
}

#[test]
fn printing_round_trips() {
    let mut r = rng(42);
    for _ in 0..100 {
        let p = gen::program(&mut r);
        assert_eq!(parse_program(&p.to_string()).unwrap(), p);
    }
}

#[test]
fn translation_round_trips_and_agrees_with_constraints() {
    let mut r = rng(43);
    for _ in 0..40 {
        let p = gen::program(&mut r);
        let n = gen::structure(&mut r, &p.alphabet);
        for (rule, ir) in p.rules.iter().zip(translate_program(&p)) {
            assert_eq!(ir.to_annotated().unwrap(), rule.desugar());
            assert_eq!(ir.body.len(), rule.body.len());
            let m = problogic::bridge::kripke_model(&n).unwrap();
            assert_eq!(ir.holds(&m).unwrap(), rule.holds(&n).unwrap());
            for af in rule.body.iter().chain([&rule.head]) {
                let (lo, hi) = annotate_to_constraint(af);
                let both = lo.holds(&n).unwrap() && hi.holds(&n).unwrap();
                assert_eq!(both, af.holds(&n).unwrap());
                assert_eq!(holds_intensionally(&n, af).unwrap(), both);
            }
        }
    }
}

#[test]
fn translated_fact_text() {
    let p = parse_program("a : [1,1].").unwrap();
    let ir = translate_rule(&p.rules[0]);
    assert!(ir.body.is_empty());
    assert_eq!(ir.to_string(), "exists x0. (w_N(<a>, x0) & (leq(1, x0) & leq(x0, 1))).");
}

#[test]
fn input_errors() {
    let e = parse_program("a : [0.9, 0.1].").unwrap_err();
    assert!(e.to_string().contains("empty interval"));
    assert!(matches!(parse_program("p(X) : [0,1]."), Err(Error::NonGround { .. })));
    let p = parse_program("a : [1,1]. b : [1,1]. c : [1,1].").unwrap();
    assert!(find_model(&p, &Reasoner::with_cap(2)).is_err());
}
