use problogic::formula::models;
use problogic::parse_formula;
use problogic_testkit::{gen, laws, rng, Rng};

#[test]
fn print_then_parse_is_identity() {
    let mut r = rng(1);
    for _ in 0..500 {
        let a = gen::alphabet(&mut r, 4);
        let f = gen::formula(&mut r, &a, 4);
        let text = f.to_string();
        assert_eq!(parse_formula(&text).unwrap(), f, "{text}");
    }
}

#[test]
fn evaluation_is_homomorphic() {
    let mut r = rng(2);
    for _ in 0..300 {
        let a = gen::alphabet(&mut r, 4);
        let (f, g) = (gen::formula(&mut r, &a, 3), gen::formula(&mut r, &a, 3));
        laws::homomorphism(&a, &f, &g).unwrap();
    }
}

#[test]
fn rewrites_are_equivalent_and_desugar_preserves_models() {
    let mut r = rng(3);
    for _ in 0..300 {
        let a = gen::alphabet(&mut r, 4);
        let f = gen::formula(&mut r, &a, 3);
        let g = gen::equivalent_rewrite(&mut r, &f);
        assert!(problogic::equivalent(&f, &g, &a).unwrap(), "{f} vs {g}");
        assert_eq!(models(&f, &a).unwrap(), models(&f.desugar(), &a).unwrap());
    }
}

#[test]
fn many_valued_value_is_the_weight() {
    let mut r = rng(4);
    for _ in 0..400 {
        let a = gen::alphabet(&mut r, 4);
        let n = gen::structure(&mut r, &a);
        let f = gen::formula(&mut r, &a, 3);
        laws::many_valued(&n, &f).unwrap();
    }
}

#[test]
fn weight_satisfies_probability_axioms() {
    let mut r = rng(5);
    for _ in 0..300 {
        let a = gen::alphabet(&mut r, 4);
        let n = gen::structure(&mut r, &a);
        let depth = r.gen_range(1..=3);
        let f = gen::formula(&mut r, &a, depth);
        let psi = gen::formula(&mut r, &a, 2);
        let g = gen::equivalent_rewrite(&mut r, &f);
        laws::axioms(&n, &f, &psi, &g).unwrap();
    }
}
