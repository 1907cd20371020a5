use problogic::bridge::{embed, extract, kripke_model, WorldBijection};
use problogic_testkit::{gen, laws, rng};

#[test]
fn kripke_model_of_a_structure_is_coherent() {
    let mut r = rng(31);
    for _ in 0..100 {
        let a = gen::alphabet(&mut r, 3);
        let n = gen::structure(&mut r, &a);
        let f = gen::formula(&mut r, &a, 3);
        laws::bridge(&n, &f).unwrap();
    }
}

#[test]
fn embedding_round_trips_through_desugar() {
    let mut r = rng(32);
    for _ in 0..200 {
        let a = gen::alphabet(&mut r, 4);
        let f = gen::formula(&mut r, &a, 4);
        assert_eq!(extract(&embed(&f)), Some(f.desugar()));
    }
}

#[test]
fn valuation_inverts_the_bijection() {
    let mut r = rng(33);
    for _ in 0..20 {
        let a = gen::alphabet(&mut r, 4);
        let m = kripke_model(&gen::structure(&mut r, &a)).unwrap();
        let bij = WorldBijection::new(a.clone());
        for w in a.worlds() {
            assert_eq!(bij.valuation(m.interpretation(), &bij.is(w)).unwrap(), w);
            assert_eq!(m.worlds()[w.index()], bij.is(w));
        }
    }
}
