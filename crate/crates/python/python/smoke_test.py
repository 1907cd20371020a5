"""Import the extension and exercise each entry point once."""

from fractions import Fraction

import problogic_py as pl


def main():
    n = pl.Structure.uniform(["p", "q"])
    assert n.weight("p & q") == Fraction(1, 4)
    worlds, prob, designated = n.mv_eval("p | ~q")
    assert prob == Fraction(3, 4) and designated and len(worlds) == 3
    assert pl.Structure.from_json(n.to_json()).masses() == n.masses()

    f = pl.Formula("p -> q")
    assert f.equivalent(pl.Formula("~p | q"))
    assert str(f.desugar()) == "~(p & ~q)"

    assert pl.psat("w(p) >= 0.6; w(q) >= 0.6; w(p & q) <= 0.1") is None
    witness = pl.psat("w(p) >= 0.6; w(q) >= 0.6; w(p & q) <= 0.2")
    assert witness.weight("p & q") <= Fraction(1, 5)
    cons = "w(p) = 3/5; w(q) = 7/10"
    assert pl.bound(cons, "w(p & q)", "min") == Fraction(3, 10)
    assert pl.bound(cons, "w(p & q)", "max") == Fraction(3, 5)

    prog = pl.Program("a : [0.8, 1] <- b : [0.6, 1].\nb : [0.7, 1].")
    model = prog.find_model()
    assert prog.holds(model) and model.weight("a") >= Fraction(4, 5)
    assert pl.Program("a : [0, 0]. a : [1, 1].").find_model() is None
    assert prog.translate()[1] == "exists x0. (w_N(<b>, x0) & (leq(7/10, x0) & leq(x0, 1)))."

    r = pl.Relation(2, [(1, "a"), (2, "b")])
    s = pl.Relation(1, [("a",)])
    assert r.join(s, [(2, 1)]).tuples() == [(Fraction(1), "a")]
    assert len(s.complement(["a", "b"])) == 1
    assert r.project_out(1).arity == 1

    k = pl.KripkeModel.of_structure(n)
    assert k.worlds == 4
    assert [k.satisfies(w, "p & ~q") for w in range(4)] == [False, True, False, False]

    try:
        pl.Formula("p &")
    except pl.ProblogicError as e:
        assert "offset 3" in str(e)
    else:
        raise AssertionError("syntax error not raised")
    print("smoke test passed")


if __name__ == "__main__":
    main()
