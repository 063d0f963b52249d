import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flowcoh.fgab import FgAbGroup
from flowcoh.structexpr import ATOMS, StructureExpr, expr_sum, from_fg_ab_group, torsion_of

atoms = st.sampled_from(list(ATOMS) + [f"Z_{d}" for d in range(1, 13)])
exprs = st.lists(st.tuples(atoms, st.integers(0, 3)), max_size=5).map(lambda t: StructureExpr(tuple(t)))


def test_normalization():
    e = StructureExpr((("Z_6", 1), ("R", 1), ("Q/Z", 0), ("Z_1", 3), ("R", 2)))
    assert e.terms == (("R", 3), ("Z_6", 1))
    assert StructureExpr.of("Z_1").is_trivial()
    with pytest.raises(ValueError):
        StructureExpr.of("C")
    with pytest.raises(ValueError):
        StructureExpr((("R", -1),))


def test_render():
    assert StructureExpr.of("R", "Q/Z").render() == "R ⊕ Q/Z"
    assert StructureExpr.of(("Q/Z", 2), "R", ("Z_2", 2)).render() == "R ⊕ (Q/Z)^2 ⊕ Z_2^2"
    assert StructureExpr().render() == "0"
    assert StructureExpr.of("bR", "Q*").render(sep=" × ", empty="1") == "bR × Q*"
    assert StructureExpr.of(("R", 3)).simplify(collapse_reals=True) == StructureExpr.of("R")


@settings(max_examples=100, deadline=None)
@given(exprs, exprs)
def test_sum_and_json(a, b):
    assert expr_sum(a, b) == expr_sum(b, a)
    assert StructureExpr.from_json(a.to_json()) == a
    assert a + StructureExpr() == a
    assert (a * 2) == a + a


def test_torsion_of():
    e = StructureExpr.of("R", "Q/Z", "Z_2", "Z_6")
    assert torsion_of(e, 4) == FgAbGroup.parse("Z_2+Z_2+Z_4")
    assert torsion_of(e, 1).is_trivial()
    assert torsion_of(StructureExpr.of("Z", "Q", "bR", "Q*"), 5).is_trivial()
    with pytest.raises(ValueError):
        torsion_of(StructureExpr.of("T1"), 2)


def test_from_fg_ab_group():
    assert from_fg_ab_group(FgAbGroup.parse("Z^2+Z_6")).render() == "Z^2 ⊕ Z_6"


discrete = st.sampled_from(["R", "bR", "Q", "Q/Z", "Q*", "Z"] + [f"Z_{d}" for d in range(2, 13)])
discrete_exprs = st.lists(st.tuples(discrete, st.integers(0, 3)), max_size=5).map(lambda t: StructureExpr(tuple(t)))


@settings(max_examples=100, deadline=None)
@given(discrete_exprs, discrete_exprs, st.integers(1, 40))
def test_torsion_of_is_additive(a, b, k):
    assert torsion_of(expr_sum(a, b), k) == torsion_of(a, k) + torsion_of(b, k)
