import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flowcoh.exactla import (
    IntMatrix,
    Lattice,
    divide_lattice,
    hnf,
    kernel_basis,
    lattice_intersection,
    lattice_preimage,
    lattice_sum,
    rational_inverse,
    snf,
)
from oracles import det_fraction, invariant_factors_by_minors


def matrices(max_rows=4, max_cols=4, bound=12):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(
                st.lists(st.integers(-bound, bound), min_size=c, max_size=c), min_size=r, max_size=r
            )
        )
    )


def test_constructors_and_shape():
    a = IntMatrix.from_rows([[1, 2, 3], [4, 5, 6]])
    assert a.shape == (2, 3)
    assert a[1, 2] == 6
    assert a.T.row(2) == (3, 6)
    assert IntMatrix.from_columns([(1, 4), (2, 5), (3, 6)], 2) == a
    assert IntMatrix.diag([2, 3], rows=3).tolist() == [[2, 0], [0, 3], [0, 0]]
    with pytest.raises(ValueError):
        IntMatrix.from_rows([[1, 2], [3]])


def test_snf_small_example():
    res = snf(IntMatrix.diag([2, 3]))
    assert res.diagonal == (1, 6)
    assert res.invariant_factors == (1, 6)


def test_snf_zero_and_empty():
    assert snf(IntMatrix.zeros(2, 3)).invariant_factors == ()
    assert snf(IntMatrix.zeros(0, 2)).invariant_factors == ()


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_snf_transforms(rows):
    a = IntMatrix.from_rows(rows)
    res = snf(a)
    assert res.U @ a @ res.V == res.D
    assert abs(res.U.det()) == 1 and abs(res.V.det()) == 1
    diag = res.diagonal
    nz = [d for d in diag if d]
    assert all(d > 0 for d in nz)
    assert diag[: len(nz)] == tuple(nz)
    assert all(nz[i + 1] % nz[i] == 0 for i in range(len(nz) - 1))
    for i in range(a.rows):
        for j in range(a.cols):
            if i != j:
                assert res.D[i, j] == 0
    assert res.invariant_factors == invariant_factors_by_minors(rows)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 4).flatmap(lambda n: st.lists(st.lists(st.integers(-9, 9), min_size=n, max_size=n), min_size=n, max_size=n)))
def test_det_matches_rational_elimination(rows):
    assert IntMatrix.from_rows(rows).det() == det_fraction(rows)


def test_hnf_examples():
    h = hnf(IntMatrix.from_columns([(2, 0), (0, 3), (2, 3)], 2))
    assert h.columns() == [(2, 0), (0, 3)]
    assert hnf(IntMatrix.from_columns([(4, 6)], 2)).columns() == [(4, 6)]


@settings(max_examples=100, deadline=None)
@given(matrices(3, 5, 9), st.randoms(use_true_random=False))
def test_hnf_is_canonical(rows, r):
    a = IntMatrix.from_rows(rows)
    cols = a.columns()
    # combine columns unimodularly: the span is unchanged
    mixed = list(cols)
    for _ in range(6):
        if len(mixed) > 1:
            i, j = r.sample(range(len(mixed)), 2)
            q = r.randint(-3, 3)
            mixed[i] = tuple(x + q * y for x, y in zip(mixed[i], mixed[j]))
    r.shuffle(mixed)
    assert hnf(IntMatrix.from_columns(mixed, a.rows)) == hnf(a)
    assert Lattice.span(a.rows, a) == Lattice.span(a.rows, mixed)


@settings(max_examples=100, deadline=None)
@given(matrices(3, 4, 9))
def test_kernel_basis(rows):
    a = IntMatrix.from_rows(rows)
    k = kernel_basis(a)
    assert k.rows == a.cols
    assert all(x == 0 for x in (a @ k).entries)
    rank = len(snf(a).invariant_factors)
    assert k.cols == a.cols - rank
    # saturated: the kernel basis has trivial elementary divisors
    assert all(d == 1 for d in snf(k).invariant_factors)


def test_lattice_examples():
    two = Lattice.scalar(1, 2)
    assert lattice_preimage(IntMatrix.from_rows([[2]]), Lattice.scalar(1, 4)) == two
    assert divide_lattice(2, Lattice.span(2, [(2, 2)])) == Lattice.span(2, [(1, 1)])
    assert lattice_intersection(Lattice.scalar(2, 2), Lattice.scalar(2, 3)) == Lattice.scalar(2, 6)
    assert lattice_sum(Lattice.scalar(1, 4), Lattice.scalar(1, 6)) == two
    assert Lattice.scalar(2, 3).index() == 9
    assert (3, 6) in Lattice.scalar(2, 3)
    assert (3, 4) not in Lattice.scalar(2, 3)
    assert Lattice.scalar(2, 6) <= Lattice.scalar(2, 3)


def _small_lattice(r, g):
    return Lattice.span(g, [tuple(r.randint(-6, 6) for _ in range(g)) for _ in range(r.randint(0, 3))])


def test_lattice_operations_by_membership():
    r = random.Random(7)
    box = range(-6, 7)
    for _ in range(40):
        p, q = _small_lattice(r, 2), _small_lattice(r, 2)
        s, i = lattice_sum(p, q), lattice_intersection(p, q)
        assert p <= s and q <= s and i <= p and i <= q
        for v in ((x, y) for x in box for y in box):
            assert (v in i) == (v in p and v in q)
        m = IntMatrix.from_rows([[r.randint(-3, 3) for _ in range(2)] for _ in range(2)])
        pre = lattice_preimage(m, q)
        for v in ((x, y) for x in box for y in box):
            assert (v in pre) == (m.apply(v) in q)
        d = r.randint(1, 4)
        div = divide_lattice(d, q)
        for v in ((x, y) for x in box for y in box):
            assert (v in div) == (tuple(d * c for c in v) in q)


def test_rational_inverse():
    n, delta = rational_inverse(IntMatrix.from_rows([[2, 1], [0, 2]]))
    assert n.tolist() == [[2, -1], [0, 2]] and delta == 4
    with pytest.raises(ValueError):
        rational_inverse(IntMatrix.from_rows([[1, 2], [2, 4]]))


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 4).flatmap(lambda n: st.lists(st.lists(st.integers(-7, 7), min_size=n, max_size=n), min_size=n, max_size=n)))
def test_rational_inverse_property(rows):
    a = IntMatrix.from_rows(rows)
    if a.det() == 0:
        return
    n, delta = rational_inverse(a)
    assert n @ a == IntMatrix.identity(a.rows).scale(delta)
    assert delta == abs(a.det())
