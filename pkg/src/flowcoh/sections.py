"""Sections of torus-valued extensions with a finite covering kernel.

A covering endomorphism of ``T^g`` is an integer matrix ``A`` with nonzero
determinant; its kernel is ``K = A^{-1} Z^g / Z^g``. A map ``X -> T^g``
enters through ``M``, the induced map on fundamental groups ``Z^t -> Z^g``.
The section is computed twice:

* monodromy: lift the loops ``M Z^t + A Z^g`` and collect endpoints,
  ``F = A^{-1}(M Z^t + A Z^g) mod Z^g``;
* cohomotopy: with ``d`` the exponent of ``K``, the annihilator is
  ``F^perp = {v : d v in A^T (M^T)^{-1}(d Z^t)}`` and ``F`` is its dual.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .errors import CrossCheckError, NotApplicableError
from .exactla import (
    IntMatrix,
    Lattice,
    divide_lattice,
    lattice_preimage,
    lattice_sum,
    rational_inverse,
    snf,
)
from .fgab import FgAbGroup, PresentedGroup, group_disjoint, normalize

__all__ = [
    "CoveringEndo",
    "LoopMatrix",
    "TorusFinSubgroup",
    "kernel_of",
    "monodromy_e",
    "monodromy_q",
    "section_via_monodromy",
    "cohomotopy_annihilator",
    "section_via_cohomotopy",
    "cross_check",
    "checked_section",
    "section_additivity",
    "random_instance",
]

RationalVector = tuple[Fraction, ...]


@dataclass(frozen=True)
class TorusFinSubgroup:
    """Finite subgroup of ``T^g = Q^g/Z^g`` (rational points).

    Stored as ``L / exponent Z^g`` where ``exponent`` is the exponent of the
    subgroup and ``L`` is an HNF lattice containing ``exponent Z^g``; this
    form is canonical, so ``==`` is subgroup equality.
    """

    g: int
    exponent: int
    lattice: Lattice

    @classmethod
    def from_generators(cls, g: int, gens: Iterable[Sequence]) -> TorusFinSubgroup:
        gens = [tuple(Fraction(x) % 1 for x in v) for v in gens]
        for v in gens:
            if len(v) != g:
                raise ValueError("generator length differs from g")
        e = 1
        for v in gens:
            for x in v:
                e = math.lcm(e, x.denominator)
        cols = [tuple(int(x * e) for x in v) for v in gens]
        cols += [tuple(e * int(i == j) for j in range(g)) for i in range(g)]
        return cls(g, e, Lattice.span(g, cols))

    @classmethod
    def trivial(cls, g: int) -> TorusFinSubgroup:
        return cls.from_generators(g, [])

    def generators(self) -> list[RationalVector]:
        out = []
        for c in self.lattice.generators():
            v = tuple(Fraction(x, self.exponent) % 1 for x in c)
            if any(v):
                out.append(v)
        return out

    def order(self) -> int:
        return self.exponent ** self.g // self.lattice.index()

    def structure(self) -> FgAbGroup:
        p = self.lattice.basis
        if self.g == 0:
            return FgAbGroup()
        n, delta = rational_inverse(p)
        rel = n.scale(self.exponent)
        assert all(x % delta == 0 for x in rel.entries)
        rel = IntMatrix(rel.rows, rel.cols, tuple(x // delta for x in rel.entries))
        return normalize(PresentedGroup(self.g, rel))

    def __contains__(self, v: Sequence) -> bool:
        v = [Fraction(x) % 1 for x in v]
        if len(v) != self.g:
            raise ValueError("dimension mismatch")
        w = [x * self.exponent for x in v]
        if any(x.denominator != 1 for x in w):
            return False
        return tuple(int(x) for x in w) in self.lattice

    def issubset(self, other: TorusFinSubgroup) -> bool:
        return all(v in other for v in self.generators())

    def __add__(self, other: TorusFinSubgroup) -> TorusFinSubgroup:
        if self.g != other.g:
            raise ValueError("different ambient tori")
        return TorusFinSubgroup.from_generators(self.g, self.generators() + other.generators())

    def elements(self) -> Iterator[RationalVector]:
        """All elements; only sensible for small subgroups."""
        seen = {tuple(Fraction(0) for _ in range(self.g))}
        frontier = list(seen)
        gens = self.generators()
        while frontier:
            nxt = []
            for x in frontier:
                for s in gens:
                    y = tuple((a + b) % 1 for a, b in zip(x, s))
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return iter(sorted(seen))

    def __str__(self) -> str:
        return str(self.structure())


@dataclass(frozen=True)
class CoveringEndo:
    """Surjective endomorphism of ``T^g`` given by a nonsingular integer matrix."""

    A: IntMatrix

    def __post_init__(self):
        if not self.A.is_square():
            raise ValueError("covering matrix must be square")
        if self.A.rows and self.A.det() == 0:
            raise ValueError("singular covering matrix")

    @property
    def g(self) -> int:
        return self.A.rows

    def inverse(self) -> tuple[IntMatrix, int]:
        """``(N, delta)`` with ``A^{-1} = N / delta``."""
        if self.g == 0:
            return IntMatrix.zeros(0, 0), 1
        return rational_inverse(self.A)

    def kernel_exponent(self) -> int:
        """Largest invariant factor of ``coker A``."""
        return max(snf(self.A).invariant_factors, default=1)

    def covered_lattice(self) -> Lattice:
        return Lattice.span(self.g, self.A)


@dataclass(frozen=True)
class LoopMatrix:
    """Induced map ``pi_1(X) = Z^t -> pi_1(T^g) = Z^g``."""

    M: IntMatrix

    @property
    def g(self) -> int:
        return self.M.rows

    @property
    def t(self) -> int:
        return self.M.cols


def _lift(c: CoveringEndo, vectors: Iterable[Sequence[int]]) -> list[RationalVector]:
    n, delta = c.inverse()
    return [tuple(Fraction(x, delta) for x in n.apply(v)) for v in vectors]


def kernel_of(c: CoveringEndo) -> TorusFinSubgroup:
    return TorusFinSubgroup.from_generators(c.g, _lift(c, IntMatrix.identity(c.g).columns()))


def monodromy_e(c: CoveringEndo, q: Lattice) -> TorusFinSubgroup:
    """Endpoints of lifts of the loops in ``q + A Z^g``."""
    if q.ambient_rank != c.g:
        raise ValueError("loop lattice lives in the wrong dimension")
    q = lattice_sum(q, c.covered_lattice())
    return TorusFinSubgroup.from_generators(c.g, _lift(c, q.generators()))


def monodromy_q(c: CoveringEndo, e: TorusFinSubgroup) -> Lattice:
    """Loops whose lift ends in ``e``: ``{v : A^{-1} v mod 1 in e}``."""
    if e.g != c.g:
        raise ValueError("subgroup lives in the wrong torus")
    if not e.issubset(kernel_of(c)):
        raise ValueError("subgroup is not inside the covering kernel")
    n, delta = c.inverse()
    return lattice_preimage(n.scale(e.exponent), e.lattice.scale(delta))


def _check_dims(c: CoveringEndo, xi: LoopMatrix) -> None:
    if xi.g != c.g:
        raise ValueError(f"loop matrix has {xi.g} rows, covering acts on T^{c.g}")


def section_via_monodromy(c: CoveringEndo, xi: LoopMatrix) -> TorusFinSubgroup:
    _check_dims(c, xi)
    return monodromy_e(c, Lattice.span(c.g, xi.M))


def cohomotopy_annihilator(c: CoveringEndo, xi: LoopMatrix) -> Lattice:
    """``F^perp = (1/d) A^T (M^T)^{-1}(d Z^t)`` inside ``Z^g``, the character group of ``T^g``."""
    _check_dims(c, xi)
    d = c.kernel_exponent()
    pulled = lattice_preimage(xi.M.T, Lattice.scalar(xi.t, d))
    return divide_lattice(d, pulled.image(c.A.T))


def section_via_cohomotopy(c: CoveringEndo, xi: LoopMatrix) -> TorusFinSubgroup:
    perp = cohomotopy_annihilator(c, xi)
    if c.g == 0:
        return TorusFinSubgroup.trivial(0)
    # F = {x in T^g : v.x in Z for all v in F^perp}, the dual lattice mod Z^g
    n, delta = rational_inverse(perp.basis.T)
    return TorusFinSubgroup.from_generators(
        c.g, [tuple(Fraction(x, delta) for x in col) for col in n.columns()]
    )


def cross_check(c: CoveringEndo, xi: LoopMatrix) -> bool:
    return section_via_monodromy(c, xi) == section_via_cohomotopy(c, xi)


def checked_section(c: CoveringEndo, xi: LoopMatrix) -> TorusFinSubgroup:
    """The section, raising :class:`CrossCheckError` if the two routes differ."""
    a = section_via_monodromy(c, xi)
    b = section_via_cohomotopy(c, xi)
    if a != b:
        raise CrossCheckError(f"monodromy gives {a.generators()}, cohomotopy gives {b.generators()}")
    return a


def section_additivity(c: CoveringEndo, xi1: LoopMatrix, xi2: LoopMatrix) -> bool:
    """Whether the section of the product extension is the sum of the two sections.

    Raises :class:`NotApplicableError` unless the two sections are group-disjoint.
    """
    f1 = section_via_monodromy(c, xi1)
    f2 = section_via_monodromy(c, xi2)
    if not group_disjoint(f1.structure(), f2.structure()):
        raise NotApplicableError("sections are not group-disjoint")
    both = section_via_monodromy(c, LoopMatrix(xi1.M + xi2.M))
    return both == f1 + f2


def random_instance(
    rng: random.Random,
    max_g: int = 3,
    max_t: int = 3,
    bound: int = 5,
    max_det: int = 12,
) -> tuple[CoveringEndo, LoopMatrix]:
    """Random ``(A, M)`` with ``0 < |det A| <= max_det`` and entries in ``[-bound, bound]``."""
    g = rng.randint(1, max_g)
    t = rng.randint(1, max_t)
    entry = lambda: rng.randint(-bound, bound)
    while True:
        a = IntMatrix.from_rows([[entry() for _ in range(g)] for _ in range(g)])
        if 0 < abs(a.det()) <= max_det:
            break
    m = IntMatrix.from_rows([[entry() for _ in range(t)] for _ in range(g)])
    return CoveringEndo(a), LoopMatrix(m)
