"""Finitely generated abelian groups in invariant-factor form.

A group ``Z^r + Z_{d_1} + ... + Z_{d_s}`` with ``d_i | d_{i+1}`` is an
:class:`FgAbGroup`. Elements are tuples of ``r`` integers followed by one
residue per torsion factor.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

from .exactla import IntMatrix, Lattice, lattice_preimage, rational_inverse, snf

__all__ = [
    "FgAbGroup",
    "FgMorphism",
    "PresentedGroup",
    "Subgroup",
    "normalize",
    "elementary_divisors_of_subgroup",
    "is_quotient_of",
    "dual_finite",
    "pairing",
    "annihilator",
    "subgroup_generated",
    "group_disjoint",
    "prime_factors",
]

Element = tuple[int, ...]


@dataclass(frozen=True)
class FgAbGroup:
    free_rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(self.torsion))
        if self.free_rank < 0:
            raise ValueError("free rank must be nonnegative")
        for i, d in enumerate(self.torsion):
            if d < 2:
                raise ValueError(f"invariant factor {d} < 2; use FgAbGroup.from_cyclic")
            if i and d % self.torsion[i - 1]:
                raise ValueError(f"invariant factors {self.torsion} do not form a divisibility chain")

    @classmethod
    def from_cyclic(cls, orders: Sequence[int], free_rank: int = 0) -> FgAbGroup:
        """Canonical form of ``Z^free_rank + (+) Z_{orders}``; an order 0 means Z."""
        orders = list(orders)
        if any(o < 0 for o in orders):
            raise ValueError("cyclic orders must be nonnegative")
        return normalize(PresentedGroup(len(orders), IntMatrix.diag(orders))).with_free(free_rank)

    @classmethod
    def cyclic(cls, d: int) -> FgAbGroup:
        return cls.from_cyclic([d])

    @classmethod
    def trivial(cls) -> FgAbGroup:
        return cls()

    @classmethod
    def parse(cls, text: str) -> FgAbGroup:
        """Parse ``"Z_2+Z_4+Z^1"``-style specs. ``0``, ``1`` or ``""`` is trivial."""
        s = text.replace("⊕", "+").replace(" ", "")
        if s in ("", "0", "1"):
            return cls()
        free, orders = 0, []
        for tok in s.split("+"):
            m = re.fullmatch(r"Z(?:_(\d+))?(?:\^(\d+))?", tok)
            if not m:
                raise ValueError(f"bad group atom {tok!r} in {text!r}")
            exp = int(m.group(2)) if m.group(2) else 1
            if m.group(1) is None:
                free += exp
            else:
                d = int(m.group(1))
                if d < 1:
                    raise ValueError(f"bad cyclic order in {tok!r}")
                orders += [d] * exp
        return cls.from_cyclic(orders, free)

    def with_free(self, extra: int) -> FgAbGroup:
        return FgAbGroup(self.free_rank + extra, self.torsion)

    # -- invariants ---------------------------------------------------

    @property
    def ngens(self) -> int:
        return self.free_rank + len(self.torsion)

    @property
    def moduli(self) -> tuple[int, ...]:
        """Order of each generator, 0 for the free ones."""
        return (0,) * self.free_rank + self.torsion

    def is_finite(self) -> bool:
        return self.free_rank == 0

    def is_trivial(self) -> bool:
        return self.ngens == 0

    def order(self) -> int | float:
        return math.prod(self.torsion) if self.is_finite() else math.inf

    def exponent(self) -> int:
        if not self.is_finite():
            raise ValueError("infinite group has no finite exponent")
        return self.torsion[-1] if self.torsion else 1

    def torsion_subgroup(self) -> FgAbGroup:
        return FgAbGroup(0, self.torsion)

    def __add__(self, other: FgAbGroup) -> FgAbGroup:
        """Direct sum."""
        return FgAbGroup.from_cyclic(self.torsion + other.torsion, self.free_rank + other.free_rank)

    def __mul__(self, k: int) -> FgAbGroup:
        """``k``-fold direct sum."""
        return FgAbGroup.from_cyclic(self.torsion * k, self.free_rank * k)

    __rmul__ = __mul__

    # -- elements -----------------------------------------------------

    def reduce(self, x: Sequence[int]) -> Element:
        if len(x) != self.ngens:
            raise ValueError(f"element {tuple(x)} has wrong length for {self}")
        return tuple(v % m if m else v for v, m in zip(x, self.moduli))

    def zero(self) -> Element:
        return (0,) * self.ngens

    def add(self, x: Sequence[int], y: Sequence[int]) -> Element:
        return self.reduce([a + b for a, b in zip(x, y)])

    def neg(self, x: Sequence[int]) -> Element:
        return self.reduce([-a for a in x])

    def mul(self, k: int, x: Sequence[int]) -> Element:
        return self.reduce([k * a for a in x])

    def element_order(self, x: Sequence[int]) -> int | float:
        x = self.reduce(x)
        if any(x[: self.free_rank]):
            return math.inf
        o = 1
        for v, d in zip(x[self.free_rank:], self.torsion):
            o = math.lcm(o, d // math.gcd(v, d))
        return o

    def elements(self) -> Iterator[Element]:
        if not self.is_finite():
            raise ValueError("cannot enumerate an infinite group")
        return itertools.product(*(range(d) for d in self.torsion))

    def __str__(self) -> str:
        from .structexpr import from_fg_ab_group

        return from_fg_ab_group(self).render()


@dataclass(frozen=True)
class PresentedGroup:
    """``Z^generators`` modulo the column span of ``relations``."""

    generators: int
    relations: IntMatrix

    def __post_init__(self):
        if self.relations.rows != self.generators:
            raise ValueError("relations need one row per generator")


def normalize(p: PresentedGroup) -> FgAbGroup:
    if p.relations.cols == 0:
        return FgAbGroup(p.generators)
    diag = snf(p.relations).invariant_factors
    return FgAbGroup(p.generators - len(diag), tuple(d for d in diag if d > 1))


@dataclass(frozen=True)
class FgMorphism:
    """Homomorphism given by its action on generators (matrix columns)."""

    domain: FgAbGroup
    codomain: FgAbGroup
    matrix: IntMatrix

    def __post_init__(self):
        if self.matrix.shape != (self.codomain.ngens, self.domain.ngens):
            raise ValueError("matrix shape does not match domain/codomain generators")
        cols = [self.codomain.reduce(c) for c in self.matrix.columns()]
        object.__setattr__(self, "matrix", IntMatrix.from_columns(cols, self.codomain.ngens))
        for j, d in enumerate(self.domain.moduli):
            if d and any(self.codomain.mul(d, cols[j])):
                raise ValueError(
                    f"not well defined: generator {j} has order {d} but its image does not"
                )

    def __call__(self, x: Sequence[int]) -> Element:
        return self.codomain.reduce(self.matrix.apply(self.domain.reduce(x)))

    def image(self) -> Subgroup:
        return subgroup_generated(self.codomain, self.matrix.columns())

    def is_surjective(self) -> bool:
        rel = IntMatrix.diag(self.codomain.moduli)
        return normalize(PresentedGroup(self.codomain.ngens, self.matrix.hstack(rel))).is_trivial()


def elementary_divisors_of_subgroup(ambient_rank: int, gens: IntMatrix) -> tuple[int, tuple[int, ...]]:
    """Rank and elementary divisors (units kept) of the subgroup of Z^ambient_rank
    spanned by the columns of ``gens``."""
    if gens.rows != ambient_rank:
        raise ValueError("generators must have ambient_rank rows")
    if gens.cols == 0:
        return 0, ()
    divs = snf(gens).invariant_factors
    return len(divs), divs


# ---------------------------------------------------------------------------
# Quotients


def prime_factors(n: int) -> dict[int, int]:
    n = abs(n)
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _valuation(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def is_quotient_of(target: FgAbGroup, source: FgAbGroup) -> bool:
    """Whether some homomorphism ``source -> target`` is onto.

    Splitting off the free part of the target reduces to a finite target,
    which is a quotient iff for every prime ``p`` and ``j >= 1`` it has no more
    cyclic ``p``-factors of order ``>= p^j`` than the source, each free
    generator of the source counting as a factor of unbounded order.
    """
    if target.free_rank > source.free_rank:
        return False
    spare = source.free_rank - target.free_rank
    primes = set()
    for d in target.torsion:
        primes |= prime_factors(d).keys()
    for p in primes:
        tv = [_valuation(d, p) for d in target.torsion]
        sv = [_valuation(d, p) for d in source.torsion]
        for j in range(1, max(tv) + 1):
            if sum(v >= j for v in tv) > sum(v >= j for v in sv) + spare:
                return False
    return True


# ---------------------------------------------------------------------------
# Duality for finite groups


def _require_finite(g: FgAbGroup, what: str) -> None:
    if not g.is_finite():
        raise ValueError(f"{what} is only defined for finite groups, got {g}")


def dual_finite(g: FgAbGroup) -> FgAbGroup:
    """Finite groups are self-dual; characters of ``g`` are identified with
    elements of ``g`` through :func:`pairing`."""
    _require_finite(g, "dual_finite")
    return g


def pairing(g: FgAbGroup, x: Sequence[int], y: Sequence[int]) -> Fraction:
    """``<x, y> = sum x_i y_i / d_i`` mod 1, a value in ``[0, 1)``."""
    _require_finite(g, "pairing")
    x, y = g.reduce(x), g.reduce(y)
    s = sum(Fraction(a * b, d) for a, b, d in zip(x, y, g.torsion))
    return s - math.floor(s)


@dataclass(frozen=True)
class Subgroup:
    """A subgroup of ``ambient`` with generators in ambient coordinates."""

    ambient: FgAbGroup
    generators: tuple[Element, ...]
    structure: FgAbGroup = field(compare=False)

    def order(self) -> int | float:
        return self.structure.order()

    def elements(self) -> frozenset[Element]:
        g = self.ambient
        out = {g.zero()}
        frontier = list(out)
        while frontier:
            nxt = []
            for x in frontier:
                for s in self.generators:
                    y = g.add(x, s)
                    if y not in out:
                        out.add(y)
                        nxt.append(y)
            frontier = nxt
        return frozenset(out)


def _quotient_by_relations(g: FgAbGroup, lat: Lattice) -> FgAbGroup:
    """Structure of ``lat / rel`` where ``rel = (+) d_i Z`` lies inside the
    full-rank lattice ``lat`` in Z^s."""
    p = lat.basis
    n, delta = rational_inverse(p)
    rel = IntMatrix.diag(g.torsion)
    coords = n @ rel
    assert all(x % delta == 0 for x in coords.entries)
    coords = IntMatrix(coords.rows, coords.cols, tuple(x // delta for x in coords.entries))
    return normalize(PresentedGroup(p.cols, coords))


def subgroup_generated(g: FgAbGroup, gens: Sequence[Sequence[int]]) -> Subgroup:
    gens = tuple(g.reduce(x) for x in gens)
    if g.is_finite():
        s = len(g.torsion)
        lat = Lattice.span(s, list(gens) + [tuple(d * int(i == j) for j in range(s)) for i, d in enumerate(g.torsion)])
        structure = _quotient_by_relations(g, lat)
    else:
        rel = IntMatrix.diag(g.moduli)
        allg = IntMatrix.from_columns(list(gens), g.ngens).hstack(rel) if gens else rel
        lat = Lattice.span(g.ngens, allg)
        relat = Lattice.span(g.ngens, rel)
        structure = _lattice_quotient(lat, relat)
    return Subgroup(g, gens, structure)


def _lattice_quotient(big: Lattice, small: Lattice) -> FgAbGroup:
    """``big / small`` for lattices ``small <= big`` of any rank."""
    b = big.basis
    cols = [_solve_integral(b, v) for v in small.generators()]
    rel = IntMatrix.from_columns(cols, b.cols) if cols else IntMatrix.zeros(b.cols, 0)
    return normalize(PresentedGroup(b.cols, rel))


def _solve_integral(b: IntMatrix, v: Sequence[int]) -> tuple[int, ...]:
    """Unique integer ``x`` with ``b x = v`` for ``b`` of full column rank."""
    # the columns of b are independent; use the normal equations over Q
    bt = b.T
    gram = bt @ b
    n, delta = rational_inverse(gram)
    rhs = bt.apply(v)
    x = n.apply(rhs)
    if any(c % delta for c in x):
        raise ValueError("vector not in lattice")
    x = tuple(c // delta for c in x)
    if b.apply(x) != tuple(v):
        raise ValueError("vector not in lattice")
    return x


def annihilator(g: FgAbGroup, sub_gens: Sequence[Sequence[int]]) -> Subgroup:
    """``{y : <x, y> = 0 for every generator x}`` inside ``dual_finite(g)``."""
    _require_finite(g, "annihilator")
    for x in sub_gens:
        if len(x) != g.ngens:
            raise ValueError(f"element {tuple(x)} has wrong length for {g}")
    s = len(g.torsion)
    if s == 0:
        return Subgroup(g, (), FgAbGroup())
    e = g.exponent()
    rows = [[x[i] * (e // d) for i, d in enumerate(g.torsion)] for x in sub_gens]
    if rows:
        lat = lattice_preimage(IntMatrix.from_rows(rows, s), Lattice.scalar(len(rows), e))
    else:
        lat = Lattice.full(s)
    structure = _quotient_by_relations(g, lat)
    gens = tuple(g.reduce(c) for c in lat.generators())
    return Subgroup(g, tuple(x for x in gens if any(x)), structure)


def group_disjoint(h1: FgAbGroup, h2: FgAbGroup) -> bool:
    """Finite groups are group-disjoint iff their exponents are coprime."""
    _require_finite(h1, "group_disjoint")
    _require_finite(h2, "group_disjoint")
    return math.gcd(h1.exponent(), h2.exponent()) == 1
