"""Hom, Ext, Tor and tensor products of finitely generated abelian groups,
plus 2-cocycles and the twisted products they define.

The functors are expanded additively over cyclic summands using
``Hom(Z_j, Z_k) = Tor(Z_j, Z_k) = Ext(Z_j, Z_k) = Z_j (x) Z_k = Z_gcd(j,k)``,
``Ext(Z_k, Z) = Z_k``, ``Hom(Z_k, Z) = 0`` and the free-source identities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Mapping

from .exactla import IntMatrix
from .fgab import Element, FgAbGroup, PresentedGroup, normalize
from .structexpr import StructureExpr

__all__ = [
    "hom",
    "ext",
    "tor",
    "tensor",
    "tensor_q_mod_z",
    "Cocycle2",
    "CocycleError",
    "cocycle_zk",
    "twisted_product",
]


def _pairs(a: FgAbGroup, b: FgAbGroup, rule: Callable[[int, int], int | None]) -> FgAbGroup:
    """Sum of ``rule(x, y)`` over cyclic summands; 0 encodes Z, None is trivial."""
    orders = []
    for x in a.moduli:
        for y in b.moduli:
            o = rule(x, y)
            if o is not None:
                orders.append(o)
    return FgAbGroup.from_cyclic(orders)


def hom(a: FgAbGroup, b: FgAbGroup) -> FgAbGroup:
    def rule(x, y):
        if x == 0:
            return y
        return None if y == 0 else math.gcd(x, y)

    return _pairs(a, b, rule)


def ext(a: FgAbGroup, b: FgAbGroup) -> FgAbGroup:
    def rule(x, y):
        if x == 0:
            return None
        return x if y == 0 else math.gcd(x, y)

    return _pairs(a, b, rule)


def tor(a: FgAbGroup, b: FgAbGroup) -> FgAbGroup:
    return _pairs(a, b, lambda x, y: None if 0 in (x, y) else math.gcd(x, y))


def tensor(a: FgAbGroup, b: FgAbGroup) -> FgAbGroup:
    # gcd(0, y) = y covers Z (x) Z_y and Z (x) Z = Z
    return _pairs(a, b, math.gcd)


def tensor_q_mod_z(a: FgAbGroup) -> StructureExpr:
    """``(Q/Z) (x) a``: the torsion is killed, each Z contributes Q/Z."""
    return StructureExpr((("Q/Z", a.free_rank),))


# ---------------------------------------------------------------------------
# 2-cocycles


class CocycleError(ValueError):
    pass


@dataclass(frozen=True)
class Cocycle2:
    """A function ``base x base -> fibre`` on finite groups, stored as a table."""

    base: FgAbGroup
    fibre: FgAbGroup
    table: Mapping[tuple[Element, Element], Element]

    def __post_init__(self):
        if not (self.base.is_finite() and self.fibre.is_finite()):
            raise ValueError("cocycle tables need finite groups")

    def __call__(self, c1, c2) -> Element:
        return self.table[(self.base.reduce(c1), self.base.reduce(c2))]

    def violations(self) -> list[str]:
        """Failed axioms: the cocycle identity, normalization, symmetry."""
        c, a, phi = self.base, self.fibre, self
        els = list(c.elements())
        bad = []
        if any(phi(c.zero(), x) != a.zero() or phi(x, c.zero()) != a.zero() for x in els):
            bad.append("normalization")
        if any(phi(x, y) != phi(y, x) for x in els for y in els):
            bad.append("symmetry")
        for x in els:
            for y in els:
                xy = c.add(x, y)
                for z in els:
                    lhs = a.add(phi(x, y), phi(xy, z))
                    rhs = a.add(phi(x, c.add(y, z)), phi(y, z))
                    if lhs != rhs:
                        bad.append("cocycle identity")
                        return bad
        return bad

    def is_cocycle(self) -> bool:
        return not self.violations()


def cocycle_zk(k: int, target_modulus: int) -> Cocycle2:
    """Carry cocycle on ``Z_k``: 1 when ``r + s >= k``, else 0, read in
    ``Z_target_modulus``."""
    if k < 2:
        raise ValueError("k must be at least 2")
    if target_modulus < 1:
        raise ValueError("target modulus must be positive")
    base = FgAbGroup.cyclic(k)
    fibre = FgAbGroup.cyclic(target_modulus)
    one = fibre.reduce((1,)) if fibre.ngens else ()
    zero = fibre.zero()
    table = {((r,), (s,)): (one if r + s >= k else zero) for r in range(k) for s in range(k)}
    return Cocycle2(base, fibre, table)


def twisted_product(c: FgAbGroup, a: FgAbGroup, phi: Cocycle2) -> FgAbGroup:
    """Isomorphism type of ``c x a`` with ``(c1,a1)+(c2,a2) = (c1+c2, a1+a2+phi(c1,c2))``.

    The elements ``(e_i, 0)`` and ``(0, f_j)`` generate; their relations are
    ``ord(e_i) * (e_i, 0) = (0, s_i)`` (found by repeated addition) and
    ``ord(f_j) * (0, f_j) = 0``. This presentation already has the right order,
    so it is complete.
    """
    if phi.base != c or phi.fibre != a:
        raise CocycleError("cocycle is defined on different groups")
    bad = phi.violations()
    if bad:
        raise CocycleError(f"cocycle axioms fail: {', '.join(bad)}")
    nc, na = c.ngens, a.ngens
    cols = []
    for i, d in enumerate(c.torsion):
        e = tuple(int(j == i) for j in range(nc))
        x, s = c.zero(), a.zero()
        for _ in range(d):
            s = a.add(s, phi(x, e))
            x = c.add(x, e)
        assert x == c.zero()
        cols.append([d * int(j == i) for j in range(nc)] + [-v for v in s])
    for j, d in enumerate(a.torsion):
        cols.append([0] * nc + [d * int(l == j) for l in range(na)])
    return normalize(PresentedGroup(nc + na, IntMatrix.from_columns(cols, nc + na)))
