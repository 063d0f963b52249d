"""Formal direct sums of symbolic group atoms.

Atoms are the strings ``R, bR, Q, Q/Z, Q*, Zperp(Q*), T1, Z`` and ``Z_d``
(``d >= 2``). An expression is a multiset of atoms with exponents, kept
normalized so that equal multisets compare equal.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Iterable, Mapping

from .fgab import FgAbGroup

__all__ = [
    "ATOMS",
    "StructureExpr",
    "expr_sum",
    "torsion_of",
    "from_fg_ab_group",
]

ATOMS = ("R", "bR", "Q", "Q/Z", "Q*", "Zperp(Q*)", "T1", "Z")
_CYCLIC = re.compile(r"Z_(\d+)")
_NO_TORSION = {"Z", "Q", "R", "bR", "Q*"}


def _check_atom(atom: str) -> str | None:
    """Validated atom, or None for the trivial ``Z_1``."""
    if atom in ATOMS:
        return atom
    m = _CYCLIC.fullmatch(atom)
    if not m:
        raise ValueError(f"unknown atom {atom!r}")
    d = int(m.group(1))
    if d < 1:
        raise ValueError(f"bad cyclic atom {atom!r}")
    return None if d == 1 else f"Z_{d}"


def _sort_key(atom: str):
    if atom in ATOMS:
        return (ATOMS.index(atom), 0)
    return (len(ATOMS), int(atom[2:]))


@dataclass(frozen=True)
class StructureExpr:
    terms: tuple[tuple[str, int], ...] = ()

    def __post_init__(self):
        merged: dict[str, int] = {}
        for atom, exp in self.terms:
            if not isinstance(exp, int) or exp < 0:
                raise ValueError(f"exponent of {atom} must be a nonnegative int")
            a = _check_atom(atom)
            if a is not None and exp:
                merged[a] = merged.get(a, 0) + exp
        object.__setattr__(self, "terms", tuple(sorted(merged.items(), key=lambda t: _sort_key(t[0]))))

    @classmethod
    def of(cls, *atoms: str | tuple[str, int]) -> StructureExpr:
        """``StructureExpr.of("R", ("Q/Z", 2), "Z_6")``."""
        return cls(tuple((a, 1) if isinstance(a, str) else a for a in atoms))

    @classmethod
    def from_mapping(cls, m: Mapping[str, int]) -> StructureExpr:
        return cls(tuple(m.items()))

    @classmethod
    def trivial(cls) -> StructureExpr:
        return cls()

    def is_trivial(self) -> bool:
        return not self.terms

    def exponent_of(self, atom: str) -> int:
        return dict(self.terms).get(atom, 0)

    def __add__(self, other: StructureExpr) -> StructureExpr:
        return StructureExpr(self.terms + other.terms)

    def __mul__(self, k: int) -> StructureExpr:
        return StructureExpr(tuple((a, e * k) for a, e in self.terms))

    __rmul__ = __mul__

    def simplify(self, collapse_reals: bool = False) -> StructureExpr:
        """Optional cardinal collapses; ``R^r`` becomes ``R`` when asked."""
        if not collapse_reals:
            return self
        return StructureExpr(tuple((a, 1 if a == "R" else e) for a, e in self.terms))

    def render(self, sep: str = " ⊕ ", empty: str = "0") -> str:
        if not self.terms:
            return empty
        parts = []
        for atom, exp in self.terms:
            if exp == 1:
                parts.append(atom)
            else:
                base = f"({atom})" if ("/" in atom or "*" in atom) else atom
                parts.append(f"{base}^{exp}")
        return sep.join(parts)

    def __str__(self) -> str:
        return self.render()

    def to_json(self) -> list[list]:
        return [[a, e] for a, e in self.terms]

    @classmethod
    def from_json(cls, data: Iterable) -> StructureExpr:
        return cls(tuple((str(a), int(e)) for a, e in data))


def expr_sum(e1: StructureExpr, e2: StructureExpr) -> StructureExpr:
    return e1 + e2


def torsion_of(e: StructureExpr, k: int) -> FgAbGroup:
    """``tor_k`` of the group an expression denotes."""
    if k < 1:
        raise ValueError("k must be positive")
    orders: list[int] = []
    for atom, exp in e.terms:
        if atom == "Q/Z":
            orders += [k] * exp
        elif atom.startswith("Z_"):
            orders += [math.gcd(int(atom[2:]), k)] * exp
        elif atom not in _NO_TORSION:
            raise ValueError(f"no torsion rule for atom {atom}")
    return FgAbGroup.from_cyclic(orders)


def from_fg_ab_group(g: FgAbGroup) -> StructureExpr:
    return StructureExpr((("Z", g.free_rank),) + tuple((f"Z_{d}", 1) for d in g.torsion))
