"""Structure of the cohomology of a minimal flow and section realizability.

A flow enters only through the inclusion ``H_1^w(F) <= H_1^w(X) = Z^x_rank``
and a few asserted hypotheses. From it we read ``n`` (rank of the image),
``m = x_rank - n`` and the elementary divisors ``d_1 | ... | d_n``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .errors import InconsistentFlagsError, NotApplicableError
from .exactla import IntMatrix
from .fgab import FgAbGroup, elementary_divisors_of_subgroup, is_quotient_of, prime_factors
from .structexpr import StructureExpr

__all__ = [
    "FlowDescriptor",
    "FlowReport",
    "CoefficientGroup",
    "Solenoid",
    "SolenoidSubgroupKm",
    "Inclusion",
    "analyze",
    "cohomology_circle",
    "torsion_subgroup",
    "full_torsion",
    "cohomology_coefficients",
    "realizable_finite_section_torus",
    "all_sections_realizable_torus",
    "solenoid_section_catalog",
    "zd_in_solenoid",
    "realizable_zd_simply_connected",
    "torus_modular_rank",
    "d_pure_rank_one",
    "free_cycle_from_tori",
    "free_extension_shapes",
]


@dataclass(frozen=True)
class FlowDescriptor:
    x_rank: int
    image_gens: IntMatrix
    simply_connected: bool = False
    topologically_free: bool = False
    no_finite_abelian_quotients: bool = False
    n: int = field(init=False)
    divisors: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        if self.x_rank < 0:
            raise ValueError("x_rank must be nonnegative")
        if self.image_gens.rows != self.x_rank:
            raise ValueError(f"image_gens has {self.image_gens.rows} rows, expected x_rank={self.x_rank}")
        n, divs = elementary_divisors_of_subgroup(self.x_rank, self.image_gens)
        if self.simply_connected and n:
            raise InconsistentFlagsError("a simply connected acting group has trivial H_1^w, but n > 0")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "divisors", divs)

    @classmethod
    def from_divisors(cls, divisors: Sequence[int], m: int, **flags) -> FlowDescriptor:
        """Descriptor whose image is ``d_1 Z + ... + d_n Z + 0^m``."""
        divisors = list(divisors)
        n = len(divisors)
        gens = IntMatrix.diag(divisors, rows=n + m, cols=n)
        return cls(n + m, gens, **flags)

    @property
    def m(self) -> int:
        return self.x_rank - self.n

    def has_free_cycle(self) -> bool:
        return self.m >= 1


@dataclass(frozen=True)
class FlowReport:
    n: int
    m: int
    divisors: tuple[int, ...]
    has_free_cycle: bool
    topologically_free: bool


def analyze(fd: FlowDescriptor) -> FlowReport:
    return FlowReport(fd.n, fd.m, fd.divisors, fd.has_free_cycle(), fd.topologically_free)


def _branch(fd: FlowDescriptor, need_nonzero_pi1: bool = True) -> str:
    if fd.topologically_free and fd.m >= 1:
        return "free"
    if fd.simply_connected:
        if need_nonzero_pi1 and fd.x_rank == 0:
            raise NotApplicableError("simply connected case needs a nonzero first cohomotopy group")
        return "simply_connected"
    raise NotApplicableError(
        "needs a topologically free flow with a free cycle, or a simply connected acting group"
    )


def _cyclics(orders: Sequence[int]) -> StructureExpr:
    return StructureExpr(tuple((f"Z_{d}", 1) for d in orders))


def cohomology_circle(fd: FlowDescriptor) -> StructureExpr:
    """``H_F`` for circle-valued extensions."""
    if _branch(fd) == "free":
        return StructureExpr((("R", 1), ("Q/Z", fd.m))) + _cyclics(fd.divisors)
    return StructureExpr((("R", 1), ("Q/Z", fd.x_rank)))


def torsion_subgroup(fd: FlowDescriptor, k: int) -> FgAbGroup:
    """``tor_k(H_F) = Z_gcd(d_1,k) + ... + Z_gcd(d_n,k) + (Z_k)^m``."""
    if k < 1:
        raise ValueError("k must be positive")
    _branch(fd, need_nonzero_pi1=False)
    # in the simply connected branch n = 0 and m = x_rank
    return FgAbGroup.from_cyclic([math.gcd(d, k) for d in fd.divisors] + [k] * fd.m)


def full_torsion(fd: FlowDescriptor) -> StructureExpr:
    _branch(fd, need_nonzero_pi1=False)
    return _cyclics(fd.divisors) + StructureExpr((("Q/Z", fd.m),))


# ---------------------------------------------------------------------------
# Coefficient groups


@dataclass(frozen=True)
class Solenoid:
    """Solenoid for the eventually periodic sequence ``prefix, cycle, cycle, ...``."""

    prefix: tuple[int, ...]
    cycle: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(self.prefix))
        object.__setattr__(self, "cycle", tuple(self.cycle))
        if not self.cycle:
            raise ValueError("solenoid cycle must be nonempty")
        if any(p < 2 for p in self.prefix + self.cycle):
            raise ValueError("solenoid sequence entries must be >= 2")

    @classmethod
    def parse(cls, text: str) -> Solenoid:
        """``"prefix;cycle"`` with comma separated entries, e.g. ``";2"``."""
        if ";" not in text:
            raise ValueError(f"solenoid spec {text!r} needs 'prefix;cycle'")
        pre, cyc = text.split(";", 1)
        as_ints = lambda s: tuple(int(x) for x in s.split(",") if x.strip())
        return cls(as_ints(pre), as_ints(cyc))

    def __str__(self) -> str:
        return f"{','.join(map(str, self.prefix))};{','.join(map(str, self.cycle))}"


@dataclass(frozen=True)
class CoefficientGroup:
    """Connected coefficient group described by the ranks ``(r, f, t)`` of its dual:
    total rank, rank of the free summand, rank of the torsion-free rest."""

    kind: str
    r: int
    f: int
    t: int
    k: int | None = None
    solenoid: Solenoid | None = None

    def __post_init__(self):
        if min(self.r, self.f, self.t) < 0 or self.r != self.f + self.t:
            raise ValueError("need r = f + t with nonnegative ranks")

    @classmethod
    def torus(cls, k: int) -> CoefficientGroup:
        return cls("torus", k, k, 0, k=k)

    @classmethod
    def solenoid_group(cls, p: Solenoid) -> CoefficientGroup:
        return cls("solenoid", 1, 0, 1, solenoid=p)

    @classmethod
    def abstract(cls, r: int, f: int, t: int) -> CoefficientGroup:
        return cls("abstract", r, f, t)


def cohomology_coefficients(fd: FlowDescriptor, g: CoefficientGroup) -> StructureExpr:
    """``R^r + (Q/Z)^(m f) + Q^(m t) + (Z_d_1 + ... + Z_d_n)^f``."""
    if not (fd.topologically_free and fd.m >= 1):
        raise NotApplicableError("needs a topologically free flow with a free cycle")
    return (
        StructureExpr((("R", g.r), ("Q/Z", fd.m * g.f), ("Q", fd.m * g.t)))
        + _cyclics(fd.divisors) * g.f
    )


# ---------------------------------------------------------------------------
# Realizability


def realizable_finite_section_torus(fd: FlowDescriptor, k: int, K: FgAbGroup) -> bool:
    """Whether a finite ``K <= T^k`` is the section of some extension: ``K`` must
    embed in ``T^k`` and be a quotient of ``Z_d_1 + ... + Z_d_n + Z^m``."""
    if not K.is_finite():
        raise ValueError("K must be finite")
    if len(K.torsion) > k:
        return False
    return is_quotient_of(K, FgAbGroup.from_cyclic(fd.divisors, fd.m))


def all_sections_realizable_torus(fd: FlowDescriptor, k: int) -> bool:
    return fd.m >= k


@dataclass(frozen=True)
class SolenoidSubgroupKm:
    """``K = pr_m^{-1}(Z_k)``; ``k=None`` stands for the whole solenoid."""

    m: int
    k: int | None

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("m must be >= 1")
        if self.k is not None and self.k < 2:
            raise ValueError("k must be >= 2")

    @classmethod
    def whole(cls) -> SolenoidSubgroupKm:
        return cls(1, None)

    def is_whole(self) -> bool:
        return self.k is None


def solenoid_section_catalog(fd: FlowDescriptor, K: SolenoidSubgroupKm) -> bool:
    """Realizability of ``pr_m^{-1}(Z_k)`` (or of the whole solenoid, i.e. a
    minimal extension) in a solenoid. Both hold exactly when there is a free
    cycle; without one no proper closed subgroup is a section."""
    return fd.has_free_cycle()


def zd_in_solenoid(p: Solenoid, d: int) -> bool:
    """Whether the solenoid contains ``Z_d``: eventually ``gcd(p_n, d) = 1``."""
    if d < 2:
        raise ValueError("d must be >= 2")
    return all(math.gcd(q, d) == 1 for q in p.cycle)


def _require_simply_connected(fd: FlowDescriptor) -> None:
    if not fd.simply_connected:
        raise NotApplicableError("needs a simply connected acting group")


def realizable_zd_simply_connected(fd: FlowDescriptor, d: int) -> bool:
    """``Z_d`` is a circle section iff ``pi^1(X) \\ p pi^1(X)`` is nonempty for
    every prime ``p | d``. For ``pi^1(X) = Z^x_rank`` that means ``x_rank >= 1``."""
    if d < 2:
        raise ValueError("d must be >= 2")
    _require_simply_connected(fd)
    # Z^r \ pZ^r is nonempty iff r >= 1, independently of p
    return all(fd.x_rank >= 1 for _ in prime_factors(d))


def torus_modular_rank(fd: FlowDescriptor, n_target: int, d: int) -> bool:
    """Rank of ``pi^1(X)/d pi^1(X)`` as a ``Z_d``-module is at least ``n_target``."""
    if d < 2:
        raise ValueError("d must be >= 2")
    _require_simply_connected(fd)
    return fd.x_rank >= n_target


def d_pure_rank_one(v: Sequence[int], d: int) -> bool:
    """Whether ``<v>`` is d-pure in Z^t, i.e. ``<v> ∩ dZ^t = d<v>``."""
    if d < 2:
        raise ValueError("d must be >= 2")
    if not any(v):
        raise ValueError("v must be nonzero")
    content = 0
    for x in v:
        content = math.gcd(content, x)
    return math.gcd(content, d) == 1


def free_cycle_from_tori(dim_gamma_torus: int, dim_g_torus: int) -> int:
    """Free-cycle rank of an equicontinuous flow: difference of torus dimensions."""
    diff = dim_g_torus - dim_gamma_torus
    if diff < 0 or dim_gamma_torus < 0:
        raise ValueError("need dim_g_torus >= dim_gamma_torus >= 0")
    return diff


# ---------------------------------------------------------------------------
# Inclusion shapes


@dataclass(frozen=True)
class Inclusion:
    """Slotwise inclusion ``sub_1 op sub_2 ... <= amb_1 op amb_2 ...``.

    Each slot carries a display label and the expression it denotes.
    """

    sub: tuple[tuple[str, StructureExpr], ...]
    ambient: tuple[tuple[str, StructureExpr], ...]
    op: str = "⊕"

    def sub_expr(self) -> StructureExpr:
        return sum((e for _, e in self.sub), StructureExpr())

    def ambient_expr(self) -> StructureExpr:
        return sum((e for _, e in self.ambient), StructureExpr())

    def render(self) -> str:
        sep = f" {self.op} "
        return sep.join(l for l, _ in self.sub) + " ⊆ " + sep.join(l for l, _ in self.ambient)

    def __str__(self) -> str:
        return self.render()


def _slot(atom: str, exp: int, empty: str) -> tuple[str, StructureExpr]:
    e = StructureExpr(((atom, exp),))
    return (e.render(empty=empty), e)


def free_extension_shapes(fd: FlowDescriptor) -> tuple[Inclusion, Inclusion]:
    """Coboundaries inside cocycles, and the section of the free extension
    inside its group, both as slotwise inclusions."""
    if _branch(fd) == "free":
        m, n, divs = fd.m, fd.n, fd.divisors
    else:
        m, n, divs = fd.x_rank, 0, ()
    b_sub = [("0", StructureExpr()), _slot("R", 1, "0"), _slot("Z", m, "0")]
    b_amb = [_slot("R", 1, "0"), _slot("R", 1, "0"), _slot("Q", m, "0")]
    f_sub = [_slot("bR", 1, "1"), ("1", StructureExpr()), _slot("Zperp(Q*)", m, "1")]
    f_amb = [_slot("bR", 1, "1"), _slot("bR", 1, "1"), _slot("Q*", m, "1")]
    if n:
        b_sub.append((" ⊕ ".join("Z" if d == 1 else f"{d}Z" for d in divs), StructureExpr((("Z", n),))))
        b_amb.append(_slot("Z", n, "0"))
        cyc = _cyclics(divs)
        f_sub.append((cyc.render(sep=" × ", empty="1"), cyc))
        f_amb.append(_slot("T1", n, "1"))
    return Inclusion(tuple(b_sub), tuple(b_amb), "⊕"), Inclusion(tuple(f_sub), tuple(f_amb), "×")
