"""Exact integer linear algebra: Smith and Hermite normal forms, subgroup
arithmetic in Z^g, and rational inversion.

Matrices act on column vectors and their columns are read as generators.
All entries are Python ints, so nothing overflows.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

__all__ = [
    "IntMatrix",
    "SnfResult",
    "Lattice",
    "snf",
    "hnf",
    "kernel_basis",
    "lattice_sum",
    "lattice_intersection",
    "lattice_preimage",
    "divide_lattice",
    "rational_inverse",
]


@dataclass(frozen=True)
class IntMatrix:
    """Immutable dense integer matrix stored row-major."""

    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"{self.rows}x{self.cols} matrix needs {self.rows * self.cols} entries, "
                f"got {len(self.entries)}"
            )
        for x in self.entries:
            if not isinstance(x, int) or isinstance(x, bool):
                raise TypeError(f"matrix entries must be int, got {type(x).__name__}")

    # -- construction -------------------------------------------------

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> IntMatrix:
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise ValueError("ragged rows")
        return cls(len(rows), cols, tuple(int(x) for r in rows for x in r))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int) -> IntMatrix:
        columns = [list(c) for c in columns]
        for c in columns:
            if len(c) != rows:
                raise ValueError("ragged columns")
        return cls.from_rows([[c[i] for c in columns] for i in range(rows)], len(columns))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> IntMatrix:
        return cls(rows, cols, (0,) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls.diag([1] * n)

    @classmethod
    def diag(cls, values: Sequence[int], rows: int | None = None, cols: int | None = None) -> IntMatrix:
        values = list(values)
        rows = len(values) if rows is None else rows
        cols = len(values) if cols is None else cols
        data = [[0] * cols for _ in range(rows)]
        for i, v in enumerate(values):
            data[i][i] = v
        return cls.from_rows(data, cols)

    # -- access -------------------------------------------------------

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(ij)
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def columns(self) -> list[tuple[int, ...]]:
        return [self.column(j) for j in range(self.cols)]

    def tolist(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def T(self) -> IntMatrix:
        return IntMatrix.from_rows([list(self.column(j)) for j in range(self.cols)], self.rows)

    def is_square(self) -> bool:
        return self.rows == self.cols

    # -- arithmetic ---------------------------------------------------

    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        ocols = other.columns()
        return IntMatrix.from_rows(
            [[sum(a * b for a, b in zip(self.row(i), c)) for c in ocols] for i in range(self.rows)],
            other.cols,
        )

    def apply(self, v: Sequence[int]) -> tuple[int, ...]:
        if len(v) != self.cols:
            raise ValueError("dimension mismatch")
        return tuple(sum(a * b for a, b in zip(self.row(i), v)) for i in range(self.rows))

    def __add__(self, other: IntMatrix) -> IntMatrix:
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return IntMatrix(self.rows, self.cols, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: IntMatrix) -> IntMatrix:
        return self + (-other)

    def __neg__(self) -> IntMatrix:
        return IntMatrix(self.rows, self.cols, tuple(-a for a in self.entries))

    def scale(self, k: int) -> IntMatrix:
        return IntMatrix(self.rows, self.cols, tuple(k * a for a in self.entries))

    def hstack(self, other: IntMatrix) -> IntMatrix:
        if self.rows != other.rows:
            raise ValueError("row count mismatch")
        return IntMatrix.from_rows(
            [list(self.row(i)) + list(other.row(i)) for i in range(self.rows)],
            self.cols + other.cols,
        )

    def det(self) -> int:
        if not self.is_square():
            raise ValueError("determinant of a non-square matrix")
        return _bareiss_det(self.tolist())

    def __repr__(self) -> str:
        return f"IntMatrix({self.tolist()!r})" if self.rows else f"IntMatrix.zeros(0, {self.cols})"


def _bareiss_det(a: list[list[int]]) -> int:
    n = len(a)
    if n == 0:
        return 1
    a = [r[:] for r in a]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


# ---------------------------------------------------------------------------
# Smith normal form


@dataclass(frozen=True)
class SnfResult:
    U: IntMatrix
    D: IntMatrix
    V: IntMatrix

    @property
    def diagonal(self) -> tuple[int, ...]:
        return tuple(self.D[i, i] for i in range(min(self.D.rows, self.D.cols)))

    @property
    def invariant_factors(self) -> tuple[int, ...]:
        """Nonzero diagonal entries, units included."""
        return tuple(x for x in self.diagonal if x != 0)


def snf(a: IntMatrix) -> SnfResult:
    """Smith normal form with transforms, ``U @ a @ V == D``.

    The diagonal of ``D`` is nonnegative, each entry divides the next and
    zeros come last.
    """
    m, n = a.rows, a.cols
    s = a.tolist()
    u = [[int(i == j) for j in range(m)] for i in range(m)]
    v = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        s[i], s[j] = s[j], s[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in s:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    def add_row(dst, src, q):  # row_dst += q * row_src
        if q:
            s[dst] = [x + q * y for x, y in zip(s[dst], s[src])]
            u[dst] = [x + q * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, q):  # col_dst += q * col_src
        if q:
            for r in s:
                r[dst] += q * r[src]
            for r in v:
                r[dst] += q * r[src]

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    x = s[i][j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, j)
            if best is None:
                return _finish_snf(s, u, v, m, n)
            _, i, j = best
            swap_rows(t, i)
            swap_cols(t, j)
            p = s[t][t]
            clean = True
            for i in range(t + 1, m):
                if s[i][t]:
                    add_row(i, t, -(s[i][t] // p))
                    clean = clean and s[i][t] == 0
            for j in range(t + 1, n):
                if s[t][j]:
                    add_col(j, t, -(s[t][j] // p))
                    clean = clean and s[t][j] == 0
            if not clean:
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if s[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if s[t][t] < 0:
            s[t] = [-x for x in s[t]]
            u[t] = [-x for x in u[t]]
    return _finish_snf(s, u, v, m, n)


def _finish_snf(s, u, v, m, n) -> SnfResult:
    for t in range(min(m, n)):
        if s[t][t] < 0:
            s[t] = [-x for x in s[t]]
            u[t] = [-x for x in u[t]]
    return SnfResult(IntMatrix.from_rows(u, m), IntMatrix.from_rows(s, n), IntMatrix.from_rows(v, n))


# ---------------------------------------------------------------------------
# Hermite normal form


def _row_hnf(x: list[list[int]], ncols: int) -> tuple[list[list[int]], list[list[int]]]:
    """Row-style HNF ``H = W x`` with ``W`` unimodular.

    Nonzero rows come first with strictly increasing pivot columns, positive
    pivots, and entries above each pivot reduced into ``[0, pivot)``.
    """
    r = len(x)
    h = [row[:] for row in x]
    w = [[int(i == j) for j in range(r)] for i in range(r)]

    def add_row(dst, src, q):
        if q:
            h[dst] = [a + q * b for a, b in zip(h[dst], h[src])]
            w[dst] = [a + q * b for a, b in zip(w[dst], w[src])]

    pr = 0
    for col in range(ncols):
        if pr == r:
            break
        while True:
            nz = [(abs(h[i][col]), i) for i in range(pr, r) if h[i][col]]
            if not nz:
                break
            _, i = min(nz)
            h[pr], h[i] = h[i], h[pr]
            w[pr], w[i] = w[i], w[pr]
            done = True
            for i in range(pr + 1, r):
                if h[i][col]:
                    add_row(i, pr, -(h[i][col] // h[pr][col]))
                    done = done and h[i][col] == 0
            if done:
                break
        if pr < r and h[pr][col]:
            if h[pr][col] < 0:
                h[pr] = [-a for a in h[pr]]
                w[pr] = [-a for a in w[pr]]
            p = h[pr][col]
            for i in range(pr):
                add_row(i, pr, -(h[i][col] // p))
            pr += 1
    return h, w


def hnf(a: IntMatrix) -> IntMatrix:
    """Column Hermite normal form of the column lattice of ``a``.

    Returns a ``rows x rank`` matrix whose columns are a canonical basis:
    two matrices span the same lattice iff their ``hnf`` agree.
    """
    h, _ = _row_hnf([list(c) for c in a.columns()], a.rows)
    basis = [row for row in h if any(row)]
    return IntMatrix.from_columns(basis, a.rows)


def kernel_basis(a: IntMatrix) -> IntMatrix:
    """Basis (as columns) of ``{v in Z^cols : a v = 0}``."""
    h, w = _row_hnf([list(c) for c in a.columns()], a.rows)
    ker = [w[i] for i in range(len(h)) if not any(h[i])]
    return IntMatrix.from_columns(ker, a.cols)


# ---------------------------------------------------------------------------
# Lattices


@dataclass(frozen=True)
class Lattice:
    """Subgroup of Z^g, stored by its column HNF basis."""

    ambient_rank: int
    basis: IntMatrix

    def __post_init__(self):
        if self.basis.rows != self.ambient_rank:
            raise ValueError("basis rows must equal ambient rank")
        if hnf(self.basis) != self.basis:
            raise ValueError("basis is not in Hermite normal form; use Lattice.span")

    @classmethod
    def span(cls, ambient_rank: int, gens: IntMatrix | Iterable[Sequence[int]]) -> Lattice:
        if not isinstance(gens, IntMatrix):
            gens = IntMatrix.from_columns(list(gens), ambient_rank)
        if gens.rows != ambient_rank:
            raise ValueError("generator length differs from ambient rank")
        return cls(ambient_rank, hnf(gens))

    @classmethod
    def full(cls, g: int) -> Lattice:
        return cls.span(g, IntMatrix.identity(g))

    @classmethod
    def zero(cls, g: int) -> Lattice:
        return cls(g, IntMatrix.zeros(g, 0))

    @classmethod
    def scalar(cls, g: int, d: int) -> Lattice:
        """The lattice ``d Z^g``."""
        return cls.span(g, IntMatrix.identity(g).scale(d))

    @property
    def rank(self) -> int:
        return self.basis.cols

    def generators(self) -> list[tuple[int, ...]]:
        return self.basis.columns()

    def is_full_rank(self) -> bool:
        return self.rank == self.ambient_rank

    def index(self) -> int:
        """``[Z^g : self]``; only finite for full-rank lattices."""
        if not self.is_full_rank():
            raise ValueError("infinite index: lattice is not of full rank")
        return abs(self.basis.det())

    def __contains__(self, v: Sequence[int]) -> bool:
        v = tuple(v)
        if len(v) != self.ambient_rank:
            raise ValueError("dimension mismatch")
        return Lattice.span(self.ambient_rank, self.basis.hstack(IntMatrix.from_columns([v], len(v)))) == self

    def issubset(self, other: Lattice) -> bool:
        return lattice_sum(self, other) == other

    def __le__(self, other: Lattice) -> bool:
        return self.issubset(other)

    def image(self, m: IntMatrix) -> Lattice:
        """``m(self)`` as a lattice in Z^{m.rows}."""
        return Lattice.span(m.rows, m @ self.basis)

    def scale(self, d: int) -> Lattice:
        return Lattice.span(self.ambient_rank, self.basis.scale(d))

    def __repr__(self) -> str:
        return f"Lattice({self.ambient_rank}, {self.basis.columns()!r})"


def lattice_sum(p: Lattice, q: Lattice) -> Lattice:
    _same_ambient(p, q)
    return Lattice.span(p.ambient_rank, p.basis.hstack(q.basis))


def lattice_preimage(m: IntMatrix, q: Lattice) -> Lattice:
    """``{v in Z^{m.cols} : m v in q}``."""
    if m.rows != q.ambient_rank:
        raise ValueError(f"map has {m.rows} rows but lattice lives in Z^{q.ambient_rank}")
    ker = kernel_basis(m.hstack(-q.basis))
    return Lattice.span(m.cols, [c[:m.cols] for c in ker.columns()])


def lattice_intersection(p: Lattice, q: Lattice) -> Lattice:
    _same_ambient(p, q)
    coeffs = lattice_preimage(p.basis, q)
    return coeffs.image(p.basis)


def divide_lattice(d: int, q: Lattice) -> Lattice:
    """``{v : d v in q}``."""
    if d < 1:
        raise ValueError("d must be positive")
    return lattice_preimage(IntMatrix.identity(q.ambient_rank).scale(d), q)


def _same_ambient(p: Lattice, q: Lattice) -> None:
    if p.ambient_rank != q.ambient_rank:
        raise ValueError(f"lattices live in Z^{p.ambient_rank} and Z^{q.ambient_rank}")


# ---------------------------------------------------------------------------
# Rational inverse


def rational_inverse(a: IntMatrix) -> tuple[IntMatrix, int]:
    """Return ``(N, delta)`` with ``N @ a == delta * I`` and ``delta = |det a|``.

    ``N / delta`` is the inverse of ``a`` over Q.
    """
    if not a.is_square():
        raise ValueError("rational inverse needs a square matrix")
    det = a.det()
    if det == 0:
        raise ValueError("singular matrix")
    n = a.rows
    aug = [[Fraction(x) for x in a.row(i)] + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for c in range(n):
        p = next(i for i in range(c, n) if aug[i][c] != 0)
        aug[c], aug[p] = aug[p], aug[c]
        pv = aug[c][c]
        aug[c] = [x / pv for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c]:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
    delta = abs(det)
    rows = []
    for i in range(n):
        row = []
        for x in aug[i][n:]:
            y = x * delta
            assert y.denominator == 1
            row.append(int(y))
        rows.append(row)
    return IntMatrix.from_rows(rows, n), delta
