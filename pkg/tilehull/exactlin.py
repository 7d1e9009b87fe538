"""Exact rational linear algebra.

``RatMatrix`` is an immutable dense matrix of ``Fraction`` entries. Heavy lifting
(rank, Smith decomposition, determinants, characteristic polynomials, inverses)
is delegated to sympy's ``DomainMatrix`` over ``ZZ``/``QQ`` so nothing is ever
rounded. ``LatticeZn`` keeps finitely generated subgroups of Z^n in Hermite
normal form.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

from sympy.polys.domains import QQ, ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import smith_normal_decomp

Number = int | Fraction


def _frac(x: Number | Rational) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, Rational):
        return Fraction(int(x.numerator), int(x.denominator))
    raise TypeError(f"exact rational expected, got {type(x).__name__}")


def _from_domain_element(e: object) -> Fraction:
    num = getattr(e, "numerator", None)
    if num is None:
        return Fraction(int(e))  # type: ignore[call-overload]
    return Fraction(int(num), int(getattr(e, "denominator")))


@dataclass(frozen=True, slots=True)
class RatMatrix:
    """Dense ``rows x cols`` matrix with exact rational entries (row-major)."""

    rows: int
    cols: int
    entries: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise ValueError("matrix dimensions must be non-negative")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(f"expected {self.rows * self.cols} entries, got {len(self.entries)}")

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Number]], cols: int | None = None) -> "RatMatrix":
        n_rows = len(rows)
        n_cols = len(rows[0]) if rows else (cols or 0)
        if any(len(r) != n_cols for r in rows):
            raise ValueError("ragged rows")
        return cls(n_rows, n_cols, tuple(_frac(x) for r in rows for x in r))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[Number]], rows: int | None = None) -> "RatMatrix":
        n_rows = len(columns[0]) if columns else (rows or 0)
        return cls.from_rows([[c[i] for c in columns] for i in range(n_rows)], cols=len(columns))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RatMatrix":
        return cls(rows, cols, (Fraction(0),) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        return cls.from_rows([[1 if i == j else 0 for j in range(n)] for i in range(n)], cols=n)

    @classmethod
    def from_domain(cls, dm: DomainMatrix) -> "RatMatrix":
        r, c = dm.shape
        return cls(r, c, tuple(_from_domain_element(e) for row in dm.to_list() for e in row))

    # -- access ---------------------------------------------------------------

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> tuple[Fraction, ...]:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def to_rows(self) -> list[list[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def int_rows(self) -> list[list[int]]:
        if not self.is_integer:
            raise ValueError("matrix has non-integer entries")
        return [[int(x) for x in self.row(i)] for i in range(self.rows)]

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    @property
    def is_integer(self) -> bool:
        return all(x.denominator == 1 for x in self.entries)

    def to_domain(self, domain=QQ) -> DomainMatrix:
        if domain == ZZ:
            data = [[ZZ(int(x)) for x in r] for r in self.int_rows()]
        else:
            data = [[domain(x.numerator, x.denominator) for x in r] for r in self.to_rows()]
        return DomainMatrix(data, (self.rows, self.cols), domain)

    # -- arithmetic -----------------------------------------------------------

    def __matmul__(self, other: "RatMatrix") -> "RatMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        if 0 in (self.rows, self.cols, other.cols):
            return RatMatrix.zeros(self.rows, other.cols)
        return RatMatrix.from_domain(self.to_domain() * other.to_domain())

    def __add__(self, other: "RatMatrix") -> "RatMatrix":
        self._same_shape(other)
        return RatMatrix(self.rows, self.cols, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "RatMatrix") -> "RatMatrix":
        self._same_shape(other)
        return RatMatrix(self.rows, self.cols, tuple(a - b for a, b in zip(self.entries, other.entries)))

    def scale(self, q: Number) -> "RatMatrix":
        q = _frac(q)
        return RatMatrix(self.rows, self.cols, tuple(q * a for a in self.entries))

    def transpose(self) -> "RatMatrix":
        return RatMatrix.from_columns([self.row(i) for i in range(self.rows)], rows=self.cols)

    def apply(self, vec: Sequence[Number]) -> tuple[Fraction, ...]:
        if len(vec) != self.cols:
            raise ValueError("vector length mismatch")
        v = [_frac(x) for x in vec]
        return tuple(sum((a * b for a, b in zip(self.row(i), v)), Fraction(0)) for i in range(self.rows))

    def power(self, k: int) -> "RatMatrix":
        if not self.is_square:
            raise ValueError("power of a non-square matrix")
        if k < 0:
            raise ValueError("negative exponent")
        if k == 0 or self.rows == 0:
            return RatMatrix.identity(self.rows)
        return RatMatrix.from_domain(self.to_domain() ** k)

    def _same_shape(self, other: "RatMatrix") -> None:
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")


# ---------------------------------------------------------------------------
# Ranks and normal forms
# ---------------------------------------------------------------------------


def rank_q(m: RatMatrix) -> int:
    """Rank of ``m`` over Q."""
    if m.rows == 0 or m.cols == 0:
        return 0
    return int(m.to_domain().rank())


def smith_normal_form(m: RatMatrix) -> tuple[RatMatrix, RatMatrix, RatMatrix]:
    """Return ``(U, D, V)`` with ``U @ m @ V == D`` and U, V unimodular.

    ``D`` is diagonal with non-negative entries forming a divisibility chain.
    """
    if not m.is_integer:
        raise ValueError("Smith normal form needs an integer matrix")
    if m.rows == 0 or m.cols == 0:
        return RatMatrix.identity(m.rows), m, RatMatrix.identity(m.cols)
    d, s, t = smith_normal_decomp(m.to_domain(ZZ))
    return RatMatrix.from_domain(s), RatMatrix.from_domain(d), RatMatrix.from_domain(t)


def invariant_factors(m: RatMatrix) -> tuple[int, ...]:
    """Nonzero diagonal entries of the Smith form."""
    _, d, _ = smith_normal_form(m)
    return tuple(abs(int(d[i, i])) for i in range(min(d.rows, d.cols)) if d[i, i] != 0)


def determinant(m: RatMatrix) -> Fraction:
    if not m.is_square:
        raise ValueError("determinant of a non-square matrix")
    if m.rows == 0:
        return Fraction(1)
    return _from_domain_element(m.to_domain().det())


def eventual_rank(m: RatMatrix) -> int:
    """Rank of ``m**k`` for any ``k >= dim``, by repeated squaring.

    This is the Q-dimension of the direct limit of ``(Q^dim, m)``.
    """
    if not m.is_square:
        raise ValueError("eventual rank of a non-square matrix")
    n = m.rows
    if n == 0:
        return 0
    p, e = m, 1
    while e < n:
        p, e = p @ p, 2 * e
    return rank_q(p)


def characteristic_polynomial(m: RatMatrix) -> tuple[Fraction, ...]:
    """Coefficients of ``det(x I - m)``, leading coefficient first."""
    if not m.is_square:
        raise ValueError("characteristic polynomial of a non-square matrix")
    if m.rows == 0:
        return (Fraction(1),)
    return tuple(_from_domain_element(c) for c in m.to_domain().charpoly())


def column_space_basis(m: RatMatrix) -> list[tuple[Fraction, ...]]:
    """Columns of ``m`` at the pivot positions of its reduced row echelon form."""
    if m.rows == 0 or m.cols == 0:
        return []
    _, pivots = m.to_domain().rref()
    return [m.column(j) for j in pivots]


def inverse(m: RatMatrix) -> RatMatrix:
    if not m.is_square:
        raise ValueError("inverse of a non-square matrix")
    if m.rows == 0:
        return m
    return RatMatrix.from_domain(m.to_domain().inv())


def extend_to_basis(vectors: Sequence[Sequence[Number]], dim: int) -> list[tuple[Fraction, ...]]:
    """Extend independent ``vectors`` to a basis of Q^dim with standard unit vectors."""
    basis = [tuple(_frac(x) for x in v) for v in vectors]
    if basis and rank_q(RatMatrix.from_columns(basis, rows=dim)) != len(basis):
        raise ValueError("vectors to extend are not independent")
    for j in range(dim):
        if len(basis) == dim:
            break
        unit = tuple(Fraction(1 if i == j else 0) for i in range(dim))
        trial = basis + [unit]
        if rank_q(RatMatrix.from_columns(trial, rows=dim)) == len(trial):
            basis = trial
    return basis


# ---------------------------------------------------------------------------
# Subgroups of Z^n
# ---------------------------------------------------------------------------


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(x, y, g)`` with ``x*a + y*b == g`` and ``g == ±gcd(a, b)``."""
    x, next_x = 1, 0
    y, next_y = 0, 1
    g, next_g = a, b
    while next_g:
        q = g // next_g
        x, next_x = next_x, x - q * next_x
        y, next_y = next_y, y - q * next_y
        g, next_g = next_g, g - q * next_g
    return x, y, g


def _lead(vec: Sequence[int]) -> int | None:
    for j, v in enumerate(vec):
        if v:
            return j
    return None


def _insert(basis: list[list[int]], pivots: list[int], vec: list[int]) -> None:
    j = _lead(vec)
    while j is not None:
        k = bisect_left(pivots, j)
        if k == len(pivots) or pivots[k] != j:
            basis.insert(k, vec)
            pivots.insert(k, j)
            return
        row = basis[k]
        a, b = row[j], vec[j]
        if b % a == 0:
            q = b // a
            vec = [v - q * r for v, r in zip(vec, row)]
        else:
            x, y, g = xgcd(a, b)
            ag, mbg = a // g, -b // g
            basis[k] = [x * r + y * v for r, v in zip(row, vec)]
            vec = [mbg * r + ag * v for r, v in zip(row, vec)]
        j = _lead(vec)


def _reduce(basis: list[list[int]], pivots: list[int]) -> None:
    for k, p in enumerate(pivots):
        if basis[k][p] < 0:
            basis[k] = [-x for x in basis[k]]
        piv = basis[k][p]
        for i in range(k):
            q = basis[i][p] // piv
            if q:
                basis[i] = [a - q * b for a, b in zip(basis[i], basis[k])]


@dataclass(frozen=True, slots=True)
class LatticeZn:
    """A subgroup of Z^n with its basis rows in Hermite normal form.

    Rows are echelon with strictly increasing pivot columns, positive pivots and
    entries above each pivot reduced into ``[0, pivot)``, so equal subgroups have
    equal ``basis`` tuples.
    """

    ambient_dim: int
    basis: tuple[tuple[int, ...], ...]

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def pivots(self) -> tuple[int, ...]:
        return tuple(_lead(r) for r in self.basis)  # type: ignore[misc]

    @property
    def index(self) -> int | None:
        """``[Z^n : L]`` for full rank lattices, ``None`` (infinite) otherwise."""
        if self.rank < self.ambient_dim:
            return None
        out = 1
        for row, p in zip(self.basis, self.pivots):
            out *= row[p]
        return out

    def __contains__(self, vec: object) -> bool:
        if not isinstance(vec, (tuple, list)) or len(vec) != self.ambient_dim:
            return False
        v = [_frac(x) for x in vec]
        if any(x.denominator != 1 for x in v):
            return False
        w = [int(x) for x in v]
        for row, p in zip(self.basis, self.pivots):
            c = w[p]
            if c % row[p]:
                return False
            q = c // row[p]
            if q:
                w = [a - q * b for a, b in zip(w, row)]
        return not any(w)

    def is_sublattice_of(self, other: "LatticeZn") -> bool:
        return self.ambient_dim == other.ambient_dim and all(r in other for r in self.basis)

    def scaled(self, k: int) -> "LatticeZn":
        return lattice_from_generators(self.ambient_dim, [[k * x for x in r] for r in self.basis])

    def to_dict(self) -> dict:
        return {"ambient_dim": self.ambient_dim, "basis": [list(r) for r in self.basis],
                "rank": self.rank, "index": self.index if self.index is not None else "infinite"}


def lattice_from_generators(ambient_dim: int, gens: Iterable[Sequence[Number]]) -> LatticeZn:
    """Z-span of ``gens`` inside Z^ambient_dim, in canonical form."""
    basis: list[list[int]] = []
    pivots: list[int] = []
    for g in gens:
        if len(g) != ambient_dim:
            raise ValueError(f"generator {tuple(g)} has length {len(g)}, expected {ambient_dim}")
        vec = [_frac(x) for x in g]
        if any(x.denominator != 1 for x in vec):
            raise ValueError(f"generator {tuple(g)} is not integral")
        _insert(basis, pivots, [int(x) for x in vec])
    _reduce(basis, pivots)
    return LatticeZn(ambient_dim, tuple(tuple(r) for r in basis))
