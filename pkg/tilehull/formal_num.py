"""Formal reals and the Hat complex algebra.

A ``FormalReal`` is a Q-linear combination of named, rationally independent
real symbols ("1", "t1", "sqrt3", ...). Tile lengths, return-vector lengths and
cocycle evaluations are all Q-linear in the symbols, so products of two
non-rational values are refused instead of being modelled.

``FormalComplex`` lives in the 8-dimensional Q-algebra spanned by
{1, √3, i, i√3} x {1, τ}, with τ a formal real transcendental over Q(√3).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from tilehull.errors import BasisMismatchError, FormalArithmeticError
from tilehull.exactlin import LatticeZn, RatMatrix, lattice_from_generators, rank_q

UNIT = "1"


@dataclass(frozen=True, slots=True)
class FormalBasis:
    symbols: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.symbols or self.symbols[0] != UNIT:
            raise ValueError('the rational unit "1" must be the first basis symbol')
        if len(set(self.symbols)) != len(self.symbols):
            raise ValueError(f"duplicate basis symbols in {self.symbols}")

    @classmethod
    def of(cls, *names: str) -> "FormalBasis":
        """Basis ``("1", *names)``; a leading "1" in ``names`` is tolerated."""
        rest = [n for n in names if n != UNIT]
        return cls((UNIT, *rest))

    def __len__(self) -> int:
        return len(self.symbols)

    def index(self, name: str) -> int:
        try:
            return self.symbols.index(name)
        except ValueError:
            raise KeyError(f"symbol {name!r} not in basis {self.symbols}") from None

    def extend(self, names: Iterable[str]) -> "FormalBasis":
        extra = [n for n in names if n not in self.symbols]
        return FormalBasis(self.symbols + tuple(dict.fromkeys(extra)))

    def zero(self) -> "FormalReal":
        return FormalReal(self, (Fraction(0),) * len(self))

    def rational(self, q: int | Fraction) -> "FormalReal":
        return self.zero() + Fraction(q)

    def symbol(self, name: str) -> "FormalReal":
        i = self.index(name)
        return FormalReal(self, tuple(Fraction(1 if k == i else 0) for k in range(len(self))))


@dataclass(frozen=True, slots=True)
class FormalReal:
    basis: FormalBasis
    coeffs: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if len(self.coeffs) != len(self.basis):
            raise ValueError("coefficient count does not match basis")

    # -- queries ------------------------------------------------------------

    @property
    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    @property
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def rational_value(self) -> Fraction:
        if not self.is_rational:
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    def coefficient(self, name: str) -> Fraction:
        return self.coeffs[self.basis.index(name)]

    def support(self) -> tuple[str, ...]:
        return tuple(s for s, c in zip(self.basis.symbols, self.coeffs) if c)

    def rebase(self, basis: FormalBasis) -> "FormalReal":
        """Express over a larger basis containing every symbol in the support."""
        if basis == self.basis:
            return self
        out = [Fraction(0)] * len(basis)
        for s, c in zip(self.basis.symbols, self.coeffs):
            if c:
                out[basis.index(s)] = c
        return FormalReal(basis, tuple(out))

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other: object) -> "FormalReal | None":
        if isinstance(other, FormalReal):
            if other.basis != self.basis:
                raise BasisMismatchError(f"basis {other.basis.symbols} != {self.basis.symbols}")
            return other
        if isinstance(other, (int, Fraction)):
            return FormalReal(self.basis, (Fraction(other),) + (Fraction(0),) * (len(self.basis) - 1))
        return None

    def __add__(self, other: object) -> "FormalReal":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FormalReal(self.basis, tuple(a + b for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self) -> "FormalReal":
        return FormalReal(self.basis, tuple(-a for a in self.coeffs))

    def __sub__(self, other: object) -> "FormalReal":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: object) -> "FormalReal":
        return (-self) + other

    def __mul__(self, other: object) -> "FormalReal":
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            return FormalReal(self.basis, tuple(q * a for a in self.coeffs))
        if isinstance(other, FormalReal):
            if other.is_rational:
                return self * other.rational_value()
            if self.is_rational:
                return other * self.rational_value()
            raise FormalArithmeticError("product of two non-rational formal reals", left=self, right=other)
        return NotImplemented

    __rmul__ = __mul__

    def __str__(self) -> str:
        return format_formal(self)


def _common_basis(vals: Sequence[FormalReal]) -> FormalBasis | None:
    if not vals:
        return None
    basis = vals[0].basis
    for v in vals[1:]:
        if v.basis != basis:
            raise BasisMismatchError(f"basis {v.basis.symbols} != {basis.symbols}")
    return basis


def rank_of_values(vals: Sequence[FormalReal]) -> int:
    """Q-dimension of the span of ``vals``."""
    basis = _common_basis(vals)
    if basis is None:
        return 0
    return rank_q(RatMatrix.from_rows([v.coeffs for v in vals]))


def specialize(v: FormalReal, assignment: Mapping[str, int | Fraction]) -> FormalReal:
    """Substitute rationals for symbols; the result keeps ``v``'s basis."""
    coeffs = list(v.coeffs)
    for name, q in assignment.items():
        if name == UNIT or name not in v.basis.symbols:
            continue
        i = v.basis.index(name)
        coeffs[0] += coeffs[i] * Fraction(q)
        coeffs[i] = Fraction(0)
    return FormalReal(v.basis, tuple(coeffs))


# ---------------------------------------------------------------------------
# Text syntax: "3/2 + 1*t1 - t2/4"
# ---------------------------------------------------------------------------

_TERM = re.compile(
    r"\s*([+-])?\s*(?:(\d+(?:/\d+)?)\s*\*?\s*)?([A-Za-z_][A-Za-z0-9_]*)?(?:\s*/\s*(\d+))?\s*"
)


def parse_terms(text: str) -> dict[str, Fraction]:
    """Parse a linear expression into ``{symbol: coefficient}`` (unit key "1")."""
    src = text.strip()
    if not src:
        raise ValueError("empty expression")
    out: dict[str, Fraction] = {}
    pos = 0
    first = True
    while pos < len(src):
        m = _TERM.match(src, pos)
        if m is None or m.end() == pos:
            raise ValueError(f"cannot parse {text!r} at offset {pos}")
        sign, num, name, div = m.groups()
        if sign is None and not first:
            raise ValueError(f"missing operator in {text!r} at offset {pos}")
        if num is None and name is None:
            raise ValueError(f"dangling sign in {text!r}")
        coeff = Fraction(num) if num is not None else Fraction(1)
        if div is not None:
            coeff /= int(div)
        if sign == "-":
            coeff = -coeff
        key = name or UNIT
        out[key] = out.get(key, Fraction(0)) + coeff
        pos = m.end()
        first = False
    return out


def parse_formal(text: str, basis: FormalBasis | None = None) -> FormalReal:
    terms = parse_terms(text)
    if basis is None:
        basis = FormalBasis.of(*[k for k in terms if k != UNIT])
    out = basis.zero()
    for name, c in terms.items():
        out = out + (basis.rational(c) if name == UNIT else basis.symbol(name) * c)
    return out


def _fmt_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_formal(v: FormalReal) -> str:
    parts: list[str] = []
    for name, c in zip(v.basis.symbols, v.coeffs):
        if not c:
            continue
        mag = _fmt_coeff(abs(c))
        body = mag if name == UNIT else (name if mag == "1" else f"{mag}*{name}")
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f"{'+' if c > 0 else '-'} {body}")
    return " ".join(parts) if parts else "0"


# ---------------------------------------------------------------------------
# Z-modules generated by formal reals
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class FormalModule:
    """The Z-span of finitely many FormalReals: ``(1/denominator) * lattice``."""

    basis: FormalBasis
    denominator: int
    lattice: LatticeZn

    @property
    def rank(self) -> int:
        return self.lattice.rank

    def __contains__(self, v: object) -> bool:
        if not isinstance(v, FormalReal):
            if isinstance(v, (int, Fraction)):
                v = self.basis.rational(Fraction(v))
            else:
                return False
        if v.basis != self.basis:
            try:
                v = v.rebase(self.basis)
            except KeyError:
                return False
        return tuple(c * self.denominator for c in v.coeffs) in self.lattice

    def generators(self) -> list[FormalReal]:
        return [FormalReal(self.basis, tuple(Fraction(x, self.denominator) for x in row))
                for row in self.lattice.basis]

    def is_submodule_of(self, other: "FormalModule") -> bool:
        return all(g in other for g in self.generators())

    def same_as(self, other: "FormalModule") -> bool:
        return self.is_submodule_of(other) and other.is_submodule_of(self)

    def describe(self) -> str:
        gens = self.generators()
        if not gens:
            return "0"
        return " + ".join(f"({format_formal(g)})Z" for g in gens)


def span_module(vals: Sequence[FormalReal], basis: FormalBasis | None = None) -> FormalModule:
    basis = basis or _common_basis(vals) or FormalBasis.of()
    den = math.lcm(*(c.denominator for v in vals for c in v.coeffs)) if vals else 1
    gens = [[int(c * den) for c in v.coeffs] for v in vals]
    lat = lattice_from_generators(len(basis), gens)
    # normalize the denominator so equal modules print identically
    g = math.gcd(*(x for row in lat.basis for x in row))
    g = math.gcd(g, den) if g else den
    if g > 1:
        lat = lattice_from_generators(len(basis), [[x // g for x in row] for row in lat.basis])
        den //= g
    return FormalModule(basis, den, lat)


# ---------------------------------------------------------------------------
# Complex algebra for the Hat family
# ---------------------------------------------------------------------------

# Q(√3, i) basis e0=1, e1=√3, e2=i, e3=i√3; _MUL[a][b] = (coefficient, index) of e_a*e_b.
_MUL: tuple[tuple[tuple[int, int], ...], ...] = (
    ((1, 0), (1, 1), (1, 2), (1, 3)),
    ((1, 1), (3, 0), (1, 3), (3, 2)),
    ((1, 2), (1, 3), (-1, 0), (-1, 1)),
    ((1, 3), (3, 2), (-1, 1), (-3, 0)),
)

COMPLEX_SYMBOLS: tuple[str, ...] = ("1", "sqrt3", "i", "i*sqrt3", "tau", "sqrt3*tau", "i*tau", "i*sqrt3*tau")


@dataclass(frozen=True, slots=True)
class FormalComplex:
    """Element ``c[0..3] + τ * c[4..7]`` over the basis {1, √3, i, i√3}."""

    coeffs: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if len(self.coeffs) != 8:
            raise ValueError("FormalComplex needs exactly 8 coefficients")

    @classmethod
    def of(cls, one: Fraction | int = 0, sqrt3: Fraction | int = 0, i: Fraction | int = 0,
           i_sqrt3: Fraction | int = 0, tau: Sequence[Fraction | int] = (0, 0, 0, 0)) -> "FormalComplex":
        return cls(tuple(Fraction(x) for x in (one, sqrt3, i, i_sqrt3, *tau)))

    @property
    def carries_tau(self) -> bool:
        return any(self.coeffs[4:])

    @property
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    @property
    def is_real(self) -> bool:
        c = self.coeffs
        return not (c[2] or c[3] or c[6] or c[7])

    def real_coeffs(self) -> tuple[Fraction, ...]:
        """Real part over {1, √3, τ, √3τ}."""
        c = self.coeffs
        return (c[0], c[1], c[4], c[5])

    def imag_coeffs(self) -> tuple[Fraction, ...]:
        """Imaginary part over {1, √3, τ, √3τ}."""
        c = self.coeffs
        return (c[2], c[3], c[6], c[7])

    def __add__(self, other: "FormalComplex") -> "FormalComplex":
        if not isinstance(other, FormalComplex):
            return NotImplemented
        return FormalComplex(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "FormalComplex":
        return FormalComplex(tuple(-a for a in self.coeffs))

    def __sub__(self, other: "FormalComplex") -> "FormalComplex":
        return self + (-other)

    def scale(self, q: int | Fraction) -> "FormalComplex":
        q = Fraction(q)
        return FormalComplex(tuple(q * a for a in self.coeffs))

    def __mul__(self, other: object) -> "FormalComplex":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if isinstance(other, FormalComplex):
            return complex_mul(self, other)
        return NotImplemented

    __rmul__ = __mul__

    def __str__(self) -> str:
        parts: list[str] = []
        for name, c in zip(COMPLEX_SYMBOLS, self.coeffs):
            if not c:
                continue
            mag = _fmt_coeff(abs(c))
            body = mag if name == UNIT else (name if mag == "1" else f"{mag}*{name}")
            sign = "-" if c < 0 else ("+" if parts else "")
            parts.append(f"{sign} {body}".strip() if parts else f"{sign}{body}")
        return " ".join(parts) if parts else "0"


def _k_mul(x: Sequence[Fraction], y: Sequence[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * 4
    for a, xa in enumerate(x):
        if not xa:
            continue
        for b, yb in enumerate(y):
            if yb:
                c, k = _MUL[a][b]
                out[k] += c * xa * yb
    return out


def complex_mul(x: FormalComplex, y: FormalComplex) -> FormalComplex:
    """Exact product; at most one factor may carry τ."""
    if x.carries_tau and y.carries_tau:
        raise FormalArithmeticError("product of two τ-carrying values", left=x, right=y)
    x0, x1 = x.coeffs[:4], x.coeffs[4:]
    y0, y1 = y.coeffs[:4], y.coeffs[4:]
    base = _k_mul(x0, y0)
    tau = [a + b for a, b in zip(_k_mul(x1, y0), _k_mul(x0, y1))]
    return FormalComplex(tuple(base + tau))


ONE = FormalComplex.of(one=1)
I = FormalComplex.of(i=1)
SQRT3 = FormalComplex.of(sqrt3=1)
TAU = FormalComplex.of(tau=(1, 0, 0, 0))
XI = FormalComplex.of(one=Fraction(1, 2), i_sqrt3=Fraction(1, 2))

_COMPLEX_ATOMS = {"sqrt3": SQRT3, "i": I, "tau": TAU, "xi": XI}


def parse_complex(text: str) -> FormalComplex:
    """Parse sums of terms like ``3/2``, ``sqrt3``, ``2*i*sqrt3``, ``-tau``, ``xi``."""
    src = text.replace(" ", "")
    if not src:
        raise ValueError("empty expression")
    terms = re.findall(r"[+-]?[^+-]+", src)
    if "".join(terms) != src:
        raise ValueError(f"cannot parse {text!r}")
    total = FormalComplex.of()
    for term in terms:
        sign = -1 if term.startswith("-") else 1
        body = term.lstrip("+-")
        value = ONE.scale(sign)
        for factor in body.split("*"):
            if factor in _COMPLEX_ATOMS:
                value = complex_mul(value, _COMPLEX_ATOMS[factor])
            elif re.fullmatch(r"\d+(/\d+)?", factor):
                value = value.scale(Fraction(factor))
            else:
                raise ValueError(f"unknown factor {factor!r} in {text!r}")
        total = total + value
    return total
