"""Return-module rank of the Hat family of monotiles.

For edge parameters ``(α, β)`` the return lattice is spanned by
``(α + iβ)(1 + ξ) Z[ξ]`` and ``2iβ(1 + ξ) Z[ξ]`` with ``ξ = e^{iπ/3}``. Its rank
is the Q-rank of the four generators written over the real basis
{1, √3, τ, √3τ} for the real and imaginary parts.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from tilehull.errors import HatParameterError
from tilehull.exactlin import RatMatrix, rank_q
from tilehull.formal_num import I, ONE, XI, FormalComplex, complex_mul, parse_complex


@dataclass(frozen=True, slots=True)
class HatParams:
    alpha: FormalComplex
    beta: FormalComplex
    name: str = ""

    def __post_init__(self) -> None:
        if self.alpha.is_zero and self.beta.is_zero:
            raise HatParameterError("alpha and beta cannot both be zero")

    @classmethod
    def parse(cls, alpha: str, beta: str, name: str = "") -> "HatParams":
        try:
            return cls(parse_complex(alpha), parse_complex(beta), name)
        except ValueError as exc:
            raise HatParameterError(str(exc)) from exc

    @property
    def is_real(self) -> bool:
        return self.alpha.is_real and self.beta.is_real


PRESETS: dict[str, tuple[str, str]] = {
    "chevron": ("1", "0"),
    "hat": ("sqrt3", "1"),
    "turtle": ("1", "sqrt3"),
    "comet": ("0", "1"),
    "spectre": ("1", "1"),
}


def preset(name: str) -> HatParams:
    try:
        a, b = PRESETS[name.lower()]
    except KeyError:
        raise HatParameterError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None
    return HatParams.parse(a, b, name.lower())


def hat_return_generators(p: HatParams) -> list[FormalComplex]:
    one_xi = ONE + XI
    g1 = complex_mul(p.alpha + complex_mul(I, p.beta), one_xi)
    g3 = complex_mul(complex_mul(I, p.beta).scale(2), one_xi)
    return [g1, complex_mul(g1, XI), g3, complex_mul(g3, XI)]


def generator_matrix(p: HatParams) -> RatMatrix:
    """4 x 8 rational matrix: real then imaginary coefficients of each generator."""
    return RatMatrix.from_rows([g.real_coeffs() + g.imag_coeffs() for g in hat_return_generators(p)])


def hat_rank(p: HatParams) -> int:
    return rank_q(generator_matrix(p))


def _proportional(u: tuple[Fraction, ...], v: tuple[Fraction, ...]) -> Fraction | None:
    """``q`` with ``u == q * v`` if one exists (``v`` nonzero)."""
    q: Fraction | None = None
    for a, b in zip(u, v):
        if b == 0:
            if a != 0:
                return None
            continue
        r = a / b
        if q is None:
            q = r
        elif q != r:
            return None
    return q


def criterion_value(p: HatParams) -> Fraction | None:
    """``β√3/α`` when it is rational, else ``None``."""
    if not p.is_real:
        raise HatParameterError("the closed-form criterion needs real alpha and beta")
    if p.alpha.is_zero:
        raise HatParameterError("alpha = 0: the criterion is not a ratio; the rank is 2")
    b_sqrt3 = complex_mul(p.beta, FormalComplex.of(sqrt3=1))
    return _proportional(b_sqrt3.real_coeffs(), p.alpha.real_coeffs())


def hat_is_rational_case(p: HatParams) -> bool:
    return criterion_value(p) is not None


def closed_form_rank(p: HatParams) -> int:
    if p.alpha.is_zero:
        return 2
    return 2 if hat_is_rational_case(p) else 4


@dataclass(frozen=True, slots=True)
class HatReport:
    params: HatParams
    rank: int
    generators: tuple[FormalComplex, ...]
    criterion: Fraction | None
    closed_form: int | None

    def to_dict(self) -> dict[str, Any]:
        crit = None if self.criterion is None else str(self.criterion)
        return {
            "name": self.params.name,
            "alpha": str(self.params.alpha),
            "beta": str(self.params.beta),
            "rank": self.rank,
            "generators": [str(g) for g in self.generators],
            "criterion": crit,
            "closed_form_rank": self.closed_form,
        }


def analyze(p: HatParams) -> HatReport:
    rank = hat_rank(p)
    crit: Fraction | None = None
    closed: int | None = None
    if p.is_real:
        closed = closed_form_rank(p)
        if not p.alpha.is_zero:
            crit = criterion_value(p)
    return HatReport(p, rank, tuple(hat_return_generators(p)), crit, closed)
