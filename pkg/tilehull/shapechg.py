"""Shape changes of one-dimensional tilings.

A shape cochain gives every AP edge (collared letter) a formal length. In one
dimension there are no 2-cells, so every such cochain is closed and its class
is determined by its values on the cycle basis.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from loguru import logger

from tilehull.apcx import APGraph, InducedMap, ap_for, cycle_rank
from tilehull.errors import ShapeError, UncertifiedError
from tilehull.exactlin import (
    RatMatrix,
    column_space_basis,
    determinant,
    eventual_rank,
    extend_to_basis,
    inverse,
)
from tilehull.formal_num import FormalBasis, FormalReal, rank_of_values
from tilehull.retmod import (
    LengthAssignment,
    TheoremReport,
    finish_report,
    return_module,
    unit_lengths,
)
from tilehull.settings import ScanSettings
from tilehull.subst1d import Substitution, legal_words

ShapeCochain = LengthAssignment


def _edge_cochain(g: APGraph, values: Sequence[FormalReal]) -> ShapeCochain:
    return LengthAssignment(g.collared.codes, tuple(values))


def _common(*cochains: ShapeCochain) -> list[ShapeCochain]:
    basis = cochains[0].basis
    for L in cochains[1:]:
        basis = basis.extend(L.basis.symbols)
    return [L.rebase(basis) for L in cochains]


def coboundary(g: APGraph, f: Sequence[FormalReal] | Mapping[int, FormalReal],
               basis: FormalBasis | None = None) -> ShapeCochain:
    """``e -> f(target(e)) - f(source(e))``; vertices missing from a mapping count as 0."""
    if isinstance(f, Mapping):
        vals = dict(f)
    else:
        if len(f) != g.vertex_count:
            raise ValueError(f"need one value per vertex ({g.vertex_count}), got {len(f)}")
        vals = dict(enumerate(f))
    if basis is None:
        basis = next(iter(vals.values())).basis if vals else FormalBasis.of()
    zero = basis.zero()
    return _edge_cochain(g, [vals.get(t, zero) - vals.get(s, zero) for s, t in zip(g.sources, g.targets)])


def evaluate_on_cycles(L: ShapeCochain, g: APGraph) -> list[FormalReal]:
    return [L(z) for z in g.cycle_basis]


def cohomologous(L1: ShapeCochain, L2: ShapeCochain, g: APGraph) -> bool:
    a, b = _common(L1, L2)
    diff = _edge_cochain(g, [x - y for x, y in zip(a.lengths, b.lengths)])
    return all(v.is_zero for v in evaluate_on_cycles(diff, g))


def eventual_image(m: InducedMap) -> list[tuple[Fraction, ...]]:
    """Basis of ``image(M^dim)`` in cycle-basis coordinates."""
    if m.size == 0:
        return []
    return column_space_basis(m.matrix.power(m.size))


def predicted_limit_rank(L: ShapeCochain, g: APGraph, m: InducedMap) -> int:
    """Rank of the values of ``L`` on the eventual image of the induced map."""
    chains = [g.cycle_from_coordinates(v) for v in eventual_image(m)]
    return rank_of_values([L(z) for z in chains])


@dataclass(frozen=True, slots=True)
class CocycleBasis:
    """Integer edge functionals whose classes span H^1 of the AP graph.

    The first ``ell`` are dual to a basis of the eventual image, the rest to
    its completion.
    """

    functionals: tuple[tuple[int, ...], ...]
    ell: int

    def evaluation_matrix(self, g: APGraph) -> RatMatrix:
        return RatMatrix.from_rows([[sum(a * x for a, x in zip(f, z)) for z in g.cycle_basis]
                                    for f in self.functionals], cols=len(g.cycle_basis))


def _clear(row: Sequence[Fraction]) -> tuple[int, ...]:
    den = math.lcm(*(x.denominator for x in row)) if row else 1
    return tuple(int(x * den) for x in row)


def cocycle_basis(g: APGraph, m: InducedMap) -> CocycleBasis:
    k = len(g.cycle_basis)
    image = eventual_image(m)
    cols = extend_to_basis(image, k)
    dual = inverse(RatMatrix.from_columns(cols, rows=k)) if k else RatMatrix.zeros(0, 0)
    functionals = []
    for i in range(k):
        edge_row = [Fraction(0)] * g.edge_count
        for j, e in enumerate(g.non_tree):
            edge_row[e] = dual[i, j]
        functionals.append(_clear(edge_row))
    return CocycleBasis(tuple(functionals), len(image))


def synth_generic(g: APGraph, base: ShapeCochain, ell: int, m: InducedMap, prefix: str = "tau") -> ShapeCochain:
    """``base + sum(alpha_i * tau_i)`` with fresh symbols over the eventual image.

    ``base`` must be strictly positive and rational.
    """
    if not base.is_rational or any(v.rational_value() <= 0 for v in base.lengths):
        raise ShapeError("base shape must be strictly positive and rational")
    rank = eventual_rank(m.matrix)
    if ell < 0 or ell > rank:
        raise ShapeError(f"ell={ell} exceeds the eventual rank {rank} of the induced map")
    if ell == 0:
        return base
    names = [f"{prefix}{i + 1}" for i in range(ell)]
    basis = base.basis.extend(names)
    cb = cocycle_basis(g, m)
    values = []
    for e, v in enumerate(base.rebase(basis).lengths):
        for i, name in enumerate(names):
            c = cb.functionals[i][e]
            if c:
                v = v + basis.symbol(name) * c
        values.append(v)
    return _edge_cochain(g, values)


def reparametrize(L: ShapeCochain, mapping: Mapping[str, FormalReal]) -> ShapeCochain:
    """Substitute each symbol in ``mapping`` by a formal combination of other symbols."""
    keep = [s for s in L.basis.symbols if s not in mapping]
    extra = [s for v in mapping.values() for s in v.basis.symbols]
    basis = FormalBasis.of(*dict.fromkeys(keep + extra))
    out = []
    for v in L.lengths:
        acc = basis.zero()
        for name, c in zip(v.basis.symbols, v.coeffs):
            if not c:
                continue
            if name in mapping:
                term = mapping[name].rebase(basis)
            elif name == "1":
                term = basis.rational(1)
            else:
                term = basis.symbol(name)
            acc = acc + term * c
        out.append(acc)
    return LengthAssignment(L.alphabet, tuple(out))


@dataclass(frozen=True, slots=True)
class SweepTrial:
    matrix: RatMatrix
    rank: int
    singular: bool


def genericity_sweep(g: APGraph, m: InducedMap, L: ShapeCochain, ell: int, trials: int = 20,
                     seed: int = 0, magnitude: int = 10**6, prefix: str = "tau") -> list[SweepTrial]:
    """Send ``tau_i`` to ``sum_j Q_ij u_j`` for random rational ``Q`` and recompute the rank.

    A trial can only fall below ``ell`` when ``det Q == 0``.
    """
    rng = random.Random(seed)
    names = [f"{prefix}{i + 1}" for i in range(ell)]
    fresh = [f"u{j + 1}" for j in range(ell)]
    ubasis = FormalBasis.of(*fresh)
    out = []
    for _ in range(trials):
        q = RatMatrix.from_rows([[Fraction(rng.randint(-magnitude, magnitude), rng.randint(1, magnitude))
                                  for _ in range(ell)] for _ in range(ell)])
        mapping = {}
        for i, name in enumerate(names):
            v = ubasis.zero()
            for j, u in enumerate(fresh):
                v = v + ubasis.symbol(u) * q[i, j]
            mapping[name] = v
        rank = predicted_limit_rank(reparametrize(L, mapping), g, m)
        out.append(SweepTrial(q, rank, determinant(q) == 0))
    logger.debug("genericity sweep: {} trials, ranks {}", trials, sorted({t.rank for t in out}))
    return out


def check_theorem2(s: Substitution, radius: int, ell: int | None = None, patch_len_cap: int = 10,
                   scan: ScanSettings | None = None) -> TheoremReport:
    """Every legal collared patch up to ``patch_len_cap`` has rank at least ``ell`` under a generic shape."""
    g, m = ap_for(s, radius)
    rank = eventual_rank(m.matrix)
    ell = rank if ell is None else ell
    L = synth_generic(g, unit_lengths(g.collared.codes), ell, m)
    sub = g.collared.substitution
    ranks: dict[str, int] = {}
    failures: list[str] = []
    uncertified: list[str] = []
    for n in range(1, patch_len_cap + 1):
        for p in sorted(legal_words(sub, n)):
            rep = return_module(sub, p, L, scan)
            label = sub.label_word(p)
            ranks[label] = rep.rank
            if not rep.certified:
                uncertified.append(label)
            if rep.rank < ell:
                failures.append(label)
    single = [ranks[sub.label_word(x)] for x in sub.alphabet]
    report = TheoremReport(
        "theorem2", s.name, radius, not failures, cech_rank=rank,
        lengths=L.to_dict(sub.labels or None),
        detail={
            "ell": ell,
            "patch_len_cap": patch_len_cap,
            "patches": len(ranks),
            "min_rank": min(ranks.values()) if ranks else None,
            "max_single_tile_rank": max(single),
            "single_tile_bound": cycle_rank(g),
            "failures": failures,
            "uncertified": uncertified,
        },
    )
    report = finish_report(report)
    if uncertified:
        raise UncertifiedError(f"{len(uncertified)} patches did not stabilize", report=report)
    return report
