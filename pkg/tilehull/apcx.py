"""The one-dimensional Anderson-Putnam complex of a collared substitution.

The complex is a graph with one oriented edge per collared letter. The end of
``x`` is glued to the start of ``y`` whenever ``xy`` is a legal collared word.
Cycles are recorded as integer edge vectors, with a fundamental cycle for each
edge outside a spanning forest. A cycle's coordinates are its coefficients on
those non-tree edges.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from loguru import logger
from sympy import Poly, Symbol

from tilehull.errors import VerificationError
from tilehull.exactlin import RatMatrix, characteristic_polynomial, eventual_rank, rank_q
from tilehull.subst1d import CollaredAlphabet, Substitution, collar, legal_words

_LAMBDA = Symbol("x")


class _DisjointSet:
    def __init__(self, n: int) -> None:
        self._parent = list(range(n))

    def find(self, a: int) -> int:
        root = a
        while self._parent[root] != root:
            root = self._parent[root]
        while self._parent[a] != root:
            self._parent[a], a = root, self._parent[a]
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self._parent[max(ra, rb)] = min(ra, rb)


@dataclass(frozen=True, slots=True)
class APGraph:
    collared: CollaredAlphabet
    vertex_count: int
    sources: tuple[int, ...]
    targets: tuple[int, ...]
    edge_subst: tuple[tuple[int, ...], ...]
    tree_edges: frozenset[int]
    non_tree: tuple[int, ...]
    cycle_basis: tuple[tuple[int, ...], ...]
    components: int

    @property
    def edge_count(self) -> int:
        return len(self.sources)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(c.label for c in self.collared.letters)

    def boundary(self, chain: Sequence[int | Fraction]) -> tuple[Fraction, ...]:
        out = [Fraction(0)] * self.vertex_count
        for e, c in enumerate(chain):
            if c:
                out[self.targets[e]] += c
                out[self.sources[e]] -= c
        return tuple(out)

    def is_cycle(self, chain: Sequence[int | Fraction]) -> bool:
        return not any(self.boundary(chain))

    def coordinates(self, cycle: Sequence[int | Fraction]) -> tuple[Fraction, ...]:
        """Coefficients of ``cycle`` in ``cycle_basis``."""
        return tuple(Fraction(cycle[e]) for e in self.non_tree)

    def cycle_from_coordinates(self, coords: Sequence[int | Fraction]) -> tuple[Fraction, ...]:
        out = [Fraction(0)] * self.edge_count
        for c, z in zip(coords, self.cycle_basis):
            if c:
                for e, x in enumerate(z):
                    out[e] += c * x
        return tuple(out)


@dataclass(frozen=True, slots=True)
class InducedMap:
    """Substitution action on the cycle space, in ``cycle_basis`` coordinates."""

    graph: APGraph
    matrix: RatMatrix

    @property
    def size(self) -> int:
        return self.matrix.rows


def _legal_pairs(c: CollaredAlphabet) -> list[tuple[int, int]]:
    r = c.radius
    index = {letter.context: i for i, letter in enumerate(c.letters)}
    pairs = []
    for w in sorted(legal_words(c.base, 2 * r + 2)):
        pairs.append((index[w[:2 * r + 1]], index[w[1:]]))
    return pairs


def build_ap(c: CollaredAlphabet) -> APGraph:
    n = len(c.letters)
    # endpoint 2e is the start of edge e, 2e + 1 its end
    ds = _DisjointSet(2 * n)
    for x, y in _legal_pairs(c):
        ds.union(2 * x + 1, 2 * y)
    roots: dict[int, int] = {}
    for p in range(2 * n):
        roots.setdefault(ds.find(p), len(roots))
    sources = tuple(roots[ds.find(2 * e)] for e in range(n))
    targets = tuple(roots[ds.find(2 * e + 1)] for e in range(n))
    v = len(roots)

    code_index = {letter.code: i for i, letter in enumerate(c.letters)}
    edge_subst = tuple(tuple(code_index[ch] for ch in c.collared_rule(letter.code)) for letter in c.letters)

    tree, chains, components = _spanning_forest(v, sources, targets)
    non_tree = tuple(e for e in range(n) if e not in tree)
    basis = []
    for f in non_tree:
        z = [0] * n
        z[f] += 1
        for e, x in enumerate(chains[sources[f]]):
            z[e] += x
        for e, x in enumerate(chains[targets[f]]):
            z[e] -= x
        basis.append(tuple(z))
    g = APGraph(c, v, sources, targets, edge_subst, frozenset(tree), non_tree, tuple(basis), components)
    logger.debug("AP graph of {}: V={} E={} C={} rank={}", c.substitution.name, v, n, components, len(basis))
    return g


def _spanning_forest(v: int, sources: Sequence[int], targets: Sequence[int]
                     ) -> tuple[set[int], list[list[int]], int]:
    """Tree edges, root-to-vertex tree chains and component count (BFS)."""
    n = len(sources)
    incident: list[list[int]] = [[] for _ in range(v)]
    for e in range(n):
        incident[sources[e]].append(e)
        if targets[e] != sources[e]:
            incident[targets[e]].append(e)
    chains: list[list[int] | None] = [None] * v
    tree: set[int] = set()
    components = 0
    for root in range(v):
        if chains[root] is not None:
            continue
        components += 1
        chains[root] = [0] * n
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for e in incident[u]:
                other, sign = (targets[e], 1) if sources[e] == u else (sources[e], -1)
                if chains[other] is not None:
                    continue
                chain = list(chains[u])  # type: ignore[arg-type]
                chain[e] += sign
                chains[other] = chain
                tree.add(e)
                queue.append(other)
    return tree, chains, components  # type: ignore[return-value]


def cycle_rank(g: APGraph) -> int:
    return g.edge_count - g.vertex_count + g.components


def vertex_map(g: APGraph) -> dict[int, int]:
    """The map on vertex classes induced by the substitution.

    A vertex is sent to the start of the image of any edge leaving it, or the
    end of the image of any edge entering it; all choices must agree.
    """
    out: dict[int, int] = {}
    for e, path in enumerate(g.edge_subst):
        for v, image in ((g.sources[e], g.sources[path[0]]), (g.targets[e], g.targets[path[-1]])):
            seen = out.setdefault(v, image)
            if seen != image:
                raise VerificationError(
                    f"vertex {v} maps to both {seen} and {image}",
                    report={"vertex": v, "images": [seen, image]},
                )
    return out


def _check_paths(g: APGraph) -> None:
    for e, path in enumerate(g.edge_subst):
        for a, b in zip(path, path[1:]):
            if g.targets[a] != g.sources[b]:
                raise VerificationError(
                    f"image of edge {g.labels[e]} is not a path at {g.labels[a]}{g.labels[b]}",
                    report={"edge": g.labels[e]},
                )


def induced_map(g: APGraph) -> InducedMap:
    _check_paths(g)
    vertex_map(g)
    ab = g.collared.substitution.abelianization
    columns = []
    for j, z in enumerate(g.cycle_basis):
        image = ab.apply(z)
        if not g.is_cycle(image):
            raise VerificationError(
                f"image of basis cycle {j} is not a cycle",
                report={"cycle": list(z), "image": [str(x) for x in image]},
            )
        columns.append(g.coordinates(image))
    m = RatMatrix.from_columns(columns, rows=len(g.cycle_basis))
    return InducedMap(g, m)


def ap_for(s: Substitution, radius: int) -> tuple[APGraph, InducedMap]:
    g = build_ap(collar(s, radius))
    return g, induced_map(g)


def cech_h1_rank(s: Substitution, radius: int) -> int:
    """Q-rank of the direct limit of the induced map on the cycle space."""
    _, m = ap_for(s, radius)
    return eventual_rank(m.matrix)


@dataclass(frozen=True, slots=True)
class H1Stability:
    radius: int
    rank: int
    next_rank: int

    @property
    def stable(self) -> bool:
        return self.rank == self.next_rank


def stable_h1_rank(s: Substitution, radius: int) -> H1Stability:
    return H1Stability(radius, cech_h1_rank(s, radius), cech_h1_rank(s, radius + 1))


def charpoly(m: InducedMap) -> tuple[Fraction, ...]:
    return characteristic_polynomial(m.matrix)


def charpoly_factors(m: InducedMap) -> list[tuple[tuple[int, ...], int]]:
    """Irreducible factors of the characteristic polynomial over Q with multiplicities.

    Factors are monic integer coefficient tuples, leading coefficient first,
    sorted by degree then coefficients.
    """
    coeffs = characteristic_polynomial(m.matrix)
    if len(coeffs) == 1:
        return []
    _, factors = Poly([int(c) for c in coeffs], _LAMBDA).factor_list()
    out = [(tuple(int(c) for c in f.all_coeffs()), k) for f, k in factors]
    return sorted(out, key=lambda item: (len(item[0]), item[0]))


def nonzero_spectrum_rank(m: InducedMap, eigenvalues: Sequence[int]) -> int:
    """Rank of ``M^n`` restricted by ``prod (M - λ I)``; zero when the nonzero spectrum is exhausted."""
    mat = m.matrix
    n = mat.rows
    p = mat.power(n) if n else mat
    for lam in eigenvalues:
        p = p @ (mat - RatMatrix.identity(n).scale(lam))
    return rank_q(p)


def export_edges(g: APGraph) -> str:
    """One line per edge: ``source target label``."""
    return "\n".join(f"{s} {t} {label}" for s, t, label in zip(g.sources, g.targets, g.labels))


def export_matrix(m: InducedMap) -> str:
    return "\n".join(" ".join(str(x) for x in row) for row in m.matrix.int_rows())
