"""Arrow version of the chair tiling as a 2x2 block substitution on Z^2.

Regions are ``numpy`` integer arrays indexing into ``LETTERS``; row 0 is the
northern edge. A square's arrow points at one of its four corners, and the
chair tiles are recovered by gluing the three squares around every vertex with
three incoming arrows.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Mapping, Sequence

import numpy as np
from loguru import logger
from numpy.lib.stride_tricks import sliding_window_view

from tilehull.errors import ChairRuleError, IllegalPatchError
from tilehull.exactlin import LatticeZn, RatMatrix, lattice_from_generators

LETTERS: tuple[str, ...] = ("NE", "NW", "SW", "SE")
QUADRANTS: tuple[str, ...] = ("NW", "NE", "SW", "SE")
# (row, col) of each quadrant inside a 2x2 block
QUADRANT_POS: dict[str, tuple[int, int]] = {"NW": (0, 0), "NE": (0, 1), "SW": (1, 0), "SE": (1, 1)}
# corner an arrow points at, relative to the square's north-west corner
TARGET: dict[str, tuple[int, int]] = {"NE": (0, 1), "NW": (0, 0), "SW": (1, 0), "SE": (1, 1)}
ROTATE: dict[str, str] = {"NE": "NW", "NW": "SW", "SW": "SE", "SE": "NE"}
GLYPHS: dict[str, str] = {"NE": "↗", "NW": "↖", "SW": "↙", "SE": "↘"}


@dataclass(frozen=True)
class BlockSubstitution:
    """``rule[letter][quadrant] -> letter`` for the four arrows."""

    rule: Mapping[str, Mapping[str, str]]
    name: str = "chair"

    def __post_init__(self) -> None:
        problems = _shape_problems(self.rule)
        if problems:
            raise ChairRuleError("malformed block rule", diagnostics=problems)

    def table(self, quadrant: str) -> np.ndarray:
        return np.array([LETTERS.index(self.rule[x][quadrant]) for x in LETTERS], dtype=np.int8)

    def block(self, letter: str) -> np.ndarray:
        out = np.zeros((2, 2), dtype=np.int8)
        for q, (i, j) in QUADRANT_POS.items():
            out[i, j] = LETTERS.index(self.rule[letter][q])
        return out

    @property
    def abelianization(self) -> RatMatrix:
        return RatMatrix.from_rows([[sum(1 for q in QUADRANTS if self.rule[y][q] == x) for y in LETTERS]
                                    for x in LETTERS])

    def to_dict(self) -> dict[str, Any]:
        return {"name": self.name, "letters": list(LETTERS),
                "rule": {x: {q: self.rule[x][q] for q in QUADRANTS} for x in LETTERS}}


def _shape_problems(rule: Mapping[str, Mapping[str, str]]) -> list[str]:
    problems = []
    if set(rule) != set(LETTERS):
        problems.append(f"rule must define exactly {list(LETTERS)}, got {sorted(rule)}")
        return problems
    for x in LETTERS:
        block = rule[x]
        if set(block) != set(QUADRANTS):
            problems.append(f"{x}: quadrants must be {list(QUADRANTS)}, got {sorted(block)}")
            continue
        for q in QUADRANTS:
            if block[q] not in LETTERS:
                problems.append(f"{x}.{q}: unknown arrow {block[q]!r}")
    return problems


def check_rotation_equivariance(rule: Mapping[str, Mapping[str, str]]) -> list[str]:
    """Diagnostics for every place where rotating input and output by 90 degrees disagrees."""
    out = []
    for x in LETTERS:
        for q in QUADRANTS:
            want = ROTATE[rule[x][q]]
            got = rule[ROTATE[x]][ROTATE[q]]
            if got != want:
                out.append(f"rotation: rule[{ROTATE[x]}][{ROTATE[q]}] = {got}, expected {want} "
                           f"(rotated rule[{x}][{q}] = {rule[x][q]})")
    return out


def is_primitive(b: BlockSubstitution) -> bool:
    m = b.abelianization
    p = m
    for _ in range(10):
        if all(x > 0 for x in p.entries):
            return True
        p = p @ m
    return False


def validate_rule(b: BlockSubstitution, region_order: int = 4) -> None:
    """Raise ``ChairRuleError`` unless the rule is equivariant, primitive and chair-consistent."""
    problems = check_rotation_equivariance(b.rule)
    if not is_primitive(b):
        problems.append("rule is not primitive")
    if not problems:
        report = chair_consistency(generate_region(b, "NE", region_order))
        problems.extend(report.diagnostics())
    if problems:
        raise ChairRuleError(f"block rule {b.name!r} failed validation", diagnostics=problems)


def block_substitution_from_config(data: Mapping[str, Any], validate: bool = True) -> BlockSubstitution:
    letters = data.get("letters", list(LETTERS))
    if sorted(letters) != sorted(LETTERS):
        raise ChairRuleError("bad letter set", diagnostics=[f"letters must be {list(LETTERS)}, got {letters}"])
    rule = data.get("rule")
    if not isinstance(rule, Mapping):
        raise ChairRuleError("missing rule", diagnostics=["'rule' must map each arrow to four quadrants"])
    b = BlockSubstitution({x: dict(v) for x, v in rule.items()}, name=str(data.get("name", "chair")))
    if validate:
        validate_rule(b)
    return b


# ---------------------------------------------------------------------------
# Regions
# ---------------------------------------------------------------------------


def generate_region(b: BlockSubstitution, seed: str, n: int) -> np.ndarray:
    """``σ^n(seed)`` as a ``2^n x 2^n`` array of letter indices."""
    region = np.array([[LETTERS.index(seed)]], dtype=np.int8)
    tables = {q: b.table(q) for q in QUADRANTS}
    for _ in range(n):
        h, w = region.shape
        nxt = np.empty((2 * h, 2 * w), dtype=np.int8)
        for q, (i, j) in QUADRANT_POS.items():
            nxt[i::2, j::2] = tables[q][region]
        region = nxt
    return region


def export_region(region: np.ndarray, glyphs: Mapping[str, str] = GLYPHS) -> str:
    chars = np.array([glyphs[x] for x in LETTERS])
    return "\n".join("".join(row) for row in chars[region])


@dataclass(frozen=True, slots=True)
class ConsistencyReport:
    shape: tuple[int, int]
    triominoes: int
    bad_vertices: tuple[tuple[int, int, int], ...]
    uncovered: tuple[tuple[int, int], ...]

    @property
    def ok(self) -> bool:
        return not self.bad_vertices and not self.uncovered

    def diagnostics(self) -> list[str]:
        out = [f"vertex ({i}, {j}) has {k} incoming arrows" for i, j, k in self.bad_vertices[:20]]
        out += [f"square ({i}, {j}) is not part of a chair" for i, j in self.uncovered[:20]]
        return out


def _targets(region: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    di = np.array([TARGET[x][0] for x in LETTERS])
    dj = np.array([TARGET[x][1] for x in LETTERS])
    rows, cols = np.indices(region.shape)
    return rows + di[region], cols + dj[region]


def chair_consistency(region: np.ndarray) -> ConsistencyReport:
    """Glue the three squares at each vertex with three incoming arrows.

    Interior vertices must receive 0 or 3 arrows, and every square whose arrow
    hits an interior vertex must end up in a chair. Squares pointing at the
    region boundary are left out.
    """
    h, w = region.shape
    ti, tj = _targets(region)
    counts = np.zeros((h + 1, w + 1), dtype=np.int32)
    np.add.at(counts, (ti, tj), 1)
    interior = np.zeros_like(counts, dtype=bool)
    interior[1:h, 1:w] = True
    bad = np.argwhere(interior & (counts != 0) & (counts != 3))
    hits_interior = interior[ti, tj]
    covered = counts[ti, tj] == 3
    uncovered = np.argwhere(hits_interior & ~covered)
    return ConsistencyReport(
        (h, w),
        int(np.count_nonzero(interior & (counts == 3))),
        tuple((int(i), int(j), int(counts[i, j])) for i, j in bad),
        tuple((int(i), int(j)) for i, j in uncovered),
    )


# ---------------------------------------------------------------------------
# Patches and return lattices
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Patch2D:
    """Letters on a finite set of offsets, stored as a rectangle with a mask."""

    cells: np.ndarray
    mask: np.ndarray

    @classmethod
    def from_array(cls, arr: np.ndarray) -> "Patch2D":
        arr = np.asarray(arr, dtype=np.int8)
        if arr.ndim != 2 or arr.size == 0:
            raise ValueError("patch must be a nonempty 2D array")
        return cls(arr, np.ones(arr.shape, dtype=bool))

    @classmethod
    def from_cells(cls, cells: Mapping[tuple[int, int], str]) -> "Patch2D":
        if not cells:
            raise ValueError("empty patch")
        i0 = min(i for i, _ in cells)
        j0 = min(j for _, j in cells)
        h = max(i for i, _ in cells) - i0 + 1
        w = max(j for _, j in cells) - j0 + 1
        arr = np.zeros((h, w), dtype=np.int8)
        mask = np.zeros((h, w), dtype=bool)
        for (i, j), x in cells.items():
            arr[i - i0, j - j0] = LETTERS.index(x)
            mask[i - i0, j - j0] = True
        return cls(arr, mask)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[str]]) -> "Patch2D":
        return cls.from_array(np.array([[LETTERS.index(x) for x in r] for r in rows], dtype=np.int8))

    @property
    def shape(self) -> tuple[int, int]:
        return tuple(self.cells.shape)  # type: ignore[return-value]

    def describe(self) -> str:
        return "/".join(" ".join(LETTERS[x] if m else "." for x, m in zip(r, mr))
                        for r, mr in zip(self.cells, self.mask))


def occurrences_2d(region: np.ndarray, patch: Patch2D) -> np.ndarray:
    """``(row, col)`` of every placement of ``patch`` inside ``region``, row-major."""
    ph, pw = patch.shape
    if ph > region.shape[0] or pw > region.shape[1]:
        return np.zeros((0, 2), dtype=np.int64)
    windows = sliding_window_view(region, (ph, pw))
    hit = np.all((windows == patch.cells) | ~patch.mask, axis=(2, 3))
    return np.argwhere(hit)


def _lattice(positions: np.ndarray) -> LatticeZn:
    if len(positions) == 0:
        return lattice_from_generators(2, [])
    first = positions[0]
    return lattice_from_generators(2, [(int(p[0] - first[0]), int(p[1] - first[1])) for p in positions[1:]])


@dataclass(frozen=True, slots=True)
class ReturnLatticeReport:
    patch: str
    order: int
    occurrences: int
    lattice: LatticeZn
    next_lattice: LatticeZn
    stabilized: bool

    @property
    def rank(self) -> int:
        return self.lattice.rank

    @property
    def index(self) -> int | None:
        return self.lattice.index

    def to_dict(self) -> dict[str, Any]:
        return {"patch": self.patch, "order": self.order, "occurrences": self.occurrences,
                "lattice": self.lattice.to_dict(), "stabilized": self.stabilized}


def return_lattice(b: BlockSubstitution, patch: Patch2D, n: int, seed: str = "NE") -> ReturnLatticeReport:
    """Lattice spanned by differences of occurrence positions in ``σ^n(seed)``.

    The same computation at order ``n + 1`` gives the stabilization flag.
    """
    pos = occurrences_2d(generate_region(b, seed, n), patch)
    if len(pos) < 3:
        raise IllegalPatchError(f"patch occurs {len(pos)} times in the order-{n} region; need 3",
                                patch=patch.describe())
    lat = _lattice(pos)
    nxt = _lattice(occurrences_2d(generate_region(b, seed, n + 1), patch))
    logger.debug("chair patch {}: {} occurrences, index {}", patch.shape, len(pos), lat.index)
    return ReturnLatticeReport(patch.describe(), n, len(pos), lat, nxt, lat == nxt)


def supertile_patch_2d(b: BlockSubstitution, letter: str, k: int) -> Patch2D:
    return Patch2D.from_array(generate_region(b, letter, k))


def is_power_of_two(k: int | None) -> bool:
    return k is not None and k > 0 and k & (k - 1) == 0
