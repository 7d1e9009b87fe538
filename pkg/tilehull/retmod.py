"""Return words, return modules and the rank checks built on them.

Return vectors are kept as letter-count vectors; lengths enter only through a
``LengthAssignment`` applied afterwards, so one scan serves every assignment.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Any, Iterable, Mapping, Sequence

from loguru import logger

from tilehull.apcx import cech_h1_rank
from tilehull.contracts import LanguagePort
from tilehull.errors import (
    IllegalPatchError,
    ShapeError,
    StabilizationError,
    UncertifiedError,
    VerificationError,
)
from tilehull.exactlin import LatticeZn, lattice_from_generators
from tilehull.formal_num import (
    FormalBasis,
    FormalModule,
    FormalReal,
    format_formal,
    parse_formal,
    rank_of_values,
    span_module,
    specialize,
)
from tilehull.logging_service import log_report
from tilehull.settings import ScanSettings
from tilehull.subst1d import (
    CollaredAlphabet,
    SturmianLanguage,
    SturmianSpec,
    Substitution,
    SubstitutionLanguage,
    collar,
)


# ---------------------------------------------------------------------------
# Length assignments
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class LengthAssignment:
    """One formal length per letter, all over a shared basis."""

    alphabet: tuple[str, ...]
    lengths: tuple[FormalReal, ...]

    def __post_init__(self) -> None:
        if len(self.alphabet) != len(self.lengths):
            raise ValueError("one length per letter required")
        if self.lengths:
            basis = self.lengths[0].basis
            if any(v.basis != basis for v in self.lengths):
                raise ValueError("lengths must share one formal basis")

    @property
    def basis(self) -> FormalBasis:
        return self.lengths[0].basis if self.lengths else FormalBasis.of()

    def of(self, letter: str) -> FormalReal:
        return self.lengths[self.alphabet.index(letter)]

    def __call__(self, vec: Sequence[int | Fraction]) -> FormalReal:
        out = self.basis.zero()
        for c, v in zip(vec, self.lengths):
            if c:
                out = out + v * Fraction(c)
        return out

    def of_word(self, word: str) -> FormalReal:
        return self(tuple(word.count(a) for a in self.alphabet))

    @property
    def is_rational(self) -> bool:
        return all(v.is_rational for v in self.lengths)

    @property
    def is_fully_symbolic(self) -> bool:
        """Each letter carries its own fresh symbol and nothing else."""
        seen: set[str] = set()
        for v in self.lengths:
            sup = v.support()
            if len(sup) != 1 or sup[0] == "1" or sup[0] in seen:
                return False
            seen.add(sup[0])
        return True

    def specialize(self, assignment: Mapping[str, int | Fraction]) -> "LengthAssignment":
        out = LengthAssignment(self.alphabet, tuple(specialize(v, assignment) for v in self.lengths))
        if out.is_rational and any(v.rational_value() <= 0 for v in out.lengths):
            raise ShapeError(f"specialization {dict(assignment)} gives a non-positive tile length")
        return out

    def rebase(self, basis: FormalBasis) -> "LengthAssignment":
        return LengthAssignment(self.alphabet, tuple(v.rebase(basis) for v in self.lengths))

    def to_dict(self, labels: Sequence[str] | None = None) -> dict[str, str]:
        names = labels or self.alphabet
        return {n: format_formal(v) for n, v in zip(names, self.lengths)}


def unit_lengths(alphabet: Sequence[str], basis: FormalBasis | None = None) -> LengthAssignment:
    basis = basis or FormalBasis.of()
    return LengthAssignment(tuple(alphabet), tuple(basis.rational(1) for _ in alphabet))


def rational_lengths(alphabet: Sequence[str], values: Sequence[int | Fraction]) -> LengthAssignment:
    if any(Fraction(v) <= 0 for v in values):
        raise ShapeError("tile lengths must be positive")
    basis = FormalBasis.of()
    return LengthAssignment(tuple(alphabet), tuple(basis.rational(Fraction(v)) for v in values))


def symbolic_lengths(alphabet: Sequence[str], prefix: str = "t") -> LengthAssignment:
    """A fresh symbol ``t1, t2, ...`` for every letter."""
    names = [f"{prefix}{i + 1}" for i in range(len(alphabet))]
    basis = FormalBasis.of(*names)
    return LengthAssignment(tuple(alphabet), tuple(basis.symbol(n) for n in names))


def lengths_from_mapping(alphabet: Sequence[str], spec: Mapping[str, str],
                         labels: Sequence[str] | None = None) -> LengthAssignment:
    """Parse ``{letter-or-label: "3/2 + t1"}``; every letter needs an entry."""
    keys = list(labels) if labels else list(alphabet)
    missing = [k for k in keys if k not in spec]
    if missing:
        raise ValueError(f"no length given for {missing}")
    parsed = [parse_formal(spec[k]) for k in keys]
    names = [s for v in parsed for s in v.basis.symbols]
    basis = FormalBasis.of(*dict.fromkeys(names))
    return LengthAssignment(tuple(alphabet), tuple(v.rebase(basis) for v in parsed))


def pullback(lengths: LengthAssignment, collared: CollaredAlphabet) -> LengthAssignment:
    """Give every collared letter the length of its core letter."""
    return LengthAssignment(collared.codes, tuple(lengths.of(c.core) for c in collared.letters))


# ---------------------------------------------------------------------------
# Scanning
# ---------------------------------------------------------------------------


def as_language(source: Substitution | SturmianSpec | LanguagePort) -> LanguagePort:
    if isinstance(source, Substitution):
        return SubstitutionLanguage(source)
    if isinstance(source, SturmianSpec):
        return SturmianLanguage(source)
    if isinstance(source, LanguagePort):
        return source
    raise TypeError(f"cannot read a language from {type(source).__name__}")


def occurrences(text: str, patch: str, end: int | None = None) -> list[int]:
    """Start indices of ``patch`` in ``text`` (overlaps included), ascending."""
    if not patch or len(patch) > len(text):
        return []
    pattern = re.compile(f"(?={re.escape(patch)})")
    stop = len(text) - len(patch) + 1 if end is None else min(end, len(text) - len(patch) + 1)
    return [m.start() for m in pattern.finditer(text) if m.start() < stop]


@dataclass(frozen=True, slots=True)
class Certificate:
    scan_length: int
    windows: tuple[int, ...]
    stabilized: bool

    def to_dict(self) -> dict[str, Any]:
        return {"scan_length": self.scan_length, "windows": list(self.windows), "stabilized": self.stabilized}


@dataclass(frozen=True, slots=True)
class ReturnScan:
    """Language-level data of a patch, independent of tile lengths."""

    language: str
    alphabet: tuple[str, ...]
    patch: str
    return_words: tuple[str, ...]
    abelian_vectors: tuple[tuple[int, ...], ...]
    module: LatticeZn
    certificate: Certificate

    @property
    def certified(self) -> bool:
        return self.certificate.stabilized


def _start_window(patch: str, scan: ScanSettings) -> int:
    return min(scan.max_scan, max(scan.initial_window, 32 * len(patch)))


@lru_cache(maxsize=4096)
def _scan(lang: LanguagePort, patch: str, initial_window: int, max_scan: int, stable_windows: int) -> ReturnScan:
    scan = ScanSettings(initial_window, max_scan, stable_windows)
    window = _start_window(patch, scan)
    history: list[frozenset[str]] = []
    windows: list[int] = []
    stabilized = False
    while True:
        text = lang.prefix(window)
        pos = occurrences(text, patch)
        words = frozenset(text[a:b] for a, b in zip(pos, pos[1:]))
        history.append(words)
        windows.append(window)
        logger.debug("{} {!r}: window {} -> {} occurrences, {} return words",
                     lang.name, patch, window, len(pos), len(words))
        tail = history[-stable_windows:]
        if len(tail) == stable_windows and words and all(t == words for t in tail):
            stabilized = True
            break
        if window >= max_scan:
            break
        window = min(2 * window, max_scan)
    found = sorted(history[-1], key=lambda w: (len(w), w))
    vectors = sorted({tuple(w.count(a) for a in lang.alphabet) for w in found})
    module = lattice_from_generators(len(lang.alphabet), vectors)
    if not stabilized:
        logger.warning("return words of {!r} in {} did not stabilize below {} letters",
                       patch, lang.name, max_scan)
    return ReturnScan(lang.name, tuple(lang.alphabet), patch, tuple(found), tuple(vectors), module,
                      Certificate(windows[-1], tuple(windows), stabilized))


def return_words(source: Substitution | SturmianSpec | LanguagePort, patch: str,
                 scan: ScanSettings | None = None) -> ReturnScan:
    """Collect the return words of ``patch`` over doubling prefixes until they settle."""
    lang = as_language(source)
    if not patch:
        raise IllegalPatchError("empty patch", patch=patch)
    if not lang.is_legal(patch):
        raise IllegalPatchError(f"{patch!r} does not occur in {lang.name}", patch=patch)
    scan = scan or ScanSettings()
    return _scan(lang, patch, scan.initial_window, scan.max_scan, scan.stable_windows)


@dataclass(frozen=True, slots=True)
class ReturnModuleReport:
    scan: ReturnScan
    lengths: LengthAssignment
    values: tuple[FormalReal, ...]
    values_module: FormalModule
    rank: int
    patch_label: str = ""

    @property
    def patch(self) -> str:
        return self.scan.patch

    @property
    def return_words(self) -> tuple[str, ...]:
        return self.scan.return_words

    @property
    def abelian_vectors(self) -> tuple[tuple[int, ...], ...]:
        return self.scan.abelian_vectors

    @property
    def module(self) -> LatticeZn:
        return self.scan.module

    @property
    def certificate(self) -> Certificate:
        return self.scan.certificate

    @property
    def certified(self) -> bool:
        return self.scan.certified

    def to_dict(self) -> dict[str, Any]:
        return {
            "language": self.scan.language,
            "patch": self.patch_label or self.patch,
            "return_words": list(self.return_words),
            "abelian_vectors": [list(v) for v in self.abelian_vectors],
            "module": self.module.to_dict(),
            "values": [format_formal(v) for v in self.values],
            "values_module": self.values_module.describe(),
            "rank": self.rank,
            "certificate": self.certificate.to_dict(),
        }


def _check_alphabet(lang: LanguagePort, lengths: LengthAssignment) -> None:
    if tuple(lengths.alphabet) != tuple(lang.alphabet):
        raise ValueError(f"length assignment over {lengths.alphabet} does not fit alphabet {lang.alphabet}")


def return_module(source: Substitution | SturmianSpec | LanguagePort, patch: str, lengths: LengthAssignment,
                  scan: ScanSettings | None = None) -> ReturnModuleReport:
    lang = as_language(source)
    _check_alphabet(lang, lengths)
    sc = return_words(lang, patch, scan)
    values = tuple(lengths.of_word(w) for w in sc.return_words)
    gens = [lengths(v) for v in sc.module.basis]
    label = lang.label_word(patch) if hasattr(lang, "label_word") else patch
    return ReturnModuleReport(sc, lengths, values, span_module(values, lengths.basis), rank_of_values(gens),
                              patch_label=label if label != patch else "")


def ret_rank(source: Substitution | SturmianSpec | LanguagePort, patch: str, lengths: LengthAssignment,
             scan: ScanSettings | None = None) -> int:
    return return_module(source, patch, lengths, scan).rank


# ---------------------------------------------------------------------------
# Large patches
# ---------------------------------------------------------------------------


def supertile_patch(s: Substitution, letter: str, n: int) -> str:
    w = letter
    for _ in range(n):
        w = s.apply(w)
    return w


def _orders(orders: range | tuple[int, int] | Iterable[int]) -> list[int]:
    if isinstance(orders, tuple) and len(orders) == 2:
        return list(range(orders[0], orders[1] + 1))
    return sorted(set(orders))


def limit_rank_profile(s: Substitution, lengths: LengthAssignment, orders: range | tuple[int, int],
                       scan: ScanSettings | None = None) -> dict[int, int]:
    """Per supertile order, the largest return-module rank over the order-n supertiles.

    Raises ``UncertifiedError`` when any scan did not stabilize.
    """
    out: dict[int, int] = {}
    for n in _orders(orders):
        best = 0
        for x in s.alphabet:
            rep = return_module(s, supertile_patch(s, x, n), lengths, scan)
            if not rep.certified:
                raise UncertifiedError(f"order-{n} supertile of {s.label(x)} is uncertified", report=rep)
            best = max(best, rep.rank)
        out[n] = best
    return out


def stabilized_rank(ranks: Mapping[int, int]) -> int:
    """The rank at the top order, provided the top two orders agree."""
    top = sorted(ranks)[-2:]
    if not top:
        raise ValueError("no supertile orders given")
    if len(top) == 2 and ranks[top[0]] != ranks[top[1]]:
        raise StabilizationError(f"ranks {dict(ranks)} differ over orders {top}", ranks=ranks)
    return ranks[top[-1]]


def limit_rank(s: Substitution, lengths: LengthAssignment, orders: range | tuple[int, int],
               scan: ScanSettings | None = None) -> int:
    return stabilized_rank(limit_rank_profile(s, lengths, orders, scan))


# ---------------------------------------------------------------------------
# Theorem checks
# ---------------------------------------------------------------------------


@dataclass(slots=True)
class TheoremReport:
    kind: str
    substitution: str
    radius: int
    passed: bool
    limit_rank: int | None = None
    cech_rank: int | None = None
    ranks_by_order: dict[int, int] = field(default_factory=dict)
    lengths: dict[str, str] = field(default_factory=dict)
    detail: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            "kind": self.kind,
            "substitution": self.substitution,
            "radius": self.radius,
            "passed": self.passed,
            "limit_rank": self.limit_rank,
            "cech_rank": self.cech_rank,
            "ranks_by_order": {str(k): v for k, v in sorted(self.ranks_by_order.items())},
            "lengths": dict(self.lengths),
            "detail": self.detail,
        }


def collared_lengths(s: Substitution, radius: int, lengths: LengthAssignment | None
                     ) -> tuple[CollaredAlphabet, LengthAssignment]:
    """Collar ``s`` and bring ``lengths`` onto the collared letters.

    ``None`` means a fresh symbol per collared letter; plain-letter lengths are
    pulled back.
    """
    c = collar(s, radius)
    if lengths is None:
        return c, symbolic_lengths(c.codes)
    if tuple(lengths.alphabet) == c.codes:
        return c, lengths
    if tuple(lengths.alphabet) == s.alphabet:
        return c, pullback(lengths, c)
    raise ValueError(f"length assignment over {lengths.alphabet} fits neither {s.alphabet} nor the collared letters")


def finish_report(report: TheoremReport) -> TheoremReport:
    log_report(report.kind, report.to_dict())
    if not report.passed:
        raise VerificationError(f"{report.kind} failed for {report.substitution}", report=report)
    return report


def check_theorem1(s: Substitution, radius: int, lengths: LengthAssignment | None = None,
                   orders: range | tuple[int, int] = (1, 4), scan: ScanSettings | None = None) -> TheoremReport:
    """Large-patch return rank never exceeds the Čech H^1 rank."""
    c, L = collared_lengths(s, radius, lengths)
    ranks = limit_rank_profile(c.substitution, L, orders, scan)
    cech = cech_h1_rank(s, radius)
    lim = stabilized_rank(ranks)
    report = TheoremReport("theorem1", s.name, radius, lim <= cech, lim, cech, ranks,
                           L.to_dict(c.substitution.labels or None))
    return finish_report(report)


def check_corollary(s: Substitution, radius: int, lengths: LengthAssignment | None = None,
                    orders: range | tuple[int, int] = (1, 4), scan: ScanSettings | None = None) -> TheoremReport:
    """With a fresh symbol per collared letter, large-patch rank equals the Čech H^1 rank."""
    c, L = collared_lengths(s, radius, lengths)
    if not L.is_fully_symbolic:
        raise ShapeError("the corollary check needs a fresh symbol for every collared letter")
    ranks = limit_rank_profile(c.substitution, L, orders, scan)
    lim = stabilized_rank(ranks)
    cech = cech_h1_rank(s, radius)
    report = TheoremReport("corollary", s.name, radius, lim == cech, lim, cech, ranks,
                           L.to_dict(c.substitution.labels or None))
    return finish_report(report)
