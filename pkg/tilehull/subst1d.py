"""One-dimensional substitutions, their languages, collarings and Sturmian words.

Letters are single characters and words are plain ``str`` so scanning can lean
on ``str.translate`` and ``re``. Collared alphabets get fresh one-character
codes; the human-readable ``(x)y(z)`` labels ride along for reports.
"""

from __future__ import annotations

import itertools
import string
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import isqrt
from typing import Mapping, Sequence

from loguru import logger

from tilehull.errors import NotPrimitiveError, RationalSlopeError, SeedError
from tilehull.exactlin import RatMatrix


@dataclass(frozen=True, slots=True)
class Substitution:
    """A substitution ``letter -> nonempty word`` over single-character letters.

    ``images[i]`` is the image of ``alphabet[i]``. ``labels`` are display names
    (collared substitutions use ``(x)y(z)``); they default to the letters.
    """

    alphabet: tuple[str, ...]
    images: tuple[str, ...]
    name: str = ""
    labels: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self) -> None:
        if not self.alphabet:
            raise ValueError("empty alphabet")
        if any(len(a) != 1 for a in self.alphabet):
            raise ValueError(f"letters must be single characters: {self.alphabet}")
        if len(set(self.alphabet)) != len(self.alphabet):
            raise ValueError(f"duplicate letters in {self.alphabet}")
        if len(self.images) != len(self.alphabet):
            raise ValueError("one image per letter required")
        letters = set(self.alphabet)
        for a, img in zip(self.alphabet, self.images):
            if not img:
                raise ValueError(f"image of {a!r} is empty")
            bad = set(img) - letters
            if bad:
                raise ValueError(f"image of {a!r} uses letters {sorted(bad)} outside the alphabet")
        if self.labels and len(self.labels) != len(self.alphabet):
            raise ValueError("one label per letter required")

    @classmethod
    def from_rule(cls, rule: Mapping[str, str], alphabet: Sequence[str] | None = None,
                  name: str = "") -> "Substitution":
        letters = tuple(alphabet) if alphabet is not None else tuple(rule)
        missing = [a for a in letters if a not in rule]
        if missing:
            raise ValueError(f"no image for letters {missing}")
        return cls(letters, tuple(rule[a] for a in letters), name=name)

    @property
    def rule(self) -> dict[str, str]:
        return dict(zip(self.alphabet, self.images))

    def image(self, letter: str) -> str:
        return self.images[self.alphabet.index(letter)]

    def label(self, letter: str) -> str:
        if not self.labels:
            return letter
        return self.labels[self.alphabet.index(letter)]

    def label_word(self, word: str) -> str:
        if not self.labels:
            return word
        return " ".join(self.label(c) for c in word)

    @property
    def abelianization(self) -> RatMatrix:
        """Entry ``(i, j)`` counts letter ``i`` in the image of letter ``j``."""
        return RatMatrix.from_rows(
            [[img.count(a) for img in self.images] for a in self.alphabet])

    def apply(self, word: str) -> str:
        return word.translate(_table(self))

    def power(self, k: int) -> "Substitution":
        if k < 1:
            raise ValueError("power must be >= 1")
        images = list(self.alphabet)
        for _ in range(k):
            images = [self.apply(w) for w in images]
        return Substitution(self.alphabet, tuple(images), name=f"{self.name}^{k}", labels=self.labels)

    def abelian_vector(self, word: str) -> tuple[int, ...]:
        return tuple(word.count(a) for a in self.alphabet)


@lru_cache(maxsize=256)
def _table(s: Substitution) -> dict[int, str]:
    return {ord(a): img for a, img in zip(s.alphabet, s.images)}


def check_primitive(s: Substitution) -> bool:
    """True iff some power ``M^k`` with ``k <= (n-1)^2 + 1`` is entrywise positive."""
    m = s.abelianization
    n = m.rows
    p = m
    for _ in range((n - 1) ** 2 + 1):
        if all(x > 0 for x in p.entries):
            return True
        p = p @ m
    return False


def _require_primitive(s: Substitution) -> None:
    if not check_primitive(s):
        raise NotPrimitiveError(f"substitution {s.name or s.rule} is not primitive", substitution=s)
    # primitive with every image of length 1 is a permutation: nothing grows
    if all(len(img) == 1 for img in s.images):
        raise NotPrimitiveError(f"substitution {s.name or s.rule} does not grow", substitution=s)


def fixed_point_prefix(s: Substitution, seed: str, min_len: int) -> str:
    """The first ``min_len`` letters of the one-sided fixed point grown from ``seed``."""
    img = s.image(seed)
    if not img.startswith(seed) or len(img) < 2:
        raise SeedError(f"rule({seed}) = {img!r} does not extend {seed!r}", seed=seed)
    w = seed
    while len(w) < min_len:
        w = s.apply(w)
    return w[:min_len]


def fixed_point_seed(s: Substitution) -> tuple[str, int]:
    """A letter ``x`` and power ``k`` with ``σ^k(x)`` starting with ``x``.

    Iterates the first-letter map until it cycles; any letter on the cycle works.
    """
    seen: dict[str, int] = {}
    x = s.alphabet[0]
    while x not in seen:
        seen[x] = len(seen)
        x = s.image(x)[0]
    return x, len(seen) - seen[x]


@lru_cache(maxsize=32)
def _language_text(s: Substitution, length: int) -> str:
    _require_primitive(s)
    seed, k = fixed_point_seed(s)
    w = fixed_point_prefix(s.power(k) if k > 1 else s, seed, length)
    logger.debug("generated {} letters of {}", len(w), s.name or "substitution")
    return w


def language_text(s: Substitution, min_len: int) -> str:
    """A legal prefix of length ``min_len`` of a fixed point of some power of ``s``."""
    length = 1 << max(4, (max(min_len, 1) - 1).bit_length())
    return _language_text(s, length)[:min_len]


@lru_cache(maxsize=64)
def legal_two_words(s: Substitution) -> frozenset[str]:
    """Closure of the 2-letter factors of letter images under the substitution."""
    _require_primitive(s)
    found = {img[i:i + 2] for img in s.images for i in range(len(img) - 1)}
    frontier = set(found)
    while frontier:
        fresh: set[str] = set()
        for xy in frontier:
            big = s.apply(xy)
            for i in range(len(big) - 1):
                w = big[i:i + 2]
                if w not in found:
                    fresh.add(w)
        found |= fresh
        frontier = fresh
    return frozenset(found)


@lru_cache(maxsize=256)
def legal_words(s: Substitution, n: int) -> frozenset[str]:
    """All length-``n`` factors of the language of a primitive substitution.

    Every such factor sits inside ``σ^k(xy)`` for a legal two-letter word ``xy``
    once every ``σ^k``-image has length at least ``n - 1``.
    """
    _require_primitive(s)
    if n <= 0:
        return frozenset({""})
    if n == 1:
        return frozenset(s.alphabet)
    pairs = legal_two_words(s)
    blocks = list(s.alphabet)
    k = 0
    while min(len(b) for b in blocks) < n - 1:
        blocks = [s.apply(b) for b in blocks]
        k += 1
    sk = s.power(k) if k else None
    out: set[str] = set()
    for xy in pairs:
        big = sk.apply(xy) if sk else xy
        out.update(big[i:i + n] for i in range(len(big) - n + 1))
    return frozenset(out)


# ---------------------------------------------------------------------------
# Collaring
# ---------------------------------------------------------------------------

_CODE_POOL = string.ascii_uppercase + string.digits + string.ascii_lowercase


def _code(i: int) -> str:
    return _CODE_POOL[i] if i < len(_CODE_POOL) else chr(0x100 + i)


@dataclass(frozen=True, slots=True)
class CollaredLetter:
    left: str
    core: str
    right: str
    code: str

    @property
    def context(self) -> str:
        return self.left + self.core + self.right

    @property
    def label(self) -> str:
        if not self.left and not self.right:
            return self.core
        return f"({self.left}){self.core}({self.right})"


@dataclass(frozen=True, slots=True)
class CollaredAlphabet:
    """Letters of ``base`` labelled by their ``radius``-neighbourhoods.

    ``substitution`` is the induced substitution on the codes; for radius 0 it
    is ``base`` itself.
    """

    base: Substitution
    radius: int
    letters: tuple[CollaredLetter, ...]
    substitution: Substitution

    @property
    def codes(self) -> tuple[str, ...]:
        return tuple(c.code for c in self.letters)

    def letter(self, code: str) -> CollaredLetter:
        for c in self.letters:
            if c.code == code:
                return c
        raise KeyError(code)

    def by_context(self, context: str) -> CollaredLetter:
        for c in self.letters:
            if c.context == context:
                return c
        raise KeyError(context)

    def by_label(self, label: str) -> CollaredLetter:
        for c in self.letters:
            if c.label == label:
                return c
        raise KeyError(label)

    def forget(self, code: str) -> str:
        return self.letter(code).core

    def forget_word(self, word: str) -> str:
        return "".join(self.forget(c) for c in word)

    def collared_rule(self, code: str) -> str:
        return self.substitution.image(code)

    def collar_text(self, text: str) -> str:
        """Code every letter of ``text`` that has a full neighbourhood inside it."""
        r = self.radius
        lookup = {c.context: c.code for c in self.letters}
        return "".join(lookup[text[i - r:i + r + 1]] for i in range(r, len(text) - r))


def collar(s: Substitution, radius: int) -> CollaredAlphabet:
    """Collar ``s`` to ``radius``: one letter per legal (2r+1)-word, read at its centre."""
    if radius < 0:
        raise ValueError("radius must be non-negative")
    _require_primitive(s)
    if radius == 0:
        letters = tuple(CollaredLetter("", a, "", a) for a in s.alphabet)
        return CollaredAlphabet(s, 0, letters, s)
    words = sorted(legal_words(s, 2 * radius + 1), key=lambda w: (w[radius], w[:radius], w[radius + 1:]))
    letters = tuple(CollaredLetter(w[:radius], w[radius], w[radius + 1:], _code(i)) for i, w in enumerate(words))
    lookup = {c.context: c.code for c in letters}
    images: list[str] = []
    for c in letters:
        left, mid, right = s.apply(c.left), s.apply(c.core), s.apply(c.right)
        big = left + mid + right
        off = len(left)
        images.append("".join(lookup[big[p - radius:p + radius + 1]] for p in range(off, off + len(mid))))
    sub = Substitution(tuple(c.code for c in letters), tuple(images),
                       name=f"{s.name or 'substitution'}[r={radius}]", labels=tuple(c.label for c in letters))
    logger.debug("collared {} at radius {}: {} letters", s.name, radius, len(letters))
    return CollaredAlphabet(s, radius, letters, sub)


# ---------------------------------------------------------------------------
# Sturmian words
# ---------------------------------------------------------------------------


def _is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


def floor_surd(a: int, b: int, d: int, c: int) -> int:
    """``floor((a + b*sqrt(d)) / c)`` exactly, for ``c != 0`` and non-square ``d``."""
    if c == 0:
        raise ZeroDivisionError("denominator is zero")
    if c < 0:
        a, b, c = -a, -b, -c
    if b == 0:
        fb = 0
    elif b > 0:
        fb = isqrt(b * b * d)
    else:
        fb = -(isqrt(b * b * d) + 1)
    return (a + fb) // c


@dataclass(frozen=True, slots=True)
class SturmianSpec:
    """Slope ``α = (p + q*sqrt(d)) / r`` in (0, 1) and intercept ``rho``."""

    d: int
    p: int
    q: int
    r: int
    rho: Fraction = Fraction(0)
    name: str = ""

    def __post_init__(self) -> None:
        if self.r == 0:
            raise RationalSlopeError("zero denominator", alpha=self)
        if self.q == 0 or _is_square(self.d):
            raise RationalSlopeError(f"slope ({self.p} + {self.q}*sqrt({self.d}))/{self.r} is rational",
                                     alpha=self)
        if self.d < 0:
            raise RationalSlopeError("negative radicand", alpha=self)
        if floor_surd(self.p, self.q, self.d, self.r) != 0:
            raise RationalSlopeError("slope must lie strictly between 0 and 1", alpha=self)

    def floor_at(self, k: int) -> int:
        """``floor(k*α + rho)``."""
        rho = Fraction(self.rho)
        u, v = rho.numerator, rho.denominator
        return floor_surd(v * k * self.p + self.r * u, v * k * self.q, self.d, self.r * v)


def sturmian_prefix(spec: SturmianSpec, n: int) -> str:
    """Letters ``s_0 .. s_{n-1}``: ``b`` where ``floor((k+1)α+ρ)`` jumps, else ``a``."""
    out: list[str] = []
    prev = spec.floor_at(0)
    for k in range(n):
        nxt = spec.floor_at(k + 1)
        out.append("b" if nxt > prev else "a")
        prev = nxt
    return "".join(out)


def periodicity_screen(w: str, max_period: int) -> int | None:
    """Smallest ``p <= max_period`` with ``w[i] == w[i+p]`` on the overlap.

    A screening heuristic only: a finite word can look periodic without the
    infinite sequence being so.
    """
    for p in range(1, min(max_period, len(w) - 1) + 1):
        if w[p:] == w[:-p]:
            return p
    return None


def screen_periodicity(s: Substitution, length: int = 4096) -> int | None:
    """Run ``periodicity_screen`` on a language sample and warn on a hit."""
    period = periodicity_screen(language_text(s, length), length // 8)
    if period is not None:
        logger.warning("{} looks periodic: period {} over {} letters", s.name or s.rule, period, length)
    return period


# ---------------------------------------------------------------------------
# Languages (LanguagePort implementations)
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class SubstitutionLanguage:
    substitution: Substitution

    @property
    def alphabet(self) -> tuple[str, ...]:
        return self.substitution.alphabet

    @property
    def name(self) -> str:
        return self.substitution.name

    def prefix(self, n: int) -> str:
        return language_text(self.substitution, n)

    def factors(self, n: int) -> frozenset[str]:
        return legal_words(self.substitution, n)

    def is_legal(self, word: str) -> bool:
        return word in legal_words(self.substitution, len(word))

    def label_word(self, word: str) -> str:
        return self.substitution.label_word(word)


@lru_cache(maxsize=32)
def _sturmian_text(spec: SturmianSpec, length: int) -> str:
    return sturmian_prefix(spec, length)


@lru_cache(maxsize=256)
def _sturmian_factors(spec: SturmianSpec, n: int) -> frozenset[str]:
    # a Sturmian language has exactly n + 1 factors of length n
    length = max(64, 16 * (n + 1))
    while True:
        text = _sturmian_text(spec, length)
        found = frozenset(text[i:i + n] for i in range(len(text) - n + 1))
        if len(found) >= n + 1:
            return found
        length *= 2


@dataclass(frozen=True, slots=True)
class SturmianLanguage:
    spec: SturmianSpec

    @property
    def alphabet(self) -> tuple[str, ...]:
        return ("a", "b")

    @property
    def name(self) -> str:
        return self.spec.name or "sturmian"

    def prefix(self, n: int) -> str:
        length = 1 << max(6, (max(n, 1) - 1).bit_length())
        return _sturmian_text(self.spec, length)[:n]

    def factors(self, n: int) -> frozenset[str]:
        return _sturmian_factors(self.spec, n)

    def is_legal(self, word: str) -> bool:
        return set(word) <= {"a", "b"} and word in _sturmian_factors(self.spec, len(word))

    def label_word(self, word: str) -> str:
        return word


def all_legal_words(s: Substitution, max_len: int, min_len: int = 1) -> list[str]:
    """Legal words with ``min_len <= |w| <= max_len``, shortest first, sorted."""
    return list(itertools.chain.from_iterable(sorted(legal_words(s, n)) for n in range(min_len, max_len + 1)))
