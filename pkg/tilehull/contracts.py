"""Service contracts (protocols) for tilehull.

Return-word scanning only needs a way to read long legal prefixes and to decide
membership in the language. Substitutive and Sturmian sequences both satisfy
``LanguagePort``, so the scanning code is written once against this contract.
"""
from __future__ import annotations

from typing import AbstractSet, Protocol, runtime_checkable


@runtime_checkable
class LanguagePort(Protocol):
    """Contract for a minimal subshift presented by one-sided prefixes.

    Letters are single characters; words are ``str``. Implementations must be
    hashable so scan results can be cached per language.
    """

    @property
    def alphabet(self) -> tuple[str, ...]:  # pragma: no cover - protocol signature
        ...

    @property
    def name(self) -> str:  # pragma: no cover
        ...

    def prefix(self, n: int) -> str:  # pragma: no cover
        ...

    def factors(self, n: int) -> AbstractSet[str]:  # pragma: no cover
        ...

    def is_legal(self, word: str) -> bool:  # pragma: no cover
        ...
