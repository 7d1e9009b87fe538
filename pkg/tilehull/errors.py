"""Exception hierarchy.

Every error raised on purpose by the library derives from ``TilehullError`` and
carries the offending object as an attribute so the CLI can render a useful
diagnostic without parsing messages.
"""

from __future__ import annotations

from typing import Any, Mapping, Sequence


class TilehullError(RuntimeError):
    """Base class for all library errors."""


class ConfigError(TilehullError):
    """Invalid analysis configuration or command-line usage.

    Attributes
    ----------
    path : str | None
        Configuration file that failed validation, when there is one.
    """

    def __init__(self, message: str, *, path: str | None = None) -> None:
        super().__init__(message)
        self.path: str | None = path


class FormalArithmeticError(TilehullError):
    """A product of two non-rational formal quantities was requested."""

    def __init__(self, message: str, *, left: Any = None, right: Any = None) -> None:
        super().__init__(message)
        self.left = left
        self.right = right


class BasisMismatchError(TilehullError):
    """Formal values declared over different symbol bases were combined."""


class NotPrimitiveError(TilehullError):
    def __init__(self, message: str, *, substitution: Any = None) -> None:
        super().__init__(message)
        self.substitution = substitution


class SeedError(TilehullError):
    """The seed letter does not start its own image, so no fixed point grows from it."""

    def __init__(self, message: str, *, seed: str) -> None:
        super().__init__(message)
        self.seed: str = seed


class RationalSlopeError(TilehullError):
    def __init__(self, message: str, *, alpha: Any = None) -> None:
        super().__init__(message)
        self.alpha = alpha


class IllegalPatchError(TilehullError):
    def __init__(self, message: str, *, patch: str) -> None:
        super().__init__(message)
        self.patch: str = patch


class UncertifiedError(TilehullError):
    """Return-word collection did not stabilize below the scan cap.

    Attributes
    ----------
    report : Any
        The partial, uncertified report.
    """

    def __init__(self, message: str, *, report: Any = None) -> None:
        super().__init__(message)
        self.report = report


class StabilizationError(TilehullError):
    """Per-order ranks differ over the top two supertile orders."""

    def __init__(self, message: str, *, ranks: Mapping[int, int]) -> None:
        super().__init__(message)
        self.ranks: dict[int, int] = dict(ranks)


class VerificationError(TilehullError):
    """A theorem check failed; this points at an implementation bug."""

    def __init__(self, message: str, *, report: Any = None) -> None:
        super().__init__(message)
        self.report = report


class ShapeError(TilehullError):
    pass


class ChairRuleError(TilehullError):
    """A chair block rule failed validation.

    Attributes
    ----------
    diagnostics : Sequence[str]
        One line per violated condition (rotation equivariance, primitivity).
    """

    def __init__(self, message: str, *, diagnostics: Sequence[str] = ()) -> None:
        super().__init__(message)
        self.diagnostics: list[str] = list(diagnostics)


class HatParameterError(TilehullError):
    pass
