"""
Exception hierarchy for worm-szego.

Usage errors double as ``ValueError`` and numerical failures as
``RuntimeError`` so callers that only know the builtins still catch them.
"""

from __future__ import annotations

from typing import Any


class WormSzegoError(Exception):
    """Base class for every error raised by this package."""


# ----------------------------
# Parameter / usage errors
# ----------------------------
class BetaOutOfRange(WormSzegoError, ValueError):
    pass


class HOutOfRange(WormSzegoError, ValueError):
    pass


class FaceRangeError(WormSzegoError, ValueError):
    pass


class UnknownFace(WormSzegoError, ValueError):
    pass


class NoDecay(WormSzegoError, ValueError):
    pass


class TestPointDegenerate(WormSzegoError, ValueError):
    __test__ = False  # keep pytest from collecting this as a test class


class NoMatchingTemplate(WormSzegoError, ValueError):
    pass


class OutsideDomain(WormSzegoError, ValueError):
    """A point (or reduced pair) violates a defining inequality."""

    def __init__(self, message: str, *, violated: str | None = None) -> None:
        super().__init__(message)
        self.violated = violated


class PathLeavesDomain(WormSzegoError, ValueError):
    pass


# ----------------------------
# Numerical failures
# ----------------------------
class ToleranceNotMet(WormSzegoError, RuntimeError):
    """Refinement budget exhausted; ``value`` is the best estimate available."""

    def __init__(self, message: str, *, value: Any = None, err_est: float = float("inf")) -> None:
        super().__init__(message)
        self.value = value
        self.err_est = err_est


class SeriesDiverged(WormSzegoError, RuntimeError):
    pass


class FitUnstable(WormSzegoError, RuntimeError):
    def __init__(self, message: str, *, fit: Any = None) -> None:
        super().__init__(message)
        self.fit = fit
