"""Exception types shared across the package.

Every error that a caller can provoke with legal-but-rejected input loops
through one of these classes, so the command line driver can map them to
stable exit codes.
"""

from __future__ import annotations

__all__ = [
    "GridFormatError",
    "IllegalCommutation",
    "NotDestabilizable",
    "NonIntegralAlexander",
    "ResourceLimit",
    "OverflowGuard",
    "UnsatisfiableSigns",
    "InexactDivision",
    "AsymmetryDetected",
    "EmptyInterval",
]


class GridFormatError(ValueError):
    """Raised when grid text cannot be parsed or fails validation.

    Carries a human-readable location (line number or field name) so the
    CLI can point at the offending token.
    """

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class IllegalCommutation(ValueError):
    """Requested commutation interchanges linked marking pairs."""


class NotDestabilizable(ValueError):
    """The indicated corner does not match any destabilization picture."""


class NonIntegralAlexander(ValueError):
    """Alexander grading came out non-integral (multi-component link)."""


class ResourceLimit(RuntimeError):
    """A configured size or memory ceiling would be exceeded."""


class OverflowGuard(ResourceLimit):
    """Integer workload outgrew its memory ceiling during elimination.

    Entries are promoted to arbitrary precision automatically, so this
    only fires when the configured memory cap is reached.
    """


class UnsatisfiableSigns(RuntimeError):
    """No sign assignment satisfies the constraint system.

    ``certificate`` holds one violated constraint (its variables and the
    required parity) for diagnosis.
    """

    def __init__(self, message: str, certificate=None):
        self.certificate = certificate
        super().__init__(message)


class InexactDivision(ArithmeticError):
    """Polynomial division that must be exact left a remainder."""


class AsymmetryDetected(ArithmeticError):
    """A quantity that must be symmetric under t -> 1/t is not."""


class EmptyInterval(ValueError):
    """Interval endpoints are not related in the partial order."""
