"""
Exceptions raised by the library, and the exit codes the command line maps them to.

- Validation errors (bad type strings, caps, illegal inputs) also derive from ValueError.
- OracleMismatchError means a closed formula and the brute-force answer disagree.
"""

from __future__ import annotations

from typing import Optional, Sequence

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2


class LagrangianError(Exception):
    """Base class for every error raised by lagrangian_variety."""

    exit_code = EXIT_USAGE


class ParseError(LagrangianError, ValueError):
    """A type spec, subset, isometry or word string could not be parsed."""

    def __init__(self, message: str, text: str = "", position: Optional[int] = None):
        if position is not None:
            message = f"{message} at position {position} in {text!r}"
        super().__init__(message)
        self.text = text
        self.position = position


class CapExceededError(LagrangianError, ValueError):
    """A rank, Weyl group or oracle size cap was exceeded."""

    def __init__(self, what: str, value: int, cap: int):
        super().__init__(f"{what} {value} exceeds cap {cap}")
        self.what = what
        self.value = value
        self.cap = cap


class NotIsometryError(LagrangianError, ValueError):
    """A bijection S -> T does not preserve the Killing form."""


class NotMinimalError(LagrangianError, ValueError):
    """A Weyl element is not the minimal representative it was claimed to be."""


class IllegalChoiceError(LagrangianError, ValueError):
    """A sequence choice lies outside the legal double coset representatives."""

    def __init__(self, step: int, choice: str, legal: Sequence[str]):
        super().__init__(f"illegal choice {choice} at step {step}; legal: {', '.join(legal)}")
        self.step = step
        self.choice = choice
        self.legal = list(legal)


class DependentBasisError(LagrangianError, ValueError):
    """Basis rows are linearly dependent."""


class DimensionMismatchError(LagrangianError, ValueError):
    """Two subspaces or spaces do not live in compatible dimensions."""


class NotLagrangianError(LagrangianError, ValueError):
    """A subspace is not Lagrangian where one is required."""


class DegenerateFormError(LagrangianError, ValueError):
    """A Gram matrix is singular where a nondegenerate form is required."""


class NotSplitError(LagrangianError, ValueError):
    """A two dimensional quadratic space has no isotropic line over the rationals."""

    def __init__(self, discriminant):
        super().__init__(f"anisotropic over Q: -det = {discriminant} is not a square")
        self.discriminant = discriminant


class InapplicableError(LagrangianError, ValueError):
    """The hypotheses of a check do not hold, so its conclusion says nothing."""


class UnsupportedTorusError(LagrangianError, ValueError):
    """Only torus elements are supported as Levi components of G_Delta normal forms."""


class OrbitMismatchError(LagrangianError, ValueError):
    """Two orbit labels do not share the same (G x G)-orbit."""


class OracleMismatchError(LagrangianError):
    """A closed formula disagrees with the brute-force oracle."""

    exit_code = EXIT_VERIFY_FAILED

    def __init__(self, what: str, expected=None, actual=None):
        message = what if expected is None else f"{what}: formula {expected}, oracle {actual}"
        super().__init__(message)
        self.what = what
        self.expected = expected
        self.actual = actual


def exit_code(exc: BaseException) -> int:
    """Exit code the command line uses for an exception."""
    if isinstance(exc, LagrangianError):
        return exc.exit_code
    return EXIT_USAGE
