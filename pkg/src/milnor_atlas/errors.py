"""Exception hierarchy shared across the package.

The split mirrors the CLI exit-code contract: ``InputError`` maps to exit
code 2 (bad usage or unparseable input), ``HypothesisError`` is reported as
structured JSON with a reason code (the analysis ran, the math does not
apply), and ``NumericalError`` marks a failed numerical subroutine.
"""

from __future__ import annotations


class AtlasError(Exception):
    """Base class for all package errors."""


class InputError(AtlasError):
    """Malformed input: bad syntax, wrong dimensions, invalid options."""


class ParseError(InputError):
    """Syntax error in the polynomial grammar, with a 0-based text position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class ZeroPolynomialError(InputError):
    """An operation that needs a nonzero polynomial received the zero polynomial."""


class HypothesisError(AtlasError):
    """A mathematical precondition fails at the given input.

    Carries a short machine-readable ``reason`` code next to the message.
    """

    def __init__(self, reason: str, message: str):
        super().__init__(message)
        self.reason = reason


class KZeroError(HypothesisError):
    """The point lies on (or numerically too close to) the zero set of h."""

    def __init__(self, message: str):
        super().__init__("point-on-zero-set", message)


class NotProportionalError(HypothesisError):
    """The two polar weight types violate the exact proportionality relation."""

    def __init__(self, message: str):
        super().__init__("weights-not-proportional", message)


class DependentFrameError(HypothesisError):
    """p and v_f(p) are numerically R-dependent, so no tangent frame exists."""

    def __init__(self, message: str):
        super().__init__("anchor-frame-dependent", message)


class NumericalError(AtlasError):
    """A numerical subroutine failed (corrector divergence, bad stencil, ...)."""


class CorrectorError(NumericalError):
    """The fiber-chart Newton corrector did not reach its residual target."""


class StencilError(NumericalError):
    """A finite-difference stencil node is unusable (zero set hit, step underflow)."""
