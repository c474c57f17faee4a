"""Exception types shared across the package."""

from __future__ import annotations


class RingLcpError(Exception):
    """Base class for all errors raised by ringlcp."""


class FieldError(RingLcpError, ValueError):
    """Invalid field data or a shape mismatch in field linear algebra."""


class AlgebraError(RingLcpError, ValueError):
    """Invalid ring presentation (non-associative, non-unital, ...)."""


class AlgebraMismatch(RingLcpError, ValueError):
    """Operands live over different algebras or have incompatible shapes."""


class NotLocalError(RingLcpError):
    """The operation needs a local ring with residue field F_p."""


class UnsupportedError(RingLcpError):
    """The input is valid but outside what this version can decide."""


class BudgetExceeded(RingLcpError):
    """An exhaustive enumeration would exceed the configured budget."""


class DegenerateInput(RingLcpError, ValueError):
    """The input is well formed but the operation has nothing to compute."""


class NotIdempotent(RingLcpError, ValueError):
    """A matrix expected to be idempotent is not."""


class NotLcpError(RingLcpError, ValueError):
    """An operation that needs an LCP pair received a non-LCP pair."""
