"""Exceptions shared across the package.

Every error that can surface through the CLI carries an ``exit_code`` so the
thin client can map failures onto process exit statuses uniformly:

* 2 -- configuration / input domain errors,
* 3 -- numerical non-convergence (quadrature budget exhausted),
* 4 -- violated structural invariant (signals a bug, not bad input).
"""

from __future__ import annotations

__all__ = ["ConfigError", "DomainError", "ConvergenceError", "InvariantViolation"]


class ConfigError(ValueError):
    """Bad configuration: unknown keys, malformed values, missing sections."""

    exit_code = 2


class DomainError(ConfigError):
    """Mathematically out-of-domain input (e.g. anisotropy outside (-1, 1))."""


class ConvergenceError(RuntimeError):
    """Adaptive quadrature exhausted its subdivision budget above tolerance."""

    exit_code = 3


class InvariantViolation(RuntimeError):
    """A structural certificate failed (realness, skewness, pairing, ...)."""

    exit_code = 4
