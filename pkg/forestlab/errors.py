"""
errors.py - Exception hierarchy for forestlab

Every failure raised by the library derives from ForestLabError so callers
(and the CLI exit-code mapping) can catch the whole family at once. Errors
with structured fields define __reduce__ so they survive the trip back from
worker processes.
"""

from __future__ import annotations


class ForestLabError(Exception):
    """Base class for all forestlab failures."""


class ConfigError(ForestLabError):
    """Invalid experiment configuration; `field` names the offending entry."""

    def __init__(self, field: str, message: str):
        self.field = field
        self.message = message
        super().__init__(f"{field}: {message}")

    def __reduce__(self):
        return (type(self), (self.field, self.message))


class ResourceError(ForestLabError):
    """A configured budget (vertices, steps, enumeration size) would be exceeded."""

    def __init__(self, budget: str, requested: int, limit: int):
        self.budget = budget
        self.requested = requested
        self.limit = limit
        super().__init__(f"{budget} budget exceeded: requested {requested}, limit {limit}")

    def __reduce__(self):
        return (type(self), (self.budget, self.requested, self.limit))


class StepBudgetExceeded(ResourceError):
    """A random walk ran past the configured step cap without meeting its stop rule."""

    def __init__(self, limit: int):
        super().__init__("step", limit + 1, limit)

    def __reduce__(self):
        return (type(self), (self.limit,))


class DomainError(ForestLabError, ValueError):
    """Request outside the mathematical domain of an operation."""


class ContractViolation(ForestLabError, ValueError):
    """Structural precondition broken by the caller (mismatched vertex sets, bad files)."""


class StatisticalFailure(ForestLabError):
    """Rejection sampling gave up after `attempts` tries."""

    def __init__(self, attempts: int, what: str = "rejection sampler"):
        self.attempts = attempts
        self.what = what
        super().__init__(f"{what} failed to accept within {attempts} attempts")

    def __reduce__(self):
        return (type(self), (self.attempts, self.what))
