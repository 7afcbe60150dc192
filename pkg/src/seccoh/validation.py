"""Shared error types and the audit report returned by verification ops."""

from __future__ import annotations

from dataclasses import dataclass


class SeccohError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(SeccohError):
    """An object or argument violates a structural precondition."""


class NonAbelianError(ValidationError):
    """An abelian-only operation was applied to non-abelian coefficients."""


class ScenarioError(SeccohError):
    """A scenario file failed to parse or validate.

    ``path`` locates the offending field, dotted from the document root.
    """

    def __init__(self, path: str, message: str):
        self.path = path
        self.message = message
        super().__init__(f"{path}: {message}" if path else message)


class BudgetExceededError(SeccohError):
    """A bounded search ran out of budget before reaching a verdict.

    Distinct from a negative answer: no conclusion was reached.
    """


@dataclass(frozen=True)
class AuditReport:
    """Outcome of an exhaustive verification pass.

    ``checked`` counts individual assertions evaluated; ``violations``
    holds one human-readable line per failed assertion.
    """

    checked: int
    violations: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def raise_if_failed(self, context: str) -> "AuditReport":
        if self.violations:
            head = "; ".join(self.violations[:5])
            more = f" (+{len(self.violations) - 5} more)" if len(self.violations) > 5 else ""
            raise ValidationError(f"{context}: {head}{more}")
        return self

    def merged(self, other: "AuditReport") -> "AuditReport":
        return AuditReport(self.checked + other.checked, self.violations + other.violations)
