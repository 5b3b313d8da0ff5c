"""Shared report type and exception classes."""

from dataclasses import dataclass


@dataclass(frozen=True)
class Report:
    """Outcome of a validation or verification pass.

    message is "OK" (possibly with detail after a colon) when ok is true,
    otherwise a description of the first violation found.  witness carries
    the offending datum in machine-readable form when there is one.
    """

    ok: bool
    message: str
    witness: object = None

    def __bool__(self):
        return self.ok


class SchemaError(ValueError):
    """An input file does not match its documented schema."""


class BudgetError(RuntimeError):
    """An enumeration would exceed the configured search budget."""


class InferenceError(ValueError):
    """Filtration data is not a toric vector bundle on the given chart."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness
