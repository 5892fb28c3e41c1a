"""Exception hierarchy shared across the package."""

from __future__ import annotations

from dataclasses import dataclass


class EgolearnError(Exception):
    """Base class for all package errors."""


class UsageError(EgolearnError):
    """Bad arguments or configuration supplied by the caller."""


class DataValidationError(EgolearnError):
    """Input data violates the documented schema or value ranges."""


@dataclass(frozen=True)
class ParseIssue:
    """One positioned problem found while parsing a survey export."""

    row: int  # 1-based data row number (header excluded)
    column: str
    message: str

    def __str__(self) -> str:
        return f"row {self.row}, column {self.column}: {self.message}"


class SurveyParseError(DataValidationError):
    """Raised when a survey export contains malformed rows.

    Carries every issue found so callers can report all of them at once.
    """

    def __init__(self, issues: list[ParseIssue]):
        self.issues = list(issues)
        preview = "; ".join(str(i) for i in self.issues[:5])
        more = "" if len(self.issues) <= 5 else f" (+{len(self.issues) - 5} more)"
        super().__init__(f"{len(self.issues)} parse issue(s): {preview}{more}")


class EmptySubsetError(DataValidationError):
    """A subset filter matched no rows."""


class DegenerateTableError(EgolearnError):
    """A contingency table has fewer than 2 non-empty rows or columns."""


class RoutingError(EgolearnError):
    """A prediction input is missing a predictor required by the model."""


class StratificationError(DataValidationError):
    """A stratified split was requested but a response class is absent."""
