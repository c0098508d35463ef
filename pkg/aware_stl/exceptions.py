"""Exception types raised across aware-stl."""

from __future__ import annotations

from typing import TYPE_CHECKING, Sequence

if TYPE_CHECKING:  # pragma: no cover
    from aware_stl.formula.validate import ValidationIssue
    from aware_stl.formula.ast import SourceSpan


class AwareStlError(Exception):
    """Base error for the toolkit."""


class InvalidFormulaError(AwareStlError):
    """Raised when a formula fails validation against a sampling step."""

    def __init__(self, issues: Sequence["ValidationIssue"]):
        self.issues = list(issues)
        lines = "; ".join(issue.message for issue in self.issues) or "invalid formula"
        super().__init__(lines)


class ParseError(AwareStlError):
    """Raised when spec text does not follow the grammar."""

    def __init__(self, message: str, span: "SourceSpan", expected: Sequence[str] = ()):
        if not message:
            message = "syntax error"
        self.message = message
        self.span = span
        self.expected = list(expected)
        super().__init__(f"{message} at {span.start}..{span.end}")

    def annotate(self, text: str) -> str:
        """Render the message with a caret line under the offending span."""
        line_start = text.rfind("\n", 0, self.span.start) + 1
        line_end = text.find("\n", self.span.start)
        if line_end == -1:
            line_end = len(text)
        line = text[line_start:line_end]
        width = max(1, min(self.span.end, line_end) - self.span.start)
        caret = " " * (self.span.start - line_start) + "^" * width
        detail = f"error: {self.message}\n  {line}\n  {caret}"
        if self.expected:
            detail += f"\n  expected one of: {', '.join(self.expected)}"
        return detail


class MonitorError(AwareStlError):
    """Base error for signal monitoring."""


class OutOfRangeError(MonitorError):
    """Raised when evaluation needs samples beyond the signal."""


class DerivativeAtBoundaryError(MonitorError):
    """Raised when a one-sided difference runs off either end of the signal."""


class SignalFormatError(MonitorError):
    """Raised when a signal file or array is malformed."""


class EncodingError(AwareStlError):
    """Base error for MILP encoding."""


class WindowOverflowError(EncodingError):
    """Raised when a subformula window reaches past the encoded horizon."""


class BigMTooSmallError(EncodingError):
    """Raised when the bound box of a row exceeds the configured big-M."""


class SolverError(AwareStlError):
    """Raised on numerical breakdown or iteration caps inside the LP engine."""


class ModelError(SolverError):
    """Raised when a MILP model references undeclared variables or has bad bounds."""


class SynthesisError(AwareStlError):
    """Base error for trajectory synthesis."""


class HorizonTooShortError(SynthesisError):
    """Raised when the mission horizon is shorter than the formula horizon."""


class MonitorMismatchError(SynthesisError):
    """Raised when an optimal trajectory fails the monitor cross-check."""
