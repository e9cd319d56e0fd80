"""Exception hierarchy shared across the pipeline.

Every load-time error carries the source span of the offending construct so
drivers can print `file:line:column: message` diagnostics.
"""

from __future__ import annotations

from .model import SourceSpan


class SourceError(Exception):
    def __init__(self, span: SourceSpan, message: str) -> None:
        super().__init__(f"{span}: {message}")
        self.span = span
        self.message = message


class ParseError(SourceError):
    """Malformed token, rule, or query."""


class ArityError(SourceError):
    """A predicate used with two different arities."""


class SafetyError(SourceError):
    """A rule variable not bound by the positive body or a binding built-in."""

    def __init__(self, span: SourceSpan, variable: str) -> None:
        super().__init__(span, f"unsafe variable {variable!r}")
        self.variable = variable


class ResourceLimitError(Exception):
    """Memory budget exceeded while grounding or solving."""
