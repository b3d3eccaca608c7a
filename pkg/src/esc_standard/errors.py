"""Exception hierarchy shared by the library and the CLI.

Everything a user can trigger with bad input derives from :class:`EscError`
and maps to exit code 1. :class:`InvariantViolation` signals a bug in this
package and maps to exit code 2.
"""

from __future__ import annotations


class EscError(Exception):
    """Base class for user-facing errors (bad input, unmet preconditions)."""


class UnitError(EscError, ValueError):
    """Malformed number or unknown unit tag in a quantity."""

    def __init__(self, message: str, token: str):
        super().__init__(f"{message}: {token!r}")
        self.token = token


class SeriesError(EscError, ValueError):
    """A capacity series violates its construction invariants."""

    def __init__(self, message: str, row: int | None = None):
        if row is not None:
            message = f"{message} at row {row}"
        super().__init__(message)
        self.row = row


class OutOfRangeError(EscError, ValueError):
    """A timestamp lies outside the span covered by a series."""

    def __init__(self, source_id: str, t: int, span: tuple[int, int]):
        from .timeutil import format_timestamp

        super().__init__(
            f"source {source_id!r}: t={format_timestamp(t)} outside valid span "
            f"[{format_timestamp(span[0])}, {format_timestamp(span[1])}]"
        )
        self.source_id = source_id
        self.t = t
        self.span = span


class InsufficientDataError(EscError, ValueError):
    """A window or derivative stencil is not covered by a series.

    ``side`` is ``"history"`` when the requirement extends before the first
    sample and ``"future"`` when it extends past the last one.
    """

    def __init__(
        self,
        source_id: str,
        side: str,
        required: tuple[float, float],
        available: tuple[int, int],
        context: str = "window",
    ):
        from .timeutil import format_timestamp

        super().__init__(
            f"source {source_id!r}: insufficient {side} data for {context}; "
            f"required [{format_timestamp(required[0])}, {format_timestamp(required[1])}], "
            f"available [{format_timestamp(available[0])}, {format_timestamp(available[1])}]"
        )
        self.source_id = source_id
        self.side = side
        self.required = required
        self.available = available


class ConfigError(EscError, ValueError):
    """Invalid source specification or matrix configuration."""


class ScenarioError(EscError, ValueError):
    """Invalid scenario definition or event sequence."""


class FormatError(EscError, ValueError):
    """A file does not conform to its documented format."""

    def __init__(self, path: object, message: str, line: int | None = None):
        where = f"{path}" if line is None else f"{path}:{line}"
        super().__init__(f"{where}: {message}")
        self.path = path
        self.line = line


class InvariantViolation(AssertionError):
    """Internal consistency check failed; never caused by user input."""
