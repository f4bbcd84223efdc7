"""Exception types shared across the package."""

from __future__ import annotations


class StructuralError(ValueError):
    """Malformed input: unknown generators, mismatched rings or bidegrees."""


class ResourceError(RuntimeError):
    """A search exceeded its configured size budget.

    Carries the size that triggered the refusal; never a silent truncation.
    """

    def __init__(self, message: str, size: int | None = None):
        super().__init__(message)
        self.size = size


class CfkParseError(ValueError):
    """Ill-formed .cfk input, with the offending line number."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line
