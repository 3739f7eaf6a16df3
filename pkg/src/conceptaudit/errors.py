"""Error types shared across the package.

The CLI maps these onto distinct exit codes so scripts can tell failure
modes apart: 2 usage (handled by click), 3 parse, 4 schema/label-map,
5 I/O.
"""

from __future__ import annotations


class AuditError(Exception):
    """Base class for all errors raised by this package."""

    exit_code = 1


class ParseError(AuditError):
    """Malformed input text (ragged rows, missing header, bad encoding)."""

    exit_code = 3


class SchemaError(AuditError):
    """Input violates the declared or inferred schema."""

    exit_code = 4


class LabelMapError(SchemaError):
    """A raw label string has no mapping rule and no default."""


class SynthSpecError(SchemaError):
    """A synthetic-dataset plan is invalid (duplicate signatures, bad counts)."""
