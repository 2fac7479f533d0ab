"""Exception types shared across the package.

The CLI maps these onto exit codes: validation problems exit 2, I/O
problems exit 3 (plain ``OSError``), verification mismatches exit 4.
"""


class FrontmapError(Exception):
    """Base class for all package-specific errors."""


class ValidationError(FrontmapError, ValueError):
    """Invalid input data or parameters (CLI exit code 2)."""


class IngestError(ValidationError):
    """A corpus or vocabulary file failed to parse or validate."""


class VocabularyError(ValidationError):
    """A vocabulary violates its structural invariants."""


class VerifyError(FrontmapError):
    """A run directory does not match its own report (CLI exit code 4)."""
