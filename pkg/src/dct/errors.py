"""Exception taxonomy shared across the toolkit.

Every error the pipeline can raise on purpose derives from :class:`DctError`
so CLI code can catch one type and map it to exit status 1.
"""

from __future__ import annotations


class DctError(Exception):
    """Base class for all toolkit errors."""


# --- document parsing -------------------------------------------------------

class MalformedDocument(DctError):
    """Input text is not parseable as the expected document schema."""


class UnsupportedVersion(DctError):
    """Document declares a format version this build does not understand."""


class InvariantViolation(DctError):
    """A parsed value violates a structural invariant; names the offending path."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


# --- type normalization -----------------------------------------------------

class UnbalancedGenerics(DctError):
    """Type text has mismatched angle brackets."""


# --- extraction -------------------------------------------------------------

class RootNotFound(DctError):
    """Project root path does not exist or is not a directory."""


class RootNotReadable(DctError):
    """Project root exists but cannot be read."""


class ParseError(DctError):
    """Source text violates the supported declaration subset."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{line}:{column}: {message}")
        self.line = line
        self.column = column


# --- detection --------------------------------------------------------------

class InvalidBundle(DctError):
    """Bundle failed validation; carries the violation descriptions."""

    def __init__(self, violations):
        super().__init__("invalid bundle: " + "; ".join(str(v) for v in violations))
        self.violations = list(violations)


# --- report documents -------------------------------------------------------

class SummaryMismatch(DctError):
    """Report summary counts disagree with the occurrence map."""


class KeyMismatch(DctError):
    """Report map key disagrees with the occurrence's own key."""


class ConfigMismatch(DctError):
    """Reports being merged were produced under incompatible configurations."""


class ConflictingOccurrence(DctError):
    """Two merged reports carry different payloads under one occurrence key."""


# --- graph ------------------------------------------------------------------

class InvalidReport(DctError):
    """Report object handed to the graph builder is inconsistent."""


# --- planning ---------------------------------------------------------------

class UnknownKey(DctError):
    """A selected occurrence key does not exist in the source report."""


class InvalidName(DctError):
    """Proposed class name is not a valid identifier."""


class EmptyGroup(DctError):
    """Operation requires a non-empty variable group."""
