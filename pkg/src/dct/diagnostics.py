"""Structured diagnostics channel.

Extraction and document parsing report non-fatal findings (skipped files,
unknown document keys, unresolvable imports) here instead of raising. The
CLI renders entries on stderr as ``LEVEL file:line message``; library users
can inspect them programmatically.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from typing import List, Optional, TextIO


@dataclass(frozen=True)
class Diagnostic:
    level: str  # "WARNING" or "ERROR"
    file: str   # "" when not tied to a file
    line: int   # 0 when not tied to a line
    message: str

    def __str__(self) -> str:
        return f"{self.level} {self.file or '-'}:{self.line} {self.message}"


@dataclass
class Diagnostics:
    """Ordered collection of diagnostics emitted during one operation."""

    entries: List[Diagnostic] = field(default_factory=list)

    def warn(self, message: str, file: str = "", line: int = 0) -> None:
        self.entries.append(Diagnostic("WARNING", file, line, message))

    def error(self, message: str, file: str = "", line: int = 0) -> None:
        self.entries.append(Diagnostic("ERROR", file, line, message))

    def extend(self, other: "Diagnostics") -> None:
        self.entries.extend(other.entries)

    @property
    def warnings(self) -> List[Diagnostic]:
        return [d for d in self.entries if d.level == "WARNING"]

    @property
    def errors(self) -> List[Diagnostic]:
        return [d for d in self.entries if d.level == "ERROR"]

    def print_to(self, stream: Optional[TextIO] = None) -> None:
        out = stream if stream is not None else sys.stderr
        for entry in self.entries:
            print(entry, file=out)
