"""Shared helpers: identifier rendering, validation reports, error types.

Identifiers for objects, arrows, group elements and bundle points are opaque
hashable values.  Hand-written data uses plain strings; constructions
(translation groupoids, fibered products, quotients) produce nested tuples.
"""

from __future__ import annotations

from dataclasses import dataclass


class GrpdError(Exception):
    """Base class for all library errors."""


class UnknownIdentifier(GrpdError, KeyError):
    """An object/arrow/element/point identifier is not part of the structure."""


class PreconditionError(GrpdError, ValueError):
    """An operation was called on input violating its stated precondition."""


class MismatchError(GrpdError, ValueError):
    """Two inputs that must share a groupoid/group/endpoint do not."""


class InternalCheckError(GrpdError, AssertionError):
    """Two internally redundant computations disagreed; indicates a bug."""


class InputError(GrpdError, ValueError):
    """Malformed or unresolvable serialized input (CLI exit code 2)."""


def ident_str(x) -> str:
    """Canonical printable form of an identifier (tuples render as "(a,b)")."""
    if isinstance(x, tuple):
        return "(" + ",".join(ident_str(p) for p in x) + ")"
    if isinstance(x, frozenset):
        return "{" + ",".join(sorted(ident_str(p) for p in x)) + "}"
    return str(x)


def sort_key(x) -> str:
    return ident_str(x)


def shortlex_key(x):
    """Order identifiers by rendered length first, then lexicographically."""
    s = ident_str(x)
    return (len(s), s)


@dataclass(frozen=True)
class Violation:
    law: str
    detail: str

    def __str__(self):
        return f"[{self.law}] {self.detail}"


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def laws(self) -> set[str]:
        return {v.law for v in self.violations}

    def __str__(self):
        if self.ok:
            return "ok"
        return "\n".join(str(v) for v in self.violations)


class ReportBuilder:
    """Accumulates violations; caps per-law spam to keep reports readable."""

    def __init__(self, per_law_cap: int = 50):
        self._violations: list[Violation] = []
        self._per_law: dict[str, int] = {}
        self._cap = per_law_cap

    def add(self, law: str, detail: str):
        n = self._per_law.get(law, 0)
        self._per_law[law] = n + 1
        if n < self._cap:
            self._violations.append(Violation(law, detail))

    def report(self) -> ValidationReport:
        return ValidationReport(tuple(self._violations))
