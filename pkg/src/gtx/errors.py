"""Exception hierarchy shared by all modules."""
from __future__ import annotations


class GtxError(Exception):
    """Base class for domain errors (mapped to exit code 1 by the CLI)."""


class OverlapError(GtxError):
    """A span of inclusions is not non-overlapping."""


class DanglingError(GtxError):
    def __init__(self, node: str, edge: str):
        super().__init__(f"dangling condition fails: node {node!r} is attached to edge {edge!r}")
        self.node = node
        self.edge = edge


class MatchError(GtxError):
    pass


class NarrowingImpossible(GtxError):
    def __init__(self, cause: DanglingError):
        super().__init__(f"narrowing impossible: {cause}")
        self.node = cause.node
        self.edge = cause.edge


class NotCombinable(GtxError):
    pass


class IncompatibleDiagrams(GtxError):
    pass


class PreconditionViolated(GtxError):
    pass


class ValidationFailed(GtxError):
    pass


class NotTauCompatible(GtxError):
    pass


class NotUnique(GtxError):
    def __init__(self, candidates: list[str]):
        super().__init__(f"{len(candidates)} admissible rules: {', '.join(candidates) or '(none)'}")
        self.candidates = candidates


class SpecError(GtxError):
    """Syntax or semantic error in a spec document, with a source position."""

    def __init__(self, message: str, line: int = 0, col: int = 0):
        super().__init__(f"{line}:{col}: {message}" if line else message)
        self.message = message
        self.line = line
        self.col = col
