"""Exceptions raised by convexhd."""

from typing import Optional


class ConvexHDError(Exception):
    """Base class for every error raised by convexhd."""

    pass


class InvalidMap(ConvexHDError):
    """Raised when the involution or rotation system of a map is inconsistent."""

    pass


class MalformedDiagram(InvalidMap):
    """Raised when a decorated diagram breaks a disc-system invariant."""

    pass


class NotEmbedded(ConvexHDError):
    """Raised when a curve component crosses itself or branches."""

    pass


class GammaMismatch(ConvexHDError):
    """Raised when dividing-set endpoints do not correspond across a seam."""

    pass


class SearchBudgetExceeded(ConvexHDError):
    """Raised when an isomorphism search exceeds the configured dart bound."""

    pass


class NotTransverse(ConvexHDError):
    """Raised when a curve runs along the dividing set instead of crossing it."""

    pass


class NoAlternation(ConvexHDError):
    """Raised when dividing-set endpoints fail to alternate along a seam."""

    pass


class BadVertex(ConvexHDError):
    """Raised when a univalent graph vertex is off the dividing set."""

    pass


class NotAdmissible(ConvexHDError):
    """Raised when an arc is not admissible for a bypass."""

    pass


class BypassObstructed(NotAdmissible):
    """Raised when disc curves run through the neighbourhood of a bypass arc."""

    pass


class BadTwisting(ConvexHDError):
    """Raised when a stabilisation arc does not have twisting -1/2."""

    pass


class BadAttachingRegion(ConvexHDError):
    """Raised when a contact handle attaching region violates the handle model."""

    pass


class NoChords(ConvexHDError):
    """Raised when a disc carries no chords."""

    pass


class ArcMeetsChord(ConvexHDError):
    """Raised when an x-arc is not disjoint from the chords of its disc."""

    pass


class NotAdjacent(ConvexHDError):
    """Raised when two x-arcs do not share an endpoint."""

    pass


class LocalModelViolation(ConvexHDError):
    """Raised when a disc move's local model is not present."""

    def __init__(self, kind: str, clause: str) -> None:
        self.kind = kind
        self.clause = clause
        super().__init__(f"[{kind}] {clause}")


class WitnessFailed(ConvexHDError):
    """Raised when a constructed stabilisation witness does not verify."""

    pass


class StepRejected(ConvexHDError):
    """Raised when a script step fails validation."""

    def __init__(self, index: int, reason: str) -> None:
        self.index = index
        self.reason = reason
        super().__init__(f"step {index}: {reason}")


class NotConvexSplitting(ConvexHDError):
    """Raised when an operation needs a convex splitting."""

    pass


class ParseError(ConvexHDError):
    """Raised when a diagram file or move script cannot be parsed."""

    def __init__(self, line: int, col: int, expected: str, source: Optional[str] = None) -> None:
        self.line = line
        self.col = col
        self.expected = expected
        where = f"{source}:" if source else ""
        super().__init__(f"{where}{line}:{col}: expected {expected}")


class NonCrossingViolation(ConvexHDError):
    """Raised when a chord matching is crossing or not perfect."""

    pass
