"""Exception types shared across the package.

The CLI maps these onto exit codes: parse errors exit 2, resource limits
exit 3, internal inconsistencies exit 4, and any other failed check exit 1.
"""


class SoficRankError(Exception):
    """Base class for all domain errors raised by this package."""


class ParseError(SoficRankError):
    """Malformed instance file, graph file, or group table."""


class ResourceLimitError(SoficRankError):
    """A configured size limit (ball elements, vertices) was exceeded."""


class InternalInconsistency(SoficRankError):
    """An inequality guaranteed by theory failed to hold.

    Raising this always indicates a bug in the implementation, never an
    expected outcome of an experiment.
    """


class CheckFailedError(SoficRankError):
    """A requested verification did not hold on the given input."""


class AlphabetMismatch(CheckFailedError):
    """Graph label alphabet does not match the group's generator set."""


class CardinalityViolation(CheckFailedError):
    """The good-vertex set is smaller than (1 - epsilon) * |V|."""


class BallMismatch(CheckFailedError):
    """Some required vertex neighborhood is not isomorphic to the Cayley ball."""

    def __init__(self, vertex: int, message: str = ""):
        self.vertex = vertex
        super().__init__(message or f"neighborhood at vertex {vertex} is not isomorphic to the Cayley ball")


class PreconditionDensity(CheckFailedError):
    """Fewer than half the vertices were supplied as good vertices."""


class ApproximationTooCoarse(CheckFailedError):
    """The approximation's verified radius is below the required 2*r0 + 1."""


class KernelSearchExhausted(CheckFailedError):
    """No kernel vector was found up to the search bound (required for an upper-bound run)."""
