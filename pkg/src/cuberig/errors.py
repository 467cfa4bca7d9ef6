"""Exception taxonomy shared by every module in the package.

All errors derive from :class:`GraphError`, so callers that want a single
catch-all can use that.  Errors that carry a witness (a vertex, an edge, a
pair of conflicting values) store it on attributes so reports can surface
it without parsing message strings.
"""

from __future__ import annotations


class GraphError(Exception):
    """Base class for every error raised by this package."""


# ---------------------------------------------------------------------------
# graph construction / lookup


class NonPositiveMeasure(GraphError):
    """A vertex measure was zero or negative."""


class NonPositiveWeight(GraphError):
    """An edge weight was zero or negative."""


class SelfLoop(GraphError):
    """An edge joined a vertex to itself."""


class DuplicateEdge(GraphError):
    """The same unordered vertex pair appeared twice in an edge list."""


class DuplicateVertex(GraphError):
    """The same vertex identifier appeared twice in a vertex list."""


class UnknownEndpoint(GraphError):
    """An edge referenced a vertex that is not in the vertex list."""


class UnknownVertex(GraphError):
    """A vertex identifier is not present in the graph."""


class NotAdjacent(GraphError):
    """The two vertices are not joined by an edge of positive weight."""


class Unreachable(GraphError):
    """The vertex cannot be reached from the requested root."""


class Disconnected(GraphError):
    """The operation requires a connected graph."""


class NotUnweighted(GraphError):
    """The operation requires unit edge weights and unit vertex measures."""


class DimensionOutOfRange(GraphError):
    """A generator dimension parameter is outside its supported range."""


class NonPositiveScale(GraphError):
    """A scaling factor must be strictly positive."""


# ---------------------------------------------------------------------------
# operators / spectra


class DomainMismatch(GraphError):
    """A function's domain does not match the graph's vertex set."""


class NegativeTime(GraphError):
    """Heat semigroup times must be nonnegative."""


class SolverFailure(GraphError):
    """The dense eigensolver failed to converge."""


class IndexOutOfRange(GraphError):
    """An eigenvalue index is outside ``0 .. #V - 1``."""


class NoMidpointPath(GraphError):
    """A shell vertex has no two-step path back towards the root."""


class InconsistentExtension(GraphError):
    """Two anchors force different values at the same vertex.

    Raised by the shell-by-shell eigenfunction extension when the supplied
    one-ball data is not the trace of an eigenfunction-plus-constant for
    the requested eigenvalue.
    """

    def __init__(self, vertex, anchor_a, anchor_b, value_a, value_b):
        self.vertex = vertex
        self.anchor_a = anchor_a
        self.anchor_b = anchor_b
        self.value_a = value_a
        self.value_b = value_b
        super().__init__(
            f"extension to {vertex!r} is inconsistent: anchor {anchor_a!r} "
            f"gives {value_a!r}, anchor {anchor_b!r} gives {value_b!r}"
        )


# ---------------------------------------------------------------------------
# curvature


class IsolatedVertex(GraphError):
    """Curvature is vacuous (+inf) at a vertex with no neighbors."""


class NonPositiveDimension(GraphError):
    """The dimension parameter of CD(K, n) must lie in (0, inf]."""


class TriangleAtCenter(GraphError):
    """The one-sphere construction requires an independent first sphere."""


class PreconditionViolated(GraphError):
    """A named hypothesis of the requested criterion fails.

    ``hypothesis`` holds a short machine-readable name of the failed
    assumption (e.g. ``"regular"``, ``"triangle-free"``).
    """

    def __init__(self, hypothesis, message=None):
        self.hypothesis = hypothesis
        super().__init__(message or f"hypothesis violated: {hypothesis}")


# ---------------------------------------------------------------------------
# rigidity / recognition


class NotRegular(GraphError):
    """The operation requires a (combinatorially) regular neighborhood."""


class NonPositiveK(GraphError):
    """The curvature constant K must be strictly positive."""


class NonPositiveCurvature(GraphError):
    """The harness requires a positive minimum curvature."""


class NonIntegerBinomial(GraphError):
    """Strict shell-volume comparison needs a nonnegative integer dimension."""


class NotSymmetric(GraphError):
    """The graph is not weakly spherically symmetric around the root."""

    def __init__(self, report, message=None):
        self.report = report
        super().__init__(message or "graph is not weakly spherically symmetric")


class MalformedInput(GraphError):
    """An input family does not satisfy the documented shape constraints."""


# ---------------------------------------------------------------------------
# serialization / CLI


class ParseError(GraphError):
    """A JSON document does not conform to the canonical graph format."""


class UnknownFixture(GraphError):
    """The requested fixture name is not in the catalog."""
