"""Generators for the named test graphs, with their documented properties.

Every builder is deterministic: calling it twice yields graphs that compare
equal under :meth:`WeightedGraph.equals`.  Figure-derived graphs keep their
drawn vertex labels (``x0``, ``y1``, ...) so counterexample witnesses stay
legible.  Each catalog entry carries an ``expected`` table of properties that
the test suite asserts; the second tuple component records how the value is
known (construction, hand count, or a frozen solver result).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import Callable, Mapping

from .errors import DimensionOutOfRange, NonPositiveScale, NotUnweighted, UnknownFixture
from .graph import WeightedGraph, build_graph, is_unweighted

__all__ = [
    "hypercube",
    "ou_chain",
    "laborde_hebbare",
    "hss_negative_curvature",
    "ncp2_counterexample",
    "diagonal_square",
    "scaled",
    "FixtureCatalogEntry",
    "CATALOG",
    "build_fixture",
]


def hypercube(D: int) -> WeightedGraph:
    """The unweighted ``D``-dimensional hypercube.

    Vertices are the subsets of ``{1..D}`` encoded as bitmasks; the id of a
    vertex is its mask as a zero-padded decimal string so that lexicographic
    order equals numeric order.  Two vertices are adjacent iff their masks
    differ in exactly one bit.
    """
    if not 1 <= D <= 14:
        raise DimensionOutOfRange(f"hypercube dimension must be in 1..14, got {D}")
    width = len(str((1 << D) - 1))
    name = [f"{mask:0{width}d}" for mask in range(1 << D)]
    vertices = [(name[mask], 1.0) for mask in range(1 << D)]
    edges = [
        (name[mask], name[mask | (1 << b)], 1.0)
        for mask in range(1 << D)
        for b in range(D)
        if not mask & (1 << b)
    ]
    return build_graph(vertices, edges)


def ou_chain(D: int) -> WeightedGraph:
    """The weighted path ``0..D`` that the hypercube projects onto.

    Level ``k`` carries measure ``C(D, k)`` and the edge ``(k, k+1)`` carries
    weight ``C(D, k) * (D - k)``; this is the discrete Ornstein-Uhlenbeck
    chain (up to normalization).
    """
    if not 1 <= D <= 40:
        raise DimensionOutOfRange(f"chain dimension must be in 1..40, got {D}")
    vertices = [(str(k), float(comb(D, k))) for k in range(D + 1)]
    edges = [
        (str(k), str(k + 1), float(comb(D, k) * (D - k)))
        for k in range(D)
    ]
    return build_graph(vertices, edges)


# Edge tables for the drawn fixtures; one sorted adjacency block per vertex.
_LABORDE_HEBBARE_EDGES = (
    ("x", "y1"), ("x", "y2"), ("x", "y3"), ("x", "y4"),
    ("y1", "z1"), ("y1", "z2"), ("y1", "z4"),
    ("y2", "z1"), ("y2", "z3"), ("y2", "z5"),
    ("y3", "z2"), ("y3", "z3"), ("y3", "z6"),
    ("y4", "z4"), ("y4", "z5"), ("y4", "z6"),
    ("z1", "w1"), ("z1", "w2"),
    ("z2", "w1"), ("z2", "w3"),
    ("z3", "w2"), ("z3", "w3"),
    ("z4", "w2"), ("z4", "w3"),
    ("z5", "w1"), ("z5", "w3"),
    ("z6", "w1"), ("z6", "w2"),
)


def laborde_hebbare() -> WeightedGraph:
    """A bipartite 4-regular graph whose two-balls all look like cube two-balls.

    The graph is nevertheless not a hypercube: it has 14 vertices and its
    distance spheres from any root have sizes (1, 4, 6, 3), so shell-wise
    recognition fails at the third sphere.
    """
    names = ["x"] + [f"y{i}" for i in range(1, 5)] + [f"z{i}" for i in range(1, 7)]
    names += [f"w{i}" for i in range(1, 4)]
    vertices = [(v, 1.0) for v in names]
    edges = [(u, v, 1.0) for u, v in _LABORDE_HEBBARE_EDGES]
    return build_graph(vertices, edges)


_HSS_NEGATIVE_EDGES = tuple(
    [("x0", f"y{i}") for i in range(1, 5)]
    + [(f"z{i}", y) for i in (1, 2, 3) for y in ("y1", "y2", "v1", "v2")]
    + [(f"z{i}", y) for i in (4, 5, 6) for y in ("y3", "y4", "v3", "v4")]
    + [("w0", f"v{i}") for i in range(1, 5)]
)


def hss_negative_curvature() -> WeightedGraph:
    """A 4-regular bipartite graph with perfect shell structure around ``x0``
    (sphere volumes 1, 4, 6, 4, 1 and backward degree equal to the distance)
    whose punctured two-ball around ``x0`` is disconnected, forcing strictly
    negative curvature there.
    """
    names = ["x0"] + [f"y{i}" for i in range(1, 5)] + [f"z{i}" for i in range(1, 7)]
    names += [f"v{i}" for i in range(1, 5)] + ["w0"]
    vertices = [(v, 1.0) for v in names]
    edges = [(u, v, 1.0) for u, v in _HSS_NEGATIVE_EDGES]
    return build_graph(vertices, edges)


_NCP2_EDGES = tuple(
    [("x", f"y{i}") for i in range(1, 5)]
    + [(f"z{i}", y) for i in (3, 4) for y in ("y1", "y2", "y3", "y4")]
    + [("z1", "y1"), ("z2", "y2"), ("z5", "y3"), ("z6", "y4")]
)


def ncp2_counterexample() -> WeightedGraph:
    """Two hub vertices adjacent to the whole first sphere of ``x``.

    At ``x`` the one-sphere reduction still certifies curvature 2 (all
    reduced weights are 1/2 and the reduced spectral gap is 2), and the
    non-clustering property holds vacuously because the hubs have backward
    degree 4.  A strengthened variant of non-clustering that only assumes
    ``#S_2(x) = C(4, 2)`` fails here: ``y1`` and ``y2`` share the two hubs.
    Note the curvature certified at ``x`` is for the dimensionless inequality
    CD(2, inf); the graph is not regular (the outer spikes have degree 1).
    """
    names = ["x"] + [f"y{i}" for i in range(1, 5)] + [f"z{i}" for i in range(1, 7)]
    vertices = [(v, 1.0) for v in names]
    edges = [(u, v, 1.0) for u, v in _NCP2_EDGES]
    return build_graph(vertices, edges)


def diagonal_square() -> WeightedGraph:
    """A 4-cycle with one diagonal (the complete graph K4 minus one edge)."""
    vertices = [(v, 1.0) for v in "abcd"]
    edges = [("a", "b", 1.0), ("b", "c", 1.0), ("c", "d", 1.0),
             ("d", "a", 1.0), ("a", "c", 1.0)]
    return build_graph(vertices, edges)


def scaled(G: WeightedGraph, kappa0: float) -> WeightedGraph:
    """Multiply every edge weight of an unweighted graph by ``kappa0``.

    Measures stay at 1, so every oriented edge degree becomes ``kappa0``.
    """
    if not is_unweighted(G):
        raise NotUnweighted("scaled expects an unweighted graph")
    kappa0 = float(kappa0)
    if not kappa0 > 0:
        raise NonPositiveScale(f"scale must be positive, got {kappa0}")
    w = G.weights_sparse().copy()
    w = w * kappa0
    return WeightedGraph(G.vertex_ids, G.m.copy(), w)


# ---------------------------------------------------------------------------
# catalog


@dataclass(frozen=True)
class FixtureCatalogEntry:
    """A named builder plus the property table the test suite asserts."""

    name: str
    builder: Callable[..., WeightedGraph]
    defaults: Mapping[str, object] = field(default_factory=dict)
    expected: Mapping[str, tuple[object, str]] = field(default_factory=dict)

    def build(self, **params) -> WeightedGraph:
        merged = dict(self.defaults)
        merged.update(params)
        return self.builder(**merged)


CATALOG: dict[str, FixtureCatalogEntry] = {
    "hypercube": FixtureCatalogEntry(
        name="hypercube",
        builder=lambda dim: hypercube(dim),
        defaults={"dim": 4},
        expected={
            "vertices": (16, "2**dim by construction"),
            "edges": (32, "dim * 2**(dim-1) by construction"),
            "regular_degree": (4, "by construction"),
            "bipartite": (True, "distance parity"),
            "diameter": (4, "opposite corners"),
            "min_curvature": (2.0, "frozen from the curvature solver"),
        },
    ),
    "ou-chain": FixtureCatalogEntry(
        name="ou-chain",
        builder=lambda dim: ou_chain(dim),
        defaults={"dim": 4},
        expected={
            "vertices": (5, "dim+1 levels"),
            "measures": ((1.0, 4.0, 6.0, 4.0, 1.0), "binomial levels"),
            "weights": ((4.0, 12.0, 12.0, 4.0), "C(dim,k)*(dim-k)"),
            "constant_vertex_degree": (4.0, "hand computed"),
            "min_curvature": (2.0, "frozen from the curvature solver"),
        },
    ),
    "laborde-hebbare": FixtureCatalogEntry(
        name="laborde-hebbare",
        builder=laborde_hebbare,
        expected={
            "vertices": (14, "hand count of the drawing"),
            "regular_degree": (4, "hand count"),
            "bipartite": (True, "level structure"),
            "sphere_sizes_from_x": ((1, 4, 6, 3), "hand count"),
        },
    ),
    "hss-negative": FixtureCatalogEntry(
        name="hss-negative",
        builder=hss_negative_curvature,
        expected={
            "vertices": (16, "hand count of the drawing"),
            "regular_degree": (4, "hand count"),
            "bipartite": (True, "level structure"),
            "sphere_sizes_from_x0": ((1, 4, 6, 4, 1), "hand count"),
            "hss_root": ("x0", "backward degrees equal distance"),
            "curvature_negative_at": ("x0", "punctured two-ball splits"),
        },
    ),
    "ncp2": FixtureCatalogEntry(
        name="ncp2",
        builder=ncp2_counterexample,
        expected={
            "vertices": (11, "hand count of the drawing"),
            "two_sphere_size_at_x": (6, "hand count"),
            "one_sphere_weights_at_x": (0.5, "two hubs of backward degree 4"),
            "one_sphere_gap_at_x": (2.0, "complete graph on 4 with weight 1/2"),
            "ncp2_violating_pair": (("y1", "y2"), "both hubs are shared"),
        },
    ),
    "diagonal-square": FixtureCatalogEntry(
        name="diagonal-square",
        builder=diagonal_square,
        expected={
            "vertices": (4, "by construction"),
            "bipartite": (False, "triangle a-b-c"),
            "spectrum": ((0.0, 2.0, 4.0, 4.0), "frozen 4x4 eigensolve"),
            "min_curvature": (2.0, "frozen from the curvature solver"),
        },
    ),
}


def build_fixture(name: str, **params) -> WeightedGraph:
    """Build a catalog fixture by name; raises :class:`UnknownFixture`."""
    try:
        entry = CATALOG[name]
    except KeyError:
        known = ", ".join(sorted(CATALOG))
        raise UnknownFixture(f"unknown fixture {name!r} (known: {known})") from None
    return entry.build(**params)
