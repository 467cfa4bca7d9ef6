"""Finite weighted graphs with positive vertex measures.

A graph is a triple ``(V, w, m)``: a finite vertex set, a symmetric
nonnegative edge weight ``w`` that vanishes on the diagonal, and a strictly
positive vertex measure ``m``.  Two vertices are adjacent iff ``w(x, y) > 0``.

Instances are immutable once built and iterate vertices in sorted-identifier
order, so every quantity derived from a graph is reproducible byte for byte.
That determinism contract is relied on throughout: reports, counterexample
witnesses and JSON serializations never depend on hash ordering.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np
import scipy.sparse as sp

from .errors import (
    Disconnected,
    DuplicateEdge,
    DuplicateVertex,
    NonPositiveMeasure,
    NonPositiveWeight,
    NotAdjacent,
    NotUnweighted,
    SelfLoop,
    UnknownEndpoint,
    UnknownVertex,
    Unreachable,
)

__all__ = [
    "WeightedGraph",
    "ShellDecomposition",
    "Bipartiteness",
    "build_graph",
    "vertex_degree",
    "vertex_degrees",
    "combinatorial_degree",
    "combinatorial_degrees",
    "edge_degree",
    "shells",
    "diameter",
    "backward_degree",
    "forward_degree",
    "backward_forward_profile",
    "is_bipartite",
    "is_connected",
    "is_unweighted",
    "unweighted_representation",
    "cartesian_product",
    "induced_subgraph",
    "distance_function",
]


class WeightedGraph:
    """Immutable weighted graph.  Build instances through :func:`build_graph`.

    Attributes
    ----------
    vertex_ids : tuple of str
        Vertex identifiers in sorted order; all array-valued quantities in
        this package are aligned with this order.
    m : ndarray
        Positive vertex measures, aligned with ``vertex_ids``.
    """

    __slots__ = ("vertex_ids", "m", "_w", "_index", "_strength", "__weakref__")

    def __init__(self, vertex_ids, m, w):
        self.vertex_ids = tuple(vertex_ids)
        self.m = np.asarray(m, dtype=float)
        self.m.setflags(write=False)
        self._w = w.tocsr()
        self._w.sort_indices()
        self._index = {v: i for i, v in enumerate(self.vertex_ids)}
        strength = np.asarray(self._w.sum(axis=1)).ravel()
        strength.setflags(write=False)
        self._strength = strength

    # -- basic queries ------------------------------------------------

    @property
    def n(self) -> int:
        """Number of vertices."""
        return len(self.vertex_ids)

    @property
    def edge_count(self) -> int:
        """Number of unordered adjacent pairs."""
        return self._w.nnz // 2

    def __contains__(self, vertex) -> bool:
        return vertex in self._index

    def __iter__(self):
        return iter(self.vertex_ids)

    def __repr__(self):
        return f"WeightedGraph(n={self.n}, edges={self.edge_count})"

    def index_of(self, vertex: str) -> int:
        try:
            return self._index[vertex]
        except KeyError:
            raise UnknownVertex(f"unknown vertex {vertex!r}") from None

    def measure(self, vertex: str) -> float:
        return float(self.m[self.index_of(vertex)])

    def weight(self, u: str, v: str) -> float:
        return float(self._w[self.index_of(u), self.index_of(v)])

    def neighbors(self, vertex: str) -> tuple[str, ...]:
        """Adjacent vertices, in sorted-identifier order."""
        i = self.index_of(vertex)
        return tuple(self.vertex_ids[j] for j in self.neighbor_indices(i))

    def neighbor_indices(self, i: int) -> np.ndarray:
        """Indices adjacent to index ``i`` (ascending)."""
        return self._w.indices[self._w.indptr[i] : self._w.indptr[i + 1]]

    def neighbor_weights(self, i: int) -> np.ndarray:
        return self._w.data[self._w.indptr[i] : self._w.indptr[i + 1]]

    @property
    def strength(self) -> np.ndarray:
        """Row sums of the weight matrix, i.e. ``m(x) * Deg(x)``."""
        return self._strength

    def weights_sparse(self) -> sp.csr_matrix:
        """The symmetric weight matrix in CSR form (do not mutate)."""
        return self._w

    def weight_block(self, indices: Sequence[int]) -> np.ndarray:
        """Dense weight sub-matrix for the given vertex indices."""
        idx = np.asarray(indices, dtype=int)
        return self._w[idx][:, idx].toarray()

    def edges(self):
        """Yield ``(u, v, w)`` with ``u < v``, sorted lexicographically."""
        coo = self._w.tocoo()
        for i, j, w in zip(coo.row, coo.col, coo.data):
            if i < j:
                yield self.vertex_ids[i], self.vertex_ids[j], float(w)

    def equals(self, other: "WeightedGraph") -> bool:
        """Exact equality of identifiers, measures and weights."""
        if self.vertex_ids != other.vertex_ids:
            return False
        if not np.array_equal(self.m, other.m):
            return False
        diff = (self._w != other._w)
        return diff.nnz == 0 if sp.issparse(diff) else not bool(diff)


@dataclass(frozen=True)
class ShellDecomposition:
    """BFS distance layers around a root.

    ``spheres[k]`` is the sorted tuple of vertices at combinatorial distance
    exactly ``k``; unreachable vertices have ``dist[v] is None``.
    """

    root: str
    dist: Mapping[str, Optional[int]]
    spheres: tuple[tuple[str, ...], ...]
    eccentricity: int
    dist_index: np.ndarray = field(repr=False, compare=False, default=None)

    def sphere(self, k: int) -> tuple[str, ...]:
        if 0 <= k < len(self.spheres):
            return self.spheres[k]
        return ()

    def ball(self, k: int) -> tuple[str, ...]:
        out: list[str] = []
        for sphere in self.spheres[: k + 1]:
            out.extend(sphere)
        return tuple(out)

    @property
    def reachable_count(self) -> int:
        return sum(len(s) for s in self.spheres)

    @property
    def all_reachable(self) -> bool:
        return self.reachable_count == len(self.dist)


@dataclass(frozen=True)
class Bipartiteness:
    """Result of the two-coloring test.

    ``parts`` holds the two color classes when the graph is bipartite,
    otherwise ``odd_cycle`` holds a closed odd walk witnessing failure.
    """

    parts: Optional[tuple[tuple[str, ...], tuple[str, ...]]]
    odd_cycle: Optional[tuple[str, ...]]

    def __bool__(self) -> bool:
        return self.parts is not None


# ---------------------------------------------------------------------------
# construction


def build_graph(
    vertices: Iterable[tuple[str, float]],
    edges: Iterable[tuple[str, str, float]],
) -> WeightedGraph:
    """Validate and build a :class:`WeightedGraph`.

    Parameters
    ----------
    vertices : iterable of (id, measure)
        Measures must be strictly positive; identifiers must be unique.
    edges : iterable of (u, v, weight)
        Weights must be strictly positive (absent edges are simply omitted);
        self-loops and repeated unordered pairs are rejected.
    """
    seen: dict[str, float] = {}
    for vid, measure in vertices:
        vid = str(vid)
        if vid in seen:
            raise DuplicateVertex(f"vertex {vid!r} listed twice")
        measure = float(measure)
        if not measure > 0:
            raise NonPositiveMeasure(f"vertex {vid!r} has measure {measure}")
        seen[vid] = measure

    ids = tuple(sorted(seen))
    index = {v: i for i, v in enumerate(ids)}
    m = np.array([seen[v] for v in ids], dtype=float)

    rows: list[int] = []
    cols: list[int] = []
    vals: list[float] = []
    pairs: set[tuple[int, int]] = set()
    for u, v, w in edges:
        u, v = str(u), str(v)
        if u not in index:
            raise UnknownEndpoint(f"edge endpoint {u!r} is not a vertex")
        if v not in index:
            raise UnknownEndpoint(f"edge endpoint {v!r} is not a vertex")
        if u == v:
            raise SelfLoop(f"self-loop at {u!r}")
        w = float(w)
        if not w > 0:
            raise NonPositiveWeight(f"edge ({u!r}, {v!r}) has weight {w}")
        i, j = index[u], index[v]
        key = (i, j) if i < j else (j, i)
        if key in pairs:
            raise DuplicateEdge(f"edge ({u!r}, {v!r}) listed twice")
        pairs.add(key)
        # insert both orientations with the identical float so that the
        # stored matrix is symmetric bit for bit
        rows.extend((i, j))
        cols.extend((j, i))
        vals.extend((w, w))

    n = len(ids)
    w_mat = sp.coo_matrix((vals, (rows, cols)), shape=(n, n))
    return WeightedGraph(ids, m, w_mat)


def induced_subgraph(G: WeightedGraph, vertices: Iterable[str]) -> WeightedGraph:
    """The induced subgraph on the given vertices (re-sorted by id)."""
    keep = sorted({str(v) for v in vertices})
    idx = [G.index_of(v) for v in keep]
    m = G.m[idx].copy()
    w = G.weights_sparse()[idx][:, idx]
    return WeightedGraph(keep, m, w)


# ---------------------------------------------------------------------------
# degrees


def vertex_degree(G: WeightedGraph, x: str) -> float:
    """Weighted degree ``Deg(x)``: total incident weight over ``m(x)``."""
    i = G.index_of(x)
    return float(G.strength[i] / G.m[i])


def vertex_degrees(G: WeightedGraph) -> np.ndarray:
    """Weighted degrees for all vertices, aligned with ``G.vertex_ids``."""
    return G.strength / G.m


def combinatorial_degree(G: WeightedGraph, x: str) -> int:
    """Number of neighbors of ``x``."""
    i = G.index_of(x)
    return int(G.neighbor_indices(i).size)


def combinatorial_degrees(G: WeightedGraph) -> np.ndarray:
    return np.diff(G.weights_sparse().indptr)


def edge_degree(G: WeightedGraph, x: str, y: str) -> float:
    """Oriented edge degree ``w(x, y) / m(x)``; requires ``x ~ y``."""
    i, j = G.index_of(x), G.index_of(y)
    w = G.weights_sparse()[i, j]
    if w <= 0:
        raise NotAdjacent(f"{x!r} and {y!r} are not adjacent")
    return float(w / G.m[i])


# ---------------------------------------------------------------------------
# metric structure


def _bfs(G: WeightedGraph, source: int) -> np.ndarray:
    dist = np.full(G.n, -1, dtype=int)
    dist[source] = 0
    queue = deque([source])
    while queue:
        i = queue.popleft()
        d = dist[i] + 1
        for j in G.neighbor_indices(i):
            if dist[j] < 0:
                dist[j] = d
                queue.append(j)
    return dist


def shells(G: WeightedGraph, x0: str) -> ShellDecomposition:
    """BFS sphere decomposition around ``x0``; unreachable vertices flagged."""
    src = G.index_of(x0)
    dist = _bfs(G, src)
    ecc = int(dist.max())
    spheres: list[list[str]] = [[] for _ in range(ecc + 1)]
    dist_map: dict[str, Optional[int]] = {}
    for v, d in zip(G.vertex_ids, dist):
        if d < 0:
            dist_map[v] = None
        else:
            dist_map[v] = int(d)
            spheres[d].append(v)
    dist.setflags(write=False)
    return ShellDecomposition(
        root=x0,
        dist=dist_map,
        spheres=tuple(tuple(s) for s in spheres),
        eccentricity=ecc,
        dist_index=dist,
    )


def is_connected(G: WeightedGraph) -> bool:
    if G.n == 0:
        return True
    return bool((_bfs(G, 0) >= 0).all())


def diameter(G: WeightedGraph) -> int:
    """Maximum pairwise combinatorial distance; requires connectivity."""
    best = 0
    for i in range(G.n):
        dist = _bfs(G, i)
        if (dist < 0).any():
            raise Disconnected("diameter is undefined on a disconnected graph")
        best = max(best, int(dist.max()))
    return best


def distance_function(G: WeightedGraph, x0: str) -> np.ndarray:
    """The function ``d(x0, .)`` as an array; requires all vertices reachable."""
    sh = shells(G, x0)
    if not sh.all_reachable:
        raise Disconnected(f"not all vertices are reachable from {x0!r}")
    return sh.dist_index.astype(float)


def backward_forward_profile(
    G: WeightedGraph, x0: str
) -> tuple[np.ndarray, np.ndarray, ShellDecomposition]:
    """Arrays of backward and forward degrees w.r.t. ``x0`` for all vertices.

    Entries for unreachable vertices are NaN.
    """
    sh = shells(G, x0)
    dist = sh.dist_index
    coo = G.weights_sparse().tocoo()
    d_minus = np.zeros(G.n)
    d_plus = np.zeros(G.n)
    reach_r = dist[coo.row] >= 0
    reach_c = dist[coo.col] >= 0
    ok = reach_r & reach_c
    closer = ok & (dist[coo.row] < dist[coo.col])
    farther = ok & (dist[coo.row] > dist[coo.col])
    np.add.at(d_minus, coo.col[closer], coo.data[closer])
    np.add.at(d_plus, coo.col[farther], coo.data[farther])
    d_minus /= G.m
    d_plus /= G.m
    unreachable = dist < 0
    d_minus[unreachable] = np.nan
    d_plus[unreachable] = np.nan
    return d_minus, d_plus, sh


def _directional_degree(G, x0, z, forward):
    iz = G.index_of(z)
    sh = shells(G, x0)
    dz = sh.dist[z]
    if dz is None:
        raise Unreachable(f"{z!r} is not reachable from {x0!r}")
    total = 0.0
    for j, w in zip(G.neighbor_indices(iz), G.neighbor_weights(iz)):
        dj = sh.dist_index[j]
        if dj < 0:
            continue
        if (dj > dz) if forward else (dj < dz):
            total += w
    return total / G.m[iz]


def backward_degree(G: WeightedGraph, x0: str, z: str) -> float:
    """Normalized weight from ``z`` towards the previous sphere around ``x0``."""
    return _directional_degree(G, x0, z, forward=False)


def forward_degree(G: WeightedGraph, x0: str, z: str) -> float:
    """Normalized weight from ``z`` towards the next sphere around ``x0``."""
    return _directional_degree(G, x0, z, forward=True)


# ---------------------------------------------------------------------------
# bipartiteness


def _odd_cycle(parent: dict[int, int], u: int, v: int) -> list[int]:
    # walk both conflict endpoints to the root and splice at the first
    # common ancestor; equal BFS parity of u and v makes the cycle odd
    path_u = [u]
    while path_u[-1] in parent:
        path_u.append(parent[path_u[-1]])
    path_v = [v]
    on_u = {node: k for k, node in enumerate(path_u)}
    while path_v[-1] not in on_u:
        path_v.append(parent[path_v[-1]])
    meet = path_v[-1]
    cycle = path_u[: on_u[meet] + 1]
    cycle.extend(reversed(path_v[:-1]))
    return cycle


def is_bipartite(G: WeightedGraph) -> Bipartiteness:
    """Two-color the graph by BFS parity, or exhibit an odd cycle."""
    color = np.full(G.n, -1, dtype=int)
    parent: dict[int, int] = {}
    for start in range(G.n):
        if color[start] >= 0:
            continue
        color[start] = 0
        queue = deque([start])
        while queue:
            i = queue.popleft()
            for j in G.neighbor_indices(i):
                if color[j] < 0:
                    color[j] = color[i] ^ 1
                    parent[j] = i
                    queue.append(j)
                elif color[j] == color[i]:
                    cycle = _odd_cycle(parent, int(i), int(j))
                    return Bipartiteness(
                        parts=None,
                        odd_cycle=tuple(G.vertex_ids[k] for k in cycle),
                    )
    left = tuple(v for v, c in zip(G.vertex_ids, color) if c == 0)
    right = tuple(v for v, c in zip(G.vertex_ids, color) if c == 1)
    return Bipartiteness(parts=(left, right), odd_cycle=None)


# ---------------------------------------------------------------------------
# derived graphs


def is_unweighted(G: WeightedGraph) -> bool:
    """True when every weight is exactly 1 and every measure is exactly 1."""
    return bool((G.m == 1.0).all() and (G.weights_sparse().data == 1.0).all())


def unweighted_representation(G: WeightedGraph) -> WeightedGraph:
    """Same adjacency with unit weights and unit measures."""
    w = G.weights_sparse().copy()
    w.data = np.ones_like(w.data)
    return WeightedGraph(G.vertex_ids, np.ones(G.n), w)


def cartesian_product(G: WeightedGraph, H: WeightedGraph) -> WeightedGraph:
    """Cartesian product of two unweighted graphs on id pairs ``(u,v)``."""
    if not is_unweighted(G) or not is_unweighted(H):
        raise NotUnweighted("cartesian_product is defined for unweighted graphs")
    verts = [(f"({u},{v})", 1.0) for u in G.vertex_ids for v in H.vertex_ids]
    edges: list[tuple[str, str, float]] = []
    for u, up, _ in G.edges():
        for v in H.vertex_ids:
            edges.append((f"({u},{v})", f"({up},{v})", 1.0))
    for v, vp, _ in H.edges():
        for u in G.vertex_ids:
            edges.append((f"({u},{v})", f"({u},{vp})", 1.0))
    return build_graph(verts, edges)
