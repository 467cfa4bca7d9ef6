"""Exact per-vertex curvature bounds and the one-sphere spectral criterion.

The curvature of a vertex is the best constant in the pointwise inequality

    gamma2(f)(x) >= (1/n) (lap f)^2(x) + K * gamma(f)(x)   for all f,

computed exactly as a generalized eigenvalue problem.  The two-ball matrix
of ``gamma2`` has a positive, decoupled diagonal block on the outer sphere,
so the outer coordinates can be eliminated by an exact Schur complement;
the reduced form lives on the one-ball where ``gamma`` is positive definite
modulo constants.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Optional

import numpy as np
import scipy.linalg

from .errors import (
    Disconnected,
    IsolatedVertex,
    NonPositiveDimension,
    NotUnweighted,
    PreconditionViolated,
    TriangleAtCenter,
)
from .graph import (
    WeightedGraph,
    combinatorial_degrees,
    is_connected,
    is_unweighted,
    shells,
    vertex_degree,
)
from .operators import local_gamma2_matrix, local_gamma_matrix

__all__ = [
    "CurvatureCertificate",
    "CdReport",
    "OneSphereLaplacian",
    "curvature_infty",
    "curvature_dim",
    "satisfies_cd",
    "one_sphere_laplacian",
    "cd2_via_one_sphere",
    "sphere_size_bound",
]

# Tolerance ladder: matrix assembly noise, eigensolver residuals, and the
# global CD decision margin are kept three orders apart.
ASSEMBLY_TOL = 1e-12
EIGEN_TOL = 1e-9
CD_DECISION_TOL = 1e-7


@dataclass(frozen=True)
class CurvatureCertificate:
    """The curvature value at a vertex together with its minimizer.

    The minimizer is supported on the two-ball, normalized to
    ``gamma(f)(vertex) = 1``, and achieves ``gamma2(f)(vertex) = k_infinity``.
    """

    vertex: str
    k_infinity: float
    minimizer: Mapping[str, float]


@dataclass(frozen=True)
class CdReport:
    """Outcome of a global CD(K, n) check with the per-vertex minima."""

    K: float
    n: float
    holds: bool
    curvatures: Mapping[str, float]
    min_vertex: str
    min_value: float
    tolerance: float

    def __bool__(self) -> bool:
        return self.holds

    def to_json_dict(self) -> dict:
        return {
            "K": self.K,
            "n": None if math.isinf(self.n) else self.n,
            "holds": self.holds,
            "min_vertex": self.min_vertex,
            "min_value": self.min_value,
            "tolerance": self.tolerance,
            "per_vertex": dict(self.curvatures),
        }


def _constants_complement(dim: int) -> np.ndarray:
    ones = np.ones((1, dim))
    return scipy.linalg.null_space(ones)


def _reduced_forms(G: WeightedGraph, x: str):
    """Schur-complement ``gamma2`` onto the one-ball; return (Q, B, parts).

    ``parts`` carries the pieces needed to lift a one-ball minimizer back to
    the two-ball: the support ordering and the elimination map.
    """
    ix = G.index_of(x)
    if G.neighbor_indices(ix).size == 0:
        raise IsolatedVertex(
            f"vertex {x!r} has no neighbors; its curvature is vacuously +inf"
        )
    g2 = local_gamma2_matrix(G, x)
    g1 = local_gamma_matrix(G, x)
    n1 = len(g1.support)
    n2 = len(g2.support) - n1
    A = g2.matrix
    scale = max(1.0, float(np.abs(A).max()))
    if n2:
        outer = A[n1:, n1:]
        off = outer - np.diag(np.diag(outer))
        if np.abs(off).max() > ASSEMBLY_TOL * scale:
            raise AssertionError("outer-sphere block of gamma2 is not diagonal")
        diag = np.diag(outer)
        if diag.min() <= 0:
            raise AssertionError("outer-sphere diagonal of gamma2 is not positive")
        cross = A[:n1, n1:]
        Q = A[:n1, :n1] - cross @ (cross.T / diag[:, None])
        lift = -(cross.T / diag[:, None])
    else:
        Q = A.copy()
        lift = np.zeros((0, n1))
    B = g1.matrix
    for M, name in ((Q, "reduced gamma2"), (B, "gamma")):
        drift = np.abs(M @ np.ones(n1)).max()
        if drift > 1e-10 * max(1.0, np.abs(M).max()):
            raise AssertionError(f"{name} does not annihilate constants ({drift})")
    return Q, B, (g2.support, n1, lift)


def _minimize_quotient(Q: np.ndarray, B: np.ndarray):
    """Smallest generalized eigenvalue of (Q, B) on the complement of constants."""
    n1 = Q.shape[0]
    U = _constants_complement(n1)
    Qu = U.T @ Q @ U
    Bu = U.T @ B @ U
    Bu = 0.5 * (Bu + Bu.T)
    Qu = 0.5 * (Qu + Qu.T)
    floor = np.linalg.eigvalsh(Bu).min()
    # gamma is singular exactly on constants when all incident weights are
    # positive, so the reduced mass matrix must be definite
    if floor <= ASSEMBLY_TOL * max(1.0, np.abs(Bu).max()):
        raise AssertionError("gamma degenerates beyond constants at this vertex")
    vals, vecs = scipy.linalg.eigh(Qu, Bu)
    v = U @ vecs[:, 0]
    nz = np.nonzero(np.abs(v) > 1e-12)[0]
    if nz.size and v[nz[0]] < 0:
        v = -v
    return float(vals[0]), v


def curvature_infty(G: WeightedGraph, x: str) -> CurvatureCertificate:
    """Best constant ``K`` with ``gamma2(f)(x) >= K gamma(f)(x)`` for all f.

    Returns the minimum of ``gamma2(f)(x)`` over ``gamma(f)(x) = 1`` and a
    minimizing function supported on the two-ball of ``x``.
    """
    Q, B, (support, n1, lift) = _reduced_forms(G, x)
    value, inner = _minimize_quotient(Q, B)
    outer = lift @ inner
    minimizer = {v: 0.0 for v in G.vertex_ids}
    for v, val in zip(support[:n1], inner):
        minimizer[v] = float(val)
    for v, val in zip(support[n1:], outer):
        minimizer[v] = float(val)
    return CurvatureCertificate(vertex=x, k_infinity=value, minimizer=minimizer)


def curvature_dim(G: WeightedGraph, x: str, n: float) -> float:
    """Best constant in CD(K, n) at ``x`` for a dimension ``n`` in (0, inf]."""
    if not n > 0:
        raise NonPositiveDimension(f"dimension must be positive, got {n}")
    Q, B, (support, n1, _) = _reduced_forms(G, x)
    if not math.isinf(n):
        # (lap f)(x) only reads the one-ball, so elimination is unaffected
        # and the dimension term is a rank-one correction of the reduced form
        ix = G.index_of(x)
        coeff = np.zeros(n1)
        coeff[0] = -vertex_degree(G, x)
        index = {v: i for i, v in enumerate(support[:n1])}
        for j, w in zip(G.neighbor_indices(ix), G.neighbor_weights(ix)):
            coeff[index[G.vertex_ids[j]]] = w / G.m[ix]
        Q = Q - np.outer(coeff, coeff) / n
    value, _ = _minimize_quotient(Q, B)
    return value


def satisfies_cd(G: WeightedGraph, K: float, n: float) -> CdReport:
    """Check the global curvature-dimension inequality CD(K, n).

    Holds iff the per-vertex best constant is at least ``K`` minus the
    decision margin ``1e-7`` at every vertex.
    """
    if not is_connected(G):
        raise Disconnected("the global CD check assumes a connected graph")
    curvatures: dict[str, float] = {}
    for x in G.vertex_ids:
        curvatures[x] = curvature_dim(G, x, n)
    min_vertex = min(curvatures, key=lambda v: (curvatures[v], v))
    min_value = curvatures[min_vertex]
    return CdReport(
        K=float(K),
        n=float(n),
        holds=bool(min_value >= K - CD_DECISION_TOL),
        curvatures=curvatures,
        min_vertex=min_vertex,
        min_value=min_value,
        tolerance=CD_DECISION_TOL,
    )


# ---------------------------------------------------------------------------
# the one-sphere criterion


@dataclass(frozen=True)
class OneSphereLaplacian:
    """Reduced weighted Laplacian on the first sphere of a vertex.

    Neighbors ``y_i, y_j`` of the center are joined with weight
    ``w''(y_i, y_j) = sum_z w(y_i, z) w(z, y_j) / dminus(z)`` over the
    two-sphere vertices ``z``; ``lambda1`` is the second-smallest eigenvalue
    of the associated Laplacian.
    """

    center: str
    vertices: tuple[str, ...]
    weights: np.ndarray
    lambda1: float


def one_sphere_laplacian(G: WeightedGraph, x: str) -> OneSphereLaplacian:
    """Build the reduced one-sphere Laplacian at ``x`` and its spectral gap."""
    if not is_unweighted(G):
        raise NotUnweighted("the one-sphere reduction is defined for unweighted graphs")
    sh = shells(G, x)
    ring = sh.sphere(1)
    two = sh.sphere(2)
    ring_idx = [G.index_of(v) for v in ring]
    w = G.weights_sparse()
    for a in range(len(ring_idx)):
        for b in range(a + 1, len(ring_idx)):
            if w[ring_idx[a], ring_idx[b]] > 0:
                raise TriangleAtCenter(
                    f"neighbors {ring[a]!r} and {ring[b]!r} of {x!r} are adjacent"
                )
    r = len(ring)
    weights = np.zeros((r, r))
    for z in two:
        iz = G.index_of(z)
        back = [a for a, iy in enumerate(ring_idx) if w[iy, iz] > 0]
        d_minus = float(len(back))
        for p in range(len(back)):
            for q in range(p + 1, len(back)):
                a, b = back[p], back[q]
                weights[a, b] += 1.0 / d_minus
                weights[b, a] += 1.0 / d_minus
    lap = np.diag(weights.sum(axis=1)) - weights
    vals = np.linalg.eigvalsh(lap)
    lam1 = float(vals[1]) if r >= 2 else 0.0
    weights.setflags(write=False)
    return OneSphereLaplacian(center=x, vertices=ring, weights=weights, lambda1=lam1)


def _check_regular_triangle_free(G: WeightedGraph) -> int:
    if not is_unweighted(G):
        raise PreconditionViolated("unweighted", "graph must be unweighted")
    degs = combinatorial_degrees(G)
    if degs.size == 0 or degs.min() != degs.max():
        raise PreconditionViolated("regular", "graph must be degree-regular")
    D = int(degs[0])
    if D < 2:
        raise PreconditionViolated("degree >= 2", "criterion needs degree at least 2")
    w = G.weights_sparse()
    triangles = (w @ w).multiply(w)
    if triangles.nnz:
        raise PreconditionViolated("triangle-free", "graph must have no triangles")
    return D


def cd2_via_one_sphere(G: WeightedGraph, x: str) -> bool:
    """CD(2, inf) at ``x`` through the one-sphere gap criterion.

    Only valid on unweighted regular triangle-free graphs; refuses (rather
    than extrapolates) anywhere else.  Holds iff ``lambda1 >= D/2``.
    """
    D = _check_regular_triangle_free(G)
    osl = one_sphere_laplacian(G, x)
    return bool(osl.lambda1 >= D / 2.0 - EIGEN_TOL)


def sphere_size_bound(G: WeightedGraph, x: str) -> tuple[int, float]:
    """Two-sphere size and its reduced-gap upper bound ``(D-1)(D - lambda1)``."""
    D = _check_regular_triangle_free(G)
    osl = one_sphere_laplacian(G, x)
    size = len(shells(G, x).sphere(2))
    bound = (D - 1) * (D - osl.lambda1)
    return size, float(bound)


def min_curvature(G: WeightedGraph) -> tuple[float, Optional[str]]:
    """Minimum of ``curvature_infty`` over vertices, skipping isolated ones.

    Isolated vertices have vacuous (+inf) curvature and are excluded; the
    returned vertex is None only if every vertex is isolated.
    """
    best = math.inf
    argmin: Optional[str] = None
    for x in G.vertex_ids:
        try:
            value = curvature_infty(G, x).k_infinity
        except IsolatedVertex:
            continue
        if value < best or (value == best and argmin is None):
            best = value
            argmin = x
    return best, argmin
