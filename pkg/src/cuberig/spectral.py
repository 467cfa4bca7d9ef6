"""Spectrum of the negative Laplacian with the vertex measure as mass matrix.

The eigenproblem solved is ``L_w phi = lambda M phi`` where ``L_w`` is the
weight-only combinatorial Laplacian and ``M = diag(m)``; this is exactly
``-lap(phi) = lambda phi`` for the measure-normalized Laplacian.  The solve
goes through the symmetric similarity transform with ``M^{1/2}``, so the
returned eigenbasis is orthonormal in the measure inner product
``<f, g> = sum_x f(x) g(x) m(x)``.

Also here: shell-by-shell extension of eigenfunction data off a one-ball,
and the semigroup sharpness deviation used by the rigidity harnesses.
"""

from __future__ import annotations

import weakref
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import (
    Disconnected,
    DomainMismatch,
    InconsistentExtension,
    IndexOutOfRange,
    NoMidpointPath,
    SolverFailure,
)
from .graph import WeightedGraph, is_connected, shells
from .operators import FunctionLike, as_function, gamma, heat_apply

__all__ = [
    "SpectralData",
    "spectrum",
    "lambda_index",
    "eigenvalue_multiplicity",
    "extend_from_ball",
    "semigroup_sharpness_deviation",
]

# One dense solve per graph; instances are immutable so the cache is safe.
_CACHE: "weakref.WeakKeyDictionary[WeightedGraph, SpectralData]" = (
    weakref.WeakKeyDictionary()
)


@dataclass(frozen=True)
class SpectralData:
    """Eigenvalues (ascending, with multiplicity) and an m-orthonormal basis.

    ``basis[:, i]`` is the eigenfunction for ``eigenvalues[i]``.
    """

    eigenvalues: np.ndarray
    basis: np.ndarray

    def eigenfunction(self, i: int) -> np.ndarray:
        return self.basis[:, i]

    def multiplicity(self, K: float, tol: float) -> int:
        return int(np.sum(np.abs(self.eigenvalues - K) <= tol))

    def eigenspace(self, K: float, tol: float) -> np.ndarray:
        """Columns spanning the eigenspace of all eigenvalues within tol of K."""
        mask = np.abs(self.eigenvalues - K) <= tol
        return self.basis[:, mask]


def spectrum(G: WeightedGraph) -> SpectralData:
    """Full spectrum of the negative measure-normalized Laplacian."""
    cached = _CACHE.get(G)
    if cached is not None:
        return cached
    if not is_connected(G):
        raise Disconnected("the spectrum routines assume a connected graph")
    w = G.weights_sparse().toarray()
    lap_w = np.diag(G.strength) - w
    inv_sqrt_m = 1.0 / np.sqrt(G.m)
    sym = inv_sqrt_m[:, None] * lap_w * inv_sqrt_m[None, :]
    sym = 0.5 * (sym + sym.T)
    try:
        vals, vecs = scipy.linalg.eigh(sym)
    except scipy.linalg.LinAlgError as exc:  # pragma: no cover - solver hiccup
        raise SolverFailure(str(exc)) from exc
    basis = inv_sqrt_m[:, None] * vecs
    vals.setflags(write=False)
    basis.setflags(write=False)
    data = SpectralData(eigenvalues=vals, basis=basis)
    _CACHE[G] = data
    return data


def lambda_index(G: WeightedGraph, k: int) -> float:
    """The ``k``-th smallest eigenvalue counting multiplicity (0-based)."""
    sd = spectrum(G)
    if not 0 <= k < sd.eigenvalues.size:
        raise IndexOutOfRange(f"eigenvalue index {k} outside 0..{sd.eigenvalues.size - 1}")
    return float(sd.eigenvalues[k])


def eigenvalue_multiplicity(G: WeightedGraph, K: float, tol: float | None = None) -> int:
    """Number of eigenvalues within ``tol`` of ``K``.

    The default tolerance is ``1e-6 * max(1, lambda_max)``; clustering is
    a floating-point decision and must stay explicit, so the value used is
    whatever the caller passes.
    """
    sd = spectrum(G)
    if tol is None:
        tol = 1e-6 * max(1.0, float(sd.eigenvalues[-1]))
    return sd.multiplicity(K, tol)


# ---------------------------------------------------------------------------
# extension from a one-ball


def _midpoint_mean(G, f, ix, iz, mids):
    weights = np.array(
        [G.weights_sparse()[ix, iy] * G.weights_sparse()[iy, iz] / G.m[iy] for iy in mids]
    )
    total = weights.sum()
    return float(np.dot(weights, f[mids]) / total)


def extend_from_ball(
    G: WeightedGraph,
    x0: str,
    values: dict[str, float],
    K: float,
) -> np.ndarray:
    """Extend one-ball data shell by shell through the two-step mean identity.

    For every vertex ``z`` in sphere ``k+1`` and every anchor ``x`` in sphere
    ``k-1`` at distance two, the extension sets

        f(z) = -f(x) + 2 * (sum_y f(y) q(y)) / (sum_y q(y)),
        q(y) = w(x, y) w(y, z) / m(y)  over the common neighbors ``y``,

    which is the identity every eigenfunction-plus-constant satisfies along
    increasing distance.  All anchors must agree to within
    ``1e-7 * max |ball value|``; a disagreement means the supplied one-ball
    data is not the trace of an eigenfunction-plus-constant for eigenvalue
    ``K`` and raises :class:`InconsistentExtension`.  (``K`` does not enter
    the recursion itself; it is recorded for the caller's interpretation.)
    """
    if not is_connected(G):
        raise Disconnected("extension requires a connected graph")
    sh = shells(G, x0)
    ball = {x0, *sh.sphere(1)}
    if set(values) != ball:
        missing = sorted(ball - set(values))
        extra = sorted(set(values) - ball)
        raise DomainMismatch(
            f"one-ball values mismatch (missing {missing[:3]!r}, extra {extra[:3]!r})"
        )
    f = np.full(G.n, np.nan)
    for v, val in values.items():
        f[G.index_of(v)] = float(val)
    tol = 1e-7 * max((abs(float(v)) for v in values.values()), default=0.0)

    dist = sh.dist_index
    for k in range(1, sh.eccentricity):
        for z in sh.sphere(k + 1):
            iz = G.index_of(z)
            anchors: list[tuple[str, float]] = []
            seen: set[int] = set()
            for iy in G.neighbor_indices(iz):
                if dist[iy] != k:
                    continue
                for ix in G.neighbor_indices(iy):
                    if dist[ix] != k - 1 or ix in seen:
                        continue
                    seen.add(int(ix))
            for ix in sorted(seen):
                mids = [
                    int(iy)
                    for iy in G.neighbor_indices(iz)
                    if dist[iy] == k and G.weights_sparse()[ix, iy] > 0
                ]
                mean = _midpoint_mean(G, f, ix, iz, mids)
                anchors.append((G.vertex_ids[ix], -f[ix] + 2.0 * mean))
            if not anchors:
                raise NoMidpointPath(f"no two-step anchor for {z!r}")
            base_x, base = anchors[0]
            for other_x, other in anchors[1:]:
                if abs(other - base) > tol:
                    raise InconsistentExtension(z, base_x, other_x, base, other)
            f[iz] = base
    return f


# ---------------------------------------------------------------------------
# semigroup sharpness


def semigroup_sharpness_deviation(
    G: WeightedGraph,
    f: FunctionLike,
    K: float,
    times,
) -> float:
    """Largest pointwise gap between ``gamma(P_t f)`` and ``e^{-2Kt} P_t gamma(f)``.

    Vanishes (to solver precision) exactly when ``f`` is an eigenfunction to
    eigenvalue ``K`` plus a constant; returns 0.0 for an empty time list.
    """
    if not is_connected(G):
        raise Disconnected("semigroup deviation requires a connected graph")
    f = as_function(G, f)
    gam_f = gamma(G, f)
    worst = 0.0
    for t in times:
        t = float(t)
        lhs = gamma(G, heat_apply(G, f, t))
        rhs = np.exp(-2.0 * K * t) * heat_apply(G, gam_f, t)
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return worst
