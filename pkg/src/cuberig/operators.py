"""Pointwise operators on graph functions: Laplacian, gradient forms, heat flow.

The Laplacian is the measure-normalized one,

    lap(f)(x) = (1/m(x)) * sum_y w(x, y) (f(y) - f(x)),

and the two gradient forms are defined from it by

    2 * gamma(f, g)  = lap(f g) - f lap(g) - g lap(f)
    2 * gamma2(f, g) = lap(gamma(f, g)) - gamma(f, lap(g)) - gamma(g, lap(f)).

``gamma`` is implemented through its explicit edge-sum expansion; the
operator-composition definition is kept as a test invariant.  Both forms are
also exposed as local symmetric matrices: ``gamma`` at ``x`` is supported on
the one-ball, ``gamma2`` at ``x`` on the two-ball, and the matrices are
assembled by evaluating the bilinear forms on the indicator basis of the
support.  Quadratic evaluation of a local matrix therefore agrees with the
pointwise operator for any function.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence, Union

import numpy as np

from .errors import Disconnected, DomainMismatch, NegativeTime, UnknownVertex
from .graph import WeightedGraph, is_connected, shells

__all__ = [
    "FunctionLike",
    "as_function",
    "as_mapping",
    "laplacian",
    "gamma",
    "gamma2",
    "LocalForm",
    "local_gamma_matrix",
    "local_gamma2_matrix",
    "heat_apply",
]

FunctionLike = Union[np.ndarray, Sequence[float], Mapping[str, float]]


def as_function(G: WeightedGraph, f: FunctionLike) -> np.ndarray:
    """Coerce a mapping or sequence to an array aligned with ``G.vertex_ids``."""
    if isinstance(f, Mapping):
        missing = [v for v in G.vertex_ids if v not in f]
        if missing or len(f) != G.n:
            extra = sorted(set(f) - set(G.vertex_ids))
            raise DomainMismatch(
                f"function domain mismatch (missing {missing[:3]!r}, extra {extra[:3]!r})"
            )
        return np.array([float(f[v]) for v in G.vertex_ids])
    arr = np.asarray(f, dtype=float)
    if arr.shape != (G.n,):
        raise DomainMismatch(f"expected {G.n} values, got shape {arr.shape}")
    return arr.copy()


def as_mapping(G: WeightedGraph, values: np.ndarray) -> dict[str, float]:
    """Present an aligned array as an id -> value mapping."""
    return {v: float(x) for v, x in zip(G.vertex_ids, values)}


def laplacian(G: WeightedGraph, f: FunctionLike) -> np.ndarray:
    """Measure-normalized graph Laplacian applied to ``f``."""
    f = as_function(G, f)
    w = G.weights_sparse()
    return (w @ f - G.strength * f) / G.m


def gamma(G: WeightedGraph, f: FunctionLike, g: FunctionLike | None = None) -> np.ndarray:
    """Gradient form ``gamma(f, g)`` (``g`` defaults to ``f``).

    Uses the explicit edge sum
    ``gamma(f, g)(x) = (1/2m(x)) sum_y w(x,y)(f(y)-f(x))(g(y)-g(x))``,
    so ``gamma(f) >= 0`` always.
    """
    f = as_function(G, f)
    g = f if g is None else as_function(G, g)
    w = G.weights_sparse()
    quad = w @ (f * g) - f * (w @ g) - g * (w @ f) + f * g * G.strength
    return quad / (2.0 * G.m)


def gamma2(G: WeightedGraph, f: FunctionLike, g: FunctionLike | None = None) -> np.ndarray:
    """Iterated gradient form ``gamma2(f, g)`` (``g`` defaults to ``f``)."""
    f = as_function(G, f)
    g = f if g is None else as_function(G, g)
    lap_f = laplacian(G, f)
    lap_g = laplacian(G, g)
    return 0.5 * (
        laplacian(G, gamma(G, f, g)) - gamma(G, f, lap_g) - gamma(G, g, lap_f)
    )


# ---------------------------------------------------------------------------
# local quadratic forms


@dataclass(frozen=True)
class LocalForm:
    """A symmetric quadratic form attached to one vertex.

    ``support`` lists the vertices the form can see (the one-ball for
    ``gamma``, the two-ball for ``gamma2``), ordered center first, then each
    sphere in sorted-identifier order.  ``matrix`` is indexed by ``support``
    and annihilates constant vectors.
    """

    center: str
    support: tuple[str, ...]
    matrix: np.ndarray

    @property
    def index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.support)}

    def evaluate(self, values: Union[np.ndarray, Mapping[str, float]]) -> float:
        """Quadratic form value ``v' M v`` for values given on the support."""
        if isinstance(values, Mapping):
            vec = np.array([float(values.get(v, 0.0)) for v in self.support])
        else:
            vec = np.asarray(values, dtype=float)
            if vec.shape != (len(self.support),):
                raise DomainMismatch(
                    f"expected {len(self.support)} values, got shape {vec.shape}"
                )
        return float(vec @ self.matrix @ vec)


def _ball_support(G: WeightedGraph, x: str, radius: int) -> list[str]:
    sh = shells(G, x)
    support = [x]
    for k in range(1, radius + 1):
        support.extend(sh.sphere(k))
    return support


class _LocalOps:
    """Dense restriction of the operators to a ball around the center.

    The forms at the center only read function values inside the two-ball,
    and no expression evaluated here touches edges between two outer-sphere
    vertices, so working on the induced dense block is exact.
    """

    def __init__(self, G: WeightedGraph, support: Sequence[str]):
        idx = [G.index_of(v) for v in support]
        self.w = G.weight_block(idx)
        self.m = G.m[list(idx)]
        self.s = self.w.sum(axis=1)

    def lap(self, f: np.ndarray) -> np.ndarray:
        return (self.w @ f - self.s * f) / self.m

    def gam(self, f: np.ndarray, g: np.ndarray) -> np.ndarray:
        quad = self.w @ (f * g) - f * (self.w @ g) - g * (self.w @ f) + f * g * self.s
        return quad / (2.0 * self.m)

    def gam2_at0(self, f: np.ndarray, g: np.ndarray) -> float:
        lf, lg = self.lap(f), self.lap(g)
        val = self.lap(self.gam(f, g)) - self.gam(f, lg) - self.gam(g, lf)
        return 0.5 * val[0]


def _assemble(center, support, entry) -> LocalForm:
    k = len(support)
    mat = np.zeros((k, k))
    basis = np.eye(k)
    for i in range(k):
        for j in range(i, k):
            val = entry(basis[i], basis[j])
            mat[i, j] = val
            mat[j, i] = val
    mat.setflags(write=False)
    return LocalForm(center=center, support=tuple(support), matrix=mat)


def local_gamma_matrix(G: WeightedGraph, x: str) -> LocalForm:
    """``gamma`` at ``x`` as a symmetric matrix over the one-ball."""
    if x not in G:
        raise UnknownVertex(f"unknown vertex {x!r}")
    support = _ball_support(G, x, 1)
    ops = _LocalOps(G, support)
    return _assemble(x, support, lambda u, v: float(ops.gam(u, v)[0]))


def local_gamma2_matrix(G: WeightedGraph, x: str) -> LocalForm:
    """``gamma2`` at ``x`` as a symmetric matrix over the two-ball."""
    if x not in G:
        raise UnknownVertex(f"unknown vertex {x!r}")
    support = _ball_support(G, x, 2)
    ops = _LocalOps(G, support)
    return _assemble(x, support, ops.gam2_at0)


# ---------------------------------------------------------------------------
# heat semigroup


def heat_apply(G: WeightedGraph, f: FunctionLike, t: float) -> np.ndarray:
    """Apply the heat operator ``exp(t * lap)`` to ``f``.

    Computed through the measure-weighted spectral decomposition, so the
    result is exact to solver precision; requires a connected graph and
    ``t >= 0``.
    """
    if t < 0:
        raise NegativeTime(f"heat time must be nonnegative, got {t}")
    if not is_connected(G):
        raise Disconnected("the heat semigroup needs a connected graph")
    f = as_function(G, f)
    from . import spectral  # late import; spectral builds on this module

    sd = spectral.spectrum(G)
    coeffs = sd.basis.T @ (G.m * f)
    return sd.basis @ (np.exp(-sd.eigenvalues * t) * coeffs)
