"""Sharpness and rigidity predicates, and the five-way equivalence harnesses.

The central objects are the hypercube shell structure ``HSS(N, W, x0)``
(constant weighted degree ``N*W``, bipartite, backward degree equal to ``W``
times the distance from ``x0``), the combinatorial small-sphere and
non-clustering properties of unweighted regular graphs, and the sharpness
statements for the diameter and eigenvalue bounds under a positive curvature
bound.  The harnesses evaluate the five characterizations of each
equivalence independently and report whether they agree; disagreement on any
input is either an implementation bug or a genuine counterexample, so it is
always surfaced rather than reconciled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Optional

import numpy as np
from scipy.special import binom

from .curvature import curvature_infty, min_curvature
from .errors import (
    Disconnected,
    InconsistentExtension,
    NoMidpointPath,
    NonPositiveCurvature,
    NonPositiveK,
    NotRegular,
    NotUnweighted,
    PreconditionViolated,
)
from .graph import (
    WeightedGraph,
    backward_forward_profile,
    combinatorial_degree,
    combinatorial_degrees,
    diameter,
    distance_function,
    is_bipartite,
    is_connected,
    is_unweighted,
    shells,
    unweighted_representation,
    vertex_degree,
    vertex_degrees,
)
from .operators import FunctionLike, as_function, gamma, gamma2, laplacian
from .recognizer import is_hypercube
from .spectral import (
    extend_from_ball,
    lambda_index,
    semigroup_sharpness_deviation,
)

__all__ = [
    "HssReport",
    "HssSearch",
    "ChengReport",
    "MainTheoremReport",
    "check_hss",
    "find_hss",
    "check_ssp",
    "check_ncp",
    "constant_edge_degree",
    "diameter_sharpness",
    "eigenvalue_sharpness",
    "gamma2_sharpness",
    "cheng_harness",
    "main_theorem_harness",
]

DEGREE_REL_TOL = 1e-8
BACKWARD_TOL = 1e-8
SPECTRAL_TOL = 1e-6
SEMIGROUP_TOL = 1e-7
GAMMA2_SHARP_TOL = 1e-8
DIAMETER_TOL = 1e-9
HARNESS_TIMES = (0.1, 0.5, 1.0)


# ---------------------------------------------------------------------------
# hypercube shell structure


@dataclass(frozen=True)
class HssReport:
    """Outcome of a shell-structure check at one root.

    ``holds`` is the conjunction of the three defining conditions; the shell
    volume identity ``m(S_k) = m(x0) * C(N, k)`` is reported alongside but is
    a consequence, not part of the definition.
    """

    root: str
    N: float
    W: float
    degree_ok: bool
    degree_witness: Optional[tuple[str, float, float]]
    bipartite_ok: bool
    odd_cycle: Optional[tuple[str, ...]]
    backward_ok: bool
    backward_witness: Optional[tuple[str, float, float]]
    volumes: tuple[tuple[float, float], ...]
    volume_note: Optional[str] = None

    @property
    def holds(self) -> bool:
        return self.degree_ok and self.bipartite_ok and self.backward_ok

    def __bool__(self) -> bool:
        return self.holds

    def to_json_dict(self) -> dict:
        return {
            "root": self.root,
            "N": self.N,
            "W": self.W,
            "holds": self.holds,
            "degree_ok": self.degree_ok,
            "degree_witness": self.degree_witness,
            "bipartite_ok": self.bipartite_ok,
            "odd_cycle": list(self.odd_cycle) if self.odd_cycle else None,
            "backward_ok": self.backward_ok,
            "backward_witness": self.backward_witness,
            "volumes": [list(pair) for pair in self.volumes],
            "volume_note": self.volume_note,
        }


def check_hss(G: WeightedGraph, N: float, W: float, x0: str) -> HssReport:
    """Verify the hypercube shell structure ``HSS(N, W, x0)``.

    Checks a constant weighted degree ``N*W``, bipartiteness, and backward
    degree ``W * d(x, x0)`` for every vertex; reports the observed sphere
    volumes against ``m(x0) * C(N, k)``.  For non-integer ``N`` the binomial
    uses the Gamma-function extension and the volume comparison is reported
    as informational only.
    """
    if not is_connected(G):
        raise Disconnected("the shell structure check assumes a connected graph")
    N = float(N)
    W = float(W)
    target = N * W
    degs = vertex_degrees(G)
    degree_ok, degree_witness = True, None
    tol_deg = DEGREE_REL_TOL * max(1.0, abs(target))
    for v, d in zip(G.vertex_ids, degs):
        if abs(d - target) > tol_deg:
            degree_ok, degree_witness = False, (v, float(d), target)
            break

    bip = is_bipartite(G)

    d_minus, _, sh = backward_forward_profile(G, x0)
    backward_ok, backward_witness = True, None
    tol_back = BACKWARD_TOL * max(1.0, abs(target))
    for v in G.vertex_ids:
        i = G.index_of(v)
        expected = W * sh.dist_index[i]
        if abs(d_minus[i] - expected) > tol_back:
            backward_ok, backward_witness = False, (v, float(d_minus[i]), float(expected))
            break

    m0 = G.measure(x0)
    volumes = []
    for k in range(sh.eccentricity + 1):
        observed = float(sum(G.measure(v) for v in sh.sphere(k)))
        volumes.append((observed, float(m0 * binom(N, k))))
    note = None
    if abs(N - round(N)) > 1e-9 or N < 0:
        note = "dimension is not a nonnegative integer; volume comparison is informational"
    return HssReport(
        root=x0,
        N=N,
        W=W,
        degree_ok=degree_ok,
        degree_witness=degree_witness,
        bipartite_ok=bool(bip),
        odd_cycle=bip.odd_cycle,
        backward_ok=backward_ok,
        backward_witness=backward_witness,
        volumes=tuple(volumes),
        volume_note=note,
    )


@dataclass(frozen=True)
class HssSearch:
    """All roots at which the graph has shell structure ``HSS(N, W, .)``."""

    N: float
    W: float
    roots: tuple[str, ...]


def find_hss(G: WeightedGraph) -> Optional[HssSearch]:
    """Search every root for a shell structure; absent if none exists.

    A constant weighted degree is necessary, and the weight is forced by any
    neighbor of the root (``d_minus = W`` at distance one), so the search
    space is just the root choice.
    """
    if not is_connected(G):
        raise Disconnected("the shell structure search assumes a connected graph")
    degs = vertex_degrees(G)
    deg = float(degs[0])
    if np.abs(degs - deg).max() > DEGREE_REL_TOL * max(1.0, abs(deg)):
        return None
    hits: list[tuple[str, float, float]] = []
    for root in G.vertex_ids:
        d_minus, _, sh = backward_forward_profile(G, root)
        ring = sh.sphere(1)
        if not ring:
            continue
        W = float(d_minus[G.index_of(ring[0])])
        if W <= 0:
            continue
        N = deg / W
        if check_hss(G, N, W, root).holds:
            hits.append((root, N, W))
    if not hits:
        return None
    _, N0, W0 = hits[0]
    # the degree is constant, so all passing roots must agree on (N, W)
    assert all(abs(N - N0) <= 1e-8 and abs(W - W0) <= 1e-8 for _, N, W in hits)
    return HssSearch(N=N0, W=W0, roots=tuple(root for root, _, _ in hits))


# ---------------------------------------------------------------------------
# small sphere and non-clustering properties


def _local_degree(G: WeightedGraph, x: str) -> int:
    """Combinatorial degree at ``x``, requiring the one-ball to be regular."""
    if not is_unweighted(G):
        raise NotUnweighted("the sphere properties are defined for unweighted graphs")
    D = combinatorial_degree(G, x)
    for y in G.neighbors(x):
        dy = combinatorial_degree(G, y)
        if dy != D:
            raise NotRegular(
                f"degree {dy} at {y!r} differs from degree {D} at {x!r}"
            )
    return D


def check_ssp(G: WeightedGraph, x: str) -> bool:
    """Small sphere property at ``x``: ``#S_2(x) <= C(D, 2)``."""
    D = _local_degree(G, x)
    return len(shells(G, x).sphere(2)) <= math.comb(D, 2)


def check_ncp(G: WeightedGraph, x: str) -> bool:
    """Non-clustering property at ``x``.

    Under the hypothesis that every two-sphere vertex has backward degree
    exactly two, distinct neighbors of ``x`` may share at most one common
    two-sphere vertex.  When the hypothesis fails the property holds
    vacuously.
    """
    _local_degree(G, x)
    sh = shells(G, x)
    two = sh.sphere(2)
    dist = sh.dist_index
    back: dict[str, list[int]] = {}
    for z in two:
        iz = G.index_of(z)
        back[z] = [int(iy) for iy in G.neighbor_indices(iz) if dist[iy] == 1]
        if len(back[z]) != 2:
            return True
    seen_pairs: set[tuple[int, int]] = set()
    for z in two:
        a, b = sorted(back[z])
        if (a, b) in seen_pairs:
            return False
        seen_pairs.add((a, b))
    return True


# ---------------------------------------------------------------------------
# scalar predicates


def constant_edge_degree(G: WeightedGraph) -> Optional[float]:
    """The common value of ``w(x,y)/m(x)`` over oriented edges, if constant.

    Absent (None) when the oriented edge degrees spread by more than 1e-10
    relative; equivalently present iff the measure is constant and the
    weights take a single positive value.
    """
    if not is_connected(G):
        raise Disconnected("constant edge degree assumes a connected graph")
    coo = G.weights_sparse().tocoo()
    if coo.nnz == 0:
        return None
    kappas = coo.data / G.m[coo.row]
    k0 = float(kappas[0])
    if np.abs(kappas - k0).max() > 1e-10 * max(1.0, abs(k0)):
        return None
    return k0


def diameter_sharpness(G: WeightedGraph, K: float) -> bool:
    """Whether the combinatorial diameter attains ``2 Deg_max / K``."""
    if not K > 0:
        raise NonPositiveK(f"K must be positive, got {K}")
    d = diameter(G)
    bound = 2.0 * float(vertex_degrees(G).max()) / K
    return bool(d >= bound - DIAMETER_TOL)


def eigenvalue_sharpness(G: WeightedGraph, K: float) -> bool:
    """Whether the eigenvalue with index ``deg_max`` equals ``K``."""
    if not is_connected(G):
        raise Disconnected("eigenvalue sharpness assumes a connected graph")
    deg_max = int(combinatorial_degrees(G).max())
    return bool(abs(lambda_index(G, deg_max) - K) <= SPECTRAL_TOL)


def gamma2_sharpness(G: WeightedGraph, f: FunctionLike, K: float) -> float:
    """Largest pointwise gap ``|gamma2(f) - K * gamma(f)|``."""
    f = as_function(G, f)
    return float(np.max(np.abs(gamma2(G, f) - K * gamma(G, f))))


# ---------------------------------------------------------------------------
# the diameter-sharpness harness


@dataclass(frozen=True)
class ChengReport:
    """Five equivalent sharpness statements for the distance function.

    All statements are evaluated at the inferred curvature bound
    ``K = min_x curvature_infty(x)`` with ``f0 = d(x0, .)``:

    1. some vertex realizes distance ``2 Deg_max / K`` from ``x0``;
    2. ``x0`` has maximal degree and the semigroup commutation
       ``gamma(P_t f0) = e^{-2Kt} P_t gamma(f0)`` holds;
    3. ``x0`` has maximal degree and ``f0`` decomposes as eigenfunction
       plus constant (certified by one-ball extension);
    4. ``x0`` has maximal degree and ``gamma2(f0) = K gamma(f0)``;
    5. the graph has shell structure ``HSS(2 Deg_max / K, K/2, x0)``.
    """

    root: str
    curvature_bound: float
    max_degree: float
    s1_distance_attained: bool
    s2_semigroup: bool
    s3_eigen_decomposition: bool
    s4_gamma2: bool
    s5_shell_structure: bool
    details: Mapping[str, str] = field(default_factory=dict)

    @property
    def statements(self) -> tuple[bool, bool, bool, bool, bool]:
        return (
            self.s1_distance_attained,
            self.s2_semigroup,
            self.s3_eigen_decomposition,
            self.s4_gamma2,
            self.s5_shell_structure,
        )

    @property
    def agree(self) -> bool:
        return len(set(self.statements)) == 1

    def to_json_dict(self) -> dict:
        return {
            "root": self.root,
            "K": self.curvature_bound,
            "Deg_max": self.max_degree,
            "statements": list(self.statements),
            "agree": self.agree,
            "details": dict(self.details),
        }


def cheng_harness(G: WeightedGraph, x0: str) -> ChengReport:
    """Evaluate the five diameter-sharpness statements at root ``x0``.

    The curvature bound ``K`` is inferred as the per-vertex minimum and must
    be positive.
    """
    if not is_connected(G):
        raise Disconnected("the harness assumes a connected graph")
    K, _ = min_curvature(G)
    if not (math.isfinite(K) and K > 0):
        raise NonPositiveCurvature(f"minimum curvature {K} is not positive")
    degs = vertex_degrees(G)
    D = float(degs.max())
    deg_x0 = vertex_degree(G, x0)
    deg_maximal = abs(deg_x0 - D) <= 1e-9 * max(1.0, D)
    f0 = distance_function(G, x0)
    details: dict[str, str] = {}

    target = 2.0 * D / K
    target_int = round(target)
    ecc = shells(G, x0).eccentricity
    s1 = abs(target - target_int) <= SPECTRAL_TOL and 0 <= target_int <= ecc
    details["s1"] = f"2D/K = {target}, eccentricity {ecc}"

    if deg_maximal:
        dev = semigroup_sharpness_deviation(G, f0, K, HARNESS_TIMES)
        s2 = dev <= SEMIGROUP_TOL
        details["s2"] = f"semigroup deviation {dev:.3e} over t={HARNESS_TIMES}"
    else:
        s2 = False
        details["s2"] = f"Deg(x0) = {deg_x0} below maximum {D}"

    s3 = False
    if deg_maximal:
        shift = D / K
        ball = {x0, *G.neighbors(x0)}
        data = {v: float(f0[G.index_of(v)] - shift) for v in ball}
        try:
            phi = extend_from_ball(G, x0, data, K)
        except (InconsistentExtension, NoMidpointPath) as exc:
            details["s3"] = f"extension failed: {exc}"
        else:
            scale = max(1.0, float(np.max(np.abs(phi))))
            eig_res = float(np.max(np.abs(-laplacian(G, phi) - K * phi)))
            off = float(np.max(np.abs(f0 - phi - shift)))
            s3 = eig_res <= 1e-8 * scale * max(1.0, K) and off <= 1e-8 * scale
            details["s3"] = f"eigen residual {eig_res:.3e}, constant offset error {off:.3e}"
    else:
        details["s3"] = details["s2"]

    if deg_maximal:
        gap = gamma2_sharpness(G, f0, K)
        s4 = gap <= GAMMA2_SHARP_TOL
        details["s4"] = f"gamma2 sharpness gap {gap:.3e}"
    else:
        s4 = False
        details["s4"] = details["s2"]

    hss = check_hss(G, target, K / 2.0, x0)
    s5 = hss.holds
    details["s5"] = f"HSS({target}, {K / 2.0}, {x0}) holds: {hss.holds}"

    return ChengReport(
        root=x0,
        curvature_bound=K,
        max_degree=D,
        s1_distance_attained=bool(s1),
        s2_semigroup=bool(s2),
        s3_eigen_decomposition=bool(s3),
        s4_gamma2=bool(s4),
        s5_shell_structure=bool(s5),
        details=details,
    )


# ---------------------------------------------------------------------------
# the main five-way harness


@dataclass(frozen=True)
class MainTheoremReport:
    """The five hypercube characterizations evaluated independently.

    With ``K`` the inferred curvature bound and ``D`` the maximal weighted
    degree: (1) the graph is a ``2D/K``-dimensional hypercube with constant
    edge degree ``K/2``; (2) CD(K, inf) holds and the eigenvalue with index
    ``deg_max`` equals ``K``; (3) constant edge degree, CD(K, inf), and the
    diameter attains ``2D/K``; (4) constant edge degree, shell structure
    ``HSS(2D/K, K/2)``, and CD(K, inf); (5) edge degree constantly ``K/2``
    and the unweighted representation has ``HSS(2D/K, 1)`` plus the small
    sphere and non-clustering properties everywhere.
    """

    inferred_k: float
    char1_hypercube: bool
    char2_eigen: bool
    char3_diam: bool
    char4_hss: bool
    char5_ssp_ncp: bool
    details: Mapping[str, str] = field(default_factory=dict)

    @property
    def characterizations(self) -> tuple[bool, bool, bool, bool, bool]:
        return (
            self.char1_hypercube,
            self.char2_eigen,
            self.char3_diam,
            self.char4_hss,
            self.char5_ssp_ncp,
        )

    @property
    def agree(self) -> bool:
        return len(set(self.characterizations)) == 1

    def to_json_dict(self) -> dict:
        return {
            "inferred_K": self.inferred_k,
            "char1_hypercube": self.char1_hypercube,
            "char2_eigen": self.char2_eigen,
            "char3_diam": self.char3_diam,
            "char4_hss": self.char4_hss,
            "char5_ssp_ncp": self.char5_ssp_ncp,
            "agree": self.agree,
            "details": dict(self.details),
        }


def _hss_at_some_root(G: WeightedGraph, N: float, W: float) -> Optional[str]:
    for root in G.vertex_ids:
        if check_hss(G, N, W, root).holds:
            return root
    return None


def _ssp_ncp_everywhere(G: WeightedGraph) -> tuple[bool, str]:
    for x in G.vertex_ids:
        try:
            if not check_ssp(G, x):
                return False, f"small sphere property fails at {x!r}"
            if not check_ncp(G, x):
                return False, f"non-clustering property fails at {x!r}"
        except (NotRegular, NotUnweighted, PreconditionViolated) as exc:
            return False, f"sphere properties inapplicable: {exc}"
    return True, "small sphere and non-clustering hold everywhere"


def main_theorem_harness(G: WeightedGraph) -> MainTheoremReport:
    """Evaluate the five hypercube characterizations and their agreement.

    The curvature bound is inferred as ``K = min_x curvature_infty(x)`` (the
    largest constant for which CD(K, inf) holds).  When ``K <= 0``,
    characterizations 2-4 are false by convention and 1 and 5 reduce to
    their edge-degree conditions, which are then unsatisfiable.
    """
    if not is_connected(G):
        raise Disconnected("the harness assumes a connected graph")
    K, k_argmin = min_curvature(G)
    D = float(vertex_degrees(G).max()) if G.edge_count else 0.0
    details: dict[str, str] = {"K": f"min curvature {K} attained at {k_argmin!r}"}

    rec = is_hypercube(G)
    kappa0 = constant_edge_degree(G)
    positive = math.isfinite(K) and K > 0
    half = K / 2.0 if positive else math.nan
    kappa_half = (
        positive
        and kappa0 is not None
        and abs(kappa0 - half) <= 1e-8 * max(1.0, abs(half))
    )

    if positive:
        dim = 2.0 * D / K
        dim_int = round(dim)
        dim_ok = abs(dim - dim_int) <= SPECTRAL_TOL and dim_int >= 1
    else:
        dim, dim_int, dim_ok = math.nan, -1, False

    char1 = bool(rec.accepted and kappa_half and dim_ok and rec.labeling.D == dim_int)
    details["char1"] = (
        f"recognizer {'accepted D=' + str(rec.labeling.D) if rec.accepted else 'rejected'}, "
        f"kappa {kappa0}, target dimension {dim}"
    )

    if positive:
        # K is the per-vertex minimum, so CD(K, inf) holds by construction
        eig_ok = eigenvalue_sharpness(G, K)
        char2 = bool(eig_ok)
        deg_max = int(combinatorial_degrees(G).max())
        details["char2"] = (
            f"lambda_{deg_max} = {lambda_index(G, deg_max)}, target {K}"
        )

        diam_ok = diameter_sharpness(G, K)
        char3 = bool(kappa0 is not None and diam_ok)
        details["char3"] = f"diameter {diameter(G)}, target {dim}, kappa {kappa0}"

        hss_root = _hss_at_some_root(G, dim, half) if kappa0 is not None else None
        char4 = bool(kappa0 is not None and hss_root is not None)
        details["char4"] = f"HSS({dim}, {half}) root: {hss_root!r}"

        if kappa_half:
            unw = unweighted_representation(G)
            root1 = _hss_at_some_root(unw, dim, 1.0)
            combinatorial_ok, why = _ssp_ncp_everywhere(unw)
            char5 = bool(root1 is not None and combinatorial_ok)
            details["char5"] = f"HSS({dim}, 1) root: {root1!r}; {why}"
        else:
            char5 = False
            details["char5"] = f"edge degree {kappa0} does not equal K/2 = {half}"
    else:
        char2 = char3 = char4 = char5 = False
        details["char2"] = details["char3"] = details["char4"] = details["char5"] = (
            f"no positive curvature bound (min curvature {K})"
        )

    return MainTheoremReport(
        inferred_k=float(K) if math.isfinite(K) else math.inf,
        char1_hypercube=char1,
        char2_eigen=char2,
        char3_diam=char3,
        char4_hss=char4,
        char5_ssp_ncp=char5,
        details=details,
    )
