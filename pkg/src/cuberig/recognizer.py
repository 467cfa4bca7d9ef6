"""Shell-wise hypercube recognition with a self-verifying certificate.

Recognition fixes a root, labels it with the empty set and its neighbors
with singletons, and then labels each further sphere vertex by the union of
its back-neighbors' labels.  Every step enforces the counting constraints a
hypercube satisfies (sphere sizes binomial, back-degree ``k+1`` on sphere
``k+1``, back-labels forming the full set of ``k``-subsets of their union,
injectivity), and a successful run ends with an unconditional certificate
check that never inspects construction state: the label map must be a
bijection onto the power set under which adjacency is exactly symmetric
difference one.  Acceptance is therefore sound regardless of any structure
theory; a failure from a single root already proves the graph is not a
hypercube, because a hypercube succeeds from every root.

Labels are subsets of ``{1..D}`` stored as bitmasks (bit ``b-1`` encodes
element ``b``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import Mapping, Optional

from .errors import Disconnected, MalformedInput
from .graph import WeightedGraph, combinatorial_degrees, is_connected, shells

__all__ = [
    "CubeLabeling",
    "RecognitionFailure",
    "HypercubeCheck",
    "recognize",
    "ball_recognize",
    "is_hypercube",
    "verify_labeling",
    "powerset_lemma_oracle",
    "NOT_BIPARTITE",
    "NOT_REGULAR",
    "BACK_DEGREE_MISMATCH",
    "UNION_SIZE_VIOLATION",
    "SPHERE_SIZE_MISMATCH",
    "LABEL_COLLISION",
    "NOT_SUBSET_CONSISTENT",
]

NOT_BIPARTITE = "NotBipartite"
NOT_REGULAR = "NotRegular"
BACK_DEGREE_MISMATCH = "BackDegreeMismatch"
UNION_SIZE_VIOLATION = "UnionSizeViolation"
SPHERE_SIZE_MISMATCH = "SphereSizeMismatch"
LABEL_COLLISION = "LabelCollision"
NOT_SUBSET_CONSISTENT = "NotSubsetConsistent"


def _bits(mask: int) -> tuple[int, ...]:
    out = []
    b = 1
    while mask:
        if mask & 1:
            out.append(b)
        mask >>= 1
        b += 1
    return tuple(out)


@dataclass(frozen=True)
class CubeLabeling:
    """A certified isomorphism onto the ``D``-dimensional hypercube.

    ``phi`` maps each vertex to a subset of ``{1..D}`` as a bitmask; the
    certificate guarantees ``phi`` is a bijection onto the full power set,
    adjacency holds iff the symmetric difference of labels has size one, and
    label size equals distance from the root.
    """

    D: int
    root: str
    phi: Mapping[str, int]

    def label_set(self, vertex: str) -> tuple[int, ...]:
        return _bits(self.phi[vertex])

    def to_json_dict(self) -> dict:
        return {
            "D": self.D,
            "root": self.root,
            "labels": {v: list(_bits(mask)) for v, mask in sorted(self.phi.items())},
        }


@dataclass(frozen=True)
class RecognitionFailure:
    """A typed, reproducible reason why recognition stopped.

    ``shell`` is the sphere index where the violation was detected; the
    ``details`` payload names the vertices and observed/expected quantities.
    Recognition is deterministic, so re-running yields the same failure.
    """

    shell: int
    reason: str
    details: Mapping[str, object] = field(default_factory=dict)

    def __str__(self) -> str:
        extras = ", ".join(f"{k}={v!r}" for k, v in sorted(self.details.items()))
        return f"{self.reason} at shell {self.shell} ({extras})"


@dataclass(frozen=True)
class HypercubeCheck:
    """Recognition verdict with the certificate or the typed failure."""

    accepted: bool
    labeling: Optional[CubeLabeling]
    failure: Optional[RecognitionFailure]

    def __bool__(self) -> bool:
        return self.accepted


def verify_labeling(G: WeightedGraph, labeling: CubeLabeling) -> bool:
    """Unconditional certificate check, independent of how labels were built.

    Verifies that ``phi`` maps the root to the empty set, is a bijection
    onto all of ``P({1..D})``, that adjacency is exactly symmetric
    difference one in both directions, and that label sizes equal distances
    from the root.
    """
    phi = labeling.phi
    n = 1 << labeling.D
    if len(phi) != G.n or set(phi) != set(G.vertex_ids):
        return False
    if phi.get(labeling.root) != 0:
        return False
    if set(phi.values()) != set(range(n)):
        return False
    sh = shells(G, labeling.root)
    masks = [phi[v] for v in G.vertex_ids]
    for i, v in enumerate(G.vertex_ids):
        d = sh.dist[v]
        if d is None or bin(masks[i]).count("1") != d:
            return False
    adj = {
        (i, int(j))
        for i in range(G.n)
        for j in G.neighbor_indices(i)
        if i < j
    }
    for i in range(G.n):
        for j in range(i + 1, G.n):
            want = bin(masks[i] ^ masks[j]).count("1") == 1
            if want != ((i, j) in adj):
                return False
    return True


def _verify_ball(G, x0, k, phi, D) -> bool:
    # same certificate restricted to the induced ball: bijection onto the
    # masks of popcount <= k, adjacency iff symmetric difference one
    sh = shells(G, x0)
    ball = sh.ball(min(k, sh.eccentricity))
    expected = {mask for mask in range(1 << D) if bin(mask).count("1") <= k}
    if set(phi) != set(ball) or set(phi.values()) != expected:
        return False
    index = {v: G.index_of(v) for v in ball}
    for a_pos, u in enumerate(ball):
        for v in ball[a_pos + 1 :]:
            want = bin(phi[u] ^ phi[v]).count("1") == 1
            have = G.weights_sparse()[index[u], index[v]] > 0
            if want != bool(have):
                return False
    return True


def _recognize_shells(G: WeightedGraph, x0: str, max_shell: Optional[int]):
    """Shared induction for full and truncated recognition.

    Returns ``(D, phi)`` on success or a :class:`RecognitionFailure`.  Within
    each shell the sphere-size count is checked before any per-vertex
    condition, so undersized or oversized spheres are reported as such.
    """
    if not is_connected(G):
        raise Disconnected("recognition assumes a connected graph")
    sh = shells(G, x0)
    dist = sh.dist_index
    degs = combinatorial_degrees(G)
    D = int(degs[G.index_of(x0)])

    for k, sphere in enumerate(sh.spheres):
        for v in sphere:
            dv = int(degs[G.index_of(v)])
            if dv != D:
                return RecognitionFailure(
                    shell=k,
                    reason=NOT_REGULAR,
                    details={"vertex": v, "degree": dv, "expected": D},
                )
    for k, sphere in enumerate(sh.spheres):
        for v in sphere:
            iv = G.index_of(v)
            for j in G.neighbor_indices(iv):
                if dist[j] == k and G.vertex_ids[j] < v:
                    return RecognitionFailure(
                        shell=k,
                        reason=NOT_BIPARTITE,
                        details={"edge": (G.vertex_ids[j], v)},
                    )

    phi: dict[str, int] = {x0: 0}
    for b, y in enumerate(sh.sphere(1)):
        phi[y] = 1 << b

    last = sh.eccentricity if max_shell is None else min(max_shell, max(sh.eccentricity, D))
    top = max(sh.eccentricity, D) if max_shell is None else last
    for s in range(2, top + 1):
        sphere = sh.sphere(s)
        expected = comb(D, s) if s <= D else 0
        if len(sphere) != expected:
            return RecognitionFailure(
                shell=s,
                reason=SPHERE_SIZE_MISMATCH,
                details={"got": len(sphere), "expected": expected},
            )
        owners: dict[int, str] = {}
        for z in sphere:
            iz = G.index_of(z)
            back = [
                phi[G.vertex_ids[j]] for j in G.neighbor_indices(iz) if dist[j] == s - 1
            ]
            if len(back) != s:
                return RecognitionFailure(
                    shell=s,
                    reason=BACK_DEGREE_MISMATCH,
                    details={"vertex": z, "got": len(back), "expected": s},
                )
            union = 0
            for mask in back:
                union |= mask
            if bin(union).count("1") != s:
                return RecognitionFailure(
                    shell=s,
                    reason=UNION_SIZE_VIOLATION,
                    details={"vertex": z, "labels": sorted(_bits(m) for m in back)},
                )
            subsets = {union & ~(1 << (b - 1)) for b in _bits(union)}
            if set(back) != subsets:
                return RecognitionFailure(
                    shell=s,
                    reason=NOT_SUBSET_CONSISTENT,
                    details={"vertex": z, "labels": sorted(_bits(m) for m in back)},
                )
            if union in owners:
                return RecognitionFailure(
                    shell=s,
                    reason=LABEL_COLLISION,
                    details={"first": owners[union], "second": z, "label": _bits(union)},
                )
            owners[union] = z
            phi[z] = union
    return D, phi


def recognize(G: WeightedGraph, x0: str):
    """Recognize ``G`` as a hypercube rooted at ``x0``.

    Returns a :class:`CubeLabeling` whose certificate has been re-verified
    by the unconditional check, or the first :class:`RecognitionFailure`
    encountered.  Only adjacency is used, so weighted graphs are recognized
    through their unweighted representation.
    """
    outcome = _recognize_shells(G, x0, max_shell=None)
    if isinstance(outcome, RecognitionFailure):
        return outcome
    D, phi = outcome
    labeling = CubeLabeling(D=D, root=x0, phi=dict(phi))
    if not verify_labeling(G, labeling):
        raise AssertionError("constructed labeling failed its certificate check")
    return labeling


def ball_recognize(G: WeightedGraph, x0: str, k: int):
    """Certify that the ``k``-ball of ``x0`` matches a hypercube ``k``-ball.

    Runs the same induction truncated at shell ``k`` and returns the partial
    label map (or the typed failure).
    """
    if k < 1:
        raise MalformedInput(f"ball radius must be at least 1, got {k}")
    outcome = _recognize_shells(G, x0, max_shell=k)
    if isinstance(outcome, RecognitionFailure):
        return outcome
    D, phi = outcome
    if not _verify_ball(G, x0, k, phi, D):
        raise AssertionError("constructed ball labeling failed its certificate check")
    return CubeLabeling(D=D, root=x0, phi=dict(phi))


def is_hypercube(G: WeightedGraph) -> HypercubeCheck:
    """Whether ``G`` is a hypercube, with the certificate when it is.

    Runs recognition from the smallest vertex id; a hypercube succeeds from
    any root, so one failing root is a proof of non-isomorphism, and an
    accepting run is certified unconditionally.
    """
    if not is_connected(G):
        raise Disconnected("recognition assumes a connected graph")
    outcome = recognize(G, G.vertex_ids[0])
    if isinstance(outcome, RecognitionFailure):
        return HypercubeCheck(accepted=False, labeling=None, failure=outcome)
    return HypercubeCheck(accepted=True, labeling=outcome, failure=None)


# ---------------------------------------------------------------------------
# the power-set counting oracle


def powerset_lemma_oracle(D: int, k: int, subsets) -> tuple[int, int, int]:
    """Brute-force counts for a family of ``k+1`` distinct ``k``-subsets.

    Returns ``(shadow_size, bound, union_size)`` where ``shadow_size`` is
    the number of distinct ``(k-1)``-subsets of the family members,
    ``bound = C(k+1, 2)`` is the guaranteed lower bound on it, and
    ``union_size`` is the size of the family union.  When ``shadow_size``
    equals the bound, the union has exactly ``k+1`` elements.
    """
    if not (isinstance(D, int) and isinstance(k, int) and 1 <= k < D):
        raise MalformedInput(f"need integers 1 <= k < D, got k={k}, D={D}")
    family: list[frozenset[int]] = []
    for A in subsets:
        A = frozenset(int(a) for a in A)
        if not A <= frozenset(range(1, D + 1)):
            raise MalformedInput(f"subset {sorted(A)} is not within 1..{D}")
        if len(A) != k:
            raise MalformedInput(f"subset {sorted(A)} does not have {k} elements")
        family.append(A)
    if len(family) != k + 1:
        raise MalformedInput(f"need exactly {k + 1} subsets, got {len(family)}")
    if len(set(family)) != k + 1:
        raise MalformedInput("subsets must be pairwise distinct")
    shadow: set[frozenset[int]] = set()
    for A in family:
        for a in A:
            shadow.add(A - {a})
    union: set[int] = set()
    for A in family:
        union |= A
    return len(shadow), comb(k + 1, 2), len(union)
