"""Discrepancies, klt thresholds, classification, and basket invariants.

The discrepancies a_i on a minimal resolution solve the adjunction system

    sum_i a_i M[i][j] = -2 + w(v_j) + sum_b (1 - 1/m_b) * adj(b, j)

over the exceptional vertices v_j (M the intersection matrix, b running over
boundary vertices).  A point is eps-klt iff every a_i + 1 and every boundary
excess 1/m exceeds eps.  Chains are cyclic types (n, q; m1, m2); forks are
platonic types (b, (n_i, q_i; m_i)_{i=1,2,3}), klt iff sum 1/(n_i m_i) > 1.

The local orbifold group order is recovered from the exact identity

    E^2 - delta = 4/r + pullback_defect

which for cyclic types reproduces r = n * m1 * m2 and is taken as the
definition for platonic types.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import lcm
from typing import Union

from . import _kernels
from .errors import GraphError, InternalInvariantError, NotKltError
from .graphs import (
    INF,
    DualGraph,
    canonical_form,
    canonical_graph,
    chain,
    intersection_matrix,
    is_negative_definite,
    minimal_violations,
    reduced_exc_selfint,
    strip_phantoms,
)
from .hj import CyclicType, HJExpansion, delta_cyclic, dual_q, hj_evaluate

__all__ = [
    "PlatonicBranch",
    "PlatonicType",
    "Basket",
    "NotKlt",
    "KltThreshold",
    "discrepancies",
    "klt_threshold",
    "classify",
    "delta",
    "pullback_defect",
    "local_group_order",
    "gamma_point",
    "formal_smooth",
    "basket_key",
]


@dataclass(frozen=True)
class PlatonicBranch:
    """One fork branch: cyclic data read from the center outward."""

    n: int
    q: int
    m: int = 1

    def __post_init__(self):
        if self.n * self.m < 2:
            raise GraphError(f"fork branch needs n*m >= 2, got ({self.n},{self.q};{self.m})")


@dataclass(frozen=True)
class PlatonicType:
    b: int
    branches: tuple[PlatonicBranch, PlatonicBranch, PlatonicBranch]

    @property
    def branch_sum(self) -> Fraction:
        """sum 1/(n_i m_i); the type is klt iff this exceeds 1."""
        return sum(Fraction(1, br.n * br.m) for br in self.branches)


Shape = Union[CyclicType, PlatonicType]


@dataclass(frozen=True)
class NotKlt:
    """Definitive negative classification answer, with the failed condition."""

    reason: str


@dataclass(frozen=True)
class KltThreshold:
    """min over I_x of (a_i + 1), boundary branches entering as a = -(1-1/m)."""

    value: Fraction

    def is_eps_klt(self, eps) -> bool:
        return self.value > eps


@dataclass(frozen=True)
class Basket:
    """A classified klt singularity with its exact invariants."""

    shape: Shape
    graph: DualGraph
    discrepancies: tuple[tuple[str, Fraction], ...]
    delta: Fraction
    r: Fraction
    e_sq: int
    threshold: Fraction

    @property
    def is_smooth(self) -> bool:
        return isinstance(self.shape, CyclicType) and self.shape.is_smooth

    @property
    def gamma(self) -> Fraction:
        """Transversal-crossing correction; nonzero only at smooth points."""
        if self.is_smooth:
            return gamma_point(self.shape.m1, self.shape.m2)
        return Fraction(0)


def _require_solvable(g: DualGraph) -> DualGraph:
    problems = minimal_violations(g)
    if problems:
        raise GraphError("not a minimal-resolution graph: " + "; ".join(problems))
    for v in g.boundary:
        if v.m == INF:
            raise NotKltError(f"boundary vertex {v.vid!r} has coefficient 1 (m = inf)")
    return strip_phantoms(g)


def discrepancies(g: DualGraph) -> dict[str, Fraction]:
    """Exact discrepancies of the exceptional curves, keyed by vertex id."""
    g = _require_solvable(g)
    exc = g.exceptional
    if not exc:
        return {}
    matrix = intersection_matrix(g)
    adj = g.adjacency()
    rhs = []
    for v in exc:
        r = Fraction(-2 + v.weight)
        for w in adj[v.vid]:
            nb = g.vertex(w)
            if nb.is_boundary:
                r += 1 - Fraction(1, nb.m)
        rhs.append(r)
    scale = lcm(*(f.denominator for f in rhs)) if rhs else 1
    ints = [int(f * scale) for f in rhs]
    try:
        pairs = _kernels.solve_int_system(matrix, ints)
    except ValueError as exc_err:
        raise InternalInvariantError(
            f"singular intersection matrix on a minimal graph: {exc_err}"
        ) from exc_err
    return {
        v.vid: Fraction(num, den) / scale for v, (num, den) in zip(exc, pairs)
    }


def klt_threshold(g: DualGraph) -> KltThreshold:
    """Minimum log-discrepancy excess over exceptional and boundary divisors."""
    a = discrepancies(g)
    g = strip_phantoms(g)
    candidates = [ai + 1 for ai in a.values()]
    candidates += [Fraction(1, v.m) for v in g.boundary]
    return KltThreshold(min(candidates, default=Fraction(1)))


def pullback_defect(g: DualGraph) -> Fraction:
    """c1^2 drop along the minimal resolution: A^2 for A = sum (-a_i) E_i."""
    a = discrepancies(g)
    g = strip_phantoms(g)
    exc = g.exceptional
    matrix = intersection_matrix(g)
    vec = [-a[v.vid] for v in exc]
    total = Fraction(0)
    for i in range(len(exc)):
        for j in range(len(exc)):
            if matrix[i][j]:
                total += vec[i] * vec[j] * matrix[i][j]
    return total


def gamma_point(m1: int, m2: int) -> Fraction:
    """-2 (1 - 1/m1)(1 - 1/m2) for two transversal branches at a smooth point."""
    for m in (m1, m2):
        if not isinstance(m, int) or m < 1:
            raise NotKltError(f"crossing index must be a finite integer >= 1, got {m!r}")
    return -2 * (1 - Fraction(1, m1)) * (1 - Fraction(1, m2))


def _finish_basket(shape: Shape, g: DualGraph) -> Basket:
    a = discrepancies(g)
    thr = klt_threshold(g)
    if thr.value <= 0:
        raise InternalInvariantError(
            f"classified shape {shape!r} has non-positive threshold {thr.value}"
        )
    d = delta(shape)
    e2 = reduced_exc_selfint(g)
    defect = pullback_defect(g)
    denom = Fraction(e2) - d - defect
    if denom <= 0:
        raise InternalInvariantError(f"group-order identity broke on {shape!r}")
    r = 4 / denom
    exc = g.exceptional
    return Basket(
        shape=shape,
        graph=g,
        discrepancies=tuple((v.vid, a[v.vid]) for v in exc),
        delta=d,
        r=r,
        e_sq=e2,
        threshold=thr.value,
    )


@lru_cache(maxsize=None)
def formal_smooth(m1: int = 1, m2: int = 1) -> Basket:
    """Basket of a smooth point of the pair, formal type (1, 0; m1, m2)."""
    lo, hi = sorted((m1, m2))
    shape = CyclicType(1, 0, lo, hi)
    g = chain((), m_left=lo, m_right=hi)
    return Basket(
        shape=shape,
        graph=g,
        discrepancies=(),
        delta=delta_cyclic(shape),
        r=Fraction(m1 * m2),
        e_sq=-2,
        threshold=min(Fraction(1), Fraction(1, lo), Fraction(1, hi)),
    )


def classify(g: DualGraph) -> Union[Basket, NotKlt]:
    """Classify a minimal-resolution graph into its klt basket, or NotKlt.

    Raises GraphError when the graph is not of minimal chain/fork shape at
    all; returns NotKlt when the shape is fine but the klt conditions fail
    (infinite boundary index, or platonic branch sum <= 1).
    """
    problems = minimal_violations(g)
    if problems:
        raise GraphError("not a minimal-resolution graph: " + "; ".join(problems))
    for v in g.boundary:
        if v.m == INF:
            return NotKlt(f"boundary vertex {v.vid!r} has coefficient 1 (m = inf)")
    g = canonical_graph(strip_phantoms(g))
    form = canonical_form(g)
    if form[0] == "chain":
        _, weights, (mk_l, mk_r) = form
        m1, m2 = mk_l[1], mk_r[1]
        if not weights:
            return formal_smooth(m1, m2)
        n, q = hj_evaluate(HJExpansion(weights))
        shape = CyclicType(n, q, m1, m2)
        return _finish_basket(shape, g)
    if form[0] == "fork":
        _, b, branch_forms = form
        branches = []
        for _, ws, mk in branch_forms:
            n, q = _kernels.cf_evaluate(ws)
            branches.append(PlatonicBranch(n, q, mk[1]))
        shape = PlatonicType(b, tuple(branches))
        if shape.branch_sum <= 1:
            return NotKlt(
                f"platonic branch sum {shape.branch_sum} <= 1 for {shape!r}"
            )
        return _finish_basket(shape, g)
    raise GraphError("graph is not a chain, fork, or formal smooth graph")


def delta(shape: Shape) -> Fraction:
    """Contribution number of a classified singularity."""
    if isinstance(shape, CyclicType):
        return delta_cyclic(shape)
    total = Fraction(2)
    for br in shape.branches:
        total += Fraction(dual_q(br.n, br.q), br.n * br.m * br.m)
        total -= Fraction(2, br.m)
    return total


def local_group_order(b: Basket) -> Fraction:
    """Order of the local orbifold fundamental group, via the exact identity."""
    return b.r


def basket_key(b: Basket) -> str:
    """Stable catalog key from the canonical weight/boundary data."""
    shape = b.shape
    if isinstance(shape, CyclicType):
        if shape.is_smooth:
            return f"smooth_m{shape.m1}-{shape.m2}"
        ws = ".".join(str(v.weight) for v in b.graph.exceptional)
        return f"chain_{ws}_m{shape.m1}-{shape.m2}"
    parts = []
    for _, ws, mk in canonical_form(b.graph)[2]:
        ws_txt = ".".join(map(str, ws)) if ws else "0"
        parts.append(f"{ws_txt}m{mk[1]}")
    return f"fork_{shape.b}_" + "_".join(parts)
