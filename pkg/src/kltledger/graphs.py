"""Weighted dual graphs of surface singularities and their surgeries.

Vertices are either exceptional curves of a minimal resolution (weight = the
negated self-intersection) or unweighted boundary branches carrying a
standard-coefficient index m (coefficient 1 - 1/m; m may be the infinity
marker).  Graphs are immutable simple trees-with-decorations; all operations
are pure functions returning new graphs.

Blow-up surgeries follow the usual conventions: blowing up a vertex attaches
a new weight-one vertex to it and increments the target's weight when the
target is weighted; blowing up an edge replaces it by a new weight-one vertex
joined to both ends, incrementing each weighted end.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Union

from .errors import GraphError, InternalInvariantError
from . import _kernels

__all__ = [
    "INF",
    "Vertex",
    "DualGraph",
    "VertexBlowUp",
    "EdgeBlowUp",
    "BlowUpStep",
    "chain",
    "fork",
    "validate_minimal",
    "minimal_violations",
    "intersection_matrix",
    "is_negative_definite",
    "reduced_exc_selfint",
    "blow_up",
    "split_at_vertex",
    "canonical_form",
    "canonical_graph",
]

INF = math.inf


@dataclass(frozen=True)
class Vertex:
    """One vertex: exceptional (weight set) xor boundary (m set)."""

    vid: str
    weight: Optional[int] = None
    m: Union[int, float, None] = None

    def __post_init__(self):
        if (self.weight is None) == (self.m is None):
            raise GraphError(f"vertex {self.vid!r}: set exactly one of weight / m")
        if self.weight is not None and (not isinstance(self.weight, int) or self.weight < 1):
            raise GraphError(f"vertex {self.vid!r}: weight must be an integer >= 1")
        if self.m is not None and self.m != INF:
            if not isinstance(self.m, int) or self.m < 1:
                raise GraphError(f"vertex {self.vid!r}: m must be an integer >= 1 or inf")

    @property
    def is_exceptional(self) -> bool:
        return self.weight is not None

    @property
    def is_boundary(self) -> bool:
        return self.m is not None


@dataclass(frozen=True)
class DualGraph:
    """Simple connected graph of Vertex records; edges are unordered id pairs."""

    vertices: tuple[Vertex, ...]
    edges: tuple[tuple[str, str], ...]

    def __post_init__(self):
        ids = [v.vid for v in self.vertices]
        if len(set(ids)) != len(ids):
            dup = sorted({i for i in ids if ids.count(i) > 1})
            raise GraphError(f"duplicate vertex ids: {dup}")
        known = set(ids)
        seen = set()
        norm = []
        for e in self.edges:
            a, b = e
            if a == b:
                raise GraphError(f"loop edge at {a!r}")
            if a not in known or b not in known:
                raise GraphError(f"edge {e!r} references a missing vertex")
            key = (a, b) if a <= b else (b, a)
            if key in seen:
                raise GraphError(f"duplicate edge {key!r}")
            seen.add(key)
            norm.append(key)
        object.__setattr__(self, "edges", tuple(sorted(norm)))
        if self.vertices and not self._connected():
            raise GraphError("graph is not connected")

    def _connected(self) -> bool:
        adj = self.adjacency()
        start = self.vertices[0].vid
        stack, seen = [start], {start}
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(self.vertices)

    def adjacency(self) -> dict[str, list[str]]:
        adj: dict[str, list[str]] = {v.vid: [] for v in self.vertices}
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        return adj

    def vertex(self, vid: str) -> Vertex:
        for v in self.vertices:
            if v.vid == vid:
                return v
        raise GraphError(f"no vertex {vid!r}")

    def has_vertex(self, vid: str) -> bool:
        return any(v.vid == vid for v in self.vertices)

    def degree(self, vid: str) -> int:
        return sum(1 for a, b in self.edges if vid in (a, b))

    @property
    def exceptional(self) -> tuple[Vertex, ...]:
        return tuple(v for v in self.vertices if v.is_exceptional)

    @property
    def boundary(self) -> tuple[Vertex, ...]:
        return tuple(v for v in self.vertices if v.is_boundary)

    def is_formal_smooth(self) -> bool:
        """No exceptional part: the graph of a smooth point of the pair."""
        return not self.exceptional


@dataclass(frozen=True)
class VertexBlowUp:
    """Blow up a point on the curve of `target` (a free point if None).

    The free form is only meaningful on the empty graph, where the blow-up
    of the smooth point itself has no incident curves.
    """

    target: Optional[str] = None


@dataclass(frozen=True)
class EdgeBlowUp:
    """Blow up the intersection point of the two curves joined by `edge`."""

    edge: tuple[str, str]


BlowUpStep = Union[VertexBlowUp, EdgeBlowUp]


def chain(weights: Iterable[int], m_left=1, m_right=1, prefix: str = "e") -> DualGraph:
    """Chain graph [b1, ..., bk] with optional boundary markers at the ends.

    Markers equal to 1 mean coefficient zero and are not materialized.
    A single-vertex chain carries both markers on its one vertex.
    """
    ws = list(weights)
    vertices = [Vertex(f"{prefix}{i}", weight=w) for i, w in enumerate(ws)]
    edges = [(f"{prefix}{i}", f"{prefix}{i+1}") for i in range(len(ws) - 1)]
    if ws:
        if m_left != 1:
            vertices.append(Vertex("bL", m=m_left))
            edges.append((f"{prefix}0", "bL"))
        if m_right != 1:
            vertices.append(Vertex("bR", m=m_right))
            edges.append((f"{prefix}{len(ws)-1}", "bR"))
    else:
        # Formal smooth point (1, 0; m_left, m_right).
        if m_left != 1 and m_right != 1:
            vertices = [Vertex("bL", m=m_left), Vertex("bR", m=m_right)]
            edges = [("bL", "bR")]
        elif m_left != 1:
            vertices = [Vertex("bL", m=m_left)]
        elif m_right != 1:
            vertices = [Vertex("bR", m=m_right)]
    return DualGraph(tuple(vertices), tuple(edges))


def fork(center: int, branches, prefix: str = "e") -> DualGraph:
    """Fork graph: central weight plus three (weights, marker) branches.

    Each branch is a pair ``(ws, m)``: a chain of weights read from the
    center outward with a boundary marker at the far end.  An empty chain
    with m >= 2 is the bare boundary branch on the center.
    """
    vertices = [Vertex(f"{prefix}c", weight=center)]
    edges = []
    for bi, (ws, m) in enumerate(branches):
        prev = f"{prefix}c"
        for i, w in enumerate(ws):
            vid = f"{prefix}{bi}.{i}"
            vertices.append(Vertex(vid, weight=w))
            edges.append((prev, vid))
            prev = vid
        if m != 1:
            vid = f"b{bi}"
            vertices.append(Vertex(vid, m=m))
            edges.append((prev, vid))
    return DualGraph(tuple(vertices), tuple(edges))


def _is_tree(g: DualGraph) -> bool:
    return len(g.edges) == len(g.vertices) - 1 if g.vertices else True


def strip_phantoms(g: DualGraph) -> DualGraph:
    """Drop boundary vertices with m = 1 (coefficient zero, not part of D)."""
    phantom = {v.vid for v in g.vertices if v.is_boundary and v.m == 1}
    if not phantom:
        return g
    vertices = tuple(v for v in g.vertices if v.vid not in phantom)
    edges = tuple(e for e in g.edges if e[0] not in phantom and e[1] not in phantom)
    return DualGraph(vertices, edges)


def minimal_violations(g: DualGraph) -> tuple[str, ...]:
    """Reasons the graph is not a minimal-resolution graph (empty = minimal).

    Accepts the chain and three-branch fork shapes of the klt classification,
    with boundary vertices of degree one attached at branch ends (or directly
    to a fork center as a bare branch), plus the formal smooth graphs (no
    exceptional part: empty, one boundary vertex, or two joined by an edge).
    Boundary markers m = 1 are coefficient-zero decorations and are ignored
    by the shape analysis.
    """
    for v in g.vertices:
        if v.is_boundary and v.m == 1 and g.degree(v.vid) > 1:
            return (f"boundary vertex {v.vid!r} must have degree 1",)
    g = strip_phantoms(g)
    problems = []
    if not _is_tree(g):
        problems.append("graph contains a cycle")
        return tuple(problems)

    exc = [v for v in g.exceptional]
    bdy = [v for v in g.boundary]
    adj = g.adjacency()

    def full_degree(vid):
        return len(adj[vid])

    if not exc:
        # Formal smooth shapes.
        if len(g.vertices) > 2:
            problems.append("more than two boundary branches at a smooth point")
        for v in g.vertices:
            if g.degree(v.vid) > 1:
                problems.append(f"boundary vertex {v.vid!r} has degree > 1")
        return tuple(problems)

    for v in exc:
        if v.weight < 2:
            problems.append(f"exceptional vertex {v.vid!r} has weight {v.weight} < 2")
    for a, b in g.edges:
        if g.vertex(a).is_boundary and g.vertex(b).is_boundary:
            problems.append(f"edge {(a, b)!r} joins two boundary vertices")
    for v in g.boundary:
        if g.degree(v.vid) != 1:
            problems.append(f"boundary vertex {v.vid!r} must have degree 1")
    if problems:
        return tuple(problems)

    centers = [v for v in exc if full_degree(v.vid) >= 3]
    if not centers:
        # Chain shape; at most one non-trivial boundary vertex per end, and
        # boundary only at ends.  Degrees <= 2 everywhere is already known.
        for v in bdy:
            (nb,) = adj[v.vid]
            if not g.vertex(nb).is_exceptional:
                problems.append(f"boundary vertex {v.vid!r} not attached to a curve")
        # Ends are the exceptional vertices of exceptional-degree <= 1.
        for v in exc:
            exc_deg = sum(1 for w in adj[v.vid] if g.vertex(w).is_exceptional)
            bdy_deg = sum(1 for w in adj[v.vid] if g.vertex(w).is_boundary)
            if exc_deg == 2 and bdy_deg > 0:
                problems.append(
                    f"interior chain vertex {v.vid!r} carries a boundary branch"
                )
    elif len(centers) == 1:
        c = centers[0]
        if full_degree(c.vid) != 3:
            problems.append(f"vertex {c.vid!r} has degree {full_degree(c.vid)} > 3")
        # Remaining vertices must fall into three chains hanging off c, each
        # with its boundary marker (if any) at the far end.
        for v in exc:
            if v.vid != c.vid and full_degree(v.vid) > 2:
                problems.append(f"second branch vertex {v.vid!r} of degree >= 3")
        for v in g.boundary:
            (nb,) = adj[v.vid]
            nbv = g.vertex(nb)
            if nbv.is_exceptional and nb != c.vid:
                exc_deg = sum(1 for w in adj[nb] if g.vertex(w).is_exceptional)
                if exc_deg == 2:
                    problems.append(
                        f"boundary vertex {v.vid!r} attached mid-branch at {nb!r}"
                    )
    else:
        problems.append(
            "more than one vertex of degree >= 3: "
            + ", ".join(sorted(v.vid for v in centers))
        )
    return tuple(problems)


def validate_minimal(g: DualGraph) -> bool:
    """True iff the graph can be the dual graph of a minimal resolution."""
    return not minimal_violations(g)


def intersection_matrix(g: DualGraph) -> list[list[int]]:
    """Intersection matrix of the exceptional curves, in `g.exceptional` order.

    Diagonal entries are -w(v); off-diagonal entries are 1 exactly for edges.
    """
    exc = g.exceptional
    index = {v.vid: i for i, v in enumerate(exc)}
    n = len(exc)
    m = [[0] * n for _ in range(n)]
    for i, v in enumerate(exc):
        m[i][i] = -v.weight
    for a, b in g.edges:
        if a in index and b in index:
            i, j = index[a], index[b]
            m[i][j] = m[j][i] = 1
    return m


def is_negative_definite(matrix: list[list[int]]) -> bool:
    """Sylvester test in exact integer arithmetic: (-1)^k det_k > 0 for all k."""
    n = len(matrix)
    for row in matrix:
        if len(row) != n:
            raise ValueError("matrix is not square")
    for i in range(n):
        for j in range(i + 1, n):
            if matrix[i][j] != matrix[j][i]:
                raise ValueError("matrix is not symmetric")
    minors = _kernels.leading_minors(matrix)
    if len(minors) < n:
        return False
    return all(
        (minor > 0 if k % 2 else minor < 0) for k, minor in enumerate(minors)
    )


def reduced_exc_selfint(g: DualGraph) -> int:
    """E^2 of the reduced exceptional divisor: -sum w(v) + 2 * (#E-E edges).

    Formal smooth graphs return -2 by the smooth-point convention.
    """
    exc_ids = {v.vid for v in g.exceptional}
    if not exc_ids:
        return -2
    weight_sum = sum(v.weight for v in g.exceptional)
    exc_edges = sum(1 for a, b in g.edges if a in exc_ids and b in exc_ids)
    return -weight_sum + 2 * exc_edges


def _fresh_id(g: DualGraph, stem: str = "c") -> str:
    taken = {v.vid for v in g.vertices}
    i = 1
    while f"{stem}{i}" in taken:
        i += 1
    return f"{stem}{i}"


def _bump(v: Vertex) -> Vertex:
    if v.is_exceptional:
        return Vertex(v.vid, weight=v.weight + 1)
    return v


def blow_up_tracked(g: DualGraph, step: BlowUpStep) -> tuple[DualGraph, str]:
    """Apply one blow-up step; returns the new graph and the new vertex id."""
    new_id = _fresh_id(g)
    if isinstance(step, VertexBlowUp):
        if step.target is None:
            if g.vertices:
                raise GraphError("free blow-up is only defined on the empty graph")
            return DualGraph((Vertex(new_id, weight=1),), ()), new_id
        if not g.has_vertex(step.target):
            raise GraphError(f"blow-up target {step.target!r} does not exist")
        vertices = tuple(
            _bump(v) if v.vid == step.target else v for v in g.vertices
        ) + (Vertex(new_id, weight=1),)
        edges = g.edges + ((step.target, new_id),)
        return DualGraph(vertices, edges), new_id
    if isinstance(step, EdgeBlowUp):
        a, b = step.edge
        key = (a, b) if a <= b else (b, a)
        if key not in g.edges:
            raise GraphError(f"blow-up edge {step.edge!r} does not exist")
        vertices = tuple(
            _bump(v) if v.vid in key else v for v in g.vertices
        ) + (Vertex(new_id, weight=1),)
        edges = tuple(e for e in g.edges if e != key) + ((key[0], new_id), (key[1], new_id))
        return DualGraph(vertices, edges), new_id
    raise GraphError(f"unknown blow-up step {step!r}")


def blow_up(g: DualGraph, step: BlowUpStep) -> DualGraph:
    """Blow up a vertex or an edge of the graph."""
    return blow_up_tracked(g, step)[0]


def split_at_vertex(g: DualGraph, vid: str, m_f) -> tuple[DualGraph, ...]:
    """Remove the curve `vid` and return the graphs of the points it met.

    Every former neighbor inside a component receives a new boundary vertex
    with marker `m_f` (the branch of the removed curve through that point);
    markers m_f = 1 are coefficient zero and dropped.  Components with no
    exceptional vertices come back as formal smooth graphs carrying their
    boundary markers.  Components are returned in canonical order.
    """
    v = g.vertex(vid)
    if not v.is_exceptional:
        raise GraphError(f"split vertex {vid!r} is not exceptional")
    neighbors = set(g.adjacency()[vid])
    rest_ids = [w.vid for w in g.vertices if w.vid != vid]
    adj = {i: [] for i in rest_ids}
    for a, b in g.edges:
        if vid in (a, b):
            continue
        adj[a].append(b)
        adj[b].append(a)
    components = []
    seen: set[str] = set()
    for root in rest_ids:
        if root in seen:
            continue
        comp = {root}
        stack = [root]
        seen.add(root)
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    comp.add(w)
                    stack.append(w)
        components.append(comp)
    graphs = []
    for comp in components:
        vertices = [w for w in g.vertices if w.vid in comp]
        edges = [e for e in g.edges if e[0] in comp and e[1] in comp]
        if m_f != 1:
            taken = set(comp)
            counter = 1
            for nb in sorted(neighbors & comp):
                while f"x{counter}" in taken:
                    counter += 1
                mark = f"x{counter}"
                taken.add(mark)
                vertices.append(Vertex(mark, m=m_f))
                edges.append((nb, mark))
        graphs.append(DualGraph(tuple(vertices), tuple(edges)))
    graphs.sort(key=canonical_form)
    return tuple(graphs)


# ---------------------------------------------------------------------------
# Canonical forms.  Total and isomorphism-complete for the shapes we accept
# (chains, three-branch forks, formal smooth graphs): chains take the lex
# smaller of the two orientations, forks sort their branches.


def _marker_key(m) -> tuple[int, int]:
    # Finite markers sort by value; infinity sorts last.
    return (1, 0) if m == INF else (0, m)


def _chain_reading(g: DualGraph):
    """Exceptional weight sequence with end markers, or None if not a chain."""
    exc = g.exceptional
    adj = g.adjacency()
    if not exc:
        ms = sorted((v.m for v in g.vertices if v.m != 1), key=_marker_key)
        if len(ms) > 2:
            return None
        while len(ms) < 2:
            ms.append(1)
        return (), tuple(ms)
    exc_ids = {v.vid for v in exc}
    exc_adj = {v.vid: [w for w in adj[v.vid] if w in exc_ids] for v in exc}
    ends = [vid for vid, ns in exc_adj.items() if len(ns) <= 1]
    if len(exc) == 1:
        order = [exc[0].vid]
    else:
        start = min(ends)
        order = [start]
        prev = None
        while True:
            nxt = [w for w in exc_adj[order[-1]] if w != prev]
            if not nxt:
                break
            prev = order[-1]
            order.append(nxt[0])
    if len(order) != len(exc):
        return None

    def end_marker(vid):
        ms = [g.vertex(w).m for w in adj[vid] if g.vertex(w).is_boundary]
        ms = [m for m in ms if m != 1]
        if len(ms) > 1:
            return None
        return ms[0] if ms else 1

    if len(order) == 1:
        vid = order[0]
        ms = sorted(
            (g.vertex(w).m for w in adj[vid] if g.vertex(w).is_boundary),
            key=_marker_key,
        )
        ms = [m for m in ms if m != 1]
        if len(ms) > 2:
            return None
        while len(ms) < 2:
            ms.append(1)
        return (g.vertex(vid).weight,), tuple(ms)
    m_l = end_marker(order[0])
    m_r = end_marker(order[-1])
    if m_l is None or m_r is None:
        return None
    weights = tuple(g.vertex(vid).weight for vid in order)
    return weights, (m_l, m_r)


def canonical_form(g: DualGraph):
    """A hashable, orientation-independent description of the graph.

    Chains: ("chain", weights, (m1, m2)) in the lex-smaller orientation.
    Forks: ("fork", b, sorted branch descriptions).  Graphs outside these
    shapes get a stable fallback form so sorting stays total.  Boundary
    markers m = 1 are dropped first whenever that leaves a valid graph.
    """
    try:
        g = strip_phantoms(g)
    except GraphError:
        pass
    adj = g.adjacency()
    centers = [v for v in g.exceptional if len(adj[v.vid]) >= 3]
    if not centers and _is_tree(g):
        reading = _chain_reading(g)
        if reading is not None:
            weights, (m_l, m_r) = reading
            fwd = (weights, (_marker_key(m_l), _marker_key(m_r)))
            rev = (tuple(reversed(weights)), (_marker_key(m_r), _marker_key(m_l)))
            return ("chain",) + min(fwd, rev)
    if len(centers) == 1 and _is_tree(g) and len(adj[centers[0].vid]) == 3:
        c = centers[0]
        branches = []
        ok = True
        for first in adj[c.vid]:
            ws = []
            prev, cur = c.vid, first
            marker = 1
            while True:
                v = g.vertex(cur)
                if v.is_boundary:
                    marker = v.m
                    if [w for w in adj[cur] if w != prev]:
                        ok = False
                    break
                ws.append(v.weight)
                nxt = [w for w in adj[cur] if w != prev]
                if not nxt:
                    break
                if len(nxt) > 1:
                    ok = False
                    break
                prev, cur = cur, nxt[0]
            branches.append((len(ws), tuple(ws), _marker_key(marker)))
        if ok:
            return ("fork", c.weight, tuple(sorted(branches)))
    # Fallback for intermediate (blown-up) graphs: degree-ordered multiset.
    descr = tuple(
        sorted(
            (
                v.is_boundary,
                v.weight if v.is_exceptional else 0,
                _marker_key(v.m) if v.is_boundary else (0, 0),
                len(adj[v.vid]),
            )
            for v in g.vertices
        )
    )
    return ("other", descr, len(g.edges))


def canonical_graph(g: DualGraph) -> DualGraph:
    """Relabel a minimal-shape graph to canonical ids in canonical orientation.

    Exceptional vertices become e0, e1, ... (chain order, or fork center
    first followed by sorted branches); boundary vertices become b0, b1, ...
    in attachment order.  Raises GraphError for shapes outside the
    classification.
    """
    form = canonical_form(g)
    if form[0] == "chain":
        _, weights, (mk_l, mk_r) = form
        m_l = INF if mk_l == (1, 0) else mk_l[1]
        m_r = INF if mk_r == (1, 0) else mk_r[1]
        return chain(weights, m_left=m_l, m_right=m_r)
    if form[0] == "fork":
        _, b, branches = form
        return fork(
            b,
            [
                (ws, INF if mk == (1, 0) else mk[1])
                for (_, ws, mk) in branches
            ],
        )
    raise GraphError("graph is not a chain, fork, or formal smooth graph")


def max_all_two_run(g: DualGraph) -> int:
    """Size of the largest connected subgraph all of whose weights are 2."""
    two_ids = {v.vid for v in g.exceptional if v.weight == 2}
    adj = g.adjacency()
    best = 0
    seen: set[str] = set()
    for root in sorted(two_ids):
        if root in seen:
            continue
        size = 0
        stack = [root]
        seen.add(root)
        while stack:
            cur = stack.pop()
            size += 1
            for w in adj[cur]:
                if w in two_ids and w not in seen:
                    seen.add(w)
                    stack.append(w)
        best = max(best, size)
    return best


def assert_internal(cond: bool, message: str):
    if not cond:
        raise InternalInvariantError(message)
