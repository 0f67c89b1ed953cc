"""Enumeration of basket sets and contraction scenarios, plus the scan checks.

The basket sets realize S(L, eps) at a fixed vertex budget: all eps-klt
chains and forks with weights in [2, 2/eps], boundary decorations from a
finite index set, and connected all-weight-2 subgraphs of at most L vertices.
Scenario enumeration walks every legal blow-up script up to a depth bound
(one (-1)-curve at a time) and every curve of the minimal resolution, over a
grid of contracted-curve coefficients, crossings and auxiliary points.

Scans over a corpus verify the ledger claims at desk scale: positivity of
Ch(f), discreteness of its denominators (the minimum s yields the step bound
ceil(R/s)), the mu-monotonicity increments, and the bound on created chains
of (-2)-curves.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Optional, Sequence

from .discrepancy import Basket, NotKlt, basket_key, classify
from .errors import NotKltError
from .graphs import (
    DualGraph,
    EdgeBlowUp,
    VertexBlowUp,
    blow_up_tracked,
    chain,
    fork,
    max_all_two_run,
    split_at_vertex,
)
from .ledger import (
    ContractionScenario,
    PickVertex,
    Script,
    legal_first_steps,
    legal_next_steps,
    mu_trajectory,
    resolve_scenario,
)

__all__ = [
    "EnumerationBudget",
    "ScanReport",
    "ScanViolation",
    "MuMonotoneReport",
    "ChainBoundReport",
    "enumerate_baskets",
    "enumerate_scenarios",
    "verify_mu_monotone",
    "verify_chain_bound",
    "scan_min_ch",
    "compute_bounds",
    "BoundsRecord",
    "describe_scenario",
]


@dataclass(frozen=True)
class EnumerationBudget:
    """Budget for realizing S(L, eps) at a fixed vertex count."""

    epsilon: Fraction
    L: int
    max_vertices: int
    max_weight_override: Optional[int] = None

    def __post_init__(self):
        eps = Fraction(self.epsilon)
        object.__setattr__(self, "epsilon", eps)
        if not 0 < eps < 1:
            raise ValueError(f"epsilon must lie in (0, 1), got {eps}")
        if self.L < 1 or self.max_vertices < 1:
            raise ValueError("L and max_vertices must be positive")

    @property
    def effective_max_weight(self) -> int:
        cap = math.floor(Fraction(2) / self.epsilon)
        if self.max_weight_override is not None:
            cap = min(cap, self.max_weight_override)
        return cap


def _marker_pairs(ms: Sequence[int], single_vertex: bool):
    """Canonical (m_left, m_right) pairs; single-vertex chains sort them."""
    for m1, m2 in itertools.product(ms, repeat=2):
        if single_vertex and m1 > m2:
            continue
        yield m1, m2


def enumerate_baskets(budget: EnumerationBudget, boundary_ms: Iterable[int]) -> tuple[Basket, ...]:
    """All eps-klt baskets within the budget, deduplicated canonically.

    boundary_ms is the set of allowed boundary indices (1 = no branch is
    always available); every member must satisfy 1/m > eps, otherwise no
    decorated graph could be eps-klt.
    """
    eps = budget.epsilon
    ms = sorted(set(boundary_ms) | {1})
    for m in ms:
        if not isinstance(m, int) or m < 1:
            raise ValueError(f"boundary index must be a positive integer, got {m!r}")
        if Fraction(1, m) <= eps:
            raise ValueError(f"boundary index {m} can never be {eps}-klt")
    w_max = budget.effective_max_weight
    found: dict[str, Basket] = {}

    def consider(g: DualGraph):
        if max_all_two_run(g) > budget.L:
            return
        result = classify(g)
        if isinstance(result, NotKlt):
            return
        if result.threshold <= eps:
            return
        found.setdefault(basket_key(result), result)

    # Chains, in the lex-smaller orientation only.
    for length in range(1, budget.max_vertices + 1):
        for ws in itertools.product(range(2, w_max + 1), repeat=length):
            rev = tuple(reversed(ws))
            if ws > rev:
                continue
            for m1, m2 in _marker_pairs(ms, single_vertex=(length == 1)):
                if ws == rev and (m1, m2) > (m2, m1):
                    continue
                consider(chain(ws, m_left=m1, m_right=m2))

    # Forks: center plus three branches (chains read outward, marker at the
    # far end; an empty chain with m >= 2 is a bare boundary branch).
    branch_space = []
    for length in range(0, budget.max_vertices):
        for ws in itertools.product(range(2, w_max + 1), repeat=length):
            for m in ms:
                if not ws and m == 1:
                    continue
                branch_space.append((ws, m))
    branch_space.sort(key=lambda br: (len(br[0]), br[0], br[1]))
    for center in range(2, w_max + 1):
        for triple in itertools.combinations_with_replacement(branch_space, 3):
            if 1 + sum(len(ws) for ws, _ in triple) > budget.max_vertices:
                continue
            consider(fork(center, triple))

    return tuple(found[key] for key in sorted(found))


def _script_modes(g: DualGraph, depth: int) -> Iterator[tuple[Script, int]]:
    """All legal scripts up to the depth, with the final (-1)-vertex degree."""
    frontier = [(g, (), None)]
    for _ in range(depth):
        nxt = []
        for cur_g, steps, current in frontier:
            options = (
                legal_first_steps(cur_g)
                if current is None
                else legal_next_steps(cur_g, current)
            )
            for step in options:
                new_g, new_id = blow_up_tracked(cur_g, step)
                new_steps = steps + (step,)
                yield Script(new_steps), new_g.degree(new_id)
                nxt.append((new_g, new_steps, new_id))
        frontier = nxt


def enumerate_scenarios(
    x0_set: Iterable[Basket],
    depth: int,
    m_set: Iterable[int],
    max_points: int = 3,
) -> Iterator[ContractionScenario]:
    """Every scenario over the baskets: scripts up to `depth`, all picked
    vertices, coefficients from m_set, crossings and auxiliary points within
    the k <= max_points budget.  Deterministic canonical order; lazily
    generated (corpora get large).
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    mf_values = sorted(set(m_set))
    cross_values = [m for m in mf_values if m >= 2]
    baskets = sorted(x0_set, key=basket_key)
    for x0 in baskets:
        g = x0.graph
        modes: list[tuple[object, int]] = [
            (PickVertex(v.vid), g.degree(v.vid)) for v in g.exceptional
        ]
        modes.extend(_script_modes(g, depth))
        for mode, k_comps in modes:
            budget_left = max(0, max_points - k_comps)
            for m_f in mf_values:
                for n_cross in range(0, budget_left + 1):
                    for crossings in itertools.combinations_with_replacement(
                        cross_values, n_cross
                    ):
                        for aux in range(0, budget_left - n_cross + 1):
                            yield ContractionScenario(
                                x0_graph=g,
                                mode=mode,
                                m_f=m_f,
                                crossings=crossings,
                                aux_smooth_points=aux,
                            )


def describe_scenario(sc: ContractionScenario) -> str:
    """Compact one-line description for reports."""
    try:
        x0 = classify(sc.x0_graph)
        head = basket_key(x0) if isinstance(x0, Basket) else "<not-klt>"
    except Exception:
        head = "<invalid>"
    if isinstance(sc.mode, PickVertex):
        mode = f"pick:{sc.mode.vertex}"
    else:
        parts = []
        for step in sc.mode.steps:
            if isinstance(step, VertexBlowUp):
                parts.append(f"v({step.target or '*'})")
            else:
                parts.append(f"e({step.edge[0]},{step.edge[1]})")
        mode = "+".join(parts)
    extra = ""
    if sc.crossings:
        extra += f" cross={list(sc.crossings)}"
    if sc.aux_smooth_points:
        extra += f" aux={sc.aux_smooth_points}"
    return f"{head} {mode} m={sc.m_f}{extra}"


@dataclass(frozen=True)
class MuMonotoneReport:
    ok: bool
    trajectory: tuple[int, ...]
    failures: tuple[str, ...]


def verify_mu_monotone(sc: ContractionScenario) -> MuMonotoneReport:
    """Check the trajectory of mu against the local blow-up rules.

    Start values: -3 for an edge between two weighted vertices, -2 for an
    edge with one boundary end or a vertex blow-up at a curve, -1 for the
    remaining smooth-point starts.  Increments: +1 for vertex blow-ups, 0
    for edge blow-ups at a weighted neighbor, +1 at a boundary neighbor.
    Every value must be >= -3 and the sequence non-decreasing.
    """
    if not isinstance(sc.mode, Script):
        raise ValueError("mu monotonicity applies to script scenarios")
    traj = mu_trajectory(sc)
    failures = []

    # Structural predictions need the replay to know each step's neighbors.
    g = sc.x0_graph
    current = None
    expected: list[int] = []
    for i, step in enumerate(sc.mode.steps):
        if i == 0:
            if isinstance(step, VertexBlowUp):
                if step.target is None or g.vertex(step.target).is_boundary:
                    expected.append(-1)
                else:
                    expected.append(-2)
            else:
                a, b = step.edge
                weighted = sum(
                    1 for vid in (a, b) if g.vertex(vid).is_exceptional
                )
                expected.append({2: -3, 1: -2, 0: -1}[weighted])
        else:
            if isinstance(step, VertexBlowUp):
                inc = 1
            else:
                a, b = step.edge
                other = b if a == current else a
                inc = 0 if g.vertex(other).is_exceptional else 1
            expected.append(expected[-1] + inc)
        g, current = blow_up_tracked(g, step)

    if tuple(expected) != traj:
        failures.append(f"trajectory {traj} != structural prediction {tuple(expected)}")
    if any(v < -3 for v in traj):
        failures.append(f"trajectory {traj} drops below -3")
    if any(b < a for a, b in zip(traj, traj[1:])):
        failures.append(f"trajectory {traj} is not non-decreasing")
    return MuMonotoneReport(ok=not failures, trajectory=traj, failures=tuple(failures))


@dataclass(frozen=True)
class ChainBoundEntry:
    point_key: str
    max_two_run: int
    created_runs: tuple[tuple[int, tuple[str, ...]], ...]


@dataclass(frozen=True)
class ChainBoundReport:
    ok: bool
    limit: Fraction
    entries: tuple[ChainBoundEntry, ...]
    failures: tuple[str, ...]


def _two_runs(g: DualGraph) -> list[set[str]]:
    two_ids = {v.vid for v in g.exceptional if v.weight == 2}
    adj = g.adjacency()
    runs = []
    seen: set[str] = set()
    for root in sorted(two_ids):
        if root in seen:
            continue
        comp = {root}
        stack = [root]
        seen.add(root)
        while stack:
            for w in adj[stack.pop()]:
                if w in two_ids and w not in seen:
                    seen.add(w)
                    comp.add(w)
                    stack.append(w)
        runs.append(comp)
    return runs


def verify_chain_bound(sc: ContractionScenario, limit) -> ChainBoundReport:
    """Check that every point's maximal (-2)-chain stays within the limit.

    Chains containing script-created curves are recorded together with the
    kinds of blow-up (vertex / edge) that created their members, so reports
    can distinguish the two bounding mechanisms.
    """
    limit = Fraction(limit)
    created_by: dict[str, str] = {}
    if isinstance(sc.mode, Script):
        g = sc.x0_graph
        current = None
        for step in sc.mode.steps:
            g, current = blow_up_tracked(g, step)
            created_by[current] = "vertex" if isinstance(step, VertexBlowUp) else "edge"
        c_tilde = current
    else:
        g, c_tilde = sc.x0_graph, sc.mode.vertex
    entries = []
    failures = []
    for comp in split_at_vertex(g, c_tilde, sc.m_f):
        runs = _two_runs(comp)
        created = []
        max_len = 0
        for run in runs:
            max_len = max(max_len, len(run))
            kinds = sorted({created_by[v] for v in run if v in created_by})
            if kinds:
                created.append((len(run), tuple(kinds)))
        result = classify(comp)
        key = basket_key(result) if isinstance(result, Basket) else "<not-klt>"
        entries.append(
            ChainBoundEntry(
                point_key=key,
                max_two_run=max_len,
                created_runs=tuple(sorted(created)),
            )
        )
        if max_len > limit:
            failures.append(f"point {key} has a (-2)-chain of length {max_len} > {limit}")
    return ChainBoundReport(
        ok=not failures, limit=limit, entries=tuple(entries), failures=tuple(failures)
    )


@dataclass(frozen=True)
class ScanViolation:
    kind: str
    scenario: str
    detail: str


@dataclass(frozen=True)
class ScanReport:
    scenarios_checked: int
    min_ch: Optional[Fraction]
    common_denominator: int
    violations: tuple[ScanViolation, ...]
    mu_max: Optional[int]
    bound_B: Fraction
    step_bound: Optional[int] = None
    skipped_non_klt: int = 0
    delta_range: Optional[tuple[Fraction, Fraction]] = None


def scan_min_ch(
    scenarios: Iterable[ContractionScenario],
    epsilon,
    R,
) -> ScanReport:
    """Resolve a corpus and report min Ch, the common denominator, and bounds.

    Scenarios whose points are not klt are skipped (they are not contractions
    of klt pairs).  Violations collect non-positive Ch values, mu above
    B = R + 31 + 2/eps whenever Ch <= R, and k > 3.
    """
    epsilon = Fraction(epsilon)
    R = Fraction(R)
    bound_b = R + 31 + Fraction(2) / epsilon
    checked = 0
    skipped = 0
    min_ch: Optional[Fraction] = None
    mu_max: Optional[int] = None
    denom = 1
    d_min: Optional[Fraction] = None
    d_max: Optional[Fraction] = None
    violations = []
    for sc in scenarios:
        try:
            data = resolve_scenario(sc)
        except NotKltError:
            skipped += 1
            continue
        checked += 1
        if min_ch is None or data.ch < min_ch:
            min_ch = data.ch
        if mu_max is None or data.mu > mu_max:
            mu_max = data.mu
        denom = math.lcm(denom, data.ch.denominator)
        for b in (data.x0, *data.points):
            if d_min is None or b.delta < d_min:
                d_min = b.delta
            if d_max is None or b.delta > d_max:
                d_max = b.delta
        if data.ch <= 0:
            violations.append(
                ScanViolation("nonpositive-ch", describe_scenario(sc), f"Ch = {data.ch}")
            )
        if data.ch <= R and data.mu > bound_b:
            violations.append(
                ScanViolation("mu-exceeds-B", describe_scenario(sc), f"mu = {data.mu}")
            )
        if data.k > 3:
            violations.append(
                ScanViolation("k-exceeds-3", describe_scenario(sc), f"k = {data.k}")
            )
    step_bound = None
    if min_ch is not None and min_ch > 0:
        step_bound = math.ceil(R / min_ch)
    return ScanReport(
        scenarios_checked=checked,
        min_ch=min_ch,
        common_denominator=denom,
        violations=tuple(violations),
        mu_max=mu_max,
        bound_B=bound_b,
        step_bound=step_bound,
        skipped_non_klt=skipped,
        delta_range=None if d_min is None else (d_min, d_max),
    )


@dataclass(frozen=True)
class BoundsRecord:
    b: Fraction
    l: Fraction
    max_weight: int
    max_boundary_index: int
    step_bound: int


def compute_bounds(epsilon, R, L0: int, s) -> BoundsRecord:
    """Explicit constants: B = R + 31 + 2/eps, L = max(L0, R + 36 + 2/eps),
    the weight cap floor(2/eps), the largest boundary index with 1/m > eps,
    and the step count ceil(R/s)."""
    epsilon = Fraction(epsilon)
    R = Fraction(R)
    s = Fraction(s)
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    if R <= 0 or s <= 0 or L0 < 1:
        raise ValueError("need R > 0, s > 0 and L0 >= 1")
    two_over = Fraction(2) / epsilon
    return BoundsRecord(
        b=R + 31 + two_over,
        l=max(Fraction(L0), R + 36 + two_over),
        max_weight=math.floor(two_over),
        max_boundary_index=math.ceil(Fraction(1) / epsilon) - 1,
        step_bound=math.ceil(R / s),
    )
