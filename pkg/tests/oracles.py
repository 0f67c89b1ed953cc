"""Independent oracles the test suite checks the package against.

Everything here is deliberately written from scratch rather than calling the
package's computational routines: a separate fraction-free Gaussian
elimination solver, a direct continued-fraction evaluator, the adjunction
system rebuilt from first principles, the closed-form orbifold order for
cyclic types, and a full resolution-bookkeeping computation of the exact
c1^2 change of a contraction (global intersection numbers enter as symbols
that cancel between the source and target of the contraction, so the result
is exact).
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm

from kltledger.graphs import (
    DualGraph,
    EdgeBlowUp,
    VertexBlowUp,
    blow_up_tracked,
    split_at_vertex,
)
from kltledger.ledger import ContractionScenario, PickVertex, Script


def gauss_solve(matrix, rhs):
    """Fraction-free Gaussian elimination with per-row gcd reduction.

    Takes Fraction (or int) entries, clears denominators, eliminates by
    cross-multiplying rows, and back-substitutes exactly.  Independent of
    the package's Bareiss kernels.
    """
    n = len(matrix)
    if n == 0:
        return []
    rows = []
    for i in range(n):
        entries = [Fraction(x) for x in matrix[i]] + [Fraction(rhs[i])]
        scale = lcm(*(e.denominator for e in entries))
        rows.append([int(e * scale) for e in entries])
    for col in range(n):
        pivot_row = next(
            (r for r in range(col, n) if rows[r][col] != 0), None
        )
        if pivot_row is None:
            raise ValueError("singular system")
        rows[col], rows[pivot_row] = rows[pivot_row], rows[col]
        p = rows[col][col]
        for r in range(col + 1, n):
            factor = rows[r][col]
            if factor == 0:
                continue
            rows[r] = [p * a - factor * b for a, b in zip(rows[r], rows[col])]
            g = gcd(*rows[r])
            if g > 1:
                rows[r] = [a // g for a in rows[r]]
    xs = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        acc = Fraction(rows[i][n])
        for j in range(i + 1, n):
            acc -= rows[i][j] * xs[j]
        xs[i] = acc / rows[i][i]
    return xs


def cf_value(weights) -> Fraction:
    """[b1, ..., bk] evaluated directly with Fractions."""
    value = Fraction(weights[-1])
    for b in reversed(weights[:-1]):
        value = b - 1 / value
    return value


def discrepancy_oracle(g: DualGraph) -> dict[str, Fraction]:
    """Adjunction discrepancies rebuilt from the graph, solved with
    gauss_solve.  Boundary markers m = 1 contribute coefficient zero."""
    exc = [v for v in g.vertices if v.weight is not None]
    if not exc:
        return {}
    index = {v.vid: i for i, v in enumerate(exc)}
    n = len(exc)
    matrix = [[Fraction(0)] * n for _ in range(n)]
    rhs = [Fraction(0)] * n
    for i, v in enumerate(exc):
        matrix[i][i] = Fraction(-v.weight)
        rhs[i] = Fraction(v.weight - 2)
    for a, b in g.edges:
        va, vb = g.vertex(a), g.vertex(b)
        if a in index and b in index:
            matrix[index[a]][index[b]] += 1
            matrix[index[b]][index[a]] += 1
        elif a in index and vb.m is not None:
            rhs[index[a]] += 1 - Fraction(1, vb.m)
        elif b in index and va.m is not None:
            rhs[index[b]] += 1 - Fraction(1, va.m)
    xs = gauss_solve(matrix, rhs)
    return {v.vid: xs[i] for i, v in enumerate(exc)}


def cyclic_group_order(n: int, m1: int, m2: int) -> int:
    """Closed form r = n * m1 * m2 for cyclic types."""
    return n * m1 * m2


def _pair_square_const(g: DualGraph, exc_coeffs, bdy_coeffs, k_drop: int, touches):
    """Constant part of (K + sum_b c_b B_b + sum_v e_v E_v)^2 on the surface
    of `g`, relative to the pre-blow-up symbols.

    The symbols K^2, K.B_b, B_b^2 and the far parts of B_b.B_b' carry
    identical coefficients on both sides of a contraction and cancel in the
    difference, so only their exactly-computable shifts appear: K^2 drops by
    one per blow-up, K.B_b grows and B_b^2 drops by one per blow-up centered
    on B_b, and B.B' loses its local crossing when the center separates the
    branches.  Everything else (rational curves E with K.E = w - 2, all
    adjacencies) is read off the graph.
    """
    const = Fraction(-k_drop)  # K^2 shift
    adj = {(a, b) for a, b in g.edges} | {(b, a) for a, b in g.edges}

    def meets(x, y):
        return 1 if (x, y) in adj else 0

    for b, cb in bdy_coeffs.items():
        const += 2 * cb * touches.get(b, 0)  # K.B shift
        const -= cb * cb * touches.get(b, 0)  # B^2 shift
    bs = sorted(bdy_coeffs)
    for i, b1 in enumerate(bs):
        for b2 in bs[i + 1 :]:
            const += 2 * bdy_coeffs[b1] * bdy_coeffs[b2] * meets(b1, b2)
    for v, ev in exc_coeffs.items():
        w = g.vertex(v).weight
        const += 2 * ev * (w - 2)  # 2 K.E
        const += ev * ev * (-w)  # E^2
        for b, cb in bdy_coeffs.items():
            const += 2 * ev * cb * meets(v, b)
    evs = sorted(exc_coeffs)
    for i, v1 in enumerate(evs):
        for v2 in evs[i + 1 :]:
            const += 2 * exc_coeffs[v1] * exc_coeffs[v2] * meets(v1, v2)
    return const


def c1sq_change_oracle(sc: ContractionScenario) -> Fraction:
    """True exact change of c1^2 along the contraction, from the resolution.

    Upstairs, the pulled-back pair on the common resolution is K + the
    boundary strict transforms + (1 - 1/m_f) C-tilde + sum (-a_i) E_i with
    the a_i solved per split component; downstairs the same with x0's
    discrepancies and no C.  Global symbols cancel; the constant parts
    differ by the exact amount returned here.  Scenarios with an explicit
    crossings list are out of scope (their extra branches are not part of
    x0's graph), as are auxiliary points (they do not move c1^2).
    """
    if sc.crossings:
        raise ValueError("the resolution oracle models graph-borne branches only")
    g0 = sc.x0_graph
    touches: dict[str, int] = {}
    if isinstance(sc.mode, Script):
        g = g0
        current = None
        for step in sc.mode.steps:
            if isinstance(step, VertexBlowUp):
                if step.target is not None and g.vertex(step.target).m is not None:
                    touches[step.target] = touches.get(step.target, 0) + 1
            else:
                for end in step.edge:
                    if g.vertex(end).m is not None:
                        touches[end] = touches.get(end, 0) + 1
            g, current = blow_up_tracked(g, step)
        final, c_tilde = g, current
        nu = len(sc.mode.steps)
    else:
        final, c_tilde = g0, sc.mode.vertex
        nu = 0

    upstairs_a: dict[str, Fraction] = {}
    for comp in split_at_vertex(final, c_tilde, sc.m_f):
        upstairs_a.update(discrepancy_oracle(comp))
    exc_up = {c_tilde: 1 - Fraction(1, sc.m_f)}
    for v in final.exceptional:
        if v.vid != c_tilde:
            exc_up[v.vid] = -upstairs_a[v.vid]
    bdy_coeffs = {
        v.vid: 1 - Fraction(1, v.m) for v in g0.boundary
    }
    up = _pair_square_const(final, exc_up, bdy_coeffs, nu, touches)

    a0 = discrepancy_oracle(g0)
    exc_dn = {v.vid: -a0[v.vid] for v in g0.exceptional}
    down = _pair_square_const(g0, exc_dn, bdy_coeffs, 0, {})
    return up - down


def c2_change_cyclic_oracle(sc: ContractionScenario) -> Fraction:
    """Orbifold c2 change with the closed-form group orders; cyclic-only.

    Requires x0 and every point to be a chain (cyclic type), where
    r = n * m1 * m2 is known in closed form independently of the package's
    identity-based computation.
    """
    from kltledger.discrepancy import Basket, classify
    from kltledger.hj import CyclicType

    def order_of(graph: DualGraph) -> int:
        b = classify(graph)
        if not isinstance(b, Basket) or not isinstance(b.shape, CyclicType):
            raise ValueError("cyclic-only oracle")
        return cyclic_group_order(b.shape.n, b.shape.m1, b.shape.m2)

    if isinstance(sc.mode, Script):
        g = sc.x0_graph
        current = None
        for step in sc.mode.steps:
            g, current = blow_up_tracked(g, step)
        final, c_tilde = g, current
    else:
        final, c_tilde = sc.x0_graph, sc.mode.vertex
    comps = split_at_vertex(final, c_tilde, sc.m_f)
    orders = [order_of(h) for h in comps]
    orders += [sc.m_f * m for m in sc.crossings]
    orders += [sc.m_f] * sc.aux_smooth_points
    k = len(orders)
    total = Fraction(2 - k, sc.m_f) - Fraction(1, order_of(sc.x0_graph))
    for r in orders:
        total += Fraction(1, r)
    return total
