"""Command-line interface.

Subcommands: classify, chern, blowup, enumerate, scan, bounds, simulate.
Exact-rational flags use p/q syntax (e.g. --eps 1/3).  Exit codes: 0 ok,
1 usage or parse error, 2 verification failure found, 3 internal invariant
breach.  `--json` switches reports to machine-readable JSON on stdout.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .discrepancy import Basket, NotKlt, basket_key, classify, discrepancies, klt_threshold
from .errors import GraphError, InternalInvariantError, LedgerError, NotKltError, ScenarioError
from .graphs import blow_up
from .io import (
    basket_document,
    default_output_dir,
    format_fraction,
    graph_document,
    parse_fraction,
    parse_graph,
    parse_scenario,
    parse_state,
    state_document,
    write_catalog,
)
from .ledger import Script, apply_contraction, chern_value, resolve_scenario
from .mmp import (
    EnumerationBudget,
    compute_bounds,
    enumerate_baskets,
    enumerate_scenarios,
    scan_min_ch,
    verify_chain_bound,
    verify_mu_monotone,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERIFICATION = 2
EXIT_INTERNAL = 3


def _fraction_arg(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as err:
        raise argparse.ArgumentTypeError(f"not an exact rational: {text!r}") from err


def _load_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except OSError as err:
        raise ScenarioError(f"cannot read {path}: {err}") from err
    except json.JSONDecodeError as err:
        raise ScenarioError(f"{path}: invalid JSON at line {err.lineno}: {err.msg}") from err


def _emit(doc: dict, as_json: bool, lines) -> None:
    if as_json:
        print(json.dumps(doc, sort_keys=True, indent=2))
    else:
        for line in lines:
            print(line)


def cmd_classify(args) -> int:
    g = parse_graph(_load_json(args.graph))
    result = classify(g)
    if isinstance(result, NotKlt):
        _emit(
            {"klt": False, "reason": result.reason},
            args.json,
            [f"not klt: {result.reason}"],
        )
        return EXIT_OK
    a = discrepancies(g)
    thr = klt_threshold(g)
    doc = basket_document(result)
    doc["klt"] = True
    doc["key"] = basket_key(result)
    doc["input_discrepancies"] = {vid: format_fraction(x) for vid, x in sorted(a.items())}
    lines = [
        f"basket {basket_key(result)}",
        f"  type: {doc['type']}",
        f"  delta = {format_fraction(result.delta)}",
        f"  r = {format_fraction(result.r)}",
        f"  E^2 = {result.e_sq}",
        f"  klt threshold = {format_fraction(thr.value)}",
    ] + [f"  a({vid}) = {format_fraction(x)}" for vid, x in sorted(a.items())]
    _emit(doc, args.json, lines)
    return EXIT_OK


def cmd_chern(args) -> int:
    sc = parse_scenario(_load_json(args.scenario), base_dir=Path(args.scenario).parent)
    data = resolve_scenario(sc)
    doc = {
        "nu": data.nu,
        "c": data.c,
        "k": data.k,
        "mu": data.mu,
        "delta_f": format_fraction(data.delta_f),
        "M_f": format_fraction(data.m_term),
        "gamma_f": format_fraction(data.gamma_f),
        "Ch_f": format_fraction(data.ch),
        "c2_change": format_fraction(data.c2_change),
        "c1sq_change": format_fraction(data.c1sq_change),
        "x0": basket_key(data.x0),
        "points": [basket_key(p) for p in data.points],
    }
    lines = [
        f"x0 = {doc['x0']}   points = {doc['points']}",
        f"nu = {data.nu}   c = {data.c}   k = {data.k}",
        f"mu = {data.mu}",
        f"delta(f) = {format_fraction(data.delta_f)}",
        f"M(f) = {format_fraction(data.m_term)}",
        f"gamma(f) = {format_fraction(data.gamma_f)}",
        f"Ch(f) = {format_fraction(data.ch)}",
        f"c2 change = {format_fraction(data.c2_change)}",
        f"c1^2 change = {format_fraction(data.c1sq_change)}",
    ]
    _emit(doc, args.json, lines)
    return EXIT_OK


def cmd_blowup(args) -> int:
    g = parse_graph(_load_json(args.graph))
    sc_doc = _load_json(args.script)
    from .io import _parse_step

    steps = [_parse_step(s, f"script[{i}]") for i, s in enumerate(sc_doc)]
    for step in steps:
        g = blow_up(g, step)
    print(json.dumps(graph_document(g), sort_keys=True, indent=2))
    return EXIT_OK


def cmd_enumerate(args) -> int:
    budget = EnumerationBudget(
        epsilon=args.eps,
        L=args.l,
        max_vertices=args.max_vertices,
        max_weight_override=args.max_weight,
    )
    baskets = enumerate_baskets(budget, args.boundary_ms)
    at_cap = [b for b in baskets if len(b.graph.exceptional) == args.max_vertices]
    doc = {
        "count": len(baskets),
        "max_weight": budget.effective_max_weight,
        "at_vertex_budget": len(at_cap),
        "baskets": [basket_key(b) for b in baskets],
    }
    lines = [f"{len(baskets)} baskets within the budget"]
    if at_cap:
        lines.append(
            f"note: {len(at_cap)} basket(s) use all {args.max_vertices} vertices; "
            "the enumeration is complete only relative to this budget"
        )
    lines += [f"  {basket_key(b)}" for b in baskets]
    if args.out:
        index = write_catalog(baskets, args.out)
        doc["catalog"] = str(index.directory)
        lines.append(f"catalog written to {index.directory}")
    _emit(doc, args.json, lines)
    return EXIT_OK


def cmd_scan(args) -> int:
    budget = EnumerationBudget(
        epsilon=args.eps,
        L=args.l,
        max_vertices=args.max_vertices,
        max_weight_override=args.max_weight,
    )
    baskets = list(enumerate_baskets(budget, args.boundary_ms))
    if args.include_smooth:
        from .discrepancy import formal_smooth

        ms = sorted(set(args.boundary_ms) | {1})
        baskets += [
            formal_smooth(m1, m2) for m1 in ms for m2 in ms if m1 <= m2
        ]
    m_set = list(args.m_f)
    if args.eps_filter:
        m_set = [m for m in m_set if Fraction(1, m) > args.eps]
    scenarios = list(enumerate_scenarios(baskets, args.depth, m_set))
    report = scan_min_ch(scenarios, args.eps, args.r)
    mu_failures = []
    chain_failures = []
    if args.verify:
        bounds = compute_bounds(args.eps, args.r, args.l, report.min_ch or 1)
        for sc in scenarios:
            try:
                if isinstance(sc.mode, Script):
                    mu_rep = verify_mu_monotone(sc)
                    if not mu_rep.ok:
                        mu_failures.extend(mu_rep.failures)
                chain_rep = verify_chain_bound(sc, bounds.l)
                if not chain_rep.ok:
                    chain_failures.extend(chain_rep.failures)
            except NotKltError:
                continue
    doc = {
        "scenarios_checked": report.scenarios_checked,
        "skipped_non_klt": report.skipped_non_klt,
        "min_ch": None if report.min_ch is None else format_fraction(report.min_ch),
        "common_denominator": report.common_denominator,
        "mu_max": report.mu_max,
        "bound_B": format_fraction(report.bound_B),
        "step_bound": report.step_bound,
        "violations": [
            {"kind": v.kind, "scenario": v.scenario, "detail": v.detail}
            for v in report.violations
        ],
        "mu_monotone_failures": mu_failures,
        "chain_bound_failures": chain_failures,
    }
    if report.delta_range:
        doc["delta_range"] = [format_fraction(x) for x in report.delta_range]
    lines = [
        f"scenarios checked: {report.scenarios_checked} "
        f"(skipped non-klt: {report.skipped_non_klt})",
        f"min Ch(f) = s = "
        + ("n/a" if report.min_ch is None else format_fraction(report.min_ch)),
        f"Ch denominators lcm N = {report.common_denominator}",
        f"mu max = {report.mu_max}   B = {format_fraction(report.bound_B)}",
        f"step bound ceil(R/s) = {report.step_bound} (R = {format_fraction(args.r)})",
    ]
    if report.delta_range:
        lines.append(
            "delta range over corpus: "
            f"[{format_fraction(report.delta_range[0])}, {format_fraction(report.delta_range[1])}]"
        )
    for v in report.violations:
        lines.append(f"VIOLATION {v.kind}: {v.scenario} ({v.detail})")
    for f in mu_failures + chain_failures:
        lines.append(f"VIOLATION {f}")
    _emit(doc, args.json, lines)
    if report.violations or mu_failures or chain_failures:
        return EXIT_VERIFICATION
    return EXIT_OK


def cmd_bounds(args) -> int:
    rec = compute_bounds(args.eps, args.r, args.l0, args.s)
    doc = {
        "B": format_fraction(rec.b),
        "L": format_fraction(rec.l),
        "max_weight": rec.max_weight,
        "max_boundary_index": rec.max_boundary_index,
        "step_bound": rec.step_bound,
    }
    lines = [
        f"B = {format_fraction(rec.b)}",
        f"L = {format_fraction(rec.l)}",
        f"max exceptional weight = {rec.max_weight}",
        f"max boundary index = {rec.max_boundary_index}",
        f"step bound ceil(R/s) = {rec.step_bound}",
    ]
    _emit(doc, args.json, lines)
    return EXIT_OK


def cmd_simulate(args) -> int:
    state = parse_state(_load_json(args.state))
    sc = parse_scenario(_load_json(args.scenario), base_dir=Path(args.scenario).parent)
    before = chern_value(state)
    new_state = apply_contraction(state, sc)
    after = chern_value(new_state)
    doc = state_document(new_state)
    doc["chern_value"] = format_fraction(after)
    doc["chern_drop"] = format_fraction(before - after)
    lines = [
        f"Ch before = {format_fraction(before)}",
        f"Ch after = {format_fraction(after)} (drop {format_fraction(before - after)})",
        f"c1^2 = {format_fraction(new_state.c1_sq)}   c2 = {format_fraction(new_state.c2)}",
        f"baskets: {[basket_key(b) for b in new_state.singular_points]}",
    ]
    _emit(doc, args.json, lines)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kltledger",
        description="Exact invariants of klt surface dual graphs and their contraction ledgers.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="classify a dual graph into its basket")
    p.add_argument("graph", help="graph JSON file")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("chern", help="resolve a contraction scenario ledger")
    p.add_argument("scenario", help="scenario JSON file")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_chern)

    p = sub.add_parser("blowup", help="apply blow-up steps to a graph")
    p.add_argument("graph", help="graph JSON file")
    p.add_argument("script", help="JSON list of steps")
    p.set_defaults(func=cmd_blowup)

    p = sub.add_parser("enumerate", help="enumerate eps-klt baskets in a budget")
    p.add_argument("--eps", type=_fraction_arg, required=True)
    p.add_argument("--max-vertices", type=int, required=True)
    p.add_argument("--l", type=int, required=True, help="max all-(-2) chain length")
    p.add_argument("--max-weight", type=int, default=None)
    p.add_argument("--boundary-ms", type=int, nargs="*", default=[])
    p.add_argument("--out", default=None, help=f"catalog directory (default env KLTLEDGER_OUT={default_output_dir()})")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("scan", help="exhaustive scenario scan: min Ch, bounds, claims")
    p.add_argument("--eps", type=_fraction_arg, required=True)
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--max-vertices", type=int, required=True)
    p.add_argument("--r", type=_fraction_arg, required=True)
    p.add_argument("--l", type=int, default=4)
    p.add_argument("--max-weight", type=int, default=None)
    p.add_argument("--boundary-ms", type=int, nargs="*", default=[2])
    p.add_argument("--m-f", type=int, nargs="*", default=[1, 2], dest="m_f")
    p.add_argument("--include-smooth", action="store_true", default=True)
    p.add_argument("--no-include-smooth", dest="include_smooth", action="store_false")
    p.add_argument(
        "--eps-filter",
        action="store_true",
        default=True,
        help="restrict m_f to indices with 1/m > eps (MMP models stay eps-klt)",
    )
    p.add_argument("--no-eps-filter", dest="eps_filter", action="store_false")
    p.add_argument("--verify", action="store_true", default=True)
    p.add_argument("--no-verify", dest="verify", action="store_false")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("bounds", help="explicit constants B, L, weight caps, step bound")
    p.add_argument("--eps", type=_fraction_arg, required=True)
    p.add_argument("--r", type=_fraction_arg, required=True)
    p.add_argument("--l0", type=int, required=True)
    p.add_argument("--s", type=_fraction_arg, required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("simulate", help="apply a contraction to a surface state")
    p.add_argument("state", help="state JSON file")
    p.add_argument("scenario", help="scenario JSON file")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_simulate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return EXIT_USAGE if err.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except (GraphError, NotKltError, ScenarioError, ValueError, json.JSONDecodeError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except LedgerError as err:
        print(f"verification failure: {err}", file=sys.stderr)
        return EXIT_VERIFICATION
    except InternalInvariantError as err:
        print(f"internal invariant breach: {err}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
