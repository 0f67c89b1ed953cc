"""File formats: graph/scenario/state documents, catalogs, exact rationals.

Interchange is UTF-8 JSON.  Rationals are serialized as "p/q" strings in
lowest terms with q > 0 (plain integers are accepted on input); boundary
indices use the string "inf" for coefficient one.  Unknown fields are
rejected so typos fail loudly.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .discrepancy import Basket, basket_key
from .errors import GraphError, ScenarioError
from .graphs import INF, DualGraph, EdgeBlowUp, Vertex, VertexBlowUp
from .ledger import ContractionScenario, PickVertex, Script, SurfaceState

__all__ = [
    "format_fraction",
    "parse_fraction",
    "parse_graph",
    "graph_document",
    "parse_scenario",
    "parse_state",
    "state_document",
    "write_catalog",
    "CatalogIndex",
]


def format_fraction(x) -> str:
    f = Fraction(x)
    return f"{f.numerator}/{f.denominator}"


def parse_fraction(text) -> Fraction:
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, str):
        try:
            return Fraction(text.strip())
        except (ValueError, ZeroDivisionError) as err:
            raise ValueError(f"not an exact rational: {text!r} ({err})") from err
    raise ValueError(f"not an exact rational: {text!r}")


def _parse_m(value, where: str):
    if value == "inf":
        return INF
    if isinstance(value, int) and value >= 1:
        return value
    raise GraphError(f"{where}: boundary index must be an integer >= 1 or \"inf\"")


def parse_graph(doc) -> DualGraph:
    """Parse {"vertices": [...], "edges": [...]} into a validated graph."""
    if isinstance(doc, str):
        doc = json.loads(doc)
    if not isinstance(doc, dict):
        raise GraphError("graph document must be a JSON object")
    unknown = set(doc) - {"vertices", "edges"}
    if unknown:
        raise GraphError(f"unknown graph fields: {sorted(unknown)}")
    vertices = []
    for i, v in enumerate(doc.get("vertices", [])):
        if not isinstance(v, dict) or "id" not in v:
            raise GraphError(f"vertices[{i}]: need an object with an \"id\"")
        extra = set(v) - {"id", "exc", "bdy"}
        if extra:
            raise GraphError(f"vertices[{i}]: unknown fields {sorted(extra)}")
        vid = v["id"]
        if not isinstance(vid, str) or not vid:
            raise GraphError(f"vertices[{i}]: id must be a nonempty string")
        if ("exc" in v) == ("bdy" in v):
            raise GraphError(f"vertices[{i}]: set exactly one of \"exc\" / \"bdy\"")
        if "exc" in v:
            w = v["exc"]
            if not isinstance(w, int) or w < 1:
                raise GraphError(f"vertices[{i}]: weight must be an integer >= 1")
            vertices.append(Vertex(vid, weight=w))
        else:
            vertices.append(Vertex(vid, m=_parse_m(v["bdy"], f"vertices[{i}]")))
    edges = []
    for i, e in enumerate(doc.get("edges", [])):
        if not (isinstance(e, list) and len(e) == 2):
            raise GraphError(f"edges[{i}]: need a pair of vertex ids")
        edges.append((e[0], e[1]))
    return DualGraph(tuple(vertices), tuple(edges))


def graph_document(g: DualGraph) -> dict:
    vertices = []
    for v in g.vertices:
        if v.is_exceptional:
            vertices.append({"id": v.vid, "exc": v.weight})
        else:
            vertices.append({"id": v.vid, "bdy": "inf" if v.m == INF else v.m})
    return {"vertices": vertices, "edges": [list(e) for e in g.edges]}


def _parse_step(doc, where: str):
    if not isinstance(doc, dict):
        raise ScenarioError(f"{where}: step must be an object")
    keys = set(doc)
    if keys == {"vertex"}:
        target = doc["vertex"]
        if target is not None and not isinstance(target, str):
            raise ScenarioError(f"{where}: vertex target must be an id or null")
        return VertexBlowUp(target)
    if keys == {"free"}:
        if doc["free"] is not True:
            raise ScenarioError(f"{where}: \"free\" must be true")
        return VertexBlowUp(None)
    if keys == {"edge"}:
        e = doc["edge"]
        if not (isinstance(e, list) and len(e) == 2):
            raise ScenarioError(f"{where}: edge must be a pair of ids")
        return EdgeBlowUp((e[0], e[1]))
    raise ScenarioError(f"{where}: step must be one of vertex/edge/free")


def parse_scenario(doc, base_dir: Path | None = None) -> ContractionScenario:
    """Parse a scenario document; "x0" is an inline graph or a file path."""
    if isinstance(doc, str):
        doc = json.loads(doc)
    if not isinstance(doc, dict):
        raise ScenarioError("scenario document must be a JSON object")
    unknown = set(doc) - {"x0", "mode", "m_f", "crossings", "aux_smooth_points"}
    if unknown:
        raise ScenarioError(f"unknown scenario fields: {sorted(unknown)}")
    x0_doc = doc.get("x0")
    if isinstance(x0_doc, str):
        path = Path(x0_doc)
        if base_dir is not None and not path.is_absolute():
            path = base_dir / path
        x0 = parse_graph(json.loads(path.read_text()))
    else:
        x0 = parse_graph(x0_doc)
    mode_doc = doc.get("mode")
    if not isinstance(mode_doc, dict) or len(mode_doc) != 1:
        raise ScenarioError("scenario \"mode\" must be {\"script\": [...]} or {\"pick\": id}")
    if "script" in mode_doc:
        steps = tuple(
            _parse_step(s, f"mode.script[{i}]") for i, s in enumerate(mode_doc["script"])
        )
        mode = Script(steps)
    elif "pick" in mode_doc:
        mode = PickVertex(mode_doc["pick"])
    else:
        raise ScenarioError("scenario \"mode\" must contain \"script\" or \"pick\"")
    m_f = doc.get("m_f")
    crossings = doc.get("crossings", [])
    aux = doc.get("aux_smooth_points", 0)
    if not isinstance(crossings, list):
        raise ScenarioError("\"crossings\" must be a list of integers")
    return ContractionScenario(
        x0_graph=x0,
        mode=mode,
        m_f=m_f,
        crossings=tuple(crossings),
        aux_smooth_points=aux,
    )


def parse_state(doc) -> SurfaceState:
    if isinstance(doc, str):
        doc = json.loads(doc)
    unknown = set(doc) - {"c1_sq", "c2", "singular_points"}
    if unknown:
        raise ValueError(f"unknown state fields: {sorted(unknown)}")
    from .discrepancy import classify, NotKlt

    baskets = []
    for i, gdoc in enumerate(doc.get("singular_points", [])):
        b = classify(parse_graph(gdoc))
        if isinstance(b, NotKlt):
            raise ValueError(f"singular_points[{i}] is not klt: {b.reason}")
        baskets.append(b)
    return SurfaceState(
        c1_sq=parse_fraction(doc["c1_sq"]),
        c2=parse_fraction(doc["c2"]),
        singular_points=tuple(baskets),
    )


def state_document(s: SurfaceState) -> dict:
    return {
        "c1_sq": format_fraction(s.c1_sq),
        "c2": format_fraction(s.c2),
        "singular_points": [graph_document(b.graph) for b in s.singular_points],
    }


def basket_document(b: Basket) -> dict:
    """Catalog record: canonical graph plus the exact invariants."""
    from .discrepancy import CyclicType

    doc = {
        "graph": graph_document(b.graph),
        "delta": format_fraction(b.delta),
        "r": format_fraction(b.r),
        "e_sq": b.e_sq,
        "klt_threshold": format_fraction(b.threshold),
        "discrepancies": {vid: format_fraction(a) for vid, a in b.discrepancies},
    }
    shape = b.shape
    if isinstance(shape, CyclicType):
        doc["type"] = {
            "kind": "cyclic",
            "n": shape.n,
            "q": shape.q,
            "m1": shape.m1,
            "m2": shape.m2,
        }
    else:
        doc["type"] = {
            "kind": "platonic",
            "b": shape.b,
            "branches": [
                {"n": br.n, "q": br.q, "m": br.m} for br in shape.branches
            ],
        }
    return doc


@dataclass(frozen=True)
class CatalogIndex:
    directory: Path
    entries: tuple[tuple[str, str], ...]  # (canonical key, filename)


def _dump(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _write_if_changed(path: Path, text: str) -> bool:
    if path.exists() and path.read_text() == text:
        return False
    path.write_text(text)
    return True


def write_catalog(baskets, directory) -> CatalogIndex:
    """One file per basket plus an index; idempotent and byte-stable."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    entries = []
    index = {}
    for b in sorted(baskets, key=basket_key):
        key = basket_key(b)
        filename = f"{key}.json"
        _write_if_changed(directory / filename, _dump(basket_document(b)))
        entries.append((key, filename))
        index[key] = {
            "file": filename,
            "delta": format_fraction(b.delta),
            "r": format_fraction(b.r),
            "klt_threshold": format_fraction(b.threshold),
            "type": basket_document(b)["type"],
        }
    _write_if_changed(directory / "index.json", _dump({"baskets": index}))
    return CatalogIndex(directory=directory, entries=tuple(entries))


def default_output_dir() -> Path:
    return Path(os.environ.get("KLTLEDGER_OUT", "."))
