"""Divisor files (JSON) and reduction traces (JSON lines).

Divisor file layout, components and edges 1-indexed::

    {
      "ambient": {"kind": "rational", "n": 1},
      "components": [{"name": "C1", "class": [3, -1]}],
      "edges": [],
      "areas": ["3/1", "1/2"],
      "markings": [{"center": {"component": 1}, "origin": [0, 1],
                    "origin_ambient": {"kind": "rational", "n": 1}}]
    }

``areas`` and ``markings`` are optional.  Rationals are written as
"p/q" strings.  Bases are implicit in the ambient kind: (H, E1..En) for
``rational``; (f, s, E1..En) otherwise.
"""
from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, Iterable

from .blowdown import BlowdownStep
from .divisor import DivisorConfig, IntersectionPoint, Marking, SmoothPoint
from .lattice import AmbientLattice, ClassVector, Kind, LatticeError
from .reduction import MinimalModelLabel, ReductionTrace


class ParseError(ValueError):
    def __init__(self, where: str, message: str):
        super().__init__(f"{where}: {message}")
        self.where = where


def _fraction(x: Any, where: str) -> Fraction:
    if isinstance(x, bool) or not isinstance(x, (int, str)):
        raise ParseError(where, f"expected an integer or a 'p/q' string, got {x!r}")
    try:
        return Fraction(x)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(where, f"bad rational {x!r}") from exc


def format_fraction(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def _int_list(x: Any, where: str, length: int | None = None) -> tuple[int, ...]:
    if not isinstance(x, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in x):
        raise ParseError(where, f"expected a list of integers, got {x!r}")
    if length is not None and len(x) != length:
        raise ParseError(where, f"expected {length} integers, got {len(x)}")
    return tuple(x)


def ambient_from_json(obj: Any, where: str = "ambient") -> AmbientLattice:
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ParseError(where, "expected an object with a 'kind' field")
    try:
        kind = Kind(obj["kind"])
    except ValueError as exc:
        kinds = ", ".join(k.value for k in Kind)
        raise ParseError(f"{where}.kind", f"unknown kind {obj['kind']!r} (one of {kinds})") from exc
    n = obj.get("n", 0)
    twist = obj.get("twist", 0)
    if isinstance(twist, str):
        twist = {"trivial": 0, "nontrivial": 1}.get(twist, twist)
    try:
        return AmbientLattice(kind, n, twist)
    except (LatticeError, TypeError) as exc:
        raise ParseError(where, str(exc)) from exc


def ambient_to_json(L: AmbientLattice) -> dict:
    out: dict = {"kind": L.kind.value, "n": L.n}
    if L.kind is Kind.ELLIPTIC_RULED:
        out["twist"] = L.twist
    return out


def divisor_from_json(obj: Any) -> DivisorConfig:
    if not isinstance(obj, dict):
        raise ParseError("<root>", "expected a JSON object")
    L = ambient_from_json(obj.get("ambient"))
    comps = obj.get("components")
    if not isinstance(comps, list) or not comps:
        raise ParseError("components", "expected a non-empty list")
    names, classes = [], []
    for i, c in enumerate(comps):
        where = f"components[{i + 1}]"
        if not isinstance(c, dict) or "class" not in c:
            raise ParseError(where, "expected an object with a 'class' field")
        classes.append(ClassVector(_int_list(c["class"], f"{where}.class", L.rank), L))
        names.append(str(c.get("name", f"C{i + 1}")))
    k = len(classes)
    edges = []
    for e_i, e in enumerate(obj.get("edges", [])):
        where = f"edges[{e_i + 1}]"
        a, b = _int_list(e, where, 2)
        if not (1 <= a <= k and 1 <= b <= k):
            raise ParseError(where, f"component index out of range 1..{k}")
        edges.append((a - 1, b - 1))
    areas = None
    if obj.get("areas") is not None:
        raw = obj["areas"]
        if not isinstance(raw, list) or len(raw) != L.rank:
            raise ParseError("areas", f"expected {L.rank} values")
        areas = tuple(_fraction(a, f"areas[{i + 1}]") for i, a in enumerate(raw))
    marks = []
    for m_i, m in enumerate(obj.get("markings", [])):
        where = f"markings[{m_i + 1}]"
        if not isinstance(m, dict) or "center" not in m or "origin" not in m:
            raise ParseError(where, "expected an object with 'center' and 'origin'")
        c = m["center"]
        if isinstance(c, dict) and "component" in c:
            center = SmoothPoint(int(c["component"]) - 1)
        elif isinstance(c, dict) and "edge" in c:
            center = IntersectionPoint(int(c["edge"]) - 1)
        else:
            raise ParseError(f"{where}.center", "expected {'component': i} or {'edge': e}")
        OL = ambient_from_json(m.get("origin_ambient", ambient_to_json(L)), f"{where}.origin_ambient")
        origin = ClassVector(_int_list(m["origin"], f"{where}.origin", OL.rank), OL)
        marks.append(Marking(center, origin))
    return DivisorConfig(L, tuple(classes), tuple(edges), tuple(names), tuple(marks), areas)


def divisor_to_json(D: DivisorConfig) -> dict:
    out: dict = {
        "ambient": ambient_to_json(D.lattice),
        "components": [{"name": n, "class": list(c.coeffs)} for n, c in zip(D.names, D.classes)],
        "edges": [[a + 1, b + 1] for a, b in D.edges],
    }
    if D.areas is not None:
        out["areas"] = [format_fraction(a) for a in D.areas]
    if D.markings:
        out["markings"] = [marking_to_json(m) for m in D.markings]
    return out


def marking_to_json(m: Marking) -> dict:
    c = m.center
    center = {"component": c.component + 1} if isinstance(c, SmoothPoint) else {"edge": c.edge + 1}
    return {
        "center": center,
        "origin": list(m.origin.coeffs),
        "origin_ambient": ambient_to_json(m.origin.lattice),
    }


def _compact(x) -> str:
    return json.dumps(x, separators=(", ", ": "))


def dumps_divisor(D: DivisorConfig) -> str:
    """Canonical text: fixed key order, one component per line."""
    obj = divisor_to_json(D)
    lines = ["{", f'  "ambient": {_compact(obj["ambient"])},', '  "components": [']
    comps = obj["components"]
    for i, c in enumerate(comps):
        lines.append("    " + _compact(c) + ("," if i < len(comps) - 1 else ""))
    lines.append("  ],")
    tail = [f'  "edges": {_compact(obj["edges"])}']
    if "areas" in obj:
        tail.append(f'  "areas": {_compact(obj["areas"])}')
    if "markings" in obj:
        ms = obj["markings"]
        block = ['  "markings": [']
        for i, m in enumerate(ms):
            block.append("    " + _compact(m) + ("," if i < len(ms) - 1 else ""))
        block.append("  ]")
        tail.append("\n".join(block))
    lines.append(",\n".join(tail))
    lines.append("}")
    return "\n".join(lines) + "\n"


def loads_divisor(text: str) -> DivisorConfig:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno}, column {exc.colno}", exc.msg) from exc
    return divisor_from_json(obj)


def read_divisor(path: str) -> DivisorConfig:
    with open(path, encoding="utf-8") as fh:
        return loads_divisor(fh.read())


def write_divisor(path: str, D: DivisorConfig) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_divisor(D))


# -- traces --------------------------------------------------------------------


def step_to_json(i: int, st: BlowdownStep) -> dict:
    return {
        "step": i + 1,
        "kind": st.kind,
        "component": st.component + 1,
        "contracted": list(st.contracted.coeffs),
        "source": ambient_to_json(st.source),
        "frame": ambient_to_json(st.frame),
        "basis_change": [list(r) for r in st.images],
        "marking": marking_to_json(st.created_marking),
    }


def trace_records(trace: ReductionTrace) -> list[dict]:
    recs = [step_to_json(i, st) for i, st in enumerate(trace.steps)]
    lab = trace.label
    recs.append({
        "label": lab.case if lab else None,
        "parameter": lab.parameter if lab else None,
        "twist": lab.twist if lab else None,
        "exhaustive": trace.exhaustive,
        "final": divisor_to_json(trace.final),
    })
    return recs


def dumps_trace(trace: ReductionTrace) -> str:
    return "".join(json.dumps(r, separators=(",", ":")) + "\n" for r in trace_records(trace))


def load_trace(lines: Iterable[str]) -> tuple[list[dict], dict]:
    recs = []
    for no, line in enumerate(lines, 1):
        if not line.strip():
            continue
        try:
            recs.append(json.loads(line))
        except json.JSONDecodeError as exc:
            raise ParseError(f"trace line {no}", exc.msg) from exc
    if not recs or "label" not in recs[-1]:
        raise ParseError("trace", "missing terminal label record")
    return recs[:-1], recs[-1]


def replay_trace(start: DivisorConfig, steps: list[dict]) -> DivisorConfig:
    """Re-run the recorded contractions on ``start``."""
    from .blowdown import blow_down
    from .exceptional import ExceptionalFinding, certificate
    from .reduction import normalize_ambient

    cur = normalize_ambient(start)
    for rec in steps:
        src = ambient_from_json(rec["source"], f"step {rec['step']}.source")
        if src != cur.lattice:
            raise ParseError(f"step {rec['step']}", f"trace expects {src}, replay is at {cur.lattice}")
        e = ClassVector(tuple(rec["contracted"]), src)
        f = ExceptionalFinding(e, rec["kind"], rec["component"] - 1, certificate(cur, e))
        cur, _ = blow_down(cur, f)
    return cur


def label_from_record(rec: dict) -> MinimalModelLabel:
    return MinimalModelLabel(rec["label"], rec.get("parameter"), rec.get("twist"))
