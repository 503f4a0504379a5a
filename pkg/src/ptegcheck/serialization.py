"""JSON documents for nets, matrices, trajectories and analysis reports.

Scalars are written as JSON integers when integral, as decimal strings when
the value has a terminating decimal expansion (``"0.5"``), as ``"p/q"``
otherwise, and as ``"inf"`` / ``"-inf"`` for the infinities.  Reading accepts
all of those plus plain JSON numbers, which are parsed through ``Decimal`` so
``0.1`` stays exactly one tenth.  Node and transition indices in reports are
1-based.
"""

from __future__ import annotations

import json
from decimal import Decimal
from fractions import Fraction
from typing import Any, Optional, Sequence

import jsonschema

from .maxplus import NEG_INF, POS_INF, Circuit, MaxPlusError, MaxPlusMatrix, ext
from .periodic import PeriodicVerdict, StaticGraph
from .pteg import (
    PTEG,
    CharacteristicMatrices,
    ConsistencyReport,
    Interval,
    NetError,
    Place,
    Trajectory,
    Violation,
)
from .ultimate import UltimatelyPeriodicSpec, UltimateVerdict


class DocumentError(ValueError):
    """A JSON document does not match the expected schema."""


_SCALAR = {"anyOf": [{"type": "number"}, {"type": "string"}]}
_ENTRIES = {"type": "array", "minItems": 1, "items": {"type": "array", "items": _SCALAR}}

MATRIX_SCHEMA = {
    "type": "object",
    "required": ["n", "entries"],
    "properties": {"n": {"type": "integer", "minimum": 1}, "entries": _ENTRIES},
}

LCR_SCHEMA = {
    "type": "object",
    "required": ["L", "C", "R"],
    "properties": {k: MATRIX_SCHEMA for k in ("L", "C", "R")},
}

ULTIMATE_SCHEMA = {
    "type": "object",
    "required": ["neg", "transient"],
    "properties": {"neg": LCR_SCHEMA, "transient": MATRIX_SCHEMA, "pos": LCR_SCHEMA},
}

NET_SCHEMA = {
    "type": "object",
    "required": ["transitions"],
    "properties": {
        "transitions": {"type": "array", "minItems": 1, "items": {"type": "string"}},
        "places": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["from", "to", "lb"],
                "properties": {
                    "from": {"type": "string"},
                    "to": {"type": "string"},
                    "tokens": {"type": "integer", "minimum": 0},
                    "lb": _SCALAR,
                    "ub": _SCALAR,
                    "name": {"type": "string"},
                },
                "additionalProperties": False,
            },
        },
        "characteristic": {
            "type": "object",
            "required": ["A0", "A1", "B0", "B1"],
            "properties": {k: MATRIX_SCHEMA for k in ("A0", "A1", "B0", "B1")},
        },
    },
    "not": {"required": ["places", "characteristic"]},
}

TRAJECTORY_SCHEMA = {
    "type": "object",
    "required": ["x"],
    "properties": {"t0": _SCALAR, "x": _ENTRIES},
}

_NULLABLE_OBJECT = {"type": ["object", "null"]}

REPORT_SCHEMA = {
    "type": "object",
    "required": ["command", "verdict", "certificate", "witness", "timings"],
    "properties": {
        "command": {"type": "string"},
        "verdict": {"type": "string"},
        "semantics": {"type": "string"},
        "certificate": _NULLABLE_OBJECT,
        "witness": {"anyOf": [{"type": "null"}, TRAJECTORY_SCHEMA]},
        "timings": {"type": "object", "additionalProperties": {"type": "number"}},
    },
}


def _validate(doc, schema, what: str) -> None:
    try:
        jsonschema.validate(doc, schema)
    except jsonschema.ValidationError as exc:
        path = "/".join(str(p) for p in exc.absolute_path)
        raise DocumentError(f"invalid {what} document at '{path}': {exc.message}") from None


def loads(text: str):
    try:
        return json.loads(text, parse_float=Decimal)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"malformed JSON: {exc}") from None


def dumps(doc) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


# scalars

def scalar_to_json(v):
    if v == POS_INF:
        return "inf"
    if v == NEG_INF:
        return "-inf"
    if isinstance(v, int):
        return v
    q = Fraction(v)
    if q.denominator == 1:
        return q.numerator
    d, twos, fives = q.denominator, 0, 0
    while d % 2 == 0:
        d, twos = d // 2, twos + 1
    while d % 5 == 0:
        d, fives = d // 5, fives + 1
    if d != 1:
        return f"{q.numerator}/{q.denominator}"
    digits = max(twos, fives)
    scaled = abs(q.numerator) * 10 ** digits // q.denominator
    sign = "-" if q < 0 else ""
    whole, frac = divmod(scaled, 10 ** digits)
    return f"{sign}{whole}.{frac:0{digits}d}"


def scalar_from_json(v):
    try:
        return ext(v)
    except MaxPlusError as exc:
        raise DocumentError(str(exc)) from None


# matrices

def matrix_to_json(M: MaxPlusMatrix) -> dict:
    return {"n": M.n, "entries": [[scalar_to_json(v) for v in row] for row in M.rows]}


def matrix_from_json(doc) -> MaxPlusMatrix:
    _validate(doc, MATRIX_SCHEMA, "matrix")
    n, entries = doc["n"], doc["entries"]
    if len(entries) != n or any(len(r) != n for r in entries):
        raise DocumentError(f"matrix entries do not form a {n}x{n} grid")
    return MaxPlusMatrix(tuple(tuple(scalar_from_json(v) for v in r) for r in entries))


def lcr_to_json(g: StaticGraph) -> dict:
    return {"L": matrix_to_json(g.L), "C": matrix_to_json(g.C), "R": matrix_to_json(g.R)}


def lcr_from_json(doc) -> StaticGraph:
    _validate(doc, LCR_SCHEMA, "L/C/R")
    try:
        return StaticGraph(*(matrix_from_json(doc[k]) for k in ("L", "C", "R")))
    except MaxPlusError as exc:
        raise DocumentError(str(exc)) from None


def ultimate_to_json(spec: UltimatelyPeriodicSpec) -> dict:
    return {"neg": lcr_to_json(spec.neg), "transient": matrix_to_json(spec.transient),
            "pos": lcr_to_json(spec.pos)}


def ultimate_from_json(doc, pos: Optional[StaticGraph] = None) -> UltimatelyPeriodicSpec:
    """Read an ultimately periodic graph; ``pos`` fills in a missing positive part."""
    _validate(doc, ULTIMATE_SCHEMA, "ultimately periodic")
    if "pos" in doc:
        pos = lcr_from_json(doc["pos"])
    if pos is None:
        raise DocumentError("ultimately periodic document lacks a positive part")
    try:
        return UltimatelyPeriodicSpec(lcr_from_json(doc["neg"]),
                                      matrix_from_json(doc["transient"]), pos)
    except MaxPlusError as exc:
        raise DocumentError(str(exc)) from None


# nets

def net_to_json(net) -> dict:
    if isinstance(net, CharacteristicMatrices):
        n = net.A0.n
        return {"transitions": [f"t{i + 1}" for i in range(n)],
                "characteristic": {k: matrix_to_json(getattr(net, k))
                                   for k in ("A0", "A1", "B0", "B1")}}
    places = []
    for p in net.places:
        d = {"from": net.transitions[p.source], "to": net.transitions[p.target],
             "tokens": p.tokens, "lb": scalar_to_json(p.interval.lower),
             "ub": scalar_to_json(p.interval.upper)}
        if p.name is not None:
            d["name"] = p.name
        places.append(d)
    return {"transitions": list(net.transitions), "places": places}


def net_from_json(doc):
    """Build a :class:`PTEG`, or :class:`CharacteristicMatrices` for the matrix form."""
    _validate(doc, NET_SCHEMA, "net")
    labels = doc["transitions"]
    if "characteristic" in doc:
        cm = CharacteristicMatrices(*(matrix_from_json(doc["characteristic"][k])
                                      for k in ("A0", "A1", "B0", "B1")))
        if cm.A0.n != len(labels) or any(getattr(cm, k).n != cm.A0.n for k in ("A1", "B0", "B1")):
            raise DocumentError("characteristic matrices must match the transition count")
        return cm
    index = {t: i for i, t in enumerate(labels)}
    if len(index) != len(labels):
        raise DocumentError("duplicate transition labels")
    places = []
    for k, p in enumerate(doc.get("places", [])):
        for end in ("from", "to"):
            if p[end] not in index:
                raise DocumentError(f"place {k + 1}: unknown transition {p[end]!r}")
        ub = scalar_from_json(p.get("ub", "inf"))
        lb = scalar_from_json(p["lb"])
        try:
            interval = Interval(lb, ub)
        except NetError as exc:
            raise DocumentError(f"place {k + 1}: {exc}") from None
        places.append(Place(index[p["from"]], index[p["to"]], p.get("tokens", 0),
                            interval, p.get("name")))
    return PTEG(tuple(labels), tuple(places))


# trajectories

def trajectory_to_json(traj: Trajectory) -> dict:
    doc = {}
    if traj.t0 is not None:
        doc["t0"] = scalar_to_json(traj.t0)
    doc["x"] = [[scalar_to_json(v) for v in row] for row in traj.x]
    return doc


def trajectory_from_json(doc) -> Trajectory:
    """Read a trajectory, or the witness embedded in a report document."""
    if isinstance(doc, dict) and "x" not in doc and isinstance(doc.get("witness"), dict):
        doc = doc["witness"]
    _validate(doc, TRAJECTORY_SCHEMA, "trajectory")
    t0 = scalar_from_json(doc["t0"]) if "t0" in doc else None
    x = [[scalar_from_json(v) for v in row] for row in doc["x"]]
    if any(v in (POS_INF, NEG_INF) for row in x for v in row) or t0 in (POS_INF, NEG_INF):
        raise DocumentError("firing times must be finite")
    return Trajectory(x, t0)


# certificates

def circuit_to_json(c: Optional[Circuit], labels: Optional[Sequence[str]] = None):
    if c is None:
        return None
    doc = {"nodes": [i + 1 for i in c.nodes], "weight": scalar_to_json(c.weight)}
    if labels is not None:
        doc["transitions"] = [labels[i] for i in c.nodes]
    return doc


def _opt_matrix(M):
    return None if M is None else matrix_to_json(M)


def periodic_verdict_to_json(v: Optional[PeriodicVerdict], labels=None):
    if v is None:
        return None
    doc: dict[str, Any] = {"kind": v.kind.value, "evaluations": v.evaluations}
    if v.kind.value == "no_inf_path":
        doc["pi_limit"] = matrix_to_json(v.pi_limit)
    elif v.kind.value == "positive_circuit":
        doc["shift_bound"] = v.shift_bound
        doc["circuit"] = circuit_to_json(v.circuit, labels)
        doc["failing_matrix"] = _opt_matrix(v.failing_matrix)
    else:
        doc["diverging_entries"] = [[i + 1, j + 1] for i, j in v.diverging_entries]
        if v.pi_pair:
            doc["pi_last"] = matrix_to_json(v.pi_pair[0])
            doc["pi_next"] = matrix_to_json(v.pi_pair[1])
    return doc


def ultimate_verdict_to_json(v: UltimateVerdict, labels=None) -> dict:
    return {
        "kind": v.kind.value,
        "neg": periodic_verdict_to_json(v.neg, labels),
        "pos": periodic_verdict_to_json(v.pos, labels),
        "combined": _opt_matrix(v.combined),
        "circuit": circuit_to_json(v.circuit, labels),
        "fixpoint_h": v.fixpoint_h,
    }


def verdict_to_json(v, labels=None) -> dict:
    if isinstance(v, UltimateVerdict):
        return ultimate_verdict_to_json(v, labels)
    return periodic_verdict_to_json(v, labels)


def violation_to_json(v: Violation) -> dict:
    return {"constraint": v.constraint, "transition": v.transition + 1, "k": v.k,
            "place": None if v.place is None else v.place + 1,
            "slack": scalar_to_json(v.slack)}


def report(command: str, verdict: str, certificate, witness: Optional[Trajectory] = None,
           semantics: Optional[str] = None, timings: Optional[dict] = None) -> dict:
    doc: dict[str, Any] = {"command": command, "verdict": verdict}
    if semantics is not None:
        doc["semantics"] = semantics
    doc["certificate"] = certificate
    doc["witness"] = None if witness is None else trajectory_to_json(witness)
    doc["timings"] = timings or {}
    _validate(doc, REPORT_SCHEMA, "report")
    return doc


def consistency_report_to_json(rep: ConsistencyReport, labels=None, witness=None,
                               timings=None) -> dict:
    return report("check", "consistent" if rep.consistent else "inconsistent",
                  verdict_to_json(rep.certificate, labels), witness,
                  rep.semantics.value, timings)
