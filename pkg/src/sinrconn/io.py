"""JSON files for instances and schedules, and per-slot CSV statistics.

Floats are written by ``json`` in their shortest round-trip form, so a
load after a save reproduces every coordinate and power bit for bit.
"""
from __future__ import annotations

import csv
import json
from pathlib import Path

import jsonschema
import numpy as np

from .aggregation import AggregationSchedule
from .bidirectional import Pair, bidi_feasible
from .errors import PreconditionError, SchemaError
from .geometry import Link, make_link
from .instances import Instance
from .scheduler import Schedule, Slot
from .sinr import SinrParams, is_feasible

__all__ = [
    "FORMAT_VERSION",
    "instance_to_dict",
    "instance_from_dict",
    "schedule_to_dict",
    "schedule_from_dict",
    "aggregation_to_dict",
    "aggregation_from_dict",
    "save_instance",
    "load_instance",
    "save_schedule",
    "load_schedule",
    "save_aggregation",
    "load_aggregation",
    "write_json",
    "read_json",
    "slot_stats",
    "write_slot_stats",
]

FORMAT_VERSION = 1

_NUM = {"type": "number"}
_ID = {"type": "integer", "minimum": 0}

INSTANCE_SCHEMA = {
    "type": "object",
    "required": ["version", "params", "points"],
    "properties": {
        "version": {"const": FORMAT_VERSION},
        "params": {
            "type": "object",
            "required": ["alpha", "beta", "noise"],
            "properties": {"alpha": _NUM, "beta": _NUM, "noise": _NUM},
            "additionalProperties": False,
        },
        "points": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id", "x", "y"],
                "properties": {"id": _ID, "x": _NUM, "y": _NUM},
                "additionalProperties": False,
            },
        },
        "metadata": {"type": "object"},
    },
}

_SLOT_SCHEMA = {
    "type": "object",
    "required": ["links", "powers"],
    "properties": {
        "links": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["s", "r"],
                "properties": {"s": _ID, "r": _ID},
                "additionalProperties": False,
            },
        },
        "powers": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["s", "r", "p"],
                "properties": {"s": _ID, "r": _ID, "p": {"type": "number", "exclusiveMinimum": 0}},
                "additionalProperties": False,
            },
        },
    },
    "additionalProperties": False,
}

SCHEDULE_SCHEMA = {
    "type": "object",
    "required": ["version", "slots"],
    "properties": {
        "version": {"const": FORMAT_VERSION},
        "kind": {"enum": ["links", "pairs", "aggregation"]},
        "source": {"type": "string"},
        "sink": {"type": ["integer", "null"]},
        "n": _ID,
        "slots": {"type": "array", "items": _SLOT_SCHEMA},
    },
}


def _validate(doc, schema) -> None:
    try:
        jsonschema.validate(doc, schema)
    except jsonschema.ValidationError as exc:
        path = "/".join(str(p) for p in exc.absolute_path)
        raise SchemaError(f"{path or '<root>'}: {exc.message}") from None


def write_json(doc: dict, path) -> None:
    Path(path).write_text(json.dumps(doc, indent=1) + "\n")


def read_json(path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: not valid JSON ({exc})") from None


def instance_to_dict(inst: Instance) -> dict:
    return {
        "version": FORMAT_VERSION,
        "params": {"alpha": inst.params.alpha, "beta": inst.params.beta, "noise": inst.params.noise},
        "points": [{"id": i, "x": float(x), "y": float(y)} for i, (x, y) in enumerate(inst.points)],
        "metadata": inst.metadata,
    }


def instance_from_dict(doc: dict) -> Instance:
    _validate(doc, INSTANCE_SCHEMA)
    ids = [p["id"] for p in doc["points"]]
    if ids != list(range(len(ids))):
        raise SchemaError("point ids must be 0..n-1 in order")
    pts = np.array([[p["x"], p["y"]] for p in doc["points"]], dtype=np.float64).reshape(-1, 2)
    try:
        params = SinrParams(**doc["params"])
    except PreconditionError as exc:
        raise SchemaError(f"params: {exc}") from None
    return Instance(pts, params, dict(doc.get("metadata", {})))


def _slot_to_dict(slot: Slot) -> dict:
    units = []
    for unit in slot.links:
        if isinstance(unit, Pair):
            units.append({"s": unit.n1, "r": unit.n2})
        else:
            units.append({"s": unit.sender, "r": unit.receiver})
    powers = [{"s": l.sender, "r": l.receiver, "p": float(p)} for l, p in slot.powers.items()]
    return {"links": units, "powers": powers}


def _slot_from_dict(doc: dict, points: np.ndarray, kind: str) -> Slot:
    n = len(points)

    def check(i):
        if i >= n:
            raise SchemaError(f"point id {i} out of range for {n} points")
        return i

    units = []
    for item in doc["links"]:
        s, r = check(item["s"]), check(item["r"])
        if s == r:
            raise SchemaError(f"link {s}->{r} has equal endpoints")
        units.append(Pair.from_points(points, s, r) if kind == "pairs" else make_link(points, s, r))
    powers = {}
    for item in doc["powers"]:
        s, r = check(item["s"]), check(item["r"])
        if s == r:
            raise SchemaError(f"power entry {s}->{r} has equal endpoints")
        powers[make_link(points, s, r)] = float(item["p"])
    return Slot(units, powers)


def schedule_to_dict(schedule: Schedule) -> dict:
    kind = "pairs" if any(isinstance(u, Pair) for u in schedule.links()) else "links"
    return {
        "version": FORMAT_VERSION,
        "kind": kind,
        "source": schedule.source,
        "slots": [_slot_to_dict(s) for s in schedule.slots],
    }


def schedule_from_dict(doc: dict, points) -> Schedule:
    _validate(doc, SCHEDULE_SCHEMA)
    kind = doc.get("kind", "links")
    if kind == "aggregation":
        kind = "links"
    pts = np.asarray(points, dtype=np.float64)
    return Schedule([_slot_from_dict(s, pts, kind) for s in doc["slots"]], doc.get("source", ""))


def aggregation_to_dict(schedule: AggregationSchedule) -> dict:
    return {
        "version": FORMAT_VERSION,
        "kind": "aggregation",
        "source": "mlas",
        "sink": schedule.sink,
        "n": schedule.n,
        "slots": [_slot_to_dict(s) for s in schedule.slots],
    }


def aggregation_from_dict(doc: dict, points) -> AggregationSchedule:
    _validate(doc, SCHEDULE_SCHEMA)
    if doc.get("kind") != "aggregation" or "n" not in doc:
        raise SchemaError("not an aggregation schedule")
    pts = np.asarray(points, dtype=np.float64)
    if doc["n"] != len(pts):
        raise SchemaError(f"schedule is for {doc['n']} points, instance has {len(pts)}")
    slots = [_slot_from_dict(s, pts, "links") for s in doc["slots"]]
    sizes = [doc["n"]]
    for slot in slots:
        sizes.append(sizes[-1] - len(slot.links))
    return AggregationSchedule(slots, doc.get("sink"), doc["n"], sizes)


def save_instance(inst: Instance, path) -> None:
    write_json(instance_to_dict(inst), path)


def load_instance(path) -> Instance:
    return instance_from_dict(read_json(path))


def save_schedule(schedule: Schedule, path) -> None:
    write_json(schedule_to_dict(schedule), path)


def load_schedule(path, points) -> Schedule:
    return schedule_from_dict(read_json(path), points)


def save_aggregation(schedule: AggregationSchedule, path) -> None:
    write_json(aggregation_to_dict(schedule), path)


def load_aggregation(path, points) -> AggregationSchedule:
    return aggregation_from_dict(read_json(path), points)


def slot_stats(schedule: Schedule, params: SinrParams) -> list[tuple[int, int, float]]:
    """``(slot index, link count, min SINR / beta)`` per slot."""
    rows = []
    for i, slot in enumerate(schedule.slots):
        if slot.links and isinstance(slot.links[0], Pair):
            report = bidi_feasible(slot.links, slot.powers, params)
            count = 2 * len(slot.links)
        else:
            report = is_feasible(slot.links, slot.powers, params)
            count = len(slot.links)
        rows.append((i, count, report.min_margin(params.beta)))
    return rows


def write_slot_stats(schedule: Schedule, params: SinrParams, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["slot", "links", "min_sinr_margin"])
        for i, count, margin in slot_stats(schedule, params):
            w.writerow([i, count, repr(margin)])
