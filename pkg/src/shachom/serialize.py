"""On-disk formats: dendrogram JSON, partition CSV, Newick.

JSON floats are written with 17 significant digits so every value reads
back bit-for-bit. Documents carry a ``schema`` tag; readers reject unknown
tags.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

from .engine import Dendrogram, MergeRecord, Partition

DENDROGRAM_SCHEMA = "shachom.dendrogram/1"


def _encode(obj, indent, level):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None or isinstance(obj, (bool, str)):
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        if not math.isfinite(obj):
            raise ValueError(f"cannot serialise non-finite float {obj}")
        text = "%.17g" % obj
        if not any(ch in text for ch in ".en"):
            text += ".0"
        return text
    if hasattr(obj, "item") and not isinstance(obj, (list, tuple, dict)):
        return _encode(obj.item(), indent, level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_encode(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple)) for v in obj):
            return "[" + ", ".join(_encode(v, indent, level + 1) for v in obj) + "]"
        items = [pad + _encode(v, indent, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(obj, indent: int = 2) -> str:
    """JSON text with 17-significant-digit floats and stable key order."""
    return _encode(obj, indent, 0) + "\n"


def record_to_dict(r: MergeRecord) -> dict:
    return {
        "step": r.step,
        "left": r.left,
        "right": r.right,
        "new_id": r.new_id,
        "distance": float(r.distance),
        "occ": r.occ,
        "resolved_by": r.resolved_by,
        "hc_value": None if r.hc_value is None else float(r.hc_value),
        "candidates": [list(p) for p in r.candidates],
        "candidate_hcs": [float(h) for h in r.candidate_hcs],
    }


def dendrogram_to_dict(dg: Dendrogram, config=None) -> dict:
    doc = {
        "schema": DENDROGRAM_SCHEMA,
        "n_leaves": dg.n_leaves,
        "final_k": dg.final_k,
        "records": [record_to_dict(r) for r in dg.records],
    }
    if config is not None:
        doc["config"] = config
    return doc


def dendrogram_from_dict(doc: dict) -> Dendrogram:
    if doc.get("schema") != DENDROGRAM_SCHEMA:
        raise ValueError(f"unsupported dendrogram schema {doc.get('schema')!r}")
    records = []
    for r in doc["records"]:
        records.append(MergeRecord(
            step=int(r["step"]),
            left=int(r["left"]),
            right=int(r["right"]),
            new_id=int(r["new_id"]),
            distance=float(r["distance"]),
            occ=int(r["occ"]),
            resolved_by=r["resolved_by"],
            hc_value=None if r["hc_value"] is None else float(r["hc_value"]),
            candidates=tuple(tuple(int(v) for v in p) for p in r.get("candidates", ())),
            candidate_hcs=tuple(float(h) for h in r.get("candidate_hcs", ())),
        ))
    return Dendrogram(int(doc["n_leaves"]), tuple(records), int(doc["final_k"]))


def write_dendrogram(dg: Dendrogram, path, config=None) -> None:
    Path(path).write_text(dumps(dendrogram_to_dict(dg, config)), encoding="utf-8")


def read_dendrogram(path) -> Dendrogram:
    return dendrogram_from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def write_partition(p: Partition, path, config=None) -> None:
    """CSV of ``instance,cluster``; ``config`` goes in a leading ``#`` line."""
    lines = [] if config is None else ["# config=" + json.dumps(config, sort_keys=True)]
    lines += ["instance,cluster"] + [f"{i},{c}" for i, c in enumerate(p.assignment)]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_partition(path) -> Partition:
    rows = [ln.strip() for ln in Path(path).read_text(encoding="utf-8").splitlines()]
    rows = [ln for ln in rows if ln and not ln.startswith("#")]
    if not rows or rows[0] != "instance,cluster":
        raise ValueError(f"{path}: missing partition header")
    pairs = sorted(tuple(int(v) for v in row.split(",")) for row in rows[1:])
    if [i for i, _ in pairs] != list(range(len(pairs))):
        raise ValueError(f"{path}: instance indices must be 0..n-1")
    return Partition(tuple(c for _, c in pairs))


def to_newick(dg: Dendrogram, leaf_names=None) -> str:
    """Newick text with branch lengths from merge heights.

    Leaves sit at height 0. When ``final_k > 1`` the result holds one tree
    per remaining cluster, one per line, in order of smallest member.
    """
    if leaf_names is None:
        leaf_names = [str(i) for i in range(dg.n_leaves)]
    leaf_names = [_newick_label(s) for s in leaf_names]
    text = {i: leaf_names[i] for i in range(dg.n_leaves)}
    height = {i: 0.0 for i in range(dg.n_leaves)}
    first = {i: i for i in range(dg.n_leaves)}
    for r in dg.records:
        h = r.distance
        kids = [f"{text.pop(c)}:{'%.17g' % (h - height[c])}" for c in (r.left, r.right)]
        text[r.new_id] = "(" + ",".join(kids) + ")"
        height[r.new_id] = h
        first[r.new_id] = min(first[r.left], first[r.right])
    roots = sorted(text, key=lambda c: first[c])
    return "\n".join(text[c] + ";" for c in roots) + "\n"


def _newick_label(s):
    s = str(s)
    if any(ch in s for ch in " ()[]':;,"):
        return "'" + s.replace("'", "''") + "'"
    return s
