"""Run configuration and the cluster / evaluate / sweep pipelines.

A :class:`RunConfig` fully determines an output: every artifact embeds the
config (minus the output directory), and re-running that config writes the
same bytes.
"""

from __future__ import annotations

import csv
import io
import itertools
import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path
from typing import Optional

from . import serialize
from .dataset import DatasetError, drop_last_attributes, drop_last_instances, load_csv, split
from .distance import DEFAULT_TIE_EPS
from .engine import shachom
from .homogeneity import parse_alpha
from .id3 import METRICS, annotate_with_clusters, discretize, evaluate, fit_bin_edges, id3_train

log = logging.getLogger(__name__)

REPORT_SCHEMA = "shachom.report/1"
SWEEP_SCHEMA = "shachom.sweep/1"
GRID_AXES = ("k", "alpha", "drop_attributes", "drop_instances")
STRATIFY_MODES = ("auto", "yes", "no")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    input_path: str = ""
    k: int = 3
    alpha: str = "0.2"
    tie_eps: float = DEFAULT_TIE_EPS
    split_ratio: float = 0.66
    seed: int = 42
    n_bins: int = 10
    output_dir: str = "out"
    has_header: bool = True
    label_column: Optional[int] = None
    drop_attributes: int = 0
    drop_instances: int = 0
    stratify: str = "auto"

    def validate(self) -> "RunConfig":
        if not self.input_path:
            raise ConfigError("input path is required")
        if int(self.k) < 1:
            raise ConfigError(f"k must be >= 1, got {self.k}")
        _check_alpha_syntax(self.alpha)
        if not float(self.tie_eps) >= 0:
            raise ConfigError(f"tie_eps must be >= 0, got {self.tie_eps}")
        if not 0.0 < float(self.split_ratio) < 1.0:
            raise ConfigError(f"split ratio must lie in (0, 1), got {self.split_ratio}")
        if int(self.n_bins) < 2:
            raise ConfigError(f"bins must be >= 2, got {self.n_bins}")
        if int(self.drop_attributes) < 0 or int(self.drop_instances) < 0:
            raise ConfigError("drop counts must be >= 0")
        if self.stratify not in STRATIFY_MODES:
            raise ConfigError(f"stratify must be one of {STRATIFY_MODES}, got {self.stratify!r}")
        return self

    def provenance(self) -> dict:
        """Everything that determines the outputs (the output directory does not)."""
        d = asdict(self)
        del d["output_dir"]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        known = {f.name: f for f in fields(cls)}
        unknown = set(d) - set(known)
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        kw = {}
        for name, value in d.items():
            if value is None:
                kw[name] = None
                continue
            kind = known[name].type
            if name == "alpha":
                value = ",".join(map(str, value)) if isinstance(value, (list, tuple)) else str(value)
            elif "int" in kind:
                value = int(value)
            elif "float" in kind:
                value = float(value)
            elif "bool" in kind and isinstance(value, str):
                value = value.lower() in ("1", "true", "yes")
            kw[name] = value
        return cls(**kw)


def _check_alpha_syntax(alpha):
    parts = [p.strip() for p in str(alpha).split(",") if p.strip()]
    if not parts:
        raise ConfigError("alpha is empty")
    for p in parts:
        try:
            a = float(p)
        except ValueError:
            raise ConfigError(f"alpha value {p!r} is not a number") from None
        if not 0.0 < a < 1.0:
            raise ConfigError(f"alpha value {a} is outside the open interval (0, 1)")


def load_config_file(path) -> dict:
    """Read a JSON config; a saved report or dendrogram's ``config`` block works too."""
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    if isinstance(doc, dict) and "config" in doc and "schema" in doc:
        doc = doc["config"]
    if not isinstance(doc, dict):
        raise ConfigError(f"{path}: config must be a JSON object")
    return doc


def prepare_dataset(cfg: RunConfig):
    ds = load_csv(cfg.input_path, has_header=cfg.has_header, label_column=cfg.label_column)
    if cfg.drop_attributes:
        ds = drop_last_attributes(ds, cfg.drop_attributes)
    if cfg.drop_instances:
        ds = drop_last_instances(ds, cfg.drop_instances)
    if cfg.k > ds.n_instances:
        raise ConfigError(f"k = {cfg.k} exceeds the {ds.n_instances} instances")
    w = parse_alpha(cfg.alpha, ds.n_attributes)
    return ds, w


def run_cluster(cfg: RunConfig):
    cfg.validate()
    ds, w = prepare_dataset(cfg)
    dg, part = shachom(ds, cfg.k, w, tie_eps=cfg.tie_eps)
    return ds, w, dg, part


def evaluate_partition(ds, part, cfg: RunConfig, w=None):
    """Annotate, split, bin, train ID3 and score; returns (EvalReport, split)."""
    annotated = annotate_with_clusters(ds, part)
    if cfg.stratify == "auto":
        sizes = {}
        for y in annotated.labels:
            sizes[y] = sizes.get(y, 0) + 1
        stratify = min(sizes.values()) >= 2
    else:
        stratify = cfg.stratify == "yes"
    sp = split(annotated, cfg.split_ratio, cfg.seed, stratify=stratify)
    edges = fit_bin_edges(sp.train.features, cfg.n_bins)
    train = discretize(sp.train, edges=edges)
    test = discretize(sp.test, edges=edges)
    tree = id3_train(train)
    report = evaluate(tree, test, classes=range(part.k))
    report.k = part.k
    report.alpha = None if w is None else w.alphas
    report.split_seed = cfg.seed
    report.provenance = {
        "n_bins": cfg.n_bins,
        "split_ratio": cfg.split_ratio,
        "stratified": sp.stratified,
        "n_train": len(sp.train),
        "n_test": len(sp.test),
        "tree_depth": tree.depth(),
    }
    return report, sp


def report_document(report, cfg: RunConfig) -> dict:
    doc = {"schema": REPORT_SCHEMA}
    doc.update(report.to_dict())
    doc["table"] = [table_row(report)]
    doc["config"] = cfg.provenance()
    return doc


def table_row(report) -> dict:
    w = report.weighted
    return {"K": report.k, "Rate TP": w["tp_rate"], "Rate FP": w["fp_rate"],
            "Precision": w["precision"], "Recall": w["recall"]}


def write_cluster_outputs(out, cfg, ds, dg, part):
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    conf = cfg.provenance()
    serialize.write_dendrogram(dg, out / "dendrogram.json", config=conf)
    serialize.write_partition(part, out / "partition.csv", config=conf)
    (out / "dendrogram.nwk").write_text(serialize.to_newick(dg), encoding="utf-8")


def run_eval(cfg: RunConfig, out=None, write=True):
    """Cluster, evaluate and (optionally) write all artifacts under ``out``."""
    ds, w, dg, part = run_cluster(cfg)
    report, _ = evaluate_partition(ds, part, cfg, w)
    if write:
        out = Path(out or cfg.output_dir)
        write_cluster_outputs(out, cfg, ds, dg, part)
        (out / "report.json").write_text(serialize.dumps(report_document(report, cfg)), encoding="utf-8")
    return dg, part, report


def expand_grid(grid: Optional[dict]):
    """Cartesian product of the grid axes, as override dicts in sorted key order."""
    grid = {k: v for k, v in (grid or {}).items() if v is not None}
    unknown = set(grid) - set(GRID_AXES)
    if unknown:
        raise ConfigError(f"unknown grid axes: {sorted(unknown)}")
    axes = [a for a in GRID_AXES if a in grid]
    values = []
    for a in axes:
        vals = grid[a] if isinstance(grid[a], (list, tuple)) else [grid[a]]
        if not vals:
            raise ConfigError(f"grid axis {a!r} is empty")
        if a == "alpha":
            vals = [",".join(map(str, v)) if isinstance(v, (list, tuple)) else str(v) for v in vals]
            vals = sorted(set(vals), key=lambda s: [float(p) for p in s.split(",")])
        else:
            vals = sorted(set(int(v) for v in vals))
        values.append(vals)
    return [dict(zip(axes, combo)) for combo in itertools.product(*values)]


def cell_name(overrides: dict) -> str:
    if not overrides:
        return "base"
    short = {"k": "k", "alpha": "alpha", "drop_attributes": "da", "drop_instances": "di"}
    return "_".join(f"{short[a]}={str(v).replace(',', '+')}" for a, v in overrides.items())


def _run_cell(args):
    cfg, overrides, out = args
    cell_cfg = replace(cfg, **overrides)
    row = {"cell": cell_name(overrides), **{a: getattr(cell_cfg, a) for a in GRID_AXES}}
    try:
        cell_cfg.validate()
        dg, part, report = run_eval(cell_cfg, out=out)
    except Exception as exc:  # recorded per cell; the sweep carries on
        row.update(status="error", error=f"{type(exc).__name__}: {exc}")
        row.update({m: None for m in METRICS})
        return row
    row.update(status="ok", error="")
    row.update({m: report.weighted[m] for m in METRICS})
    return row


def run_sweep(cfg: RunConfig, grid: Optional[dict], out=None, jobs: int = 1):
    """One evaluation per grid cell; returns the table rows sorted by grid key.

    Each cell writes its artifacts to ``out/cells/<cell>/``; the aggregate
    goes to ``out/sweep.csv`` and ``out/sweep.json``.
    """
    out = Path(out or cfg.output_dir)
    cells = expand_grid(grid)
    tasks = [(cfg, ov, out / "cells" / cell_name(ov)) for ov in cells]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_run_cell, tasks))
    else:
        rows = [_run_cell(t) for t in tasks]
    # cells already come out in grid-key order; pool.map preserves it
    out.mkdir(parents=True, exist_ok=True)
    conf = cfg.provenance()
    header = ["cell", *GRID_AXES, "status", *METRICS, "error"]
    buf = io.StringIO()
    buf.write("# config=" + json.dumps(conf, sort_keys=True) + "\n")
    writer = csv.DictWriter(buf, fieldnames=header, lineterminator="\n")
    writer.writeheader()
    for r in rows:
        writer.writerow({h: ("" if r[h] is None else ("%.17g" % r[h] if isinstance(r[h], float) else r[h]))
                         for h in header})
    (out / "sweep.csv").write_text(buf.getvalue(), encoding="utf-8")
    doc = {"schema": SWEEP_SCHEMA, "grid": {k: list(v) if isinstance(v, (list, tuple)) else v
                                            for k, v in (grid or {}).items()},
           "rows": rows, "config": conf}
    (out / "sweep.json").write_text(serialize.dumps(doc), encoding="utf-8")
    return rows


__all__ = [
    "ConfigError",
    "DatasetError",
    "RunConfig",
    "evaluate_partition",
    "expand_grid",
    "load_config_file",
    "run_cluster",
    "run_eval",
    "run_sweep",
]
