"""Command-line entry point: ``shachom {cluster,eval,sweep}``.

Exit codes: 0 success, 1 invalid input or config, 2 I/O failure,
3 internal error. Failures print one ``shachom: error[<kind>]: <message>``
line on stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import serialize
from .dataset import DatasetError
from .experiment import (
    GRID_AXES,
    STRATIFY_MODES,
    ConfigError,
    RunConfig,
    load_config_file,
    report_document,
    run_cluster,
    run_eval,
    run_sweep,
    write_cluster_outputs,
)

EXIT_OK, EXIT_VALIDATION, EXIT_IO, EXIT_INTERNAL = 0, 1, 2, 3

# flag dest -> RunConfig field
_FIELD = {
    "input": "input_path",
    "k": "k",
    "alpha": "alpha",
    "tie_eps": "tie_eps",
    "split_ratio": "split_ratio",
    "seed": "seed",
    "bins": "n_bins",
    "out": "output_dir",
    "label_column": "label_column",
    "drop_attributes": "drop_attributes",
    "drop_instances": "drop_instances",
    "stratify": "stratify",
    "has_header": "has_header",
}


def _add_common(p):
    S = argparse.SUPPRESS
    p.add_argument("--config", help="JSON file with any of the options below (flags win)")
    p.add_argument("--input", default=S, help="CSV file with numeric features")
    p.add_argument("--k", type=int, default=S, help="final number of clusters (default 3)")
    p.add_argument("--alpha", default=S,
                   help="weight in (0,1): one value, or a comma list with one per attribute (default 0.2)")
    p.add_argument("--tie-eps", type=float, default=S, help="relative tolerance for distance ties (default 1e-9)")
    p.add_argument("--split-ratio", type=float, default=S, help="train fraction (default 0.66)")
    p.add_argument("--seed", type=int, default=S, help="split seed (default 42)")
    p.add_argument("--bins", type=int, default=S, help="equal-width bins per attribute for ID3 (default 10)")
    p.add_argument("--out", default=S, help="output directory (default ./out)")
    p.add_argument("--drop-attributes", type=int, default=S, help="remove this many trailing attributes")
    p.add_argument("--drop-instances", type=int, default=S, help="remove this many trailing rows")
    p.add_argument("--label-column", type=int, default=S,
                   help="0-based column holding class labels/ids; excluded from features")
    p.add_argument("--no-header", dest="has_header", action="store_false", default=S,
                   help="the CSV has no header row")
    p.add_argument("--stratify", choices=STRATIFY_MODES, default=S,
                   help="stratify the split by cluster; auto falls back when a cluster has one member")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="shachom",
        description="Single-linkage clustering with homogeneity tie-breaking, plus ID3 evaluation.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cluster", help="cluster a dataset; write dendrogram and partition")
    _add_common(p)
    p = sub.add_parser("eval", help="cluster, then score the clusters with an ID3 tree")
    _add_common(p)
    p = sub.add_parser("sweep", help="run eval over a grid of settings")
    _add_common(p)
    p.add_argument("--grid", action="append", default=[], metavar="AXIS=V1,V2,...",
                   help=f"grid axis, repeatable; axes: {', '.join(GRID_AXES)}. "
                        "alpha values are scalars here; per-attribute vectors go in a config file.")
    p.add_argument("--jobs", type=int, default=1, help="cells to run in parallel")
    return parser


def parse_grid(items):
    grid = {}
    for item in items:
        axis, sep, values = item.partition("=")
        axis = axis.strip().replace("-", "_")
        if not sep or axis not in GRID_AXES:
            raise ConfigError(f"bad grid spec {item!r}; expected one of {GRID_AXES} as AXIS=V1,V2")
        vals = [v.strip() for v in values.split(",") if v.strip()]
        if not vals:
            raise ConfigError(f"grid axis {axis!r} has no values")
        grid.setdefault(axis, []).extend(vals)
    return grid


def resolve_config(args):
    """Merge defaults, the config file, and explicit flags (in that order)."""
    values, grid = {}, {}
    if args.config:
        doc = dict(load_config_file(args.config))
        grid = doc.pop("grid", {}) or {}
        values.update(doc)
    for dest, name in _FIELD.items():
        if dest in vars(args):
            values[name] = getattr(args, dest)
    cfg = RunConfig.from_dict(values).validate()
    if getattr(args, "grid", None):
        grid = dict(grid)
        grid.update(parse_grid(args.grid))
    return cfg, grid


def _cmd_cluster(cfg, args):
    ds, w, dg, part = run_cluster(cfg)
    write_cluster_outputs(cfg.output_dir, cfg, ds, dg, part)
    print(f"{dg.n_leaves} instances -> {part.k} clusters; wrote {Path(cfg.output_dir) / 'dendrogram.json'}")
    return EXIT_OK


def _cmd_eval(cfg, args):
    dg, part, report = run_eval(cfg)
    w = report.weighted
    print(f"K={report.k} TP={w['tp_rate']:.3f} FP={w['fp_rate']:.3f} "
          f"precision={w['precision']:.3f} recall={w['recall']:.3f}")
    return EXIT_OK


def _cmd_sweep(cfg, args, grid):
    rows = run_sweep(cfg, grid, jobs=args.jobs)
    for r in rows:
        if r["status"] == "ok":
            print(f"{r['cell']}: precision={r['precision']:.3f} recall={r['recall']:.3f}")
        else:
            print(f"{r['cell']}: {r['error']}")
    if rows and all(r["status"] != "ok" for r in rows):
        print("shachom: error[validation]: every sweep cell failed", file=sys.stderr)
        return EXIT_VALIDATION
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg, grid = resolve_config(args)
        if args.command == "cluster":
            return _cmd_cluster(cfg, args)
        if args.command == "eval":
            return _cmd_eval(cfg, args)
        return _cmd_sweep(cfg, args, grid)
    except OSError as exc:
        _fail("io", exc)
        return EXIT_IO
    except (ValueError, KeyError, json.JSONDecodeError) as exc:
        _fail("validation", exc)
        return EXIT_VALIDATION
    except Exception as exc:  # noqa: BLE001
        _fail("internal", f"{type(exc).__name__}: {exc}")
        return EXIT_INTERNAL


def _fail(kind, exc):
    msg = " ".join(str(exc).split())
    print(f"shachom: error[{kind}]: {msg}", file=sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
