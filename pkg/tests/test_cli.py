import csv
import json
import subprocess
import sys

import pytest

from shachom.cli import main
from shachom.serialize import read_dendrogram, read_partition

from conftest import WINE_CSV

WINE = ["--input", str(WINE_CSV), "--label-column", "-1"]


def partition_rows(path):
    return [ln for ln in path.read_text().splitlines() if not ln.startswith("#")][1:]


def test_cluster_three_points(tmp_path, three_points_csv):
    out = tmp_path / "o"
    code = main(["cluster", "--input", str(three_points_csv), "--no-header", "--k", "2",
                 "--alpha", "0.2,0.4", "--out", str(out)])
    assert code == 0
    assert partition_rows(out / "partition.csv") == ["0,0", "1,0", "2,1"]
    (r,) = read_dendrogram(out / "dendrogram.json").records
    assert (r.occ, r.resolved_by) == (2, "id-order")
    assert (out / "dendrogram.nwk").exists()


def test_cluster_k_equals_n(tmp_path, three_points_csv):
    out = tmp_path / "o"
    assert main(["cluster", "--input", str(three_points_csv), "--no-header", "--k", "3", "--out", str(out)]) == 0
    assert read_partition(out / "partition.csv").assignment == (0, 1, 2)


@pytest.mark.parametrize("argv, code", [
    (["--alpha", "1.5"], 1),
    (["--alpha", "0.2,0.4,0.5"], 1),
    (["--k", "0"], 1),
    (["--k", "4"], 1),
    (["--split-ratio", "1.2"], 1),
])
def test_validation_errors(tmp_path, three_points_csv, capsys, argv, code):
    rc = main(["cluster", "--input", str(three_points_csv), "--no-header", "--out", str(tmp_path), *argv])
    err = capsys.readouterr().err.strip().splitlines()
    assert rc == code
    assert len(err) == 1 and err[0].startswith("shachom: error[validation]:")
    assert not (tmp_path / "dendrogram.json").exists()


def test_io_error(tmp_path, capsys):
    rc = main(["cluster", "--input", str(tmp_path / "missing.csv"), "--out", str(tmp_path)])
    assert rc == 2
    assert capsys.readouterr().err.startswith("shachom: error[io]:")


def test_eval_is_deterministic_and_records_config(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["eval", *WINE, "--k", "3", "--alpha", "0.2", "--out", str(a)]) == 0
    assert main(["eval", *WINE, "--k", "3", "--alpha", "0.2", "--out", str(b)]) == 0
    for name in ("report.json", "dendrogram.json", "partition.csv", "dendrogram.nwk"):
        assert (a / name).read_bytes() == (b / name).read_bytes()
    doc = json.loads((a / "report.json").read_text())
    assert doc["config"]["k"] == 3 and doc["config"]["n_bins"] == 10
    assert doc["config"]["split_ratio"] == 0.66 and doc["split_seed"] == 42
    assert set(doc["table"][0]) == {"K", "Rate TP", "Rate FP", "Precision", "Recall"}
    assert all(0.0 <= v <= 1.0 for v in doc["weighted"].values())


def test_rerun_from_embedded_config(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["eval", *WINE, "--k", "5", "--alpha", "0.35", "--bins", "6", "--seed", "3", "--out", str(a)]) == 0
    for source in ("report.json", "dendrogram.json"):
        assert main(["eval", "--config", str(a / source), "--out", str(b)]) == 0
        for name in ("report.json", "dendrogram.json", "partition.csv"):
            assert (a / name).read_bytes() == (b / name).read_bytes()


def test_flags_override_config_file(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"input_path": str(WINE_CSV), "label_column": -1, "k": 7, "alpha": 0.05}))
    out = tmp_path / "o"
    assert main(["cluster", "--config", str(cfg), "--k", "4", "--out", str(out)]) == 0
    doc = json.loads((out / "dendrogram.json").read_text())
    assert doc["final_k"] == 4 and doc["config"]["alpha"] == "0.05"


def test_sweep_one_cell_matches_eval(tmp_path):
    single, sweep = tmp_path / "single", tmp_path / "sweep"
    assert main(["eval", *WINE, "--k", "10", "--out", str(single)]) == 0
    assert main(["sweep", *WINE, "--grid", "k=10", "--out", str(sweep)]) == 0
    cell = sweep / "cells" / "k=10"
    for name in ("report.json", "dendrogram.json", "partition.csv"):
        assert (cell / name).read_bytes() == (single / name).read_bytes()


def test_empty_grid_is_single_eval(tmp_path):
    single, sweep = tmp_path / "single", tmp_path / "sweep"
    assert main(["eval", *WINE, "--out", str(single)]) == 0
    assert main(["sweep", *WINE, "--out", str(sweep)]) == 0
    assert (sweep / "cells" / "base" / "report.json").read_bytes() == (single / "report.json").read_bytes()


def test_sweep_records_failing_cells(tmp_path):
    out = tmp_path / "o"
    rc = main(["sweep", *WINE, "--grid", "k=3,500", "--out", str(out)])
    assert rc == 0
    rows = list(csv.DictReader(ln for ln in (out / "sweep.csv").read_text().splitlines()
                               if not ln.startswith("#")))
    assert [(r["k"], r["status"]) for r in rows] == [("3", "ok"), ("500", "error")]
    assert main(["sweep", *WINE, "--grid", "k=400,500", "--out", str(out)]) == 1


def test_sweep_attribute_and_instance_cells(tmp_path):
    out = tmp_path / "o"
    assert main(["sweep", *WINE, "--k", "10", "--grid", "drop_attributes=4,8",
                 "--grid", "drop-instances=20,40", "--jobs", "2", "--out", str(out)]) == 0
    doc = json.loads((out / "sweep.json").read_text())
    assert [(r["drop_attributes"], r["drop_instances"]) for r in doc["rows"]] == [
        (4, 20), (4, 40), (8, 20), (8, 40)]
    d = read_dendrogram(out / "cells" / "da=8_di=40" / "dendrogram.json")
    assert d.n_leaves == 138


def test_bad_grid(tmp_path, capsys):
    assert main(["sweep", *WINE, "--grid", "colour=red", "--out", str(tmp_path)]) == 1


def test_module_entry_point(tmp_path, three_points_csv):
    proc = subprocess.run([sys.executable, "-m", "shachom", "cluster", "--input", str(three_points_csv),
                           "--no-header", "--k", "2", "--out", str(tmp_path)],
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
