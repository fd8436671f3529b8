"""
Removing attributes and instances
=================================

Sweep over trailing attribute and instance removal at K = 10, and export
one dendrogram as Newick for an external tree viewer.
"""

import tempfile
from pathlib import Path

from shachom import broadcast_alpha, drop_last_attributes, load_csv, shachom
from shachom.experiment import RunConfig, run_sweep
from shachom.serialize import to_newick

WINE = Path(__file__).resolve().parents[1] / "data" / "wine.csv"

with tempfile.TemporaryDirectory() as out:
    rows = run_sweep(
        RunConfig(input_path=str(WINE), label_column=-1, k=10, alpha="0.2"),
        {"drop_attributes": [0, 4, 8], "drop_instances": [0, 20, 40]},
        out=out,
    )
    for r in rows:
        print(f"{r['cell']:>10}  precision={r['precision']:.3f}  recall={r['recall']:.3f}")
    print(sorted(p.name for p in Path(out).iterdir()))

###############################################################################
# Merge histories differ once attributes are removed.

wine = load_csv(WINE, has_header=True, label_column=-1)
for m in (4, 8):
    ds = drop_last_attributes(wine, m)
    dg, part = shachom(ds, 10, broadcast_alpha(0.2, ds.n_attributes))
    print(f"{ds.n_attributes} attributes: last merge {dg.records[-1].left}+{dg.records[-1].right} "
          f"at height {dg.records[-1].distance:.3f}")

newick = to_newick(dg)
print(newick.splitlines()[0][:80], "...")
