"""Cluster-annotation evaluation with an ID3 decision tree.

Continuous attributes are cut into equal-width bins fitted on the training
rows, an ID3 tree is grown on the bin labels, and its test predictions are
scored per class (TP rate, FP rate, precision, recall) and as
support-weighted averages.
"""

from __future__ import annotations

import logging
import math
import warnings
from collections import Counter
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .dataset import Dataset

log = logging.getLogger(__name__)

GAIN_TIE_ATOL = 1e-12


def annotate_with_clusters(ds: Dataset, partition) -> Dataset:
    """Replace the dataset's labels with cluster labels."""
    labels = tuple(getattr(partition, "assignment", partition))
    if len(labels) != ds.n_instances:
        raise ValueError(f"partition covers {len(labels)} instances, dataset has {ds.n_instances}")
    if ds.labels is not None:
        log.info("discarding %d existing labels in favour of cluster labels", len(ds.labels))
    return ds.with_labels(labels)


@dataclass(frozen=True, eq=False)
class NominalDataset:
    features: np.ndarray  # int bin indices, (n_instances, n_attributes)
    classes: tuple
    bin_edges: tuple  # per attribute: strictly increasing interior cut points

    def __len__(self):
        return self.features.shape[0]

    @property
    def n_attributes(self) -> int:
        return self.features.shape[1]

    def take(self, rows) -> "NominalDataset":
        rows = np.asarray(rows, dtype=np.intp)
        return NominalDataset(self.features[rows], tuple(self.classes[i] for i in rows), self.bin_edges)


def fit_bin_edges(x, n_bins: int):
    """Equal-width interior cut points per column of ``x``.

    Constant columns get no cut points (one bin) and trigger a warning.
    """
    if n_bins < 2:
        raise ValueError("n_bins must be >= 2")
    x = np.asarray(x, dtype=np.float64)
    edges = []
    for t in range(x.shape[1]):
        lo, hi = float(x[:, t].min()), float(x[:, t].max())
        if hi <= lo:
            warnings.warn(f"attribute {t} is constant; using a single bin", stacklevel=2)
            edges.append(())
            continue
        width = (hi - lo) / n_bins
        cuts = tuple(lo + width * i for i in range(1, n_bins))
        # guard against rounding producing repeated cut points
        cuts = tuple(sorted(set(c for c in cuts if lo < c < hi)))
        edges.append(cuts)
    return tuple(edges)


def apply_bins(x, edges) -> np.ndarray:
    """Map values to bin indices; a value on a cut point goes to the upper bin.

    Values outside the fitted range clamp to the first or last bin.
    """
    x = np.asarray(x, dtype=np.float64)
    out = np.empty(x.shape, dtype=np.int64)
    for t, cuts in enumerate(edges):
        out[:, t] = np.searchsorted(np.asarray(cuts, dtype=np.float64), x[:, t], side="right")
    return out


def discretize(ds: Dataset, n_bins: int = 10, edges=None) -> NominalDataset:
    """Bin ``ds``; pass ``edges`` from the training set to bin test data."""
    if ds.labels is None:
        raise ValueError("discretize needs a labelled dataset")
    if edges is None:
        edges = fit_bin_edges(ds.features, n_bins)
    elif len(edges) != ds.n_attributes:
        raise ValueError("bin edges do not match the attribute count")
    return NominalDataset(apply_bins(ds.features, edges), tuple(ds.labels), tuple(edges))


def entropy(labels) -> float:
    n = len(labels)
    if n == 0:
        return 0.0
    h = 0.0
    for c in Counter(labels).values():
        p = c / n
        h -= p * math.log2(p)
    return h


def information_gain(data: NominalDataset, attribute: int) -> float:
    n = len(data)
    if n == 0:
        raise ValueError("empty data")
    groups = {}
    for v, y in zip(data.features[:, attribute].tolist(), data.classes):
        groups.setdefault(v, []).append(y)
    remainder = sum(len(g) / n * entropy(g) for g in groups.values())
    return max(0.0, entropy(data.classes) - remainder)


def majority(labels):
    """Most frequent label; ties go to the label seen first."""
    counts = Counter(labels)
    best = max(counts.values())
    for y in labels:
        if counts[y] == best:
            return y


@dataclass
class DecisionNode:
    majority: object
    split_attribute: Optional[int] = None
    children: dict = field(default_factory=dict)

    @property
    def is_leaf(self) -> bool:
        return self.split_attribute is None

    @property
    def leaf_class(self):
        return self.majority if self.is_leaf else None

    def depth(self) -> int:
        if self.is_leaf:
            return 0
        return 1 + max(c.depth() for c in self.children.values())


def id3_train(train: NominalDataset) -> DecisionNode:
    if len(train) == 0:
        raise ValueError("cannot train on an empty set")
    return _grow(train.features, list(train.classes), list(range(train.n_attributes)))


def _grow(x, y, attributes):
    node = DecisionNode(majority(y))
    if len(set(y)) == 1 or not attributes:
        return node
    data = NominalDataset(x, tuple(y), ())
    best, best_gain = None, -math.inf
    for a in attributes:
        g = information_gain(data, a)
        if g > best_gain + GAIN_TIE_ATOL:
            best, best_gain = a, g
    node.split_attribute = best
    rest = [a for a in attributes if a != best]
    col = x[:, best]
    for v in sorted(set(col.tolist())):
        rows = np.flatnonzero(col == v)
        node.children[v] = _grow(x[rows], [y[i] for i in rows], rest)
    return node


def id3_predict(tree: DecisionNode, instance):
    node = tree
    while not node.is_leaf:
        child = node.children.get(int(instance[node.split_attribute]))
        if child is None:
            return node.majority
        node = child
    return node.majority


def confusion_matrix(y_true, y_pred, classes=None):
    """Counts indexed ``[true, predicted]`` plus the class order used."""
    if classes is None:
        classes = sorted(set(y_true) | set(y_pred), key=_sort_key)
    index = {c: i for i, c in enumerate(classes)}
    m = np.zeros((len(classes), len(classes)), dtype=np.int64)
    for t, p in zip(y_true, y_pred):
        m[index[t], index[p]] += 1
    return m, list(classes)


def _sort_key(c):
    return (0, c, "") if isinstance(c, (int, np.integer)) else (1, 0, str(c))


def _ratio(num, den, flags, what):
    if den == 0:
        flags.append(what)
        return 0.0
    return num / den


METRICS = ("tp_rate", "fp_rate", "precision", "recall")


@dataclass
class EvalReport:
    per_class: dict
    weighted: dict
    confusion: list
    classes: list
    zero_division: list
    k: Optional[int] = None
    alpha: Optional[tuple] = None
    split_seed: Optional[int] = None
    provenance: dict = field(default_factory=dict)

    @property
    def test_size(self) -> int:
        return int(sum(sum(row) for row in self.confusion))

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "alpha": None if self.alpha is None else list(self.alpha),
            "split_seed": self.split_seed,
            "weighted": dict(self.weighted),
            "per_class": {str(c): dict(v) for c, v in self.per_class.items()},
            "classes": [str(c) for c in self.classes],
            "confusion": [list(map(int, row)) for row in self.confusion],
            "zero_division": list(self.zero_division),
            "provenance": dict(self.provenance),
        }


def scores_from_confusion(m, classes):
    """Per-class and support-weighted rates from a confusion matrix."""
    m = np.asarray(m, dtype=np.int64)
    total = int(m.sum())
    per_class, flags = {}, []
    for i, c in enumerate(classes):
        tp = int(m[i, i])
        fn = int(m[i].sum()) - tp
        fp = int(m[:, i].sum()) - tp
        tn = total - tp - fn - fp
        rec = _ratio(tp, tp + fn, flags, f"{c}:recall")
        per_class[c] = {
            "tp_rate": rec,
            "fp_rate": _ratio(fp, fp + tn, flags, f"{c}:fp_rate"),
            "precision": _ratio(tp, tp + fp, flags, f"{c}:precision"),
            "recall": rec,
            "support": tp + fn,
        }
    support = sum(v["support"] for v in per_class.values())
    weighted = {}
    for name in METRICS:
        acc = 0.0
        for v in per_class.values():
            acc += v[name] * v["support"]
        weighted[name] = acc / support if support else 0.0
    return per_class, weighted, flags


def evaluate(tree: DecisionNode, test: NominalDataset, classes=None) -> EvalReport:
    """Score ``tree`` on ``test``.

    ``classes`` fixes the class set and order (e.g. all cluster labels);
    by default it is the union of true and predicted test classes. Classes
    with zero support keep their rows but carry no weight.
    """
    if len(test) == 0:
        raise ValueError("empty test set")
    y_pred = [id3_predict(tree, row) for row in test.features]
    if classes is not None:
        classes = list(classes)
        extra = (set(test.classes) | set(y_pred)) - set(classes)
        classes += sorted(extra, key=_sort_key)
    m, classes = confusion_matrix(test.classes, y_pred, classes)
    per_class, weighted, flags = scores_from_confusion(m, classes)
    return EvalReport(per_class, weighted, m.tolist(), classes, flags)
