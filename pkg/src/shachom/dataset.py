"""Numeric datasets: CSV loading, column/row trimming and train/test splits."""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np


class DatasetError(ValueError):
    """Raised when input data violates the dataset contract."""


@dataclass(frozen=True, eq=False)
class Dataset:
    """Feature matrix with attribute names and optional per-row labels.

    ``features`` is stored as a read-only float64 array of shape
    ``(n_instances, n_attributes)``.
    """

    features: np.ndarray
    attribute_names: tuple
    labels: Optional[tuple] = None

    def __post_init__(self):
        x = np.array(self.features, dtype=np.float64, copy=True)
        if x.ndim != 2:
            raise DatasetError(f"features must be 2-D, got shape {x.shape}")
        if x.shape[0] < 1 or x.shape[1] < 1:
            raise DatasetError(f"dataset needs at least one row and one column, got {x.shape}")
        if not np.all(np.isfinite(x)):
            r, c = np.argwhere(~np.isfinite(x))[0]
            raise DatasetError(f"non-finite value at row {r + 1}, column {c + 1}")
        x.setflags(write=False)
        object.__setattr__(self, "features", x)

        names = tuple(str(n) for n in self.attribute_names)
        if len(names) != x.shape[1]:
            raise DatasetError(f"{len(names)} attribute names for {x.shape[1]} columns")
        object.__setattr__(self, "attribute_names", names)

        if self.labels is not None:
            labels = tuple(self.labels)
            if len(labels) != x.shape[0]:
                raise DatasetError(f"{len(labels)} labels for {x.shape[0]} rows")
            object.__setattr__(self, "labels", labels)

    @property
    def n_instances(self) -> int:
        return self.features.shape[0]

    @property
    def n_attributes(self) -> int:
        return self.features.shape[1]

    def __len__(self):
        return self.n_instances

    def __eq__(self, other):
        if not isinstance(other, Dataset):
            return NotImplemented
        return (
            self.attribute_names == other.attribute_names
            and self.labels == other.labels
            and self.features.shape == other.features.shape
            and bool(np.array_equal(self.features, other.features))
        )

    __hash__ = None

    def take(self, rows) -> "Dataset":
        """Return the dataset restricted to ``rows`` (in the given order)."""
        rows = np.asarray(rows, dtype=np.intp)
        labels = None if self.labels is None else tuple(self.labels[i] for i in rows)
        return Dataset(self.features[rows], self.attribute_names, labels)

    def with_labels(self, labels) -> "Dataset":
        return Dataset(self.features, self.attribute_names, labels)


def from_array(x, attribute_names=None, labels=None) -> Dataset:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim == 1:
        x = x.reshape(-1, 1)
    if attribute_names is None:
        attribute_names = [f"a{t + 1}" for t in range(x.shape[1])]
    return Dataset(x, attribute_names, labels)


def load_csv(path, has_header: bool = False, label_column: Optional[int] = None,
             drop_columns: Sequence[int] = ()) -> Dataset:
    """Read a comma-separated numeric table.

    ``label_column`` (0-based, negative values count from the end) is moved
    out of the features into ``labels`` as strings. ``drop_columns`` removes
    identifier columns. Row and column numbers in error messages are 1-based
    and count data rows only.
    """
    path = Path(path)
    with path.open("r", encoding="utf-8") as fh:
        lines = [ln.rstrip("\r\n") for ln in fh]
    lines = [ln for ln in lines if ln.strip()]

    header = None
    if has_header:
        if not lines:
            raise DatasetError(f"{path}: empty file")
        header = [h.strip() for h in lines[0].split(",")]
        lines = lines[1:]
    if not lines:
        raise DatasetError(f"{path}: no data rows")

    rows = [ln.split(",") for ln in lines]
    width = len(header) if header is not None else len(rows[0])
    for i, cells in enumerate(rows, start=1):
        if len(cells) != width:
            raise DatasetError(f"{path}: row {i} has {len(cells)} fields, expected {width}")

    def resolve(col):
        c = col + width if col < 0 else col
        if not 0 <= c < width:
            raise DatasetError(f"column index {col} out of range for {width} columns")
        return c

    label_col = None if label_column is None else resolve(label_column)
    skip = {resolve(c) for c in drop_columns}
    if label_col is not None:
        skip.add(label_col)
    feature_cols = [c for c in range(width) if c not in skip]
    if not feature_cols:
        raise DatasetError(f"{path}: no feature columns left")

    x = np.empty((len(rows), len(feature_cols)))
    for i, cells in enumerate(rows):
        for j, c in enumerate(feature_cols):
            try:
                x[i, j] = float(cells[c])
            except ValueError:
                raise DatasetError(
                    f"{path}: non-numeric value {cells[c].strip()!r} at row {i + 1}, column {c + 1}"
                ) from None
    labels = None
    if label_col is not None:
        labels = tuple(cells[label_col].strip() for cells in rows)
    if header is not None:
        names = [header[c] for c in feature_cols]
    else:
        names = [f"a{c + 1}" for c in feature_cols]
    return Dataset(x, names, labels)


def write_csv(ds: Dataset, path, header: bool = True, label_name: str = "class") -> None:
    """Write ``ds`` in the dialect ``load_csv`` reads; labels go last.

    Values use the shortest repr that round-trips to the same float.
    """
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        if header:
            cols = list(ds.attribute_names)
            if ds.labels is not None:
                cols.append(label_name)
            fh.write(",".join(cols) + "\n")
        for i, row in enumerate(ds.features):
            cells = [repr(float(v)) for v in row]
            if ds.labels is not None:
                cells.append(str(ds.labels[i]))
            fh.write(",".join(cells) + "\n")


def drop_last_attributes(ds: Dataset, m: int) -> Dataset:
    if not 0 <= m < ds.n_attributes:
        raise DatasetError(f"cannot drop {m} of {ds.n_attributes} attributes")
    keep = ds.n_attributes - m
    return Dataset(ds.features[:, :keep], ds.attribute_names[:keep], ds.labels)


def drop_last_instances(ds: Dataset, m: int) -> Dataset:
    if not 0 <= m < ds.n_instances:
        raise DatasetError(f"cannot drop {m} of {ds.n_instances} instances")
    return ds.take(np.arange(ds.n_instances - m))


@dataclass(frozen=True, eq=False)
class SplitPair:
    train: Dataset
    test: Dataset
    seed: int
    ratio: float
    train_index: tuple
    test_index: tuple
    stratified: bool


def _round_half_up(x):
    return int(math.floor(x + 0.5))


def _stratified_counts(classes, sizes, total):
    # floor of each class's share, remainder to the largest fractional parts
    # (ties by first-seen class order)
    shares = [s * total / sum(sizes) for s in sizes]
    counts = [int(math.floor(v)) for v in shares]
    order = sorted(range(len(classes)), key=lambda c: (-(shares[c] - counts[c]), c))
    for c in order[: total - sum(counts)]:
        counts[c] += 1
    return counts


def split(ds: Dataset, ratio: float = 0.66, seed: int = 42, stratify: bool = True) -> SplitPair:
    """Partition rows into train/test sets.

    The train side receives ``round(ratio * n)`` rows (halves round up). With
    ``stratify`` each class contributes its proportional share, so per-class
    train fractions match ``ratio`` to within one instance. Both sides keep
    the parent's row order.
    """
    if ds.labels is None:
        raise DatasetError("split requires a labelled dataset")
    if not 0.0 < ratio < 1.0:
        raise DatasetError(f"split ratio must lie in (0, 1), got {ratio}")
    n = ds.n_instances
    n_train = _round_half_up(ratio * n)
    if n_train < 1 or n_train >= n:
        raise DatasetError(f"ratio {ratio} on {n} rows leaves an empty side")

    rng = np.random.default_rng(seed)
    if stratify:
        classes, members = [], {}
        for i, y in enumerate(ds.labels):
            if y not in members:
                classes.append(y)
                members[y] = []
            members[y].append(i)
        small = [c for c in classes if len(members[c]) < 2]
        if small:
            raise DatasetError(f"class {small[0]!r} has fewer than 2 members; cannot stratify")
        counts = _stratified_counts(classes, [len(members[c]) for c in classes], n_train)
        chosen = []
        for c, cnt in zip(classes, counts):
            idx = np.array(members[c])
            chosen.extend(rng.permutation(idx)[:cnt].tolist())
    else:
        chosen = rng.permutation(n)[:n_train].tolist()

    train_idx = sorted(chosen)
    in_train = set(train_idx)
    test_idx = [i for i in range(n) if i not in in_train]
    return SplitPair(
        train=ds.take(train_idx),
        test=ds.take(test_idx),
        seed=seed,
        ratio=ratio,
        train_index=tuple(train_idx),
        test_index=tuple(test_idx),
        stratified=stratify,
    )
