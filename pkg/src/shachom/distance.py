"""Euclidean distances and the inter-cluster distance matrix.

The matrix stores one value per unordered pair of active clusters in a
condensed upper-triangular array. Cluster ids are mapped onto row slots, so
a merge retires one slot and rewrites the surviving slot's row in place.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

DEFAULT_TIE_EPS = 1e-9


def euclidean(a, b) -> float:
    """Euclidean distance, summed left to right over attributes."""
    if len(a) != len(b):
        raise ValueError(f"length mismatch: {len(a)} vs {len(b)}")
    s = 0.0
    for x, y in zip(a, b):
        d = float(x) - float(y)
        s += d * d
    return math.sqrt(s)


def _condensed_index(n, i, j):
    # i < j
    return n * i - i * (i + 1) // 2 + (j - i - 1)


def _pair_block(x, rows):
    # Same operation order as ``euclidean``, vectorised over the pairs
    # (i, j > i) for each i in ``rows``.
    out = []
    n, d = x.shape
    for i in rows:
        acc = np.zeros(n - i - 1)
        for t in range(d):
            diff = x[i, t] - x[i + 1:, t]
            acc += diff * diff
        out.append(np.sqrt(acc))
    return out


@dataclass(frozen=True)
class TieSet:
    """Minimum distance and every cluster pair attaining it (within tolerance).

    ``candidates`` is sorted by (smaller id, larger id); ``occ`` is its length.
    """

    min_value: float
    candidates: tuple

    @property
    def occ(self) -> int:
        return len(self.candidates)


class DistanceMatrix:
    """Condensed symmetric distance matrix keyed by cluster id."""

    def __init__(self, values, ids):
        ids = list(ids)
        n = len(ids)
        values = np.asarray(values, dtype=np.float64)
        if values.shape != (n * (n - 1) // 2,):
            raise ValueError(f"expected {n * (n - 1) // 2} condensed entries, got {values.shape}")
        if n and not np.all(np.isfinite(values) & (values >= 0)):
            raise ValueError("distances must be finite and non-negative")
        self._n = n
        self._values = values.copy()
        self._slot_ids = ids
        self._slot = {cid: s for s, cid in enumerate(ids)}
        if len(self._slot) != n:
            raise ValueError("cluster ids must be unique")
        # condensed positions touching each slot, in ascending partner order
        self._rows = []
        for s in range(n):
            idx = [_condensed_index(n, p, s) for p in range(s)]
            idx += [_condensed_index(n, s, p) for p in range(s + 1, n)]
            self._rows.append(np.array(idx, dtype=np.intp))
        self._pairs_i, self._pairs_j = np.triu_indices(n, k=1)

    @property
    def ids(self):
        """Active cluster ids in slot order."""
        return [cid for cid in self._slot_ids if cid is not None]

    @property
    def size(self) -> int:
        return len(self._slot)

    def __len__(self):
        """Number of stored (active) pair entries."""
        m = self.size
        return m * (m - 1) // 2

    def __contains__(self, cid):
        return cid in self._slot

    def get(self, a, b) -> float:
        if a == b:
            raise KeyError("no self-distance is stored")
        i, j = sorted((self._slot[a], self._slot[b]))
        return float(self._values[_condensed_index(self._n, i, j)])

    def entries(self):
        """Yield ``((id_a, id_b), distance)`` for active pairs, ids ascending."""
        for a, b in sorted(self._canon(i, j) for i, j in zip(self._pairs_i, self._pairs_j)
                           if self._slot_ids[i] is not None and self._slot_ids[j] is not None):
            yield (a, b), self.get(a, b)

    def _canon(self, i, j):
        a, b = self._slot_ids[i], self._slot_ids[j]
        return (a, b) if a < b else (b, a)

    def copy(self) -> "DistanceMatrix":
        new = object.__new__(DistanceMatrix)
        new.__dict__.update(self.__dict__)
        new._values = self._values.copy()
        new._slot_ids = list(self._slot_ids)
        new._slot = dict(self._slot)
        return new

    def merge(self, a, b, new_id, update=None):
        """Replace clusters ``a`` and ``b`` by ``new_id``.

        The new row is ``update(d_a, d_b)`` elementwise against every other
        active cluster (single linkage, ``np.minimum``, by default). Entries
        of the retired slot become +inf and are never read again.
        """
        if update is None:
            update = np.minimum
        if new_id in self._slot:
            raise ValueError(f"cluster id {new_id} already active")
        sa, sb = self._slot[a], self._slot[b]
        if sa == sb:
            raise ValueError("cannot merge a cluster with itself")
        keep, drop = min(sa, sb), max(sa, sb)
        row_k, row_d = self._rows[keep], self._rows[drop]
        # partner slot p appears at position p (p < s) or p-1 (p > s) in row s
        partners = np.array([p for p in range(self._n)
                             if p not in (keep, drop) and self._slot_ids[p] is not None],
                            dtype=np.intp)
        pos_k = np.where(partners < keep, partners, partners - 1)
        pos_d = np.where(partners < drop, partners, partners - 1)
        if partners.size:
            ik, idd = row_k[pos_k], row_d[pos_d]
            self._values[ik] = update(self._values[ik], self._values[idd])
        self._values[row_d] = np.inf
        del self._slot[a], self._slot[b]
        self._slot_ids[drop] = None
        self._slot_ids[keep] = new_id
        self._slot[new_id] = keep

    def active_values(self):
        """Condensed values with retired entries set to +inf (read-only view)."""
        v = self._values.view()
        v.setflags(write=False)
        return v

    def pair_at(self, pos):
        return self._canon(self._pairs_i[pos], self._pairs_j[pos])


def build_distance_matrix(ds, n_jobs: int = 1) -> DistanceMatrix:
    """All pairwise Euclidean distances between the rows of ``ds``.

    Rows are computed in blocks; with ``n_jobs > 1`` the blocks run on a
    thread pool. Each entry is computed independently, so the result does
    not depend on ``n_jobs``.
    """
    x = np.asarray(getattr(ds, "features", ds), dtype=np.float64)
    n = x.shape[0]
    if n < 2:
        raise ValueError("need at least 2 instances for a distance matrix")
    rows = list(range(n - 1))
    if n_jobs > 1:
        blocks = [rows[k::n_jobs] for k in range(n_jobs)]
        with ThreadPoolExecutor(max_workers=n_jobs) as pool:
            results = list(pool.map(lambda r: (r, _pair_block(x, r)), blocks))
        by_row = {}
        for r, vals in results:
            by_row.update(zip(r, vals))
        parts = [by_row[i] for i in rows]
    else:
        parts = _pair_block(x, rows)
    return DistanceMatrix(np.concatenate(parts), range(n))


def min_with_ties(mat: DistanceMatrix, tie_eps: float = DEFAULT_TIE_EPS) -> TieSet:
    """Global minimum and all pairs within ``tie_eps * max(1, min)`` of it."""
    if tie_eps < 0:
        raise ValueError("tie_eps must be >= 0")
    if len(mat) == 0:
        raise ValueError("distance matrix has no entries")
    v = mat.active_values()
    m = float(v.min())
    hits = np.flatnonzero(v - m <= tie_eps * max(1.0, m))
    return TieSet(m, tuple(sorted(mat.pair_at(p) for p in hits)))
