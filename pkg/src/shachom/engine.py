"""Single-linkage agglomeration with homogeneity tie-breaking.

Every instance starts as its own cluster (ids ``0..n-1``). Each step takes
the minimum inter-cluster distance; when several pairs attain it, the pair
with the smallest homogeneity value is merged, and remaining ties go to the
smallest ``(id, id)`` pair. Merged clusters get the fresh id
``n_leaves + step - 1``. The loop stops once ``k`` clusters remain.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .distance import DEFAULT_TIE_EPS, build_distance_matrix, min_with_ties
from .homogeneity import (
    HC_TIE_ATOL,
    ClusterSums,
    WeightVector,
    candidate_hcs,
    merged_sums,
    select_qualified,
)

UNIQUE_MIN = "unique-min"
HOMOGENEITY = "homogeneity"
ID_ORDER = "id-order"


@dataclass(frozen=True)
class MergeRecord:
    step: int
    left: int
    right: int
    new_id: int
    distance: float
    occ: int
    resolved_by: str
    hc_value: Optional[float] = None
    # tied pairs and their HC values, kept so a tie decision can be re-checked
    candidates: tuple = ()
    candidate_hcs: tuple = ()

    def __post_init__(self):
        if not self.left < self.right:
            raise ValueError("left id must be smaller than right id")
        if self.occ < 1:
            raise ValueError("occ must be >= 1")
        if (self.resolved_by == UNIQUE_MIN) != (self.occ == 1):
            raise ValueError("resolved_by is unique-min exactly when occ == 1")
        if (self.hc_value is not None) != (self.occ > 1):
            raise ValueError("hc_value is present exactly when occ > 1")


@dataclass(frozen=True)
class Dendrogram:
    n_leaves: int
    records: tuple
    final_k: int

    def __post_init__(self):
        object.__setattr__(self, "records", tuple(self.records))
        if len(self.records) != self.n_leaves - self.final_k:
            raise ValueError("record count must equal n_leaves - final_k")

    @property
    def heights(self):
        return [r.distance for r in self.records]

    def structure(self):
        """``(left, right, distance)`` per merge, without tie provenance."""
        return tuple((r.left, r.right, r.distance) for r in self.records)

    def to_linkage(self) -> np.ndarray:
        """SciPy-style ``(n-1-..., 4)`` linkage array for the recorded merges."""
        size = {i: 1 for i in range(self.n_leaves)}
        z = np.empty((len(self.records), 4))
        for s, r in enumerate(self.records):
            size[r.new_id] = size[r.left] + size[r.right]
            z[s] = (r.left, r.right, r.distance, size[r.new_id])
        return z


@dataclass(frozen=True)
class Partition:
    assignment: tuple
    k: int = field(default=0)

    def __post_init__(self):
        labels = canonical_labels(self.assignment)
        k = len(set(labels))
        if self.k and self.k != k:
            raise ValueError(f"assignment has {k} clusters, expected {self.k}")
        object.__setattr__(self, "assignment", labels)
        object.__setattr__(self, "k", k)

    def clusters(self):
        """Member index lists, ordered by label."""
        out = [[] for _ in range(self.k)]
        for i, c in enumerate(self.assignment):
            out[c].append(i)
        return out


def canonical_labels(assignment):
    """Relabel clusters 0, 1, ... in order of first appearance."""
    seen = {}
    return tuple(seen.setdefault(c, len(seen)) for c in assignment)


def single_linkage_update(d_ik: float, d_jk: float) -> float:
    return min(d_ik, d_jk)


def _partition_from_roots(n, roots):
    assignment = [0] * n
    for label, members in enumerate(roots):
        for m in members:
            assignment[m] = label
    return Partition(tuple(assignment))


def shachom(ds, k: int, w: WeightVector, tie_eps: float = DEFAULT_TIE_EPS,
            hc_atol: float = HC_TIE_ATOL, n_jobs: int = 1):
    """Cluster ``ds`` into ``k`` groups; return ``(Dendrogram, Partition)``.

    ``n_jobs`` only affects how the initial distance matrix is computed and
    never changes the result.
    """
    x = np.asarray(getattr(ds, "features", ds), dtype=np.float64)
    n, d = x.shape
    if not 1 <= k <= n:
        raise ValueError(f"k must lie in [1, {n}], got {k}")
    if len(w) != d:
        raise ValueError(f"weight vector has {len(w)} entries for {d} attributes")

    state = {i: ClusterSums.singleton(i, x[i]) for i in range(n)}
    records = []
    if n > k:
        mat = build_distance_matrix(x, n_jobs=n_jobs)
        for step in range(1, n - k + 1):
            ties = min_with_ties(mat, tie_eps)
            new_id = n + step - 1
            if ties.occ == 1:
                (a, b), = ties.candidates
                rec = MergeRecord(step, a, b, new_id, mat.get(a, b), 1, UNIQUE_MIN)
            else:
                scored = candidate_hcs(ties, state, w)
                (a, b), value, n_at_min = select_qualified(scored, hc_atol)
                rec = MergeRecord(
                    step, a, b, new_id, mat.get(a, b), ties.occ,
                    HOMOGENEITY if n_at_min == 1 else ID_ORDER,
                    hc_value=value,
                    candidates=tuple(p for p, _ in scored),
                    candidate_hcs=tuple(h for _, h in scored),
                )
            state[new_id] = merged_sums(state.pop(a), state.pop(b), new_id)
            mat.merge(a, b, new_id)
            records.append(rec)

    dg = Dendrogram(n, tuple(records), k)
    roots = sorted((sorted(c.members) for c in state.values()), key=lambda m: m[0])
    return dg, _partition_from_roots(n, roots)


def partition_at(dg: Dendrogram, k_prime: int) -> Partition:
    """Partition after replaying the first ``n_leaves - k_prime`` merges."""
    if not dg.final_k <= k_prime <= dg.n_leaves:
        raise ValueError(f"k' must lie in [{dg.final_k}, {dg.n_leaves}], got {k_prime}")
    members = {i: [i] for i in range(dg.n_leaves)}
    for r in dg.records[: dg.n_leaves - k_prime]:
        members[r.new_id] = members.pop(r.left) + members.pop(r.right)
    roots = sorted((sorted(m) for m in members.values()), key=lambda m: m[0])
    return _partition_from_roots(dg.n_leaves, roots)
