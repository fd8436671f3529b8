"""Attribute weights and the inter-cluster homogeneity measure.

For clusters ``Ci`` and ``Cj`` with per-attribute sums ``S_i`` and ``S_j``
and weights ``alpha``::

    hc(Ci, Cj) = (1 / N) * sum_t (1 - alpha_t) * |S_i[t] - S_j[t]|

Lower values mean a more homogeneous pair. Note the direction of the
weights: a larger ``alpha_t`` shrinks attribute ``t``'s contribution. The
measure works on raw sums, not means, so it grows with cluster size.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

HC_TIE_ATOL = 1e-12


@dataclass(frozen=True, eq=False)
class WeightVector:
    alphas: tuple

    def __post_init__(self):
        alphas = tuple(float(a) for a in np.atleast_1d(np.asarray(self.alphas, dtype=float)))
        if not alphas:
            raise ValueError("weight vector must have at least one entry")
        for t, a in enumerate(alphas):
            if not 0.0 < a < 1.0:
                raise ValueError(f"alpha[{t}] = {a} is outside the open interval (0, 1)")
        object.__setattr__(self, "alphas", alphas)

    def __len__(self):
        return len(self.alphas)

    def __eq__(self, other):
        return isinstance(other, WeightVector) and self.alphas == other.alphas

    def __hash__(self):
        return hash(self.alphas)

    def factors(self) -> np.ndarray:
        return 1.0 - np.array(self.alphas)


def broadcast_alpha(alpha_scalar: float, n_attr: int) -> WeightVector:
    if n_attr < 1:
        raise ValueError("n_attr must be >= 1")
    return WeightVector((float(alpha_scalar),) * n_attr)


def parse_alpha(text, n_attr: int) -> WeightVector:
    """Accept a scalar (``"0.2"``) or a comma list with one value per attribute."""
    if isinstance(text, WeightVector):
        w = text
    elif isinstance(text, (int, float)):
        return broadcast_alpha(float(text), n_attr)
    else:
        if isinstance(text, str):
            parts = [p.strip() for p in text.split(",") if p.strip()]
        else:
            parts = list(text)
        try:
            values = [float(p) for p in parts]
        except ValueError:
            raise ValueError(f"alpha must be numeric, got {text!r}") from None
        if len(values) == 1:
            return broadcast_alpha(values[0], n_attr)
        w = WeightVector(values)
    if len(w) != n_attr:
        raise ValueError(f"alpha has {len(w)} entries but the data has {n_attr} attributes")
    return w


@dataclass(frozen=True, eq=False)
class ClusterSums:
    """A cluster's member indices and the column sums of its member rows."""

    cluster_id: int
    members: frozenset
    sums: np.ndarray

    def __post_init__(self):
        members = frozenset(int(m) for m in self.members)
        if not members:
            raise ValueError("a cluster must have at least one member")
        sums = np.array(self.sums, dtype=np.float64)
        if sums.ndim != 1 or sums.size < 1:
            raise ValueError("sums must be a non-empty vector")
        sums.setflags(write=False)
        object.__setattr__(self, "members", members)
        object.__setattr__(self, "sums", sums)

    @classmethod
    def singleton(cls, cluster_id, row) -> "ClusterSums":
        return cls(cluster_id, frozenset([cluster_id]), np.asarray(row, dtype=np.float64))

    @classmethod
    def from_rows(cls, cluster_id, x, members) -> "ClusterSums":
        """Sum the given rows of ``x`` from scratch, top to bottom."""
        members = sorted(members)
        x = np.asarray(x, dtype=np.float64)
        s = np.zeros(x.shape[1])
        for m in members:
            s = s + x[m]
        return cls(cluster_id, frozenset(members), s)


def hc(ci: ClusterSums, cj: ClusterSums, w: WeightVector) -> float:
    si, sj = ci.sums, cj.sums
    n = len(w)
    if si.size != n or sj.size != n:
        raise ValueError(f"length mismatch: sums {si.size}/{sj.size}, weights {n}")
    total = 0.0
    for t in range(n):
        total += (1.0 - w.alphas[t]) * abs(float(si[t]) - float(sj[t]))
    return total / n


def merged_sums(ci: ClusterSums, cj: ClusterSums, new_id) -> ClusterSums:
    if ci.members & cj.members:
        raise ValueError("cannot merge overlapping clusters")
    if ci.sums.size != cj.sums.size:
        raise ValueError("sum vectors differ in length")
    return ClusterSums(new_id, ci.members | cj.members, ci.sums + cj.sums)


def candidate_hcs(candidates, state, w: WeightVector):
    """HC of each candidate pair, in the canonical (sorted) pair order.

    ``candidates`` may be a :class:`~shachom.distance.TieSet` or an iterable
    of id pairs. Returns ``[(pair, hc_value), ...]``.
    """
    pairs = getattr(candidates, "candidates", candidates)
    pairs = sorted((a, b) if a < b else (b, a) for a, b in pairs)
    if not pairs:
        raise ValueError("no candidate pairs")
    out = []
    for a, b in pairs:
        if a not in state or b not in state:
            missing = a if a not in state else b
            raise KeyError(f"cluster {missing} is not active")
        out.append(((a, b), hc(state[a], state[b], w)))
    return out


def select_qualified(scored, atol: float = HC_TIE_ATOL):
    """Pick the min-HC entry from ``candidate_hcs`` output.

    Returns ``(pair, hc_value, n_at_min)`` where ``n_at_min`` counts the
    candidates within ``atol`` of the minimum; the first of those in
    canonical order wins.
    """
    best = min(h for _, h in scored)
    at_min = [(p, h) for p, h in scored if h - best <= atol]
    pair, value = at_min[0]
    return pair, value, len(at_min)


def qualified_couple(candidates, state, w: WeightVector, atol: float = HC_TIE_ATOL):
    """The candidate pair with the smallest homogeneity value.

    Ties within ``atol`` go to the smallest ``(id, id)`` pair, so the result
    does not depend on the order candidates are listed in.
    """
    pair, value, _ = select_qualified(candidate_hcs(candidates, state, w), atol)
    return pair, value
