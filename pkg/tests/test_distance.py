import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shachom import build_distance_matrix, euclidean, from_array, min_with_ties
from shachom.distance import DistanceMatrix

from conftest import A, B, C


def naive_matrix(x):
    x = np.asarray(x, dtype=float)
    out = {}
    for i in range(len(x)):
        for j in range(i + 1, len(x)):
            s = 0.0
            for t in range(x.shape[1]):
                d = x[i, t] - x[j, t]
                s += d * d
            out[(i, j)] = math.sqrt(s)
    return out


def test_euclidean_examples():
    assert euclidean((0, 0), (3, 4)) == 5.0
    assert euclidean((1.5, -2.0), (1.5, -2.0)) == 0.0
    assert euclidean((2, 3), (3, 2)) == pytest.approx(1.4142135624, abs=1e-10)
    with pytest.raises(ValueError):
        euclidean((1, 2), (1, 2, 3))


finite = st.floats(-1e6, 1e6, allow_nan=False)


@settings(max_examples=300)
@given(st.integers(1, 6).flatmap(lambda d: st.tuples(*[st.lists(finite, min_size=d, max_size=d)] * 3)))
def test_triangle_inequality(points):
    a, b, c = points
    ab, bc, ac = euclidean(a, b), euclidean(b, c), euclidean(a, c)
    assert ab == euclidean(b, a)
    assert ac <= (ab + bc) * (1 + 1e-12) + 1e-300


def test_three_points_matrix(three_points):
    m = build_distance_matrix(three_points)
    assert dict(m.entries()) == {(A, B): math.sqrt(2), (A, C): math.sqrt(2), (B, C): 2.0}


def test_duplicate_points():
    m = build_distance_matrix(from_array([[1, 1], [1, 1]]))
    assert list(m.entries()) == [((0, 1), 0.0)]


def test_needs_two_points():
    with pytest.raises(ValueError):
        build_distance_matrix(from_array([[1, 2]]))


@pytest.mark.parametrize("n_jobs", [1, 3, 8])
def test_matrix_matches_naive_loop(rng, n_jobs):
    x = rng.normal(size=(23, 5))
    m = build_distance_matrix(from_array(x), n_jobs=n_jobs)
    assert len(m) == 23 * 22 // 2
    assert dict(m.entries()) == naive_matrix(x)


def test_min_with_ties_three_points(three_points):
    ties = min_with_ties(build_distance_matrix(three_points), 1e-9)
    assert ties.min_value == math.sqrt(2)
    assert ties.candidates == ((A, B), (A, C))
    assert ties.occ == 2


def test_min_with_ties_distinct_and_total():
    m = DistanceMatrix([1.0, 2.0, 3.0], [0, 1, 2])
    t = min_with_ties(m)
    assert (t.min_value, t.candidates) == (1.0, ((0, 1),))
    m = DistanceMatrix([4.0] * 6, [0, 1, 2, 3])
    assert min_with_ties(m).occ == 6


def test_min_with_ties_relative_tolerance():
    m = DistanceMatrix([1000.0, 1000.0 + 5e-7, 1000.0 + 2e-6], [0, 1, 2])
    assert min_with_ties(m, 1e-9).occ == 2
    assert min_with_ties(m, 0.0).occ == 1


def test_empty_matrix_rejected():
    with pytest.raises(ValueError):
        min_with_ties(DistanceMatrix([], [0]))


def test_merge_retires_and_updates(three_points):
    m = build_distance_matrix(three_points)
    m.merge(A, B, 3)
    assert m.size == 2 and A not in m and 3 in m
    assert list(m.entries()) == [((C, 3), math.sqrt(2))]
    with pytest.raises(ValueError):
        m.merge(C, 3, 3)


@settings(max_examples=100)
@given(st.lists(st.lists(st.integers(0, 4), min_size=2, max_size=2), min_size=2, max_size=12),
       st.floats(0, 1e-3))
def test_min_with_ties_contains_argmin(rows, eps):
    m = build_distance_matrix(from_array(rows))
    entries = dict(m.entries())
    t = min_with_ties(m, eps)
    argmin = min(entries, key=lambda p: (entries[p], p))
    assert argmin in t.candidates
    assert list(t.candidates) == sorted(t.candidates)
    assert all(entries[p] <= t.min_value + eps * max(1.0, t.min_value) for p in t.candidates)
    assert [p for p in entries if entries[p] - t.min_value <= eps * max(1.0, t.min_value)] == list(t.candidates)
