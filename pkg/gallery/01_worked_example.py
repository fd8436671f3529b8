"""
Homogeneity on three points
===========================

Three points, two of which are equally close to the first one. Plain
single linkage has to pick arbitrarily; here the tie goes to the pair
with the smaller weighted homogeneity value.
"""

import numpy as np

import shachom as sh

# A, B, C
ds = sh.from_array([[2, 3], [3, 2], [1, 2]], ["attribute_1", "attribute_2"])

# Distances: A-B and A-C are both sqrt(2), B-C is 2.
mat = sh.build_distance_matrix(ds)
for pair, d in mat.entries():
    print(pair, round(d, 6))

ties = sh.min_with_ties(mat)
print("minimum", ties.min_value, "tied pairs", ties.candidates)

###############################################################################
# The homogeneity value compares per-attribute *sums* of two clusters.
# With per-attribute weights (0.2, 0.4), the cluster {A, B} (sums 5, 5)
# against {C} (sums 1, 2) gives (0.8 * 4 + 0.6 * 3) / 2 = 2.5.

w = sh.WeightVector((0.2, 0.4))
ab = sh.ClusterSums(0, {0, 1}, [5, 5])
c = sh.ClusterSums(1, {2}, [1, 2])
print("hc({A,B}, {C}) =", sh.hc(ab, c, w))

###############################################################################
# Run the clustering down to two clusters. Both tied pairs score 0.7, so
# the record says the final choice fell back to id order.

dg, part = sh.shachom(ds, 2, w)
rec = dg.records[0]
print(rec.candidates, rec.candidate_hcs, rec.resolved_by)
print("partition", part.assignment)
assert np.allclose(rec.candidate_hcs, 0.7)
