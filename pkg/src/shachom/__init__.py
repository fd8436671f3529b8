"""Single-linkage agglomerative clustering whose equidistant merges are
decided by a weighted inter-cluster homogeneity measure, with an ID3-based
evaluation of the resulting clusters."""

from .dataset import (
    Dataset,
    DatasetError,
    SplitPair,
    drop_last_attributes,
    drop_last_instances,
    from_array,
    load_csv,
    split,
    write_csv,
)
from .distance import DistanceMatrix, TieSet, build_distance_matrix, euclidean, min_with_ties
from .engine import Dendrogram, MergeRecord, Partition, partition_at, shachom, single_linkage_update
from .homogeneity import (
    ClusterSums,
    WeightVector,
    broadcast_alpha,
    hc,
    merged_sums,
    parse_alpha,
    qualified_couple,
)
from .id3 import (
    DecisionNode,
    EvalReport,
    NominalDataset,
    annotate_with_clusters,
    discretize,
    evaluate,
    id3_predict,
    id3_train,
    information_gain,
)

__version__ = "0.1.0"
