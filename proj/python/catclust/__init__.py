"""Hierarchical, ensemble and subspace clustering of categorical data.

Data matrices are 2-d integer arrays of category codes; negative entries
mark gaps, which the Hamming kernel skips.
"""

from ._catclust import (
    DataError,
    Dendrogram,
    agglomerate,
    classification_rate,
    cluster,
    distinct_count_pmf,
    encode,
    ensemble_cluster,
    ensemble_dissimilarity,
    expected_distinct_fraction,
    expected_double_distinct_fraction,
    gen_highdim,
    gen_lowdim,
    gen_noise,
    hamming,
    kmodes,
    read_csv,
    read_fasta,
    wor_subspaces,
    wr_subspaces,
)

__all__ = [
    "DataError",
    "Dendrogram",
    "agglomerate",
    "classification_rate",
    "cluster",
    "distinct_count_pmf",
    "encode",
    "ensemble_cluster",
    "ensemble_dissimilarity",
    "expected_distinct_fraction",
    "expected_double_distinct_fraction",
    "gen_highdim",
    "gen_lowdim",
    "gen_noise",
    "hamming",
    "kmodes",
    "read_csv",
    "read_fasta",
    "wor_subspaces",
    "wr_subspaces",
]
