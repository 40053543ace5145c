#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "catclust/categorical.hpp"
#include "catclust/ensemble.hpp"

namespace catclust {

struct KModesState {
    std::size_t clusters = 0;
    std::size_t dims = 0;
    std::vector<Code> modes;            // clusters x dims, row-major
    std::vector<std::size_t> labels;
    std::size_t cost = 0;               // sum of Hamming distances to assigned modes
    std::size_t iterations = 0;
    std::vector<std::size_t> cost_history;  // cost after each iteration

    Clustering clustering() const { return Clustering(labels, clusters); }
};

/// K-modes with initial modes drawn as K distinct random rows. Each
/// iteration assigns points to the nearest mode (ties to the lower index),
/// refills empty clusters with the point farthest from its mode, and
/// recomputes modes as the per-column most frequent code (ties to the
/// smaller code). Stops when labels stop changing or after max_iter.
/// Throws std::invalid_argument if K is 0 or exceeds n, or x has gaps.
KModesState kmodes(const CategoricalMatrix& x, std::size_t clusters, std::uint64_t seed,
                   std::size_t max_iter = 100);

struct EnKModesOptions {
    std::size_t ensemble_size = 100;
    std::optional<std::size_t> k_min;
    std::optional<std::size_t> k_max;
    Linkage linkage = Linkage::average;
    std::size_t max_iter = 100;
};

/// Evidence-accumulation ensemble of K-modes runs: B runs with
/// K_b ~ DUnif[k_min, k_max] and independent initializations, combined via
/// ensemble_dissimilarity, agglomerated and cut at `final_clusters`.
ClusterResult en_kmodes(const CategoricalMatrix& x, std::size_t final_clusters, std::uint64_t seed,
                        const EnKModesOptions& options = {});

}  // namespace catclust
