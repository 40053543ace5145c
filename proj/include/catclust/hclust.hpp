#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "catclust/dissimilarity.hpp"

namespace catclust {

enum class Linkage { single, average, complete };

/// Parses "single"/"average"/"complete" (also "sl"/"al"/"cl").
Linkage parse_linkage(std::string_view name);
std::string_view linkage_name(Linkage linkage) noexcept;

/// Flat partition of n items into K nonempty clusters labelled 0..K-1.
class Clustering {
public:
    Clustering() = default;

    /// Throws std::invalid_argument unless every label in [0, K) is used.
    Clustering(std::vector<std::size_t> labels, std::size_t clusters);

    /// Relabels arbitrary integer labels to 0..K-1 by order of first appearance.
    static Clustering from_labels(std::span<const long long> labels);

    std::size_t size() const noexcept { return labels_.size(); }
    std::size_t clusters() const noexcept { return clusters_; }
    std::size_t operator[](std::size_t i) const noexcept { return labels_[i]; }
    std::span<const std::size_t> labels() const noexcept { return labels_; }
    std::vector<std::size_t> cluster_sizes() const;

    friend bool operator==(const Clustering&, const Clustering&) = default;

private:
    std::vector<std::size_t> labels_;
    std::size_t clusters_ = 0;
};

/// Node ids follow the usual convention: leaves are 0..n-1 and the k-th
/// merge creates node n+k. `left` is the child containing the smaller leaf.
struct Merge {
    std::size_t left = 0;
    std::size_t right = 0;
    double height = 0.0;
    std::size_t size = 0;

    friend bool operator==(const Merge&, const Merge&) = default;
};

class Dendrogram {
public:
    Dendrogram() = default;

    /// Validates the merge structure; throws std::invalid_argument.
    Dendrogram(std::size_t leaves, std::vector<Merge> merges);

    std::size_t leaves() const noexcept { return leaves_; }
    std::span<const Merge> merges() const noexcept { return merges_; }
    /// Height of a node; leaves have height 0.
    double height(std::size_t node) const noexcept { return node < leaves_ ? 0.0 : merges_[node - leaves_].height; }

    const std::vector<std::string>& leaf_labels() const noexcept { return leaf_labels_; }
    void set_leaf_labels(std::vector<std::string> labels);

private:
    std::size_t leaves_ = 0;
    std::vector<Merge> merges_;
    std::vector<std::string> leaf_labels_;
};

/// Agglomerative clustering with Lance-Williams style updates. At each step
/// the pair of active clusters with minimal linkage value is merged; ties go
/// to the lexicographically smallest (smaller, larger) pair of cluster ids,
/// where a cluster's id is its smallest leaf. Average linkage is UPGMA,
/// kept as sums of original dissimilarities divided by the size product.
/// Throws std::invalid_argument for n < 2.
Dendrogram agglomerate(const DissimilarityMatrix& d, Linkage linkage);

/// Undoes the last K-1 merges. Clusters are labelled by order of their
/// smallest member. Throws std::invalid_argument unless 1 <= K <= n.
Clustering cut(const Dendrogram& tree, std::size_t clusters);

/// Cuts at K, then dissolves every cluster smaller than alpha*n and moves
/// each of its members to the surviving cluster with the smallest average
/// dissimilarity (ties to the lower label). alpha = 0 is a plain cut.
/// Throws std::invalid_argument if alpha is outside [0, 0.5) or no
/// cluster survives.
Clustering cut_with_outlier_deferral(const Dendrogram& tree, const DissimilarityMatrix& d, std::size_t clusters,
                                     double alpha);

/// Newick string with branch lengths parent height - child height. Leaves
/// use the dendrogram's labels when present, otherwise their index.
std::string to_newick(const Dendrogram& tree);

}  // namespace catclust
