#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "catclust/categorical.hpp"
#include "catclust/dissimilarity.hpp"
#include "catclust/hclust.hpp"

namespace catclust {

/// Parameters of the two-stage ensemble (ENSL/ENAL/ENCL).
struct EnsembleConfig {
    std::size_t ensemble_size = 100;      // B
    std::optional<std::size_t> k_min;     // default 2
    std::optional<std::size_t> k_max;     // default ceil(sqrt(n))
    Linkage linkage = Linkage::average;
    std::uint64_t seed = 1;
    double alpha = 0.0;                   // outlier fraction for base cuts
    bool distinct_sizes = false;          // draw K_b without replacement
    bool normalize = false;               // normalized Hamming for the first stage

    /// Effective [k_min, k_max] for n points. Throws std::invalid_argument
    /// when the range is empty or exceeds n.
    std::pair<std::size_t, std::size_t> size_range(std::size_t n) const;
};

/// Flat `key=value` form; keys match the CLI long option names.
void write_config(std::ostream& out, const EnsembleConfig& cfg);
/// Reads the keys written by write_config; unknown keys are ignored so the
/// same file can carry CLI-only settings. Throws std::invalid_argument on
/// malformed values.
EnsembleConfig read_config(std::istream& in, EnsembleConfig base = {});

/// n x B table of base-clustering labels. Column b uses labels [0, K_b).
class IncidenceMatrix {
public:
    IncidenceMatrix() = default;

    /// `columns[b]` holds the n labels of base clustering b.
    explicit IncidenceMatrix(std::vector<Clustering> columns);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t columns() const noexcept { return columns_.size(); }
    std::size_t at(std::size_t i, std::size_t b) const noexcept { return columns_[b][i]; }
    const Clustering& column(std::size_t b) const noexcept { return columns_[b]; }
    std::vector<std::size_t> sizes() const;

private:
    std::size_t rows_ = 0;
    std::vector<Clustering> columns_;
};

/// B IID draws K_b ~ DUnif[k_min, k_max]; draw b uses substream (seed, b).
/// With distinct_sizes the sizes are sampled without replacement instead.
std::vector<std::size_t> draw_sizes(const EnsembleConfig& cfg, std::size_t n);

/// Column b = cut_with_outlier_deferral(agglomerate(d, linkage), K_b, alpha).
/// The base dendrogram does not depend on K_b, so it is built once.
IncidenceMatrix build_incidence(const DissimilarityMatrix& d, std::span<const std::size_t> sizes, Linkage linkage,
                                double alpha);

/// d_B(i, j) = fraction of columns in which i and j carry different labels.
/// Labels are only compared within a column.
DissimilarityMatrix ensemble_dissimilarity(const IncidenceMatrix& w);

struct ClusterResult {
    Clustering clustering;
    Dendrogram dendrogram;
};

/// Second-stage clustering from a precomputed first-stage dissimilarity:
/// build_incidence -> ensemble_dissimilarity -> agglomerate with the same
/// linkage -> cut at `final_clusters`.
ClusterResult ensemble_cluster(const DissimilarityMatrix& d, const EnsembleConfig& cfg, std::size_t final_clusters);

/// As above, starting from the Hamming dissimilarity of `x`.
ClusterResult ensemble_cluster(const CategoricalMatrix& x, const EnsembleConfig& cfg, std::size_t final_clusters);

}  // namespace catclust
