#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "catclust/ensemble.hpp"

namespace catclust {

class Rng;

enum class SubspaceMode { wor, wr };

SubspaceMode parse_subspace_mode(std::string_view name);
std::string_view subspace_mode_name(SubspaceMode mode) noexcept;

/// Collection of column subsets of a J-dimensional table.
///
/// WOR sets partition [0, J); WR subsets are duplicate-free but need not
/// cover every column.
struct SubspaceSet {
    std::vector<std::vector<std::size_t>> subsets;
    SubspaceMode mode = SubspaceMode::wor;
    std::size_t source_dim = 0;
};

/// Random permutation of [0, J) chopped into blocks. block_size > 0 gives
/// J / block_size blocks of that width and must divide J. block_size == 0
/// draws widths sequentially as DUnif[1, remaining] until J is used up.
SubspaceSet wor_subspaces(std::size_t dim, std::size_t block_size, std::uint64_t seed);

/// Sorted distinct values of a with-replacement sample of pool.size()
/// draws from `pool`.
std::vector<std::size_t> bootstrap_distinct(std::span<const std::size_t> pool, Rng& rng);

/// M subsets, each the result of two rounds of bootstrap + deduplication
/// starting from all J columns. Subset r uses substream (seed, r).
SubspaceSet wr_subspaces(std::size_t dim, std::size_t count, std::uint64_t seed);

/// Exact distribution of the number of distinct values N in a sample of J
/// draws with replacement from J objects; element k-1 holds P(N = k).
/// Computed by the occupancy recurrence over draws, which agrees with
/// C(J,k) k! S(J,k) / J^J.
std::vector<double> distinct_count_pmf(std::size_t dim);

/// E(N)/J and E(N*)/J for the one- and two-level bootstrap, computed from
/// distinct_count_pmf. O(J^2); intended for moderate J.
double expected_distinct_fraction(std::size_t dim);
double expected_double_distinct_fraction(std::size_t dim);

struct SubspaceOptions {
    /// Linkage used to combine the per-subspace labelings.
    Linkage final_linkage = Linkage::average;
};

/// For each subset r: restrict x to its columns, draw K_r from the base
/// size range with substream (seed, r), and run ensemble_cluster with a
/// derived seed. The R labelings form an incidence matrix whose ensemble
/// dissimilarity is agglomerated with `final_linkage` and cut at
/// `final_clusters`. Throws std::invalid_argument for empty or
/// out-of-range subsets.
ClusterResult subspace_ensemble(const CategoricalMatrix& x, const SubspaceSet& subspaces,
                                const EnsembleConfig& base_cfg, std::size_t final_clusters,
                                const SubspaceOptions& options = {});

/// One JSON array of column indices per line.
void write_subspaces_jsonl(std::ostream& out, const SubspaceSet& set);
SubspaceSet read_subspaces_jsonl(std::istream& in, SubspaceMode mode, std::size_t source_dim);

}  // namespace catclust
