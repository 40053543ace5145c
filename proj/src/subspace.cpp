#include "catclust/subspace.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "catclust/error.hpp"
#include "catclust/parallel.hpp"
#include "catclust/rng.hpp"

namespace catclust {

SubspaceMode parse_subspace_mode(std::string_view name) {
    if (name == "wor" || name == "WOR") return SubspaceMode::wor;
    if (name == "wr" || name == "WR") return SubspaceMode::wr;
    throw std::invalid_argument("unknown subspace mode '" + std::string(name) + "'");
}

std::string_view subspace_mode_name(SubspaceMode mode) noexcept { return mode == SubspaceMode::wor ? "wor" : "wr"; }

SubspaceSet wor_subspaces(std::size_t dim, std::size_t block_size, std::uint64_t seed) {
    if (dim == 0) throw std::invalid_argument("dimension must be positive");
    if (block_size > dim) throw std::invalid_argument("block size exceeds dimension");
    if (block_size > 0 && dim % block_size != 0)
        throw std::invalid_argument("block size " + std::to_string(block_size) + " does not divide J=" +
                                    std::to_string(dim));

    Rng rng(seed);
    std::vector<std::size_t> perm(dim);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    rng.shuffle(perm);

    SubspaceSet out;
    out.mode = SubspaceMode::wor;
    out.source_dim = dim;
    std::size_t pos = 0;
    while (pos < dim) {
        const std::size_t remaining = dim - pos;
        const std::size_t width =
            block_size > 0 ? block_size
                           : static_cast<std::size_t>(rng.uniform_int(1, static_cast<std::int64_t>(remaining)));
        std::vector<std::size_t> block(perm.begin() + static_cast<std::ptrdiff_t>(pos),
                                       perm.begin() + static_cast<std::ptrdiff_t>(pos + width));
        std::sort(block.begin(), block.end());
        out.subsets.push_back(std::move(block));
        pos += width;
    }
    return out;
}

std::vector<std::size_t> bootstrap_distinct(std::span<const std::size_t> pool, Rng& rng) {
    std::vector<std::size_t> draw(pool.size());
    for (auto& v : draw) v = pool[rng.below(pool.size())];
    std::sort(draw.begin(), draw.end());
    draw.erase(std::unique(draw.begin(), draw.end()), draw.end());
    return draw;
}

SubspaceSet wr_subspaces(std::size_t dim, std::size_t count, std::uint64_t seed) {
    if (dim == 0) throw std::invalid_argument("dimension must be positive");
    if (count == 0) throw std::invalid_argument("at least one subspace required");
    std::vector<std::size_t> all(dim);
    std::iota(all.begin(), all.end(), std::size_t{0});

    SubspaceSet out;
    out.mode = SubspaceMode::wr;
    out.source_dim = dim;
    out.subsets.resize(count);
    const Rng root(seed);
    for (std::size_t r = 0; r < count; ++r) {
        Rng rng = root.split(r);
        const auto first = bootstrap_distinct(all, rng);
        out.subsets[r] = bootstrap_distinct(first, rng);
    }
    return out;
}

std::vector<double> distinct_count_pmf(std::size_t dim) {
    if (dim == 0) throw std::invalid_argument("dimension must be positive");
    // p[k] = P(k distinct values after t draws); each draw is new with
    // probability (J - k) / J.
    const double total = static_cast<double>(dim);
    std::vector<double> p(dim + 1, 0.0);
    p[0] = 1.0;
    for (std::size_t t = 1; t <= dim; ++t) {
        for (std::size_t k = std::min(t, dim); k >= 1; --k) {
            p[k] = p[k] * static_cast<double>(k) / total + p[k - 1] * static_cast<double>(dim - k + 1) / total;
        }
        p[0] = 0.0;
    }
    return {p.begin() + 1, p.end()};
}

double expected_distinct_fraction(std::size_t dim) {
    const auto pmf = distinct_count_pmf(dim);
    double e = 0.0;
    for (std::size_t k = 1; k <= dim; ++k) e += static_cast<double>(k) * pmf[k - 1];
    return e / static_cast<double>(dim);
}

double expected_double_distinct_fraction(std::size_t dim) {
    const auto pmf = distinct_count_pmf(dim);
    double e = 0.0;
    for (std::size_t k = 1; k <= dim; ++k) {
        const double kk = static_cast<double>(k);
        // E(N* | N = k) = k (1 - (1 - 1/k)^k)
        const double conditional = kk * (1.0 - std::pow(1.0 - 1.0 / kk, kk));
        e += conditional * pmf[k - 1];
    }
    return e / static_cast<double>(dim);
}

ClusterResult subspace_ensemble(const CategoricalMatrix& x, const SubspaceSet& subspaces,
                                const EnsembleConfig& base_cfg, std::size_t final_clusters,
                                const SubspaceOptions& options) {
    const std::size_t n = x.rows();
    if (subspaces.subsets.empty()) throw std::invalid_argument("subspace set is empty");
    if (final_clusters < 1 || final_clusters > n) throw std::invalid_argument("K_final out of range [1, n]");
    for (const auto& s : subspaces.subsets) {
        if (s.empty()) throw std::invalid_argument("empty subspace");
        for (auto c : s) {
            if (c >= x.cols()) throw std::invalid_argument("subspace column index out of range");
        }
    }
    const auto [lo, hi] = base_cfg.size_range(n);

    const Rng root(base_cfg.seed);
    std::vector<Clustering> labelings(subspaces.subsets.size());
    parallel_for(subspaces.subsets.size(), [&](std::size_t r) {
        Rng stream = root.split(r);
        const auto k_r = static_cast<std::size_t>(
            stream.uniform_int(static_cast<std::int64_t>(lo), static_cast<std::int64_t>(hi)));
        EnsembleConfig cfg = base_cfg;
        cfg.seed = stream.next();
        const CategoricalMatrix restricted = x.select_columns(subspaces.subsets[r]);
        labelings[r] = ensemble_cluster(restricted, cfg, k_r).clustering;
    });

    const DissimilarityMatrix combined = ensemble_dissimilarity(IncidenceMatrix(std::move(labelings)));
    Dendrogram tree = agglomerate(combined, options.final_linkage);
    Clustering labels = cut_with_outlier_deferral(tree, combined, final_clusters, base_cfg.alpha);
    return {std::move(labels), std::move(tree)};
}

void write_subspaces_jsonl(std::ostream& out, const SubspaceSet& set) {
    for (const auto& s : set.subsets) out << nlohmann::json(s).dump() << '\n';
}

SubspaceSet read_subspaces_jsonl(std::istream& in, SubspaceMode mode, std::size_t source_dim) {
    SubspaceSet set;
    set.mode = mode;
    set.source_dim = source_dim;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            auto subset = nlohmann::json::parse(line).get<std::vector<std::size_t>>();
            for (auto c : subset) {
                if (c >= source_dim) throw DataError("subspace index out of range on line " + std::to_string(line_no));
            }
            set.subsets.push_back(std::move(subset));
        } catch (const nlohmann::json::exception& e) {
            throw DataError("malformed subspace line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return set;
}

}  // namespace catclust
