#include "catclust/kmodes.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "catclust/parallel.hpp"
#include "catclust/rng.hpp"

namespace catclust {

namespace {

std::size_t distance(std::span<const Code> a, const Code* b) noexcept {
    std::size_t d = 0;
    for (std::size_t j = 0; j < a.size(); ++j) d += a[j] != b[j];
    return d;
}

class KModes {
public:
    KModes(const CategoricalMatrix& x, std::size_t k) : x_(x), k_(k), dims_(x.cols()), dist_(x.rows()) {
        state_.clusters = k;
        state_.dims = dims_;
        state_.modes.resize(k * dims_);
        state_.labels.assign(x.rows(), 0);
        std::size_t max_card = 0;
        for (auto a : x.cardinalities()) max_card = std::max(max_card, a);
        counts_.resize(max_card);
    }

    KModesState run(Rng& rng, std::size_t max_iter) {
        const auto init = rng.sample_without_replacement(x_.rows(), k_);
        for (std::size_t c = 0; c < k_; ++c) {
            auto r = x_.row(init[c]);
            std::copy(r.begin(), r.end(), state_.modes.begin() + static_cast<std::ptrdiff_t>(c * dims_));
        }

        std::vector<std::size_t> previous;
        for (std::size_t it = 0; it < max_iter; ++it) {
            assign();
            repair_empty();
            if (!previous.empty() && previous == state_.labels) break;
            update_modes();
            state_.cost = total_cost();
            state_.cost_history.push_back(state_.cost);
            state_.iterations = it + 1;
            previous = state_.labels;
        }
        state_.cost = total_cost();
        return std::move(state_);
    }

private:
    const Code* mode(std::size_t c) const noexcept { return state_.modes.data() + c * dims_; }

    void assign() {
        for (std::size_t i = 0; i < x_.rows(); ++i) {
            auto row = x_.row(i);
            std::size_t best = 0;
            std::size_t best_d = std::numeric_limits<std::size_t>::max();
            for (std::size_t c = 0; c < k_; ++c) {
                const std::size_t d = distance(row, mode(c));
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            state_.labels[i] = best;
            dist_[i] = best_d;
        }
    }

    void repair_empty() {
        std::vector<std::size_t> sizes(k_, 0);
        for (auto l : state_.labels) ++sizes[l];
        for (std::size_t c = 0; c < k_; ++c) {
            if (sizes[c] > 0) continue;
            // Farthest point among those whose cluster can spare a member.
            std::size_t pick = x_.rows();
            for (std::size_t i = 0; i < x_.rows(); ++i) {
                if (sizes[state_.labels[i]] < 2) continue;
                if (pick == x_.rows() || dist_[i] > dist_[pick]) pick = i;
            }
            --sizes[state_.labels[pick]];
            ++sizes[c];
            state_.labels[pick] = c;
            dist_[pick] = 0;
            auto r = x_.row(pick);
            std::copy(r.begin(), r.end(), state_.modes.begin() + static_cast<std::ptrdiff_t>(c * dims_));
        }
    }

    void update_modes() {
        std::vector<std::vector<std::size_t>> members(k_);
        for (std::size_t i = 0; i < x_.rows(); ++i) members[state_.labels[i]].push_back(i);
        for (std::size_t c = 0; c < k_; ++c) {
            Code* m = state_.modes.data() + c * dims_;
            for (std::size_t j = 0; j < dims_; ++j) {
                const std::size_t card = x_.cardinality(j);
                std::fill(counts_.begin(), counts_.begin() + static_cast<std::ptrdiff_t>(card), 0);
                for (auto i : members[c]) ++counts_[x_.at(i, j)];
                std::size_t best = 0;
                for (std::size_t v = 1; v < card; ++v) {
                    if (counts_[v] > counts_[best]) best = v;
                }
                m[j] = static_cast<Code>(best);
            }
        }
    }

    std::size_t total_cost() const {
        std::size_t cost = 0;
        for (std::size_t i = 0; i < x_.rows(); ++i) cost += distance(x_.row(i), mode(state_.labels[i]));
        return cost;
    }

    const CategoricalMatrix& x_;
    std::size_t k_;
    std::size_t dims_;
    std::vector<std::size_t> dist_;
    std::vector<std::size_t> counts_;
    KModesState state_;
};

}  // namespace

KModesState kmodes(const CategoricalMatrix& x, std::size_t clusters, std::uint64_t seed, std::size_t max_iter) {
    if (clusters == 0 || clusters > x.rows()) throw std::invalid_argument("kmodes: K must lie in [1, n]");
    if (x.has_gaps()) throw std::invalid_argument("kmodes requires gap-free data");
    if (max_iter == 0) throw std::invalid_argument("kmodes: max_iter must be positive");
    Rng rng(seed);
    return KModes(x, clusters).run(rng, max_iter);
}

ClusterResult en_kmodes(const CategoricalMatrix& x, std::size_t final_clusters, std::uint64_t seed,
                        const EnKModesOptions& options) {
    const std::size_t n = x.rows();
    if (final_clusters < 1 || final_clusters > n) throw std::invalid_argument("K_final out of range [1, n]");
    EnsembleConfig cfg;
    cfg.ensemble_size = options.ensemble_size;
    cfg.k_min = options.k_min;
    cfg.k_max = options.k_max;
    cfg.seed = seed;
    const auto sizes = draw_sizes(cfg, n);

    const Rng root(seed);
    std::vector<Clustering> runs(sizes.size());
    parallel_for(sizes.size(), [&](std::size_t b) {
        const std::uint64_t run_seed = root.split(b).split(1).seed();
        runs[b] = kmodes(x, sizes[b], run_seed, options.max_iter).clustering();
    });

    const DissimilarityMatrix d = ensemble_dissimilarity(IncidenceMatrix(std::move(runs)));
    Dendrogram tree = agglomerate(d, options.linkage);
    Clustering labels = cut(tree, final_clusters);
    return {std::move(labels), std::move(tree)};
}

}  // namespace catclust
