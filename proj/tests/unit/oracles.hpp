#pragma once

// Independent reference implementations used only by tests. None of these
// share code paths with the library routines they check.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

#include "catclust/rng.hpp"

namespace oracle {

struct Step {
    std::size_t a;  // smallest leaf of first cluster
    std::size_t b;  // smallest leaf of second cluster (a < b)
    double height;

    bool operator==(const Step&) const = default;
};

enum class Link { single, average, complete };

/// Naive O(n^3)-per-step agglomeration recomputing every inter-cluster
/// linkage from the original matrix. Ties: lexicographically smallest
/// (min-leaf, min-leaf) pair.
inline std::vector<Step> agglomerate(const std::vector<double>& d, std::size_t n, Link link,
                                     std::vector<std::vector<std::size_t>>* partitions = nullptr) {
    std::vector<std::vector<std::size_t>> clusters(n);
    for (std::size_t i = 0; i < n; ++i) clusters[i] = {i};
    std::vector<Step> steps;
    if (partitions) {
        partitions->assign(1, std::vector<std::size_t>(n));
        std::iota(partitions->front().begin(), partitions->front().end(), std::size_t{0});
    }
    auto linkage = [&](const std::vector<std::size_t>& x, const std::vector<std::size_t>& y) {
        double best = link == Link::single ? std::numeric_limits<double>::infinity() : 0.0;
        double sum = 0.0;
        for (auto i : x) {
            for (auto j : y) {
                const double v = d[i * n + j];
                if (link == Link::single) best = std::min(best, v);
                if (link == Link::complete) best = std::max(best, v);
                sum += v;
            }
        }
        if (link == Link::average) return sum / (static_cast<double>(x.size()) * static_cast<double>(y.size()));
        return best;
    };
    while (clusters.size() > 1) {
        // clusters are kept sorted by their smallest leaf.
        std::size_t ba = 0, bb = 1;
        double best = std::numeric_limits<double>::infinity();
        bool found = false;
        for (std::size_t x = 0; x < clusters.size(); ++x) {
            for (std::size_t y = x + 1; y < clusters.size(); ++y) {
                const double v = linkage(clusters[x], clusters[y]);
                if (!found || v < best) {
                    best = v;
                    ba = x;
                    bb = y;
                    found = true;
                }
            }
        }
        steps.push_back({clusters[ba].front(), clusters[bb].front(), best});
        clusters[ba].insert(clusters[ba].end(), clusters[bb].begin(), clusters[bb].end());
        std::sort(clusters[ba].begin(), clusters[ba].end());
        clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(bb));
        if (partitions) {
            std::vector<std::size_t> labels(n);
            for (std::size_t c = 0; c < clusters.size(); ++c) {
                for (auto i : clusters[c]) labels[i] = c;
            }
            partitions->push_back(labels);
        }
    }
    return steps;
}

/// Cut labels with K clusters from the oracle's partition history, labelled
/// by smallest member (clusters are already ordered that way).
inline std::vector<std::size_t> cut(const std::vector<std::vector<std::size_t>>& partitions, std::size_t n,
                                    std::size_t k) {
    return partitions[n - k];
}

/// Max over all injective label maps of the matched count, by enumerating
/// permutations of the larger label set.
inline double classification_rate(const std::vector<std::size_t>& pred, std::size_t kp,
                                  const std::vector<std::size_t>& truth, std::size_t kt) {
    const std::size_t m = std::max(kp, kt);
    std::vector<std::size_t> perm(m);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::size_t best = 0;
    do {
        std::size_t hit = 0;
        for (std::size_t i = 0; i < pred.size(); ++i) hit += perm[pred[i]] == truth[i];
        best = std::max(best, hit);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return static_cast<double>(best) / static_cast<double>(pred.size());
}

/// Direct double loop over pairs and columns.
inline std::vector<double> ensemble_dissimilarity(const std::vector<std::vector<std::size_t>>& columns,
                                                  std::size_t n) {
    std::vector<double> out(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            std::size_t sep = 0;
            for (const auto& col : columns) sep += col[i] != col[j] ? 1 : 0;
            out[i * n + j] = static_cast<double>(sep) / static_cast<double>(columns.size());
        }
    }
    return out;
}

/// P(N = k) by enumerating all J^J equally likely samples.
inline std::vector<double> distinct_pmf_enumerated(std::size_t dim) {
    std::vector<std::size_t> digits(dim, 0);
    std::vector<std::uint64_t> counts(dim + 1, 0);
    std::uint64_t total = 0;
    while (true) {
        std::vector<char> seen(dim, 0);
        std::size_t distinct = 0;
        for (auto d : digits) {
            if (!seen[d]) {
                seen[d] = 1;
                ++distinct;
            }
        }
        ++counts[distinct];
        ++total;
        std::size_t p = 0;
        while (p < dim && ++digits[p] == dim) digits[p++] = 0;
        if (p == dim) break;
    }
    std::vector<double> pmf(dim);
    for (std::size_t k = 1; k <= dim; ++k) pmf[k - 1] = static_cast<double>(counts[k]) / static_cast<double>(total);
    return pmf;
}

/// Random symmetric zero-diagonal matrix. With `integral`, entries are
/// integers in [0, levels) so average-linkage sums are exact and ties are
/// common; otherwise uniform reals in [0, 1).
inline std::vector<double> random_dissimilarity(std::size_t n, catclust::Rng& rng, bool integral,
                                                std::size_t levels = 8) {
    std::vector<double> d(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = integral ? static_cast<double>(rng.below(levels)) : rng.uniform01();
            d[i * n + j] = d[j * n + i] = v;
        }
    }
    return d;
}

}  // namespace oracle
