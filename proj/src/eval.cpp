#include "catclust/eval.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace catclust {

ConfusionMatrix::ConfusionMatrix(const Clustering& predicted, const Clustering& truth)
    : rows_(predicted.clusters()), cols_(truth.clusters()), total_(predicted.size()), counts_(rows_ * cols_, 0) {
    if (predicted.size() != truth.size()) throw std::invalid_argument("clusterings have different lengths");
    for (std::size_t i = 0; i < predicted.size(); ++i) ++counts_[predicted[i] * cols_ + truth[i]];
}

std::vector<std::size_t> solve_assignment(std::span<const std::int64_t> cost, std::size_t size) {
    if (cost.size() != size * size) throw std::invalid_argument("cost matrix must be size x size");
    if (size == 0) return {};
    // Shortest augmenting path formulation with row/column potentials; rows
    // and columns are 1-based internally, index 0 is the virtual source.
    constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;
    const std::size_t m = size;
    std::vector<std::int64_t> u(m + 1, 0), v(m + 1, 0), minv(m + 1);
    std::vector<std::size_t> match(m + 1, 0), way(m + 1, 0);
    std::vector<char> used(m + 1);
    for (std::size_t row = 1; row <= m; ++row) {
        match[0] = row;
        std::size_t col0 = 0;
        std::fill(minv.begin(), minv.end(), kInf);
        std::fill(used.begin(), used.end(), 0);
        do {
            used[col0] = 1;
            const std::size_t r0 = match[col0];
            std::int64_t delta = kInf;
            std::size_t col1 = 0;
            for (std::size_t c = 1; c <= m; ++c) {
                if (used[c]) continue;
                const std::int64_t cur = cost[(r0 - 1) * m + (c - 1)] - u[r0] - v[c];
                if (cur < minv[c]) {
                    minv[c] = cur;
                    way[c] = col0;
                }
                if (minv[c] < delta) {
                    delta = minv[c];
                    col1 = c;
                }
            }
            for (std::size_t c = 0; c <= m; ++c) {
                if (used[c]) {
                    u[match[c]] += delta;
                    v[c] -= delta;
                } else {
                    minv[c] -= delta;
                }
            }
            col0 = col1;
        } while (match[col0] != 0);
        do {
            const std::size_t col1 = way[col0];
            match[col0] = match[col1];
            col0 = col1;
        } while (col0 != 0);
    }
    std::vector<std::size_t> assignment(m);
    for (std::size_t c = 1; c <= m; ++c) assignment[match[c] - 1] = c - 1;
    return assignment;
}

double classification_rate(const Clustering& predicted, const Clustering& truth) {
    const ConfusionMatrix confusion(predicted, truth);
    if (confusion.total() == 0) throw std::invalid_argument("classification rate of an empty clustering");
    const std::size_t size = std::max(confusion.predicted_clusters(), confusion.true_clusters());
    std::vector<std::int64_t> cost(size * size, 0);
    for (std::size_t p = 0; p < confusion.predicted_clusters(); ++p) {
        for (std::size_t t = 0; t < confusion.true_clusters(); ++t) {
            cost[p * size + t] = -static_cast<std::int64_t>(confusion(p, t));
        }
    }
    const auto assignment = solve_assignment(cost, size);
    std::int64_t matched = 0;
    for (std::size_t p = 0; p < size; ++p) matched -= cost[p * size + assignment[p]];
    return static_cast<double>(matched) / static_cast<double>(confusion.total());
}

Summary replicate_summary(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("replicate_summary of an empty list");
    Summary s;
    s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - s.mean) * (v - s.mean);
        s.sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
    }
    return s;
}

std::string format_cell(const Summary& s) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f(%.2f)", s.mean, s.sd);
    return buf;
}

void write_results_table(std::ostream& out, const ResultsTable& table) {
    if (table.cells.size() != table.methods.size()) throw std::invalid_argument("one row of cells per method");
    out << "method";
    for (const auto& c : table.columns) out << '\t' << c;
    out << '\n';
    for (std::size_t m = 0; m < table.methods.size(); ++m) {
        if (table.cells[m].size() != table.columns.size()) throw std::invalid_argument("one cell per column");
        out << table.methods[m];
        for (const auto& cell : table.cells[m]) out << '\t' << format_cell(cell);
        out << '\n';
    }
}

}  // namespace catclust
