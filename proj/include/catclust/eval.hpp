#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "catclust/hclust.hpp"

namespace catclust {

/// counts(p, t) = number of points with predicted label p and true label t.
class ConfusionMatrix {
public:
    ConfusionMatrix(const Clustering& predicted, const Clustering& truth);

    std::size_t predicted_clusters() const noexcept { return rows_; }
    std::size_t true_clusters() const noexcept { return cols_; }
    std::size_t operator()(std::size_t p, std::size_t t) const noexcept { return counts_[p * cols_ + t]; }
    std::size_t total() const noexcept { return total_; }

private:
    std::size_t rows_;
    std::size_t cols_;
    std::size_t total_;
    std::vector<std::size_t> counts_;
};

/// Minimum-cost perfect matching on a square cost matrix (row-major,
/// size x size) by the Hungarian method with potentials, O(size^3).
/// Returns assignment[row] = column.
std::vector<std::size_t> solve_assignment(std::span<const std::int64_t> cost, std::size_t size);

/// Fraction of points on the diagonal under the best one-to-one matching
/// of predicted to true labels. The confusion matrix is zero-padded to
/// square when the cluster counts differ. Throws std::invalid_argument on
/// a length mismatch.
double classification_rate(const Clustering& predicted, const Clustering& truth);

struct Summary {
    double mean = 0.0;
    double sd = 0.0;  // sample SD, n-1 denominator; 0 for a single value
};

Summary replicate_summary(std::span<const double> values);

/// Methods as rows and datasets as columns; cells are "mean(sd)" to two
/// decimals, tab separated.
struct ResultsTable {
    std::vector<std::string> columns;
    std::vector<std::string> methods;
    std::vector<std::vector<Summary>> cells;  // cells[method][column]
};

void write_results_table(std::ostream& out, const ResultsTable& table);
std::string format_cell(const Summary& s);

}  // namespace catclust
