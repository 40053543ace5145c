#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "catclust/categorical.hpp"

namespace catclust {

enum class DissimilarityKind { raw_count, normalized, ensemble };

/// Symmetric n x n matrix of nonnegative values with zero diagonal.
class DissimilarityMatrix {
public:
    DissimilarityMatrix() = default;

    /// `values` is row-major n*n. Validates symmetry, zero diagonal,
    /// nonnegativity and the range implied by `kind` (raw counts must be
    /// integral; normalized and ensemble values must lie in [0, 1]).
    /// Throws std::invalid_argument.
    DissimilarityMatrix(std::size_t n, std::vector<double> values, DissimilarityKind kind);

    std::size_t size() const noexcept { return n_; }
    DissimilarityKind kind() const noexcept { return kind_; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return values_[i * n_ + j]; }
    std::span<const double> row(std::size_t i) const noexcept { return {values_.data() + i * n_, n_}; }
    std::span<const double> values() const noexcept { return values_; }

    /// Restriction to the given rows/columns, in the given order.
    DissimilarityMatrix subset(std::span<const std::size_t> index) const;

private:
    std::size_t n_ = 0;
    std::vector<double> values_;
    DissimilarityKind kind_ = DissimilarityKind::raw_count;
};

/// Attribute-level mismatch count between two rows. Positions where either
/// side is a gap are skipped; `compared` receives the number of positions
/// actually compared.
std::size_t mismatches(std::span<const Code> a, std::span<const Code> b, std::size_t& compared) noexcept;

/// Pairwise Hamming dissimilarity over attributes. With `normalized`, each
/// count is divided by the number of positions compared for that pair
/// (gap-aware, pairwise complete). Raw counts skip gap positions too.
/// Throws DataError when a pair has no comparable position and
/// std::invalid_argument when n < 2.
DissimilarityMatrix hamming(const CategoricalMatrix& x, bool normalized = false);

/// Hamming distance over the one-hot membership rows. Equals twice the
/// attribute-level count; provided for inspection.
DissimilarityMatrix membership_hamming(const CategoricalMatrix& x);

}  // namespace catclust
