#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace catclust {

using Code = std::uint16_t;

/// Reserved code marking an alignment placeholder.
inline constexpr Code kGap = std::numeric_limits<Code>::max();

/// n x J table of nominal codes, stored row-major. Column j uses codes in
/// [0, cardinality(j)); gap cells hold kGap.
class CategoricalMatrix {
public:
    CategoricalMatrix() = default;

    /// Validates shape and code ranges; throws std::invalid_argument.
    CategoricalMatrix(std::size_t rows, std::size_t cols, std::vector<Code> codes,
                      std::vector<std::size_t> cardinalities);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    Code at(std::size_t i, std::size_t j) const noexcept { return codes_[i * cols_ + j]; }
    bool is_gap(std::size_t i, std::size_t j) const noexcept { return at(i, j) == kGap; }
    std::span<const Code> row(std::size_t i) const noexcept { return {codes_.data() + i * cols_, cols_}; }
    std::span<const Code> codes() const noexcept { return codes_; }

    std::size_t cardinality(std::size_t j) const noexcept { return cardinalities_[j]; }
    std::span<const std::size_t> cardinalities() const noexcept { return cardinalities_; }

    bool has_gaps() const noexcept { return gap_count_ > 0; }

    /// Column-restricted copy, columns in the given order.
    CategoricalMatrix select_columns(std::span<const std::size_t> columns) const;
    /// Row-restricted copy, rows in the given order.
    CategoricalMatrix select_rows(std::span<const std::size_t> rows) const;

    friend bool operator==(const CategoricalMatrix&, const CategoricalMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Code> codes_;
    std::vector<std::size_t> cardinalities_;
    std::size_t gap_count_ = 0;
};

/// Categorical matrix plus the per-column symbol tables needed to map codes
/// back to the original strings.
struct EncodedTable {
    CategoricalMatrix matrix;
    std::vector<std::vector<std::string>> alphabets;  // alphabets[j][code]
    std::optional<std::string> gap_symbol;
};

/// Assigns per-column codes in order of first appearance. Cells equal to
/// `gap_symbol` become kGap and do not count toward the cardinality.
/// Throws DataError for empty or ragged tables and all-gap columns.
EncodedTable encode(const std::vector<std::vector<std::string>>& table,
                    const std::optional<std::string>& gap_symbol = std::nullopt);

/// Inverse of encode.
std::vector<std::vector<std::string>> decode(const EncodedTable& encoded);

/// Per-column one-hot encoding. Row i of block j has a single 1 at x_ij.
class MembershipMatrix {
public:
    std::size_t rows() const noexcept { return rows_; }
    std::size_t width() const noexcept { return width_; }
    std::size_t blocks() const noexcept { return offsets_.size() - 1; }
    std::size_t block_offset(std::size_t j) const noexcept { return offsets_[j]; }
    std::size_t block_width(std::size_t j) const noexcept { return offsets_[j + 1] - offsets_[j]; }

    std::uint8_t at(std::size_t i, std::size_t column) const noexcept { return values_[i * width_ + column]; }
    std::span<const std::uint8_t> row(std::size_t i) const noexcept { return {values_.data() + i * width_, width_}; }

private:
    friend MembershipMatrix membership(const CategoricalMatrix&);
    std::size_t rows_ = 0;
    std::size_t width_ = 0;
    std::vector<std::size_t> offsets_;
    std::vector<std::uint8_t> values_;
};

/// Throws std::invalid_argument when the matrix contains gaps.
MembershipMatrix membership(const CategoricalMatrix& x);

/// Maps each real-valued column to three levels using its 33rd and 66th
/// nearest-rank percentiles (ties go to the lower level). `table` is n rows
/// of J values. Throws DataError on ragged input or a constant column.
CategoricalMatrix trichotomize(const std::vector<std::vector<double>>& table);

}  // namespace catclust
