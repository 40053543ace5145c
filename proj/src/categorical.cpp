#include "catclust/categorical.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "catclust/error.hpp"

namespace catclust {

CategoricalMatrix::CategoricalMatrix(std::size_t rows, std::size_t cols, std::vector<Code> codes,
                                     std::vector<std::size_t> cardinalities)
    : rows_(rows), cols_(cols), codes_(std::move(codes)), cardinalities_(std::move(cardinalities)) {
    if (rows_ == 0 || cols_ == 0) throw std::invalid_argument("categorical matrix must be at least 1x1");
    if (codes_.size() != rows_ * cols_) throw std::invalid_argument("code count does not match rows*cols");
    if (cardinalities_.size() != cols_) throw std::invalid_argument("one cardinality per column required");
    for (std::size_t j = 0; j < cols_; ++j) {
        if (cardinalities_[j] == 0 || cardinalities_[j] >= kGap)
            throw std::invalid_argument("column " + std::to_string(j) + " has invalid cardinality");
    }
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) {
            const Code c = codes_[i * cols_ + j];
            if (c == kGap) {
                ++gap_count_;
            } else if (c >= cardinalities_[j]) {
                throw std::invalid_argument("code " + std::to_string(c) + " out of range in column " +
                                            std::to_string(j));
            }
        }
    }
}

CategoricalMatrix CategoricalMatrix::select_columns(std::span<const std::size_t> columns) const {
    std::vector<Code> out;
    out.reserve(rows_ * columns.size());
    std::vector<std::size_t> card;
    card.reserve(columns.size());
    for (auto c : columns) {
        if (c >= cols_) throw std::invalid_argument("column index out of range");
        card.push_back(cardinalities_[c]);
    }
    for (std::size_t i = 0; i < rows_; ++i) {
        const Code* r = codes_.data() + i * cols_;
        for (auto c : columns) out.push_back(r[c]);
    }
    return CategoricalMatrix(rows_, columns.size(), std::move(out), std::move(card));
}

CategoricalMatrix CategoricalMatrix::select_rows(std::span<const std::size_t> rows) const {
    std::vector<Code> out;
    out.reserve(rows.size() * cols_);
    for (auto r : rows) {
        if (r >= rows_) throw std::invalid_argument("row index out of range");
        auto src = row(r);
        out.insert(out.end(), src.begin(), src.end());
    }
    return CategoricalMatrix(rows.size(), cols_, std::move(out), cardinalities_);
}

EncodedTable encode(const std::vector<std::vector<std::string>>& table,
                    const std::optional<std::string>& gap_symbol) {
    if (table.empty() || table.front().empty()) throw DataError("empty table");
    const std::size_t n = table.size();
    const std::size_t cols = table.front().size();
    for (std::size_t i = 0; i < n; ++i) {
        if (table[i].size() != cols)
            throw DataError("ragged table: row " + std::to_string(i) + " has " + std::to_string(table[i].size()) +
                            " fields, expected " + std::to_string(cols));
    }

    EncodedTable out;
    out.gap_symbol = gap_symbol;
    out.alphabets.resize(cols);
    std::vector<Code> codes(n * cols);
    std::vector<std::size_t> card(cols);
    for (std::size_t j = 0; j < cols; ++j) {
        std::unordered_map<std::string, Code> index;
        auto& alphabet = out.alphabets[j];
        for (std::size_t i = 0; i < n; ++i) {
            const std::string& cell = table[i][j];
            if (gap_symbol && cell == *gap_symbol) {
                codes[i * cols + j] = kGap;
                continue;
            }
            auto [it, inserted] = index.try_emplace(cell, static_cast<Code>(alphabet.size()));
            if (inserted) {
                if (alphabet.size() + 1 >= kGap) throw DataError("column " + std::to_string(j) + " has too many levels");
                alphabet.push_back(cell);
            }
            codes[i * cols + j] = it->second;
        }
        if (alphabet.empty()) throw DataError("column " + std::to_string(j) + " contains only gaps");
        card[j] = alphabet.size();
    }
    out.matrix = CategoricalMatrix(n, cols, std::move(codes), std::move(card));
    return out;
}

std::vector<std::vector<std::string>> decode(const EncodedTable& encoded) {
    const auto& x = encoded.matrix;
    std::vector<std::vector<std::string>> out(x.rows(), std::vector<std::string>(x.cols()));
    for (std::size_t i = 0; i < x.rows(); ++i) {
        for (std::size_t j = 0; j < x.cols(); ++j) {
            const Code c = x.at(i, j);
            if (c == kGap) {
                if (!encoded.gap_symbol) throw std::invalid_argument("gap cell without a gap symbol");
                out[i][j] = *encoded.gap_symbol;
            } else {
                out[i][j] = encoded.alphabets.at(j).at(c);
            }
        }
    }
    return out;
}

MembershipMatrix membership(const CategoricalMatrix& x) {
    if (x.has_gaps()) throw std::invalid_argument("membership matrix is undefined for gap cells");
    MembershipMatrix m;
    m.rows_ = x.rows();
    m.offsets_.resize(x.cols() + 1, 0);
    for (std::size_t j = 0; j < x.cols(); ++j) m.offsets_[j + 1] = m.offsets_[j] + x.cardinality(j);
    m.width_ = m.offsets_.back();
    m.values_.assign(m.rows_ * m.width_, 0);
    for (std::size_t i = 0; i < x.rows(); ++i) {
        for (std::size_t j = 0; j < x.cols(); ++j) m.values_[i * m.width_ + m.offsets_[j] + x.at(i, j)] = 1;
    }
    return m;
}

CategoricalMatrix trichotomize(const std::vector<std::vector<double>>& table) {
    if (table.empty() || table.front().empty()) throw DataError("empty table");
    const std::size_t n = table.size();
    const std::size_t cols = table.front().size();
    for (const auto& r : table) {
        if (r.size() != cols) throw DataError("ragged table");
    }

    // Nearest-rank percentile: the ceil(p*n)-th smallest value (1-based).
    auto nearest_rank = [n](const std::vector<double>& sorted, int percent) {
        auto rank = static_cast<std::size_t>((static_cast<std::size_t>(percent) * n + 99) / 100);
        rank = std::clamp<std::size_t>(rank, 1, n);
        return sorted[rank - 1];
    };

    std::vector<Code> codes(n * cols);
    std::vector<double> column(n);
    for (std::size_t j = 0; j < cols; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            column[i] = table[i][j];
            if (std::isnan(column[i])) throw DataError("NaN in column " + std::to_string(j));
        }
        std::vector<double> sorted = column;
        std::sort(sorted.begin(), sorted.end());
        if (sorted.front() == sorted.back()) throw DataError("column " + std::to_string(j) + " is constant");
        const double low = nearest_rank(sorted, 33);
        const double high = nearest_rank(sorted, 66);
        for (std::size_t i = 0; i < n; ++i) {
            codes[i * cols + j] = column[i] <= low ? 0 : (column[i] <= high ? 1 : 2);
        }
    }
    return CategoricalMatrix(n, cols, std::move(codes), std::vector<std::size_t>(cols, 3));
}

}  // namespace catclust
