#include "catclust/dissimilarity.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "catclust/error.hpp"
#include "catclust/parallel.hpp"

namespace catclust {

DissimilarityMatrix::DissimilarityMatrix(std::size_t n, std::vector<double> values, DissimilarityKind kind)
    : n_(n), values_(std::move(values)), kind_(kind) {
    if (values_.size() != n_ * n_) throw std::invalid_argument("dissimilarity values must have n*n entries");
    for (std::size_t i = 0; i < n_; ++i) {
        if (values_[i * n_ + i] != 0.0) throw std::invalid_argument("dissimilarity diagonal must be zero");
        for (std::size_t j = i + 1; j < n_; ++j) {
            const double v = values_[i * n_ + j];
            if (std::isnan(v) || v < 0.0)
                throw std::invalid_argument("dissimilarity entries must be nonnegative numbers");
            if (v != values_[j * n_ + i]) throw std::invalid_argument("dissimilarity matrix must be symmetric");
            if (kind_ == DissimilarityKind::raw_count && v != std::floor(v))
                throw std::invalid_argument("raw-count dissimilarity must be integral");
            if (kind_ != DissimilarityKind::raw_count && v > 1.0)
                throw std::invalid_argument("normalized dissimilarity must lie in [0, 1]");
        }
    }
}

DissimilarityMatrix DissimilarityMatrix::subset(std::span<const std::size_t> index) const {
    const std::size_t m = index.size();
    std::vector<double> out(m * m);
    for (std::size_t a = 0; a < m; ++a) {
        if (index[a] >= n_) throw std::invalid_argument("subset index out of range");
        for (std::size_t b = 0; b < m; ++b) out[a * m + b] = (*this)(index[a], index[b]);
    }
    return DissimilarityMatrix(m, std::move(out), kind_);
}

std::size_t mismatches(std::span<const Code> a, std::span<const Code> b, std::size_t& compared) noexcept {
    const std::size_t len = a.size();
    std::size_t diff = 0;
    std::size_t valid = 0;
    for (std::size_t j = 0; j < len; ++j) {
        const bool ok = (a[j] != kGap) & (b[j] != kGap);
        valid += ok;
        diff += ok & (a[j] != b[j]);
    }
    compared = valid;
    return diff;
}

namespace {

// Gap-free kernel; kept separate so the compiler can vectorize the plain
// comparison loop.
std::size_t dense_mismatches(const Code* a, const Code* b, std::size_t len) noexcept {
    std::size_t diff = 0;
    for (std::size_t j = 0; j < len; ++j) diff += (a[j] != b[j]);
    return diff;
}

}  // namespace

DissimilarityMatrix hamming(const CategoricalMatrix& x, bool normalized) {
    const std::size_t n = x.rows();
    const std::size_t len = x.cols();
    if (n < 2) throw std::invalid_argument("hamming needs at least two rows");

    std::vector<std::size_t> counts(n * n, 0);
    std::vector<std::size_t> compared(n * n, len);
    const bool gaps = x.has_gaps();
    const Code* base = x.codes().data();

    parallel_for(n, [&](std::size_t i) {
        const Code* ri = base + i * len;
        for (std::size_t k = i + 1; k < n; ++k) {
            const Code* rk = base + k * len;
            if (gaps) {
                std::size_t cmp = 0;
                counts[i * n + k] = mismatches({ri, len}, {rk, len}, cmp);
                compared[i * n + k] = cmp;
            } else {
                counts[i * n + k] = dense_mismatches(ri, rk, len);
            }
        }
    });

    std::vector<double> values(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = i + 1; k < n; ++k) {
            const std::size_t cmp = compared[i * n + k];
            if (cmp == 0)
                throw DataError("rows " + std::to_string(i) + " and " + std::to_string(k) +
                                " share no comparable (non-gap) position");
            const double v = normalized ? static_cast<double>(counts[i * n + k]) / static_cast<double>(cmp)
                                        : static_cast<double>(counts[i * n + k]);
            values[i * n + k] = v;
            values[k * n + i] = v;
        }
    }
    return DissimilarityMatrix(n, std::move(values),
                               normalized ? DissimilarityKind::normalized : DissimilarityKind::raw_count);
}

DissimilarityMatrix membership_hamming(const CategoricalMatrix& x) {
    const MembershipMatrix m = membership(x);
    const std::size_t n = m.rows();
    if (n < 2) throw std::invalid_argument("hamming needs at least two rows");
    std::vector<double> values(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        auto ri = m.row(i);
        for (std::size_t k = i + 1; k < n; ++k) {
            auto rk = m.row(k);
            std::size_t d = 0;
            for (std::size_t c = 0; c < m.width(); ++c) d += ri[c] != rk[c];
            values[i * n + k] = values[k * n + i] = static_cast<double>(d);
        }
    }
    return DissimilarityMatrix(n, std::move(values), DissimilarityKind::raw_count);
}

}  // namespace catclust
