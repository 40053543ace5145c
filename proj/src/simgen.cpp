#include "catclust/simgen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "catclust/rng.hpp"

namespace catclust {

std::size_t Design::points() const noexcept { return std::accumulate(sizes.begin(), sizes.end(), std::size_t{0}); }

const std::vector<Design>& table_designs() {
    static const std::vector<Design> designs{
        {"D1", {25, 25, 25, 25, 25}, 20}, {"D2", {9, 29, 29, 29, 29}, 20},   {"D3", {10, 10, 35, 35, 35}, 20},
        {"D4", {10, 10, 10, 47, 48}, 20}, {"D5", {10, 10, 10, 10, 85}, 20},  {"D6", {10, 25, 25, 25, 40}, 20},
        {"D7", {10, 10, 30, 30, 45}, 20}, {"D8", {10, 10, 10, 35, 60}, 20},  {"D9", {10, 10, 25, 40, 40}, 20},
        {"D10", {25, 25}, 20},            {"D11", {15, 35}, 20},
    };
    return designs;
}

const Design& table_design(std::string_view name) {
    std::string upper(name);
    std::transform(upper.begin(), upper.end(), upper.begin(), [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    for (const auto& d : table_designs()) {
        if (d.name == upper) return d;
    }
    throw std::invalid_argument("unknown design '" + std::string(name) + "'");
}

Clustering block_truth(std::span<const std::size_t> sizes) {
    std::vector<std::size_t> labels;
    for (std::size_t k = 0; k < sizes.size(); ++k) {
        if (sizes[k] == 0) throw std::invalid_argument("cluster sizes must be positive");
        labels.insert(labels.end(), sizes[k], k);
    }
    return Clustering(std::move(labels), sizes.size());
}

Dataset gen_lowdim(const Design& design, std::uint64_t seed) {
    if (design.sizes.empty() || design.dims == 0) throw std::invalid_argument("design needs clusters and columns");
    Clustering truth = block_truth(design.sizes);
    const std::size_t n = truth.size();
    const std::size_t dims = design.dims;

    std::vector<Code> codes(n * dims);
    std::vector<std::size_t> card(dims);
    const Rng root(seed);
    for (std::size_t j = 0; j < dims; ++j) {
        Rng rng = root.split(j);
        const int trials = static_cast<int>(rng.uniform_int(3, 20));
        card[j] = static_cast<std::size_t>(trials) + 1;
        std::size_t row = 0;
        for (std::size_t k = 0; k < design.sizes.size(); ++k) {
            const double p = rng.uniform(0.2, 0.8);
            for (std::size_t m = 0; m < design.sizes[k]; ++m, ++row) {
                codes[row * dims + j] = static_cast<Code>(rng.binomial(trials, p));
            }
        }
    }
    return {CategoricalMatrix(n, dims, std::move(codes), std::move(card)), std::move(truth)};
}

SeqDesign SeqDesign::moderate_noise(std::vector<std::size_t> sizes, std::size_t dims) {
    SeqDesign d;
    d.block_probs = {0.15, 0.15, 0.15, 0.15, 0.15, 0.25};
    d.sizes = std::move(sizes);
    d.dims = dims;
    return d;
}

SeqDesign SeqDesign::heavy_noise(std::vector<std::size_t> sizes, std::size_t dims) {
    SeqDesign d;
    d.block_probs = {0.1, 0.1, 0.1, 0.1, 0.1, 0.5};
    d.sizes = std::move(sizes);
    d.dims = dims;
    return d;
}

SeqDataset gen_highdim(const SeqDesign& design, std::uint64_t seed) {
    if (design.sizes.size() != 5) throw std::invalid_argument("high-dimensional design needs exactly 5 clusters");
    if (design.dims == 0) throw std::invalid_argument("dimension must be positive");
    const double total = std::accumulate(design.block_probs.begin(), design.block_probs.end(), 0.0);
    if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("block probabilities must sum to 1");

    const Rng root(seed);
    SeqDataset out;
    out.truth = block_truth(design.sizes);
    const std::size_t n = out.truth.size();
    const std::size_t dims = design.dims;

    // Multinomial widths via one categorical draw per column.
    Rng widths_rng = root.split(0);
    out.block_widths.fill(0);
    for (std::size_t j = 0; j < dims; ++j) ++out.block_widths[widths_rng.categorical(design.block_probs)];

    constexpr std::array<double, 4> uniform{0.25, 0.25, 0.25, 0.25};
    std::vector<Code> codes(n * dims);
    std::size_t column = 0;
    for (std::size_t block = 0; block < 6; ++block) {
        for (std::size_t w = 0; w < out.block_widths[block]; ++w, ++column) {
            Rng rng = root.split(1 + column);
            for (std::size_t i = 0; i < n; ++i) {
                const bool signal = block < 5 && out.truth[i] == block;
                codes[i * dims + column] =
                    static_cast<Code>(signal ? rng.categorical(design.signal_dist) : rng.categorical(uniform));
            }
        }
    }
    out.data = CategoricalMatrix(n, dims, std::move(codes), std::vector<std::size_t>(dims, 4));
    return out;
}

CategoricalMatrix gen_noise(std::size_t rows, std::size_t dims, std::size_t symbols, std::uint64_t seed) {
    if (symbols < 2) throw std::invalid_argument("noise alphabet needs at least two symbols");
    if (rows == 0 || dims == 0) throw std::invalid_argument("noise matrix must be nonempty");
    Rng rng(seed);
    std::vector<Code> codes(rows * dims);
    for (auto& c : codes) c = static_cast<Code>(rng.below(symbols));
    return CategoricalMatrix(rows, dims, std::move(codes), std::vector<std::size_t>(dims, symbols));
}

}  // namespace catclust
