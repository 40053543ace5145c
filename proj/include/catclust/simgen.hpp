#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "catclust/categorical.hpp"
#include "catclust/hclust.hpp"

namespace catclust {

/// Low-dimensional simulation design: K clusters of the given sizes in J
/// categorical columns.
struct Design {
    std::string name;
    std::vector<std::size_t> sizes;
    std::size_t dims = 20;

    std::size_t clusters() const noexcept { return sizes.size(); }
    std::size_t points() const noexcept;
};

/// The eleven low-dimensional designs D1..D11. Lookup accepts "D1" or "d1".
const std::vector<Design>& table_designs();
const Design& table_design(std::string_view name);

struct Dataset {
    CategoricalMatrix data;
    Clustering truth;
};

/// Truth labels for consecutive blocks of the given sizes.
Clustering block_truth(std::span<const std::size_t> sizes);

/// For every column j: a_j ~ DUnif[3, 20]; for every cluster k,
/// p_jk ~ Unif(0.2, 0.8); the cluster's entries are IID Bin(a_j, p_jk).
/// Codes are the binomial values, so column j has cardinality a_j + 1.
/// Column j uses substream (seed, j).
Dataset gen_lowdim(const Design& design, std::uint64_t seed);

/// Nucleotide-style high-dimensional design. Symbols are coded
/// A=0, T=1, C=2, G=3.
struct SeqDesign {
    std::array<double, 6> block_probs{0.15, 0.15, 0.15, 0.15, 0.15, 0.25};
    std::size_t dims = 50000;
    std::vector<std::size_t> sizes{10, 10, 10, 10, 10};
    std::array<double, 4> signal_dist{1.0 / 6, 1.0 / 6, 1.0 / 3, 1.0 / 3};

    /// Five signal blocks of 0.15 and a noise block of 0.25.
    static SeqDesign moderate_noise(std::vector<std::size_t> sizes, std::size_t dims = 50000);
    /// Five signal blocks of 0.1 and a noise block of 0.5.
    static SeqDesign heavy_noise(std::vector<std::size_t> sizes, std::size_t dims = 50000);
};

inline constexpr std::array<std::string_view, 4> kNucleotides{"A", "T", "C", "G"};

struct SeqDataset : Dataset {
    std::array<std::size_t, 6> block_widths{};
};

/// (q_1..q_6) ~ Multinomial(J, block_probs). Columns of block r < 5 follow
/// signal_dist for cluster r and are uniform for the other clusters; the
/// last block is uniform noise for everyone.
SeqDataset gen_highdim(const SeqDesign& design, std::uint64_t seed);

/// n x J entries IID uniform over `symbols` codes.
CategoricalMatrix gen_noise(std::size_t rows, std::size_t dims, std::size_t symbols, std::uint64_t seed);

}  // namespace catclust
