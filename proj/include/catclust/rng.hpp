#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace catclust {

/// Mixes a 64-bit value with the splitmix64 finalizer.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Derives a child seed from a parent seed and a key. Pure function of its
/// arguments, so substreams do not depend on the order they are created in.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t key) noexcept {
    return splitmix64(seed ^ splitmix64(key ^ 0xD1B54A32D192ED03ULL));
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> keys) noexcept {
    for (auto k : keys) seed = derive_seed(seed, k);
    return seed;
}

/// Seedable, splittable xoshiro256** stream.
///
/// All distribution helpers are implemented here rather than through
/// <random> distributions so that draws are identical across standard
/// library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) noexcept;

    std::uint64_t seed() const noexcept { return seed_; }

    /// Independent stream keyed by `key`; does not advance this stream.
    Rng split(std::uint64_t key) const noexcept { return Rng(derive_seed(seed_, key)); }

    std::uint64_t next() noexcept;

    /// Uniform on [0, bound). bound must be positive.
    std::uint64_t below(std::uint64_t bound) noexcept;

    /// Uniform on the closed range [lo, hi].
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) noexcept;

    /// Uniform on [0, 1) with 53 bits of resolution.
    double uniform01() noexcept;

    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform01(); }

    bool bernoulli(double p) noexcept { return uniform01() < p; }

    /// Bin(trials, p) by summing Bernoulli draws; intended for small trial counts.
    int binomial(int trials, double p) noexcept;

    /// Index drawn from the (not necessarily normalized) weights.
    std::size_t categorical(std::span<const double> weights) noexcept;

    /// `count` distinct values from [0, n) in draw order (partial Fisher-Yates).
    std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t count);

    template <class T>
    void shuffle(std::vector<T>& v) noexcept {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::uint64_t seed_;
    std::uint64_t s_[4];
};

}  // namespace catclust
