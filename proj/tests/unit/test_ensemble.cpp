#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "catclust/ensemble.hpp"
#include "catclust/eval.hpp"
#include "catclust/parallel.hpp"
#include "catclust/rng.hpp"
#include "oracles.hpp"

using namespace catclust;

namespace {

Clustering random_column(Rng& rng, std::size_t n, std::size_t k) {
    // every label used at least once: assign first k points deterministically
    std::vector<std::size_t> labels(n);
    for (std::size_t i = 0; i < n; ++i) labels[i] = i < k ? i : rng.below(k);
    rng.shuffle(labels);
    return Clustering(labels, k);
}

/// Two blocks of identical rows: within-block distance 0, across J.
CategoricalMatrix separated_blocks(std::size_t a, std::size_t b, std::size_t dims) {
    std::vector<Code> codes;
    for (std::size_t i = 0; i < a + b; ++i) codes.insert(codes.end(), dims, static_cast<Code>(i < a ? 0 : 1));
    return CategoricalMatrix(a + b, dims, codes, std::vector<std::size_t>(dims, 2));
}

DissimilarityMatrix three_points() {
    return DissimilarityMatrix(3, {0, 1, 2, 1, 0, 3, 2, 3, 0}, DissimilarityKind::raw_count);
}

}  // namespace

TEST_SUITE("draw_sizes") {
    TEST_CASE("default range for n = 100 is [2, 10]") {
        EnsembleConfig cfg;
        cfg.ensemble_size = 500;
        const auto sizes = draw_sizes(cfg, 100);
        CHECK(sizes.size() == 500);
        bool saw_low = false, saw_high = false;
        for (auto k : sizes) {
            CHECK(k >= 2);
            CHECK(k <= 10);
            saw_low = saw_low || k == 2;
            saw_high = saw_high || k == 10;
        }
        CHECK(saw_low);
        CHECK(saw_high);
    }

    TEST_CASE("degenerate range") {
        EnsembleConfig cfg;
        cfg.k_min = 3;
        cfg.k_max = 3;
        cfg.ensemble_size = 20;
        for (auto k : draw_sizes(cfg, 50)) CHECK(k == 3);
    }

    TEST_CASE("same seed, same sequence") {
        EnsembleConfig cfg;
        cfg.seed = 42;
        CHECK(draw_sizes(cfg, 125) == draw_sizes(cfg, 125));
        EnsembleConfig other = cfg;
        other.seed = 43;
        CHECK(draw_sizes(cfg, 125) != draw_sizes(other, 125));
    }

    TEST_CASE("empty range") {
        EnsembleConfig cfg;
        CHECK_THROWS_AS(draw_sizes(cfg, 1), std::invalid_argument);
        cfg.k_min = 5;
        cfg.k_max = 4;
        CHECK_THROWS_AS(draw_sizes(cfg, 100), std::invalid_argument);
    }

    TEST_CASE("distinct sizes") {
        EnsembleConfig cfg;
        cfg.distinct_sizes = true;
        cfg.ensemble_size = 9;
        auto sizes = draw_sizes(cfg, 100);
        std::sort(sizes.begin(), sizes.end());
        for (std::size_t b = 0; b < 9; ++b) CHECK(sizes[b] == b + 2);
        cfg.ensemble_size = 10;
        CHECK_THROWS_AS(draw_sizes(cfg, 100), std::invalid_argument);
    }
}

TEST_SUITE("build_incidence") {
    TEST_CASE("K_b = n gives singletons, K_b = 1 gives one cluster") {
        const auto d = three_points();
        const std::vector<std::size_t> all{3, 1};
        auto w = build_incidence(d, all, Linkage::single, 0.0);
        CHECK(w.columns() == 2);
        CHECK(w.column(0).clusters() == 3);
        for (std::size_t i = 0; i < 3; ++i) CHECK(w.at(i, 1) == 0);
    }

    TEST_CASE("worked single-linkage example at K = 2") {
        const std::vector<std::size_t> sizes{2};
        auto w = build_incidence(three_points(), sizes, Linkage::single, 0.0);
        CHECK(w.at(0, 0) == 0);
        CHECK(w.at(1, 0) == 0);
        CHECK(w.at(2, 0) == 1);
        CHECK(w.sizes() == std::vector<std::size_t>{2});
    }

    TEST_CASE("size out of range") {
        const std::vector<std::size_t> sizes{4};
        CHECK_THROWS_AS(build_incidence(three_points(), sizes, Linkage::single, 0.0), std::invalid_argument);
    }

    TEST_CASE("same output for any worker count") {
        Rng rng(4);
        const std::size_t n = 30;
        DissimilarityMatrix d(n, oracle::random_dissimilarity(n, rng, true, 20), DissimilarityKind::raw_count);
        EnsembleConfig cfg;
        const auto sizes = draw_sizes(cfg, n);
        set_thread_count(3);
        const auto a = ensemble_dissimilarity(build_incidence(d, sizes, Linkage::average, 0.0));
        set_thread_count(1);
        const auto b = ensemble_dissimilarity(build_incidence(d, sizes, Linkage::average, 0.0));
        CHECK(std::vector<double>(a.values().begin(), a.values().end()) ==
              std::vector<double>(b.values().begin(), b.values().end()));
    }
}

TEST_SUITE("ensemble_dissimilarity") {
    TEST_CASE("co-clustered everywhere, separated everywhere, half") {
        IncidenceMatrix w({Clustering({0, 0, 1}, 2), Clustering({0, 1, 1}, 2)});
        auto d = ensemble_dissimilarity(w);
        CHECK(d.kind() == DissimilarityKind::ensemble);
        CHECK(d(0, 2) == 1.0);  // separated in both
        CHECK(d(0, 1) == 0.5);  // together in the first only
        CHECK(d(1, 2) == 0.5);
        IncidenceMatrix same({Clustering({0, 0, 1}, 2), Clustering({1, 1, 0}, 2)});
        CHECK(ensemble_dissimilarity(same)(0, 1) == 0.0);
    }

    TEST_CASE("matches a naive double loop on random incidence matrices") {
        Rng rng(6);
        for (int trial = 0; trial < 50; ++trial) {
            const std::size_t n = 6, b = 4;
            std::vector<Clustering> cols;
            std::vector<std::vector<std::size_t>> raw;
            for (std::size_t c = 0; c < b; ++c) {
                cols.push_back(random_column(rng, n, 1 + rng.below(n)));
                raw.emplace_back(cols.back().labels().begin(), cols.back().labels().end());
            }
            auto d = ensemble_dissimilarity(IncidenceMatrix(cols));
            const auto expected = oracle::ensemble_dissimilarity(raw, n);
            CHECK(std::vector<double>(d.values().begin(), d.values().end()) == expected);
        }
    }

    TEST_CASE("values on the 1/B grid and invariant to within-column relabeling") {
        Rng rng(8);
        for (int trial = 0; trial < 30; ++trial) {
            const std::size_t n = 3 + rng.below(10), b = 1 + rng.below(12);
            std::vector<Clustering> cols, relabeled;
            for (std::size_t c = 0; c < b; ++c) {
                const std::size_t k = 1 + rng.below(n);
                cols.push_back(random_column(rng, n, k));
                std::vector<std::size_t> perm(k);
                std::iota(perm.begin(), perm.end(), std::size_t{0});
                rng.shuffle(perm);
                std::vector<std::size_t> labels;
                for (auto l : cols.back().labels()) labels.push_back(perm[l]);
                relabeled.emplace_back(labels, k);
            }
            auto d = ensemble_dissimilarity(IncidenceMatrix(cols));
            auto e = ensemble_dissimilarity(IncidenceMatrix(relabeled));
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) {
                    const double scaled = d(i, j) * static_cast<double>(b);
                    CHECK(std::abs(scaled - std::round(scaled)) < 1e-9);
                    CHECK(d(i, j) == e(i, j));
                }
            }
        }
    }

    TEST_CASE("concentration around the co-membership rate") {
        // Column b separates each pair independently with probability p;
        // Chebyshev with Var <= 1/(4B) bounds the tail fraction.
        Rng rng(10);
        const double eps = 0.2;
        for (std::size_t b : {25u, 100u}) {
            const std::size_t pairs = 20000;
            const double p = 0.3;
            std::size_t tail = 0;
            for (std::size_t q = 0; q < pairs; ++q) {
                std::size_t sep = 0;
                for (std::size_t c = 0; c < b; ++c) sep += rng.bernoulli(p);
                if (std::abs(static_cast<double>(sep) / static_cast<double>(b) - p) > eps) ++tail;
            }
            CHECK(static_cast<double>(tail) / pairs <= 1.0 / (4 * eps * eps * static_cast<double>(b)));
        }
    }
}

TEST_SUITE("ensemble_cluster") {
    TEST_CASE("B = 1 with K_1 = K_final reproduces the base clustering") {
        Rng rng(12);
        const std::size_t n = 20;
        DissimilarityMatrix d(n, oracle::random_dissimilarity(n, rng, true, 30), DissimilarityKind::raw_count);
        for (auto l : {Linkage::single, Linkage::average, Linkage::complete}) {
            EnsembleConfig cfg;
            cfg.ensemble_size = 1;
            cfg.k_min = cfg.k_max = 4;
            cfg.linkage = l;
            const auto result = ensemble_cluster(d, cfg, 4);
            const auto base = cut(agglomerate(d, l), 4);
            CHECK(classification_rate(result.clustering, base) == 1.0);
        }
    }

    TEST_CASE("separated blocks are recovered for every linkage and B") {
        // With K_b = 2 every base clustering is the block split, so d_B is
        // exactly 0 within and 1 across blocks.
        const auto x = separated_blocks(7, 5, 6);
        Clustering truth(std::vector<std::size_t>{0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 1, 1}, 2);
        for (auto l : {Linkage::single, Linkage::average, Linkage::complete}) {
            for (std::size_t b : {1u, 5u, 50u}) {
                EnsembleConfig cfg;
                cfg.ensemble_size = b;
                cfg.linkage = l;
                cfg.seed = b;
                cfg.k_min = cfg.k_max = 2;
                const auto d = ensemble_dissimilarity(
                    build_incidence(hamming(x), draw_sizes(cfg, x.rows()), l, 0.0));
                for (std::size_t i = 0; i < x.rows(); ++i) {
                    for (std::size_t j = 0; j < x.rows(); ++j) CHECK(d(i, j) == (truth[i] == truth[j] ? 0.0 : 1.0));
                }
                CHECK(ensemble_cluster(x, cfg, 2).clustering == truth);
            }
        }
    }

    TEST_CASE("separated blocks with the default size range") {
        // Across-block pairs are separated by every base clustering; with
        // enough draws some K_b = 2 column keeps each block together.
        const auto x = separated_blocks(7, 5, 6);
        Clustering truth(std::vector<std::size_t>{0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 1, 1}, 2);
        for (auto l : {Linkage::single, Linkage::average, Linkage::complete}) {
            EnsembleConfig cfg;
            cfg.ensemble_size = 50;
            cfg.linkage = l;
            const auto result = ensemble_cluster(x, cfg, 2);
            CHECK(result.clustering == truth);
        }
    }

    TEST_CASE("reproducible from the seed") {
        Rng rng(13);
        const std::size_t n = 40;
        DissimilarityMatrix d(n, oracle::random_dissimilarity(n, rng, true, 50), DissimilarityKind::raw_count);
        EnsembleConfig cfg;
        cfg.seed = 99;
        const auto a = ensemble_cluster(d, cfg, 3);
        const auto b = ensemble_cluster(d, cfg, 3);
        CHECK(a.clustering == b.clustering);
        CHECK(std::equal(a.dendrogram.merges().begin(), a.dendrogram.merges().end(), b.dendrogram.merges().begin()));
    }
}

TEST_SUITE("config file") {
    TEST_CASE("write then read") {
        EnsembleConfig cfg;
        cfg.ensemble_size = 37;
        cfg.k_min = 3;
        cfg.k_max = 9;
        cfg.linkage = Linkage::complete;
        cfg.seed = 123456789012345ULL;
        cfg.alpha = 0.05;
        cfg.distinct_sizes = true;
        cfg.normalize = true;
        std::stringstream ss;
        write_config(ss, cfg);
        const auto back = read_config(ss);
        CHECK(back.ensemble_size == 37);
        CHECK(back.k_min == 3u);
        CHECK(back.k_max == 9u);
        CHECK(back.linkage == Linkage::complete);
        CHECK(back.seed == cfg.seed);
        CHECK(back.alpha == 0.05);
        CHECK(back.distinct_sizes);
        CHECK(back.normalize);
    }

    TEST_CASE("comments, unknown keys and errors") {
        std::istringstream ok("# comment\nmethod=ENAL\nensemble-size = 12\n\n");
        CHECK(read_config(ok).ensemble_size == 12);
        std::istringstream bad("ensemble-size=abc\n");
        CHECK_THROWS_AS(read_config(bad), std::invalid_argument);
        std::istringstream zero("ensemble-size=0\n");
        CHECK_THROWS_AS(read_config(zero), std::invalid_argument);
        std::istringstream noeq("linkage\n");
        CHECK_THROWS_AS(read_config(noeq), std::invalid_argument);
    }
}
