#include "catclust/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "catclust/parallel.hpp"
#include "catclust/rng.hpp"

namespace catclust {

std::pair<std::size_t, std::size_t> EnsembleConfig::size_range(std::size_t n) const {
    const std::size_t lo = k_min.value_or(2);
    const std::size_t hi =
        k_max.value_or(static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n)) - 1e-12)));
    if (lo < 1 || hi < lo)
        throw std::invalid_argument("empty cluster-size range [" + std::to_string(lo) + ", " + std::to_string(hi) +
                                    "] for n=" + std::to_string(n));
    if (hi > n) throw std::invalid_argument("k_max exceeds the number of points");
    return {lo, hi};
}

// ---------------------------------------------------------------------------
// Config file

void write_config(std::ostream& out, const EnsembleConfig& cfg) {
    out << "ensemble-size=" << cfg.ensemble_size << '\n';
    if (cfg.k_min) out << "k-min=" << *cfg.k_min << '\n';
    if (cfg.k_max) out << "k-max=" << *cfg.k_max << '\n';
    out << "linkage=" << linkage_name(cfg.linkage) << '\n';
    out << "seed=" << cfg.seed << '\n';
    out << "alpha=" << cfg.alpha << '\n';
    out << "distinct-sizes=" << (cfg.distinct_sizes ? "true" : "false") << '\n';
    out << "normalize=" << (cfg.normalize ? "true" : "false") << '\n';
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw std::invalid_argument("config key '" + key + "' expects a boolean, got '" + v + "'");
}

std::size_t parse_count(const std::string& key, const std::string& v) {
    std::size_t pos = 0;
    unsigned long long x = 0;
    try {
        x = std::stoull(v, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos == 0 || pos != v.size() || v.front() == '-')
        throw std::invalid_argument("config key '" + key + "' expects a nonnegative integer, got '" + v + "'");
    return static_cast<std::size_t>(x);
}

}  // namespace

EnsembleConfig read_config(std::istream& in, EnsembleConfig cfg) {
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty() || line.front() == '#' || line.front() == ';' || line.front() == '[') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("config line without '=': " + line);
        const std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);

        if (key == "ensemble-size") {
            cfg.ensemble_size = parse_count(key, value);
        } else if (key == "k-min") {
            cfg.k_min = parse_count(key, value);
        } else if (key == "k-max") {
            cfg.k_max = parse_count(key, value);
        } else if (key == "linkage") {
            cfg.linkage = parse_linkage(value);
        } else if (key == "seed") {
            cfg.seed = parse_count(key, value);
        } else if (key == "alpha") {
            try {
                cfg.alpha = std::stod(value);
            } catch (const std::exception&) {
                throw std::invalid_argument("config key 'alpha' expects a number, got '" + value + "'");
            }
        } else if (key == "distinct-sizes") {
            cfg.distinct_sizes = parse_bool(key, value);
        } else if (key == "normalize") {
            cfg.normalize = parse_bool(key, value);
        }
    }
    if (cfg.ensemble_size == 0) throw std::invalid_argument("ensemble-size must be at least 1");
    return cfg;
}

// ---------------------------------------------------------------------------
// Incidence matrix

IncidenceMatrix::IncidenceMatrix(std::vector<Clustering> columns) : columns_(std::move(columns)) {
    if (columns_.empty()) throw std::invalid_argument("incidence matrix needs at least one column");
    rows_ = columns_.front().size();
    for (const auto& c : columns_) {
        if (c.size() != rows_) throw std::invalid_argument("incidence columns must have equal length");
    }
}

std::vector<std::size_t> IncidenceMatrix::sizes() const {
    std::vector<std::size_t> out;
    out.reserve(columns_.size());
    for (const auto& c : columns_) out.push_back(c.clusters());
    return out;
}

std::vector<std::size_t> draw_sizes(const EnsembleConfig& cfg, std::size_t n) {
    if (cfg.ensemble_size == 0) throw std::invalid_argument("ensemble size must be at least 1");
    const auto [lo, hi] = cfg.size_range(n);
    std::vector<std::size_t> sizes(cfg.ensemble_size);
    if (cfg.distinct_sizes) {
        const std::size_t range = hi - lo + 1;
        if (cfg.ensemble_size > range)
            throw std::invalid_argument("distinct sizes requested but B exceeds the size range");
        Rng rng(cfg.seed);
        auto picks = rng.sample_without_replacement(range, cfg.ensemble_size);
        for (std::size_t b = 0; b < sizes.size(); ++b) sizes[b] = lo + picks[b];
        return sizes;
    }
    const Rng root(cfg.seed);
    for (std::size_t b = 0; b < sizes.size(); ++b) {
        Rng stream = root.split(b);
        sizes[b] = static_cast<std::size_t>(
            stream.uniform_int(static_cast<std::int64_t>(lo), static_cast<std::int64_t>(hi)));
    }
    return sizes;
}

IncidenceMatrix build_incidence(const DissimilarityMatrix& d, std::span<const std::size_t> sizes, Linkage linkage,
                                double alpha) {
    if (sizes.empty()) throw std::invalid_argument("at least one base clustering size required");
    for (auto k : sizes) {
        if (k < 1 || k > d.size()) throw std::invalid_argument("base clustering size out of range [1, n]");
    }
    if (d.size() == 1) {
        return IncidenceMatrix(std::vector<Clustering>(sizes.size(), Clustering({0}, 1)));
    }
    const Dendrogram tree = agglomerate(d, linkage);
    std::vector<Clustering> columns(sizes.size());
    parallel_for(sizes.size(), [&](std::size_t b) { columns[b] = cut_with_outlier_deferral(tree, d, sizes[b], alpha); });
    return IncidenceMatrix(std::move(columns));
}

DissimilarityMatrix ensemble_dissimilarity(const IncidenceMatrix& w) {
    const std::size_t n = w.rows();
    const std::size_t cols = w.columns();
    if (cols == 0) throw std::invalid_argument("incidence matrix has no columns");

    // Separation counts are integers; the division by B happens once per pair.
    std::vector<std::uint32_t> separated(n * n, 0);
    for (std::size_t b = 0; b < cols; ++b) {
        const auto labels = w.column(b).labels();
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t li = labels[i];
            std::uint32_t* row = separated.data() + i * n;
            for (std::size_t j = i + 1; j < n; ++j) row[j] += (labels[j] != li);
        }
    }
    std::vector<double> values(n * n, 0.0);
    const double scale = static_cast<double>(cols);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            values[i * n + j] = values[j * n + i] = static_cast<double>(separated[i * n + j]) / scale;
        }
    }
    return DissimilarityMatrix(n, std::move(values), DissimilarityKind::ensemble);
}

ClusterResult ensemble_cluster(const DissimilarityMatrix& d, const EnsembleConfig& cfg, std::size_t final_clusters) {
    if (final_clusters < 1 || final_clusters > d.size()) throw std::invalid_argument("K_final out of range [1, n]");
    const auto sizes = draw_sizes(cfg, d.size());
    const IncidenceMatrix w = build_incidence(d, sizes, cfg.linkage, cfg.alpha);
    const DissimilarityMatrix db = ensemble_dissimilarity(w);
    Dendrogram tree = agglomerate(db, cfg.linkage);
    Clustering labels = cut_with_outlier_deferral(tree, db, final_clusters, cfg.alpha);
    return {std::move(labels), std::move(tree)};
}

ClusterResult ensemble_cluster(const CategoricalMatrix& x, const EnsembleConfig& cfg, std::size_t final_clusters) {
    return ensemble_cluster(hamming(x, cfg.normalize), cfg, final_clusters);
}

}  // namespace catclust
