#include "catclust/experiment.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

#include "catclust/error.hpp"
#include "catclust/kmodes.hpp"
#include "catclust/parallel.hpp"
#include "catclust/rng.hpp"

namespace catclust {

namespace {

constexpr std::array<std::pair<Method, std::string_view>, 10> kMethodNames{{
    {Method::hcsl, "HCSL"},
    {Method::hcal, "HCAL"},
    {Method::hccl, "HCCL"},
    {Method::ensl, "ENSL"},
    {Method::enal, "ENAL"},
    {Method::encl, "ENCL"},
    {Method::kmodes, "KMODES"},
    {Method::enkm, "ENKM"},
    {Method::wor, "WOR"},
    {Method::wr, "WR"},
}};

Linkage linkage_of(Method m) {
    switch (m) {
        case Method::hcsl:
        case Method::ensl: return Linkage::single;
        case Method::hccl:
        case Method::encl: return Linkage::complete;
        default: return Linkage::average;
    }
}

}  // namespace

Method parse_method(std::string_view name) {
    std::string key;
    for (char c : name) {
        if (c == '-' || c == '_') continue;
        key += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    }
    if (key == "KM") key = "KMODES";
    for (const auto& [m, n] : kMethodNames) {
        if (n == key) return m;
    }
    throw std::invalid_argument("unknown method '" + std::string(name) + "'");
}

std::string_view method_name(Method m) noexcept {
    for (const auto& [mm, n] : kMethodNames) {
        if (mm == m) return n;
    }
    return "?";
}

bool produces_dendrogram(Method m) noexcept { return m != Method::kmodes; }

MethodOutput run_method(Method method, const CategoricalMatrix& x, std::size_t clusters,
                        const MethodOptions& options, std::uint64_t seed) {
    EnsembleConfig cfg = options.ensemble;
    cfg.seed = seed;
    switch (method) {
        case Method::hcsl:
        case Method::hcal:
        case Method::hccl: {
            const DissimilarityMatrix d = hamming(x, cfg.normalize);
            Dendrogram tree = agglomerate(d, linkage_of(method));
            Clustering labels = cut_with_outlier_deferral(tree, d, clusters, cfg.alpha);
            return {std::move(labels), std::move(tree)};
        }
        case Method::ensl:
        case Method::enal:
        case Method::encl: {
            cfg.linkage = linkage_of(method);
            auto result = ensemble_cluster(x, cfg, clusters);
            return {std::move(result.clustering), std::move(result.dendrogram)};
        }
        case Method::kmodes:
            return {kmodes(x, clusters, seed, options.kmodes_max_iter).clustering(), std::nullopt};
        case Method::enkm: {
            EnKModesOptions km;
            km.ensemble_size = cfg.ensemble_size;
            km.k_min = cfg.k_min;
            km.k_max = cfg.k_max;
            km.max_iter = options.kmodes_max_iter;
            auto result = en_kmodes(x, clusters, seed, km);
            return {std::move(result.clustering), std::move(result.dendrogram)};
        }
        case Method::wor:
        case Method::wr: {
            const std::uint64_t subspace_seed = derive_seed(seed, 0x5eed);
            const SubspaceSet set = method == Method::wor
                                        ? wor_subspaces(x.cols(), options.wor_block, subspace_seed)
                                        : wr_subspaces(x.cols(), options.subspace_count, subspace_seed);
            auto result = subspace_ensemble(x, set, cfg, clusters, {options.subspace_linkage});
            return {std::move(result.clustering), std::move(result.dendrogram)};
        }
    }
    throw std::invalid_argument("unhandled method");
}

std::string source_name(const DataSource& source) {
    return std::visit(
        [](const auto& s) -> std::string {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, LowDimSource>) {
                return s.design.name;
            } else if constexpr (std::is_same_v<T, HighDimSource>) {
                return s.name;
            } else {
                return s.path.stem().string();
            }
        },
        source);
}

void ExperimentSpec::validate() const {
    if (methods.empty()) throw std::invalid_argument("experiment needs at least one method");
    if (sources.empty()) throw std::invalid_argument("experiment needs at least one data source");
    if (replicates == 0) throw std::invalid_argument("replicates must be at least 1");
}

namespace {

struct Prepared {
    CategoricalMatrix data;
    Clustering truth;
};

Prepared load_file(const FileSource& f) {
    LoadedTable t = f.format == "fasta" ? read_fasta_alignment(f.path, f.gap_chars) : read_csv(f.path, f.csv);
    if (!t.truth) throw DataError("'" + f.path.string() + "' has no truth column; classification rate needs one");
    return {std::move(t.table.matrix), std::move(*t.truth)};
}

Prepared generate(const DataSource& source, std::uint64_t seed) {
    if (const auto* low = std::get_if<LowDimSource>(&source)) {
        auto ds = gen_lowdim(low->design, seed);
        return {std::move(ds.data), std::move(ds.truth)};
    }
    const auto& high = std::get<HighDimSource>(source);
    auto ds = gen_highdim(high.design, seed);
    return {std::move(ds.data), std::move(ds.truth)};
}

}  // namespace

ExperimentResult run_experiment(const ExperimentSpec& spec) {
    spec.validate();
    const std::size_t n_sources = spec.sources.size();
    const std::size_t n_methods = spec.methods.size();

    // Files are read once; their replicates differ only in method seeds.
    std::vector<std::optional<Prepared>> files(n_sources);
    for (std::size_t s = 0; s < n_sources; ++s) {
        if (const auto* f = std::get_if<FileSource>(&spec.sources[s])) files[s] = load_file(*f);
    }

    ExperimentResult result;
    result.rates.assign(n_methods, std::vector<std::vector<double>>(n_sources, std::vector<double>(spec.replicates)));

    parallel_for(n_sources * spec.replicates, [&](std::size_t task) {
        const std::size_t s = task / spec.replicates;
        const std::size_t r = task % spec.replicates;
        const std::uint64_t data_seed = derive_seed(spec.seed, {s, r});
        const Prepared generated = files[s] ? Prepared{} : generate(spec.sources[s], data_seed);
        const Prepared& data = files[s] ? *files[s] : generated;
        const std::size_t k = spec.clusters ? spec.clusters : data.truth.clusters();
        for (std::size_t m = 0; m < n_methods; ++m) {
            const std::uint64_t method_seed = derive_seed(data_seed, 100 + static_cast<std::uint64_t>(spec.methods[m]));
            const auto out = run_method(spec.methods[m], data.data, k, spec.options, method_seed);
            result.rates[m][s][r] = classification_rate(out.clustering, data.truth);
        }
    });

    for (std::size_t s = 0; s < n_sources; ++s) result.table.columns.push_back(source_name(spec.sources[s]));
    for (std::size_t m = 0; m < n_methods; ++m) {
        result.table.methods.emplace_back(method_name(spec.methods[m]));
        std::vector<Summary> row;
        for (std::size_t s = 0; s < n_sources; ++s) row.push_back(replicate_summary(result.rates[m][s]));
        result.table.cells.push_back(std::move(row));
    }
    return result;
}

}  // namespace catclust
