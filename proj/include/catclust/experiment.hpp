#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "catclust/ensemble.hpp"
#include "catclust/eval.hpp"
#include "catclust/io.hpp"
#include "catclust/simgen.hpp"
#include "catclust/subspace.hpp"

namespace catclust {

enum class Method { hcsl, hcal, hccl, ensl, enal, encl, kmodes, enkm, wor, wr };

/// Case-insensitive; accepts the table names (HCAL, EN-KM, K-modes, ...).
Method parse_method(std::string_view name);
std::string_view method_name(Method m) noexcept;
bool produces_dendrogram(Method m) noexcept;

struct MethodOptions {
    /// B, K_b range, alpha and normalization for every ensemble method. The
    /// linkage field is overridden by the method name for HC*/EN*; WOR/WR
    /// use it for the per-subspace ensembles.
    EnsembleConfig ensemble;
    std::size_t subspace_count = 200;  // M for WR
    std::size_t wor_block = 0;         // fixed WOR block width; 0 = random widths
    Linkage subspace_linkage = Linkage::average;
    std::size_t kmodes_max_iter = 100;
};

struct MethodOutput {
    Clustering clustering;
    std::optional<Dendrogram> dendrogram;
};

/// Runs one method on `x` with K final clusters. `seed` replaces
/// options.ensemble.seed for every random choice.
MethodOutput run_method(Method method, const CategoricalMatrix& x, std::size_t clusters,
                        const MethodOptions& options, std::uint64_t seed);

struct LowDimSource {
    Design design;
};

struct HighDimSource {
    std::string name;
    SeqDesign design;
};

struct FileSource {
    std::filesystem::path path;
    std::string format = "csv";  // csv | fasta
    CsvOptions csv;
    std::string gap_chars = "-.";
};

using DataSource = std::variant<LowDimSource, HighDimSource, FileSource>;

std::string source_name(const DataSource& source);

struct ExperimentSpec {
    std::vector<DataSource> sources;
    std::vector<Method> methods;
    std::size_t replicates = 1;
    std::size_t clusters = 0;  // 0: use the truth's cluster count
    std::uint64_t seed = 1;
    MethodOptions options;

    /// Throws std::invalid_argument when no method or source is given or
    /// replicates is 0.
    void validate() const;
};

struct ExperimentResult {
    ResultsTable table;
    /// rates[method][source][replicate]
    std::vector<std::vector<std::vector<double>>> rates;
};

/// For each source, replicate and method: generate or load the data,
/// cluster it and score it against the truth. Replicate r of source s uses
/// data seed derive_seed(seed, {s, r}); methods derive their own seeds from
/// it, so results do not depend on evaluation order. Throws DataError when a
/// file source has no truth column.
ExperimentResult run_experiment(const ExperimentSpec& spec);

}  // namespace catclust
