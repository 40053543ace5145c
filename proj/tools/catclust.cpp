#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "catclust/error.hpp"
#include "catclust/experiment.hpp"
#include "catclust/parallel.hpp"
#include "catclust/rng.hpp"

using namespace catclust;

namespace {

constexpr int kUsageError = 1;
constexpr int kDataError = 2;

struct InputOptions {
    std::string format = "auto";
    std::string delimiter = ",";
    bool header = false;
    std::string gap_symbol;
    std::string id_column;
    std::string truth_column;

    void add_to(CLI::App& app) {
        app.add_option("--format", format, "Input format")->check(CLI::IsMember({"auto", "csv", "fasta"}));
        app.add_option("--delimiter", delimiter, "CSV field delimiter (single character or 'tab')");
        app.add_flag("--header", header, "CSV input has a header row");
        app.add_option("--gap-symbol", gap_symbol, "CSV cell value or FASTA characters marking alignment gaps");
        app.add_option("--id-column", id_column, "CSV column (name or 0-based index) holding row ids");
        app.add_option("--truth-column", truth_column, "CSV column (name or 0-based index) holding true labels");
    }

    std::string resolved_format(const std::string& path) const {
        if (format != "auto") return format;
        for (const char* ext : {".fa", ".fasta", ".fas", ".fna", ".aln"}) {
            const std::string e(ext);
            if (path.size() >= e.size() && path.compare(path.size() - e.size(), e.size(), e) == 0) return "fasta";
        }
        return "csv";
    }

    CsvOptions csv() const {
        CsvOptions o;
        if (delimiter == "tab" || delimiter == "\\t") {
            o.delimiter = '\t';
        } else if (delimiter.size() == 1) {
            o.delimiter = delimiter[0];
        } else {
            throw std::invalid_argument("--delimiter must be a single character");
        }
        o.header = header;
        if (!gap_symbol.empty()) o.gap_symbol = gap_symbol;
        if (!id_column.empty()) o.id_column = id_column;
        if (!truth_column.empty()) o.truth_column = truth_column;
        return o;
    }

    std::string gap_chars() const { return gap_symbol.empty() ? "-." : gap_symbol; }

    LoadedTable load(const std::string& path) const {
        if (resolved_format(path) == "fasta") return read_fasta_alignment(path, gap_chars());
        return read_csv(std::filesystem::path(path), csv());
    }
};

struct EnsembleOptions {
    std::size_t ensemble_size = 100;
    std::size_t k_min = 0;
    std::size_t k_max = 0;
    double alpha = 0.0;
    std::string linkage = "average";
    bool normalize = false;
    std::uint64_t seed = 1;

    void add_to(CLI::App& app) {
        app.add_option("--ensemble-size,-B", ensemble_size, "Number of base clusterings B")
            ->check(CLI::PositiveNumber);
        app.add_option("--k-min", k_min, "Smallest base clustering size (default 2)");
        app.add_option("--k-max", k_max, "Largest base clustering size (default ceil(sqrt(n)))");
        app.add_option("--alpha", alpha, "Outlier fraction: clusters below alpha*n are reassigned")
            ->check(CLI::Range(0.0, 0.4999999));
        app.add_option("--linkage", linkage, "Linkage for subspace ensembles: single, average or complete");
        app.add_flag("--normalize", normalize, "Divide Hamming counts by the number of compared positions");
        app.add_option("--seed", seed, "Random seed");
    }

    EnsembleConfig config() const {
        EnsembleConfig cfg;
        cfg.ensemble_size = ensemble_size;
        if (k_min) cfg.k_min = k_min;
        if (k_max) cfg.k_max = k_max;
        cfg.alpha = alpha;
        cfg.linkage = parse_linkage(linkage);
        cfg.normalize = normalize;
        cfg.seed = seed;
        return cfg;
    }
};

/// Output stream for a path; "-" or empty means stdout.
class Output {
public:
    explicit Output(const std::string& path) {
        if (path.empty() || path == "-") return;
        file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
        if (!*file_) throw DataError("cannot write '" + path + "'");
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

void write_text(const std::string& path, const std::string& text) {
    Output out(path);
    out.stream() << text;
}

struct ClusterCommand {
    std::string input;
    std::string method = "ENAL";
    std::size_t k = 0;
    std::string subspace = "none";
    std::size_t blocks = 200;
    std::size_t wor_block = 0;
    std::size_t max_iter = 100;
    std::string output;
    std::string newick;
    InputOptions in;
    EnsembleOptions ens;

    void add_to(CLI::App& app) {
        app.add_option("input", input, "CSV or aligned FASTA file")->required();
        app.add_option("--method,-m", method, "HCSL HCAL HCCL ENSL ENAL ENCL KMODES ENKM WOR WR");
        app.add_option("--k,-k", k, "Number of final clusters")->required()->check(CLI::PositiveNumber);
        app.add_option("--subspace", subspace, "Subspace ensembling (overrides --method)")
            ->check(CLI::IsMember({"none", "wor", "wr"}));
        app.add_option("--blocks", blocks, "Number of WR subspaces M")->check(CLI::PositiveNumber);
        app.add_option("--wor-block", wor_block, "WOR block width h (0 draws random widths)");
        app.add_option("--max-iter", max_iter, "K-modes iteration limit")->check(CLI::PositiveNumber);
        app.add_option("--output,-o", output, "Labels CSV (default stdout)");
        app.add_option("--newick", newick, "Write the final dendrogram in Newick format");
        in.add_to(app);
        ens.add_to(app);
    }

    int run() const {
        const LoadedTable t = in.load(input);
        Method m = parse_method(method);
        if (subspace != "none") m = parse_subspace_mode(subspace) == SubspaceMode::wor ? Method::wor : Method::wr;
        MethodOptions opts;
        opts.ensemble = ens.config();
        opts.subspace_count = blocks;
        opts.wor_block = wor_block;
        opts.subspace_linkage = opts.ensemble.linkage;
        opts.kmodes_max_iter = max_iter;

        auto result = run_method(m, t.table.matrix, k, opts, ens.seed);
        {
            Output out(output);
            write_labels_csv(out.stream(), t.ids, result.clustering);
        }
        if (!newick.empty()) {
            if (!result.dendrogram) throw std::invalid_argument(std::string(method_name(m)) + " does not build a dendrogram");
            result.dendrogram->set_leaf_labels(t.ids);
            write_text(newick, to_newick(*result.dendrogram) + "\n");
        }
        if (t.truth) std::cerr << "classification rate: " << classification_rate(result.clustering, *t.truth) << '\n';
        return 0;
    }
};

struct ExperimentCommand {
    std::vector<std::string> designs;
    std::vector<std::string> seq;
    std::size_t seq_dims = 50000;
    std::vector<std::size_t> seq_sizes{10, 10, 10, 10, 10};
    std::vector<std::string> inputs;
    std::vector<std::string> methods;
    std::size_t replicates = 1;
    std::size_t k = 0;
    std::size_t blocks = 200;
    std::size_t wor_block = 0;
    std::string output;
    std::string rates;
    InputOptions in;
    EnsembleOptions ens;

    void add_to(CLI::App& app) {
        app.add_option("--design", designs, "Simulated designs D1..D11")->delimiter(',');
        app.add_option("--seq", seq, "Sequence simulator noise level: moderate or heavy")->delimiter(',');
        app.add_option("--seq-dims", seq_dims, "Sequence length J for --seq")->check(CLI::PositiveNumber);
        app.add_option("--seq-sizes", seq_sizes, "Five cluster sizes for --seq")->delimiter(',')->expected(5);
        app.add_option("--input", inputs, "Data files with a truth column")->delimiter(',');
        app.add_option("--methods", methods, "Methods to compare")->delimiter(',')->required();
        app.add_option("--replicates,-r", replicates, "Replicates per source")->check(CLI::PositiveNumber);
        app.add_option("--k,-k", k, "Final cluster count (default: the truth's)");
        app.add_option("--blocks", blocks, "Number of WR subspaces M")->check(CLI::PositiveNumber);
        app.add_option("--wor-block", wor_block, "WOR block width h (0 draws random widths)");
        app.add_option("--output,-o", output, "Results table TSV (default stdout)");
        app.add_option("--rates", rates, "Per-replicate rates as CSV");
        in.add_to(app);
        ens.add_to(app);
    }

    int run() const {
        ExperimentSpec spec;
        for (const auto& d : designs) spec.sources.emplace_back(LowDimSource{table_design(d)});
        for (const auto& s : seq) {
            SeqDesign design;
            if (s == "moderate") {
                design = SeqDesign::moderate_noise(seq_sizes, seq_dims);
            } else if (s == "heavy") {
                design = SeqDesign::heavy_noise(seq_sizes, seq_dims);
            } else {
                throw std::invalid_argument("--seq takes 'moderate' or 'heavy'");
            }
            spec.sources.emplace_back(HighDimSource{"seq-" + s, design});
        }
        for (const auto& path : inputs) {
            FileSource f;
            f.path = path;
            f.format = in.resolved_format(path);
            f.csv = in.csv();
            f.gap_chars = in.gap_chars();
            spec.sources.emplace_back(std::move(f));
        }
        for (const auto& m : methods) spec.methods.push_back(parse_method(m));
        spec.replicates = replicates;
        spec.clusters = k;
        spec.seed = ens.seed;
        spec.options.ensemble = ens.config();
        spec.options.subspace_count = blocks;
        spec.options.wor_block = wor_block;
        spec.options.subspace_linkage = spec.options.ensemble.linkage;

        const auto result = run_experiment(spec);
        {
            Output out(output);
            write_results_table(out.stream(), result.table);
        }
        if (!rates.empty()) {
            std::vector<std::vector<std::string>> rows;
            for (std::size_t m = 0; m < result.rates.size(); ++m) {
                for (std::size_t s = 0; s < result.rates[m].size(); ++s) {
                    for (std::size_t r = 0; r < result.rates[m][s].size(); ++r) {
                        char buf[32];
                        std::snprintf(buf, sizeof buf, "%.17g", result.rates[m][s][r]);
                        rows.push_back({result.table.methods[m], result.table.columns[s], std::to_string(r), buf});
                    }
                }
            }
            Output out(rates);
            write_csv(out.stream(), rows, ',', {"method", "source", "replicate", "rate"});
        }
        return 0;
    }
};

struct SimulateCommand {
    std::string design;
    std::string seq;
    std::size_t dims = 50000;
    std::vector<std::size_t> sizes{10, 10, 10, 10, 10};
    std::uint64_t seed = 1;
    std::string format = "csv";
    double gap_rate = 0.0;
    std::string output;
    std::string truth_output;

    void add_to(CLI::App& app) {
        auto* d = app.add_option("--design", design, "Low-dimensional design D1..D11");
        auto* s = app.add_option("--seq", seq, "Sequence simulator noise level: moderate or heavy")
                      ->check(CLI::IsMember({"moderate", "heavy"}));
        d->excludes(s);
        app.add_option("--dims", dims, "Sequence length J for --seq")->check(CLI::PositiveNumber);
        app.add_option("--sizes", sizes, "Five cluster sizes for --seq")->delimiter(',')->expected(5);
        app.add_option("--seed", seed, "Random seed");
        app.add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "fasta"}));
        app.add_option("--gap-rate", gap_rate, "Fraction of cells replaced by '-' gaps")->check(CLI::Range(0.0, 0.5));
        app.add_option("--output,-o", output, "Data file (default stdout)");
        app.add_option("--truth-output", truth_output, "Labels CSV with the true clusters (FASTA output)");
    }

    int run() const {
        if (design.empty() == seq.empty()) throw std::invalid_argument("give exactly one of --design or --seq");
        Dataset ds = [&]() -> Dataset {
            if (!design.empty()) return gen_lowdim(table_design(design), seed);
            const SeqDesign sd = seq == "moderate" ? SeqDesign::moderate_noise(sizes, dims)
                                                   : SeqDesign::heavy_noise(sizes, dims);
            return gen_highdim(sd, seed);
        }();
        const auto& x = ds.data;
        Rng gaps = Rng(seed).split(0x9a9);
        std::vector<std::vector<std::string>> cells(x.rows(), std::vector<std::string>(x.cols()));
        for (std::size_t i = 0; i < x.rows(); ++i) {
            for (std::size_t j = 0; j < x.cols(); ++j) {
                const bool gap = gap_rate > 0.0 && gaps.bernoulli(gap_rate);
                cells[i][j] = gap ? "-" : seq.empty() ? std::to_string(x.at(i, j)) : std::string(kNucleotides[x.at(i, j)]);
            }
        }
        std::vector<std::string> ids;
        for (std::size_t i = 0; i < x.rows(); ++i) ids.push_back("s" + std::to_string(i + 1));

        Output out(output);
        if (format == "fasta") {
            std::vector<FastaRecord> records;
            for (std::size_t i = 0; i < x.rows(); ++i) {
                std::string s;
                for (const auto& c : cells[i]) s += c;
                records.push_back({ids[i], std::move(s)});
            }
            write_fasta(out.stream(), records, 60);
        } else {
            std::vector<std::string> header{"id", "truth"};
            for (std::size_t j = 0; j < x.cols(); ++j) header.push_back("c" + std::to_string(j + 1));
            std::vector<std::vector<std::string>> rows;
            for (std::size_t i = 0; i < x.rows(); ++i) {
                std::vector<std::string> row{ids[i], std::to_string(ds.truth[i])};
                row.insert(row.end(), cells[i].begin(), cells[i].end());
                rows.push_back(std::move(row));
            }
            write_csv(out.stream(), rows, ',', header);
        }
        if (!truth_output.empty()) {
            Output t(truth_output);
            write_labels_csv(t.stream(), ids, ds.truth);
        }
        return 0;
    }
};

struct DissimCommand {
    std::string input;
    bool ensemble = false;
    std::string incidence;
    std::string output;
    InputOptions in;
    EnsembleOptions ens;

    void add_to(CLI::App& app) {
        app.add_option("input", input, "CSV or aligned FASTA file")->required();
        app.add_flag("--ensemble", ensemble, "Write the ensemble dissimilarity d_B instead of Hamming");
        app.add_option("--incidence", incidence, "Write the incidence matrix of base clusterings as CSV");
        app.add_option("--output,-o", output, "Square CSV (default stdout)");
        in.add_to(app);
        ens.add_to(app);
    }

    int run() const {
        const LoadedTable t = in.load(input);
        const EnsembleConfig cfg = ens.config();
        const DissimilarityMatrix d = hamming(t.table.matrix, cfg.normalize);
        if (!ensemble && incidence.empty()) {
            Output out(output);
            write_dissimilarity_csv(out.stream(), d);
            return 0;
        }
        const auto w = build_incidence(d, draw_sizes(cfg, d.size()), cfg.linkage, cfg.alpha);
        if (!incidence.empty()) {
            Output out(incidence);
            write_incidence_csv(out.stream(), w);
        }
        Output out(output);
        write_dissimilarity_csv(out.stream(), ensemble ? ensemble_dissimilarity(w) : d);
        return 0;
    }
};

struct SubspacesCommand {
    std::string mode = "wr";
    std::size_t dims = 0;
    std::size_t blocks = 200;
    std::size_t wor_block = 0;
    std::uint64_t seed = 1;
    std::string output;

    void add_to(CLI::App& app) {
        app.add_option("--mode", mode, "wor or wr")->check(CLI::IsMember({"wor", "wr"}));
        app.add_option("--dims,-J", dims, "Number of columns J")->required()->check(CLI::PositiveNumber);
        app.add_option("--blocks", blocks, "Number of WR subspaces M")->check(CLI::PositiveNumber);
        app.add_option("--wor-block", wor_block, "WOR block width h (0 draws random widths)");
        app.add_option("--seed", seed, "Random seed");
        app.add_option("--output,-o", output, "JSON lines (default stdout)");
    }

    int run() const {
        const SubspaceSet s =
            mode == "wor" ? wor_subspaces(dims, wor_block, seed) : wr_subspaces(dims, blocks, seed);
        Output out(output);
        write_subspaces_jsonl(out.stream(), s);
        return 0;
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Clustering of categorical data by ensembling dissimilarity matrices"};
    app.set_config("--config", "", "Read options from a key = value file");
    app.require_subcommand(1);
    std::size_t threads = 0;
    app.add_option("--threads", threads, "Worker threads (default from CATCLUST_THREADS, else 1)")
        ->envname("CATCLUST_THREADS");

    ClusterCommand cluster;
    ExperimentCommand experiment;
    SimulateCommand simulate;
    DissimCommand dissim;
    SubspacesCommand subspaces;
    auto* c_cluster = app.add_subcommand("cluster", "Cluster one data file and write labels");
    auto* c_experiment = app.add_subcommand("experiment", "Compare methods by classification rate");
    auto* c_simulate = app.add_subcommand("simulate", "Generate a simulated dataset");
    auto* c_dissim = app.add_subcommand("dissim", "Write a dissimilarity matrix");
    auto* c_subspaces = app.add_subcommand("subspaces", "Write WOR or WR column subsets");
    cluster.add_to(*c_cluster);
    experiment.add_to(*c_experiment);
    simulate.add_to(*c_simulate);
    dissim.add_to(*c_dissim);
    subspaces.add_to(*c_subspaces);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kUsageError;
    }

    try {
        if (threads > 0) set_thread_count(threads);
        if (c_cluster->parsed()) return cluster.run();
        if (c_experiment->parsed()) return experiment.run();
        if (c_simulate->parsed()) return simulate.run();
        if (c_dissim->parsed()) return dissim.run();
        return subspaces.run();
    } catch (const DataError& e) {
        std::cerr << "catclust: data error: " << e.what() << '\n';
        return kDataError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "catclust: " << e.what() << '\n';
        return kUsageError;
    } catch (const std::exception& e) {
        std::cerr << "catclust: " << e.what() << '\n';
        return kDataError;
    }
}
