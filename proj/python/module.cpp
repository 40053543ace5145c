#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "catclust/error.hpp"
#include "catclust/experiment.hpp"
#include "catclust/io.hpp"
#include "catclust/kmodes.hpp"

namespace py = pybind11;
using namespace catclust;

namespace {

using IntArray = py::array_t<std::int64_t, py::array::c_style | py::array::forcecast>;

/// Integer codes with negative entries as gaps; cardinality of a column is
/// its largest code plus one.
CategoricalMatrix matrix_from_codes(const IntArray& a) {
    if (a.ndim() != 2) throw std::invalid_argument("expected a 2-d array of category codes");
    const auto rows = static_cast<std::size_t>(a.shape(0));
    const auto cols = static_cast<std::size_t>(a.shape(1));
    const auto* p = a.data();
    std::vector<Code> codes(rows * cols);
    std::vector<std::size_t> card(cols, 1);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            const std::int64_t v = p[i * cols + j];
            if (v < 0) {
                codes[i * cols + j] = kGap;
                continue;
            }
            if (v >= static_cast<std::int64_t>(kGap)) throw std::invalid_argument("category code out of range");
            codes[i * cols + j] = static_cast<Code>(v);
            card[j] = std::max(card[j], static_cast<std::size_t>(v) + 1);
        }
    }
    return CategoricalMatrix(rows, cols, std::move(codes), std::move(card));
}

IntArray codes_to_array(const CategoricalMatrix& x) {
    IntArray out({x.rows(), x.cols()});
    auto* p = out.mutable_data();
    for (std::size_t i = 0; i < x.rows(); ++i) {
        for (std::size_t j = 0; j < x.cols(); ++j) p[i * x.cols() + j] = x.is_gap(i, j) ? -1 : x.at(i, j);
    }
    return out;
}

py::array_t<std::int64_t> labels_array(const Clustering& c) {
    py::array_t<std::int64_t> out(static_cast<py::ssize_t>(c.size()));
    std::copy(c.labels().begin(), c.labels().end(), out.mutable_data());
    return out;
}

Clustering clustering_from(const IntArray& a) {
    if (a.ndim() != 1) throw std::invalid_argument("expected a 1-d label array");
    const std::vector<long long> labels(a.data(), a.data() + a.size());
    return Clustering::from_labels(labels);
}

py::array_t<double> square(const DissimilarityMatrix& d) {
    py::array_t<double> out({d.size(), d.size()});
    std::copy(d.values().begin(), d.values().end(), out.mutable_data());
    return out;
}

DissimilarityMatrix from_square(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
    if (a.ndim() != 2 || a.shape(0) != a.shape(1)) throw std::invalid_argument("expected a square matrix");
    const auto n = static_cast<std::size_t>(a.shape(0));
    std::vector<double> v(a.data(), a.data() + n * n);
    const bool unit = std::all_of(v.begin(), v.end(), [](double x) { return x <= 1.0; });
    return DissimilarityMatrix(n, std::move(v), unit ? DissimilarityKind::normalized : DissimilarityKind::raw_count);
}

EnsembleConfig ensemble_config(std::size_t ensemble_size, std::optional<std::size_t> k_min,
                               std::optional<std::size_t> k_max, const std::string& linkage, double alpha,
                               bool normalize, std::uint64_t seed) {
    EnsembleConfig cfg;
    cfg.ensemble_size = ensemble_size;
    cfg.k_min = k_min;
    cfg.k_max = k_max;
    cfg.linkage = parse_linkage(linkage);
    cfg.alpha = alpha;
    cfg.normalize = normalize;
    cfg.seed = seed;
    return cfg;
}

py::tuple loaded(const LoadedTable& t) {
    py::object truth = py::none();
    if (t.truth) truth = labels_array(*t.truth);
    return py::make_tuple(codes_to_array(t.table.matrix), t.ids, truth);
}

}  // namespace

PYBIND11_MODULE(_catclust, m) {
    m.doc() = "Hierarchical and ensemble clustering of categorical data";
    py::register_exception<DataError>(m, "DataError", PyExc_ValueError);

    py::class_<Dendrogram>(m, "Dendrogram")
        .def_property_readonly("leaves", &Dendrogram::leaves)
        .def_property_readonly("merges",
                               [](const Dendrogram& t) {
                                   const auto n = t.merges().size();
                                   py::array_t<double> out({n, std::size_t{4}});
                                   auto* p = out.mutable_data();
                                   for (std::size_t k = 0; k < n; ++k) {
                                       const auto& mg = t.merges()[k];
                                       p[4 * k] = static_cast<double>(mg.left);
                                       p[4 * k + 1] = static_cast<double>(mg.right);
                                       p[4 * k + 2] = mg.height;
                                       p[4 * k + 3] = static_cast<double>(mg.size);
                                   }
                                   return out;
                               },
                               "scipy-style linkage matrix: left, right, height, size")
        .def("cut", [](const Dendrogram& t, std::size_t k) { return labels_array(cut(t, k)); }, py::arg("k"))
        .def(
            "newick",
            [](Dendrogram t, std::optional<std::vector<std::string>> labels) {
                if (labels) t.set_leaf_labels(*labels);
                return to_newick(t);
            },
            py::arg("labels") = py::none());

    m.def(
        "encode",
        [](const std::vector<std::vector<std::string>>& table, std::optional<std::string> gap) {
            return codes_to_array(encode(table, gap).matrix);
        },
        py::arg("table"), py::arg("gap_symbol") = py::none(), "Encode a table of strings as integer codes (-1 = gap)");

    m.def(
        "hamming",
        [](const IntArray& x, bool normalized) { return square(hamming(matrix_from_codes(x), normalized)); },
        py::arg("x"), py::arg("normalized") = false);

    m.def(
        "agglomerate",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& d, const std::string& linkage) {
            const auto dm = from_square(d);
            py::gil_scoped_release release;
            return agglomerate(dm, parse_linkage(linkage));
        },
        py::arg("d"), py::arg("linkage") = "average",
        "Agglomerate a symmetric matrix of integer counts or of values in [0, 1]");

    m.def(
        "ensemble_dissimilarity",
        [](const IntArray& labels) {
            if (labels.ndim() != 2) throw std::invalid_argument("expected an n x B label matrix");
            const auto n = static_cast<std::size_t>(labels.shape(0));
            const auto b = static_cast<std::size_t>(labels.shape(1));
            std::vector<Clustering> cols;
            for (std::size_t c = 0; c < b; ++c) {
                std::vector<long long> col(n);
                for (std::size_t i = 0; i < n; ++i) col[i] = labels.data()[i * b + c];
                cols.push_back(Clustering::from_labels(col));
            }
            return square(ensemble_dissimilarity(IncidenceMatrix(cols)));
        },
        py::arg("labels"), "Fraction of columns separating each pair of rows");

    m.def(
        "ensemble_cluster",
        [](const IntArray& x, std::size_t k, std::size_t ensemble_size, std::optional<std::size_t> k_min,
           std::optional<std::size_t> k_max, const std::string& linkage, double alpha, bool normalize,
           std::uint64_t seed) {
            const auto mat = matrix_from_codes(x);
            const auto cfg = ensemble_config(ensemble_size, k_min, k_max, linkage, alpha, normalize, seed);
            ClusterResult r;
            {
                py::gil_scoped_release release;
                r = ensemble_cluster(mat, cfg, k);
            }
            return py::make_tuple(labels_array(r.clustering), r.dendrogram);
        },
        py::arg("x"), py::arg("k"), py::arg("ensemble_size") = 100, py::arg("k_min") = py::none(),
        py::arg("k_max") = py::none(), py::arg("linkage") = "average", py::arg("alpha") = 0.0,
        py::arg("normalize") = false, py::arg("seed") = 1);

    m.def(
        "cluster",
        [](const IntArray& x, std::size_t k, const std::string& method, std::uint64_t seed, std::size_t ensemble_size,
           std::size_t subspace_count, std::size_t wor_block) {
            const auto mat = matrix_from_codes(x);
            const Method meth = parse_method(method);
            MethodOptions opts;
            opts.ensemble.ensemble_size = ensemble_size;
            opts.subspace_count = subspace_count;
            opts.wor_block = wor_block;
            MethodOutput out;
            {
                py::gil_scoped_release release;
                out = run_method(meth, mat, k, opts, seed);
            }
            return labels_array(out.clustering);
        },
        py::arg("x"), py::arg("k"), py::arg("method") = "ENAL", py::arg("seed") = 1, py::arg("ensemble_size") = 100,
        py::arg("subspace_count") = 200, py::arg("wor_block") = 0,
        "Cluster with one of HCSL, HCAL, HCCL, ENSL, ENAL, ENCL, KMODES, ENKM, WOR, WR");

    m.def(
        "kmodes",
        [](const IntArray& x, std::size_t k, std::uint64_t seed, std::size_t max_iter) {
            const auto mat = matrix_from_codes(x);
            const auto s = kmodes(mat, k, seed, max_iter);
            IntArray modes(std::vector<py::ssize_t>{static_cast<py::ssize_t>(s.clusters), static_cast<py::ssize_t>(s.dims)});
            std::copy(s.modes.begin(), s.modes.end(), modes.mutable_data());
            return py::make_tuple(labels_array(s.clustering()), modes, s.cost);
        },
        py::arg("x"), py::arg("k"), py::arg("seed") = 1, py::arg("max_iter") = 100);

    m.def("wor_subspaces", [](std::size_t dim, std::size_t block, std::uint64_t seed) {
        return wor_subspaces(dim, block, seed).subsets;
    }, py::arg("dim"), py::arg("block_size") = 0, py::arg("seed") = 1);
    m.def("wr_subspaces", [](std::size_t dim, std::size_t count, std::uint64_t seed) {
        return wr_subspaces(dim, count, seed).subsets;
    }, py::arg("dim"), py::arg("count"), py::arg("seed") = 1);
    m.def("distinct_count_pmf", &distinct_count_pmf, py::arg("dim"));
    m.def("expected_distinct_fraction", &expected_distinct_fraction, py::arg("dim"));
    m.def("expected_double_distinct_fraction", &expected_double_distinct_fraction, py::arg("dim"));

    m.def(
        "classification_rate",
        [](const IntArray& predicted, const IntArray& truth) {
            return classification_rate(clustering_from(predicted), clustering_from(truth));
        },
        py::arg("predicted"), py::arg("truth"));

    m.def(
        "gen_lowdim",
        [](const std::string& design, std::uint64_t seed) {
            const auto ds = gen_lowdim(table_design(design), seed);
            return py::make_tuple(codes_to_array(ds.data), labels_array(ds.truth));
        },
        py::arg("design"), py::arg("seed") = 1);
    m.def(
        "gen_highdim",
        [](std::vector<std::size_t> sizes, std::size_t dims, const std::string& noise, std::uint64_t seed) {
            SeqDesign design;
            if (noise == "moderate") {
                design = SeqDesign::moderate_noise(std::move(sizes), dims);
            } else if (noise == "heavy") {
                design = SeqDesign::heavy_noise(std::move(sizes), dims);
            } else {
                throw std::invalid_argument("noise must be 'moderate' or 'heavy'");
            }
            const auto ds = gen_highdim(design, seed);
            return py::make_tuple(codes_to_array(ds.data), labels_array(ds.truth));
        },
        py::arg("sizes") = std::vector<std::size_t>{10, 10, 10, 10, 10}, py::arg("dims") = 50000,
        py::arg("noise") = "moderate", py::arg("seed") = 1);
    m.def("gen_noise", [](std::size_t rows, std::size_t dims, std::size_t symbols, std::uint64_t seed) {
        return codes_to_array(gen_noise(rows, dims, symbols, seed));
    }, py::arg("rows"), py::arg("dims"), py::arg("symbols") = 4, py::arg("seed") = 1);

    m.def(
        "read_csv",
        [](const std::filesystem::path& path, const std::string& delimiter, bool header,
           std::optional<std::string> gap_symbol, std::optional<std::string> id_column,
           std::optional<std::string> truth_column) {
            if (delimiter.size() != 1) throw std::invalid_argument("delimiter must be one character");
            CsvOptions opt;
            opt.delimiter = delimiter[0];
            opt.header = header;
            opt.gap_symbol = std::move(gap_symbol);
            opt.id_column = std::move(id_column);
            opt.truth_column = std::move(truth_column);
            return loaded(read_csv(path, opt));
        },
        py::arg("path"), py::arg("delimiter") = ",", py::arg("header") = false, py::arg("gap_symbol") = py::none(),
        py::arg("id_column") = py::none(), py::arg("truth_column") = py::none(),
        "Returns (codes, ids, truth or None)");
    m.def(
        "read_fasta",
        [](const std::filesystem::path& path, const std::string& gap_chars) {
            return loaded(read_fasta_alignment(path, gap_chars));
        },
        py::arg("path"), py::arg("gap_chars") = "-.", "Returns (codes, ids, None)");
}
