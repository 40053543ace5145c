// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Usage: catclust_acceptance [--cli PATH]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "catclust/experiment.hpp"
#include "catclust/parallel.hpp"
#include "catclust/rng.hpp"
#include "oracles.hpp"

using namespace catclust;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void criterion(int id, const std::string& name, double limit_seconds, const std::function<Outcome()>& body) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < limit_seconds;
    const bool pass = o.pass && in_time;
    if (!pass) ++failures;
    char timing[64];
    std::snprintf(timing, sizeof timing, "%.1f s of %.0f s", secs, limit_seconds);
    std::cout << (pass ? "PASS" : "FAIL") << "  " << id << ". " << name << ": " << o.detail << " [" << timing
              << (in_time ? "" : ", over time") << "]" << std::endl;
}

std::string fmt(double v, int digits = 3) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

double mean_of(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size()); }

double variance_of(const std::vector<double>& v) {
    const double m = mean_of(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s / static_cast<double>(v.size() - 1);
}

oracle::Link to_oracle(Linkage l) {
    switch (l) {
        case Linkage::single: return oracle::Link::single;
        case Linkage::complete: return oracle::Link::complete;
        default: return oracle::Link::average;
    }
}

/// Smallest leaf under every node of a dendrogram.
std::vector<std::size_t> min_leaves(const Dendrogram& t) {
    const std::size_t n = t.leaves();
    std::vector<std::size_t> m(2 * n - 1);
    std::iota(m.begin(), m.begin() + static_cast<std::ptrdiff_t>(n), std::size_t{0});
    for (std::size_t k = 0; k + 1 < n; ++k) m[n + k] = std::min(m[t.merges()[k].left], m[t.merges()[k].right]);
    return m;
}

Outcome agglomeration_oracle() {
    Rng rng(20240601);
    std::size_t mismatches = 0, height_dev = 0, cases = 0;
    double worst_al = 0.0;
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t n = 2 + rng.below(11);
        // Half the matrices are integer-valued (tie-heavy, exact AL sums),
        // half are real-valued.
        const bool integral = trial % 2 == 0;
        const auto v = oracle::random_dissimilarity(n, rng, integral, 2 + rng.below(12));
        const DissimilarityMatrix d(n, v, integral ? DissimilarityKind::raw_count : DissimilarityKind::normalized);
        for (auto l : {Linkage::single, Linkage::average, Linkage::complete}) {
            ++cases;
            std::vector<std::vector<std::size_t>> partitions;
            const auto expected = oracle::agglomerate(v, n, to_oracle(l), &partitions);
            const Dendrogram tree = agglomerate(d, l);
            const auto leaves = min_leaves(tree);
            bool same = true;
            for (std::size_t k = 0; k + 1 < n; ++k) {
                const auto& m = tree.merges()[k];
                const std::size_t a = std::min(leaves[m.left], leaves[m.right]);
                const std::size_t b = std::max(leaves[m.left], leaves[m.right]);
                same = same && a == expected[k].a && b == expected[k].b;
                const double dev = std::abs(m.height - expected[k].height);
                if (integral || l != Linkage::average) {
                    if (dev != 0.0) ++height_dev;
                } else {
                    worst_al = std::max(worst_al, dev);
                }
            }
            for (std::size_t k = 1; k <= n; ++k) {
                const Clustering c = cut(tree, k);
                same = same && std::equal(c.labels().begin(), c.labels().end(), partitions[n - k].begin());
            }
            if (!same) ++mismatches;
        }
    }
    const bool pass = mismatches == 0 && height_dev == 0 && worst_al < 1e-12;
    return {pass, std::to_string(cases - mismatches) + "/" + std::to_string(cases) +
                      " (matrix, linkage) cases match merges and all cuts; inexact heights " +
                      std::to_string(height_dev) + "; max real-valued AL height deviation " + fmt(worst_al * 1e15, 2) +
                      "e-15"};
}

Outcome ensemble_oracle() {
    Rng rng(77);
    std::size_t ok = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + rng.below(30);
        const std::size_t b = 1 + rng.below(60);
        std::vector<Clustering> cols;
        std::vector<std::vector<std::size_t>> raw;
        for (std::size_t c = 0; c < b; ++c) {
            const std::size_t k = 1 + rng.below(n);
            std::vector<std::size_t> labels(n);
            for (std::size_t i = 0; i < n; ++i) labels[i] = i < k ? i : rng.below(k);
            rng.shuffle(labels);
            raw.push_back(labels);
            cols.emplace_back(labels, k);
        }
        const auto d = ensemble_dissimilarity(IncidenceMatrix(cols));
        const auto expected = oracle::ensemble_dissimilarity(raw, n);
        if (std::equal(d.values().begin(), d.values().end(), expected.begin())) ++ok;
    }
    return {ok == 200, std::to_string(ok) + "/200 incidence matrices equal the double-loop average exactly"};
}

Outcome table2() {
    ExperimentSpec spec;
    for (const char* name : {"D1", "D5", "D10"}) spec.sources.emplace_back(LowDimSource{table_design(name)});
    spec.methods = {Method::enal, Method::hcsl};
    spec.replicates = 100;
    spec.seed = 2;
    const auto r = run_experiment(spec);
    const double target[3] = {0.88, 0.79, 0.96};
    bool pass = true;
    std::string detail = "ENAL";
    for (std::size_t s = 0; s < 3; ++s) {
        const double m = r.table.cells[0][s].mean;
        pass = pass && std::abs(m - target[s]) <= 0.08;
        detail += " " + r.table.columns[s] + "=" + fmt(m) + " (target " + fmt(target[s], 2) + "+-0.08)";
    }
    const double hcsl = r.table.cells[1][0].mean;
    pass = pass && hcsl < r.table.cells[0][0].mean;
    detail += "; HCSL D1=" + fmt(hcsl) + " vs ENAL D1";
    return {pass, detail};
}

Outcome wr_vs_wor() {
    ExperimentSpec spec;
    spec.sources.emplace_back(HighDimSource{"J5000", SeqDesign::moderate_noise({10, 10, 10, 10, 10}, 5000)});
    spec.methods = {Method::wr, Method::wor};
    spec.replicates = 20;
    spec.seed = 4;
    spec.options.subspace_count = 200;
    spec.options.wor_block = 25;  // R = 200 blocks
    const auto r = run_experiment(spec);
    const double wr = r.table.cells[0][0].mean;
    const double wor = r.table.cells[1][0].mean;
    return {wr >= 0.95 && wor <= 0.70,
            "WR mean CR " + fmt(wr) + " (need >= 0.95), WOR mean CR " + fmt(wor) + " (need <= 0.70)"};
}

Outcome distinct_fractions() {
    const std::size_t dim = 10000;
    std::vector<std::size_t> pool(dim);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    Rng rng(5);
    double single = 0.0;
    for (int t = 0; t < 1000; ++t) single += static_cast<double>(bootstrap_distinct(pool, rng).size()) / dim;
    single /= 1000;
    const auto set = wr_subspaces(dim, 1000, 6);
    double twice = 0.0;
    for (const auto& s : set.subsets) twice += static_cast<double>(s.size()) / dim;
    twice /= 1000;
    bool exact = true;
    for (std::size_t j = 1; j <= 5; ++j) {
        const auto pmf = distinct_count_pmf(j);
        const auto e = oracle::distinct_pmf_enumerated(j);
        for (std::size_t k = 0; k < j; ++k) exact = exact && std::abs(pmf[k] - e[k]) < 1e-14;
    }
    const bool pass = std::abs(single - 0.632) <= 0.005 && std::abs(twice - 0.47) <= 0.01 && exact;
    return {pass, "single-level " + fmt(single, 4) + " (0.632+-0.005), double-level " + fmt(twice, 4) +
                      " (0.47+-0.01; exact E(N*)/J = " + fmt(expected_double_distinct_fraction(dim), 4) +
                      "), pmf vs enumeration J<=5 " + (exact ? "exact" : "MISMATCH")};
}

Outcome variance_law() {
    const double p = 0.75;
    std::string detail;
    bool pass = true;
    for (std::size_t dim : {100u, 1000u}) {
        const std::size_t pairs = 10000;
        const auto x = gen_noise(2 * pairs, dim, 4, 600 + dim);
        std::vector<double> d(pairs);
        parallel_for(pairs, [&](std::size_t i) {
            const std::vector<std::size_t> rows{2 * i, 2 * i + 1};
            d[i] = hamming(x.select_rows(rows), true)(0, 1);
        });
        const double v = variance_of(d);
        const double expected = p * (1 - p) / static_cast<double>(dim);
        const double rel = std::abs(v - expected) / expected;
        pass = pass && rel <= 0.10;
        detail += "J=" + std::to_string(dim) + ": var " + fmt(v * 1e4, 3) + "e-4 vs " + fmt(expected * 1e4, 3) +
                  "e-4 (" + fmt(100 * rel, 1) + "% off); ";
    }
    return {pass, detail + "10000 independent pairs each"};
}

Outcome concentration() {
    const double eps = 0.2, p = 0.3;
    Rng rng(8);
    std::string detail;
    bool pass = true;
    for (std::size_t b : {25u, 100u}) {
        const std::size_t pairs = 5000;
        std::size_t tail = 0;
        for (std::size_t t = 0; t < pairs; ++t) {
            std::vector<Clustering> cols;
            for (std::size_t c = 0; c < b; ++c) {
                cols.push_back(rng.bernoulli(p) ? Clustering({0, 1}, 2) : Clustering({0, 0}, 1));
            }
            if (std::abs(ensemble_dissimilarity(IncidenceMatrix(cols))(0, 1) - p) > eps) ++tail;
        }
        const double frac = static_cast<double>(tail) / pairs;
        const double bound = 1.0 / (4 * eps * eps * static_cast<double>(b));
        pass = pass && frac <= bound;
        detail += "B=" + std::to_string(b) + ": tail " + fmt(frac, 4) + " <= " + fmt(bound, 4) + "; ";
    }
    return {pass, detail + "eps=0.2, p=0.3"};
}

Outcome hungarian() {
    Rng rng(9);
    std::size_t agree = 0, invariant = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 1 + rng.below(10);
        const std::size_t kp = 1 + rng.below(std::min<std::size_t>(4, n));
        const std::size_t kt = 1 + rng.below(std::min<std::size_t>(4, n));
        auto draw = [&](std::size_t k) {
            std::vector<std::size_t> l(n);
            for (std::size_t i = 0; i < n; ++i) l[i] = i < k ? i : rng.below(k);
            rng.shuffle(l);
            return l;
        };
        const auto p = draw(kp), t = draw(kt);
        const double cr = classification_rate(Clustering(p, kp), Clustering(t, kt));
        if (cr == oracle::classification_rate(p, kp, t, kt)) ++agree;
        std::vector<std::size_t> sp(kp), st(kt);
        std::iota(sp.begin(), sp.end(), std::size_t{0});
        std::iota(st.begin(), st.end(), std::size_t{0});
        rng.shuffle(sp);
        rng.shuffle(st);
        std::vector<std::size_t> p2, t2;
        for (auto l : p) p2.push_back(sp[l]);
        for (auto l : t) t2.push_back(st[l]);
        if (classification_rate(Clustering(p2, kp), Clustering(t2, kt)) == cr) ++invariant;
    }
    return {agree == 1000 && invariant == 1000, std::to_string(agree) + "/1000 equal brute force, " +
                                                    std::to_string(invariant) + "/1000 relabeling invariant"};
}

Outcome variance_reduction() {
    const auto& design = table_design("D1");
    const std::size_t reps = 200;
    std::vector<double> enal(reps), hcal(reps);
    const std::size_t k_hi = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(design.points()))));
    parallel_for(reps, [&](std::size_t r) {
        const std::uint64_t seed = derive_seed(9, r);
        const auto ds = gen_lowdim(design, seed);
        MethodOptions opts;
        enal[r] = classification_rate(run_method(Method::enal, ds.data, 5, opts, derive_seed(seed, 1)).clustering, ds.truth);
        Rng rng(derive_seed(seed, 2));
        const auto k = static_cast<std::size_t>(rng.uniform_int(2, static_cast<std::int64_t>(k_hi)));
        const Dendrogram tree = agglomerate(hamming(ds.data), Linkage::average);
        hcal[r] = classification_rate(cut(tree, k), ds.truth);
    });
    const double ve = variance_of(enal), vh = variance_of(hcal);
    return {ve <= vh, "Var(ENAL CR) " + fmt(ve, 4) + " <= Var(HCAL, K~DUnif[2," + std::to_string(k_hi) + "]) " +
                          fmt(vh, 4) + " over 200 D1 replicates"};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run(const std::string& command) { return std::system((command + " 2>/dev/null").c_str()); }

std::string quote(const fs::path& p) { return "'" + p.string() + "'"; }

std::vector<std::size_t> read_labels(const fs::path& p) {
    std::istringstream in(slurp(p));
    std::string line;
    std::getline(in, line);
    std::vector<std::size_t> out;
    while (std::getline(in, line)) out.push_back(std::stoul(line.substr(line.rfind(',') + 1)));
    return out;
}

Outcome cli_checks(const std::string& cli) {
    if (cli.empty()) return {false, "no --cli path given"};
    const fs::path dir = fs::temp_directory_path() / "catclust_acceptance";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const std::string exe = quote(cli);
    std::vector<std::string> notes;
    bool pass = true;
    auto call = [&](const std::string& command) { pass = run(command) == 0 && pass; };

    // Determinism: identical reruns of cluster and experiment.
    const fs::path data = dir / "d10.csv";
    const std::string read_opts = " --header --id-column id --truth-column truth";
    call(exe + " simulate --design D10 --seed 11 -o " + quote(data));
    for (const char* tag : {"a", "b"}) {
        const std::string t(tag);
        call(exe + " cluster " + quote(data) + read_opts + " -k 2 --method ENAL --seed 5 -o " +
             quote(dir / ("lab_" + t + ".csv")) + " --newick " + quote(dir / ("tree_" + t + ".nwk")));
        call(exe + " experiment --design D10,D11 --methods HCAL,ENAL,WR --blocks 20 -B 30 -r 3 --seed 7 -o " +
             quote(dir / ("table_" + t + ".tsv")));
    }
    const bool same = slurp(dir / "lab_a.csv") == slurp(dir / "lab_b.csv") &&
                      slurp(dir / "tree_a.nwk") == slurp(dir / "tree_b.nwk") &&
                      slurp(dir / "table_a.tsv") == slurp(dir / "table_b.tsv") && !slurp(dir / "table_a.tsv").empty();
    pass = pass && same;
    notes.push_back(same ? "reruns byte-identical" : "reruns differ");

    // Input-order invariance on well-separated data: five prototypes over
    // four symbols, each entry resampled with probability 0.2.
    Rng gen(12);
    const std::size_t per = 12, width = 40;
    std::vector<std::string> proto(5, std::string(width, 'A'));
    for (auto& p : proto) {
        for (auto& c : p) c = "ACGT"[gen.below(4)];
    }
    std::vector<std::string> rows;
    for (std::size_t k = 0; k < 5; ++k) {
        for (std::size_t i = 0; i < per; ++i) {
            std::string row = "r" + std::to_string(rows.size()) + "," + std::to_string(k);
            for (std::size_t j = 0; j < width; ++j) {
                row += ',';
                row += gen.bernoulli(0.2) ? "ACGT"[gen.below(4)] : proto[k][j];
            }
            rows.push_back(row);
        }
    }
    std::string header = "id,truth";
    for (std::size_t j = 0; j < width; ++j) header += ",c" + std::to_string(j + 1);
    std::vector<std::size_t> order(rows.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(13);
    rng.shuffle(order);
    for (const bool shuffle : {false, true}) {
        std::ofstream out(dir / (shuffle ? "sep_shuffled.csv" : "sep.csv"), std::ios::binary);
        out << header << '\n';
        for (std::size_t pos = 0; pos < rows.size(); ++pos) out << rows[shuffle ? order[pos] : pos] << '\n';
    }
    const std::string cl = " --method ENAL -k 5 --seed 3 -o ";
    call(exe + " cluster " + quote(dir / "sep.csv") + read_opts + cl + quote(dir / "sep_lab.csv"));
    call(exe + " cluster " + quote(dir / "sep_shuffled.csv") + read_opts + cl +
         quote(dir / "sep_lab_shuffled.csv"));
    const auto base = read_labels(dir / "sep_lab.csv");
    const auto shuffled = read_labels(dir / "sep_lab_shuffled.csv");
    double order_cr = 0.0;
    if (base.size() == rows.size() && shuffled.size() == rows.size()) {
        std::vector<long long> undone(rows.size());
        for (std::size_t pos = 0; pos < order.size(); ++pos) undone[order[pos]] = static_cast<long long>(shuffled[pos]);
        std::vector<long long> b(base.begin(), base.end());
        order_cr = classification_rate(Clustering::from_labels(undone), Clustering::from_labels(b));
    }
    pass = pass && order_cr == 1.0;
    notes.push_back("shuffled-input CR " + fmt(order_cr, 3));

    // Gap-aware FASTA round trip: injected gaps survive write/read, the
    // Hamming kernel skips them, and the Newick leaves are the record ids.
    Rng g(14);
    const char* symbols = "ACGT";
    std::vector<FastaRecord> recs;
    for (std::size_t i = 0; i < 12; ++i) {
        std::string s;
        for (std::size_t j = 0; j < 80; ++j) {
            const bool signal = j < 40 && g.bernoulli(0.8);
            s += g.bernoulli(0.1) ? '-' : signal ? symbols[i < 6 ? 0 : 2] : symbols[g.below(4)];
        }
        recs.push_back({"seq_" + std::to_string(i), s});
    }
    {
        std::ofstream out(dir / "aln.fasta", std::ios::binary);
        write_fasta(out, recs, 30);
    }
    const auto loaded = read_fasta_alignment(dir / "aln.fasta");
    const auto back = decode_alignment(loaded.table, loaded.ids);
    bool round = back.size() == recs.size();
    for (std::size_t i = 0; round && i < recs.size(); ++i) round = back[i].id == recs[i].id && back[i].sequence == recs[i].sequence;
    bool kernel = true;
    const auto d = hamming(loaded.table.matrix, true);
    for (std::size_t i = 0; i < recs.size(); ++i) {
        for (std::size_t j = 0; j < recs.size(); ++j) {
            std::size_t diff = 0, compared = 0;
            for (std::size_t p = 0; p < 80; ++p) {
                if (recs[i].sequence[p] == '-' || recs[j].sequence[p] == '-') continue;
                ++compared;
                diff += recs[i].sequence[p] != recs[j].sequence[p];
            }
            kernel = kernel && std::abs(d(i, j) - static_cast<double>(diff) / static_cast<double>(compared)) < 1e-15;
        }
    }
    call(exe + " cluster " + quote(dir / "aln.fasta") + " -k 2 --method ENAL --normalize -o " +
         quote(dir / "aln_lab.csv") + " --newick " + quote(dir / "aln.nwk"));
    const std::string nwk = slurp(dir / "aln.nwk");
    bool leaves = true;
    for (const auto& r : recs) leaves = leaves && nwk.find("'" + r.id + "'") != std::string::npos;
    pass = pass && round && kernel && leaves;
    notes.push_back(std::string("FASTA gap round trip ") + (round ? "exact" : "FAILED") + ", gap-aware distances " +
                    (kernel ? "exact" : "WRONG") + ", Newick leaves " + (leaves ? "match ids" : "MISSING"));

    fs::remove_all(dir);
    std::string detail;
    for (const auto& n : notes) detail += (detail.empty() ? "" : "; ") + n;
    return {pass, detail};
}

}  // namespace

int main(int argc, char** argv) {
    std::string cli;
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--cli") cli = argv[i + 1];
    }
    criterion(1, "agglomeration matches brute force", 10, agglomeration_oracle);
    criterion(2, "ensemble dissimilarity matches naive average", 5, ensemble_oracle);
    criterion(3, "simulated designs D1, D5, D10 (100 replicates)", 600, table2);
    criterion(4, "WR vs WOR at J=5000 (20 replicates)", 900, wr_vs_wor);
    criterion(5, "distinct-count fractions", 30, distinct_fractions);
    criterion(6, "distance variance law", 30, variance_law);
    criterion(7, "ensemble concentration bound", 10, concentration);
    criterion(8, "Hungarian classification rate", 10, hungarian);
    criterion(9, "ensemble variance reduction on D1", 600, variance_reduction);
    criterion(10, "CLI determinism, input order, FASTA gaps", 300, [&] { return cli_checks(cli); });
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
    return failures == 0 ? 0 : 1;
}
