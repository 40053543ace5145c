#include "catclust/hclust.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace catclust {

Linkage parse_linkage(std::string_view name) {
    std::string s(name);
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (s == "single" || s == "sl") return Linkage::single;
    if (s == "average" || s == "al" || s == "upgma") return Linkage::average;
    if (s == "complete" || s == "cl") return Linkage::complete;
    throw std::invalid_argument("unknown linkage '" + std::string(name) + "'");
}

std::string_view linkage_name(Linkage linkage) noexcept {
    switch (linkage) {
        case Linkage::single: return "single";
        case Linkage::average: return "average";
        case Linkage::complete: return "complete";
    }
    return "average";
}

// ---------------------------------------------------------------------------
// Clustering

Clustering::Clustering(std::vector<std::size_t> labels, std::size_t clusters)
    : labels_(std::move(labels)), clusters_(clusters) {
    std::vector<char> seen(clusters_, 0);
    for (auto l : labels_) {
        if (l >= clusters_) throw std::invalid_argument("cluster label out of range");
        seen[l] = 1;
    }
    if (std::find(seen.begin(), seen.end(), 0) != seen.end())
        throw std::invalid_argument("every cluster label in [0, K) must be used");
}

Clustering Clustering::from_labels(std::span<const long long> labels) {
    std::vector<std::size_t> dense(labels.size());
    std::vector<std::pair<long long, std::size_t>> seen;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        auto it = std::find_if(seen.begin(), seen.end(), [&](const auto& p) { return p.first == labels[i]; });
        if (it == seen.end()) {
            seen.emplace_back(labels[i], seen.size());
            dense[i] = seen.size() - 1;
        } else {
            dense[i] = it->second;
        }
    }
    return Clustering(std::move(dense), seen.size());
}

std::vector<std::size_t> Clustering::cluster_sizes() const {
    std::vector<std::size_t> sizes(clusters_, 0);
    for (auto l : labels_) ++sizes[l];
    return sizes;
}

// ---------------------------------------------------------------------------
// Dendrogram

Dendrogram::Dendrogram(std::size_t leaves, std::vector<Merge> merges) : leaves_(leaves), merges_(std::move(merges)) {
    if (leaves_ == 0) throw std::invalid_argument("dendrogram needs at least one leaf");
    if (merges_.size() != leaves_ - 1) throw std::invalid_argument("dendrogram needs exactly n-1 merges");
    std::vector<std::size_t> sizes(2 * leaves_ - 1, 1);
    std::vector<char> used(2 * leaves_ - 1, 0);
    for (std::size_t k = 0; k < merges_.size(); ++k) {
        const Merge& m = merges_[k];
        const std::size_t node = leaves_ + k;
        if (m.left >= node || m.right >= node || m.left == m.right)
            throw std::invalid_argument("merge references an invalid child");
        if (used[m.left] || used[m.right]) throw std::invalid_argument("node merged twice");
        used[m.left] = used[m.right] = 1;
        if (m.size != sizes[m.left] + sizes[m.right]) throw std::invalid_argument("merge size mismatch");
        sizes[node] = m.size;
        if (std::isnan(m.height)) throw std::invalid_argument("merge height is NaN");
    }
}

void Dendrogram::set_leaf_labels(std::vector<std::string> labels) {
    if (!labels.empty() && labels.size() != leaves_) throw std::invalid_argument("one label per leaf required");
    leaf_labels_ = std::move(labels);
}

// ---------------------------------------------------------------------------
// Agglomeration

namespace {

class Agglomerator {
public:
    Agglomerator(const DissimilarityMatrix& d, Linkage linkage)
        : n_(d.size()), linkage_(linkage), w_(d.values().begin(), d.values().end()), size_(n_, 1), node_(n_),
          active_(n_, 1), nn_(n_, 0), nn_value_(n_, kInf) {
        std::iota(node_.begin(), node_.end(), std::size_t{0});
    }

    Dendrogram run() {
        for (std::size_t a = 0; a + 1 < n_; ++a) refresh(a);
        std::vector<Merge> merges;
        merges.reserve(n_ - 1);
        for (std::size_t step = 0; step + 1 < n_; ++step) {
            // Row a caches its best partner b > a, so the first row attaining
            // the global minimum yields the lexicographically smallest pair.
            std::size_t a = n_;
            double best = kInf;
            for (std::size_t r = 0; r < n_; ++r) {
                if (active_[r] && nn_value_[r] < best) {
                    best = nn_value_[r];
                    a = r;
                }
            }
            if (a == n_) {
                // Only reachable when every remaining value is +inf.
                for (std::size_t r = 0; r < n_ && a == n_; ++r) {
                    if (active_[r] && nn_[r] != r) a = r;
                }
            }
            const std::size_t b = nn_[a];
            merges.push_back({node_[a], node_[b], best, size_[a] + size_[b]});
            merge(a, b, n_ + step);
        }
        return Dendrogram(n_, std::move(merges));
    }

private:
    static constexpr double kInf = std::numeric_limits<double>::infinity();

    double value(std::size_t a, std::size_t b) const noexcept {
        const double w = w_[a * n_ + b];
        if (linkage_ == Linkage::average) return w / (static_cast<double>(size_[a]) * static_cast<double>(size_[b]));
        return w;
    }

    void refresh(std::size_t a) {
        nn_[a] = a;
        nn_value_[a] = kInf;
        for (std::size_t b = a + 1; b < n_; ++b) {
            if (!active_[b]) continue;
            const double v = value(a, b);
            if (nn_[a] == a || v < nn_value_[a]) {
                nn_[a] = b;
                nn_value_[a] = v;
            }
        }
        if (nn_[a] == a) nn_value_[a] = kInf;
    }

    void merge(std::size_t a, std::size_t b, std::size_t new_node) {
        for (std::size_t c = 0; c < n_; ++c) {
            if (!active_[c] || c == a || c == b) continue;
            double& wac = w_[a * n_ + c];
            const double wbc = w_[b * n_ + c];
            switch (linkage_) {
                case Linkage::single: wac = std::min(wac, wbc); break;
                case Linkage::complete: wac = std::max(wac, wbc); break;
                case Linkage::average: wac += wbc; break;
            }
            w_[c * n_ + a] = wac;
        }
        active_[b] = 0;
        size_[a] += size_[b];
        node_[a] = new_node;

        for (std::size_t c = 0; c < a; ++c) {
            if (!active_[c]) continue;
            if (nn_[c] == a || nn_[c] == b) {
                refresh(c);
            } else {
                const double v = value(c, a);
                if (v < nn_value_[c] || (v == nn_value_[c] && a < nn_[c])) {
                    nn_[c] = a;
                    nn_value_[c] = v;
                }
            }
        }
        refresh(a);
        for (std::size_t c = a + 1; c < b; ++c) {
            if (active_[c] && nn_[c] == b) refresh(c);
        }
    }

    std::size_t n_;
    Linkage linkage_;
    std::vector<double> w_;  // min/max linkage value, or pair sum for average
    std::vector<std::size_t> size_;
    std::vector<std::size_t> node_;
    std::vector<char> active_;
    std::vector<std::size_t> nn_;
    std::vector<double> nn_value_;
};

}  // namespace

Dendrogram agglomerate(const DissimilarityMatrix& d, Linkage linkage) {
    if (d.size() < 2) throw std::invalid_argument("agglomerate needs at least two points");
    return Agglomerator(d, linkage).run();
}

// ---------------------------------------------------------------------------
// Cutting

namespace {

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t x) {
    while (parent[x] != x) {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    return x;
}

Clustering label_by_smallest_member(std::span<const std::size_t> component) {
    const std::size_t n = component.size();
    std::vector<std::size_t> relabel(component.empty() ? 0 : *std::max_element(component.begin(), component.end()) + 1,
                                     n);
    std::vector<std::size_t> labels(n);
    std::size_t next = 0;
    for (std::size_t i = 0; i < n; ++i) {
        auto& l = relabel[component[i]];
        if (l == n) l = next++;
        labels[i] = l;
    }
    return Clustering(std::move(labels), next);
}

}  // namespace

Clustering cut(const Dendrogram& tree, std::size_t clusters) {
    const std::size_t n = tree.leaves();
    if (clusters < 1 || clusters > n) throw std::invalid_argument("cut: K must lie in [1, n]");
    std::vector<std::size_t> parent(2 * n - 1);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    const auto merges = tree.merges();
    for (std::size_t k = 0; k < n - clusters; ++k) {
        parent[merges[k].left] = n + k;
        parent[merges[k].right] = n + k;
    }
    std::vector<std::size_t> root(n);
    for (std::size_t i = 0; i < n; ++i) root[i] = find_root(parent, i);
    return label_by_smallest_member(root);
}

Clustering cut_with_outlier_deferral(const Dendrogram& tree, const DissimilarityMatrix& d, std::size_t clusters,
                                     double alpha) {
    if (!(alpha >= 0.0 && alpha < 0.5)) throw std::invalid_argument("alpha must lie in [0, 0.5)");
    if (d.size() != tree.leaves()) throw std::invalid_argument("dissimilarity size does not match dendrogram");
    Clustering base = cut(tree, clusters);
    if (alpha == 0.0) return base;

    const std::size_t n = tree.leaves();
    const double threshold = alpha * static_cast<double>(n);
    const auto sizes = base.cluster_sizes();
    std::vector<char> survives(sizes.size());
    bool any = false;
    bool all = true;
    for (std::size_t c = 0; c < sizes.size(); ++c) {
        survives[c] = static_cast<double>(sizes[c]) >= threshold;
        any = any || survives[c];
        all = all && survives[c];
    }
    if (!any) throw std::invalid_argument("alpha too large: no cluster reaches alpha*n members");
    if (all) return base;

    std::vector<std::vector<std::size_t>> members(sizes.size());
    for (std::size_t i = 0; i < n; ++i) members[base[i]].push_back(i);

    std::vector<std::size_t> target(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (survives[base[i]]) {
            target[i] = base[i];
            continue;
        }
        std::size_t best_cluster = sizes.size();
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < sizes.size(); ++c) {
            if (!survives[c]) continue;
            double sum = 0.0;
            for (auto m : members[c]) sum += d(i, m);
            const double avg = sum / static_cast<double>(members[c].size());
            if (best_cluster == sizes.size() || avg < best) {
                best = avg;
                best_cluster = c;
            }
        }
        target[i] = best_cluster;
    }
    return label_by_smallest_member(target);
}

// ---------------------------------------------------------------------------
// Newick

namespace {

void append_label(std::string& out, const std::string& label) {
    const bool needs_quotes =
        label.empty() || label.find_first_of(" \t\n()[]':;,_") != std::string::npos;
    if (!needs_quotes) {
        out += label;
        return;
    }
    out += '\'';
    for (char c : label) {
        if (c == '\'') out += '\'';
        out += c;
    }
    out += '\'';
}

void append_length(std::string& out, double length) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, length);
    out += ':';
    out.append(buf, res.ptr);
}

}  // namespace

std::string to_newick(const Dendrogram& tree) {
    const std::size_t n = tree.leaves();
    const auto& labels = tree.leaf_labels();
    const auto merges = tree.merges();
    std::string out;

    auto emit_leaf = [&](std::size_t leaf) {
        append_label(out, labels.empty() ? std::to_string(leaf) : labels[leaf]);
    };
    if (n == 1) {
        emit_leaf(0);
        out += ';';
        return out;
    }

    // Iterative traversal; SL chains can be as deep as n.
    struct Frame {
        std::size_t node;
        int state;
    };
    std::vector<Frame> stack{{2 * n - 2, 0}};
    while (!stack.empty()) {
        Frame& f = stack.back();
        if (f.node < n) {
            emit_leaf(f.node);
            stack.pop_back();
        } else {
            const Merge& m = merges[f.node - n];
            if (f.state == 0) {
                out += '(';
                f.state = 1;
                stack.push_back({m.left, 0});
                continue;
            }
            if (f.state == 1) {
                append_length(out, m.height - tree.height(m.left));
                out += ',';
                f.state = 2;
                stack.push_back({m.right, 0});
                continue;
            }
            append_length(out, m.height - tree.height(m.right));
            out += ')';
            stack.pop_back();
        }
    }
    out += ';';
    return out;
}

}  // namespace catclust
