#include "lexidepth/hclust.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include "lexidepth/errors.hpp"

namespace lexidepth {

Linkage linkage_from_string(const std::string& s) {
    if (s == "single") return Linkage::single;
    if (s == "complete") return Linkage::complete;
    if (s == "average") return Linkage::average;
    throw UsageError("unknown linkage: " + s + " (expected single|complete|average)");
}

double Dendrogram::height_of(int node) const {
    const int n = static_cast<int>(leaves.size());
    return node < n ? 0.0 : merges[static_cast<std::size_t>(node - n)].height;
}

namespace {

// Cluster state for the O(n^3) agglomeration. Average linkage tracks the
// cross-pair distance SUM (exact for integer inputs) and divides by the pair
// count on comparison, which keeps tie behavior identical to a from-scratch
// mean over the same values.
struct Cluster {
    int node = 0;  // node id in the dendrogram
    int rep = 0;   // smallest original leaf index, used for tie-breaking
    int size = 0;
    bool active = false;
};

}  // namespace

Dendrogram agglomerate(const DistanceMatrix& d, Linkage linkage) {
    const std::size_t n = d.size();
    if (!d.fully_defined()) throw IncompleteMatrix("distance matrix has undefined entries");

    Dendrogram t;
    t.leaves = d.labels();
    if (n <= 1) return t;

    std::vector<Cluster> cl(n);
    // link[i][j]: single/complete distance, or cross-pair sum for average
    std::vector<std::vector<double>> link(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        cl[i] = {static_cast<int>(i), static_cast<int>(i), 1, true};
        for (std::size_t j = 0; j < n; ++j) link[i][j] = d.at(i, j);
    }

    const auto value = [&](std::size_t i, std::size_t j) {
        if (linkage == Linkage::average)
            return link[i][j] / (static_cast<double>(cl[i].size) * cl[j].size);
        return link[i][j];
    };

    t.merges.reserve(n - 1);
    for (std::size_t step = 0; step + 1 < n; ++step) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t bi = 0, bj = 0;
        int best_lo = 0, best_hi = 0;
        bool found = false;
        for (std::size_t i = 0; i < n; ++i) {
            if (!cl[i].active) continue;
            for (std::size_t j = i + 1; j < n; ++j) {
                if (!cl[j].active) continue;
                const double v = value(i, j);
                const int lo = std::min(cl[i].rep, cl[j].rep);
                const int hi = std::max(cl[i].rep, cl[j].rep);
                if (!found || v < best ||
                    (v == best && (lo < best_lo || (lo == best_lo && hi < best_hi)))) {
                    best = v;
                    bi = i;
                    bj = j;
                    best_lo = lo;
                    best_hi = hi;
                    found = true;
                }
            }
        }

        const std::size_t a = cl[bi].rep <= cl[bj].rep ? bi : bj;
        const std::size_t b = a == bi ? bj : bi;
        t.merges.push_back({cl[a].node, cl[b].node, best, cl[a].size + cl[b].size});

        for (std::size_t k = 0; k < n; ++k) {
            if (!cl[k].active || k == a || k == b) continue;
            switch (linkage) {
                case Linkage::single:
                    link[a][k] = std::min(link[a][k], link[b][k]);
                    break;
                case Linkage::complete:
                    link[a][k] = std::max(link[a][k], link[b][k]);
                    break;
                case Linkage::average:
                    link[a][k] = link[a][k] + link[b][k];
                    break;
            }
            link[k][a] = link[a][k];
        }
        cl[a].node = static_cast<int>(n + step);
        cl[a].size += cl[b].size;
        cl[b].active = false;
    }
    return t;
}

Partition cut(const Dendrogram& t, int k) {
    const int n = static_cast<int>(t.n_leaves());
    if (k < 1 || k > std::max(n, 1)) throw InvalidK("k must be in 1..n");

    // apply the n-k lowest merges with a union-find over leaves
    std::vector<int> parent(t.n_leaves());
    std::iota(parent.begin(), parent.end(), 0);
    const auto find = [&](int x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] =
                parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    };

    // leaves under each node, built in merge order
    std::vector<std::vector<int>> node_leaves(t.n_leaves() + t.merges.size());
    for (int i = 0; i < n; ++i) node_leaves[static_cast<std::size_t>(i)] = {i};
    for (std::size_t m = 0; m < t.merges.size(); ++m) {
        const auto& mg = t.merges[m];
        auto& dst = node_leaves[t.n_leaves() + m];
        dst = node_leaves[static_cast<std::size_t>(mg.left)];
        dst.insert(dst.end(), node_leaves[static_cast<std::size_t>(mg.right)].begin(),
                   node_leaves[static_cast<std::size_t>(mg.right)].end());
        if (m < t.merges.size() - static_cast<std::size_t>(k - 1)) {
            const int ra = find(node_leaves[static_cast<std::size_t>(mg.left)][0]);
            const int rb = find(node_leaves[static_cast<std::size_t>(mg.right)][0]);
            parent[static_cast<std::size_t>(rb)] = ra;
        }
    }

    Partition p;
    p.labels = t.leaves;
    p.assignment.assign(t.n_leaves(), 0);
    p.k = k;
    p.method = "cut";
    int next_id = 0;
    std::vector<int> id_of_root(t.n_leaves(), 0);
    for (int i = 0; i < n; ++i) {
        const int r = find(i);
        if (id_of_root[static_cast<std::size_t>(r)] == 0) id_of_root[static_cast<std::size_t>(r)] = ++next_id;
        p.assignment[static_cast<std::size_t>(i)] = id_of_root[static_cast<std::size_t>(r)];
    }
    return p;
}

DistanceMatrix cophenetic(const Dendrogram& t) {
    DistanceMatrix out(t.leaves);
    std::vector<std::vector<int>> node_leaves(t.n_leaves() + t.merges.size());
    for (std::size_t i = 0; i < t.n_leaves(); ++i) node_leaves[i] = {static_cast<int>(i)};
    for (std::size_t m = 0; m < t.merges.size(); ++m) {
        const auto& mg = t.merges[m];
        const auto& ls = node_leaves[static_cast<std::size_t>(mg.left)];
        const auto& rs = node_leaves[static_cast<std::size_t>(mg.right)];
        for (int a : ls)
            for (int b : rs)
                out.set(static_cast<std::size_t>(a), static_cast<std::size_t>(b), mg.height);
        auto& dst = node_leaves[t.n_leaves() + m];
        dst = ls;
        dst.insert(dst.end(), rs.begin(), rs.end());
    }
    return out;
}

namespace {

void quote_label(const std::string& label, std::string& out) {
    out.push_back('\'');
    for (char c : label) {
        out.push_back(c);
        if (c == '\'') out.push_back('\'');
    }
    out.push_back('\'');
}

void newick_node(const Dendrogram& t, int node, double parent_height, std::string& out) {
    const int n = static_cast<int>(t.n_leaves());
    char buf[48];
    if (node < n) {
        quote_label(t.leaves[static_cast<std::size_t>(node)], out);
    } else {
        const auto& mg = t.merges[static_cast<std::size_t>(node - n)];
        out.push_back('(');
        newick_node(t, mg.left, mg.height, out);
        out.push_back(',');
        newick_node(t, mg.right, mg.height, out);
        out.push_back(')');
    }
    std::snprintf(buf, sizeof(buf), ":%.10g", parent_height - t.height_of(node));
    out += buf;
}

}  // namespace

std::string to_newick(const Dendrogram& t) {
    std::string out;
    if (t.n_leaves() == 0) return ";";
    if (t.merges.empty()) {
        quote_label(t.leaves[0], out);
        out += ";";
        return out;
    }
    const int root = static_cast<int>(t.n_leaves() + t.merges.size()) - 1;
    const int n = static_cast<int>(t.n_leaves());
    const auto& mg = t.merges[static_cast<std::size_t>(root - n)];
    out.push_back('(');
    newick_node(t, mg.left, mg.height, out);
    out.push_back(',');
    newick_node(t, mg.right, mg.height, out);
    out += ");";
    return out;
}

double matrix_correlation(const DistanceMatrix& a, const DistanceMatrix& b) {
    if (a.labels() != b.labels()) throw LabelMismatch("matrix labels differ");
    std::vector<double> x, y;
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = i + 1; j < a.size(); ++j) {
            x.push_back(a.at(i, j));
            y.push_back(b.at(i, j));
        }
    }
    const std::size_t m = x.size();
    if (m < 2) return 1.0;
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(m);
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(m);
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < m; ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0 || syy == 0) return sxx == syy ? 1.0 : 0.0;
    return sxy / std::sqrt(sxx * syy);
}

}  // namespace lexidepth
