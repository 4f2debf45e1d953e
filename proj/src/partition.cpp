#include "lexidepth/partition.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <ostream>

#include <json.hpp>

#include "lexidepth/depth.hpp"
#include "lexidepth/errors.hpp"

namespace lexidepth {

namespace {

// nearest medoid, ties to the lower medoid index
std::vector<std::size_t> assign_to_medoids(const DistanceMatrix& d,
                                           const std::vector<std::size_t>& medoids) {
    std::vector<std::size_t> out(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
        std::size_t best = 0;
        double best_dist = d.at(i, medoids[0]);
        for (std::size_t m = 1; m < medoids.size(); ++m) {
            const double dist = d.at(i, medoids[m]);
            if (dist < best_dist ||
                (dist == best_dist && medoids[m] < medoids[best])) {
                best = m;
                best_dist = dist;
            }
        }
        out[i] = best;
    }
    return out;
}

double total_cost(const DistanceMatrix& d, const std::vector<std::size_t>& medoids,
                  const std::vector<std::size_t>& assignment) {
    double cost = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) cost += d.at(i, medoids[assignment[i]]);
    return cost;
}

}  // namespace

Partition pam(const DistanceMatrix& d, int k, std::uint64_t seed) {
    const std::size_t n = d.size();
    if (k < 1 || static_cast<std::size_t>(k) > n) throw InvalidK("k must be in 1..n");
    if (!d.fully_defined()) throw IncompleteMatrix("distance matrix has undefined entries");
    (void)seed;  // BUILD+SWAP with index tie-breaks is already deterministic

    // BUILD: first medoid minimizes total dissimilarity, then greedily add
    // the point with the largest cost reduction.
    std::vector<std::size_t> medoids;
    std::vector<char> is_medoid(n, 0);
    {
        std::size_t best = 0;
        double best_cost = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i) {
            double c = 0.0;
            for (std::size_t j = 0; j < n; ++j) c += d.at(j, i);
            if (c < best_cost) {
                best_cost = c;
                best = i;
            }
        }
        medoids.push_back(best);
        is_medoid[best] = 1;
    }
    std::vector<double> nearest(n);
    for (std::size_t j = 0; j < n; ++j) nearest[j] = d.at(j, medoids[0]);
    while (medoids.size() < static_cast<std::size_t>(k)) {
        std::size_t best = n;
        double best_gain = -std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < n; ++c) {
            if (is_medoid[c]) continue;
            double gain = 0.0;
            for (std::size_t j = 0; j < n; ++j)
                gain += std::max(0.0, nearest[j] - d.at(j, c));
            if (gain > best_gain) {
                best_gain = gain;
                best = c;
            }
        }
        medoids.push_back(best);
        is_medoid[best] = 1;
        for (std::size_t j = 0; j < n; ++j) nearest[j] = std::min(nearest[j], d.at(j, best));
    }

    // SWAP: best-improvement passes while the total cost strictly decreases
    auto assignment = assign_to_medoids(d, medoids);
    double cost = total_cost(d, medoids, assignment);
    while (true) {
        double best_cost = cost;
        std::size_t best_m = 0, best_h = 0;
        bool improved = false;
        for (std::size_t m = 0; m < medoids.size(); ++m) {
            for (std::size_t h = 0; h < n; ++h) {
                if (is_medoid[h]) continue;
                std::vector<std::size_t> trial = medoids;
                trial[m] = h;
                const auto trial_assignment = assign_to_medoids(d, trial);
                const double trial_cost = total_cost(d, trial, trial_assignment);
                if (trial_cost < best_cost) {
                    best_cost = trial_cost;
                    best_m = m;
                    best_h = h;
                    improved = true;
                }
            }
        }
        if (!improved) break;
        is_medoid[medoids[best_m]] = 0;
        is_medoid[best_h] = 1;
        medoids[best_m] = best_h;
        assignment = assign_to_medoids(d, medoids);
        cost = total_cost(d, medoids, assignment);
    }

    // number clusters by medoid original index
    std::vector<std::size_t> order(medoids.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return medoids[a] < medoids[b]; });
    std::vector<int> cluster_of_medoid(medoids.size());
    for (std::size_t r = 0; r < order.size(); ++r)
        cluster_of_medoid[order[r]] = static_cast<int>(r) + 1;

    Partition p;
    p.labels = d.labels();
    p.k = k;
    p.method = "pam";
    p.objective = cost;
    p.assignment.resize(n);
    for (std::size_t i = 0; i < n; ++i) p.assignment[i] = cluster_of_medoid[assignment[i]];
    p.representatives.resize(static_cast<std::size_t>(k));
    for (std::size_t m = 0; m < medoids.size(); ++m)
        p.representatives[static_cast<std::size_t>(cluster_of_medoid[m] - 1)] =
            d.labels()[medoids[m]];
    return p;
}

namespace {

struct DepthTable {
    // depth[i][c]: L1 depth of point i w.r.t. cluster c's point set
    std::vector<std::vector<double>> depth;
    std::vector<double> red;  // relative depth per point
};

DepthTable compute_depths(const Embedding& e, const std::vector<int>& assignment, int k) {
    const std::size_t n = e.n();
    DepthTable t;
    t.depth.assign(n, std::vector<double>(static_cast<std::size_t>(k), 0.0));
    t.red.assign(n, 0.0);

    std::vector<std::vector<double>> cluster_pts(static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < n; ++i) {
        if (assignment[i] == Partition::kTrimmed) continue;
        auto& pts = cluster_pts[static_cast<std::size_t>(assignment[i] - 1)];
        pts.insert(pts.end(), e.coords.begin() + static_cast<std::ptrdiff_t>(i * e.dim),
                   e.coords.begin() + static_cast<std::ptrdiff_t>((i + 1) * e.dim));
    }
    std::vector<DepthEvaluator> evals;
    evals.reserve(static_cast<std::size_t>(k));
    for (int c = 0; c < k; ++c) {
        if (cluster_pts[static_cast<std::size_t>(c)].empty())
            throw InfeasibleClustering("cluster " + std::to_string(c + 1) + " is empty");
        evals.emplace_back(cluster_pts[static_cast<std::size_t>(c)], e.dim);
    }

    for (std::size_t i = 0; i < n; ++i) {
        for (int c = 0; c < k; ++c)
            t.depth[i][static_cast<std::size_t>(c)] = evals[static_cast<std::size_t>(c)].l1(e.point(i));
        if (assignment[i] == Partition::kTrimmed) continue;
        const double own = t.depth[i][static_cast<std::size_t>(assignment[i] - 1)];
        if (k == 1) {
            t.red[i] = own;
            continue;
        }
        double best_other = -std::numeric_limits<double>::infinity();
        for (int c = 1; c <= k; ++c) {
            if (c == assignment[i]) continue;
            best_other = std::max(best_other, t.depth[i][static_cast<std::size_t>(c - 1)]);
        }
        t.red[i] = own - best_other;
    }
    return t;
}

double mean_red(const DepthTable& t, const std::vector<int>& assignment) {
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < assignment.size(); ++i) {
        if (assignment[i] == Partition::kTrimmed) continue;
        sum += t.red[i];
        ++count;
    }
    return count > 0 ? sum / static_cast<double>(count) : 0.0;
}

DistanceMatrix euclidean_matrix(const Embedding& e) {
    DistanceMatrix d(e.labels);
    for (std::size_t i = 0; i < e.n(); ++i) {
        for (std::size_t j = i + 1; j < e.n(); ++j) {
            double s = 0.0;
            for (std::size_t kk = 0; kk < e.dim; ++kk) {
                const double diff = e.at(i, kk) - e.at(j, kk);
                s += diff * diff;
            }
            d.set(i, j, std::sqrt(s));
        }
    }
    return d;
}

}  // namespace

Partition tdd_cluster(const Embedding& e, const TddOptions& opts) {
    const std::size_t n = e.n();
    const int k = opts.k;
    if (!(opts.trim_fraction >= 0.0 && opts.trim_fraction < 1.0))
        throw InfeasibleClustering("trim_fraction must be in [0, 1)");
    if (k < 1 ||
        static_cast<double>(k) > static_cast<double>(n) * (1.0 - opts.trim_fraction))
        throw InfeasibleClustering("k must satisfy k <= n * (1 - trim_fraction)");
    if (opts.max_iter < 1) throw UsageError("max_iter must be >= 1");

    std::vector<int> assignment = pam(euclidean_matrix(e), k, opts.seed).assignment;
    std::vector<std::size_t> cluster_size(static_cast<std::size_t>(k), 0);
    for (int a : assignment) ++cluster_size[static_cast<std::size_t>(a - 1)];

    DepthTable table = compute_depths(e, assignment, k);
    double objective = mean_red(table, assignment);
    std::vector<double> history = {objective};

    for (std::size_t pass = 0; pass < opts.max_iter; ++pass) {
        // most negative relative depth first, one move per pass; moves that
        // would empty a cluster are skipped
        std::size_t worst = n;
        for (std::size_t i = 0; i < n; ++i) {
            if (table.red[i] >= 0.0) continue;
            if (cluster_size[static_cast<std::size_t>(assignment[i] - 1)] <= 1) continue;
            if (worst == n || table.red[i] < table.red[worst]) worst = i;
        }
        if (worst == n) break;

        int target = 0;
        double best = -std::numeric_limits<double>::infinity();
        for (int c = 1; c <= k; ++c) {
            if (c == assignment[worst]) continue;
            const double dep = table.depth[worst][static_cast<std::size_t>(c - 1)];
            if (dep > best) {
                best = dep;
                target = c;
            }
        }

        const int from = assignment[worst];
        assignment[worst] = target;
        DepthTable moved = compute_depths(e, assignment, k);
        const double moved_objective = mean_red(moved, assignment);
        if (moved_objective < objective) {  // roll back and stop
            assignment[worst] = from;
            break;
        }
        --cluster_size[static_cast<std::size_t>(from - 1)];
        ++cluster_size[static_cast<std::size_t>(target - 1)];
        table = std::move(moved);
        objective = moved_objective;
        history.push_back(objective);
    }

    // trim the lowest-depth members, then recompute depths without them
    const auto n_trim = static_cast<std::size_t>(opts.trim_fraction * static_cast<double>(n));
    std::vector<double> within(n);
    for (std::size_t i = 0; i < n; ++i)
        within[i] = table.depth[i][static_cast<std::size_t>(assignment[i] - 1)];
    if (n_trim > 0) {
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (within[a] != within[b]) return within[a] < within[b];
            return a < b;
        });
        for (std::size_t r = 0; r < n_trim; ++r) assignment[order[r]] = Partition::kTrimmed;
        table = compute_depths(e, assignment, k);
        objective = mean_red(table, assignment);
        for (std::size_t i = 0; i < n; ++i)
            if (assignment[i] != Partition::kTrimmed)
                within[i] = table.depth[i][static_cast<std::size_t>(assignment[i] - 1)];
    }

    Partition p;
    p.labels = e.labels;
    p.assignment = assignment;
    p.k = k;
    p.within_depths = within;
    p.objective = objective;
    p.objective_history = std::move(history);
    p.method = "tdd";
    p.representatives.assign(static_cast<std::size_t>(k), "");
    std::vector<double> rep_depth(static_cast<std::size_t>(k),
                                  -std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < n; ++i) {
        if (assignment[i] == Partition::kTrimmed) continue;
        const auto c = static_cast<std::size_t>(assignment[i] - 1);
        if (within[i] > rep_depth[c]) {
            rep_depth[c] = within[i];
            p.representatives[c] = e.labels[i];
        }
    }
    return p;
}

std::vector<std::string> knn_query(const DistanceMatrix& d, const std::string& target, int k) {
    const std::size_t t = d.index_of(target);
    const std::size_t n = d.size();
    if (k < 1 || static_cast<std::size_t>(k) > n - 1)
        throw InvalidK("k must be in 1..n-1");
    std::vector<std::size_t> order;
    order.reserve(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        if (i == t) continue;
        if (!d.defined(t, i)) throw IncompleteMatrix("undefined distance to " + d.labels()[i]);
        order.push_back(i);
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return d.at(t, a) < d.at(t, b); });
    std::vector<std::string> out;
    out.reserve(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) out.push_back(d.labels()[order[static_cast<std::size_t>(i)]]);
    return out;
}

RandScores rand_index(const Partition& a, const Partition& b) {
    if (a.labels.size() != b.labels.size()) throw LabelMismatch("partition label sets differ");
    // match by label, excluding labels trimmed in either partition
    std::vector<std::size_t> b_index(a.labels.size());
    for (std::size_t i = 0; i < a.labels.size(); ++i) {
        bool found = false;
        for (std::size_t j = 0; j < b.labels.size(); ++j) {
            if (b.labels[j] == a.labels[i]) {
                b_index[i] = j;
                found = true;
                break;
            }
        }
        if (!found) throw LabelMismatch("label " + a.labels[i] + " missing from second partition");
    }

    std::vector<int> xa, xb;
    for (std::size_t i = 0; i < a.labels.size(); ++i) {
        const int ca = a.assignment[i];
        const int cb = b.assignment[b_index[i]];
        if (ca == Partition::kTrimmed || cb == Partition::kTrimmed) continue;
        xa.push_back(ca);
        xb.push_back(cb);
    }
    const std::size_t n = xa.size();
    RandScores s;
    if (n < 2) {
        s.rand = 1.0;
        s.adjusted = 1.0;
        return s;
    }

    // contingency table
    const int ka = *std::max_element(xa.begin(), xa.end());
    const int kb = *std::max_element(xb.begin(), xb.end());
    std::vector<std::vector<long long>> table(static_cast<std::size_t>(ka),
                                              std::vector<long long>(static_cast<std::size_t>(kb), 0));
    for (std::size_t i = 0; i < n; ++i)
        ++table[static_cast<std::size_t>(xa[i] - 1)][static_cast<std::size_t>(xb[i] - 1)];

    const auto choose2 = [](long long m) { return static_cast<double>(m) * (m - 1) / 2.0; };
    double sum_ij = 0.0, sum_a = 0.0, sum_b = 0.0;
    for (int i = 0; i < ka; ++i) {
        long long row = 0;
        for (int j = 0; j < kb; ++j) {
            row += table[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            sum_ij += choose2(table[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
        }
        sum_a += choose2(row);
    }
    for (int j = 0; j < kb; ++j) {
        long long col = 0;
        for (int i = 0; i < ka; ++i) col += table[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        sum_b += choose2(col);
    }
    const double pairs = choose2(static_cast<long long>(n));

    // Rand = (agreements on "together" + agreements on "apart") / all pairs
    s.rand = (pairs + 2.0 * sum_ij - sum_a - sum_b) / pairs;
    const double expected = sum_a * sum_b / pairs;
    const double maximum = 0.5 * (sum_a + sum_b);
    s.adjusted = maximum == expected ? 1.0 : (sum_ij - expected) / (maximum - expected);
    return s;
}

void write_partition_csv(const Partition& p, std::ostream& out, char delimiter) {
    const bool depths = !p.within_depths.empty();
    out << "label" << delimiter << "cluster";
    if (depths) out << delimiter << "within_depth";
    out << delimiter << "trimmed\n";
    char buf[64];
    for (std::size_t i = 0; i < p.labels.size(); ++i) {
        const bool trimmed = p.assignment[i] == Partition::kTrimmed;
        out << p.labels[i] << delimiter;
        if (trimmed)
            out << "TRIMMED";
        else
            out << p.assignment[i];
        if (depths) {
            std::snprintf(buf, sizeof(buf), "%.9g", p.within_depths[i]);
            out << delimiter << buf;
        }
        out << delimiter << (trimmed ? "true" : "false") << '\n';
    }
}

void write_partition_json(const Partition& p, std::ostream& out) {
    nlohmann::json j;
    j["method"] = p.method;
    j["k"] = p.k;
    j["objective"] = p.objective;
    j["labels"] = p.labels;
    j["assignment"] = p.assignment;
    if (!p.within_depths.empty()) j["within_depths"] = p.within_depths;
    if (!p.representatives.empty()) j["representatives"] = p.representatives;
    std::vector<std::string> trimmed;
    for (std::size_t i = 0; i < p.labels.size(); ++i)
        if (p.assignment[i] == Partition::kTrimmed) trimmed.push_back(p.labels[i]);
    j["trimmed"] = trimmed;
    out << j.dump(2) << '\n';
}

}  // namespace lexidepth
