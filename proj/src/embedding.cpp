#include "lexidepth/embedding.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numeric>
#include <ostream>

#include "lexidepth/errors.hpp"
#include "lexidepth/rng.hpp"

namespace lexidepth {

namespace {

void center_columns(std::vector<double>& coords, std::size_t n, std::size_t dim) {
    for (std::size_t k = 0; k < dim; ++k) {
        double mean = 0.0;
        for (std::size_t i = 0; i < n; ++i) mean += coords[i * dim + k];
        mean /= static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) coords[i * dim + k] -= mean;
    }
}

std::vector<double> embedded_distances(const std::vector<double>& coords, std::size_t n,
                                       std::size_t dim) {
    std::vector<double> d;
    d.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < dim; ++k) {
                const double diff = coords[i * dim + k] - coords[j * dim + k];
                s += diff * diff;
            }
            d.push_back(std::sqrt(s));
        }
    }
    return d;
}

// Pool-adjacent-violators with unit weights: least-squares monotone
// nondecreasing fit of y in the given order.
std::vector<double> pava(const std::vector<double>& y) {
    const std::size_t m = y.size();
    std::vector<double> level(m);   // block means
    std::vector<std::size_t> size(m);
    std::size_t blocks = 0;
    for (std::size_t i = 0; i < m; ++i) {
        level[blocks] = y[i];
        size[blocks] = 1;
        ++blocks;
        while (blocks > 1 && level[blocks - 2] > level[blocks - 1]) {
            const double merged = (level[blocks - 2] * static_cast<double>(size[blocks - 2]) +
                                   level[blocks - 1] * static_cast<double>(size[blocks - 1])) /
                                  static_cast<double>(size[blocks - 2] + size[blocks - 1]);
            size[blocks - 2] += size[blocks - 1];
            level[blocks - 2] = merged;
            --blocks;
        }
    }
    std::vector<double> out;
    out.reserve(m);
    for (std::size_t b = 0; b < blocks; ++b) out.insert(out.end(), size[b], level[b]);
    return out;
}

struct StressFit {
    double stress1 = 0.0;           // sqrt(sum (d - dhat)^2 / sum d^2)
    std::vector<double> disparities;  // dhat per pair, pair order
};

// Isotonic fit of the embedded distances onto the dissimilarity rank order.
// `order` sorts pairs by (dissimilarity, embedded distance): Kruskal's
// primary approach lets tied dissimilarities take unequal fitted values.
StressFit fit_disparities(const std::vector<double>& delta, const std::vector<double>& dist) {
    const std::size_t m = delta.size();
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (delta[a] != delta[b]) return delta[a] < delta[b];
        if (dist[a] != dist[b]) return dist[a] < dist[b];
        return a < b;
    });

    std::vector<double> y(m);
    for (std::size_t r = 0; r < m; ++r) y[r] = dist[order[r]];
    const std::vector<double> fit = pava(y);

    StressFit out;
    out.disparities.resize(m);
    for (std::size_t r = 0; r < m; ++r) out.disparities[order[r]] = fit[r];

    double num = 0.0, den = 0.0;
    for (std::size_t p = 0; p < m; ++p) {
        const double r = dist[p] - out.disparities[p];
        num += r * r;
        den += dist[p] * dist[p];
    }
    out.stress1 = den > 0 ? std::sqrt(num / den) : 0.0;
    return out;
}

}  // namespace

Embedding classical_mds(const DistanceMatrix& d, std::size_t dim) {
    const std::size_t n = d.size();
    if (!d.fully_defined()) throw IncompleteMatrix("distance matrix has undefined entries");
    if (dim < 1 || dim + 1 > n)
        throw DimensionTooLarge("dim must be in 1..n-1 (n = " + std::to_string(n) + ")");

    // double centering: B = -1/2 J D2 J
    Eigen::MatrixXd b(n, n);
    std::vector<double> row_mean(n, 0.0);
    double grand = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double sq = d.at(i, j) * d.at(i, j);
            b(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = sq;
            row_mean[i] += sq;
        }
        grand += row_mean[i];
        row_mean[i] /= static_cast<double>(n);
    }
    grand /= static_cast<double>(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            b(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                -0.5 * (b(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) -
                        row_mean[i] - row_mean[j] + grand);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(b);
    if (solver.info() != Eigen::Success)
        throw NumericError("eigendecomposition failed to converge");

    Embedding e;
    e.labels = d.labels();
    e.dim = dim;
    e.coords.assign(n * dim, 0.0);
    e.eigenvalues.resize(n);
    // Eigen sorts ascending; flip to descending
    for (std::size_t k = 0; k < n; ++k)
        e.eigenvalues[k] = solver.eigenvalues()(static_cast<Eigen::Index>(n - 1 - k));

    bool non_euclidean = false;
    for (std::size_t k = 0; k < dim; ++k) {
        const double lambda = e.eigenvalues[k];
        if (lambda <= 0.0) {
            if (lambda < 0.0) non_euclidean = true;
            continue;  // zero column
        }
        const double scale = std::sqrt(lambda);
        const auto col = solver.eigenvectors().col(static_cast<Eigen::Index>(n - 1 - k));
        for (std::size_t i = 0; i < n; ++i)
            e.coords[i * dim + k] = scale * col(static_cast<Eigen::Index>(i));
    }
    if (non_euclidean)
        e.warnings.push_back("NonEuclidean: negative eigenvalue among the retained dimensions");

    center_columns(e.coords, n, dim);
    return e;
}

Embedding nonmetric_mds(const DistanceMatrix& d, const NonmetricOptions& opts) {
    const std::size_t n = d.size();
    if (!d.fully_defined()) throw IncompleteMatrix("distance matrix has undefined entries");
    if (opts.dim < 1 || opts.dim + 1 > n)
        throw DimensionTooLarge("dim must be in 1..n-1 (n = " + std::to_string(n) + ")");
    if (opts.max_iter < 1) throw UsageError("max_iter must be >= 1");
    if (!(opts.tol > 0)) throw UsageError("tol must be > 0");

    const std::size_t dim = opts.dim;
    std::vector<double> delta;
    delta.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) delta.push_back(d.at(i, j));

    Embedding e;
    const bool degenerate =
        !delta.empty() && std::all_of(delta.begin(), delta.end(),
                                      [&](double v) { return v == delta.front(); });
    if (opts.init == MdsInit::classical || degenerate) {
        e = classical_mds(d, dim);
        e.eigenvalues.clear();
    } else {
        e.labels = d.labels();
        e.dim = dim;
        e.coords.resize(n * dim);
        Rng rng(opts.seed);
        for (double& c : e.coords) c = rng.normal();
        center_columns(e.coords, n, dim);
    }
    if (degenerate) {
        e.warnings.push_back("DegenerateRanks: all dissimilarities equal, returning the "
                             "classical solution");
        e.stress = 0.0;
        e.stress_history = {0.0};
        return e;
    }

    std::vector<double> dist = embedded_distances(e.coords, n, dim);
    StressFit fit = fit_disparities(delta, dist);
    double stress = fit.stress1;
    e.stress_history = {stress};

    std::vector<double> next(n * dim);
    for (std::size_t iter = 0; iter < opts.max_iter; ++iter) {
        // rescale disparities to the current distance magnitude before the
        // Guttman step so the configuration scale cannot drift toward zero
        double sum_d2 = 0.0, sum_h2 = 0.0;
        for (std::size_t p = 0; p < dist.size(); ++p) {
            sum_d2 += dist[p] * dist[p];
            sum_h2 += fit.disparities[p] * fit.disparities[p];
        }
        const double scale = sum_h2 > 0 ? std::sqrt(sum_d2 / sum_h2) : 1.0;

        // Guttman transform: X' = (1/n) B(X) X with b_ij = -dhat_ij / d_ij
        std::fill(next.begin(), next.end(), 0.0);
        std::size_t p = 0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j, ++p) {
                const double ratio = dist[p] > 0 ? scale * fit.disparities[p] / dist[p] : 0.0;
                for (std::size_t k = 0; k < dim; ++k) {
                    const double diff = e.coords[i * dim + k] - e.coords[j * dim + k];
                    next[i * dim + k] += ratio * diff;
                    next[j * dim + k] -= ratio * diff;
                }
            }
        }
        for (double& c : next) c /= static_cast<double>(n);

        std::vector<double> next_dist = embedded_distances(next, n, dim);
        StressFit next_fit = fit_disparities(delta, next_dist);

        if (next_fit.stress1 > stress) break;  // roll back, keep the best iterate

        e.coords = next;
        dist = std::move(next_dist);
        fit = std::move(next_fit);
        const double decrease = stress - fit.stress1;
        stress = fit.stress1;
        e.stress_history.push_back(stress);
        if (decrease < opts.tol) break;
    }

    e.stress = stress;
    center_columns(e.coords, n, dim);
    return e;
}

double procrustes_distance(const Embedding& a, const Embedding& b, bool allow_scaling) {
    if (a.labels != b.labels) throw LabelMismatch("embeddings have different labels");
    if (a.dim != b.dim) throw LabelMismatch("embeddings have different dimensions");
    const std::size_t n = a.n();
    const auto dim = static_cast<Eigen::Index>(a.dim);
    if (n == 0) return 0.0;

    Eigen::MatrixXd x(static_cast<Eigen::Index>(n), dim), y(static_cast<Eigen::Index>(n), dim);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < a.dim; ++k) {
            x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = a.at(i, k);
            y(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = b.at(i, k);
        }
    x.rowwise() -= x.colwise().mean();
    y.rowwise() -= y.colwise().mean();

    // rotation (and reflection) aligning x to y via SVD of the cross-covariance
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(x.transpose() * y,
                                          Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::MatrixXd rot = svd.matrixU() * svd.matrixV().transpose();
    Eigen::MatrixXd aligned = x * rot;

    if (allow_scaling) {
        const double xx = aligned.squaredNorm();
        if (xx > 0) aligned *= svd.singularValues().sum() / xx;
    }
    return std::sqrt((aligned - y).squaredNorm() / static_cast<double>(n));
}

void write_embedding(const Embedding& e, std::ostream& out, char delimiter) {
    out << "label";
    for (std::size_t k = 0; k < e.dim; ++k) out << delimiter << 'x' << (k + 1);
    out << '\n';
    char buf[64];
    for (std::size_t i = 0; i < e.n(); ++i) {
        out << e.labels[i];
        for (std::size_t k = 0; k < e.dim; ++k) {
            std::snprintf(buf, sizeof(buf), "%.12g", e.at(i, k));
            out << delimiter << buf;
        }
        out << '\n';
    }
}

Embedding read_embedding(std::istream& in, char delimiter) {
    Embedding e;
    std::string line;
    if (!std::getline(in, line)) throw DataError("empty embedding file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t count = std::count(line.begin(), line.end(), delimiter);
    if (count < 1) throw DataError("embedding header needs at least one coordinate column");
    e.dim = count;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::size_t start = 0;
        std::vector<std::string> cells;
        while (true) {
            const std::size_t pos = line.find(delimiter, start);
            if (pos == std::string::npos) {
                cells.push_back(line.substr(start));
                break;
            }
            cells.push_back(line.substr(start, pos - start));
            start = pos + 1;
        }
        if (cells.size() != e.dim + 1)
            throw DataError("embedding row has " + std::to_string(cells.size()) +
                            " cells, expected " + std::to_string(e.dim + 1));
        e.labels.push_back(cells[0]);
        for (std::size_t k = 0; k < e.dim; ++k) {
            try {
                e.coords.push_back(std::stod(cells[k + 1]));
            } catch (const std::exception&) {
                throw DataError("cannot parse embedding value \"" + cells[k + 1] + "\"");
            }
        }
    }
    return e;
}

}  // namespace lexidepth
