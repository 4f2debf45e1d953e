#include "lexidepth/depth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include <json.hpp>

#include "lexidepth/errors.hpp"
#include "lexidepth/kernels.hpp"
#include "lexidepth/rng.hpp"

namespace lexidepth {

DepthMethod depth_method_from_string(const std::string& s) {
    if (s == "spatial") return DepthMethod::spatial;
    if (s == "l1") return DepthMethod::l1;
    throw UsageError("unknown depth method: " + s + " (expected spatial|l1)");
}

std::string to_string(DepthMethod m) { return m == DepthMethod::spatial ? "spatial" : "l1"; }

DepthEvaluator::DepthEvaluator(std::span<const double> ref_flat, std::size_t dim) : dim_(dim) {
    if (dim == 0) throw EmptyReference("reference dimension must be >= 1");
    n_ = ref_flat.size() / dim;
    if (n_ == 0) throw EmptyReference("reference point set is empty");
    if (dim_ == 2) {
        xs_.resize(n_);
        ys_.resize(n_);
        for (std::size_t i = 0; i < n_; ++i) {
            xs_[i] = ref_flat[2 * i];
            ys_[i] = ref_flat[2 * i + 1];
        }
    } else {
        flat_.assign(ref_flat.begin(), ref_flat.end());
    }
}

namespace {

struct SignSum {
    std::vector<double> s;
    std::size_t coincident = 0;
};

SignSum sign_sum_generic(std::span<const double> x, const std::vector<double>& ref,
                         std::size_t n, std::size_t dim) {
    SignSum acc;
    acc.s.assign(dim, 0.0);
    std::vector<double> diff(dim);
    for (std::size_t i = 0; i < n; ++i) {
        double d2 = 0.0;
        for (std::size_t k = 0; k < dim; ++k) {
            diff[k] = x[k] - ref[i * dim + k];
            d2 += diff[k] * diff[k];
        }
        if (d2 == 0.0) {
            ++acc.coincident;
            continue;
        }
        const double norm = std::sqrt(d2);
        for (std::size_t k = 0; k < dim; ++k) acc.s[k] += diff[k] / norm;
    }
    return acc;
}

}  // namespace

std::pair<double, std::size_t> DepthEvaluator::sign_sum_norm(std::span<const double> x) const {
    if (dim_ == 2) {
        const auto acc = kernels::spatial_sign_sum_2d(x[0], x[1], xs_.data(), ys_.data(), n_);
        return {std::sqrt(acc.sx * acc.sx + acc.sy * acc.sy), acc.coincident};
    }
    const auto acc = sign_sum_generic(x, flat_, n_, dim_);
    double s2 = 0.0;
    for (double v : acc.s) s2 += v * v;
    return {std::sqrt(s2), acc.coincident};
}

double DepthEvaluator::spatial(std::span<const double> x) const {
    return 1.0 - sign_sum_norm(x).first / static_cast<double>(n_);
}

double DepthEvaluator::l1(std::span<const double> x) const {
    const auto [norm, coincident] = sign_sum_norm(x);
    const double e_bar = norm / static_cast<double>(n_);
    const double mass = static_cast<double>(coincident) / static_cast<double>(n_);
    return 1.0 - std::max(0.0, e_bar - mass);
}

double spatial_depth(std::span<const double> x, std::span<const double> ref_flat,
                     std::size_t dim) {
    return DepthEvaluator(ref_flat, dim).spatial(x);
}

double l1_depth(std::span<const double> x, std::span<const double> ref_flat, std::size_t dim) {
    return DepthEvaluator(ref_flat, dim).l1(x);
}

std::vector<double> loo_spatial_depths(std::span<const double> pts_flat, std::size_t n,
                                       std::size_t dim) {
    // The sign sum against the full cloud already excludes the self term
    // (coincident points contribute zero), so only the denominator changes.
    DepthEvaluator eval(pts_flat, dim);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double norm = eval.sign_sum_norm(pts_flat.subspan(i * dim, dim)).first;
        out[i] = 1.0 - norm / static_cast<double>(n - 1);
    }
    return out;
}

DepthReport point_depths(const Embedding& e, DepthMethod m) {
    DepthEvaluator eval(e.coords, e.dim);
    DepthReport r;
    r.labels = e.labels;
    r.method = m;
    r.reference = "embedding points (n=" + std::to_string(e.n()) + ")";
    r.depths.resize(e.n());
    for (std::size_t i = 0; i < e.n(); ++i) r.depths[i] = eval.depth(e.point(i), m);
    return r;
}

DepthReport detect_outliers(const Embedding& e, const OutlierOptions& opts) {
    if (!(opts.level > 0.0 && opts.level < 1.0))
        throw InvalidLevel("level must be in (0, 1)");
    const std::size_t n = e.n();
    if (n < 3) throw EmptyReference("outlier detection needs at least 3 points");
    if (opts.resamples < 1) throw UsageError("resamples must be >= 1");
    const std::size_t dim = e.dim;

    DepthReport r;
    r.labels = e.labels;
    r.method = DepthMethod::spatial;
    r.reference = "leave-one-out over embedding points (n=" + std::to_string(n) + ")";
    r.level = opts.level;
    r.seed = opts.seed;
    r.resamples = opts.resamples;
    r.depths = loo_spatial_depths(e.coords, n, dim);

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (r.depths[a] != r.depths[b]) return r.depths[a] < r.depths[b];
        return a < b;
    });

    std::size_t r_max =
        opts.max_outliers > 0
            ? opts.max_outliers
            : static_cast<std::size_t>(std::ceil(opts.level * static_cast<double>(n))) + 1;
    r_max = std::min(r_max, n >= 3 ? n - 3 : 0);

    Rng rng(opts.seed);
    std::size_t accepted = 0;
    double first_stage_tau = 0.0;
    std::vector<double> null_cloud;
    std::vector<double> resampled;
    std::vector<double> mins(opts.resamples);
    for (std::size_t stage = 1; stage <= r_max; ++stage) {
        // null cloud: everything but the `stage` lowest-depth points
        const std::size_t m = n - stage;
        null_cloud.clear();
        for (std::size_t rank = stage; rank < n; ++rank) {
            const std::size_t i = order[rank];
            null_cloud.insert(null_cloud.end(),
                              e.coords.begin() + static_cast<std::ptrdiff_t>(i * dim),
                              e.coords.begin() + static_cast<std::ptrdiff_t>((i + 1) * dim));
        }
        const DepthEvaluator null_eval(null_cloud, dim);
        const double candidate_depth = null_eval.spatial(e.point(order[stage - 1]));

        // Smoothed-bootstrap jitter, kernel covariance gamma * diag(var).
        // A plain resample of the suspect-trimmed cloud can never produce a
        // minimum depth below the cloud's own, so the reference tail would
        // be truncated and the stage would over-reject.
        constexpr double kSmoothing = 0.15;
        std::vector<double> bandwidth(dim, 0.0);
        for (std::size_t k = 0; k < dim; ++k) {
            double mean = 0.0, ss = 0.0;
            for (std::size_t i = 0; i < m; ++i) mean += null_cloud[i * dim + k];
            mean /= static_cast<double>(m);
            for (std::size_t i = 0; i < m; ++i) {
                const double diff = null_cloud[i * dim + k] - mean;
                ss += diff * diff;
            }
            bandwidth[k] = std::sqrt(kSmoothing * ss / static_cast<double>(m));
        }

        // reference: minimum leave-one-out depth of m+1 jittered points
        // drawn with replacement from the null cloud
        resampled.resize((m + 1) * dim);
        for (std::size_t b = 0; b < opts.resamples; ++b) {
            for (std::size_t i = 0; i <= m; ++i) {
                const std::size_t src = static_cast<std::size_t>(rng.below(m));
                for (std::size_t k = 0; k < dim; ++k)
                    resampled[i * dim + k] =
                        null_cloud[src * dim + k] + bandwidth[k] * rng.normal();
            }
            const auto depths = loo_spatial_depths(resampled, m + 1, dim);
            mins[b] = *std::min_element(depths.begin(), depths.end());
        }
        // Per-stage level: Bonferroni split across stages with a factor-2
        // margin. The split keeps the familywise rate at `level`; the margin
        // absorbs the smoothed bootstrap's residual tail bias. Conservative
        // is safe here: genuinely outlying points sit far below any of
        // these cutoffs.
        const double stage_level = opts.level / (2.0 * static_cast<double>(r_max));
        std::size_t k = static_cast<std::size_t>(
            std::ceil(stage_level * static_cast<double>(opts.resamples)));
        k = k > 0 ? k - 1 : 0;
        std::nth_element(mins.begin(), mins.begin() + static_cast<std::ptrdiff_t>(k),
                         mins.end());
        const double tau = mins[k];
        if (stage == 1) first_stage_tau = tau;
        if (candidate_depth < tau) accepted = stage;  // largest rejecting stage wins
    }

    if (accepted > 0) {
        r.threshold = r.depths[order[accepted]];  // depth of the first kept point
    } else {
        r.threshold = r_max > 0 ? std::min(first_stage_tau, r.depths[order[0]]) : 0.0;
    }
    r.outlier_flags.resize(n);
    for (std::size_t i = 0; i < n; ++i) r.outlier_flags[i] = r.depths[i] < r.threshold;
    return r;
}

DepthGrid depth_grid(const Embedding& e, DepthMethod m, const GridOptions& opts) {
    if (e.dim != 2)
        throw DimensionUnsupported("depth grids require a 2-D embedding");
    if (opts.nx < 2 || opts.ny < 2) throw UsageError("grid resolution must be >= 2");
    DepthEvaluator eval(e.coords, e.dim);

    double xmin = e.at(0, 0), xmax = xmin, ymin = e.at(0, 1), ymax = ymin;
    for (std::size_t i = 1; i < e.n(); ++i) {
        xmin = std::min(xmin, e.at(i, 0));
        xmax = std::max(xmax, e.at(i, 0));
        ymin = std::min(ymin, e.at(i, 1));
        ymax = std::max(ymax, e.at(i, 1));
    }
    const double xspan = xmax > xmin ? xmax - xmin : 1.0;
    const double yspan = ymax > ymin ? ymax - ymin : 1.0;

    DepthGrid g;
    g.nx = opts.nx;
    g.ny = opts.ny;
    g.x0 = xmin - opts.margin * xspan;
    g.x1 = xmax + opts.margin * xspan;
    g.y0 = ymin - opts.margin * yspan;
    g.y1 = ymax + opts.margin * yspan;
    g.values.resize(g.nx * g.ny);
    for (std::size_t iy = 0; iy < g.ny; ++iy) {
        const double y = g.y_at(iy);
        for (std::size_t ix = 0; ix < g.nx; ++ix) {
            const double pt[2] = {g.x_at(ix), y};
            g.values[iy * g.nx + ix] = eval.depth(pt, m);
        }
    }
    return g;
}

void write_depth_report_csv(const DepthReport& r, std::ostream& out, char delimiter) {
    const bool flags = !r.outlier_flags.empty();
    out << "label" << delimiter << "depth";
    if (flags) out << delimiter << "outlier";
    out << '\n';
    char buf[64];
    for (std::size_t i = 0; i < r.labels.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.9g", r.depths[i]);
        out << r.labels[i] << delimiter << buf;
        if (flags) out << delimiter << (r.outlier_flags[i] ? "true" : "false");
        out << '\n';
    }
}

void write_depth_report_json(const DepthReport& r, std::ostream& out) {
    nlohmann::json j;
    j["method"] = to_string(r.method);
    j["reference"] = r.reference;
    j["labels"] = r.labels;
    j["depths"] = r.depths;
    if (!r.outlier_flags.empty()) {
        j["level"] = r.level;
        j["threshold"] = r.threshold;
        j["seed"] = r.seed;
        j["resamples"] = r.resamples;
        std::vector<bool> flags(r.outlier_flags.begin(), r.outlier_flags.end());
        j["outlier_flags"] = flags;
        std::vector<std::string> outliers;
        for (std::size_t i = 0; i < r.labels.size(); ++i)
            if (r.outlier_flags[i]) outliers.push_back(r.labels[i]);
        j["outliers"] = outliers;
    }
    out << j.dump(2) << '\n';
}

void write_grid_csv(const DepthGrid& g, std::ostream& out, char delimiter) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "# xrange %.12g %.12g\n# yrange %.12g %.12g\n", g.x0, g.x1,
                  g.y0, g.y1);
    out << buf;
    out << "# resolution " << g.nx << ' ' << g.ny << '\n';
    for (std::size_t iy = 0; iy < g.ny; ++iy) {
        for (std::size_t ix = 0; ix < g.nx; ++ix) {
            if (ix) out << delimiter;
            std::snprintf(buf, sizeof(buf), "%.6g", g.at(ix, iy));
            out << buf;
        }
        out << '\n';
    }
}

}  // namespace lexidepth
