#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "lexidepth/embedding.hpp"

namespace lexidepth {

enum class DepthMethod { spatial, l1 };

DepthMethod depth_method_from_string(const std::string& s);  // throws UsageError
std::string to_string(DepthMethod m);

// Prepared reference cloud. Splits 2-D data into coordinate arrays so the
// runtime-dispatched kernels can stream them; other dimensions take the
// generic scalar path.
class DepthEvaluator {
public:
    DepthEvaluator(std::span<const double> ref_flat, std::size_t dim);

    std::size_t n() const { return n_; }
    std::size_t dim() const { return dim_; }

    // 1 - ||mean unit vector from reference points to x||. Reference points
    // coincident with x contribute zero vectors and stay in the denominator.
    double spatial(std::span<const double> x) const;

    // Vardi-Zhang L1 depth: 1 - max(0, ||mean unit vector|| - coincident
    // mass fraction). Equals spatial depth when x matches no reference point.
    double l1(std::span<const double> x) const;

    double depth(std::span<const double> x, DepthMethod m) const {
        return m == DepthMethod::spatial ? spatial(x) : l1(x);
    }

    // ||sum of unit vectors from reference points to x|| and the number of
    // reference points coincident with x
    std::pair<double, std::size_t> sign_sum_norm(std::span<const double> x) const;

private:
    std::size_t n_ = 0, dim_ = 0;
    std::vector<double> xs_, ys_;  // dim == 2 split
    std::vector<double> flat_;     // generic path
};

double spatial_depth(std::span<const double> x, std::span<const double> ref_flat,
                     std::size_t dim);
double l1_depth(std::span<const double> x, std::span<const double> ref_flat, std::size_t dim);

// Leave-one-out spatial depth of every point of the cloud w.r.t. the other
// n-1 points.
std::vector<double> loo_spatial_depths(std::span<const double> pts_flat, std::size_t n,
                                       std::size_t dim);

struct DepthReport {
    std::vector<std::string> labels;
    std::vector<double> depths;
    DepthMethod method = DepthMethod::spatial;
    std::string reference;

    // populated by detect_outliers only
    std::vector<bool> outlier_flags;
    double level = 0.0;
    double threshold = 0.0;
    std::uint64_t seed = 0;
    std::size_t resamples = 0;
};

// Per-label depth w.r.t. the full embedding cloud (the Fig. 9/10 view).
DepthReport point_depths(const Embedding& e, DepthMethod m);

struct OutlierOptions {
    double level = 0.05;
    std::uint64_t seed = 0;
    std::size_t resamples = 1000;   // bootstrap draws per stage
    std::size_t max_outliers = 0;   // 0: ceil(level * n) + 1
};

// Sequential depth-outlier test calibrated by Monte Carlo, ESD-style so one
// outlier cannot mask another. Stage r removes the r lowest-depth points and
// tests the r-th lowest against a quantile of the minimum leave-one-out
// depth over `resamples` seeded bootstrap draws from the remaining cloud;
// the level is Bonferroni-split across stages and the largest rejecting
// stage decides how many points are flagged. A marginal per-point quantile
// cannot keep the familywise false-positive rate near `level`; this
// construction can.
DepthReport detect_outliers(const Embedding& e, const OutlierOptions& opts = {});

struct DepthGrid {
    double x0 = 0, x1 = 0, y0 = 0, y1 = 0;
    std::size_t nx = 0, ny = 0;
    std::vector<double> values;  // row-major, row 0 at y0

    double at(std::size_t ix, std::size_t iy) const { return values[iy * nx + ix]; }
    double x_at(std::size_t ix) const {
        return nx > 1 ? x0 + (x1 - x0) * static_cast<double>(ix) / static_cast<double>(nx - 1) : x0;
    }
    double y_at(std::size_t iy) const {
        return ny > 1 ? y0 + (y1 - y0) * static_cast<double>(iy) / static_cast<double>(ny - 1) : y0;
    }
};

struct GridOptions {
    std::size_t nx = 200;
    std::size_t ny = 200;
    double margin = 0.2;  // bounding-box expansion per side, fraction of span
};

// Depth evaluated on a regular grid over the expanded bounding box of a 2-D
// embedding.
DepthGrid depth_grid(const Embedding& e, DepthMethod m, const GridOptions& opts = {});

void write_depth_report_csv(const DepthReport& r, std::ostream& out, char delimiter = ',');
void write_depth_report_json(const DepthReport& r, std::ostream& out);
void write_grid_csv(const DepthGrid& g, std::ostream& out, char delimiter = ',');

}  // namespace lexidepth
