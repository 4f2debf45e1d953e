#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "lexidepth/depth.hpp"
#include "lexidepth/embedding.hpp"

namespace lexidepth {

// Instance-based maximum-depth classifier: stores the training points per
// class; a query goes to the class under which it is deepest. Queries that
// lie outside every class's depth support (max depth below
// outsider_threshold), or tie exactly, fall back to a k-nearest-neighbor
// vote with ties broken by the single nearest point.
struct ClassifierModel {
    std::vector<std::string> classes;              // order of first appearance
    std::vector<std::vector<double>> class_points; // row-major per class
    std::size_t dim = 0;
    DepthMethod method = DepthMethod::spatial;
    int fallback_k = 5;
    double outsider_threshold = 1e-6;
};

ClassifierModel fit(const Embedding& e, const std::map<std::string, std::string>& class_of,
                    DepthMethod method = DepthMethod::spatial, int fallback_k = 5);

std::string predict(const ClassifierModel& m, std::span<const double> x);

struct EvaluateOptions {
    double split_fraction = 0.8;
    std::uint64_t seed = 0;
    std::size_t repeats = 20;
    DepthMethod method = DepthMethod::spatial;
    int fallback_k = 5;
};

struct EvaluateReport {
    std::vector<double> accuracies;  // per repeat
    double mean = 0.0;
    double sd = 0.0;  // sample standard deviation, 0 for a single repeat
    std::vector<std::string> classes;
    std::vector<std::vector<int>> confusion;  // first repeat; rows true, cols predicted
    double split_fraction = 0.0;
    std::uint64_t seed = 0;
};

// Repeated stratified holdout: per class, a seeded shuffle keeps
// round(split_fraction * class size) points for training; accuracy is
// measured on the rest.
EvaluateReport evaluate(const Embedding& e, const std::map<std::string, std::string>& class_of,
                        const EvaluateOptions& opts = {});

// two-column delimited file: label, class (optional "label,class" header)
std::map<std::string, std::string> load_class_labels(const std::string& path,
                                                     char delimiter = ',');

void write_evaluate_json(const EvaluateReport& r, std::ostream& out);
void write_evaluate_text(const EvaluateReport& r, std::ostream& out);

}  // namespace lexidepth
