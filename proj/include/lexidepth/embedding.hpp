#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "lexidepth/distance.hpp"

namespace lexidepth {

// n points in R^dim with labels; columns are centered at zero.
struct Embedding {
    std::vector<std::string> labels;
    std::vector<double> coords;  // row-major n x dim
    std::size_t dim = 0;

    double stress = 0.0;                  // Kruskal stress-1 (non-metric only)
    std::vector<double> stress_history;   // per-iteration stress (non-metric only)
    std::vector<double> eigenvalues;      // all n, descending (classical only)
    std::vector<std::string> warnings;

    std::size_t n() const { return labels.size(); }
    double at(std::size_t i, std::size_t k) const { return coords[i * dim + k]; }
    std::span<const double> point(std::size_t i) const { return {coords.data() + i * dim, dim}; }
};

// Torgerson MDS: eigendecomposition of the double-centered squared-distance
// matrix; coordinates are the top-`dim` eigenvectors scaled by sqrt(lambda).
// Negative eigenvalues among the retained ones give zero coordinates and a
// NonEuclidean warning.
Embedding classical_mds(const DistanceMatrix& d, std::size_t dim);

enum class MdsInit { classical, random };

struct NonmetricOptions {
    std::size_t dim = 2;
    std::uint64_t seed = 0;
    std::size_t max_iter = 300;
    double tol = 1e-9;
    MdsInit init = MdsInit::classical;
};

// Kruskal stress-1 minimization: alternate isotonic regression of embedded
// distances onto the dissimilarity rank order (pool-adjacent-violators,
// primary tie handling) with SMACOF Guttman updates. An update that would
// raise the stress is rolled back and iteration stops, so the recorded
// stress sequence is non-increasing.
Embedding nonmetric_mds(const DistanceMatrix& d, const NonmetricOptions& opts = {});

// Minimal RMS coordinate discrepancy over rotations, reflections, and
// translations (dilations too when allow_scaling). Zero iff congruent.
double procrustes_distance(const Embedding& a, const Embedding& b, bool allow_scaling = false);

void write_embedding(const Embedding& e, std::ostream& out, char delimiter = ',');
Embedding read_embedding(std::istream& in, char delimiter = ',');

}  // namespace lexidepth
