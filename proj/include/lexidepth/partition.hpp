#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "lexidepth/distance.hpp"
#include "lexidepth/embedding.hpp"

namespace lexidepth {

// Flat cluster assignment. Cluster ids run 1..k; kTrimmed marks points
// discarded by trimmed clustering.
struct Partition {
    static constexpr int kTrimmed = 0;

    std::vector<std::string> labels;
    std::vector<int> assignment;
    int k = 0;
    std::vector<double> within_depths;         // per label; empty unless depth-based
    std::vector<std::string> representatives;  // per cluster; empty unless computed
    double objective = 0.0;
    std::vector<double> objective_history;     // per relocation pass (tdd only)
    std::string method;
};

struct TddOptions {
    int k = 3;
    double trim_fraction = 0.1;
    std::uint64_t seed = 0;
    std::size_t max_iter = 100;
};

// Trimmed L1-depth relocation clustering: PAM initialization, then moves the
// point with the most negative relative depth (own-cluster L1 depth minus
// the best competing cluster's) one point per pass; after convergence the
// floor(trim_fraction * n) lowest-depth points are marked trimmed and
// cluster depths are recomputed without them. Objective is the mean relative
// depth over non-trimmed points; a move that would lower it is rolled back
// and iteration stops.
Partition tdd_cluster(const Embedding& e, const TddOptions& opts = {});

// k-medoids: greedy BUILD then best-improvement SWAP while the total
// dissimilarity strictly decreases. Assignment ties go to the medoid with
// the lower original index.
Partition pam(const DistanceMatrix& d, int k, std::uint64_t seed = 0);

// k nearest labels to target, ascending distance, ties by label order.
std::vector<std::string> knn_query(const DistanceMatrix& d, const std::string& target, int k);

struct RandScores {
    double rand = 0.0;
    double adjusted = 0.0;
};

// Pair-counting agreement between two partitions over the labels trimmed in
// neither; plain Rand and adjusted-for-chance.
RandScores rand_index(const Partition& a, const Partition& b);

void write_partition_csv(const Partition& p, std::ostream& out, char delimiter = ',');
void write_partition_json(const Partition& p, std::ostream& out);

}  // namespace lexidepth
