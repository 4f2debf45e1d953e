#pragma once

#include <string>
#include <vector>

#include "lexidepth/distance.hpp"
#include "lexidepth/partition.hpp"

namespace lexidepth {

enum class Linkage { single, complete, average };

Linkage linkage_from_string(const std::string& s);  // throws UsageError

// Binary merge tree. Node ids: leaves 0..n-1 in label order; merge m creates
// node n+m. Merge heights are non-decreasing for the supported linkages.
struct Dendrogram {
    struct Merge {
        int left = 0;   // child node id, smaller original leaf index first
        int right = 0;
        double height = 0.0;
        int size = 0;   // leaves under the merged node
    };

    std::vector<std::string> leaves;
    std::vector<Merge> merges;

    std::size_t n_leaves() const { return leaves.size(); }
    double height_of(int node) const;
};

// Agglomerative clustering with Lance-Williams updates. When several pairs
// tie at the minimal linkage distance, the pair with the lowest
// (row, column) original-index pair merges first.
Dendrogram agglomerate(const DistanceMatrix& d, Linkage linkage);

// Flat clusters from removing the k-1 highest merges; cluster ids 1..k by
// order of first leaf appearance.
Partition cut(const Dendrogram& t, int k);

// Entry (i,j) = height of the lowest merge joining leaves i and j.
DistanceMatrix cophenetic(const Dendrogram& t);

// Newick text with quoted labels; branch lengths are height differences
// between node and parent.
std::string to_newick(const Dendrogram& t);

// Pearson correlation between the off-diagonal entries of two matrices over
// the same labels (cophenetic correlation when b = cophenetic(t)).
double matrix_correlation(const DistanceMatrix& a, const DistanceMatrix& b);

}  // namespace lexidepth
