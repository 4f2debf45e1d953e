#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "lexidepth/corpus.hpp"

namespace lexidepth {

// Symmetric nonnegative matrix over a label set, zero diagonal. Entries are
// defined only where support(i,j) >= 1; undefined entries hold NaN.
class DistanceMatrix {
public:
    DistanceMatrix() = default;
    explicit DistanceMatrix(std::vector<std::string> labels);

    const std::vector<std::string>& labels() const { return labels_; }
    std::size_t size() const { return labels_.size(); }

    double at(std::size_t i, std::size_t j) const { return values_[i * size() + j]; }
    int support(std::size_t i, std::size_t j) const { return support_[i * size() + j]; }
    bool defined(std::size_t i, std::size_t j) const { return i == j || support(i, j) >= 1; }
    bool fully_defined() const;

    // sets (i,j) and (j,i)
    void set(std::size_t i, std::size_t j, double value, int support_count = 1);

    std::size_t index_of(const std::string& label) const;  // throws UnknownLabel

private:
    std::vector<std::string> labels_;
    std::vector<double> values_;
    std::vector<int> support_;
};

// Minimum number of single-symbol insertions, deletions, and substitutions
// turning p into q. Dynamic programming with O(min(|p|,|q|)) working memory.
std::size_t levenshtein(std::u32string_view p, std::u32string_view q);

// Levenshtein matrix over wl.languages for one meaning; entries are defined
// where both forms exist.
DistanceMatrix per_meaning_matrix(const WordList& wl, const std::string& meaning);

enum class Normalization { none, length };

struct AverageOptions {
    int min_support = 1;
    Normalization normalize = Normalization::none;
};

// Arithmetic mean of per-meaning Levenshtein distances over the meanings
// where both languages have forms. Summation runs in meaning order so
// results are bit-reproducible. With Normalization::length each per-meaning
// distance is divided by max(|p|,|q|) first.
DistanceMatrix averaged_matrix(const WordList& wl, const AverageOptions& opts = {});

// Delimited text with a header row and label column; fixed decimal values.
// Undefined entries serialize as "NA".
void write_matrix(const DistanceMatrix& d, std::ostream& out, char delimiter = ',',
                  int precision = 6);
void write_support(const DistanceMatrix& d, std::ostream& out, char delimiter = ',');
DistanceMatrix read_matrix(std::istream& in, char delimiter = ',');
DistanceMatrix load_matrix(const std::string& path, char delimiter = ',');

}  // namespace lexidepth
