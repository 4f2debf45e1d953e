#include "lexidepth/distance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>

#include "lexidepth/errors.hpp"

namespace lexidepth {

namespace {
constexpr double kUndefined = std::numeric_limits<double>::quiet_NaN();
}

DistanceMatrix::DistanceMatrix(std::vector<std::string> labels)
    : labels_(std::move(labels)),
      values_(labels_.size() * labels_.size(), kUndefined),
      support_(labels_.size() * labels_.size(), 0) {
    for (std::size_t i = 0; i < labels_.size(); ++i) values_[i * size() + i] = 0.0;
}

bool DistanceMatrix::fully_defined() const {
    for (std::size_t i = 0; i < size(); ++i)
        for (std::size_t j = i + 1; j < size(); ++j)
            if (support(i, j) < 1) return false;
    return true;
}

void DistanceMatrix::set(std::size_t i, std::size_t j, double value, int support_count) {
    if (i == j) return;
    values_[i * size() + j] = value;
    values_[j * size() + i] = value;
    support_[i * size() + j] = support_count;
    support_[j * size() + i] = support_count;
}

std::size_t DistanceMatrix::index_of(const std::string& label) const {
    for (std::size_t i = 0; i < labels_.size(); ++i)
        if (labels_[i] == label) return i;
    throw UnknownLabel("unknown label: " + label);
}

std::size_t levenshtein(std::u32string_view p, std::u32string_view q) {
    if (p.size() < q.size()) std::swap(p, q);  // q is the shorter: row length min+1
    if (q.empty()) return p.size();

    std::vector<std::size_t> row(q.size() + 1);
    for (std::size_t j = 0; j <= q.size(); ++j) row[j] = j;

    for (std::size_t i = 1; i <= p.size(); ++i) {
        std::size_t diag = row[0];  // cost(i-1, j-1)
        row[0] = i;
        for (std::size_t j = 1; j <= q.size(); ++j) {
            const std::size_t up = row[j];
            const std::size_t subst = diag + (p[i - 1] == q[j - 1] ? 0 : 1);
            row[j] = std::min({subst, up + 1, row[j - 1] + 1});
            diag = up;
        }
    }
    return row[q.size()];
}

DistanceMatrix per_meaning_matrix(const WordList& wl, const std::string& meaning) {
    const std::size_t m = wl.meaning_index(meaning);
    DistanceMatrix d(wl.languages());
    for (std::size_t i = 0; i < wl.n_languages(); ++i) {
        const auto& fi = wl.form(m, i);
        if (!fi) continue;
        for (std::size_t j = i + 1; j < wl.n_languages(); ++j) {
            const auto& fj = wl.form(m, j);
            if (!fj) continue;
            d.set(i, j, static_cast<double>(levenshtein(*fi, *fj)));
        }
    }
    return d;
}

DistanceMatrix averaged_matrix(const WordList& wl, const AverageOptions& opts) {
    const std::size_t n = wl.n_languages();
    DistanceMatrix d(wl.languages());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double sum = 0.0;
            int count = 0;
            for (std::size_t m = 0; m < wl.n_meanings(); ++m) {
                const auto& fi = wl.form(m, i);
                const auto& fj = wl.form(m, j);
                if (!fi || !fj) continue;
                double dist = static_cast<double>(levenshtein(*fi, *fj));
                if (opts.normalize == Normalization::length) {
                    const std::size_t len = std::max(fi->size(), fj->size());
                    if (len > 0) dist /= static_cast<double>(len);
                }
                sum += dist;
                ++count;
            }
            if (count < opts.min_support)
                throw InsufficientSupport("pair (" + wl.languages()[i] + ", " + wl.languages()[j] +
                                          ") shares " + std::to_string(count) +
                                          " meanings, min_support is " +
                                          std::to_string(opts.min_support));
            if (count >= 1) d.set(i, j, sum / count, count);
        }
    }
    return d;
}

namespace {

std::vector<std::string> split_line(const std::string& line, char delim) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(delim, start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

}  // namespace

void write_matrix(const DistanceMatrix& d, std::ostream& out, char delimiter, int precision) {
    out << "label";
    for (const auto& l : d.labels()) out << delimiter << l;
    out << '\n';
    char buf[64];
    for (std::size_t i = 0; i < d.size(); ++i) {
        out << d.labels()[i];
        for (std::size_t j = 0; j < d.size(); ++j) {
            out << delimiter;
            if (!d.defined(i, j)) {
                out << "NA";
            } else {
                std::snprintf(buf, sizeof(buf), "%.*f", precision, d.at(i, j));
                out << buf;
            }
        }
        out << '\n';
    }
}

void write_support(const DistanceMatrix& d, std::ostream& out, char delimiter) {
    out << "label";
    for (const auto& l : d.labels()) out << delimiter << l;
    out << '\n';
    for (std::size_t i = 0; i < d.size(); ++i) {
        out << d.labels()[i];
        for (std::size_t j = 0; j < d.size(); ++j) out << delimiter << d.support(i, j);
        out << '\n';
    }
}

DistanceMatrix read_matrix(std::istream& in, char delimiter) {
    std::string line;
    if (!std::getline(in, line)) throw DataError("empty matrix file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto header = split_line(line, delimiter);
    if (header.size() < 1) throw DataError("malformed matrix header");
    std::vector<std::string> labels(header.begin() + 1, header.end());

    DistanceMatrix d(labels);
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (row >= labels.size()) throw DataError("matrix has more rows than labels");
        auto cells = split_line(line, delimiter);
        if (cells.size() != labels.size() + 1)
            throw DataError("matrix row " + std::to_string(row + 1) + " has " +
                            std::to_string(cells.size() - 1) + " cells, expected " +
                            std::to_string(labels.size()));
        if (cells[0] != labels[row])
            throw DataError("matrix row label \"" + cells[0] + "\" does not match header \"" +
                            labels[row] + "\"");
        for (std::size_t j = 0; j < labels.size(); ++j) {
            const std::string& cell = cells[j + 1];
            if (cell == "NA" || cell == "nan") continue;
            double v = 0.0;
            try {
                v = std::stod(cell);
            } catch (const std::exception&) {
                throw DataError("cannot parse matrix value \"" + cell + "\"");
            }
            if (row == j) {
                if (v != 0.0) throw DataError("nonzero diagonal in matrix");
                continue;
            }
            if (row < j) {
                d.set(row, j, v, 1);
            } else if (!d.defined(j, row) || d.at(j, row) != v) {
                throw DataError("asymmetric matrix at (" + labels[row] + ", " + labels[j] + ")");
            }
        }
        ++row;
    }
    if (row != labels.size()) throw DataError("matrix has fewer rows than labels");
    return d;
}

DistanceMatrix load_matrix(const std::string& path, char delimiter) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open matrix: " + path);
    return read_matrix(in, delimiter);
}

}  // namespace lexidepth
