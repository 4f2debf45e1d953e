#include "lexidepth/classify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <ostream>

#include <json.hpp>

#include "lexidepth/errors.hpp"
#include "lexidepth/rng.hpp"
#include "lexidepth/unicode.hpp"

namespace lexidepth {

ClassifierModel fit(const Embedding& e, const std::map<std::string, std::string>& class_of,
                    DepthMethod method, int fallback_k) {
    if (fallback_k < 1) throw UsageError("fallback_k must be >= 1");
    ClassifierModel m;
    m.dim = e.dim;
    m.method = method;
    m.fallback_k = fallback_k;
    for (std::size_t i = 0; i < e.n(); ++i) {
        auto it = class_of.find(e.labels[i]);
        if (it == class_of.end())
            throw MissingClassLabel("no class label for " + e.labels[i]);
        std::size_t c = 0;
        for (; c < m.classes.size(); ++c)
            if (m.classes[c] == it->second) break;
        if (c == m.classes.size()) {
            m.classes.push_back(it->second);
            m.class_points.emplace_back();
        }
        const auto pt = e.point(i);
        m.class_points[c].insert(m.class_points[c].end(), pt.begin(), pt.end());
    }
    if (m.classes.size() < 2) throw DegenerateClasses("need at least 2 classes");
    return m;
}

namespace {

std::string knn_fallback(const ClassifierModel& m, std::span<const double> x) {
    struct Candidate {
        double dist;
        std::size_t cls;
        std::size_t idx;
    };
    std::vector<Candidate> all;
    for (std::size_t c = 0; c < m.classes.size(); ++c) {
        const auto& pts = m.class_points[c];
        const std::size_t count = pts.size() / m.dim;
        for (std::size_t i = 0; i < count; ++i) {
            double d2 = 0.0;
            for (std::size_t k = 0; k < m.dim; ++k) {
                const double diff = x[k] - pts[i * m.dim + k];
                d2 += diff * diff;
            }
            all.push_back({d2, c, i});
        }
    }
    std::sort(all.begin(), all.end(), [](const Candidate& a, const Candidate& b) {
        if (a.dist != b.dist) return a.dist < b.dist;
        if (a.cls != b.cls) return a.cls < b.cls;
        return a.idx < b.idx;
    });
    const std::size_t k = std::min(static_cast<std::size_t>(m.fallback_k), all.size());
    std::vector<int> votes(m.classes.size(), 0);
    for (std::size_t i = 0; i < k; ++i) ++votes[all[i].cls];
    const int top = *std::max_element(votes.begin(), votes.end());
    std::size_t winner = m.classes.size();
    for (std::size_t c = 0; c < m.classes.size(); ++c) {
        if (votes[c] != top) continue;
        if (winner != m.classes.size()) return m.classes[all[0].cls];  // vote tie -> nearest
        winner = c;
    }
    return m.classes[winner];
}

}  // namespace

std::string predict(const ClassifierModel& m, std::span<const double> x) {
    if (x.size() != m.dim) throw DimensionMismatch("query dimension does not match the model");

    std::vector<double> depths(m.classes.size());
    for (std::size_t c = 0; c < m.classes.size(); ++c)
        depths[c] = DepthEvaluator(m.class_points[c], m.dim).depth(x, m.method);

    const double best = *std::max_element(depths.begin(), depths.end());
    constexpr double kTieEps = 1e-12;
    std::size_t winner = m.classes.size();
    bool tie = false;
    for (std::size_t c = 0; c < m.classes.size(); ++c) {
        if (depths[c] < best - kTieEps) continue;
        if (winner != m.classes.size()) tie = true;
        if (winner == m.classes.size()) winner = c;
    }
    if (best < m.outsider_threshold || tie) return knn_fallback(m, x);
    return m.classes[winner];
}

EvaluateReport evaluate(const Embedding& e, const std::map<std::string, std::string>& class_of,
                        const EvaluateOptions& opts) {
    if (!(opts.split_fraction > 0.0 && opts.split_fraction < 1.0))
        throw UsageError("split_fraction must be in (0, 1)");
    if (opts.repeats < 1) throw UsageError("repeats must be >= 1");

    // group point indices by class, order of first appearance
    std::vector<std::string> classes;
    std::vector<std::vector<std::size_t>> members;
    for (std::size_t i = 0; i < e.n(); ++i) {
        auto it = class_of.find(e.labels[i]);
        if (it == class_of.end()) throw MissingClassLabel("no class label for " + e.labels[i]);
        std::size_t c = 0;
        for (; c < classes.size(); ++c)
            if (classes[c] == it->second) break;
        if (c == classes.size()) {
            classes.push_back(it->second);
            members.emplace_back();
        }
        members[c].push_back(i);
    }
    if (classes.size() < 2) throw DegenerateClasses("need at least 2 classes");

    EvaluateReport report;
    report.classes = classes;
    report.split_fraction = opts.split_fraction;
    report.seed = opts.seed;
    report.confusion.assign(classes.size(), std::vector<int>(classes.size(), 0));

    Rng rng(opts.seed);
    for (std::size_t rep = 0; rep < opts.repeats; ++rep) {
        std::map<std::string, std::string> train_class;
        Embedding train;
        train.dim = e.dim;
        std::vector<std::size_t> test_idx;
        std::vector<std::size_t> test_class;

        for (std::size_t c = 0; c < classes.size(); ++c) {
            auto idx = members[c];
            rng.shuffle(idx);
            const auto m = idx.size();
            const auto n_train = static_cast<std::size_t>(
                std::floor(opts.split_fraction * static_cast<double>(m) + 0.5));
            if (n_train == 0 || n_train == m)
                throw SplitTooSmall("class " + classes[c] + " (size " + std::to_string(m) +
                                    ") is emptied by an " + std::to_string(opts.split_fraction) +
                                    " split");
            for (std::size_t i = 0; i < m; ++i) {
                if (i < n_train) {
                    train.labels.push_back(e.labels[idx[i]]);
                    const auto pt = e.point(idx[i]);
                    train.coords.insert(train.coords.end(), pt.begin(), pt.end());
                    train_class[e.labels[idx[i]]] = classes[c];
                } else {
                    test_idx.push_back(idx[i]);
                    test_class.push_back(c);
                }
            }
        }

        const ClassifierModel model = fit(train, train_class, opts.method, opts.fallback_k);
        std::size_t correct = 0;
        for (std::size_t t = 0; t < test_idx.size(); ++t) {
            const std::string got = predict(model, e.point(test_idx[t]));
            if (got == classes[test_class[t]]) ++correct;
            if (rep == 0) {
                std::size_t pred = 0;
                for (; pred < classes.size(); ++pred)
                    if (classes[pred] == got) break;
                ++report.confusion[test_class[t]][pred];
            }
        }
        report.accuracies.push_back(static_cast<double>(correct) /
                                    static_cast<double>(test_idx.size()));
    }

    report.mean = std::accumulate(report.accuracies.begin(), report.accuracies.end(), 0.0) /
                  static_cast<double>(report.accuracies.size());
    if (report.accuracies.size() > 1) {
        double ss = 0.0;
        for (double a : report.accuracies) ss += (a - report.mean) * (a - report.mean);
        report.sd = std::sqrt(ss / static_cast<double>(report.accuracies.size() - 1));
    }
    return report;
}

std::map<std::string, std::string> load_class_labels(const std::string& path, char delimiter) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open class labels: " + path);
    std::map<std::string, std::string> out;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (unicode::trim(line).empty()) continue;
        const std::size_t pos = line.find(delimiter);
        if (pos == std::string::npos)
            throw MalformedRow("class-label row needs two columns", line_no);
        std::string label(unicode::trim(line.substr(0, pos)));
        std::string cls(unicode::trim(line.substr(pos + 1)));
        if (line_no == 1 && label == "label" && cls == "class") continue;  // optional header
        if (label.empty() || cls.empty())
            throw MalformedRow("empty label or class", line_no);
        if (!out.emplace(label, cls).second)
            throw DuplicateLanguage("duplicate class-label row: " + label);
    }
    return out;
}

void write_evaluate_json(const EvaluateReport& r, std::ostream& out) {
    nlohmann::json j;
    j["classes"] = r.classes;
    j["split_fraction"] = r.split_fraction;
    j["seed"] = r.seed;
    j["repeats"] = r.accuracies.size();
    j["accuracies"] = r.accuracies;
    j["mean_accuracy"] = r.mean;
    j["sd_accuracy"] = r.sd;
    j["confusion_first_repeat"] = r.confusion;
    out << j.dump(2) << '\n';
}

void write_evaluate_text(const EvaluateReport& r, std::ostream& out) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "mean accuracy %.4f (sd %.4f) over %zu repeats\n", r.mean,
                  r.sd, r.accuracies.size());
    out << buf;
    out << "confusion matrix of the first repeat (rows true, cols predicted):\n";
    out << "            ";
    for (const auto& c : r.classes) out << ' ' << c;
    out << '\n';
    for (std::size_t i = 0; i < r.classes.size(); ++i) {
        out << r.classes[i] << ':';
        for (std::size_t k = 0; k < r.classes.size(); ++k) out << ' ' << r.confusion[i][k];
        out << '\n';
    }
}

}  // namespace lexidepth
