// lexidepth command-line front end: chains wordlist parsing, distance
// matrices, trees, MDS embeddings, depth reports, clustering, and
// classification, writing deterministic artifacts plus a JSON run manifest.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lexidepth/classify.hpp"
#include "lexidepth/corpus.hpp"
#include "lexidepth/depth.hpp"
#include "lexidepth/digest.hpp"
#include "lexidepth/distance.hpp"
#include "lexidepth/embedding.hpp"
#include "lexidepth/errors.hpp"
#include "lexidepth/hclust.hpp"
#include "lexidepth/partition.hpp"
#include "lexidepth/svg.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

using namespace lexidepth;

struct Config {
    std::string input;
    std::string matrix_file;
    std::string embedding_file;
    std::string classes_file;
    std::string out_dir;
    std::string delimiter = "tab";
    std::string missing = "?";
    std::string normalize = "none";
    int min_support = 1;
    bool emit_support = false;
    std::string linkage = "average";
    int cut_k = 0;
    bool emit_cophenetic = false;
    std::string mds_variant = "classical";
    std::size_t dim = 2;
    std::size_t mds_max_iter = 300;
    double mds_tol = 1e-9;
    std::string depth_method = "spatial";
    std::size_t grid_nx = 200;
    std::size_t grid_ny = 200;
    double margin = 0.2;
    double level = 0.05;
    std::size_t resamples = 1000;
    std::size_t max_outliers = 0;
    int k = 3;
    double trim = 0.1;
    std::size_t cluster_max_iter = 100;
    double split = 0.8;
    std::size_t repeats = 20;
    int fallback_k = 5;
    std::uint64_t seed = 42;
    int precision = 6;
    bool no_plots = false;
};

char wordlist_delimiter(const Config& cfg) {
    if (cfg.delimiter == "tab") return '\t';
    if (cfg.delimiter == "comma") return ',';
    throw UsageError("delimiter must be tab or comma");
}

struct RunContext {
    Config cfg;
    std::string subcommand;
    std::vector<std::pair<std::string, std::string>> inputs;  // path, digest
    std::vector<std::string> outputs;
    std::vector<std::string> report_lines;

    std::optional<WordList> wordlist;
    std::optional<DistanceMatrix> matrix;
    std::optional<Embedding> embedding;

    void register_input(const std::string& path) {
        for (const auto& [p, d] : inputs)
            if (p == path) return;
        inputs.emplace_back(path, file_digest(path));
    }

    std::ofstream open_output(const std::string& name) {
        namespace fs = std::filesystem;
        fs::create_directories(cfg.out_dir);
        const fs::path path = fs::path(cfg.out_dir) / name;
        std::ofstream out(path, std::ios::binary);
        if (!out) throw DataError("cannot open output file: " + path.string());
        outputs.push_back(name);
        return out;
    }
};

const WordList& need_wordlist(RunContext& ctx) {
    if (!ctx.wordlist) {
        if (ctx.cfg.input.empty()) throw UsageError("--input wordlist is required");
        ctx.register_input(ctx.cfg.input);
        std::vector<std::string> warnings;
        FormatOptions opts{wordlist_delimiter(ctx.cfg), ctx.cfg.missing};
        ctx.wordlist = load_wordlist(ctx.cfg.input, opts, &warnings);
        for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
    }
    return *ctx.wordlist;
}

const DistanceMatrix& need_matrix(RunContext& ctx) {
    if (!ctx.matrix) {
        if (!ctx.cfg.matrix_file.empty()) {
            ctx.register_input(ctx.cfg.matrix_file);
            ctx.matrix = load_matrix(ctx.cfg.matrix_file);
        } else {
            AverageOptions opts;
            opts.min_support = ctx.cfg.min_support;
            if (ctx.cfg.normalize == "length")
                opts.normalize = Normalization::length;
            else if (ctx.cfg.normalize != "none")
                throw UsageError("normalize must be none or length");
            ctx.matrix = averaged_matrix(need_wordlist(ctx), opts);
        }
    }
    return *ctx.matrix;
}

const Embedding& need_embedding(RunContext& ctx) {
    if (!ctx.embedding) {
        if (!ctx.cfg.embedding_file.empty()) {
            ctx.register_input(ctx.cfg.embedding_file);
            std::ifstream in(ctx.cfg.embedding_file, std::ios::binary);
            if (!in) throw DataError("cannot open embedding: " + ctx.cfg.embedding_file);
            ctx.embedding = read_embedding(in);
        } else if (ctx.cfg.mds_variant == "classical") {
            ctx.embedding = classical_mds(need_matrix(ctx), ctx.cfg.dim);
        } else if (ctx.cfg.mds_variant == "nonmetric") {
            NonmetricOptions opts;
            opts.dim = ctx.cfg.dim;
            opts.seed = ctx.cfg.seed;
            opts.max_iter = ctx.cfg.mds_max_iter;
            opts.tol = ctx.cfg.mds_tol;
            ctx.embedding = nonmetric_mds(need_matrix(ctx), opts);
        } else {
            throw UsageError("mds variant must be classical or nonmetric");
        }
        for (const auto& w : ctx.embedding->warnings) std::cerr << "warning: " << w << '\n';
    }
    return *ctx.embedding;
}

// ---------------------------------------------------------------------------
// stages
// ---------------------------------------------------------------------------

void cmd_dist(RunContext& ctx) {
    const DistanceMatrix& m = need_matrix(ctx);
    {
        auto out = ctx.open_output("matrix.csv");
        write_matrix(m, out, ',', ctx.cfg.precision);
    }
    if (ctx.cfg.emit_support) {
        auto out = ctx.open_output("support.csv");
        write_support(m, out);
    }
    ctx.report_lines.push_back("## Distance matrix\n");
    ctx.report_lines.push_back("- " + std::to_string(m.size()) +
                               " languages, output `matrix.csv`\n");
}

void cmd_tree(RunContext& ctx) {
    const DistanceMatrix& m = need_matrix(ctx);
    const Linkage linkage = linkage_from_string(ctx.cfg.linkage);
    const Dendrogram t = agglomerate(m, linkage);
    const std::string name = "tree_" + ctx.cfg.linkage + ".newick";
    {
        auto out = ctx.open_output(name);
        out << to_newick(t) << '\n';
    }
    ctx.report_lines.push_back("## Hierarchical clustering\n");
    ctx.report_lines.push_back("- linkage " + ctx.cfg.linkage + ", tree `" + name + "`\n");

    if (ctx.cfg.cut_k > 0) {
        const Partition p = cut(t, ctx.cfg.cut_k);
        auto out = ctx.open_output("clusters.csv");
        out << "label,cluster\n";
        for (std::size_t i = 0; i < p.labels.size(); ++i)
            out << p.labels[i] << ',' << p.assignment[i] << '\n';
        ctx.report_lines.push_back("- cut at k=" + std::to_string(ctx.cfg.cut_k) +
                                   ", flat clusters `clusters.csv`\n");
    }
    if (ctx.cfg.emit_cophenetic) {
        const DistanceMatrix coph = cophenetic(t);
        auto out = ctx.open_output("cophenetic.csv");
        write_matrix(coph, out, ',', ctx.cfg.precision);
        char buf[96];
        std::snprintf(buf, sizeof(buf), "- cophenetic correlation %.4f\n",
                      matrix_correlation(m, coph));
        ctx.report_lines.push_back(buf);
    }
}

void cmd_mds(RunContext& ctx) {
    const Embedding& e = need_embedding(ctx);
    {
        auto out = ctx.open_output("embedding.csv");
        write_embedding(e, out);
    }
    char buf[128];
    ctx.report_lines.push_back("## MDS embedding\n");
    ctx.report_lines.push_back("- variant " + ctx.cfg.mds_variant + ", dimension " +
                               std::to_string(e.dim) + ", output `embedding.csv`\n");

    if (ctx.cfg.mds_variant == "classical" && ctx.cfg.embedding_file.empty()) {
        auto out = ctx.open_output("scree.csv");
        out << "component,eigenvalue\n";
        for (std::size_t i = 0; i < e.eigenvalues.size(); ++i) {
            std::snprintf(buf, sizeof(buf), "%zu,%.9g\n", i + 1, e.eigenvalues[i]);
            out << buf;
        }
    }
    if (ctx.cfg.mds_variant == "nonmetric" && ctx.cfg.embedding_file.empty()) {
        std::snprintf(buf, sizeof(buf), "- final stress %.6g after %zu iterations\n", e.stress,
                      e.stress_history.size());
        ctx.report_lines.push_back(buf);
        auto out = ctx.open_output("stress_by_dim.csv");
        out << "dim,stress\n";
        const DistanceMatrix& m = need_matrix(ctx);
        for (std::size_t d = 1; d <= ctx.cfg.dim && d + 1 <= m.size(); ++d) {
            NonmetricOptions opts;
            opts.dim = d;
            opts.seed = ctx.cfg.seed;
            opts.max_iter = ctx.cfg.mds_max_iter;
            opts.tol = ctx.cfg.mds_tol;
            std::snprintf(buf, sizeof(buf), "%zu,%.9g\n", d, nonmetric_mds(m, opts).stress);
            out << buf;
        }
    }
    if (!ctx.cfg.no_plots && e.dim >= 2) {
        auto out = ctx.open_output("scatter.svg");
        write_scatter_svg(e, out);
    }
}

void cmd_depth(RunContext& ctx) {
    const Embedding& e = need_embedding(ctx);
    const DepthMethod method = depth_method_from_string(ctx.cfg.depth_method);
    const DepthReport r = point_depths(e, method);
    {
        auto out = ctx.open_output("depth.csv");
        write_depth_report_csv(r, out);
    }
    {
        auto out = ctx.open_output("depth.json");
        write_depth_report_json(r, out);
    }
    ctx.report_lines.push_back("## Depth report\n");
    ctx.report_lines.push_back("- method " + ctx.cfg.depth_method +
                               ", per-language depths `depth.csv`\n");
    if (e.dim == 2) {
        GridOptions opts{ctx.cfg.grid_nx, ctx.cfg.grid_ny, ctx.cfg.margin};
        const DepthGrid g = depth_grid(e, method, opts);
        {
            auto out = ctx.open_output("depth_grid.csv");
            write_grid_csv(g, out);
        }
        if (!ctx.cfg.no_plots) {
            {
                auto out = ctx.open_output("heatmap.svg");
                write_heatmap_svg(g, e, out);
            }
            auto out = ctx.open_output("contour.svg");
            write_contour_svg(g, e, out);
        }
    }
}

void cmd_outliers(RunContext& ctx) {
    const Embedding& e = need_embedding(ctx);
    OutlierOptions opts;
    opts.level = ctx.cfg.level;
    opts.seed = ctx.cfg.seed;
    opts.resamples = ctx.cfg.resamples;
    opts.max_outliers = ctx.cfg.max_outliers;
    const DepthReport r = detect_outliers(e, opts);
    {
        auto out = ctx.open_output("outliers.csv");
        write_depth_report_csv(r, out);
    }
    {
        auto out = ctx.open_output("outliers.json");
        write_depth_report_json(r, out);
    }
    std::string flagged;
    for (std::size_t i = 0; i < r.labels.size(); ++i)
        if (r.outlier_flags[i]) flagged += (flagged.empty() ? "" : ", ") + r.labels[i];
    char buf[96];
    std::snprintf(buf, sizeof(buf), "- level %g, depth threshold %.6g\n", r.level, r.threshold);
    ctx.report_lines.push_back("## Outlier detection\n");
    ctx.report_lines.push_back(buf);
    ctx.report_lines.push_back("- flagged: " + (flagged.empty() ? "none" : flagged) + "\n");
}

void cmd_cluster(RunContext& ctx) {
    const Embedding& e = need_embedding(ctx);
    TddOptions opts;
    opts.k = ctx.cfg.k;
    opts.trim_fraction = ctx.cfg.trim;
    opts.seed = ctx.cfg.seed;
    opts.max_iter = ctx.cfg.cluster_max_iter;
    const Partition p = tdd_cluster(e, opts);
    {
        auto out = ctx.open_output("cluster.csv");
        write_partition_csv(p, out);
    }
    {
        auto out = ctx.open_output("cluster.json");
        write_partition_json(p, out);
    }
    if (!ctx.cfg.no_plots && e.dim >= 2) {
        auto out = ctx.open_output("cluster.svg");
        write_scatter_svg(e, out, &p);
    }
    std::string reps;
    for (const auto& r : p.representatives) reps += (reps.empty() ? "" : ", ") + r;
    ctx.report_lines.push_back("## Trimmed depth clustering\n");
    ctx.report_lines.push_back("- k=" + std::to_string(p.k) + ", representatives: " + reps +
                               "\n");
}

void cmd_pam(RunContext& ctx) {
    const DistanceMatrix& m = need_matrix(ctx);
    const Partition p = pam(m, ctx.cfg.k, ctx.cfg.seed);
    {
        auto out = ctx.open_output("pam.csv");
        write_partition_csv(p, out);
    }
    {
        auto out = ctx.open_output("pam.json");
        write_partition_json(p, out);
    }
    std::string reps;
    for (const auto& r : p.representatives) reps += (reps.empty() ? "" : ", ") + r;
    char buf[96];
    std::snprintf(buf, sizeof(buf), "- k=%d, objective %.6g\n", p.k, p.objective);
    ctx.report_lines.push_back("## PAM (k-medoids)\n");
    ctx.report_lines.push_back(buf);
    ctx.report_lines.push_back("- medoids: " + reps + "\n");
}

void cmd_classify(RunContext& ctx) {
    if (ctx.cfg.classes_file.empty()) throw UsageError("--classes FILE is required");
    ctx.register_input(ctx.cfg.classes_file);
    const auto classes = load_class_labels(ctx.cfg.classes_file);
    const Embedding& full = need_embedding(ctx);

    // classify only the labeled languages; note the rest
    Embedding subset;
    subset.dim = full.dim;
    std::string skipped;
    for (std::size_t i = 0; i < full.n(); ++i) {
        if (classes.count(full.labels[i])) {
            subset.labels.push_back(full.labels[i]);
            const auto pt = full.point(i);
            subset.coords.insert(subset.coords.end(), pt.begin(), pt.end());
        } else {
            skipped += (skipped.empty() ? "" : ", ") + full.labels[i];
        }
    }

    EvaluateOptions opts;
    opts.split_fraction = ctx.cfg.split;
    opts.seed = ctx.cfg.seed;
    opts.repeats = ctx.cfg.repeats;
    opts.method = depth_method_from_string(ctx.cfg.depth_method);
    opts.fallback_k = ctx.cfg.fallback_k;
    const EvaluateReport r = evaluate(subset, classes, opts);
    {
        auto out = ctx.open_output("classify.json");
        write_evaluate_json(r, out);
    }
    {
        auto out = ctx.open_output("classify.txt");
        write_evaluate_text(r, out);
    }
    char buf[128];
    std::snprintf(buf, sizeof(buf), "- mean accuracy %.4f (sd %.4f) over %zu repeats\n", r.mean,
                  r.sd, r.accuracies.size());
    ctx.report_lines.push_back("## Depth classification\n");
    ctx.report_lines.push_back(buf);
    if (!skipped.empty())
        ctx.report_lines.push_back("- unlabeled languages excluded: " + skipped + "\n");
}

void cmd_report(RunContext& ctx) {
    cmd_dist(ctx);
    cmd_tree(ctx);
    cmd_mds(ctx);
    cmd_outliers(ctx);
    cmd_cluster(ctx);
    if (!ctx.cfg.classes_file.empty()) {
        cmd_classify(ctx);
    } else {
        ctx.report_lines.push_back("## Depth classification\n");
        ctx.report_lines.push_back("- skipped: no --classes file given\n");
    }

    auto out = ctx.open_output("report.md");
    out << "# lexidepth report\n\n";
    out << "- input: `" << ctx.cfg.input << "`\n";
    out << "- seed: " << ctx.cfg.seed << "\n\n";
    for (const auto& line : ctx.report_lines) out << line;
}

nlohmann::json config_json(const Config& c) {
    nlohmann::json j;
    j["input"] = c.input;
    j["matrix"] = c.matrix_file;
    j["embedding"] = c.embedding_file;
    j["classes"] = c.classes_file;
    j["out"] = c.out_dir;
    j["delimiter"] = c.delimiter;
    j["missing"] = c.missing;
    j["normalize"] = c.normalize;
    j["min-support"] = c.min_support;
    j["emit-support"] = c.emit_support;
    j["linkage"] = c.linkage;
    j["cut-k"] = c.cut_k;
    j["emit-cophenetic"] = c.emit_cophenetic;
    j["mds"] = c.mds_variant;
    j["dim"] = c.dim;
    j["mds-max-iter"] = c.mds_max_iter;
    j["mds-tol"] = c.mds_tol;
    j["depth-method"] = c.depth_method;
    j["grid-nx"] = c.grid_nx;
    j["grid-ny"] = c.grid_ny;
    j["margin"] = c.margin;
    j["level"] = c.level;
    j["resamples"] = c.resamples;
    j["max-outliers"] = c.max_outliers;
    j["k"] = c.k;
    j["trim"] = c.trim;
    j["cluster-max-iter"] = c.cluster_max_iter;
    j["split"] = c.split;
    j["repeats"] = c.repeats;
    j["fallback-k"] = c.fallback_k;
    j["seed"] = c.seed;
    j["precision"] = c.precision;
    j["no-plots"] = c.no_plots;
    return j;
}

void write_manifest(RunContext& ctx) {
    nlohmann::json j;
    j["tool"] = "lexidepth";
    j["version"] = kVersion;
    j["subcommand"] = ctx.subcommand;
    j["seed"] = ctx.cfg.seed;
    j["config"] = config_json(ctx.cfg);
    nlohmann::json inputs = nlohmann::json::array();
    for (const auto& [path, digest] : ctx.inputs)
        inputs.push_back({{"path", path}, {"fnv1a64", digest}});
    j["inputs"] = inputs;
    j["outputs"] = ctx.outputs;

    auto out = ctx.open_output("manifest_" + ctx.subcommand + ".json");
    out << j.dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    Config cfg;
    if (const char* env_out = std::getenv("LEXIDEPTH_OUT")) cfg.out_dir = env_out;
    if (cfg.out_dir.empty()) cfg.out_dir = ".";

    CLI::App app{"lexicostatistic distance, depth, and clustering toolkit"};
    app.set_version_flag("--version", kVersion);
    app.set_config("--config", "", "flat key=value configuration file; flags win");
    app.require_subcommand(1);

    app.add_option("--input,-i", cfg.input, "wordlist file (delimited table)");
    app.add_option("--matrix", cfg.matrix_file, "precomputed distance matrix CSV");
    app.add_option("--embedding", cfg.embedding_file, "precomputed embedding CSV");
    app.add_option("--classes", cfg.classes_file, "class-label CSV (label,class)");
    app.add_option("--out,-o", cfg.out_dir, "output directory (env LEXIDEPTH_OUT)");
    app.add_option("--delimiter", cfg.delimiter, "wordlist delimiter: tab|comma");
    app.add_option("--missing", cfg.missing, "missing-datum marker");
    app.add_option("--normalize", cfg.normalize, "edit distances: none|length");
    app.add_option("--min-support", cfg.min_support, "minimum shared meanings per pair");
    app.add_flag("--emit-support", cfg.emit_support, "also write the support-count matrix");
    app.add_option("--linkage", cfg.linkage, "single|complete|average");
    app.add_option("--cut-k", cfg.cut_k, "also cut the tree into k flat clusters");
    app.add_flag("--emit-cophenetic", cfg.emit_cophenetic, "also write the cophenetic matrix");
    app.add_option("--mds", cfg.mds_variant, "classical|nonmetric");
    app.add_option("--dim", cfg.dim, "embedding dimension");
    app.add_option("--mds-max-iter", cfg.mds_max_iter, "SMACOF iteration cap");
    app.add_option("--mds-tol", cfg.mds_tol, "SMACOF stress-decrease stop threshold");
    app.add_option("--depth-method", cfg.depth_method, "spatial|l1");
    app.add_option("--grid-nx", cfg.grid_nx, "depth grid resolution (x)");
    app.add_option("--grid-ny", cfg.grid_ny, "depth grid resolution (y)");
    app.add_option("--margin", cfg.margin, "grid bounding-box margin per side");
    app.add_option("--level", cfg.level, "outlier significance level");
    app.add_option("--resamples", cfg.resamples, "outlier Monte Carlo resamples per stage");
    app.add_option("--max-outliers", cfg.max_outliers,
                   "outlier stage cap (0: ceil(level*n)+1)");
    app.add_option("--k", cfg.k, "cluster count");
    app.add_option("--trim", cfg.trim, "trimmed fraction for depth clustering");
    app.add_option("--cluster-max-iter", cfg.cluster_max_iter, "relocation pass cap");
    app.add_option("--split", cfg.split, "training fraction for classification");
    app.add_option("--repeats", cfg.repeats, "holdout repeats");
    app.add_option("--fallback-k", cfg.fallback_k, "kNN fallback neighborhood size");
    app.add_option("--seed", cfg.seed, "RNG seed, recorded in every manifest");
    app.add_option("--precision", cfg.precision, "decimal places in matrix CSVs");
    app.add_flag("--no-plots", cfg.no_plots, "skip SVG artifacts");

    std::vector<std::pair<std::string, void (*)(RunContext&)>> commands = {
        {"dist", cmd_dist},         {"tree", cmd_tree},       {"mds", cmd_mds},
        {"depth", cmd_depth},       {"outliers", cmd_outliers}, {"cluster", cmd_cluster},
        {"pam", cmd_pam},           {"classify", cmd_classify}, {"report", cmd_report}};
    static const std::map<std::string, std::string> descriptions = {
        {"dist", "averaged Levenshtein distance matrix"},
        {"tree", "agglomerative hierarchical clustering"},
        {"mds", "Cartesian embedding via MDS"},
        {"depth", "per-language depth report and depth surface"},
        {"outliers", "depth-based outlier detection"},
        {"cluster", "trimmed L1-depth clustering"},
        {"pam", "k-medoids partitioning"},
        {"classify", "depth-based supervised classification"},
        {"report", "full pipeline: dist, tree, mds, outliers, cluster, classify"}};
    for (auto& [name, fn] : commands)
        app.add_subcommand(name, descriptions.at(name))->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    RunContext ctx;
    ctx.cfg = cfg;
    try {
        for (auto& [name, fn] : commands) {
            if (app.got_subcommand(name)) {
                ctx.subcommand = name;
                fn(ctx);
                write_manifest(ctx);
                break;
            }
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const MalformedRow& e) {
        std::cerr << "error: " << e.what() << " (line " << e.line << ")\n";
        return 2;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const NumericError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
