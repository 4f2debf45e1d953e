#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "lexidepth/distance.hpp"
#include "lexidepth/errors.hpp"
#include "lexidepth/partition.hpp"
#include "lexidepth/rng.hpp"
#include "oracles.hpp"

using namespace lexidepth;

namespace {

// Table 2 principal submatrix
DistanceMatrix table2() {
    DistanceMatrix d({"Late.Classical.Latin", "Megleno.Romanian", "Istro.Romanian",
                      "Aromanian"});
    d.set(0, 1, 3.69);
    d.set(0, 2, 3.73);
    d.set(0, 3, 3.67);
    d.set(1, 2, 2.44);
    d.set(1, 3, 1.76);
    d.set(2, 3, 2.39);
    return d;
}

DistanceMatrix line3() {
    DistanceMatrix d({"p0", "p1", "p10"});
    d.set(0, 1, 1.0);
    d.set(0, 2, 10.0);
    d.set(1, 2, 9.0);
    return d;
}

// three tight blobs far apart, `per` points each
Embedding blobs(Rng& rng, std::size_t per, double sigma, std::vector<int>* truth = nullptr) {
    const double centers[3][2] = {{0, 0}, {10, 0}, {0, 10}};
    std::vector<double> pts;
    for (int b = 0; b < 3; ++b) {
        const auto cloud = oracles::gaussian_cloud(rng, per, 2, sigma, centers[b]);
        pts.insert(pts.end(), cloud.begin(), cloud.end());
        if (truth)
            for (std::size_t i = 0; i < per; ++i) truth->push_back(b + 1);
    }
    return oracles::make_embedding(pts, 2);
}

Partition truth_partition(const std::vector<std::string>& labels, const std::vector<int>& a,
                          int k) {
    Partition p;
    p.labels = labels;
    p.assignment = a;
    p.k = k;
    return p;
}

}  // namespace

TEST_CASE("pam: k = n makes every point its own medoid") {
    const DistanceMatrix d = line3();
    const Partition p = pam(d, 3, 0);
    CHECK(p.objective == 0.0);
    CHECK(std::set<int>(p.assignment.begin(), p.assignment.end()).size() == 3);
}

TEST_CASE("pam matches the exhaustive optimum on the 3-point line") {
    const Partition p = pam(line3(), 2, 0);
    CHECK(p.objective == 1.0);
    CHECK(p.objective == oracles::exhaustive_kmedoid_cost(line3(), 2));
    // medoid set must be {0 or 1, 10}
    REQUIRE(p.representatives.size() == 2);
    CHECK(p.representatives[1] == "p10");
}

TEST_CASE("pam stays within 1.05x of the exhaustive optimum on domain matrices") {
    // the bound is empirical and holds for averaged-Levenshtein matrices
    // (the module's actual inputs); arbitrary random dissimilarities can
    // trap BUILD+SWAP in worse local optima
    Rng rng(401);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 4 + rng.below(4);  // up to 7
        const int k = 2 + static_cast<int>(rng.below(2));
        const WordList wl = oracles::random_wordlist(rng, n, 5 + rng.below(15));
        const DistanceMatrix d = averaged_matrix(wl);
        const Partition p = pam(d, k, 0);
        const double best = oracles::exhaustive_kmedoid_cost(d, k);
        CHECK(p.objective <= 1.05 * best + 1e-12);
    }
}

TEST_CASE("pam recovers separated blobs exactly") {
    Rng rng(409);
    std::vector<int> truth;
    const Embedding e = blobs(rng, 20, 0.1, &truth);
    DistanceMatrix d(e.labels);
    for (std::size_t i = 0; i < e.n(); ++i)
        for (std::size_t j = i + 1; j < e.n(); ++j)
            d.set(i, j, std::hypot(e.at(i, 0) - e.at(j, 0), e.at(i, 1) - e.at(j, 1)));
    const Partition p = pam(d, 3, 0);
    CHECK(rand_index(p, truth_partition(e.labels, truth, 3)).adjusted == doctest::Approx(1.0));
}

TEST_CASE("pam rejects bad k") {
    CHECK_THROWS_AS(pam(line3(), 4, 0), InvalidK);
    CHECK_THROWS_AS(pam(line3(), 0, 0), InvalidK);
}

TEST_CASE("tdd_cluster recovers separated blobs") {
    Rng rng(419);
    std::vector<int> truth;
    const Embedding e = blobs(rng, 20, 0.1, &truth);
    TddOptions opts;
    opts.k = 3;
    opts.trim_fraction = 0.0;
    const Partition p = tdd_cluster(e, opts);
    CHECK(rand_index(p, truth_partition(e.labels, truth, 3)).adjusted == doctest::Approx(1.0));
    CHECK(std::count(p.assignment.begin(), p.assignment.end(), Partition::kTrimmed) == 0);
}

TEST_CASE("tdd_cluster k=1 reports mean depth as the objective") {
    Rng rng(421);
    const double c[2] = {0, 0};
    const Embedding e = oracles::make_embedding(oracles::gaussian_cloud(rng, 15, 2, 1.0, c), 2);
    TddOptions opts;
    opts.k = 1;
    opts.trim_fraction = 0.0;
    const Partition p = tdd_cluster(e, opts);
    double mean = 0.0;
    for (double d : p.within_depths) mean += d;
    mean /= static_cast<double>(p.within_depths.size());
    CHECK(p.objective == doctest::Approx(mean).epsilon(1e-12));
}

TEST_CASE("tdd_cluster trims the injected extremes") {
    Rng rng(431);
    std::vector<int> truth;
    Embedding e = blobs(rng, 18, 0.1, &truth);  // 54 points
    // 6 injected far points
    const double far[6][2] = {{40, 40}, {-40, 40}, {40, -40}, {-45, -45}, {55, 0}, {0, -55}};
    for (const auto& f : far) {
        e.coords.insert(e.coords.end(), {f[0], f[1]});
        e.labels.push_back("far" + std::to_string(e.labels.size()));
    }
    TddOptions opts;
    opts.k = 3;
    opts.trim_fraction = 0.1;  // floor(0.1 * 60) = 6
    const Partition p = tdd_cluster(e, opts);
    std::size_t trimmed = 0, injected_trimmed = 0;
    for (std::size_t i = 0; i < p.assignment.size(); ++i) {
        if (p.assignment[i] != Partition::kTrimmed) continue;
        ++trimmed;
        if (i >= 54) ++injected_trimmed;
    }
    CHECK(trimmed == 6);
    CHECK(injected_trimmed >= 5);  // at least 90 percent of the trimmed set
}

TEST_CASE("tdd_cluster objective never decreases across passes") {
    Rng rng(433);
    for (int trial = 0; trial < 10; ++trial) {
        const double c[2] = {0, 0};
        std::vector<double> pts = oracles::gaussian_cloud(rng, 24, 2, 3.0, c);
        const Embedding e = oracles::make_embedding(pts, 2);
        TddOptions opts;
        opts.k = 2 + static_cast<int>(rng.below(2));
        opts.trim_fraction = 0.0;
        const Partition p = tdd_cluster(e, opts);
        for (std::size_t i = 1; i < p.objective_history.size(); ++i)
            CHECK(p.objective_history[i] >= p.objective_history[i - 1] - 1e-12);
    }
}

TEST_CASE("tdd_cluster validates the k/trim combination") {
    Embedding e = oracles::make_embedding({0, 0, 1, 1, 2, 2, 3, 3}, 2);
    TddOptions opts;
    opts.k = 4;
    opts.trim_fraction = 0.5;
    CHECK_THROWS_AS(tdd_cluster(e, opts), InfeasibleClustering);
    opts.k = 0;
    CHECK_THROWS_AS(tdd_cluster(e, opts), InfeasibleClustering);
}

TEST_CASE("clusterings are invariant to label order") {
    Rng rng(439);
    std::vector<int> truth;
    const Embedding e = blobs(rng, 8, 0.1, &truth);
    const std::size_t n = e.n();
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    rng.shuffle(perm);
    Embedding shuffled;
    shuffled.dim = 2;
    for (std::size_t i = 0; i < n; ++i) {
        shuffled.labels.push_back(e.labels[perm[i]]);
        shuffled.coords.insert(shuffled.coords.end(),
                               {e.at(perm[i], 0), e.at(perm[i], 1)});
    }
    TddOptions opts;
    opts.k = 3;
    opts.trim_fraction = 0.0;
    const Partition a = tdd_cluster(e, opts);
    const Partition b = tdd_cluster(shuffled, opts);
    CHECK(rand_index(a, b).adjusted == doctest::Approx(1.0));
}

TEST_CASE("knn_query") {
    const DistanceMatrix d = table2();
    // nearest to Aromanian is Megleno.Romanian at 1.76
    CHECK(knn_query(d, "Aromanian", 1) == std::vector<std::string>{"Megleno.Romanian"});
    CHECK(knn_query(d, "Aromanian", 3) ==
          std::vector<std::string>{"Megleno.Romanian", "Istro.Romanian",
                                   "Late.Classical.Latin"});
    CHECK_THROWS_AS(knn_query(d, "Aromanian", 4), InvalidK);
    CHECK_THROWS_AS(knn_query(d, "Dalmatian", 1), UnknownLabel);

    // duplicate distances resolve in label order
    DistanceMatrix ties({"a", "b", "c"});
    ties.set(0, 1, 1.0);
    ties.set(0, 2, 1.0);
    ties.set(1, 2, 1.0);
    CHECK(knn_query(ties, "a", 2) == std::vector<std::string>{"b", "c"});
}

TEST_CASE("rand index") {
    Partition a = truth_partition({"w", "x", "y", "z"}, {1, 1, 2, 2}, 2);
    CHECK(rand_index(a, a).rand == 1.0);
    CHECK(rand_index(a, a).adjusted == 1.0);

    // all singletons vs one cluster: ARI is exactly 0
    Partition singles = truth_partition({"w", "x", "y", "z"}, {1, 2, 3, 4}, 4);
    Partition lump = truth_partition({"w", "x", "y", "z"}, {1, 1, 1, 1}, 1);
    CHECK(rand_index(singles, lump).adjusted == doctest::Approx(0.0));

    CHECK_THROWS_AS(
        rand_index(a, truth_partition({"w", "x", "y", "q"}, {1, 1, 2, 2}, 2)),
        LabelMismatch);
}

TEST_CASE("rand index matches brute-force pair counting") {
    Rng rng(443);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 8;
        std::vector<std::string> labels;
        std::vector<int> xa(n), xb(n);
        for (std::size_t i = 0; i < n; ++i) {
            labels.push_back("p" + std::to_string(i));
            xa[i] = 1 + static_cast<int>(rng.below(3));
            xb[i] = 1 + static_cast<int>(rng.below(3));
        }
        const auto got = rand_index(truth_partition(labels, xa, 3),
                                    truth_partition(labels, xb, 3));
        const auto [rand, ari] = oracles::brute_pair_rand(xa, xb);
        CHECK(got.rand == doctest::Approx(rand).epsilon(1e-12));
        CHECK(got.adjusted == doctest::Approx(ari).epsilon(1e-12));
    }
}

TEST_CASE("rand index skips trimmed labels") {
    Partition a = truth_partition({"w", "x", "y", "z"}, {1, 1, 2, Partition::kTrimmed}, 2);
    Partition b = truth_partition({"w", "x", "y", "z"}, {2, 2, 1, 1}, 2);
    CHECK(rand_index(a, b).rand == 1.0);  // agreement on the 3 kept labels
}

TEST_CASE("partition writers") {
    Partition p = truth_partition({"a", "b"}, {1, Partition::kTrimmed}, 1);
    p.within_depths = {0.5, 0.125};
    p.method = "tdd";
    std::ostringstream csv;
    write_partition_csv(p, csv);
    CHECK(csv.str().find("a,1,0.5,false") != std::string::npos);
    CHECK(csv.str().find("b,TRIMMED,0.125,true") != std::string::npos);
    std::ostringstream json;
    write_partition_json(p, json);
    CHECK(json.str().find("\"trimmed\"") != std::string::npos);
}
