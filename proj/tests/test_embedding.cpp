#include <doctest.h>

#include <cmath>
#include <sstream>

#include "lexidepth/embedding.hpp"
#include "lexidepth/errors.hpp"
#include "lexidepth/rng.hpp"
#include "oracles.hpp"

using namespace lexidepth;

namespace {

DistanceMatrix euclidean_of(const std::vector<double>& pts, std::size_t dim) {
    const std::size_t n = pts.size() / dim;
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < n; ++i) labels.push_back("p" + std::to_string(i));
    DistanceMatrix d(labels);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < dim; ++k) {
                const double diff = pts[i * dim + k] - pts[j * dim + k];
                s += diff * diff;
            }
            d.set(i, j, std::sqrt(s));
        }
    return d;
}

double embedded_dist(const Embedding& e, std::size_t i, std::size_t j) {
    double s = 0.0;
    for (std::size_t k = 0; k < e.dim; ++k) {
        const double diff = e.at(i, k) - e.at(j, k);
        s += diff * diff;
    }
    return std::sqrt(s);
}

}  // namespace

TEST_CASE("two points at distance 10 embed at -5 and +5") {
    DistanceMatrix d({"a", "b"});
    d.set(0, 1, 10.0);
    const Embedding e = classical_mds(d, 1);
    CHECK(std::abs(e.at(0, 0)) == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(e.at(0, 0) == doctest::Approx(-e.at(1, 0)).epsilon(1e-12));
}

TEST_CASE("equilateral triple reproduces unit distances") {
    DistanceMatrix d({"a", "b", "c"});
    d.set(0, 1, 1.0);
    d.set(0, 2, 1.0);
    d.set(1, 2, 1.0);
    const Embedding e = classical_mds(d, 2);
    CHECK(embedded_dist(e, 0, 1) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(embedded_dist(e, 0, 2) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(embedded_dist(e, 1, 2) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("classical MDS recovers planar configurations exactly") {
    Rng rng(101);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t n = 4 + rng.below(10);
        std::vector<double> pts(n * 2);
        for (double& v : pts) v = rng.uniform(-3.0, 3.0);
        const Embedding got = classical_mds(euclidean_of(pts, 2), 2);
        const Embedding truth = oracles::make_embedding(pts, 2);
        CHECK(procrustes_distance(got, truth) < 1e-9);
    }
}

TEST_CASE("classical MDS centers columns and sorts eigenvalues") {
    Rng rng(103);
    std::vector<double> pts(12);
    for (double& v : pts) v = rng.uniform(0.0, 5.0);
    const Embedding e = classical_mds(euclidean_of(pts, 2), 2);
    for (std::size_t k = 0; k < 2; ++k) {
        double mean = 0.0;
        for (std::size_t i = 0; i < e.n(); ++i) mean += e.at(i, k);
        CHECK(std::abs(mean / static_cast<double>(e.n())) < 1e-9);
    }
    for (std::size_t k = 1; k < e.eigenvalues.size(); ++k)
        CHECK(e.eigenvalues[k - 1] >= e.eigenvalues[k]);
    // Euclidean input: retained energy bounded by the total trace
    double trace = 0.0;
    for (double v : e.eigenvalues) trace += v;
    double retained = 0.0;
    for (std::size_t k = 0; k < 2; ++k) retained += std::max(0.0, e.eigenvalues[k]);
    CHECK(retained <= trace + 1e-9);
}

TEST_CASE("non-Euclidean matrices get flagged") {
    // violates the triangle inequality badly: 4th eigenvalue structure forces
    // a negative eigenvalue in the top 2 for this 3-point configuration
    DistanceMatrix d({"a", "b", "c"});
    d.set(0, 1, 1.0);
    d.set(0, 2, 1.0);
    d.set(1, 2, 10.0);
    const Embedding e = classical_mds(d, 2);
    REQUIRE(e.warnings.size() == 1);
    CHECK(e.warnings[0].find("NonEuclidean") == 0);
}

TEST_CASE("dim out of range") {
    DistanceMatrix d({"a", "b"});
    d.set(0, 1, 1.0);
    CHECK_THROWS_AS(classical_mds(d, 2), DimensionTooLarge);
    CHECK_THROWS_AS(classical_mds(d, 0), DimensionTooLarge);
}

TEST_CASE("nonmetric MDS on rank-consistent input converges to ~zero stress") {
    Rng rng(107);
    std::vector<double> pts(20);
    for (double& v : pts) v = rng.uniform(-2.0, 2.0);
    NonmetricOptions opts;
    opts.max_iter = 2000;
    opts.tol = 1e-14;
    const Embedding e = nonmetric_mds(euclidean_of(pts, 2), opts);
    CHECK(e.stress < 1e-6);
}

TEST_CASE("nonmetric MDS recovers a configuration from squared distances") {
    // rank constraints pin the shape only as pairs accumulate, so the
    // fixture uses a corpus-sized point count
    Rng rng(109);
    std::vector<double> pts(100);
    for (double& v : pts) v = rng.uniform(-2.0, 2.0);
    DistanceMatrix d = euclidean_of(pts, 2);
    DistanceMatrix squared(d.labels());
    for (std::size_t i = 0; i < d.size(); ++i)
        for (std::size_t j = i + 1; j < d.size(); ++j)
            squared.set(i, j, d.at(i, j) * d.at(i, j));
    NonmetricOptions opts;
    opts.max_iter = 8000;
    opts.tol = 1e-16;
    const Embedding got = nonmetric_mds(squared, opts);
    const Embedding truth = oracles::make_embedding(pts, 2);
    CHECK(procrustes_distance(got, truth, /*allow_scaling=*/true) < 1e-3);
}

TEST_CASE("nonmetric stress history never increases") {
    Rng rng(113);
    for (int trial = 0; trial < 20; ++trial) {
        const DistanceMatrix d = oracles::random_dissimilarity(rng, 4 + rng.below(8), false);
        NonmetricOptions opts;
        opts.seed = static_cast<std::uint64_t>(trial);
        opts.init = trial % 2 == 0 ? MdsInit::classical : MdsInit::random;
        const Embedding e = nonmetric_mds(d, opts);
        for (std::size_t i = 1; i < e.stress_history.size(); ++i)
            CHECK(e.stress_history[i] <= e.stress_history[i - 1]);
        CHECK(e.stress >= 0.0);
        CHECK(e.stress <= 1.0);
    }
}

TEST_CASE("all-equal dissimilarities degenerate to the classical solution") {
    DistanceMatrix d({"a", "b", "c", "d"});
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = i + 1; j < 4; ++j) d.set(i, j, 2.0);
    const Embedding e = nonmetric_mds(d, {});
    REQUIRE(e.warnings.size() == 1);
    CHECK(e.warnings[0].find("DegenerateRanks") == 0);
    CHECK(procrustes_distance(e, classical_mds(d, 2)) < 1e-12);
}

TEST_CASE("procrustes distance is zero for congruent configurations") {
    Rng rng(127);
    std::vector<double> pts(16);
    for (double& v : pts) v = rng.uniform(-1.0, 1.0);
    const Embedding a = oracles::make_embedding(pts, 2);

    const double theta = 0.73;
    std::vector<double> moved(16);
    for (std::size_t i = 0; i < 8; ++i) {
        const double x = pts[2 * i], y = pts[2 * i + 1];
        moved[2 * i] = std::cos(theta) * x - std::sin(theta) * y + 4.0;
        moved[2 * i + 1] = std::sin(theta) * x + std::cos(theta) * y - 2.5;
    }
    CHECK(procrustes_distance(a, oracles::make_embedding(moved, 2)) < 1e-10);

    // reflection counts as congruent too
    std::vector<double> reflected(16);
    for (std::size_t i = 0; i < 8; ++i) {
        reflected[2 * i] = -pts[2 * i];
        reflected[2 * i + 1] = pts[2 * i + 1];
    }
    CHECK(procrustes_distance(a, oracles::make_embedding(reflected, 2)) < 1e-10);

    // moving one point by eps moves the procrustes distance by at most eps
    std::vector<double> nudged = pts;
    nudged[0] += 1e-4;
    CHECK(procrustes_distance(a, oracles::make_embedding(nudged, 2)) <= 1e-4 + 1e-12);

    Embedding other = oracles::make_embedding(pts, 2, "q");
    CHECK_THROWS_AS(procrustes_distance(a, other), LabelMismatch);
}

TEST_CASE("classical MDS is label-permutation equivariant") {
    Rng rng(131);
    std::vector<double> pts(14);
    for (double& v : pts) v = rng.uniform(-2.0, 2.0);
    DistanceMatrix d = euclidean_of(pts, 2);
    const std::size_t n = d.size();

    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    rng.shuffle(perm);
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < n; ++i) labels.push_back(d.labels()[perm[i]]);
    DistanceMatrix pd(labels);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) pd.set(i, j, d.at(perm[i], perm[j]));

    const Embedding ea = classical_mds(d, 2);
    const Embedding eb = classical_mds(pd, 2);
    // permuting eb's rows back must give a configuration congruent to ea
    Embedding back;
    back.dim = 2;
    back.labels = ea.labels;
    back.coords.resize(n * 2);
    for (std::size_t i = 0; i < n; ++i) {
        back.coords[perm[i] * 2] = eb.at(i, 0);
        back.coords[perm[i] * 2 + 1] = eb.at(i, 1);
    }
    CHECK(procrustes_distance(ea, back) < 1e-9);
}

TEST_CASE("embedding CSV round trip") {
    Rng rng(137);
    std::vector<double> pts(10);
    for (double& v : pts) v = rng.uniform(-1.0, 1.0);
    const Embedding e = oracles::make_embedding(pts, 2);
    std::ostringstream out;
    write_embedding(e, out);
    std::istringstream in(out.str());
    const Embedding back = read_embedding(in);
    CHECK(back.labels == e.labels);
    REQUIRE(back.coords.size() == e.coords.size());
    for (std::size_t i = 0; i < e.coords.size(); ++i)
        CHECK(back.coords[i] == doctest::Approx(e.coords[i]).epsilon(1e-10));
}
