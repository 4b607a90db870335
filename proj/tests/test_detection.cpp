#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "dendro/baselines.hpp"
#include "dendro/clustering.hpp"
#include "dendro/detection.hpp"
#include "dendro/errors.hpp"
#include "dendro/matrix.hpp"
#include "test_util.hpp"

using dendro::Clustering;
using dendro::DetectionConfig;
using dendro::SimilarityMatrix;

namespace {

// Five objects: a tight majority cluster {a, b, c} and a pair {d, e}.
SimilarityMatrix rep_matrix() {
    const std::vector<std::string> ids{"a", "b", "c", "d", "e"};
    const std::size_t n = 5;
    std::vector<double> v(n * n, 1.0);
    auto set = [&](std::size_t i, std::size_t j, double s) {
        v[i * n + j] = s;
        v[j * n + i] = s;
    };
    set(0, 1, 0.9);   // a-b
    set(0, 2, 0.85);  // a-c
    set(1, 2, 0.8);   // b-c
    set(3, 4, 0.75);  // d-e
    set(3, 0, 0.3);   // d-a
    set(3, 1, 0.4);   // d-b
    set(3, 2, 0.2);   // d-c
    set(4, 0, 0.35);  // e-a
    set(4, 1, 0.1);   // e-b
    set(4, 2, 0.25);  // e-c
    return SimilarityMatrix(ids, std::move(v));
}

Clustering rep_clustering() {
    Clustering c;
    c.clusters = {{"a", "b", "c"}, {"d", "e"}};
    c.source_ids = {"a", "b", "c", "d", "e"};
    return c;
}

}  // namespace

TEST_CASE("population-share component") {
    CHECK(dendro::of_neighbors(5, 100) == 0.95);
    CHECK(dendro::of_neighbors(62, 100) == 1.0 - 0.62);
    CHECK(dendro::of_neighbors(1, 1) == 0.0);
    CHECK(dendro::of_neighbors(7, 7) == 0.0);
    CHECK_THROWS_AS(dendro::of_neighbors(0, 10), dendro::InvalidInputError);
    CHECK_THROWS_AS(dendro::of_neighbors(11, 10), dendro::InvalidInputError);
}

TEST_CASE("score threshold endpoints and growth") {
    const double mu = 0.372, sigma = 0.191;
    CHECK(dendro::outlier_threshold(mu, sigma, 0.0) == mu + sigma);
    CHECK(dendro::outlier_threshold(mu, sigma, 1.0) == mu + 3.0 * sigma);
    CHECK(dendro::outlier_threshold(mu, sigma, 0.5) == mu + 1.5 * sigma);

    double prev = -1.0;
    for (double d : {0.0, 0.2, 0.4, 0.6, 0.8, 1.0}) {
        const double ot = dendro::outlier_threshold(mu, sigma, d);
        CHECK(ot > prev);
        prev = ot;
    }

    CHECK_THROWS_AS(dendro::outlier_threshold(0.5, 0.1, -0.1), dendro::InvalidInputError);
    CHECK_THROWS_AS(dendro::outlier_threshold(0.5, 0.1, 1.5), dendro::InvalidInputError);
    CHECK_THROWS_AS(dendro::outlier_threshold(0.5, -0.1, 0.5), dendro::InvalidInputError);
}

TEST_CASE("representative cluster needs a strict majority") {
    Clustering c;
    c.clusters = {{"a", "b", "c", "d", "e", "f"}, {"g", "h", "i"}, {"j", "k"}};
    REQUIRE(dendro::find_representative_cluster(c).has_value());
    CHECK(*dendro::find_representative_cluster(c) == 0);  // 12 > 11

    Clustering even;
    even.clusters = {{"a", "b", "c", "d", "e"}, {"f", "g", "h", "i", "j"}};
    CHECK(!dendro::find_representative_cluster(even).has_value());  // 10 is not > 10

    Clustering exact;
    exact.clusters = {{"a", "b", "c"}, {"d", "e"}, {"f"}};
    CHECK(!dendro::find_representative_cluster(exact).has_value());  // 6 is not > 6
}

TEST_CASE("placement with a representative cluster") {
    const auto sim = rep_matrix();
    const auto clustering = rep_clustering();

    CHECK(dendro::of_location("a", clustering, sim) == 0.0);
    CHECK(dendro::of_location("b", clustering, sim) == 0.0);
    // d's best link into {a, b, c} is d-b at 0.4.
    CHECK(dendro::of_location("d", clustering, sim) == 1.0 - 0.4);
    CHECK(dendro::of_location("e", clustering, sim) == 1.0 - 0.35);

    CHECK(dendro::object_cluster_similarity("d", clustering.clusters[0], sim) == 0.4);
    CHECK(dendro::object_cluster_similarity("a", clustering.clusters[0], sim) == 1.0);

    const auto score = dendro::outlier_factor("d", clustering, sim);
    CHECK(score.of_neighbors == 1.0 - 2.0 / 5.0);
    CHECK(score.of_location == 1.0 - 0.4);
    CHECK(score.of == (score.of_neighbors + score.of_location) / 2.0);
}

TEST_CASE("placement without a representative cluster averages over the rest") {
    // Three clusters of two: no majority anywhere.
    const std::vector<std::string> ids{"a", "b", "c", "d", "e", "f"};
    const std::size_t n = 6;
    std::vector<double> v(n * n, 0.05);
    for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;
    auto set = [&](std::size_t i, std::size_t j, double s) {
        v[i * n + j] = s;
        v[j * n + i] = s;
    };
    set(0, 1, 0.9);  // a-b
    set(2, 3, 0.9);  // c-d
    set(4, 5, 0.9);  // e-f
    set(0, 2, 0.4);  // a's best link into {c, d}
    set(0, 3, 0.3);
    set(0, 4, 0.2);  // a's best link into {e, f}
    set(0, 5, 0.1);
    const SimilarityMatrix sim(ids, std::move(v));

    Clustering clustering;
    clustering.clusters = {{"a", "b"}, {"c", "d"}, {"e", "f"}};
    clustering.source_ids = ids;

    CHECK(dendro::of_location("a", clustering, sim) == 1.0 - (0.4 + 0.2) / 2.0);
}

TEST_CASE("detection on the hand case") {
    const auto sim = rep_matrix();
    const auto clustering = rep_clustering();
    const auto report =
        dendro::detect_outliers(sim.ids(), clustering, sim, DetectionConfig{0.0});

    REQUIRE(report.scores.size() == 5);
    CHECK(report.scores[0].object_id == "a");  // dataset order
    CHECK(report.scores[0].of == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(report.scores[3].of == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(report.scores[4].of == doctest::Approx(0.625).epsilon(1e-12));

    CHECK(report.mu_of == doctest::Approx(0.365).epsilon(1e-12));
    CHECK(report.sigma_of == doctest::Approx(std::sqrt(0.0409)).epsilon(1e-12));
    CHECK(report.ot == report.mu_of + report.sigma_of);  // dispersion 0
    CHECK(report.outliers == std::vector<std::string>{"d", "e"});

    REQUIRE(report.cluster_summary.size() == 2);
    CHECK(report.cluster_summary[0].cluster_id == "C1");
    CHECK(report.cluster_summary[0].size == 3);
    CHECK(report.cluster_summary[0].outlier_count == 0);
    CHECK(report.cluster_summary[0].mean_of == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(report.cluster_summary[0].std_of == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(report.cluster_summary[1].size == 2);
    CHECK(report.cluster_summary[1].outlier_count == 2);

    SUBCASE("a wide-open dispersion flags nothing here") {
        const auto strict =
            dendro::detect_outliers(sim.ids(), clustering, sim, DetectionConfig{1.0});
        CHECK(strict.ot == strict.mu_of + 3.0 * strict.sigma_of);
        CHECK(strict.outliers.empty());
    }
}

TEST_CASE("identical factors flag nothing, whatever the spread knob says") {
    // Two symmetric pairs, every number dyadic: all four factors are exactly
    // 0.375, sigma is exactly 0, and the strict > comparison stays false.
    const std::vector<std::string> ids{"a", "b", "c", "d"};
    std::vector<double> v(16, 0.75);
    for (std::size_t i = 0; i < 4; ++i) v[i * 4 + i] = 1.0;
    v[0 * 4 + 1] = v[1 * 4 + 0] = 0.875;
    v[2 * 4 + 3] = v[3 * 4 + 2] = 0.875;
    const SimilarityMatrix sim(ids, std::move(v));

    Clustering clustering;
    clustering.clusters = {{"a", "b"}, {"c", "d"}};
    clustering.source_ids = ids;

    for (double d : {0.0, 0.5, 1.0}) {
        const auto report = dendro::detect_outliers(ids, clustering, sim, DetectionConfig{d});
        INFO("dispersion " << d);
        for (const auto& s : report.scores) CHECK(s.of == 0.375);
        CHECK(report.sigma_of == 0.0);
        CHECK(report.ot == 0.375);
        CHECK(report.outliers.empty());
    }
}

TEST_CASE("detection validates its inputs") {
    const auto sim = rep_matrix();
    const auto clustering = rep_clustering();
    const std::vector<std::string> ids = sim.ids();

    CHECK_THROWS_AS(dendro::detect_outliers(ids, clustering, sim, DetectionConfig{1.5}),
                    dendro::InvalidInputError);
    CHECK_THROWS_AS(dendro::detect_outliers({}, clustering, sim, DetectionConfig{0.0}),
                    dendro::DegenerateInputError);

    // Object outside every cluster.
    CHECK_THROWS_AS(dendro::detect_outliers({"a", "b", "c", "d", "x"}, clustering, sim,
                                            DetectionConfig{0.0}),
                    dendro::InvalidInputError);

    // Clustering mentions more objects than the dataset has.
    CHECK_THROWS_AS(dendro::detect_outliers({"a", "b", "c", "d"}, clustering, sim,
                                            DetectionConfig{0.0}),
                    dendro::InvalidInputError);

    // Duplicates in the dataset.
    CHECK_THROWS_AS(dendro::detect_outliers({"a", "b", "c", "d", "d"}, clustering, sim,
                                            DetectionConfig{0.0}),
                    dendro::InvalidInputError);

    // An object the clustering knows but the matrix does not.
    Clustering widened = clustering;
    widened.clusters[1].push_back("zz");
    CHECK_THROWS_AS(dendro::detect_outliers({"a", "b", "c", "d", "e", "zz"}, widened, sim,
                                            DetectionConfig{0.0}),
                    dendro::InvalidInputError);

    // A cluster sharing an object with another.
    Clustering overlapping = clustering;
    overlapping.clusters[1].push_back("a");
    CHECK_THROWS_AS(dendro::detect_outliers(ids, overlapping, sim, DetectionConfig{0.0}),
                    dendro::InvalidInputError);

    Clustering with_empty = clustering;
    with_empty.clusters.push_back({});
    CHECK_THROWS_AS(dendro::detect_outliers(ids, with_empty, sim, DetectionConfig{0.0}),
                    dendro::InvalidInputError);
}

TEST_CASE("matches the straight-line reference on random instances") {
    std::mt19937_64 rng(321);
    const double grid[] = {0.0, 0.25, 0.5, 0.75, 1.0};
    for (int round = 0; round < 20; ++round) {
        const std::size_t n = 2 + rng() % 39;
        const auto sim = testutil::random_matrix(n, 7000 + round);
        const auto clustering = dendro::cluster(sim);
        const double dispersion = grid[round % 5];

        const auto report =
            dendro::detect_outliers(sim.ids(), clustering, sim, DetectionConfig{dispersion});
        const auto expected =
            dendro::brute_force_detection(sim.ids(), clustering, sim, dispersion);
        INFO("round " << round << ", n = " << n << ", dispersion = " << dispersion);
        CHECK(report.outliers == expected);
    }
}
