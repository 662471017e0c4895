#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "fdrec/errors.hpp"
#include "fdrec/estimator.hpp"
#include "fdrec/factor_count.hpp"
#include "fdrec/presets.hpp"
#include "fdrec/simulation.hpp"
#include "test_support.hpp"

using namespace fdrec;
using namespace fdrec::presets;
using fdrec::test::has_warning;

namespace {

// Hand-built spectrum in an otherwise minimal eigensystem: decision logic
// only touches the eigenvalues.
EigenSystem spectrum(const std::vector<double>& values, int width = 10) {
    EigenSystem es;
    const auto n = static_cast<Eigen::Index>(values.size());
    es.eigenvalues = Eigen::Map<const Eigen::VectorXd>(values.data(), n);
    es.eigenvectors = Eigen::MatrixXd::Identity(n, n);
    es.scaled = es.eigenvalues / width;
    es.panel_width = width;
    return es;
}

}  // namespace

TEST_SUITE("factor_count") {

TEST_CASE("ratio rule finds the largest consecutive drop") {
    const EigenSystem es = spectrum({100.0, 50.0, 25.0, 1.0, 0.9, 0.8});
    const FactorCountResult result = eigenvalue_ratio(es, 5);
    CHECK(result.chosen == 3);  // 25 / 1 dominates
    CHECK(result.method == FactorCountMethod::EigenvalueRatio);
    REQUIRE(result.scores_by_k.size() == 5);
    CHECK(result.scores_by_k[0] == doctest::Approx(2.0));
    CHECK(result.scores_by_k[2] == doctest::Approx(25.0));
    CHECK(result.warnings.empty());
}

TEST_CASE("ratio ties resolve to the smallest candidate") {
    const EigenSystem es = spectrum({8.0, 4.0, 2.0, 1.0, 0.5});
    const FactorCountResult result = eigenvalue_ratio(es, 4);
    CHECK(result.chosen == 1);  // every ratio is 2
}

TEST_CASE("ratio rule keeps candidates away from the zero tail") {
    const EigenSystem es = spectrum({4.0, 2.0, 0.0, 0.0});
    const FactorCountResult result = eigenvalue_ratio(es, 3);
    CHECK(result.chosen == 1);
    CHECK(result.scores_by_k.size() == 1);  // only gamma_1 / gamma_2 is defined
    CHECK(has_warning(result.warnings, "shrunk"));
}

TEST_CASE("ratio rule needs two positive eigenvalues and a valid cap") {
    const EigenSystem single = spectrum({4.0, 0.0, 0.0});
    CHECK_THROWS_AS(eigenvalue_ratio(single, 2), InsufficientRank);
    const EigenSystem es = spectrum({4.0, 2.0, 1.0});
    CHECK_THROWS_AS(eigenvalue_ratio(es, 0), InvalidInput);
    CHECK_THROWS_AS(eigenvalue_ratio(es, 3), InvalidInput);  // at most size - 1
}

TEST_CASE("ratio rule recovers the planted factor count") {
    const GroundTruth truth = simulate(three_factor_ar(200, 200));
    const Eigen::VectorXd mean = estimate_mean(truth.observed);
    const Eigen::MatrixXd centered = truth.observed.values().rowwise() - mean.transpose();
    const EigenSystem es =
        gram_eigen(Panel(centered, truth.observed.grid(), PanelRole::Observed));
    const FactorCountResult result = eigenvalue_ratio(es, default_k_max(200, 200));
    CHECK(result.chosen == 3);
}

TEST_CASE("information criterion recovers a planted factor count") {
    SimConfig cfg = three_factor_ar(100, 100);
    cfg.decay.values = {8.0, 4.0};
    cfg.num_factors = 2;
    cfg.score_ar = {0.3};
    cfg.noise.sigma = 0.2;
    const GroundTruth truth = simulate(cfg);
    const FactorCountResult result = info_criterion(truth.observed, 10);
    CHECK(result.chosen == 2);
    CHECK(result.method == FactorCountMethod::InformationCriterion);
    CHECK(result.scores_by_k.size() == 10);
}

TEST_CASE("information criterion warns when the spectrum is almost flat") {
    // After centering, T - 1 = 119 equal eigenvalues: the leading component
    // explains under 1% of the variance and the penalty beats every drop.
    const int t = 120, p = 150;
    Eigen::MatrixXd y = Eigen::MatrixXd::Zero(t, p);
    const double c = std::sqrt(static_cast<double>(t));
    for (int i = 0; i < t; ++i) {
        y(i, i) = c;
    }
    const Panel panel(y, SamplingGrid::equidistant(p), PanelRole::Observed);
    const FactorCountResult result = info_criterion(panel, 10);
    CHECK(result.chosen == 1);
    CHECK(has_warning(result.warnings, kWarnLowSignal));
    // The criterion grows along the flat spectrum.
    for (size_t k = 1; k < result.scores_by_k.size(); ++k) {
        CHECK(result.scores_by_k[k] > result.scores_by_k[k - 1]);
    }
}

TEST_CASE("information criterion validates its inputs") {
    const Panel one_curve(Eigen::MatrixXd::Zero(1, 5), SamplingGrid::equidistant(5),
                          PanelRole::Observed);
    CHECK_THROWS_AS(info_criterion(one_curve, 1), InvalidInput);
    const GroundTruth truth = simulate(three_factor_ar(20, 10));
    CHECK_THROWS_AS(info_criterion(truth.observed, 0), InvalidInput);
    CHECK_THROWS_AS(info_criterion(truth.observed, 10), InvalidInput);  // min(T,p) - 1
    const Panel constant(Eigen::MatrixXd::Ones(6, 5), SamplingGrid::equidistant(5),
                         PanelRole::Observed);
    CHECK_THROWS_AS(info_criterion(constant, 2), InsufficientRank);  // centers to zero
}

TEST_CASE("default candidate cap is a quarter of the short side, clamped") {
    CHECK(default_k_max(8, 100) == 2);
    CHECK(default_k_max(100, 8) == 2);
    CHECK(default_k_max(400, 400) == 50);  // upper clamp
    CHECK(default_k_max(4, 4) == 1);
    CHECK(default_k_max(6, 6) == 1);
    CHECK(default_k_max(2, 2) == 1);  // lower clamp
}

TEST_CASE("method names are stable strings") {
    CHECK(to_string(FactorCountMethod::EigenvalueRatio) == "eigenvalue_ratio");
    CHECK(to_string(FactorCountMethod::InformationCriterion) == "information_criterion");
}

}  // TEST_SUITE
