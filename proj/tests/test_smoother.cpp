#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "fdrec/errors.hpp"
#include "fdrec/smoother.hpp"
#include "test_support.hpp"

using namespace fdrec;
using fdrec::test::max_abs;

TEST_SUITE("smoother") {

TEST_CASE("local linear fits reproduce affine data exactly") {
    for (const auto kernel : {SmootherKernel::Epanechnikov, SmootherKernel::Gaussian}) {
        for (const bool regular : {true, false}) {
            const SamplingGrid grid = regular
                ? SamplingGrid::equidistant(25)
                : SamplingGrid({0.0, 0.05, 0.07, 0.2, 0.33, 0.41, 0.55, 0.68, 0.71, 0.9, 1.0});
            Eigen::VectorXd y(grid.size());
            for (int i = 0; i < grid.size(); ++i) {
                y[i] = 2.0 + 3.0 * grid[i];
            }
            const SmootherConfig cfg{0.25, kernel};
            const Eigen::VectorXd fitted = smooth_curve(y, grid, cfg);
            CHECK(max_abs(fitted - y) < 1e-10);
        }
    }
}

TEST_CASE("constants survive smoothing at any bandwidth") {
    const SamplingGrid grid = SamplingGrid::equidistant(40);
    const Eigen::VectorXd y = Eigen::VectorXd::Constant(40, 5.5);
    for (const double h : {0.05, 0.2, 0.5}) {
        const Eigen::VectorXd fitted =
            smooth_curve(y, grid, SmootherConfig{h, SmootherKernel::Epanechnikov});
        CHECK(max_abs(fitted - y) < 1e-12);
    }
}

TEST_CASE("smoothing squeezes independent noise out of a sine") {
    const int p = 101;
    const SamplingGrid grid = SamplingGrid::equidistant(p);
    Eigen::VectorXd clean(p), noisy(p);
    Rng rng(4242);
    for (int i = 0; i < p; ++i) {
        clean[i] = std::sin(2.0 * std::numbers::pi * grid[i]);
        noisy[i] = clean[i] + 0.3 * rng.normal();
    }

    const Eigen::VectorXd fixed_h =
        smooth_curve(noisy, grid, SmootherConfig{0.05, SmootherKernel::Epanechnikov});
    const double mse_fixed = (fixed_h - clean).squaredNorm() / p;
    CHECK(mse_fixed < 0.03);  // raw noise level is 0.09

    const Eigen::VectorXd auto_h =
        smooth_curve(noisy, grid, SmootherConfig{{}, SmootherKernel::Epanechnikov});
    const double mse_auto = (auto_h - clean).squaredNorm() / p;
    CHECK(mse_auto < 0.03);
}

TEST_CASE("cross validation picks a bandwidth from the advertised range") {
    const int p = 60;
    const SamplingGrid grid = SamplingGrid::equidistant(p);
    Eigen::VectorXd y(p);
    Rng rng(11);
    for (int i = 0; i < p; ++i) {
        y[i] = std::cos(2.0 * std::numbers::pi * grid[i]) + 0.2 * rng.normal();
    }
    for (const auto kernel : {SmootherKernel::Epanechnikov, SmootherKernel::Gaussian}) {
        const double h = loocv_bandwidth(y, grid, kernel);
        CHECK(h >= grid.mesh());
        CHECK(h <= 0.5);
        CHECK(h == loocv_bandwidth(y, grid, kernel));  // deterministic
    }
}

TEST_CASE("bandwidths below the mesh are refused") {
    const SamplingGrid grid = SamplingGrid::equidistant(20);  // mesh 0.05
    const Eigen::VectorXd y = Eigen::VectorXd::LinSpaced(20, 0.0, 1.0);
    CHECK_THROWS_AS(smooth_curve(y, grid, SmootherConfig{0.01, SmootherKernel::Epanechnikov}),
                    BandwidthTooSmall);
    CHECK_THROWS_AS(smooth_curve(y, grid, SmootherConfig{0.01, SmootherKernel::Gaussian}),
                    BandwidthTooSmall);
    // A non-positive bandwidth breaks the config invariant rather than the fit.
    CHECK_THROWS_AS(smooth_curve(y, grid, SmootherConfig{0.0, SmootherKernel::Gaussian}),
                    InvalidInput);
    // At exactly the mesh the Gaussian kernel (infinite support) still works,
    // while the Epanechnikov window |z| < 1 leaves boundary points with a
    // single effective point, which is the other BandwidthTooSmall route.
    CHECK_NOTHROW(smooth_curve(y, grid, SmootherConfig{grid.mesh(), SmootherKernel::Gaussian}));
    CHECK_THROWS_AS(smooth_curve(y, grid,
                                 SmootherConfig{grid.mesh(), SmootherKernel::Epanechnikov}),
                    BandwidthTooSmall);
    CHECK_NOTHROW(smooth_curve(y, grid,
                               SmootherConfig{2.0 * grid.mesh(), SmootherKernel::Epanechnikov}));
}

TEST_CASE("too few points or mismatched lengths are invalid") {
    const SamplingGrid tiny({0.0, 1.0});
    CHECK_THROWS_AS(smooth_curve(Eigen::VectorXd::Zero(2), tiny,
                                 SmootherConfig{0.5, SmootherKernel::Epanechnikov}),
                    InvalidInput);
    const SamplingGrid grid = SamplingGrid::equidistant(10);
    CHECK_THROWS_AS(smooth_curve(Eigen::VectorXd::Zero(9), grid,
                                 SmootherConfig{0.5, SmootherKernel::Epanechnikov}),
                    InvalidInput);
}

TEST_CASE("panels are smoothed row by row") {
    const int t = 4, p = 50;
    const SamplingGrid grid = SamplingGrid::equidistant(p);
    Eigen::MatrixXd values(t, p);
    Rng rng(777);
    for (int r = 0; r < t; ++r) {
        for (int i = 0; i < p; ++i) {
            values(r, i) = std::sin(2.0 * std::numbers::pi * grid[i] + r) + 0.1 * rng.normal();
        }
    }
    const Panel panel(values, grid, PanelRole::Observed);
    const SmootherConfig cfg{0.08, SmootherKernel::Epanechnikov};
    const Panel smoothed = smooth_panel(panel, cfg);
    CHECK(smoothed.role() == PanelRole::Recovered);
    CHECK(smoothed.num_curves() == t);
    for (int r = 0; r < t; ++r) {
        const Eigen::VectorXd row = smooth_curve(values.row(r).transpose(), grid, cfg);
        CHECK(max_abs(smoothed.values().row(r).transpose() - row) == 0.0);
    }
}

}  // TEST_SUITE
