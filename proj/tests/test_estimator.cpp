#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "fdrec/errors.hpp"
#include "fdrec/estimator.hpp"
#include "fdrec/presets.hpp"
#include "fdrec/simulation.hpp"
#include "test_support.hpp"

using namespace fdrec;
using namespace fdrec::presets;
using fdrec::test::has_warning;
using fdrec::test::max_abs;
using fdrec::test::random_panel;

namespace {

// Convenience: diagonal panel whose centered-or-not Gram spectrum is explicit.
Panel diagonal_panel(const std::vector<double>& d) {
    const int n = static_cast<int>(d.size());
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        m(i, i) = d[static_cast<size_t>(i)];
    }
    return Panel(m, SamplingGrid::equidistant(n), PanelRole::Observed);
}

}  // namespace

TEST_SUITE("estimator") {

TEST_CASE("estimate_mean averages the rows") {
    Eigen::MatrixXd m(2, 3);
    m << 1, 2, 3, 3, 6, 9;
    const Panel panel(m, SamplingGrid::equidistant(3), PanelRole::Observed);
    const Eigen::VectorXd mean = estimate_mean(panel);
    CHECK(mean[0] == doctest::Approx(2.0));
    CHECK(mean[1] == doctest::Approx(4.0));
    CHECK(mean[2] == doctest::Approx(6.0));
    const Panel empty(Eigen::MatrixXd(0, 3), SamplingGrid::equidistant(3), PanelRole::Observed);
    CHECK_THROWS_AS(estimate_mean(empty), InvalidInput);
}

TEST_CASE("scaled_eigenvalues insists on the panel width it was built from") {
    const Panel panel = random_panel(10, 7, 3);
    const EigenSystem es = gram_eigen(panel);
    CHECK_NOTHROW(scaled_eigenvalues(es, 7));
    CHECK_THROWS_AS(scaled_eigenvalues(es, 8), InvalidInput);
}

TEST_CASE("a panel of exact factor form is reproduced to rounding error") {
    Rng rng(2601);
    const int t = 30, p = 40, l = 2;
    Eigen::MatrixXd f(t, l), b(p, l);
    Eigen::VectorXd mu(p);
    for (int i = 0; i < t; ++i)
        for (int j = 0; j < l; ++j) f(i, j) = rng.normal();
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < l; ++j) b(i, j) = rng.normal();
    for (int i = 0; i < p; ++i) mu[i] = rng.normal();

    Eigen::MatrixXd y = f * b.transpose();
    y.rowwise() += mu.transpose();
    const Panel panel(y, SamplingGrid::equidistant(p), PanelRole::Observed);

    const auto [fit, es] = recover(panel, l);
    CHECK(fit.num_factors == l);
    CHECK(sup_abs_diff(fit.recovered.values(), y) <= 1e-9 * max_abs(y));
    CHECK(fit.recovered.role() == PanelRole::Recovered);
    CHECK(fit.warnings.empty());
    // Anything beyond the true rank of the centered panel is clamped away.
    CHECK(es.positive_count() == l);
}

TEST_CASE("scores and loadings satisfy their defining identities") {
    const GroundTruth truth = simulate(three_factor_ar(60, 50));
    const auto [fit, es] = recover(truth.observed, 3);

    const int t = 60;
    const Eigen::MatrixXd centered =
        truth.observed.values().rowwise() - fit.mean.transpose();

    // scores = sqrt(T) * leading eigenvectors; their Gram is T * I.
    CHECK(max_abs(fit.scores.transpose() * fit.scores -
                  t * Eigen::MatrixXd::Identity(3, 3)) < 1e-8 * t);
    // loadings = Yc^T scores / T.
    CHECK(max_abs(fit.loadings - centered.transpose() * fit.scores / t) < 1e-12);
    // recovered = scores * loadings^T + mean.
    Eigen::MatrixXd rebuilt = fit.scores * fit.loadings.transpose();
    rebuilt.rowwise() += fit.mean.transpose();
    CHECK(sup_abs_diff(fit.recovered.values(), rebuilt) < 1e-10 * max_abs(rebuilt));
    // eigenvalues are the leading ones of the system the fit was cut from.
    CHECK(max_abs(fit.eigenvalues - es.eigenvalues.head(3)) == 0.0);
}

TEST_CASE("the residual is orthogonal to the retained directions") {
    const GroundTruth truth = simulate(three_factor_ar(60, 50));
    const auto [fit, es] = recover(truth.observed, 3);
    const Eigen::MatrixXd centered =
        truth.observed.values().rowwise() - fit.mean.transpose();
    const Eigen::MatrixXd recovered_centered =
        fit.recovered.values().rowwise() - fit.mean.transpose();
    const Eigen::MatrixXd residual = centered - recovered_centered;
    const Eigen::MatrixXd basis = es.eigenvectors.leftCols(3);
    CHECK(max_abs(basis.transpose() * residual) < 1e-8 * max_abs(centered));
}

TEST_CASE("projection is idempotent") {
    const GroundTruth truth = simulate(three_factor_ar(40, 30));
    const auto [fit, es] = recover(truth.observed, 3);
    const auto [fit2, es2] = recover(fit.recovered, 3);
    CHECK(sup_abs_diff(fit2.recovered, fit.recovered) <
          1e-10 * max_abs(fit.recovered.values()));
}

TEST_CASE("negating the panel negates the fit exactly") {
    const Panel panel = random_panel(25, 15, 88);
    const Panel negated(-panel.values(), panel.grid(), panel.role());
    const auto [fit_pos, es_pos] = recover(panel, 2);
    const auto [fit_neg, es_neg] = recover(negated, 2);
    CHECK(sup_abs_diff(fit_neg.recovered.values(), -fit_pos.recovered.values()) == 0.0);
    CHECK(max_abs(fit_neg.eigenvalues - fit_pos.eigenvalues) == 0.0);
}

TEST_CASE("scaling the panel scales the fit") {
    const Panel panel = random_panel(25, 15, 89);
    for (const double c : {0.5, 3.0}) {
        const Panel scaled(c * panel.values(), panel.grid(), panel.role());
        const auto [fit1, es1] = recover(panel, 2);
        const auto [fit2, es2] = recover(scaled, 2);
        CHECK(sup_abs_diff(fit2.recovered.values(), c * fit1.recovered.values()) <=
              1e-12 * c * max_abs(fit1.recovered.values()));
        for (int i = 0; i < 2; ++i) {
            CHECK(fit2.eigenvalues[i] ==
                  doctest::Approx(c * c * fit1.eigenvalues[i]).epsilon(1e-12));
        }
    }
}

TEST_CASE("residual norm is monotone in the number of factors") {
    const GroundTruth truth = simulate(three_factor_ar(50, 40));
    double previous = std::numeric_limits<double>::infinity();
    for (int l = 1; l <= 5; ++l) {
        const auto [fit, es] = recover(truth.observed, l);
        const double residual =
            (truth.observed.values() - fit.recovered.values()).norm();
        CHECK(residual <= previous + 1e-12);
        previous = residual;
    }
}

TEST_CASE("centering can be done by the caller with identical results") {
    const Panel panel = random_panel(20, 12, 7);
    const Eigen::VectorXd mean = estimate_mean(panel);
    const Eigen::MatrixXd centered = panel.values().rowwise() - mean.transpose();
    const Panel pre_centered(centered, panel.grid(), panel.role());

    const auto [fit_auto, es_auto] = recover(panel, 2, true);
    const auto [fit_manual, es_manual] = recover(pre_centered, 2, false);

    CHECK(max_abs(fit_manual.mean) == 0.0);
    Eigen::MatrixXd shifted = fit_manual.recovered.values();
    shifted.rowwise() += mean.transpose();
    CHECK(sup_abs_diff(fit_auto.recovered.values(), shifted) == 0.0);
    CHECK(max_abs(fit_auto.eigenvalues - fit_manual.eigenvalues) == 0.0);
}

TEST_CASE("factor count outside [1, min(T,p)] is rejected") {
    const Panel panel = random_panel(10, 6, 1);
    CHECK_THROWS_AS(recover(panel, 0), InvalidInput);
    CHECK_THROWS_AS(recover(panel, 7), InvalidInput);
    const Panel empty(Eigen::MatrixXd(0, 6), SamplingGrid::equidistant(6), PanelRole::Observed);
    CHECK_THROWS_AS(recover(empty, 1), InvalidInput);
}

TEST_CASE("a rank-deficient panel shrinks the factor count with a warning") {
    const Panel panel = diagonal_panel({3.0, 2.0, 0.0, 0.0, 0.0, 0.0});
    const auto [fit, es] = recover(panel, 4, false);
    CHECK(fit.num_factors == 2);
    CHECK(has_warning(fit.warnings, "shrunk"));
}

TEST_CASE("an all-zero panel has no factors to recover") {
    const Panel zero(Eigen::MatrixXd::Zero(5, 4), SamplingGrid::equidistant(4),
                     PanelRole::Observed);
    CHECK_THROWS_AS(recover(zero, 1, false), InsufficientRank);
    CHECK_THROWS_AS(recover(zero, 1, true), InsufficientRank);
}

TEST_CASE("cutting inside a flat part of the spectrum warns") {
    const Panel panel = diagonal_panel({2.0, 1.0, 1.0, 0.1, 0.0, 0.0});
    const auto [fit_flat, es1] = recover(panel, 2, false);  // gap gamma_2 - gamma_3 = 0
    CHECK(has_warning(fit_flat.warnings, kWarnDegenerateSpectrum));
    const auto [fit_clean, es2] = recover(panel, 1, false);  // gap 4 - 1 in Gram units
    CHECK_FALSE(has_warning(fit_clean.warnings, kWarnDegenerateSpectrum));
}

TEST_CASE("alignment with the fit itself is the identity rotation") {
    const GroundTruth truth = simulate(three_factor_ar(80, 60));
    const auto [fit, es] = recover(truth.observed, 3);
    const FactorTruth self{fit.scores, fit.loadings, fit.eigenvalues / 60.0};
    const DiagnosticsReport report = alignment_diagnostics(fit, self);
    CHECK(max_abs(report.h_matrix - Eigen::MatrixXd::Identity(3, 3)) < 1e-10);
    CHECK(report.score_error < 1e-10 * report.score_scale);
    CHECK(report.loading_error < 1e-10 * report.loading_scale);
    CHECK(report.h_norm == doctest::Approx(1.0));
    CHECK(report.orthogonality_gap < 1e-10);
}

TEST_CASE("an orthogonally rotated reference is recovered as that rotation") {
    const GroundTruth truth = simulate(three_factor_ar(80, 60));
    const auto [fit, es] = recover(truth.observed, 2);
    const double angle = 0.5235987755982988;  // 30 degrees
    Eigen::MatrixXd q(2, 2);
    q << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);

    const FactorTruth rotated{fit.scores * q, fit.loadings * q, Eigen::VectorXd::Ones(2)};
    const DiagnosticsReport report = alignment_diagnostics(fit, rotated);
    CHECK(max_abs(report.h_matrix - q) < 1e-8);
    CHECK(report.score_error < 1e-8 * report.score_scale);
    CHECK(report.loading_error < 1e-8 * report.loading_scale);
    CHECK(report.orthogonality_gap < 1e-8);
    CHECK(report.h_norm == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("alignment on simulated data is sane at moderate sizes") {
    const GroundTruth truth = simulate(three_factor_ar(300, 200));
    const auto [fit, es] = recover(truth.observed, 3);
    const FactorTruth reference{truth.normalized_scores, truth.loadings, truth.eigenvalues};
    const DiagnosticsReport report = alignment_diagnostics(fit, reference);
    CHECK(report.orthogonality_gap < 0.5);
    CHECK(report.h_norm > 0.5);
    CHECK(report.h_norm < 2.0);
    CHECK(report.score_error < report.score_scale);
}

TEST_CASE("alignment rejects mismatched shapes and a degenerate fit") {
    const GroundTruth truth = simulate(three_factor_ar(40, 30));
    const auto [fit, es] = recover(truth.observed, 2);
    const FactorTruth narrow{truth.normalized_scores.leftCols(1), truth.loadings.leftCols(1),
                             truth.eigenvalues.head(1)};
    CHECK_THROWS_AS(alignment_diagnostics(fit, narrow), InvalidInput);

    FactorFit degenerate{
        Eigen::VectorXd::Zero(2),
        2,
        Eigen::MatrixXd::Identity(2, 2),
        Eigen::MatrixXd::Identity(2, 2),
        Eigen::Vector2d(1.0, 0.0),  // retained eigenvalue hit the clamp
        Panel(Eigen::MatrixXd::Zero(2, 2), SamplingGrid::equidistant(2), PanelRole::Recovered),
        {},
    };
    const FactorTruth reference{Eigen::MatrixXd::Identity(2, 2), Eigen::MatrixXd::Identity(2, 2),
                                Eigen::VectorXd::Ones(2)};
    CHECK_THROWS_AS(alignment_diagnostics(degenerate, reference), SingularEigenvalue);
}

}  // TEST_SUITE
