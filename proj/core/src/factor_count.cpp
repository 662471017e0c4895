#include "fdrec/factor_count.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fdrec/errors.hpp"
#include "fdrec/estimator.hpp"

namespace fdrec {

std::string to_string(FactorCountMethod method) {
    return method == FactorCountMethod::EigenvalueRatio ? "eigenvalue_ratio" : "information_criterion";
}

int default_k_max(Eigen::Index num_curves, Eigen::Index num_points) {
    const auto quarter = std::min(num_curves, num_points) / 4;
    return static_cast<int>(std::clamp<Eigen::Index>(quarter, 1, 50));
}

namespace {

void check_k_max(int k_max, Eigen::Index limit) {
    if (k_max < 1 || k_max > limit) {
        throw InvalidInput("k_max " + std::to_string(k_max) + " outside [1, " +
                           std::to_string(limit) + "]");
    }
}

}  // namespace

FactorCountResult eigenvalue_ratio(const EigenSystem& es, int k_max) {
    check_k_max(k_max, es.size() - 1);
    const Eigen::Index positive = es.positive_count();
    if (positive < 2) {
        throw InsufficientRank("eigenvalue_ratio: need at least two positive eigenvalues, have " +
                               std::to_string(positive));
    }

    FactorCountResult result;
    result.method = FactorCountMethod::EigenvalueRatio;
    // Ratios past the rank would divide by zero; restrict candidates so every
    // scored k has a positive denominator.
    const int k_hi = static_cast<int>(std::min<Eigen::Index>(k_max, positive - 1));
    if (k_hi < k_max) {
        result.warnings.push_back("candidate cap shrunk from " + std::to_string(k_max) + " to " +
                                  std::to_string(k_hi) + " (rank " + std::to_string(positive) + ")");
    }
    double best = -1.0;
    for (int k = 1; k <= k_hi; ++k) {
        const double ratio = es.eigenvalues[k - 1] / es.eigenvalues[k];
        result.scores_by_k.push_back(ratio);
        if (ratio > best) {  // strict: ties resolve to the smallest k
            best = ratio;
            result.chosen = k;
        }
    }
    return result;
}

FactorCountResult info_criterion(const Panel& panel, int k_max) {
    const Eigen::Index t = panel.num_curves();
    const Eigen::Index p = panel.num_points();
    if (t < 2) {
        throw InvalidInput("info_criterion: need at least two curves");
    }
    check_k_max(k_max, std::min(t, p) - 1);

    const Eigen::VectorXd mean = estimate_mean(panel);
    const Eigen::MatrixXd centered = panel.values().rowwise() - mean.transpose();
    const EigenSystem es = gram_eigen(Panel(centered, panel.grid(), panel.role()));
    const Eigen::Index positive = es.positive_count();
    if (positive < 1) {
        throw InsufficientRank("info_criterion: centered panel has rank zero");
    }

    FactorCountResult result;
    result.method = FactorCountMethod::InformationCriterion;

    // V(k): average residual variance after removing k components. Eigenvalue
    // tail sums avoid recomputing the projection residual for each k.
    const double trace = es.eigenvalues.sum();
    auto residual_variance = [&](int k) {
        double v = trace;
        for (int i = 0; i < k; ++i) {
            v -= es.eigenvalues[i];
        }
        return std::max(v, 0.0) / static_cast<double>(p);
    };

    const double v0 = residual_variance(0);
    if (v0 > 0.0 && residual_variance(1) / v0 > 0.99) {
        result.warnings.push_back(std::string(kWarnLowSignal) +
                                  ": leading component explains under 1% of variance");
    }

    const double penalty_unit =
        (static_cast<double>(t) + static_cast<double>(p)) /
        (static_cast<double>(t) * static_cast<double>(p)) *
        std::log(static_cast<double>(std::min(t, p)));
    const int k_hi = static_cast<int>(std::min<Eigen::Index>(k_max, positive));
    if (k_hi < k_max) {
        result.warnings.push_back("candidate cap shrunk from " + std::to_string(k_max) + " to " +
                                  std::to_string(k_hi) + " (rank " + std::to_string(positive) + ")");
    }
    double best = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= k_hi; ++k) {
        const double v = std::max(residual_variance(k), 1e-300);
        const double ic = std::log(v) + static_cast<double>(k) * penalty_unit;
        result.scores_by_k.push_back(ic);
        if (ic < best) {  // strict: ties resolve to the smallest k
            best = ic;
            result.chosen = k;
        }
    }
    return result;
}

}  // namespace fdrec
