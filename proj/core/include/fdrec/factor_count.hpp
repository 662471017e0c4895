#pragma once

#include <string>
#include <vector>

#include "fdrec/eigen_system.hpp"
#include "fdrec/panel.hpp"

namespace fdrec {

enum class FactorCountMethod { EigenvalueRatio, InformationCriterion };

std::string to_string(FactorCountMethod method);

struct FactorCountResult {
    int chosen = 0;
    FactorCountMethod method = FactorCountMethod::EigenvalueRatio;
    // Criterion value for each candidate k = 1..k_hi (k_hi <= k_max after any
    // rank shrink): the ratio gamma_k / gamma_k+1, or the information
    // criterion value.
    std::vector<double> scores_by_k;
    std::vector<std::string> warnings;
};

// Largest ratio of consecutive eigenvalues, scanned from k = 1 upward with a
// strict comparison so ties resolve to the smallest k. Candidates with a zero
// denominator are excluded by shrinking k_max to (positive count - 1); fewer
// than two positive eigenvalues is InsufficientRank.
FactorCountResult eigenvalue_ratio(const EigenSystem& es, int k_max);

// Information criterion log(V(k)) + k * (T+p)/(Tp) * log(min(T,p)) with
// V(k) = sum of the trailing eigenvalues / p of the centered panel; the
// minimizer over k = 1..k_max wins, ties to the smallest k. Emits a LowSignal
// warning when the first component explains less than 1% of total variance.
FactorCountResult info_criterion(const Panel& panel, int k_max);

// Default candidate cap: floor(min(T,p) / 4) clamped to [1, 50].
int default_k_max(Eigen::Index num_curves, Eigen::Index num_points);

}  // namespace fdrec
