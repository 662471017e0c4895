#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "fdrec/simulation.hpp"
#include "fdrec/smoother.hpp"

namespace fdrec {

// Runs fn(0..count-1), distributing indices over at most `threads` workers.
// Each index must write only to its own output slot; results are then
// independent of the schedule and identical to a serial run.
void parallel_for(int count, int threads, const std::function<void(int)>& fn);

// Per-replication scalar tracked by a rate study.
enum class RateStatistic {
    SupError,    // max |recovered - signal|
    EigenError,  // max_i<=L |gamma_hat_i / p - lambda_i| on the raw panel
    Alignment,   // orthogonality gap of the rotation to the true factors
    AcfDrift,    // max autocovariance drift, see AcfCheckConfig
    ScoreMax     // max_t |f_t| of the true normalized scores
};

std::string to_string(RateStatistic s);

// How the number of recovered (and generated) factors scales with T.
enum class LSchedule {
    Fixed,  // always base.num_factors
    LogT    // ceil(log T), clamped to [1, min(T,p)]; decay must be a power law
};

struct RateStudyConfig {
    std::vector<std::pair<int, int>> sizes;  // (T, p) per size point
    int replications = 1;
    SimConfig base;  // T, p and seed are overridden per size and replication
    RateStatistic statistic = RateStatistic::SupError;
    LSchedule l_schedule = LSchedule::Fixed;
    int acf_sub_points = 20;  // only used by AcfDrift
    int acf_max_lag = 2;
};

struct SizeSummary {
    int num_curves = 0;
    int num_points = 0;
    int num_factors = 0;  // L used at this size
    double median = 0.0;
    double quartile1 = 0.0;
    double quartile3 = 0.0;
};

struct RateStudyResult {
    RateStatistic statistic = RateStatistic::SupError;
    std::uint64_t base_seed = 0;
    int replications = 0;
    std::vector<SizeSummary> summaries;
    std::vector<std::vector<double>> values;  // [size][replication]
    // Least-squares slope of log(median) against log(T).
    double log_slope = 0.0;
};

// Replication r at size index s uses seed derive_seed(derive_seed(base.seed, s), r),
// so results are a pure function of the config and invariant to threading.
RateStudyResult run_rate_study(const RateStudyConfig& cfg, int threads = 1);

struct AcfCheckConfig {
    std::vector<std::pair<int, int>> sizes;
    int replications = 1;
    SimConfig base;
    int sub_points = 20;  // grid points sampled for the autocovariance surface
    int max_lag = 2;      // lags 0..max_lag
};

struct AcfLagSummary {
    int lag = 0;
    double median = 0.0;
    double quartile1 = 0.0;
    double quartile3 = 0.0;
};

struct AcfSizeResult {
    int num_curves = 0;
    int num_points = 0;
    std::vector<AcfLagSummary> lags;
    double overall_median = 0.0;  // of the max drift across lags
};

struct AcfCheckResult {
    std::uint64_t base_seed = 0;
    int replications = 0;
    std::vector<AcfSizeResult> sizes;
};

// Max absolute difference between empirical lag-h autocovariances of the
// recovered and the true signal panel, over a sub-sampled set of grid point
// pairs. Both panels are column-centered first.
double acf_drift(const Eigen::MatrixXd& recovered, const Eigen::MatrixXd& signal,
                 int sub_points, int lag);

AcfCheckResult run_acf_check(const AcfCheckConfig& cfg, int threads = 1);

struct CompareConfig {
    SimConfig base;
    int replications = 1;
    int k_max = 0;  // 0 means default_k_max(T, p)
    SmootherConfig smoother;
};

struct CompareReplication {
    std::uint64_t seed = 0;
    int l_hat = 0;
    double mse_factor = 0.0;
    double mse_smoother = 0.0;
};

struct CompareResult {
    std::uint64_t base_seed = 0;
    std::vector<CompareReplication> replications;
    double factor_win_fraction = 0.0;  // share with mse_factor < mse_smoother
    double median_mse_factor = 0.0;
    double median_mse_smoother = 0.0;
};

// Factor recovery with L chosen by eigenvalue ratio versus per-curve local
// linear smoothing, on the same simulated panels.
CompareResult run_compare_study(const CompareConfig& cfg, int threads = 1);

// Type-7 quantile (linear interpolation between order statistics).
double quantile(std::vector<double> values, double prob);

// Slope of the least-squares line through (x, y); sizes must match, >= 2 points.
double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace fdrec
