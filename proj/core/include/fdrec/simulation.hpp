#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <span>
#include <vector>

#include "fdrec/panel.hpp"
#include "fdrec/rng.hpp"

namespace fdrec {

enum class EigenBasis { Fourier, BrownianMotion };

enum class NoiseKind { IID, AR1 };

// Stationary measurement noise along the grid index. sigma is the innovation
// standard deviation; for AR1 the marginal variance is sigma^2 / (1 - phi^2).
// sigma = 0 is allowed and produces exact zeros (noise-free panels).
struct NoiseSpec {
    NoiseKind kind = NoiseKind::IID;
    double sigma = 1.0;
    double phi = 0.0;  // only used by AR1, must satisfy |phi| < 1

    void validate() const;
    // Autocovariance at integer lag h (monotone geometric decay for AR1).
    double autocovariance(int h) const;
};

// Population autocovariance matrix of one noise row, p x p.
Eigen::MatrixXd noise_covariance(const NoiseSpec& spec, int p);

// Score-variance sequence: either an explicit positive non-increasing list or
// the power law lambda_l = rho * l^(-nu).
struct EigenDecay {
    double rho = 1.0;
    double nu = 2.0;
    std::vector<double> values;  // non-empty means explicit

    bool is_explicit() const { return !values.empty(); }
    // First L variances; throws InvalidInput if the list is too short or the
    // sequence is not positive and non-increasing.
    Eigen::VectorXd eigenvalues(int num_factors) const;
};

struct SimConfig {
    int num_curves = 0;       // T
    int num_points = 0;       // p
    int num_factors = 0;      // L of the generated signal
    EigenBasis basis = EigenBasis::Fourier;
    EigenDecay decay;
    // AR coefficients of the score processes: one entry per factor, or a
    // single entry broadcast to all factors. Each must satisfy |a| < 1.
    std::vector<double> score_ar{0.0};
    NoiseSpec noise;
    std::uint64_t seed = 0;

    void validate() const;
    // Per-factor AR coefficient after broadcasting.
    double ar_coefficient(int factor) const;
};

// Orthonormal basis evaluated on the grid, p x L, column l-1 = phi_l.
// Fourier: phi_1 = 1, phi_2k = sqrt(2) sin(2 pi k s), phi_2k+1 = sqrt(2) cos(2 pi k s);
// exactly orthonormal under the 1/p weight on the equidistant grid i/p.
// BrownianMotion: phi_l = sqrt(2) sin((l - 1/2) pi s).
Eigen::MatrixXd eigenbasis(EigenBasis basis, int num_factors, const SamplingGrid& grid);

// Variances that make the BrownianMotion basis a Karhunen-Loeve expansion of
// standard Brownian motion: lambda_l = ((l - 1/2) pi)^(-2).
Eigen::VectorXd brownian_motion_eigenvalues(int num_factors);

// T x L score draws: column l is a stationary AR(1) with marginal variance
// lambda_l, innovation variance lambda_l (1 - a_l^2), initialized from the
// stationary law. Columns are generated left to right, each column forward
// in time, so the draw order is fixed.
Eigen::MatrixXd simulate_scores(const SimConfig& cfg, Rng& rng);

// T x p noise panel; rows are independent, each row is generated left to
// right (stationary initialization for AR1).
Panel simulate_noise(int num_curves, const SamplingGrid& grid, const NoiseSpec& spec, Rng& rng);
Panel simulate_noise(int num_curves, int num_points, const NoiseSpec& spec, Rng& rng);

// Everything the generator knows about one replication.
struct GroundTruth {
    Panel signal;
    Panel noise;
    Panel observed;                    // signal + noise, exact sum
    Eigen::MatrixXd scores;            // T x L, variance lambda_l per column
    Eigen::MatrixXd normalized_scores; // scores / sqrt(lambda), unit variance
    Eigen::MatrixXd loadings;          // p x L, sqrt(lambda_l) phi_l
    Eigen::VectorXd eigenvalues;       // lambda
    Eigen::MatrixXd eigenfunctions_on_grid;  // p x L, phi_l evaluated on the grid
    SamplingGrid grid;
};

// One full replication on the equidistant grid. Scores use stream 0 of
// cfg.seed, noise uses stream 1, so the two components can be regenerated
// independently.
GroundTruth simulate(const SimConfig& cfg);

// E[z_{i1} ... z_{i2k}] for a centered Gaussian vector with the given
// covariance, by pair-partition expansion. indices are 0-based positions into
// cov and may repeat; the count must be even and at most 8.
double isserlis_moment(const Eigen::MatrixXd& cov, std::span<const int> indices);

// Exact E[(u^T v)^{2k}] for two independent noise rows u, v of length p,
// evaluated through the pair-partition identity
// sum over index tuples of (E[eps_{i1} ... eps_{i2k}])^2. Supports k = 1
// (closed double sum) and k = 2 (quadruple sum, intended for small p).
double noise_gram_moment(const NoiseSpec& spec, int p, int k);

}  // namespace fdrec
