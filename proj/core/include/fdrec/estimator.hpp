#pragma once

#include <Eigen/Core>
#include <utility>
#include <vector>

#include "fdrec/eigen_system.hpp"
#include "fdrec/panel.hpp"

namespace fdrec {

// Pointwise mean curve (1/T) * sum of rows. Throws InvalidInput on an empty panel.
Eigen::VectorXd estimate_mean(const Panel& panel);

// Per-eigenvalue variance estimates gamma_hat / p. `panel_width` must equal
// the width recorded in the system; the argument exists so call sites state
// the scaling explicitly.
Eigen::VectorXd scaled_eigenvalues(const EigenSystem& es, Eigen::Index panel_width);

// Result of projecting a panel on its leading principal directions.
struct FactorFit {
    Eigen::VectorXd mean;         // p; zero when centering was disabled
    int num_factors = 0;          // effective L after any rank shrink
    Eigen::MatrixXd scores;       // T x L, sqrt(T) * leading eigenvectors
    Eigen::MatrixXd loadings;     // p x L, Yc^T scores / T
    Eigen::VectorXd eigenvalues;  // leading L eigenvalues of Y Y^T / T
    Panel recovered;              // T x p, scores * loadings^T + mean
    std::vector<std::string> warnings;
};

// Rank-L projection of the (optionally centered) panel onto its leading
// principal directions in sample space. Validates 1 <= num_factors <=
// min(T,p); shrinks num_factors to the clamped rank with a warning when the
// spectrum runs out, and warns DegenerateSpectrum when the retained and
// discarded eigenvalues are separated by a negligible gap.
// Returns the fit together with the eigensystem it was cut from.
std::pair<FactorFit, EigenSystem> recover(const Panel& panel, int num_factors,
                                          bool center = true);

// Reference decomposition the fit is compared against: normalized scores
// (unit-variance columns), loadings, and the score variances lambda.
struct FactorTruth {
    Eigen::MatrixXd scores;       // T x L
    Eigen::MatrixXd loadings;     // p x L
    Eigen::VectorXd eigenvalues;  // L
};

// Rotation linking the fitted factor pair to a reference pair, plus the
// worst-case discrepancies after rotation. The fitted pair is only identified
// up to an invertible transform; h_matrix is the canonical choice
// H = Lambda_hat^{-1} (Fhat^T F) (B^T B) / T, which is asymptotically
// orthogonal, so orthogonality_gap doubles as a sanity measure for the fit.
struct DiagnosticsReport {
    Eigen::MatrixXd h_matrix;        // L x L
    double score_error = 0.0;        // max_t |fhat_t - H f_t|
    double loading_error = 0.0;      // max_j |bhat_j - H b_j|
    double loading_scale = 0.0;      // max_j |b_j|
    double score_scale = 0.0;        // max_t |f_t|
    double h_norm = 0.0;             // spectral norm of H
    double orthogonality_gap = 0.0;  // spectral norm of H^T H - I
};

// Throws InvalidInput on dimension mismatch and SingularEigenvalue when any
// retained eigenvalue is zero after clamping.
DiagnosticsReport alignment_diagnostics(const FactorFit& fit, const FactorTruth& truth);

}  // namespace fdrec
