#pragma once

#include <Eigen/Core>

#include "fdrec/panel.hpp"

namespace fdrec {

// Eigenvalues are clamped to zero below kEigenClampRel * (largest eigenvalue);
// tiny negative values produced by floating point are treated the same way.
inline constexpr double kEigenClampRel = 1e-12;

// Spectral gaps below kDegenerateGapRel * (largest eigenvalue) are reported
// as a DegenerateSpectrum warning by operations that cut the spectrum.
inline constexpr double kDegenerateGapRel = 1e-10;

struct SymEigen {
    Eigen::VectorXd values;   // descending
    Eigen::MatrixXd vectors;  // orthonormal columns, one per value
};

// Full decomposition of a dense symmetric matrix. Validates squareness,
// finiteness and symmetry (1e-8 relative asymmetry tolerance), then works on
// the symmetrized (M + M^T)/2. Column signs are fixed deterministically: the
// first coefficient of non-negligible magnitude is made positive.
SymEigen sym_eigen(const Eigen::MatrixXd& m);

// Spectrum of the scaled Gram matrix G = Y Y^T / T of a panel, expressed in
// the T-dimensional sample space.
struct EigenSystem {
    Eigen::VectorXd eigenvalues;   // length min(T,p), descending, clamped at kEigenClampRel
    Eigen::MatrixXd eigenvectors;  // T x min(T,p), orthonormal columns
    Eigen::VectorXd scaled;        // eigenvalues / p, estimates of curve-level variances
    Eigen::Index panel_width = 0;  // p of the source panel

    Eigen::Index size() const { return eigenvalues.size(); }
    // Rank of the Gram matrix after clamping.
    Eigen::Index positive_count() const;
    // Orthogonal projector onto the span of the leading k eigenvectors.
    Eigen::MatrixXd projector(Eigen::Index k) const;
};

// Decomposes whichever Gram matrix is smaller (T x T or p x p) and maps the
// result into sample space, so the cost is O(min(T,p)^3) plus the crossover
// products. When T > p and the rank is below T, the basis is completed with
// deterministic Gram-Schmidt vectors for the zero eigenvalues.
EigenSystem gram_eigen(const Panel& panel);

}  // namespace fdrec
