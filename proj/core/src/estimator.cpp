#include "fdrec/estimator.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "fdrec/errors.hpp"

namespace fdrec {

Eigen::VectorXd estimate_mean(const Panel& panel) {
    if (panel.num_curves() < 1) {
        throw InvalidInput("estimate_mean: empty panel");
    }
    return panel.values().colwise().mean();
}

Eigen::VectorXd scaled_eigenvalues(const EigenSystem& es, Eigen::Index panel_width) {
    if (panel_width != es.panel_width) {
        throw InvalidInput("scaled_eigenvalues: width " + std::to_string(panel_width) +
                           " does not match the system's panel width " +
                           std::to_string(es.panel_width));
    }
    return es.scaled;
}

std::pair<FactorFit, EigenSystem> recover(const Panel& panel, int num_factors, bool center) {
    const Eigen::Index t = panel.num_curves();
    const Eigen::Index p = panel.num_points();
    if (t < 1) {
        throw InvalidInput("recover: empty panel");
    }
    const Eigen::Index max_l = std::min(t, p);
    if (num_factors < 1 || num_factors > max_l) {
        throw InvalidInput("recover: num_factors " + std::to_string(num_factors) +
                           " outside [1, " + std::to_string(max_l) + "]");
    }

    std::vector<std::string> warnings;
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(p);
    if (center) {
        mean = estimate_mean(panel);
    }
    const Eigen::MatrixXd centered = panel.values().rowwise() - mean.transpose();

    EigenSystem es = gram_eigen(Panel(centered, panel.grid(), panel.role()));

    Eigen::Index l = num_factors;
    const Eigen::Index rank = es.positive_count();
    if (rank < 1) {
        throw InsufficientRank("recover: panel has rank zero after centering");
    }
    if (rank < l) {
        warnings.push_back("requested " + std::to_string(l) + " factors but rank is " +
                           std::to_string(rank) + "; shrunk");
        l = rank;
    }
    if (l < es.size()) {
        const double gap = es.eigenvalues[l - 1] - es.eigenvalues[l];
        if (gap <= kDegenerateGapRel * es.eigenvalues[0]) {
            warnings.push_back(std::string(kWarnDegenerateSpectrum) +
                               ": cut at a spectral gap of " + std::to_string(gap));
        }
    }

    // Projection in sample space: Xc_hat = E (E^T Yc). Grouping the product
    // this way costs O(T p L) instead of the T x T projector.
    const auto basis = es.eigenvectors.leftCols(l);
    Eigen::MatrixXd scores = std::sqrt(static_cast<double>(t)) * basis;
    Eigen::MatrixXd projected = basis * (basis.transpose() * centered);
    Eigen::MatrixXd loadings = centered.transpose() * scores / static_cast<double>(t);

    Eigen::MatrixXd values = projected.rowwise() + mean.transpose();
    FactorFit fit{
        std::move(mean),
        static_cast<int>(l),
        std::move(scores),
        std::move(loadings),
        es.eigenvalues.head(l),
        Panel(std::move(values), panel.grid(), PanelRole::Recovered),
        std::move(warnings),
    };
    return {std::move(fit), std::move(es)};
}

namespace {

double spectral_norm(const Eigen::MatrixXd& m) {
    // Matrices here are L x L with small L; SVD is cheap and exact enough.
    return m.jacobiSvd().singularValues()[0];
}

}  // namespace

DiagnosticsReport alignment_diagnostics(const FactorFit& fit, const FactorTruth& truth) {
    const Eigen::Index l = fit.num_factors;
    const Eigen::Index t = fit.scores.rows();
    const Eigen::Index p = fit.loadings.rows();
    if (truth.scores.cols() != l || truth.loadings.cols() != l || truth.eigenvalues.size() != l) {
        throw InvalidInput("alignment_diagnostics: truth has a different factor count");
    }
    if (truth.scores.rows() != t || truth.loadings.rows() != p) {
        throw InvalidInput("alignment_diagnostics: truth dimensions do not match the fit");
    }
    if (fit.eigenvalues.size() != l) {
        throw InvalidInput("alignment_diagnostics: fit eigenvalues are incomplete");
    }
    const double top = fit.eigenvalues.size() > 0 ? fit.eigenvalues[0] : 0.0;
    for (Eigen::Index i = 0; i < l; ++i) {
        if (fit.eigenvalues[i] <= kEigenClampRel * std::max(top, 0.0) || fit.eigenvalues[i] <= 0.0) {
            throw SingularEigenvalue("alignment_diagnostics: eigenvalue " + std::to_string(i) +
                                     " is zero after clamping");
        }
    }

    DiagnosticsReport report;
    // H = Lambda_hat^{-1} (Fhat^T F) (B^T B) / T.
    const Eigen::MatrixXd cross = fit.scores.transpose() * truth.scores;
    const Eigen::MatrixXd load_gram = truth.loadings.transpose() * truth.loadings;
    report.h_matrix = fit.eigenvalues.cwiseInverse().asDiagonal() * cross * load_gram /
                      static_cast<double>(t);

    const Eigen::MatrixXd score_resid = fit.scores - truth.scores * report.h_matrix.transpose();
    const Eigen::MatrixXd load_resid = fit.loadings - truth.loadings * report.h_matrix.transpose();
    report.score_error = score_resid.rowwise().norm().maxCoeff();
    report.loading_error = load_resid.rowwise().norm().maxCoeff();
    report.loading_scale = truth.loadings.rowwise().norm().maxCoeff();
    report.score_scale = truth.scores.rowwise().norm().maxCoeff();
    report.h_norm = spectral_norm(report.h_matrix);
    report.orthogonality_gap = spectral_norm(
        report.h_matrix.transpose() * report.h_matrix -
        Eigen::MatrixXd::Identity(l, l));
    return report;
}

}  // namespace fdrec
