#include "fdrec/smoother.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "fdrec/errors.hpp"

namespace fdrec {

namespace {

double kernel_weight(SmootherKernel kernel, double z) {
    if (kernel == SmootherKernel::Epanechnikov) {
        const double z2 = z * z;
        return z2 < 1.0 ? 0.75 * (1.0 - z2) : 0.0;
    }
    return std::exp(-0.5 * z * z);
}

struct LocalFit {
    double value = 0.0;
    double self_weight = 0.0;  // diagonal entry of the smoothing matrix
    bool ok = false;
};

// Weighted least squares line through the points near s0, evaluated at s0.
// Solving the 2x2 normal equations in the shifted coordinate d = s - s0 makes
// the intercept the fitted value.
LocalFit local_linear_at(const Eigen::VectorXd& y, const SamplingGrid& grid, int j0,
                         double bandwidth, SmootherKernel kernel) {
    const int p = grid.size();
    const double s0 = grid[j0];
    double s0w = 0.0, s1 = 0.0, s2 = 0.0, t0 = 0.0, t1 = 0.0;
    double w_at_j0 = 0.0;
    int effective = 0;
    for (int i = 0; i < p; ++i) {
        const double d = grid[i] - s0;
        const double w = kernel_weight(kernel, d / bandwidth);
        if (w > 1e-12) {
            ++effective;
        }
        s0w += w;
        s1 += w * d;
        s2 += w * d * d;
        t0 += w * y[i];
        t1 += w * d * y[i];
        if (i == j0) {
            w_at_j0 = w;
        }
    }
    LocalFit fit;
    if (effective < 2) {
        return fit;
    }
    const double denom = s0w * s2 - s1 * s1;
    if (!(denom > 1e-300)) {
        return fit;
    }
    fit.value = (s2 * t0 - s1 * t1) / denom;
    // Weight of y_j0 on the intercept; d = 0 there, so only s2 contributes.
    fit.self_weight = w_at_j0 * s2 / denom;
    fit.ok = true;
    return fit;
}

Eigen::VectorXd smooth_with_bandwidth(const Eigen::VectorXd& y, const SamplingGrid& grid,
                                      double bandwidth, SmootherKernel kernel) {
    const int p = grid.size();
    Eigen::VectorXd out(p);
    for (int j = 0; j < p; ++j) {
        const LocalFit fit = local_linear_at(y, grid, j, bandwidth, kernel);
        if (!fit.ok) {
            throw BandwidthTooSmall("local fit at grid point " + std::to_string(j) +
                                    " has fewer than two effective points (bandwidth " +
                                    std::to_string(bandwidth) + ")");
        }
        out[j] = fit.value;
    }
    return out;
}

std::vector<double> bandwidth_grid(double mesh) {
    // 20 log-spaced candidates from the mesh to 0.5.
    constexpr int kCount = 20;
    const double lo = std::log(mesh);
    const double hi = std::log(0.5);
    std::vector<double> out;
    out.reserve(kCount);
    for (int i = 0; i < kCount; ++i) {
        const double f = static_cast<double>(i) / (kCount - 1);
        out.push_back(std::exp(lo + f * (hi - lo)));
    }
    return out;
}

void check_input(const Eigen::VectorXd& y, const SamplingGrid& grid) {
    if (grid.size() < 3) {
        throw InvalidInput("smoother: need at least three grid points");
    }
    if (y.size() != grid.size()) {
        throw InvalidInput("smoother: curve has " + std::to_string(y.size()) +
                           " values but the grid has " + std::to_string(grid.size()));
    }
    if (!y.allFinite()) {
        throw InvalidInput("smoother: curve contains non-finite values");
    }
}

}  // namespace

double loocv_bandwidth(const Eigen::VectorXd& y, const SamplingGrid& grid,
                       SmootherKernel kernel) {
    check_input(y, grid);
    const int p = grid.size();
    double best_h = 0.0;
    double best_score = 0.0;
    bool have_best = false;
    for (double h : bandwidth_grid(grid.mesh())) {
        // Leave-one-out residual through the smoother matrix identity:
        // y_j - yhat_(-j)(s_j) = (y_j - yhat_j) / (1 - w_jj).
        double score = 0.0;
        bool feasible = true;
        for (int j = 0; j < p; ++j) {
            const LocalFit fit = local_linear_at(y, grid, j, h, kernel);
            if (!fit.ok || std::abs(1.0 - fit.self_weight) < 1e-10) {
                feasible = false;
                break;
            }
            const double resid = (y[j] - fit.value) / (1.0 - fit.self_weight);
            score += resid * resid;
        }
        if (!feasible) {
            continue;
        }
        if (!have_best || score < best_score) {  // ties keep the smaller bandwidth
            best_score = score;
            best_h = h;
            have_best = true;
        }
    }
    if (!have_best) {
        throw BandwidthTooSmall("no feasible bandwidth on the cross-validation grid");
    }
    return best_h;
}

Eigen::VectorXd smooth_curve(const Eigen::VectorXd& y, const SamplingGrid& grid,
                             const SmootherConfig& cfg) {
    check_input(y, grid);
    double h;
    if (cfg.bandwidth) {
        h = *cfg.bandwidth;
        if (!std::isfinite(h) || h <= 0.0) {
            throw InvalidInput("smoother: bandwidth must be positive");
        }
        if (h < grid.mesh()) {
            throw BandwidthTooSmall("bandwidth " + std::to_string(h) +
                                    " is below the grid mesh " + std::to_string(grid.mesh()));
        }
    } else {
        h = loocv_bandwidth(y, grid, cfg.kernel);
    }
    return smooth_with_bandwidth(y, grid, h, cfg.kernel);
}

Panel smooth_panel(const Panel& panel, const SmootherConfig& cfg) {
    if (panel.num_curves() < 1) {
        throw InvalidInput("smooth_panel: empty panel");
    }
    Eigen::MatrixXd out(panel.num_curves(), panel.num_points());
    for (Eigen::Index t = 0; t < panel.num_curves(); ++t) {
        const Eigen::VectorXd row = panel.values().row(t).transpose();
        out.row(t) = smooth_curve(row, panel.grid(), cfg).transpose();
    }
    return Panel(std::move(out), panel.grid(), PanelRole::Recovered);
}

}  // namespace fdrec
