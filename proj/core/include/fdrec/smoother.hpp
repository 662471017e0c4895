#pragma once

#include <Eigen/Core>
#include <optional>

#include "fdrec/panel.hpp"

namespace fdrec {

enum class SmootherKernel { Epanechnikov, Gaussian };

struct SmootherConfig {
    // Absent means: choose per curve by leave-one-out cross validation on a
    // 20-point logarithmic grid from the grid mesh to 0.5.
    std::optional<double> bandwidth;
    SmootherKernel kernel = SmootherKernel::Epanechnikov;
};

// Local linear fit of one curve at every grid point. An explicit bandwidth
// below the grid mesh, or any fit with fewer than two effective points in the
// window, raises BandwidthTooSmall.
Eigen::VectorXd smooth_curve(const Eigen::VectorXd& y, const SamplingGrid& grid,
                             const SmootherConfig& cfg);

// Rows smoothed independently with the same configuration (auto bandwidth is
// re-selected per curve). Role of the result is Recovered.
Panel smooth_panel(const Panel& panel, const SmootherConfig& cfg);

// The bandwidth the auto mode would pick for this curve. Candidates where the
// leave-one-out fit is undefined are skipped; if none survive, throws
// BandwidthTooSmall.
double loocv_bandwidth(const Eigen::VectorXd& y, const SamplingGrid& grid,
                       SmootherKernel kernel);

}  // namespace fdrec
