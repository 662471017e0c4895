#pragma once

#include <Eigen/Core>
#include <string>

#include "fdrec/grid.hpp"

namespace fdrec {

// What a panel holds. Purely descriptive; no operation changes meaning based
// on the role, but results carry the right tag through the pipeline.
enum class PanelRole { Observed, Signal, Noise, Recovered };

std::string to_string(PanelRole role);

// T curves sampled on a common grid, one curve per row (T x p).
// Values are validated finite at construction; the grid length must match
// the column count. Rows may be zero (an empty panel); operations that need
// at least one curve check for themselves.
class Panel {
public:
    Panel(Eigen::MatrixXd values, SamplingGrid grid, PanelRole role);

    Eigen::Index num_curves() const { return values_.rows(); }
    Eigen::Index num_points() const { return values_.cols(); }

    const Eigen::MatrixXd& values() const { return values_; }
    const SamplingGrid& grid() const { return grid_; }
    PanelRole role() const { return role_; }

    // Same data, different tag. Used when a pipeline step reinterprets a panel.
    Panel with_role(PanelRole role) const { return Panel(values_, grid_, role); }

private:
    Eigen::MatrixXd values_;
    SamplingGrid grid_;
    PanelRole role_;
};

// Largest absolute elementwise difference. Panels must share dimensions.
double sup_abs_diff(const Panel& a, const Panel& b);
double sup_abs_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

// Mean of squared elementwise differences over all T*p entries.
double mean_squared_error(const Panel& a, const Panel& b);

}  // namespace fdrec
