#include "fdrec/panel.hpp"

#include <string>

#include "fdrec/errors.hpp"

namespace fdrec {

std::string to_string(PanelRole role) {
    switch (role) {
        case PanelRole::Observed: return "observed";
        case PanelRole::Signal: return "signal";
        case PanelRole::Noise: return "noise";
        case PanelRole::Recovered: return "recovered";
    }
    return "unknown";
}

Panel::Panel(Eigen::MatrixXd values, SamplingGrid grid, PanelRole role)
    : values_(std::move(values)), grid_(std::move(grid)), role_(role) {
    if (values_.cols() != grid_.size()) {
        throw InvalidInput("panel has " + std::to_string(values_.cols()) +
                           " columns but the grid has " + std::to_string(grid_.size()) +
                           " points");
    }
    if (!values_.allFinite()) {
        throw InvalidInput("panel contains non-finite values");
    }
}

namespace {

void check_same_shape(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw InvalidInput("panel shapes differ: " + std::to_string(a.rows()) + "x" +
                           std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                           std::to_string(b.cols()));
    }
}

}  // namespace

double sup_abs_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    check_same_shape(a, b);
    if (a.size() == 0) {
        return 0.0;
    }
    return (a - b).cwiseAbs().maxCoeff();
}

double sup_abs_diff(const Panel& a, const Panel& b) {
    return sup_abs_diff(a.values(), b.values());
}

double mean_squared_error(const Panel& a, const Panel& b) {
    check_same_shape(a.values(), b.values());
    if (a.values().size() == 0) {
        return 0.0;
    }
    return (a.values() - b.values()).squaredNorm() / static_cast<double>(a.values().size());
}

}  // namespace fdrec
