#include "fdrec/grid.hpp"

#include <cmath>
#include <string>

#include "fdrec/errors.hpp"

namespace fdrec {

SamplingGrid::SamplingGrid(std::vector<double> points) : points_(std::move(points)) {
    if (points_.size() < 2) {
        throw InvalidInput("sampling grid needs at least two points, got " +
                           std::to_string(points_.size()));
    }
    for (size_t i = 0; i < points_.size(); ++i) {
        const double s = points_[i];
        if (!std::isfinite(s) || s < 0.0 || s > 1.0) {
            throw InvalidInput("grid point " + std::to_string(i) + " outside [0,1]: " +
                               std::to_string(s));
        }
        if (i > 0) {
            if (s <= points_[i - 1]) {
                throw InvalidInput("grid not strictly increasing at index " + std::to_string(i));
            }
            mesh_ = std::max(mesh_, s - points_[i - 1]);
        }
    }
}

SamplingGrid SamplingGrid::equidistant(int p) {
    if (p < 2) {
        throw InvalidInput("equidistant grid needs at least two points, got " + std::to_string(p));
    }
    std::vector<double> pts(static_cast<size_t>(p));
    for (int i = 0; i < p; ++i) {
        pts[static_cast<size_t>(i)] = static_cast<double>(i) / static_cast<double>(p);
    }
    return SamplingGrid(std::move(pts));
}

bool SamplingGrid::is_equidistant(double tol) const {
    const double target = 1.0 / static_cast<double>(size());
    for (size_t i = 1; i < points_.size(); ++i) {
        if (std::abs((points_[i] - points_[i - 1]) - target) > tol) {
            return false;
        }
    }
    return true;
}

}  // namespace fdrec
