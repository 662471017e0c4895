#pragma once

#include <vector>

namespace fdrec {

// Strictly increasing sampling points in [0, 1]. Immutable after construction.
class SamplingGrid {
public:
    // Throws InvalidInput unless points are finite, strictly increasing,
    // inside [0, 1], and there are at least two of them.
    explicit SamplingGrid(std::vector<double> points);

    // p equidistant points i/p, i = 0..p-1. Left-closed so that trigonometric
    // bases are exactly orthonormal under the 1/p quadrature weight.
    static SamplingGrid equidistant(int p);

    int size() const { return static_cast<int>(points_.size()); }
    double operator[](int i) const { return points_[static_cast<size_t>(i)]; }
    const std::vector<double>& points() const { return points_; }

    // Largest gap between consecutive points.
    double mesh() const { return mesh_; }

    // True when every gap equals 1/size() up to tol (absolute).
    bool is_equidistant(double tol = 1e-12) const;

    bool operator==(const SamplingGrid& other) const { return points_ == other.points_; }

private:
    std::vector<double> points_;
    double mesh_ = 0.0;
};

}  // namespace fdrec
