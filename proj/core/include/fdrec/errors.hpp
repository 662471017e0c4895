#pragma once

#include <stdexcept>
#include <string>

namespace fdrec {

// Caller handed us something the contract forbids (bad dimensions, non-finite
// values, out-of-range parameters, malformed input files).
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// An operation needs more nonzero spectrum than the data provides.
class InsufficientRank : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A computation would divide by an eigenvalue that is zero after clamping.
class SingularEigenvalue : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Kernel smoother has fewer than two effective points inside the bandwidth,
// or the requested bandwidth is below the grid mesh.
class BandwidthTooSmall : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Non-fatal conditions are reported as warning strings on result types.
// These two tags are the stable prefixes used across the library.
inline constexpr const char* kWarnDegenerateSpectrum = "DegenerateSpectrum";
inline constexpr const char* kWarnLowSignal = "LowSignal";

}  // namespace fdrec
