#pragma once

#include "fdrec/experiments.hpp"
#include "fdrec/simulation.hpp"

namespace fdrec {
namespace presets {

// Smooth three-factor panel: lambda = (4, 2, 1), all score AR coefficients
// 0.5, AR(1) noise (phi = 0.3, sigma = 0.5) on the Fourier basis.
SimConfig three_factor_ar(int num_curves = 200, int num_points = 200);

// Single constant factor, noise-free; the scaled top eigenvalue estimates the
// factor variance directly.
SimConfig single_factor(int num_curves = 500, int num_points = 50);

// Rough 30-factor panel on the Brownian motion basis with slow 1/l variance
// decay and iid noise; built to favour projection over per-curve smoothing.
SimConfig rough_brownian(int num_curves = 400, int num_points = 100);

// Study configurations mirrored by the JSON files shipped under configs/.
RateStudyConfig sup_error_rates();
RateStudyConfig eigenvalue_rates();
RateStudyConfig score_max_rates();
RateStudyConfig alignment_rates();
AcfCheckConfig acf_check();
CompareConfig rough_brownian_compare();

}  // namespace presets
}  // namespace fdrec
