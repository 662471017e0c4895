#include "fdrec/presets.hpp"

namespace fdrec {
namespace presets {

SimConfig three_factor_ar(int num_curves, int num_points) {
    SimConfig cfg;
    cfg.num_curves = num_curves;
    cfg.num_points = num_points;
    cfg.num_factors = 3;
    cfg.basis = EigenBasis::Fourier;
    cfg.decay.values = {4.0, 2.0, 1.0};
    cfg.score_ar = {0.5, 0.5, 0.5};
    cfg.noise = {NoiseKind::AR1, 0.5, 0.3};
    cfg.seed = 20260801;
    return cfg;
}

SimConfig single_factor(int num_curves, int num_points) {
    SimConfig cfg;
    cfg.num_curves = num_curves;
    cfg.num_points = num_points;
    cfg.num_factors = 1;
    cfg.basis = EigenBasis::Fourier;
    cfg.decay.values = {2.0};
    cfg.score_ar = {0.0};
    cfg.noise = {NoiseKind::IID, 0.0, 0.0};
    cfg.seed = 20260802;
    return cfg;
}

SimConfig rough_brownian(int num_curves, int num_points) {
    SimConfig cfg;
    cfg.num_curves = num_curves;
    cfg.num_points = num_points;
    cfg.num_factors = 30;
    cfg.basis = EigenBasis::BrownianMotion;
    cfg.decay.rho = 1.0;
    cfg.decay.nu = 1.0;
    cfg.score_ar = {0.0};
    cfg.noise = {NoiseKind::IID, 0.5, 0.0};
    cfg.seed = 20260803;
    return cfg;
}

RateStudyConfig sup_error_rates() {
    RateStudyConfig study;
    study.sizes = {{100, 100}, {200, 200}, {400, 400}, {800, 800}};
    study.replications = 50;
    study.base = three_factor_ar();
    study.base.seed = 20260810;
    study.statistic = RateStatistic::SupError;
    return study;
}

RateStudyConfig eigenvalue_rates() {
    RateStudyConfig study = sup_error_rates();
    study.base.seed = 20260811;
    study.statistic = RateStatistic::EigenError;
    return study;
}

RateStudyConfig score_max_rates() {
    RateStudyConfig study;
    study.sizes = {{100, 100}, {400, 100}, {1600, 100}};
    study.replications = 50;
    study.base = three_factor_ar();
    study.base.seed = 20260812;
    study.statistic = RateStatistic::ScoreMax;
    return study;
}

RateStudyConfig alignment_rates() {
    RateStudyConfig study;
    study.sizes = {{100, 100}, {400, 400}};
    study.replications = 50;
    study.base = three_factor_ar();
    study.base.seed = 20260813;
    study.statistic = RateStatistic::Alignment;
    return study;
}

AcfCheckConfig acf_check() {
    AcfCheckConfig cfg;
    cfg.sizes = {{100, 100}, {400, 400}};
    cfg.replications = 50;
    cfg.base = three_factor_ar();
    cfg.base.seed = 20260814;
    cfg.sub_points = 20;
    cfg.max_lag = 2;
    return cfg;
}

CompareConfig rough_brownian_compare() {
    CompareConfig cfg;
    cfg.base = rough_brownian();
    cfg.base.seed = 20260815;
    cfg.replications = 50;
    cfg.k_max = 40;
    cfg.smoother = SmootherConfig{};
    return cfg;
}

}  // namespace presets
}  // namespace fdrec
