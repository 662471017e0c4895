#include "fdrec/simulation.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "fdrec/errors.hpp"

namespace fdrec {

void NoiseSpec::validate() const {
    if (!std::isfinite(sigma) || sigma < 0.0) {
        throw InvalidInput("noise sigma must be finite and >= 0, got " + std::to_string(sigma));
    }
    if (kind == NoiseKind::AR1) {
        if (!std::isfinite(phi) || std::abs(phi) >= 1.0) {
            throw InvalidInput("AR(1) noise needs |phi| < 1, got " + std::to_string(phi));
        }
    }
}

double NoiseSpec::autocovariance(int h) const {
    validate();
    const int lag = std::abs(h);
    if (kind == NoiseKind::IID) {
        return lag == 0 ? sigma * sigma : 0.0;
    }
    const double marginal = sigma * sigma / (1.0 - phi * phi);
    return marginal * std::pow(phi, lag);
}

Eigen::MatrixXd noise_covariance(const NoiseSpec& spec, int p) {
    if (p < 1) {
        throw InvalidInput("noise_covariance: p must be positive");
    }
    Eigen::MatrixXd cov(p, p);
    for (int i = 0; i < p; ++i) {
        for (int j = 0; j <= i; ++j) {
            const double g = spec.autocovariance(i - j);
            cov(i, j) = g;
            cov(j, i) = g;
        }
    }
    return cov;
}

Eigen::VectorXd EigenDecay::eigenvalues(int num_factors) const {
    if (num_factors < 1) {
        throw InvalidInput("eigen decay: factor count must be positive");
    }
    Eigen::VectorXd lambda(num_factors);
    if (is_explicit()) {
        if (static_cast<int>(values.size()) < num_factors) {
            throw InvalidInput("eigen decay: explicit list has " + std::to_string(values.size()) +
                               " entries, need " + std::to_string(num_factors));
        }
        for (int l = 0; l < num_factors; ++l) {
            lambda[l] = values[static_cast<size_t>(l)];
        }
    } else {
        if (!std::isfinite(rho) || rho <= 0.0 || !std::isfinite(nu) || nu <= 0.0) {
            throw InvalidInput("eigen decay: power law needs rho > 0 and nu > 0");
        }
        for (int l = 0; l < num_factors; ++l) {
            lambda[l] = rho * std::pow(static_cast<double>(l + 1), -nu);
        }
    }
    for (int l = 0; l < num_factors; ++l) {
        if (!std::isfinite(lambda[l]) || lambda[l] <= 0.0) {
            throw InvalidInput("eigen decay: variance " + std::to_string(l + 1) +
                               " is not positive");
        }
        if (l > 0 && lambda[l] > lambda[l - 1]) {
            throw InvalidInput("eigen decay: variances must be non-increasing");
        }
    }
    return lambda;
}

void SimConfig::validate() const {
    if (num_curves < 2) {
        throw InvalidInput("sim config: num_curves must be >= 2");
    }
    if (num_points < 2) {
        throw InvalidInput("sim config: num_points must be >= 2");
    }
    if (num_factors < 1 || num_factors > num_points) {
        throw InvalidInput("sim config: num_factors must lie in [1, num_points]");
    }
    if (score_ar.size() != 1 && score_ar.size() != static_cast<size_t>(num_factors)) {
        throw InvalidInput("sim config: score_ar needs 1 or num_factors entries, got " +
                           std::to_string(score_ar.size()));
    }
    for (double a : score_ar) {
        if (!std::isfinite(a) || std::abs(a) >= 1.0) {
            throw InvalidInput("sim config: score AR coefficients need |a| < 1");
        }
    }
    decay.eigenvalues(num_factors);  // validates positivity and monotonicity
    noise.validate();
}

double SimConfig::ar_coefficient(int factor) const {
    if (score_ar.size() == 1) {
        return score_ar[0];
    }
    return score_ar[static_cast<size_t>(factor)];
}

Eigen::MatrixXd eigenbasis(EigenBasis basis, int num_factors, const SamplingGrid& grid) {
    const int p = grid.size();
    if (num_factors < 1) {
        throw InvalidInput("eigenbasis: factor count must be positive");
    }
    if (num_factors > p) {
        throw InvalidInput("eigenbasis: " + std::to_string(num_factors) +
                           " functions on a " + std::to_string(p) + "-point grid");
    }
    Eigen::MatrixXd phi(p, num_factors);
    const double root2 = std::numbers::sqrt2;
    for (int j = 0; j < num_factors; ++j) {
        const int l = j + 1;
        for (int i = 0; i < p; ++i) {
            const double s = grid[i];
            double v = 0.0;
            if (basis == EigenBasis::Fourier) {
                if (l == 1) {
                    v = 1.0;
                } else if (l % 2 == 0) {
                    const double k = static_cast<double>(l / 2);
                    v = root2 * std::sin(2.0 * std::numbers::pi * k * s);
                } else {
                    const double k = static_cast<double>((l - 1) / 2);
                    v = root2 * std::cos(2.0 * std::numbers::pi * k * s);
                }
            } else {
                v = root2 * std::sin((static_cast<double>(l) - 0.5) * std::numbers::pi * s);
            }
            phi(i, j) = v;
        }
    }
    return phi;
}

Eigen::VectorXd brownian_motion_eigenvalues(int num_factors) {
    if (num_factors < 1) {
        throw InvalidInput("brownian_motion_eigenvalues: factor count must be positive");
    }
    Eigen::VectorXd lambda(num_factors);
    for (int l = 1; l <= num_factors; ++l) {
        const double freq = (static_cast<double>(l) - 0.5) * std::numbers::pi;
        lambda[l - 1] = 1.0 / (freq * freq);
    }
    return lambda;
}

Eigen::MatrixXd simulate_scores(const SimConfig& cfg, Rng& rng) {
    cfg.validate();
    const int t = cfg.num_curves;
    const int l_count = cfg.num_factors;
    const Eigen::VectorXd lambda = cfg.decay.eigenvalues(l_count);

    Eigen::MatrixXd scores(t, l_count);
    for (int l = 0; l < l_count; ++l) {
        const double a = cfg.ar_coefficient(l);
        const double marginal_sd = std::sqrt(lambda[l]);
        const double innovation_sd = marginal_sd * std::sqrt(1.0 - a * a);
        scores(0, l) = marginal_sd * rng.normal();
        for (int i = 1; i < t; ++i) {
            scores(i, l) = a * scores(i - 1, l) + innovation_sd * rng.normal();
        }
    }
    return scores;
}

Panel simulate_noise(int num_curves, const SamplingGrid& grid, const NoiseSpec& spec, Rng& rng) {
    if (num_curves < 1) {
        throw InvalidInput("simulate_noise: need at least one curve");
    }
    spec.validate();
    const int p = grid.size();
    Eigen::MatrixXd u(num_curves, p);
    if (spec.kind == NoiseKind::IID) {
        for (int t = 0; t < num_curves; ++t) {
            for (int i = 0; i < p; ++i) {
                u(t, i) = spec.sigma * rng.normal();
            }
        }
    } else {
        const double marginal_sd = spec.sigma / std::sqrt(1.0 - spec.phi * spec.phi);
        for (int t = 0; t < num_curves; ++t) {
            u(t, 0) = marginal_sd * rng.normal();
            for (int i = 1; i < p; ++i) {
                u(t, i) = spec.phi * u(t, i - 1) + spec.sigma * rng.normal();
            }
        }
    }
    return Panel(std::move(u), grid, PanelRole::Noise);
}

Panel simulate_noise(int num_curves, int num_points, const NoiseSpec& spec, Rng& rng) {
    return simulate_noise(num_curves, SamplingGrid::equidistant(num_points), spec, rng);
}

GroundTruth simulate(const SimConfig& cfg) {
    cfg.validate();
    const SamplingGrid grid = SamplingGrid::equidistant(cfg.num_points);
    const Eigen::VectorXd lambda = cfg.decay.eigenvalues(cfg.num_factors);
    const Eigen::MatrixXd phi = eigenbasis(cfg.basis, cfg.num_factors, grid);

    Rng score_rng(cfg.seed, 0);
    Rng noise_rng(cfg.seed, 1);
    Eigen::MatrixXd scores = simulate_scores(cfg, score_rng);
    Panel noise = simulate_noise(cfg.num_curves, grid, cfg.noise, noise_rng);

    const Eigen::VectorXd root = lambda.cwiseSqrt();
    Eigen::MatrixXd signal_values = scores * phi.transpose();
    Eigen::MatrixXd observed_values = signal_values + noise.values();

    GroundTruth truth{
        Panel(std::move(signal_values), grid, PanelRole::Signal),
        std::move(noise),
        Panel(std::move(observed_values), grid, PanelRole::Observed),
        scores,
        scores * root.cwiseInverse().asDiagonal(),
        phi * root.asDiagonal(),
        lambda,
        phi,
        grid,
    };
    return truth;
}

double isserlis_moment(const Eigen::MatrixXd& cov, std::span<const int> indices) {
    if (cov.rows() != cov.cols()) {
        throw InvalidInput("isserlis_moment: covariance must be square");
    }
    const double scale = cov.size() > 0 ? cov.cwiseAbs().maxCoeff() : 0.0;
    if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > 1e-8 * std::max(scale, 1e-300)) {
        throw InvalidInput("isserlis_moment: covariance is not symmetric");
    }
    if (indices.size() % 2 != 0) {
        throw InvalidInput("isserlis_moment: odd number of indices");
    }
    if (indices.size() > 8) {
        throw InvalidInput("isserlis_moment: more than 8 indices");
    }
    for (int i : indices) {
        if (i < 0 || i >= cov.rows()) {
            throw InvalidInput("isserlis_moment: index " + std::to_string(i) + " out of range");
        }
    }

    // Sum over pair partitions: fix the first element, pair it with each of
    // the others, recurse on the rest. 2k = 8 gives 7 * 5 * 3 * 1 = 105 terms.
    struct Rec {
        const Eigen::MatrixXd& cov;
        double run(std::vector<int>& idx) const {
            if (idx.empty()) {
                return 1.0;
            }
            const int first = idx[0];
            double total = 0.0;
            for (size_t j = 1; j < idx.size(); ++j) {
                const int partner = idx[j];
                std::vector<int> rest;
                rest.reserve(idx.size() - 2);
                for (size_t m = 1; m < idx.size(); ++m) {
                    if (m != j) {
                        rest.push_back(idx[m]);
                    }
                }
                total += cov(first, partner) * run(rest);
            }
            return total;
        }
    };
    std::vector<int> idx(indices.begin(), indices.end());
    return Rec{cov}.run(idx);
}

double noise_gram_moment(const NoiseSpec& spec, int p, int k) {
    if (p < 1) {
        throw InvalidInput("noise_gram_moment: p must be positive");
    }
    if (k != 1 && k != 2) {
        throw InvalidInput("noise_gram_moment: only k = 1 and k = 2 are supported");
    }
    spec.validate();
    if (k == 1) {
        // E[(u^T v)^2] = sum_{i,j} gamma(i - j)^2 for independent rows u, v.
        double total = 0.0;
        for (int i = 0; i < p; ++i) {
            for (int j = 0; j < p; ++j) {
                const double g = spec.autocovariance(i - j);
                total += g * g;
            }
        }
        return total;
    }
    if (p > 64) {
        throw InvalidInput("noise_gram_moment: k = 2 is quartic in p, use p <= 64");
    }
    const Eigen::MatrixXd cov = noise_covariance(spec, p);
    double total = 0.0;
    std::array<int, 4> idx{};
    for (idx[0] = 0; idx[0] < p; ++idx[0]) {
        for (idx[1] = 0; idx[1] < p; ++idx[1]) {
            for (idx[2] = 0; idx[2] < p; ++idx[2]) {
                for (idx[3] = 0; idx[3] < p; ++idx[3]) {
                    const double m = isserlis_moment(cov, idx);
                    total += m * m;
                }
            }
        }
    }
    return total;
}

}  // namespace fdrec
