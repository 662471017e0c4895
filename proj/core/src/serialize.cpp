#include "fdrec/serialize.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fdrec/errors.hpp"

namespace fdrec {

using nlohmann::json;

namespace {

// Every parse goes through here so the error type and message shape are
// uniform: InvalidInput carrying the JSON pointer of the offending key.
json parse(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw InvalidInput(std::string("json: ") + e.what());
    }
}

template <typename T>
T get(const json& j, const char* key) {
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw InvalidInput(std::string("json: key '") + key + "': " + e.what());
    }
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
    if (!j.contains(key)) {
        return fallback;
    }
    return get<T>(j, key);
}

const json& get_ref(const json& j, const char* key) {
    if (!j.contains(key)) {
        throw InvalidInput(std::string("json: missing key '") + key + "'");
    }
    return j.at(key);
}

std::string basis_name(EigenBasis basis) {
    return basis == EigenBasis::Fourier ? "fourier" : "brownian_motion";
}

EigenBasis basis_from_name(const std::string& name) {
    if (name == "fourier") return EigenBasis::Fourier;
    if (name == "brownian_motion") return EigenBasis::BrownianMotion;
    throw InvalidInput("json: unknown basis '" + name + "'");
}

std::string noise_kind_name(NoiseKind kind) {
    return kind == NoiseKind::IID ? "iid" : "ar1";
}

NoiseKind noise_kind_from_name(const std::string& name) {
    if (name == "iid") return NoiseKind::IID;
    if (name == "ar1") return NoiseKind::AR1;
    throw InvalidInput("json: unknown noise kind '" + name + "'");
}

std::string statistic_name(RateStatistic s) {
    return to_string(s);
}

RateStatistic statistic_from_name(const std::string& name) {
    if (name == "sup_error") return RateStatistic::SupError;
    if (name == "eigen_error") return RateStatistic::EigenError;
    if (name == "alignment") return RateStatistic::Alignment;
    if (name == "acf_drift") return RateStatistic::AcfDrift;
    if (name == "score_max") return RateStatistic::ScoreMax;
    throw InvalidInput("json: unknown statistic '" + name + "'");
}

json noise_to_json(const NoiseSpec& spec) {
    json j;
    j["kind"] = noise_kind_name(spec.kind);
    j["sigma"] = spec.sigma;
    if (spec.kind == NoiseKind::AR1) {
        j["phi"] = spec.phi;
    }
    return j;
}

NoiseSpec noise_from_json(const json& j) {
    NoiseSpec spec;
    spec.kind = noise_kind_from_name(get<std::string>(j, "kind"));
    spec.sigma = get<double>(j, "sigma");
    spec.phi = get_or<double>(j, "phi", 0.0);
    spec.validate();
    return spec;
}

json decay_to_json(const EigenDecay& decay) {
    json j;
    if (decay.is_explicit()) {
        j["values"] = decay.values;
    } else {
        j["rho"] = decay.rho;
        j["nu"] = decay.nu;
    }
    return j;
}

EigenDecay decay_from_json(const json& j) {
    EigenDecay decay;
    if (j.contains("values")) {
        decay.values = get<std::vector<double>>(j, "values");
    } else {
        decay.rho = get<double>(j, "rho");
        decay.nu = get<double>(j, "nu");
    }
    return decay;
}

json sim_to_json_obj(const SimConfig& cfg) {
    json j;
    j["t"] = cfg.num_curves;
    j["p"] = cfg.num_points;
    j["l_true"] = cfg.num_factors;
    j["basis"] = basis_name(cfg.basis);
    j["eigen_decay"] = decay_to_json(cfg.decay);
    j["score_ar"] = cfg.score_ar;
    j["noise"] = noise_to_json(cfg.noise);
    j["seed"] = cfg.seed;
    return j;
}

SimConfig sim_from_json_obj(const json& j) {
    SimConfig cfg;
    cfg.num_curves = get<int>(j, "t");
    cfg.num_points = get<int>(j, "p");
    cfg.num_factors = get<int>(j, "l_true");
    cfg.basis = basis_from_name(get<std::string>(j, "basis"));
    cfg.decay = decay_from_json(get_ref(j, "eigen_decay"));
    cfg.score_ar = get<std::vector<double>>(j, "score_ar");
    cfg.noise = noise_from_json(get_ref(j, "noise"));
    cfg.seed = get<std::uint64_t>(j, "seed");
    cfg.validate();
    return cfg;
}

json sizes_to_json(const std::vector<std::pair<int, int>>& sizes) {
    json arr = json::array();
    for (const auto& [t, p] : sizes) {
        arr.push_back(json::array({t, p}));
    }
    return arr;
}

std::vector<std::pair<int, int>> sizes_from_json(const json& j) {
    std::vector<std::pair<int, int>> sizes;
    if (!j.is_array()) {
        throw InvalidInput("json: 'sizes' must be an array of [t, p] pairs");
    }
    for (const auto& entry : j) {
        if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number_integer() ||
            !entry[1].is_number_integer()) {
            throw InvalidInput("json: each size must be a [t, p] pair of integers");
        }
        sizes.emplace_back(entry[0].get<int>(), entry[1].get<int>());
    }
    return sizes;
}

}  // namespace

std::string to_json(const SimConfig& cfg) {
    return sim_to_json_obj(cfg).dump(2);
}

SimConfig sim_config_from_json(const std::string& text) {
    return sim_from_json_obj(parse(text));
}

std::string to_json(const RateStudyConfig& cfg) {
    json j;
    j["sizes"] = sizes_to_json(cfg.sizes);
    j["replications"] = cfg.replications;
    j["base"] = sim_to_json_obj(cfg.base);
    j["which"] = statistic_name(cfg.statistic);
    j["l_schedule"] = cfg.l_schedule == LSchedule::Fixed ? "fixed" : "log_t";
    j["acf_sub_points"] = cfg.acf_sub_points;
    j["acf_max_lag"] = cfg.acf_max_lag;
    return j.dump(2);
}

RateStudyConfig rate_study_config_from_json(const std::string& text) {
    const json j = parse(text);
    RateStudyConfig cfg;
    cfg.sizes = sizes_from_json(get_ref(j, "sizes"));
    cfg.replications = get<int>(j, "replications");
    cfg.base = sim_from_json_obj(get_ref(j, "base"));
    cfg.statistic = statistic_from_name(get<std::string>(j, "which"));
    const std::string schedule = get_or<std::string>(j, "l_schedule", "fixed");
    if (schedule == "fixed") {
        cfg.l_schedule = LSchedule::Fixed;
    } else if (schedule == "log_t") {
        cfg.l_schedule = LSchedule::LogT;
    } else {
        throw InvalidInput("json: unknown l_schedule '" + schedule + "'");
    }
    cfg.acf_sub_points = get_or<int>(j, "acf_sub_points", 20);
    cfg.acf_max_lag = get_or<int>(j, "acf_max_lag", 2);
    return cfg;
}

std::string to_json(const RateStudyResult& result) {
    json j;
    j["which"] = statistic_name(result.statistic);
    j["base_seed"] = result.base_seed;
    j["replications"] = result.replications;
    json summaries = json::array();
    for (const auto& s : result.summaries) {
        json row;
        row["t"] = s.num_curves;
        row["p"] = s.num_points;
        row["l"] = s.num_factors;
        row["median"] = s.median;
        row["quartile1"] = s.quartile1;
        row["quartile3"] = s.quartile3;
        summaries.push_back(row);
    }
    j["summaries"] = summaries;
    j["values"] = result.values;
    j["log_slope"] = result.log_slope;
    return j.dump(2);
}

std::string to_json(const AcfCheckConfig& cfg) {
    json j;
    j["sizes"] = sizes_to_json(cfg.sizes);
    j["replications"] = cfg.replications;
    j["base"] = sim_to_json_obj(cfg.base);
    j["sub_points"] = cfg.sub_points;
    j["max_lag"] = cfg.max_lag;
    return j.dump(2);
}

AcfCheckConfig acf_check_config_from_json(const std::string& text) {
    const json j = parse(text);
    AcfCheckConfig cfg;
    cfg.sizes = sizes_from_json(get_ref(j, "sizes"));
    cfg.replications = get<int>(j, "replications");
    cfg.base = sim_from_json_obj(get_ref(j, "base"));
    cfg.sub_points = get_or<int>(j, "sub_points", 20);
    cfg.max_lag = get_or<int>(j, "max_lag", 2);
    return cfg;
}

std::string to_json(const AcfCheckResult& result) {
    json j;
    j["base_seed"] = result.base_seed;
    j["replications"] = result.replications;
    json sizes = json::array();
    for (const auto& s : result.sizes) {
        json row;
        row["t"] = s.num_curves;
        row["p"] = s.num_points;
        json lags = json::array();
        for (const auto& lag : s.lags) {
            json lag_row;
            lag_row["lag"] = lag.lag;
            lag_row["median"] = lag.median;
            lag_row["quartile1"] = lag.quartile1;
            lag_row["quartile3"] = lag.quartile3;
            lags.push_back(lag_row);
        }
        row["lags"] = lags;
        row["overall_median"] = s.overall_median;
        sizes.push_back(row);
    }
    j["sizes"] = sizes;
    return j.dump(2);
}

std::string to_json(const CompareConfig& cfg) {
    json j;
    j["base"] = sim_to_json_obj(cfg.base);
    j["replications"] = cfg.replications;
    j["k_max"] = cfg.k_max;
    json smoother;
    if (cfg.smoother.bandwidth) {
        smoother["bandwidth"] = *cfg.smoother.bandwidth;
    } else {
        smoother["bandwidth"] = "auto";
    }
    smoother["kernel"] =
        cfg.smoother.kernel == SmootherKernel::Epanechnikov ? "epanechnikov" : "gaussian";
    j["smoother"] = smoother;
    return j.dump(2);
}

CompareConfig compare_config_from_json(const std::string& text) {
    const json j = parse(text);
    CompareConfig cfg;
    cfg.base = sim_from_json_obj(get_ref(j, "base"));
    cfg.replications = get<int>(j, "replications");
    cfg.k_max = get_or<int>(j, "k_max", 0);
    if (j.contains("smoother")) {
        const json& s = get_ref(j, "smoother");
        if (s.contains("bandwidth") && s.at("bandwidth").is_number()) {
            cfg.smoother.bandwidth = s.at("bandwidth").get<double>();
        }
        const std::string kernel = get_or<std::string>(s, "kernel", "epanechnikov");
        if (kernel == "epanechnikov") {
            cfg.smoother.kernel = SmootherKernel::Epanechnikov;
        } else if (kernel == "gaussian") {
            cfg.smoother.kernel = SmootherKernel::Gaussian;
        } else {
            throw InvalidInput("json: unknown kernel '" + kernel + "'");
        }
    }
    return cfg;
}

std::string to_json(const CompareResult& result) {
    json j;
    j["base_seed"] = result.base_seed;
    json reps = json::array();
    for (const auto& row : result.replications) {
        json r;
        r["seed"] = row.seed;
        r["l_hat"] = row.l_hat;
        r["mse_factor"] = row.mse_factor;
        r["mse_smoother"] = row.mse_smoother;
        reps.push_back(r);
    }
    j["replications"] = reps;
    j["factor_win_fraction"] = result.factor_win_fraction;
    j["median_mse_factor"] = result.median_mse_factor;
    j["median_mse_smoother"] = result.median_mse_smoother;
    return j.dump(2);
}

std::string to_json(const FactorCountResult& result) {
    json j;
    j["chosen"] = result.chosen;
    j["method"] = to_string(result.method);
    j["scores_by_k"] = result.scores_by_k;
    j["warnings"] = result.warnings;
    return j.dump(2);
}

std::string fit_summary_json(const FactorFit& fit) {
    json j;
    j["num_factors"] = fit.num_factors;
    j["eigenvalues"] = std::vector<double>(fit.eigenvalues.data(),
                                           fit.eigenvalues.data() + fit.eigenvalues.size());
    j["mean"] = std::vector<double>(fit.mean.data(), fit.mean.data() + fit.mean.size());
    j["warnings"] = fit.warnings;
    return j.dump(2);
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InvalidInput("cannot open '" + path.string() + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw InvalidInput("cannot open '" + path.string() + "' for writing");
    }
    out << text;
    out.flush();
    if (!out) {
        throw InvalidInput("write to '" + path.string() + "' failed");
    }
}

}  // namespace fdrec
