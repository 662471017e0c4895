#pragma once

#include <filesystem>
#include <string>

#include "fdrec/estimator.hpp"
#include "fdrec/experiments.hpp"
#include "fdrec/factor_count.hpp"
#include "fdrec/simulation.hpp"

namespace fdrec {

// JSON bridges. Keys are the lower_snake_case field names of the structs;
// serialization is deterministic (alphabetical key order, fixed layout), so
// byte comparison of two serialized results is a valid equality check.
// All parsers throw InvalidInput with the offending key in the message.

std::string to_json(const SimConfig& cfg);
SimConfig sim_config_from_json(const std::string& text);

std::string to_json(const RateStudyConfig& cfg);
RateStudyConfig rate_study_config_from_json(const std::string& text);

std::string to_json(const RateStudyResult& result);

std::string to_json(const AcfCheckConfig& cfg);
AcfCheckConfig acf_check_config_from_json(const std::string& text);

std::string to_json(const AcfCheckResult& result);

std::string to_json(const CompareConfig& cfg);
CompareConfig compare_config_from_json(const std::string& text);

std::string to_json(const CompareResult& result);

std::string to_json(const FactorCountResult& result);

// Fit summary without the recovered panel (that goes to CSV).
std::string fit_summary_json(const FactorFit& fit);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace fdrec
