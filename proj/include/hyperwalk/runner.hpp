#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "hyperwalk/config.hpp"
#include "hyperwalk/report.hpp"

namespace hyperwalk {

// certify, drift, track, length-law, axis-check, harmonic, equidistribute, all
const std::vector<std::string>& subcommands();

// Runs one suite. The report depends only on the config, never on `jobs`.
ExperimentReport run(const std::string& subcommand, const ExperimentConfig& config, unsigned jobs);

nlohmann::json config_to_json(const ExperimentConfig& config);

}  // namespace hyperwalk
