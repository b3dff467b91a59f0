#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hyperwalk/equidistribution.hpp"
#include "hyperwalk/model.hpp"
#include "hyperwalk/schottky.hpp"
#include "hyperwalk/walk.hpp"

namespace hyperwalk {

struct GeneratorConfig {
  std::array<double, 4> matrix{1, 0, 0, 1};
  BoundaryDisk repelling;
  BoundaryDisk attracting;
};

struct AnalysisConfig {
  std::size_t depth = 2;           // cylinder / window depth D
  std::size_t small_n = 1000;      // comparison scale for monotonicity checks
  double eps = 0.1;                // axis-check trimming
  double c = 2.0;                  // axis-check neighborhood
  double axis_fraction = 0.95;     // required share of passing paths
  double tracking_gate = 0.02;
  double length_tolerance = 0.02;
  std::optional<double> drift_oracle;
  double drift_tolerance = 0.01;
  std::size_t samples = 100000;    // harmonic cylinder Monte Carlo
  std::size_t first_passage_paths = 100000;
  std::size_t measure_paths = 20;  // paths (or path pairs) for the equidistribution suite
  double tv_gate = 0.03;
  double improve_fraction = 0.9;
  double overflow_gate = 0.05;
  int radius = 1;                  // sandwich relaxation, bins or letters
  double slack_sigmas = 3.0;
  double step = kDefaultArcStep;
  int generation_radius = 3;
  Chart chart;
};

struct ExperimentConfig {
  std::string kind = "tree";  // tree | halfplane
  int rank = 2;
  std::string tree_basepoint = "1";
  HPoint plane_basepoint{0.0, 1.0};
  std::vector<GeneratorConfig> generators;
  bool uniform = false;
  std::vector<std::pair<std::string, double>> mu;  // word, probability
  std::size_t steps = 10000;
  std::size_t paths = 100;
  std::uint64_t seed = 1;
  AnalysisConfig analysis;
};

// Sectioned key = value text; '#' starts a comment. Numbers may be written
// as fractions (1/3). Throws ConfigError with the offending line.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

// Certifies the Schottky group for half-plane configs (DisksOverlap or
// MappingViolation propagate).
Model make_model(const ExperimentConfig& config);
StepDistribution make_step_distribution(const ExperimentConfig& config);

}  // namespace hyperwalk
