#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace hyperwalk {

// One gated statistic. `relation` is one of <=, <, >=, >; margin is the
// signed room left before the gate flips (negative when failing).
struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
  double gate = 0.0;
  std::string relation = "<=";
  bool pass = false;
  double margin = 0.0;

  friend bool operator==(const Estimate&, const Estimate&) = default;
};

Estimate gated(double value, double std_error, const std::string& relation, double gate);

struct MeasureTable {
  std::string name;
  std::string kind;            // cylinders | windows | bins
  std::string chart_or_depth;
  std::vector<std::pair<std::string, double>> entries;

  friend bool operator==(const MeasureTable&, const MeasureTable&) = default;
};

struct Series {
  std::string name;
  std::string x_label, y_label;
  std::vector<std::pair<double, double>> points;

  friend bool operator==(const Series&, const Series&) = default;
};

struct Provenance {
  std::uint64_t seed = 0;
  std::string version;
  std::string wall_clock;

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct ExperimentReport {
  nlohmann::json config;
  nlohmann::json model;
  std::map<std::string, Estimate> estimates;
  std::vector<MeasureTable> measures;
  std::vector<Series> series;
  std::vector<std::string> notes;
  Provenance provenance;

  bool all_pass() const;
  friend bool operator==(const ExperimentReport&, const ExperimentReport&) = default;
};

nlohmann::json to_json(const ExperimentReport& report);
ExperimentReport report_from_json(const nlohmann::json& j);

std::string render_json(const ExperimentReport& report);
std::string render_csv(const MeasureTable& table);
std::string render_svg(const Series& series);

// Writes report.json, one CSV per measure and, with `plots`, one SVG per
// series into `dir`. Returns the files written.
std::vector<std::filesystem::path> emit(const ExperimentReport& report, const std::filesystem::path& dir,
                                        bool plots);

// UTC timestamp, or the one fixed by SOURCE_DATE_EPOCH when set.
std::string wall_clock_now();

inline constexpr const char* kVersion = "1.0.0";

}  // namespace hyperwalk
