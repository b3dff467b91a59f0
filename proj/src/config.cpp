#include "hyperwalk/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <sstream>

#include "hyperwalk/errors.hpp"

namespace hyperwalk {

namespace {

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string part;
  std::istringstream in(s);
  while (std::getline(in, part, sep)) out.push_back(trim(part));
  return out;
}

std::vector<std::string> words(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

double plain_number(const std::string& s, int line) {
  double v = 0.0;
  const char* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) throw ConfigError(line, "not a number: '" + s + "'");
  return v;
}

// Decimal or p/q.
double number(const std::string& s, int line) {
  const auto slash = s.find('/');
  if (slash == std::string::npos) return plain_number(s, line);
  const double q = plain_number(s.substr(slash + 1), line);
  if (q == 0.0) throw ConfigError(line, "zero denominator in '" + s + "'");
  return plain_number(s.substr(0, slash), line) / q;
}

std::size_t count(const std::string& s, int line) {
  const double v = number(s, line);
  if (!(v >= 0.0) || v != std::floor(v) || v > 1e15) throw ConfigError(line, "expected a whole number, got '" + s + "'");
  return static_cast<std::size_t>(v);
}

bool flag(const std::string& s, int line) {
  if (s == "yes" || s == "true" || s == "1") return true;
  if (s == "no" || s == "false" || s == "0") return false;
  throw ConfigError(line, "expected yes or no, got '" + s + "'");
}

std::vector<double> numbers(const std::string& s, std::size_t expected, int line) {
  const auto parts = words(s);
  if (parts.size() != expected) {
    throw ConfigError(line, "expected " + std::to_string(expected) + " numbers, got '" + s + "'");
  }
  std::vector<double> out;
  for (const auto& p : parts) out.push_back(number(p, line));
  return out;
}

BoundaryDisk disk(const std::string& s, int line) {
  const auto parts = words(s);
  if (parts.empty()) throw ConfigError(line, "empty disk description");
  const std::string& kind = parts[0];
  auto arg = [&](std::size_t i) { return number(parts[i], line); };
  if ((kind == "inside" || kind == "outside") && parts.size() == 3) {
    if (!(arg(2) > 0.0)) throw ConfigError(line, "disk radius must be positive");
    return kind == "inside" ? BoundaryDisk::inside(arg(1), arg(2)) : BoundaryDisk::outside(arg(1), arg(2));
  }
  if ((kind == "left" || kind == "right") && parts.size() == 2) {
    return kind == "left" ? BoundaryDisk::left_of(arg(1)) : BoundaryDisk::right_of(arg(1));
  }
  throw ConfigError(line, "disk must be 'inside c r', 'outside c r', 'left x' or 'right x', got '" + s + "'");
}

GeneratorConfig generator(const std::string& s, int line) {
  const auto parts = split(s, '|');
  if (parts.size() != 3) throw ConfigError(line, "generator needs 'matrix | repelling disk | attracting disk'");
  const auto m = numbers(parts[0], 4, line);
  if (std::abs(m[0] * m[3] - m[1] * m[2] - 1.0) > 1e-9) throw ConfigError(line, "generator determinant is not 1");
  return {{m[0], m[1], m[2], m[3]}, disk(parts[1], line), disk(parts[2], line)};
}

using Setter = std::function<void(ExperimentConfig&, const std::string&, int)>;

const std::map<std::string, std::map<std::string, Setter>>& setters() {
  static const std::map<std::string, std::map<std::string, Setter>> table = {
      {"model",
       {
           {"kind",
            [](ExperimentConfig& c, const std::string& v, int l) {
              if (v != "tree" && v != "halfplane") throw ConfigError(l, "model kind must be tree or halfplane");
              c.kind = v;
            }},
           {"rank",
            [](ExperimentConfig& c, const std::string& v, int l) {
              const std::size_t k = count(v, l);
              if (k < 1 || k > 26) throw ConfigError(l, "rank must be between 1 and 26");
              c.rank = static_cast<int>(k);
            }},
           {"basepoint",
            [](ExperimentConfig& c, const std::string& v, int l) {
              const auto parts = words(v);
              if (parts.size() == 2) {
                c.plane_basepoint = {number(parts[0], l), number(parts[1], l)};
                if (!(c.plane_basepoint.y > 0.0)) throw ConfigError(l, "basepoint must lie in the upper half-plane");
              } else {
                c.tree_basepoint = v;
              }
            }},
       }},
      {"walk",
       {
           {"steps", [](ExperimentConfig& c, const std::string& v, int l) { c.steps = count(v, l); }},
           {"paths", [](ExperimentConfig& c, const std::string& v, int l) { c.paths = count(v, l); }},
           {"seed", [](ExperimentConfig& c, const std::string& v, int l) { c.seed = count(v, l); }},
       }},
      {"analysis",
       {
           {"depth", [](ExperimentConfig& c, const std::string& v, int l) { c.analysis.depth = count(v, l); }},
           {"small_steps", [](ExperimentConfig& c, const std::string& v, int l) { c.analysis.small_n = count(v, l); }},
           {"eps", [](ExperimentConfig& c, const std::string& v, int l) { c.analysis.eps = number(v, l); }},
           {"c", [](ExperimentConfig& c, const std::string& v, int l) { c.analysis.c = number(v, l); }},
           {"axis_fraction", [](ExperimentConfig& c, const std::string& v, int l) { c.analysis.axis_fraction = number(v, l); }},
           {"tracking_gate", [](ExperimentConfig& c, const std::string& v, int l) { c.analysis.tracking_gate = number(v, l); }},
           {"length_tolerance", [](ExperimentConfig& c, const std::string& v, int l) { c.analysis.length_tolerance = number(v, l); }},
           {"drift_oracle", [](ExperimentConfig& c, const std::string& v, int l) { c.analysis.drift_oracle = number(v, l); }},
           {"drift_tolerance", [](ExperimentConfig& c, const std::string& v, int l) { c.analysis.drift_tolerance = number(v, l); }},
           {"samples", [](ExperimentConfig& c, const std::string& v, int l) { c.analysis.samples = count(v, l); }},
           {"first_passage_paths", [](ExperimentConfig& c, const std::string& v, int l) { c.analysis.first_passage_paths = count(v, l); }},
           {"measure_paths", [](ExperimentConfig& c, const std::string& v, int l) { c.analysis.measure_paths = count(v, l); }},
           {"tv_gate", [](ExperimentConfig& c, const std::string& v, int l) { c.analysis.tv_gate = number(v, l); }},
           {"improve_fraction", [](ExperimentConfig& c, const std::string& v, int l) { c.analysis.improve_fraction = number(v, l); }},
           {"overflow_gate", [](ExperimentConfig& c, const std::string& v, int l) { c.analysis.overflow_gate = number(v, l); }},
           {"radius", [](ExperimentConfig& c, const std::string& v, int l) { c.analysis.radius = static_cast<int>(count(v, l)); }},
           {"slack_sigmas", [](ExperimentConfig& c, const std::string& v, int l) { c.analysis.slack_sigmas = number(v, l); }},
           {"step", [](ExperimentConfig& c, const std::string& v, int l) {
              c.analysis.step = number(v, l);
              if (!(c.analysis.step > 0.0 && c.analysis.step <= 0.05)) throw ConfigError(l, "step must lie in (0, 0.05]");
            }},
           {"generation_radius", [](ExperimentConfig& c, const std::string& v, int l) { c.analysis.generation_radius = static_cast<int>(count(v, l)); }},
           {"chart_x", [](ExperimentConfig& c, const std::string& v, int l) {
              const auto p = numbers(v, 3, l);
              c.analysis.chart.x_min = p[0];
              c.analysis.chart.x_max = p[1];
              c.analysis.chart.nx = static_cast<int>(count(words(v)[2], l));
            }},
           {"chart_y", [](ExperimentConfig& c, const std::string& v, int l) {
              const auto p = numbers(v, 3, l);
              c.analysis.chart.y_min = p[0];
              c.analysis.chart.y_max = p[1];
              c.analysis.chart.ny = static_cast<int>(count(words(v)[2], l));
            }},
           {"chart_angles", [](ExperimentConfig& c, const std::string& v, int l) { c.analysis.chart.na = static_cast<int>(count(v, l)); }},
       }},
  };
  return table;
}

void check_chart(const Chart& chart, int line) {
  if (!(chart.x_min < chart.x_max) || !(0.0 < chart.y_min && chart.y_min < chart.y_max) || chart.nx < 1 ||
      chart.ny < 1 || chart.na < 1) {
    throw ConfigError(line, "chart ranges must be increasing with positive bin counts and y > 0");
  }
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig config;
  std::istringstream in(text);
  std::string raw, section;
  int line = 0, mu_line = 0, generators_line = 0, last_line = 0;
  std::set<std::string> seen;
  std::map<char, std::pair<GeneratorConfig, int>> gens;
  while (std::getline(in, raw)) {
    ++line;
    const std::string body = trim(raw.substr(0, raw.find('#')));
    if (body.empty()) continue;
    last_line = line;
    if (body.front() == '[') {
      if (body.back() != ']') throw ConfigError(line, "unterminated section header");
      section = trim(body.substr(1, body.size() - 2));
      if (section != "model" && section != "generators" && section != "mu" && section != "walk" && section != "analysis") {
        throw ConfigError(line, "unknown section [" + section + "]");
      }
      if (section == "mu") mu_line = line;
      if (section == "generators") generators_line = line;
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ConfigError(line, "expected key = value");
    const std::string key = trim(body.substr(0, eq)), value = trim(body.substr(eq + 1));
    if (section.empty()) throw ConfigError(line, "key '" + key + "' outside any section");
    if (key.empty() || value.empty()) throw ConfigError(line, "empty key or value");
    if (!seen.insert(section + "." + key).second) throw ConfigError(line, "duplicate key '" + key + "'");

    if (section == "mu") {
      if (key == "uniform") {
        config.uniform = flag(value, line);
        continue;
      }
      try {
        (void)ReducedWord::parse(key);
      } catch (const Error& e) {
        throw ConfigError(line, "bad step '" + key + "': " + e.what());
      }
      config.mu.emplace_back(key, number(value, line));
      continue;
    }
    if (section == "generators") {
      if (key.size() != 1 || key[0] < 'a' || key[0] > 'z') throw ConfigError(line, "generator names are a, b, c, ...");
      gens[key[0]] = {generator(value, line), line};
      continue;
    }
    const auto& table = setters().at(section);
    const auto it = table.find(key);
    if (it == table.end()) throw ConfigError(line, "unknown key '" + key + "' in [" + section + "]");
    it->second(config, value, line);
    if (key.rfind("chart_", 0) == 0) check_chart(config.analysis.chart, line);
  }

  char expected = 'a';
  for (const auto& [name, entry] : gens) {
    if (name != expected++) throw ConfigError(entry.second, "generators must be named a, b, c, ... without gaps");
    config.generators.push_back(entry.first);
  }
  if (config.kind == "halfplane") {
    if (config.generators.empty()) throw ConfigError(generators_line ? generators_line : last_line, "halfplane model needs [generators]");
    if (seen.count("model.rank") && config.rank != static_cast<int>(config.generators.size())) {
      throw ConfigError(generators_line, "rank does not match the number of generators");
    }
    config.rank = static_cast<int>(config.generators.size());
  } else if (!config.generators.empty()) {
    throw ConfigError(generators_line, "tree model takes no generators");
  }
  if (config.uniform == !config.mu.empty()) {
    throw ConfigError(mu_line ? mu_line : last_line, "[mu] needs either 'uniform = yes' or a list of steps");
  }
  try {
    (void)make_step_distribution(config);
    if (config.kind == "tree") {
      const ReducedWord base = ReducedWord::parse(config.tree_basepoint);
      if (base.rank() > config.rank) throw InvalidArgument("basepoint uses letters beyond the rank");
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(mu_line ? mu_line : last_line, e.what());
  }
  if (config.steps < 4) throw ConfigError(last_line, "walk needs at least 4 steps");
  if (config.paths < 1) throw ConfigError(last_line, "walk needs at least one path");
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

StepDistribution make_step_distribution(const ExperimentConfig& config) {
  StepDistribution mu;
  if (config.uniform) {
    mu = StepDistribution::uniform_nearest_neighbor(config.rank);
  } else {
    std::vector<StepDistribution::Atom> atoms;
    for (const auto& [w, p] : config.mu) atoms.push_back({ReducedWord::parse(w), p});
    mu = StepDistribution(std::move(atoms));
  }
  if (mu.rank() > config.rank) throw InvalidArgument("step distribution uses letters beyond the rank");
  return mu;
}

Model make_model(const ExperimentConfig& config) {
  if (config.kind == "tree") return TreeModel{config.rank, ReducedWord::parse(config.tree_basepoint)};
  std::vector<SchottkyGenerator> gens;
  for (const auto& g : config.generators) {
    gens.push_back({MobiusMap(g.matrix[0], g.matrix[1], g.matrix[2], g.matrix[3]), g.repelling, g.attracting});
  }
  return HalfplaneModel{std::make_shared<const SchottkyGroup>(std::move(gens)), config.plane_basepoint};
}

}  // namespace hyperwalk
