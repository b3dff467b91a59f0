#include "hyperwalk/report.hpp"

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace hyperwalk {

using nlohmann::json;

Estimate gated(double value, double std_error, const std::string& relation, double gate) {
  Estimate e{value, std_error, gate, relation, false, 0.0};
  if (relation == "<=") {
    e.margin = gate - value;
    e.pass = value <= gate;
  } else if (relation == "<") {
    e.margin = gate - value;
    e.pass = value < gate;
  } else if (relation == ">") {
    e.margin = value - gate;
    e.pass = value > gate;
  } else if (relation == ">=") {
    e.margin = value - gate;
    e.pass = value >= gate;
  } else {
    throw std::invalid_argument("unknown gate relation '" + relation + "'");
  }
  return e;
}

bool ExperimentReport::all_pass() const {
  return std::all_of(estimates.begin(), estimates.end(), [](const auto& kv) { return kv.second.pass; });
}

json to_json(const ExperimentReport& r) {
  json estimates = json::object();
  for (const auto& [name, e] : r.estimates) {
    estimates[name] = {{"value", e.value},       {"std_error", e.std_error}, {"gate", e.gate},
                       {"relation", e.relation}, {"pass", e.pass},           {"margin", e.margin}};
  }
  json measures = json::array();
  for (const auto& m : r.measures) {
    json entries = json::array();
    for (const auto& [key, mass] : m.entries) entries.push_back({{"key", key}, {"mass", mass}});
    measures.push_back({{"name", m.name}, {"kind", m.kind}, {"chart_or_depth", m.chart_or_depth}, {"entries", entries}});
  }
  json series = json::array();
  for (const auto& s : r.series) {
    json points = json::array();
    for (const auto& [x, y] : s.points) points.push_back({x, y});
    series.push_back({{"name", s.name}, {"x", s.x_label}, {"y", s.y_label}, {"points", points}});
  }
  return {{"config", r.config},
          {"model", r.model},
          {"estimates", estimates},
          {"measures", measures},
          {"diagnostics", series},
          {"notes", r.notes},
          {"provenance", {{"seed", r.provenance.seed}, {"version", r.provenance.version}, {"wall_clock", r.provenance.wall_clock}}}};
}

ExperimentReport report_from_json(const json& j) {
  ExperimentReport r;
  r.config = j.at("config");
  r.model = j.at("model");
  for (const auto& [name, e] : j.at("estimates").items()) {
    r.estimates[name] = {e.at("value").get<double>(), e.at("std_error").get<double>(), e.at("gate").get<double>(),
                         e.at("relation").get<std::string>(), e.at("pass").get<bool>(), e.at("margin").get<double>()};
  }
  for (const auto& m : j.at("measures")) {
    MeasureTable t{m.at("name"), m.at("kind"), m.at("chart_or_depth"), {}};
    for (const auto& e : m.at("entries")) t.entries.emplace_back(e.at("key"), e.at("mass").get<double>());
    r.measures.push_back(std::move(t));
  }
  for (const auto& s : j.at("diagnostics")) {
    Series out{s.at("name"), s.at("x"), s.at("y"), {}};
    for (const auto& p : s.at("points")) out.points.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
    r.series.push_back(std::move(out));
  }
  r.notes = j.at("notes").get<std::vector<std::string>>();
  const auto& p = j.at("provenance");
  r.provenance = {p.at("seed").get<std::uint64_t>(), p.at("version"), p.at("wall_clock")};
  return r;
}

std::string render_json(const ExperimentReport& report) { return to_json(report).dump(2) + "\n"; }

std::string render_csv(const MeasureTable& table) {
  std::ostringstream out;
  out << std::setprecision(17) << "key,mass\n";
  for (const auto& [key, mass] : table.entries) out << key << ',' << mass << '\n';
  return out.str();
}

std::string render_svg(const Series& s) {
  constexpr double W = 640, H = 400, L = 70, R = 20, T = 30, B = 50;
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (!s.points.empty()) {
    x0 = x1 = s.points[0].first;
    y0 = y1 = s.points[0].second;
    for (const auto& [x, y] : s.points) {
      x0 = std::min(x0, x), x1 = std::max(x1, x);
      y0 = std::min(y0, y), y1 = std::max(y1, y);
    }
  }
  if (x1 == x0) x1 = x0 + 1;
  if (y1 == y0) y1 = y0 + 1;
  const double pad = 0.05 * (y1 - y0);
  y0 -= pad, y1 += pad;
  auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
  auto py = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };

  std::ostringstream out;
  out << std::setprecision(6);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << W / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" << s.name << "</text>\n"
      << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B
      << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = x0 + (x1 - x0) * i / 4, yv = y0 + (y1 - y0) * i / 4;
    out << "<text x=\"" << px(xv) << "\" y=\"" << H - B + 16 << "\" text-anchor=\"middle\" font-size=\"10\">" << xv
        << "</text>\n"
        << "<text x=\"" << L - 6 << "\" y=\"" << py(yv) + 3 << "\" text-anchor=\"end\" font-size=\"10\">" << yv
        << "</text>\n";
  }
  out << "<text x=\"" << W / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\" font-size=\"12\">" << s.x_label
      << "</text>\n"
      << "<text x=\"16\" y=\"" << H / 2 << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 16 "
      << H / 2 << ")\">" << s.y_label << "</text>\n";
  out << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"";
  for (const auto& [x, y] : s.points) out << px(x) << ',' << py(y) << ' ';
  out << "\"/>\n";
  for (const auto& [x, y] : s.points) out << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y) << "\" r=\"2.5\" fill=\"steelblue\"/>\n";
  out << "</svg>\n";
  return out.str();
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "': " + std::strerror(errno));
  out << body;
  if (!out) throw std::runtime_error("error writing '" + path.string() + "': " + std::strerror(errno));
}

std::string file_stem(std::string name) {
  for (char& ch : name) {
    if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '-' && ch != '_') ch = '_';
  }
  return name;
}

}  // namespace

std::vector<std::filesystem::path> emit(const ExperimentReport& report, const std::filesystem::path& dir, bool plots) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  written.push_back(dir / "report.json");
  write_file(written.back(), render_json(report));
  for (const auto& m : report.measures) {
    written.push_back(dir / (file_stem(m.name) + ".csv"));
    write_file(written.back(), render_csv(m));
  }
  if (plots) {
    for (const auto& s : report.series) {
      written.push_back(dir / (file_stem(s.name) + ".svg"));
      write_file(written.back(), render_svg(s));
    }
  }
  return written;
}

std::string wall_clock_now() {
  std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  if (const char* fixed = std::getenv("SOURCE_DATE_EPOCH")) t = static_cast<std::time_t>(std::strtoll(fixed, nullptr, 10));
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace hyperwalk
