#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hyperwalk/config.hpp"
#include "hyperwalk/errors.hpp"
#include "hyperwalk/runner.hpp"

using namespace hyperwalk;
using doctest::Approx;
namespace fs = std::filesystem;

namespace {

const fs::path kConfigs = HYPERWALK_CONFIG_DIR;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("hyperwalk_test_cli_" + name);
  fs::remove_all(dir);
  return dir;
}

int cli(const std::string& args) {
  const std::string cmd = std::string("SOURCE_DATE_EPOCH=0 ") + HYPERWALK_CLI + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

int config_error_line(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.line();
  }
  return -1;
}

ExperimentConfig small_tree() {
  return parse_config(R"(
[model]
kind = tree
basepoint = a
[mu]
uniform = yes
[walk]
steps = 2000
paths = 16
seed = 9
[analysis]
small_steps = 200
samples = 4000
first_passage_paths = 4000
measure_paths = 4
)");
}

}  // namespace

TEST_CASE("config parsing") {
  const auto c = load_config((kConfigs / "schottky_pair.conf").string());
  CHECK(c.kind == "halfplane");
  CHECK(c.rank == 2);
  REQUIRE(c.generators.size() == 2);
  CHECK(c.generators[0].matrix[3] == Approx(1.0 / 3.0));
  CHECK(c.generators[1].matrix[1] == Approx(-4.0 / 3.0));
  CHECK(c.generators[0].attracting.kind == BoundaryDisk::Kind::Outside);
  CHECK(c.generators[1].repelling.center == 1.25);
  CHECK(c.uniform);
  CHECK(c.analysis.chart == Chart{});

  const auto b = load_config((kConfigs / "biased_f2.conf").string());
  CHECK(make_step_distribution(b).probability_of(ReducedWord::parse("a")) == 0.4);
  CHECK(std::holds_alternative<TreeModel>(make_model(b)));

  const auto pm = load_config((kConfigs / "point_mass_ab.conf").string());
  CHECK(make_step_distribution(pm).probability_of(ReducedWord::parse("ab")) == 1.0);
  CHECK(pm.analysis.drift_oracle == 2.0);
}

TEST_CASE("config errors carry line numbers") {
  CHECK(config_error_line("[model]\nkind = sphere\n") == 2);
  CHECK(config_error_line("# comment\n\n[nowhere]\n") == 3);
  CHECK(config_error_line("[walk]\nsteps = 10\nsteps = 20\n") == 3);
  CHECK(config_error_line("steps = 10\n") == 1);
  CHECK(config_error_line("[walk]\nsteps = ten\n") == 2);
  CHECK(config_error_line("[walk]\nsteps = 1/0\n") == 2);
  CHECK(config_error_line("[mu]\na = 1/2\nb = 1/3\n") == 1);
  CHECK(config_error_line("[mu]\nuniform = yes\n[analysis]\nstep = 0.5\n") == 4);
  CHECK(config_error_line("[mu]\nuniform = yes\n[analysis]\nbogus = 1\n") == 4);
  CHECK(config_error_line("[model]\nkind = halfplane\n[generators]\na = 2 0 0 1 | inside 0 1 | outside 0 2\n") == 4);
  CHECK(config_error_line("[model]\nkind = halfplane\n[generators]\na = 1 0 0 1 | square 0 1 | outside 0 2\n") == 4);
  CHECK(config_error_line("[mu]\na2 = 1\n") == 2);
  // Well-formed but not certifiable: caught when the model is built.
  const auto bad = load_config((kConfigs / "overlapping_disks.conf").string());
  CHECK_THROWS_AS(make_model(bad), DisksOverlap);
  CHECK_THROWS_AS(run("certify", bad, 1), DisksOverlap);
}

TEST_CASE("reports round-trip and are deterministic") {
  // Pin the provenance timestamp so whole documents compare.
  setenv("SOURCE_DATE_EPOCH", "0", 1);
  const auto config = small_tree();
  const auto one = run("all", config, 1);
  const auto many = run("all", config, 8);
  CHECK(render_json(one) == render_json(many));
  CHECK(render_json(one) == render_json(run("all", config, 1)));
  CHECK(report_from_json(nlohmann::json::parse(render_json(one))) == one);
  CHECK(one.estimates.count("drift.L_hat") == 1);
  CHECK(one.estimates.count("harmonic.kernel_sigmas") == 1);
  CHECK_THROWS_AS(run("nonsense", config, 1), InvalidArgument);
  for (const auto& [name, e] : one.estimates) {
    INFO(name);
    CHECK(std::isfinite(e.value));
    CHECK(std::isfinite(e.margin));
  }
}

TEST_CASE("gates") {
  CHECK(gated(1.0, 0.0, "<=", 1.0).pass);
  CHECK(gated(1.0, 0.0, "<=", 1.0).margin == 0.0);
  CHECK_FALSE(gated(1.0, 0.0, "<", 1.0).pass);
  CHECK(gated(2.0, 0.0, ">", 0.0).margin == 2.0);
  CHECK(gated(0.5, 0.0, ">=", 0.95).margin == Approx(-0.45));
  CHECK_THROWS(gated(0.0, 0.0, "!=", 0.0));
}

TEST_CASE("emitted files") {
  const auto report = run("all", small_tree(), 2);
  const fs::path dir = scratch("emit");
  const auto files = emit(report, dir, true);
  CHECK(fs::exists(dir / "report.json"));
  std::size_t csv = 0, svg = 0;
  for (const auto& f : files) {
    CHECK(fs::exists(f));
    if (f.extension() == ".svg") ++svg;
    if (f.extension() != ".csv") continue;
    ++csv;
    std::istringstream in(slurp(f));
    std::string line;
    std::getline(in, line);
    CHECK(line == "key,mass");
    double total = 0.0;
    while (std::getline(in, line)) total += std::stod(line.substr(line.find(',') + 1));
    // Cylinder tables list one depth; everything else is a probability vector.
    CHECK(std::abs(total - 1.0) <= 1e-9);
  }
  CHECK(csv == report.measures.size());
  CHECK(svg == report.series.size());
  CHECK(svg >= 3);

  const fs::path quiet = scratch("noplots");
  for (const auto& f : emit(report, quiet, false)) CHECK(f.extension() != ".svg");
  CHECK_THROWS(emit(report, "/proc/hyperwalk/definitely/not/writable", false));
}

TEST_CASE("command line") {
  const fs::path a = scratch("a"), b = scratch("b");
  const std::string pm = (kConfigs / "point_mass_ab.conf").string();
  CHECK(cli("all --config " + pm + " --jobs 1 --out " + a.string()) == 0);
  CHECK(cli("all --config " + pm + " --jobs 8 --out " + b.string() + " --plots") == 0);
  CHECK(slurp(a / "report.json") == slurp(b / "report.json"));
  CHECK(fs::exists(b / "drift_convergence.svg"));
  CHECK_FALSE(fs::exists(a / "drift_convergence.svg"));

  // Every exact invariant of the point mass holds with nothing to spare.
  const auto report = report_from_json(nlohmann::json::parse(slurp(a / "report.json")));
  CHECK(report.all_pass());
  for (const char* exact : {"drift.oracle_gap", "track.median", "length_law.gap", "axis.median_offset",
                            "axis.pass_fraction", "length_law.onset_fraction"}) {
    INFO(exact);
    CHECK(report.estimates.at(exact).margin == 0.0);
  }
  CHECK(report.provenance.wall_clock == "1970-01-01T00:00:00Z");

  const fs::path d = scratch("drift");
  CHECK(cli("drift --config " + (kConfigs / "uniform_f2.conf").string() + " --out " + d.string()) == 0);
  const auto drift = report_from_json(nlohmann::json::parse(slurp(d / "report.json")));
  CHECK(std::abs(drift.estimates.at("drift.L_hat").value - 0.5) <= 0.01);

  const fs::path s = scratch("seed");
  CHECK(cli("drift --config " + (kConfigs / "uniform_f2.conf").string() + " --seed 77 --out " + s.string()) == 0);
  CHECK(report_from_json(nlohmann::json::parse(slurp(s / "report.json"))).provenance.seed == 77);

  CHECK(cli("certify --config " + (kConfigs / "overlapping_disks.conf").string() + " --out " + scratch("bad").string()) == 2);
  CHECK(cli("certify --config " + (kConfigs / "schottky_pair.conf").string() + " --out " + scratch("ok").string()) == 0);
  CHECK(cli("drift --config /nonexistent.conf") != 0);
  CHECK(cli("frobnicate --config " + pm) != 0);
}
