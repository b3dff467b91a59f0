// Acceptance suite: one PASS/FAIL line per criterion, then a summary line.
// Exit status is 0 only when every criterion passes.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hyperwalk/config.hpp"
#include "hyperwalk/equidistribution.hpp"
#include "hyperwalk/errors.hpp"
#include "hyperwalk/estimators.hpp"
#include "hyperwalk/harmonic.hpp"
#include "hyperwalk/parallel.hpp"
#include "hyperwalk/runner.hpp"
#include "hyperwalk/stats.hpp"

using namespace hyperwalk;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

unsigned jobs = default_jobs();

ReducedWord W(const char* s) { return ReducedWord::parse(s); }

StepDistribution biased() {
  return StepDistribution({{W("a"), 0.4}, {W("A"), 0.1}, {W("b"), 0.25}, {W("B"), 0.25}});
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::shared_ptr<const SchottkyGroup> schottky_pair() {
  static const auto group = std::make_shared<const SchottkyGroup>(std::vector<SchottkyGenerator>{
      {MobiusMap(3, 0, 0, 1.0 / 3), BoundaryDisk::inside(0, 1.0 / 3), BoundaryDisk::outside(0, 3)},
      {MobiusMap(5.0 / 3, -4.0 / 3, -4.0 / 3, 5.0 / 3), BoundaryDisk::inside(1.25, 0.75), BoundaryDisk::inside(-1.25, 0.75)},
  });
  return group;
}

ReducedWord random_word(std::mt19937_64& rng, int k, std::size_t max_len) {
  std::vector<Letter> letters;
  const std::size_t n = rng() % (max_len + 1);
  while (letters.size() < n) {
    const auto x = Letter::from_code(static_cast<std::uint8_t>(rng() % (2 * k)));
    if (!letters.empty() && letters.back() == x.inverse()) continue;
    letters.push_back(x);
  }
  return ReducedWord(letters);
}

// Shared between criteria 1 and 4-6.
double drift_hat = 0.0;

Verdict drift_oracle() {
  const auto d = drift_estimate(TreeModel{2, W("1")}, StepDistribution::uniform_nearest_neighbor(2), 10000, 1000, 101, jobs);
  drift_hat = d.value;
  return {d.value >= 0.49 && d.value <= 0.51, fmt("L_hat = %.5f +- %.5f, required in [0.49, 0.51]", d.value, d.std_error)};
}

Verdict first_passage_closed_form() {
  double worst = 0.0, residual = 0.0;
  for (int k : {2, 3, 5}) {
    const auto F = first_passage_solve(StepDistribution::uniform_nearest_neighbor(k), k);
    residual = std::max(residual, F.residual);
    for (double f : F.F) worst = std::max(worst, std::abs(f - 1.0 / (2 * k - 1)));
  }
  return {worst <= 1e-10 && residual <= 1e-12,
          fmt("max |F - 1/(2k-1)| = %.2e (<= 1e-10), max residual = %.2e (<= 1e-12)", worst, residual)};
}

Verdict harmonic_measure() {
  const auto mu = StepDistribution::uniform_nearest_neighbor(2);
  const auto mc = harmonic_cylinder_mc(mu, 2, 2, 100000, 103, jobs);
  double tv = 0.0;
  for (const auto& w : reduced_words(2, 2)) tv += 0.5 * std::abs(mc.mass(w) - 1.0 / 12);
  // Closed form (1/4)(1/3)^{|w|-1}, written out here rather than taken from the kernel.
  CylinderMeasure exact;
  exact.k = 2;
  exact.depth = 3;
  for (std::size_t len = 1; len <= 3; ++len)
    for (const auto& w : reduced_words(2, len)) exact.masses[w] = 0.25 * std::pow(1.0 / 3, double(len - 1));
  const double residual = stationarity_residual(exact, mu).residual;
  return {tv <= 0.01 && residual <= 1e-12,
          fmt("TV(depth-2 MC, 1/12) = %.5f (<= 0.01), exact stationarity residual = %.2e (<= 1e-12)", tv, residual)};
}

Verdict length_law() {
  const Model tree = TreeModel{2, W("1")};
  const auto mu = StepDistribution::uniform_nearest_neighbor(2);
  const auto rows = parallel_map(100, jobs, [&](std::size_t i) { return length_law_stat(sample_path(mu, 10000, 104, i), 10000, tree); });
  Moments ratio;
  std::size_t settled = 0;
  for (const auto& r : rows) {
    ratio.add(r.ratio);
    settled += r.never_lost && r.onset <= 10000;
  }
  const double gap = std::abs(ratio.mean() - drift_hat);
  return {gap <= 0.02 && settled == 100,
          fmt("mean l/n = %.5f, |mean - L_hat| = %.5f (<= 0.02), loxodromic after onset in %zu/100 paths", ratio.mean(), gap, settled)};
}

Verdict sublinear_tracking() {
  // Basepoint a: from the identity the simple walk sits on its own limit
  // ray so often that both medians are exactly zero.
  const Model tree = TreeModel{2, W("a")};
  const auto mu = StepDistribution::uniform_nearest_neighbor(2);
  const auto rows = parallel_map(100, jobs, [&](std::size_t i) {
    const auto path = sample_path(mu, 20000, 105, i);
    const auto xi = boundary_estimate(path, tree);
    return std::pair{tracking_stat(path, 1000, tree, xi), tracking_stat(path, 10000, tree, xi)};
  });
  std::vector<double> small, large;
  for (const auto& [s, l] : rows) small.push_back(s), large.push_back(l);
  const double ms = median(small), ml = median(large);
  return {ml <= 0.02 && ml < ms, fmt("median at n = 1e4: %.5f (<= 0.02), at n = 1e3: %.5f (must be larger)", ml, ms)};
}

Verdict axis_fellow_travel() {
  const Model tree = TreeModel{2, W("1")};
  const auto mu = StepDistribution::uniform_nearest_neighbor(2);
  const auto rows = parallel_map(100, jobs, [&](std::size_t i) {
    const auto path = sample_path(mu, 20000, 106, i);
    try {
      return axis_tracking_check(path, 10000, tree, boundary_estimate(path, tree), 0.1, 2.0, drift_hat).pass;
    } catch (const NotLoxodromic&) {
      return false;
    }
  });
  const auto passes = std::count(rows.begin(), rows.end(), true);
  return {passes >= 95, fmt("%ld/100 paths within c = 2 of the axis (>= 95)", static_cast<long>(passes))};
}

Verdict equidistribution_tree() {
  const auto mu = biased();
  const auto kernel = harmonic_kernel(first_passage_solve(mu, 2), mu);
  std::string gates;
  bool validated = true;
  try {
    const auto v = validate_kernel(kernel, harmonic_cylinder_mc(mu, 2, 3, 100000, 107, jobs), mu);
    gates = fmt("kernel gates: worst %.2f s.e., stationarity %.1e", v.worst_sigma, v.stationarity);
    const auto prediction = markov_flow_prediction(kernel, 2);
    const auto oracle = ray_oracle_tree(boundary_estimate(sample_path(mu, 100000, 108, 0), TreeModel{2, W("1")}).prefix, 2, 2);
    gates += fmt("; ray-oracle gate: worst %.2f s.e.", validate_flow_prediction(prediction, oracle));
  } catch (const ValidationFailed& e) {
    validated = false;
    gates = e.what();
  }
  const auto prediction = markov_flow_prediction(kernel, 2);
  const auto rows = parallel_map(20, jobs, [&](std::size_t i) {
    const auto path = sample_path(mu, 100000, 109, i);
    return std::pair{tv_distance(loxo_occupation_tree(path.prefix(1000), 2, 2).tree(), prediction),
                     tv_distance(loxo_occupation_tree(path.prefix(100000), 2, 2).tree(), prediction)};
  });
  Moments late;
  int improved = 0;
  for (const auto& [early, l] : rows) late.add(l), improved += l < early;
  return {validated && late.mean() <= 0.03 && improved >= 18,
          fmt("mean TV at n = 1e5: %.5f (<= 0.03), larger at n = 1e3 in %d/20 (>= 18); ", late.mean(), improved) + gates};
}

Verdict equidistribution_plane() {
  const ExperimentConfig config = parse_config(R"(
[model]
kind = halfplane
basepoint = 0 1
[generators]
a = 3 0 0 1/3         | inside 0 1/3     | outside 0 3
b = 5/3 -4/3 -4/3 5/3 | inside 1.25 0.75 | inside -1.25 0.75
[mu]
uniform = yes
[walk]
steps = 2000
paths = 100
seed = 110
[analysis]
measure_paths = 20
tv_gate = 0.1
overflow_gate = 0.05
slack_sigmas = 3
radius = 1
)");
  const auto report = run("equidistribute", config, jobs);
  const auto& tv = report.estimates.at("equidistribute.tv_median");
  const auto& overflow = report.estimates.at("equidistribute.overflow");
  const auto& sandwich = report.estimates.at("equidistribute.sandwich_margin");
  return {tv.pass && overflow.pass && sandwich.pass,
          fmt("median TV = %.4f (<= 0.1), overflow = %.4f (<= 0.05), sandwich worst margin = %.4f (>= 0)", tv.value,
              overflow.value, sandwich.value)};
}

Verdict exact_geometry() {
  std::mt19937_64 rng(111);
  std::uniform_real_distribution<double> ux(-3, 3), uy(0.1, 3);
  std::vector<std::string> failed;
  std::string detail;
  auto check = [&](const std::string& name, bool ok) {
    if (!ok) failed.push_back(name);
  };

  bool ok = true;
  for (int i = 0; i < 1000; ++i) {
    const auto u = random_word(rng, 2, 12), v = random_word(rng, 2, 12), w = random_word(rng, 2, 12);
    ok = ok && tree_distance(u, v) == tree_distance(v, u) && tree_distance(u, u) == 0 &&
         (u == v || tree_distance(u, v) > 0) && tree_distance(u, w) <= tree_distance(u, v) + tree_distance(v, w);
    const HPoint z{ux(rng), uy(rng)}, y{ux(rng), uy(rng)}, x{ux(rng), uy(rng)};
    ok = ok && std::abs(hyp_distance(z, y) - hyp_distance(y, z)) <= 1e-12 && hyp_distance(z, z) == 0.0 &&
         hyp_distance(z, x) <= hyp_distance(z, y) + hyp_distance(y, x) + 1e-12;
  }
  check("metric axioms", ok);

  const auto group = schottky_pair();
  ok = true;
  for (int i = 0; i < 500; ++i) {
    const auto g = random_word(rng, 2, 6), h = random_word(rng, 2, 4);
    const auto conj = h * g * h.inverse();
    ok = ok && translation_length_tree(conj) == translation_length_tree(g) &&
         translation_length_tree(g * g * g) == 3 * translation_length_tree(g);
    const double lg = translation_length_h(group->evaluate(g));
    ok = ok && std::abs(translation_length_h(group->evaluate(conj)) - lg) <= 1e-9 * std::max(1.0, lg) &&
         std::abs(translation_length_h(group->evaluate(g * g)) - 2 * lg) <= 1e-9 * std::max(1.0, lg);
  }
  check("conjugation and power laws", ok);

  // Products of up to 1000 generators, determinant renormalized after each
  // multiplication, acting on 1000 random pairs per product length.
  const MobiusMap gens[4] = {group->matrix(W("a")[0]), group->matrix(W("A")[0]), group->matrix(W("b")[0]),
                             group->matrix(W("B")[0])};
  std::size_t longest_ok = 0;
  double worst_at_1000 = 0.0;
  bool invariance = true;
  for (std::size_t len : {1, 2, 4, 8, 16, 32, 64, 128, 256, 512, 1000}) {
    double worst = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
      double a = 1, b = 0, c = 0, d = 1;
      for (std::size_t i = 0; i < len; ++i) {
        const MobiusMap& m = gens[rng() % 4];
        const double na = a * m.a() + b * m.c(), nb = a * m.b() + b * m.d();
        const double nc = c * m.a() + d * m.c(), nd = c * m.b() + d * m.d();
        const double s = std::sqrt(na * nd - nb * nc);
        a = na / s, b = nb / s, c = nc / s, d = nd / s;
      }
      auto act = [&](const HPoint& z) {
        const std::complex<double> w = (a * z.z() + b) / (c * z.z() + d);
        return HPoint::from(w);
      };
      for (int p = 0; p < 100; ++p) {
        const HPoint z{ux(rng), uy(rng)}, y{ux(rng), uy(rng)};
        const double e = std::abs(hyp_distance(act(z), act(y)) - hyp_distance(z, y));
        worst = std::isfinite(e) ? std::max(worst, e) : INFINITY;
      }
    }
    if (worst <= 1e-9 && longest_ok + 1 >= len / 2) longest_ok = len;
    if (len == 1000) worst_at_1000 = worst;
    invariance = invariance && worst <= 1e-9;
  }
  check("isometry invariance", invariance);
  detail += fmt("isometry invariance holds to 1e-9 up to %zu-fold products, error at 1000-fold: %g; ", longest_ok, worst_at_1000);

  ok = true;
  for (int i = 0; i < 300; ++i) {
    const auto g = random_word(rng, 2, 6), h = random_word(rng, 2, 4);
    if (cyclic_reduce(g).core.empty()) continue;
    const auto conj = h * g * h.inverse();
    const TreeAxis ax = axis_tree(g), cx = axis_tree(conj);
    for (long t = -5; t <= 5; ++t) ok = ok && cx.distance_to(h * ax.vertex(t)) == 0;
    const MobiusMap gm = group->evaluate(g), hm = group->evaluate(h);
    const GeodesicH before = axis_h(gm), after = axis_h(hm * gm * hm.inverse());
    ok = ok && boundary_distance(after.from, hm.apply(before.from)) <= 1e-9 &&
         boundary_distance(after.to, hm.apply(before.to)) <= 1e-9;
  }
  check("axis equivariance", ok);

  ok = true;
  const Chart chart;
  for (int i = 0; i < 100; ++i) {
    const auto g = random_word(rng, 2, 10), h = random_word(rng, 2, 5);
    if (cyclic_reduce(g).core.size() < 2) continue;
    const auto conj = h * g * h.inverse();
    ok = ok && loxo_occupation_tree(g, 2, 2).tree().masses == loxo_occupation_tree(conj, 2, 2).tree().masses;
    if (i % 5 == 0) {
      ok = ok && loxo_occupation_h2(g, *group, chart).binned().masses == loxo_occupation_h2(conj, *group, chart).binned().masses &&
           loxo_occupation_h2(g, *group, chart).binned().masses == loxo_occupation_h2(g * g, *group, chart).binned().masses;
    }
  }
  check("closed-geodesic conjugation invariance", ok);

  double shift = 0.0;
  for (const auto& mu : {StepDistribution::uniform_nearest_neighbor(2), biased()}) {
    const auto q = harmonic_kernel(first_passage_solve(mu, 2), mu);
    for (std::size_t D = 1; D <= 4; ++D) shift = std::max(shift, markov_flow_prediction(q, D).shift_residual());
  }
  check("Markov shift consistency", shift <= 1e-12);
  detail += fmt("Markov shift residual %.1e", shift);

  std::string names;
  for (const auto& f : failed) names += (names.empty() ? "" : ", ") + f;
  return {failed.empty(), (failed.empty() ? std::string("all identities hold; ") : "failing: " + names + "; ") + detail};
}

Verdict reproducibility() {
  const fs::path out = fs::temp_directory_path() / "hyperwalk_acceptance_repro";
  fs::remove_all(out);
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
  };
  std::string detail;
  bool ok = true;
  for (const char* name : {"uniform_f2", "schottky_pair"}) {
    const std::string config = std::string(HYPERWALK_CONFIG_DIR) + "/" + name + ".conf";
    std::vector<std::string> docs;
    for (const auto& [tag, j] : {std::pair{"run1", 1}, std::pair{"run2", 1}, std::pair{"jobs8", 8}}) {
      const fs::path dir = out / name / tag;
      const std::string cmd = std::string("SOURCE_DATE_EPOCH=0 ") + HYPERWALK_CLI + " all --config " + config +
                              " --jobs " + std::to_string(j) + " --out " + dir.string() + " > /dev/null 2>&1";
      const int status = std::system(cmd.c_str());
      if (!WIFEXITED(status) || WEXITSTATUS(status) > 1) ok = false;
      docs.push_back(slurp(dir / "report.json"));
    }
    const bool same = !docs[0].empty() && docs[0] == docs[1] && docs[0] == docs[2];
    ok = ok && same;
    detail += fmt("%s: %s (%zu bytes); ", name, same ? "identical" : "DIFFERENT", docs[0].size());
  }
  return {ok, detail + "two runs at --jobs 1 and one at --jobs 8"};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) jobs = static_cast<unsigned>(std::max(1, std::atoi(argv[1])));
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"drift oracle", drift_oracle},
      {"first-passage closed form", first_passage_closed_form},
      {"harmonic measure", harmonic_measure},
      {"translation-length law", length_law},
      {"sublinear tracking", sublinear_tracking},
      {"axis fellow-traveling", axis_fellow_travel},
      {"equidistribution, tree", equidistribution_tree},
      {"equidistribution, half-plane", equidistribution_plane},
      {"exact geometry", exact_geometry},
      {"reproducibility", reproducibility},
  };
  int passed = 0, index = 0;
  for (const auto& [name, fn] : criteria) {
    ++index;
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = fn();
    } catch (const std::exception& e) {
      v = {false, std::string("raised ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    passed += v.pass;
    std::printf("%s  %2d  %-26s %s [%.1fs]\n", v.pass ? "PASS" : "FAIL", index, name.c_str(), v.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("criteria evaluated: %d, passed: %d, failed: %d\n", index, passed, index - passed);
  return passed == index ? 0 : 1;
}
