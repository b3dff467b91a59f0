#include "hyperwalk/runner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include "hyperwalk/equidistribution.hpp"
#include "hyperwalk/errors.hpp"
#include "hyperwalk/estimators.hpp"
#include "hyperwalk/harmonic.hpp"
#include "hyperwalk/parallel.hpp"
#include "hyperwalk/stats.hpp"
#include "hyperwalk/symbolic.hpp"

namespace hyperwalk {

using nlohmann::json;

namespace {

constexpr double kInfinity = std::numeric_limits<double>::infinity();
// Stand-in for an unbounded ratio, so that reports stay valid JSON.
constexpr double kHuge = 1e300;

// Independent path families per suite, so suites can run alone or together
// and still see the same data.
enum Stream : std::uint64_t { kDrift = 0, kTrack = 1, kLength = 2, kAxis = 3, kEquidistribution = 4, kOracle = 5 };

std::uint64_t stream_index(Stream s, std::size_t i) { return (static_cast<std::uint64_t>(s) << 40) + i; }

double ratio(double num, double den) {
  if (den > 0.0) return num / den;
  return num == 0.0 ? 0.0 : kHuge;
}

json disk_json(const BoundaryDisk& d) { return d.str(); }

std::string bin_key(const Chart& chart, std::size_t bin) {
  if (bin == chart.bins()) return "overflow";
  const auto [ix, iy, ia] = chart.coordinates(bin);
  return std::to_string(ix) + ":" + std::to_string(iy) + ":" + std::to_string(ia);
}

MeasureTable table_of(const std::string& name, const TreeFlowMeasure& m) {
  MeasureTable t{name, "windows", "depth " + std::to_string(m.depth), {}};
  for (const ReducedWord& w : reduced_words(m.k, m.depth)) t.entries.emplace_back(w.str(), m.mass(w));
  return t;
}

MeasureTable table_of(const std::string& name, const CylinderMeasure& m) {
  MeasureTable t{name, "cylinders", "depth " + std::to_string(m.depth), {}};
  for (const ReducedWord& w : reduced_words(m.k, m.depth)) t.entries.emplace_back(w.str(), m.mass(w));
  return t;
}

MeasureTable table_of(const std::string& name, const BinnedMeasure& m) {
  MeasureTable t{name, "bins", m.chart.str(), {}};
  for (std::size_t b = 0; b < m.masses.size(); ++b) {
    if (m.masses[b] != 0.0) t.entries.emplace_back(bin_key(m.chart, b), m.masses[b]);
  }
  t.entries.emplace_back("overflow", m.overflow);
  return t;
}

std::vector<std::size_t> log_scales(std::size_t lo, std::size_t hi) {
  std::vector<std::size_t> out;
  for (std::size_t m = std::max<std::size_t>(lo, 1); m < hi; m *= 2) out.push_back(m);
  out.push_back(hi);
  return out;
}

class Runner {
 public:
  Runner(const ExperimentConfig& config, unsigned jobs)
      : config_(config), model_(make_model(config)), mu_(make_step_distribution(config)), jobs_(std::max(1u, jobs)) {}

  ExperimentReport run(const std::string& sub) {
    report_.config = config_to_json(config_);
    report_.model = model_json();
    report_.provenance = {config_.seed, kVersion, wall_clock_now()};
    if (sub == "all") {
      for (const auto& s : subcommands()) {
        if (s != "all") dispatch(s);
      }
    } else {
      dispatch(sub);
    }
    return std::move(report_);
  }

 private:
  void dispatch(const std::string& sub) {
    if (sub == "certify") return certify();
    if (sub == "drift") return drift();
    if (sub == "track") return track();
    if (sub == "length-law") return length_law();
    if (sub == "axis-check") return axis_check();
    if (sub == "harmonic") return harmonic();
    if (sub == "equidistribute") return equidistribute();
    throw InvalidArgument("unknown subcommand '" + sub + "'");
  }

  const AnalysisConfig& A() const { return config_.analysis; }
  bool tree() const { return is_tree(model_); }
  const HalfplaneModel& plane() const { return std::get<HalfplaneModel>(model_); }

  SamplePath path(Stream s, std::size_t i, std::size_t n) const {
    return sample_path(mu_, n, config_.seed, stream_index(s, i));
  }

  void put(const std::string& name, const Estimate& e) { report_.estimates[name] = e; }
  void note(std::string s) { report_.notes.push_back(std::move(s)); }

  json model_json() const {
    json j{{"kind", config_.kind}, {"rank", config_.rank}, {"step_distribution", mu_.str()}};
    if (tree()) {
      j["basepoint"] = config_.tree_basepoint;
    } else {
      j["basepoint"] = {config_.plane_basepoint.x, config_.plane_basepoint.y};
      json gens = json::array();
      for (const auto& g : plane().group->generators()) {
        gens.push_back({{"matrix", g.map.str()}, {"repelling", disk_json(g.repelling)}, {"attracting", disk_json(g.attracting)}});
      }
      j["generators"] = gens;
      j["certification_notes"] = plane().group->certification().notes;
    }
    return j;
  }

  // Drift estimate shared by the suites that need L.
  const DriftEstimate& drift_value() {
    if (!drift_) drift_ = drift_estimate_on_stream();
    return *drift_;
  }

  DriftEstimate drift_estimate_on_stream() {
    const auto values = parallel_map(config_.paths, jobs_, [&](std::size_t i) {
      return drift_sample(model_, path(kDrift, i, config_.steps), config_.steps);
    });
    Moments m;
    for (double v : values) m.add(v);
    return {m.mean(), m.std_error(), config_.steps, config_.paths};
  }

  void certify() {
    const SchottkyGroup* group = tree() ? nullptr : plane().group.get();
    if (group) {
      put("certify.schottky", gated(group->certification().certified ? 1.0 : 0.0, 0.0, ">=", 1.0));
      for (const auto& n : group->certification().notes) note("certify: " + n);
    } else {
      note("certify: tree model, free group of rank " + std::to_string(config_.rank) + " on its Cayley tree");
    }
    const auto g = generation_check(mu_, A().generation_radius, config_.rank, group);
    note(std::string("certify: support ") + (g.generates ? "generates" : "does not generate") + " the group; " +
         (g.nonelementary ? "nonelementary, witnesses " + g.witness_first + " and " + g.witness_second
                          : "no pair of independent loxodromics found"));
    for (const auto& w : g.warnings) note("certify: " + w);
  }

  void drift() {
    const DriftEstimate& d = drift_value();
    put("drift.L_hat", gated(d.value, d.std_error, ">", 0.0));
    if (A().drift_oracle) {
      put("drift.oracle_gap", gated(std::abs(d.value - *A().drift_oracle), d.std_error, "<=", A().drift_tolerance));
    }
    const std::size_t shown = std::min<std::size_t>(config_.paths, 20);
    const auto scales = log_scales(16, config_.steps);
    const auto rows = parallel_map(shown, jobs_, [&](std::size_t i) {
      const SamplePath p = path(kDrift, i, config_.steps);
      std::vector<std::pair<double, double>> out;
      for (std::size_t m : scales) {
        out.emplace_back(drift_sample(model_, p, m), translation_length(model_, p.prefix(m)) / static_cast<double>(m));
      }
      return out;
    });
    Series disp{"drift_convergence", "n", "mean d(x, w_n x) / n", {}};
    Series len{"length_convergence", "n", "mean l(w_n) / n", {}};
    for (std::size_t j = 0; j < scales.size(); ++j) {
      double a = 0.0, b = 0.0;
      for (const auto& r : rows) a += r[j].first, b += r[j].second;
      disp.points.emplace_back(static_cast<double>(scales[j]), a / static_cast<double>(shown));
      len.points.emplace_back(static_cast<double>(scales[j]), b / static_cast<double>(shown));
    }
    report_.series.push_back(std::move(disp));
    report_.series.push_back(std::move(len));
  }

  void track() {
    const std::size_t n = config_.steps, small = std::min(A().small_n, n);
    struct Row {
      bool ok = false;
      double large = 0.0, small = 0.0;
    };
    const auto rows = parallel_map(config_.paths, jobs_, [&](std::size_t i) {
      Row r;
      try {
        const SamplePath p = path(kTrack, i, 2 * n);
        const BoundaryEstimate xi = boundary_estimate(p, model_);
        r.large = tracking_stat(p, n, model_, xi);
        r.small = tracking_stat(p, small, model_, xi);
        r.ok = true;
      } catch (const Unstable&) {
      } catch (const PrefixTooShallow&) {
      }
      return r;
    });
    std::vector<double> large, smaller;
    for (const Row& r : rows) {
      if (!r.ok) continue;
      large.push_back(r.large);
      smaller.push_back(r.small);
    }
    if (large.size() < rows.size()) {
      note("track: " + std::to_string(rows.size() - large.size()) + " paths without a stable limit point skipped");
    }
    if (large.empty()) throw Unstable("no path produced a stable limit point");
    const double at_n = median(large), at_small = median(smaller);
    put("track.median", gated(at_n, 0.0, "<=", A().tracking_gate));
    put("track.decrease", gated(at_n - at_small, 0.0, "<=", 0.0));
    note("track: median tracking " + std::to_string(at_small) + " at n = " + std::to_string(small) + ", " +
         std::to_string(at_n) + " at n = " + std::to_string(n));
  }

  void length_law() {
    const std::size_t n = config_.steps;
    struct Row {
      LengthLawSample law;
      double drift = 0.0;
    };
    const auto rows = parallel_map(config_.paths, jobs_, [&](std::size_t i) {
      const SamplePath p = path(kLength, i, n);
      return Row{length_law_stat(p, n, model_), drift_sample(model_, p, n)};
    });
    Moments law, drift;
    std::size_t settled = 0;
    for (const Row& r : rows) {
      law.add(r.law.ratio);
      drift.add(r.drift);
      settled += r.law.never_lost && r.law.onset <= n;
    }
    const double joint = std::hypot(law.std_error(), drift.std_error());
    const double gap = std::abs(law.mean() - drift.mean());
    put("length_law.gap", gated(gap, joint, "<=", A().length_tolerance));
    put("length_law.joint_sigmas", gated(ratio(gap, joint), 0.0, "<=", 3.0));
    put("length_law.onset_fraction",
        gated(static_cast<double>(settled) / static_cast<double>(rows.size()), 0.0, ">=", 1.0));
  }

  void axis_check() {
    const std::size_t n = config_.steps;
    const double L = drift_value().value;
    struct Row {
      bool pass = false;
      double offset = kHuge;
      std::string failure;
    };
    const auto rows = parallel_map(config_.paths, jobs_, [&](std::size_t i) {
      Row r;
      try {
        const SamplePath p = path(kAxis, i, 2 * n);
        const AxisCheck ax = axis_tracking_check(p, n, model_, boundary_estimate(p, model_), A().eps, A().c, L);
        r.pass = ax.pass;
        r.offset = ax.worst_offset;
      } catch (const Error& e) {
        r.failure = e.kind();
      }
      return r;
    });
    std::size_t passes = 0;
    std::vector<double> offsets;
    std::map<std::string, std::size_t> failures;
    for (const Row& r : rows) {
      passes += r.pass;
      offsets.push_back(r.offset);
      if (!r.failure.empty()) ++failures[r.failure];
    }
    for (const auto& [kind, count] : failures) note("axis-check: " + std::to_string(count) + " paths failed with " + kind);
    put("axis.pass_fraction", gated(static_cast<double>(passes) / static_cast<double>(rows.size()), 0.0, ">=", A().axis_fraction));
    put("axis.median_offset", gated(median(offsets), 0.0, "<=", A().c));
  }

  std::optional<HarmonicKernel> kernel() {
    if (!mu_.nearest_neighbor()) return std::nullopt;
    if (!kernel_) kernel_ = harmonic_kernel(first_passage_solve(mu_, config_.rank), mu_);
    return kernel_;
  }

  void harmonic() {
    const int k = config_.rank;
    const std::size_t depth = std::max<std::size_t>(A().depth, 3);
    const CylinderMeasure empirical = harmonic_cylinder_mc(mu_, k, depth, A().samples, config_.seed, jobs_);
    report_.measures.push_back(table_of("harmonic_mc", empirical));
    if (!mu_.nearest_neighbor()) {
      note("harmonic: steps are not single letters; exact first-passage solution unavailable, Monte Carlo only");
      return;
    }
    const FirstPassageVector F = first_passage_solve(mu_, k);
    put("harmonic.first_passage_residual", gated(F.residual, 0.0, "<=", 1e-12));
    const FirstPassageSample mc = first_passage_mc(mu_, k, A().first_passage_paths, config_.seed, jobs_);
    double worst = 0.0;
    for (std::size_t i = 0; i < F.F.size(); ++i) worst = std::max(worst, ratio(std::abs(mc.frequency[i] - F.F[i]), mc.std_error[i]));
    put("harmonic.first_passage_sigmas", gated(worst, 0.0, "<=", 3.0));

    const HarmonicKernel q = *kernel();
    const KernelValidation v = validate_kernel(q, empirical, mu_, kInfinity, kInfinity);
    put("harmonic.kernel_sigmas", gated(v.worst_sigma, 0.0, "<=", 3.0));
    put("harmonic.kernel_stationarity", gated(v.stationarity, 0.0, "<=", 1e-12));
    report_.measures.push_back(table_of("harmonic_kernel", q.predict(depth)));

    CylinderMeasure two = empirical;
    two.depth = 2;
    std::erase_if(two.masses, [](const auto& kv) { return kv.first.size() > 2; });
    const StationarityResult s = stationarity_residual(two, mu_);
    put("harmonic.mc_stationarity", gated(s.residual, s.std_error_at_worst, "<=", 2.0 * s.std_error_at_worst));
  }

  void equidistribute() { tree() ? equidistribute_tree() : equidistribute_plane(); }

  void equidistribute_tree() {
    const int k = config_.rank;
    const std::size_t D = A().depth, n = config_.steps, small = std::min(A().small_n, n);
    const TreeFlowMeasure oracle =
        ray_oracle_tree(boundary_estimate(path(kOracle, 0, n), model_).prefix, k, D);
    report_.measures.push_back(table_of("ray_windows", oracle));

    TreeFlowMeasure reference = oracle;
    if (const auto q = kernel()) {
      reference = markov_flow_prediction(*q, D);
      report_.measures.push_back(table_of("markov_prediction", reference));
      put("equidistribute.prediction_shift", gated(reference.shift_residual(), 0.0, "<=", 1e-12));
      put("equidistribute.prediction_sigmas", gated(validate_flow_prediction(reference, oracle, kInfinity), 0.0, "<=", 3.0));
    } else {
      note("equidistribute: no Markov prediction for this step distribution; comparing with the ray oracle");
    }

    const auto scales = log_scales(small, n);
    const auto rows = parallel_map(A().measure_paths, jobs_, [&](std::size_t i) {
      const SamplePath p = path(kEquidistribution, i, n);
      std::vector<double> tv;
      for (std::size_t m : scales) {
        try {
          tv.push_back(tv_distance(loxo_occupation_tree(p.prefix(m), k, D).tree(), reference));
        } catch (const TooShort&) {
          tv.push_back(1.0);
        }
      }
      return tv;
    });
    Moments late;
    std::size_t improved = 0;
    Series curve{"tv_convergence", "n", "mean TV to the reference", {}};
    for (std::size_t j = 0; j < scales.size(); ++j) {
      double sum = 0.0;
      for (const auto& r : rows) sum += r[j];
      curve.points.emplace_back(static_cast<double>(scales[j]), sum / static_cast<double>(rows.size()));
    }
    for (const auto& r : rows) {
      late.add(r.back());
      improved += r.back() < r.front();
    }
    report_.series.push_back(std::move(curve));
    put("equidistribute.tv_mean", gated(late.mean(), late.std_error(), "<=", A().tv_gate));
    put("equidistribute.improved_fraction",
        gated(static_cast<double>(improved) / static_cast<double>(rows.size()), 0.0, ">=", A().improve_fraction));

    const TreeFlowMeasure loxo = loxo_occupation_tree(path(kEquidistribution, 0, n).prefix(n), k, D).tree();
    report_.measures.push_back(table_of("loxo_windows", loxo));
    put("equidistribute.loxo_shift", gated(loxo.shift_residual(), 0.0, "<=", 1e-12));
    std::vector<CylinderSet> family;
    std::vector<double> slack;
    for (const ReducedWord& w : reduced_words(k, D)) {
      family.push_back({w});
      slack.push_back(A().slack_sigmas * std::hypot(oracle.std_error(w), loxo.std_error(w)));
    }
    const SandwichResult s = portmanteau_sandwich(loxo, oracle, A().radius, family, slack);
    put("equidistribute.sandwich_margin", gated(s.worst_margin, 0.0, ">=", 0.0));
  }

  void equidistribute_plane() {
    const HalfplaneModel& h = plane();
    const Chart& chart = A().chart;
    const std::size_t n = config_.steps, small = std::min(A().small_n, n);
    const double L = drift_value().value;
    const auto scales = log_scales(small, n);
    struct Row {
      std::vector<double> tv;
      double overflow = 0.0;
      BinnedMeasure loxo, ray;
    };
    const auto rows = parallel_map(A().measure_paths, jobs_, [&](std::size_t i) {
      Row r;
      const SamplePath p = path(kEquidistribution, 2 * i, n), q = path(kEquidistribution, 2 * i + 1, n);
      const BoundaryEstimate xi = boundary_estimate(q, model_);
      const double horizon = std::min(SymbolicRay(h.group, h.basepoint, xi.prefix.letters).available_length(),
                                      L * static_cast<double>(n));
      r.ray = ray_oracle_h2(q, h, horizon, chart, A().step);
      r.overflow = r.ray.overflow;
      for (std::size_t m : scales) {
        r.loxo = loxo_occupation_h2(p.prefix(m), *h.group, chart, A().step).binned();
        r.tv.push_back(tv_distance(r.loxo, r.ray));
        r.overflow = std::max(r.overflow, r.loxo.overflow);
      }
      return r;
    });
    std::vector<double> late;
    double overflow = 0.0;
    Series curve{"tv_convergence", "n", "median TV to an independent ray", {}};
    for (std::size_t j = 0; j < scales.size(); ++j) {
      std::vector<double> col;
      for (const auto& r : rows) col.push_back(r.tv[j]);
      curve.points.emplace_back(static_cast<double>(scales[j]), median(col));
    }
    for (const auto& r : rows) {
      late.push_back(r.tv.back());
      overflow = std::max(overflow, r.overflow);
    }
    report_.series.push_back(std::move(curve));
    put("equidistribute.tv_median", gated(median(late), 0.0, "<=", A().tv_gate));
    put("equidistribute.overflow", gated(overflow, 0.0, "<=", A().overflow_gate));

    const BinnedMeasure& loxo = rows.front().loxo;
    const BinnedMeasure& ray = rows.front().ray;
    report_.measures.push_back(table_of("loxo_bins", loxo));
    report_.measures.push_back(table_of("ray_bins", ray));
    const auto family = sliding_windows(chart, 3);
    std::vector<double> slack;
    for (const BinSet& set : family) {
      double var = 0.0;
      for (std::size_t b : set) var += ray.std_errors[b] * ray.std_errors[b] + loxo.std_errors[b] * loxo.std_errors[b];
      slack.push_back(A().slack_sigmas * std::sqrt(var));
    }
    const SandwichResult s = portmanteau_sandwich(loxo, ray, A().radius, family, slack);
    put("equidistribute.sandwich_margin", gated(s.worst_margin, 0.0, ">=", 0.0));
  }

  const ExperimentConfig& config_;
  Model model_;
  StepDistribution mu_;
  unsigned jobs_;
  ExperimentReport report_;
  std::optional<DriftEstimate> drift_;
  std::optional<HarmonicKernel> kernel_;
};

}  // namespace

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names = {"certify",   "drift",    "track",          "length-law",
                                                 "axis-check", "harmonic", "equidistribute", "all"};
  return names;
}

ExperimentReport run(const std::string& subcommand, const ExperimentConfig& config, unsigned jobs) {
  if (std::find(subcommands().begin(), subcommands().end(), subcommand) == subcommands().end()) {
    throw InvalidArgument("unknown subcommand '" + subcommand + "'");
  }
  return Runner(config, jobs).run(subcommand);
}

json config_to_json(const ExperimentConfig& c) {
  const AnalysisConfig& a = c.analysis;
  json mu = json::array();
  for (const auto& [w, p] : c.mu) mu.push_back({w, p});
  json gens = json::array();
  for (const auto& g : c.generators) {
    gens.push_back({{"matrix", g.matrix}, {"repelling", g.repelling.str()}, {"attracting", g.attracting.str()}});
  }
  json analysis = {{"depth", a.depth},
                   {"small_steps", a.small_n},
                   {"eps", a.eps},
                   {"c", a.c},
                   {"axis_fraction", a.axis_fraction},
                   {"tracking_gate", a.tracking_gate},
                   {"length_tolerance", a.length_tolerance},
                   {"drift_tolerance", a.drift_tolerance},
                   {"samples", a.samples},
                   {"first_passage_paths", a.first_passage_paths},
                   {"measure_paths", a.measure_paths},
                   {"tv_gate", a.tv_gate},
                   {"improve_fraction", a.improve_fraction},
                   {"overflow_gate", a.overflow_gate},
                   {"radius", a.radius},
                   {"slack_sigmas", a.slack_sigmas},
                   {"step", a.step},
                   {"generation_radius", a.generation_radius},
                   {"chart", a.chart.str()}};
  if (a.drift_oracle) analysis["drift_oracle"] = *a.drift_oracle;
  json out = {{"kind", c.kind}, {"rank", c.rank}, {"uniform", c.uniform}, {"mu", mu},
              {"steps", c.steps}, {"paths", c.paths}, {"seed", c.seed}, {"analysis", analysis}};
  if (c.kind == "tree") {
    out["basepoint"] = c.tree_basepoint;
  } else {
    out["basepoint"] = {c.plane_basepoint.x, c.plane_basepoint.y};
    out["generators"] = gens;
  }
  return out;
}

}  // namespace hyperwalk
