#include "hyperwalk/equidistribution.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include "hyperwalk/errors.hpp"
#include "hyperwalk/estimators.hpp"
#include "hyperwalk/stats.hpp"
#include "hyperwalk/symbolic.hpp"

namespace hyperwalk {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr std::size_t kBatches = 20;

// Bins a sequence of samples and attaches batch-means standard errors.
class BinAccumulator {
 public:
  BinAccumulator(const Chart& chart, std::size_t expected)
      : chart_(chart), expected_(std::max<std::size_t>(expected, 1)),
        batches_(kBatches, std::vector<double>(chart.bins() + 1, 0.0)), batch_size_(kBatches, 0) {}

  void add(const TangentH& v) {
    const std::size_t batch = std::min(kBatches - 1, count_ * kBatches / expected_);
    batches_[batch][chart_.locate(v)] += 1.0;
    ++batch_size_[batch];
    ++count_;
  }

  BinnedMeasure finish() const {
    BinnedMeasure out;
    out.chart = chart_;
    out.samples = count_;
    const std::size_t n = chart_.bins() + 1;
    std::vector<double> total(n, 0.0);
    for (const auto& b : batches_) {
      for (std::size_t i = 0; i < n; ++i) total[i] += b[i];
    }
    out.masses.assign(chart_.bins(), 0.0);
    out.std_errors.assign(chart_.bins(), 0.0);
    for (std::size_t i = 0; i < chart_.bins(); ++i) out.masses[i] = total[i] / static_cast<double>(count_);
    out.overflow = total[chart_.bins()] / static_cast<double>(count_);
    for (std::size_t i = 0; i < chart_.bins(); ++i) {
      Moments m;
      for (std::size_t b = 0; b < kBatches; ++b) {
        if (batch_size_[b] > 0) m.add(batches_[b][i] / static_cast<double>(batch_size_[b]));
      }
      out.std_errors[i] = m.std_error();
    }
    return out;
  }

 private:
  Chart chart_;
  std::size_t expected_;
  std::vector<std::vector<double>> batches_;
  std::vector<std::size_t> batch_size_;
  std::size_t count_ = 0;
};

void check_step(double step) {
  if (!(step > 0.0 && step <= 0.05)) throw InvalidArgument("arclength step must lie in (0, 0.05]");
}

double wrap_angle(double a) {
  a = std::fmod(a, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  return a;
}

}  // namespace

double TreeFlowMeasure::mass(const ReducedWord& w) const {
  const auto it = masses.find(w);
  return it == masses.end() ? 0.0 : it->second;
}

double TreeFlowMeasure::std_error(const ReducedWord& w) const {
  const auto it = std_errors.find(w);
  return it == std_errors.end() ? 0.0 : it->second;
}

double TreeFlowMeasure::total() const {
  double t = 0.0;
  for (const auto& [w, m] : masses) t += m;
  return t;
}

double TreeFlowMeasure::shift_residual() const {
  if (depth < 2) return 0.0;
  std::map<ReducedWord, double> left, right;
  for (const auto& [w, m] : masses) {
    left[ReducedWord(w.letters().subspan(1))] += m;
    right[w.prefix(depth - 1)] += m;
  }
  double worst = 0.0;
  for (const ReducedWord& v : reduced_words(k, depth - 1)) {
    worst = std::max(worst, std::abs(left[v] - right[v]));
  }
  return worst;
}

std::size_t Chart::locate(const TangentH& v) const {
  const double x = v.point.x, y = v.point.y;
  if (!(x >= x_min && x < x_max && y > y_min && y <= y_max)) return bins();
  const int ix = std::clamp(static_cast<int>((x - x_min) / (x_max - x_min) * nx), 0, nx - 1);
  const double ly = std::log(y / y_min) / std::log(y_max / y_min);
  const int iy = std::clamp(static_cast<int>(std::ceil(ly * ny)) - 1, 0, ny - 1);
  const int ia = std::clamp(static_cast<int>(wrap_angle(v.angle) / kTwoPi * na), 0, na - 1);
  return index(ix, iy, ia);
}

std::array<int, 3> Chart::coordinates(std::size_t bin) const {
  const int ia = static_cast<int>(bin % static_cast<std::size_t>(na));
  const std::size_t rest = bin / static_cast<std::size_t>(na);
  return {static_cast<int>(rest / static_cast<std::size_t>(ny)), static_cast<int>(rest % static_cast<std::size_t>(ny)), ia};
}

std::string Chart::str() const {
  std::ostringstream s;
  s << "x[" << x_min << "," << x_max << "]/" << nx << " logy(" << y_min << "," << y_max << "]/" << ny
    << " angle/" << na;
  return s.str();
}

double BinnedMeasure::total() const {
  double t = overflow;
  for (double m : masses) t += m;
  return t;
}

ClosedGeodesicMeasure loxo_occupation_tree(const ReducedWord& g, int k, std::size_t depth) {
  const CyclicWord core = cyclic_reduce(g).core;
  const std::size_t l = core.size();
  if (l < depth || depth == 0) {
    throw TooShort("translation length " + std::to_string(l) + " is below window depth " +
                   std::to_string(depth));
  }
  TreeFlowMeasure m;
  m.k = k;
  m.depth = depth;
  std::vector<Letter> window(depth);
  // Batch counts along the period give the sampling error of a long core.
  const std::size_t batches = std::min(kBatches, l);
  std::map<ReducedWord, std::vector<double>> counts;
  std::vector<double> batch_size(batches, 0.0);
  for (std::size_t i = 0; i < l; ++i) {
    for (std::size_t j = 0; j < depth; ++j) window[j] = core[(i + j) % l];
    const ReducedWord w(window);
    m.masses[w] += 1.0 / static_cast<double>(l);
    auto& c = counts[w];
    c.resize(batches, 0.0);
    const std::size_t b = i * batches / l;
    c[b] += 1.0;
    batch_size[b] += 1.0;
  }
  if (batches > 1) {
    for (const ReducedWord& w : reduced_words(k, depth)) {
      const auto it = counts.find(w);
      Moments mo;
      for (std::size_t b = 0; b < batches; ++b) mo.add(it == counts.end() ? 0.0 : it->second[b] / batch_size[b]);
      m.std_errors[w] = mo.std_error();
    }
  }
  return {m, static_cast<double>(l), g.str()};
}

TreeFlowMeasure ray_oracle_tree(const TreeBoundaryPrefix& xi, int k, std::size_t depth) {
  const std::size_t T = xi.depth();
  if (depth == 0 || T < 10 * depth) {
    throw TooShort("ray prefix of length " + std::to_string(T) + " is shorter than 10 windows of depth " +
                   std::to_string(depth));
  }
  const std::size_t windows = T - depth + 1;
  std::vector<std::map<ReducedWord, double>> batches(kBatches);
  std::vector<double> batch_size(kBatches, 0.0);
  const auto letters = xi.letters.letters();
  for (std::size_t i = 0; i < windows; ++i) {
    const std::size_t b = std::min(kBatches - 1, i * kBatches / windows);
    batches[b][ReducedWord(letters.subspan(i, depth))] += 1.0;
    batch_size[b] += 1.0;
  }
  TreeFlowMeasure m;
  m.k = k;
  m.depth = depth;
  for (const ReducedWord& w : reduced_words(k, depth)) {
    double count = 0.0;
    Moments mo;
    for (std::size_t b = 0; b < kBatches; ++b) {
      const auto it = batches[b].find(w);
      const double c = it == batches[b].end() ? 0.0 : it->second;
      count += c;
      if (batch_size[b] > 0.0) mo.add(c / batch_size[b]);
    }
    if (count > 0.0) m.masses[w] = count / static_cast<double>(windows);
    m.std_errors[w] = mo.std_error();
  }
  return m;
}

std::vector<double> stationary_law(const HarmonicKernel& kernel) {
  const std::size_t m = kernel.entry.size();
  std::vector<double> pi(m, 1.0 / static_cast<double>(m)), next(m);
  for (std::size_t it = 0; it < 1000000; ++it) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t t = 0; t < m; ++t) {
      for (std::size_t s = 0; s < m; ++s) next[s] += pi[t] * kernel.q[t][s];
    }
    double change = 0.0, total = 0.0;
    for (std::size_t s = 0; s < m; ++s) {
      next[s] = 0.5 * (next[s] + pi[s]);  // lazy step, same fixed point
      total += next[s];
    }
    for (std::size_t s = 0; s < m; ++s) {
      next[s] /= total;
      change = std::max(change, std::abs(next[s] - pi[s]));
    }
    pi.swap(next);
    if (change <= 1e-17) return pi;
  }
  throw NonConvergence("stationary law of the letter chain did not settle");
}

TreeFlowMeasure markov_flow_prediction(const HarmonicKernel& kernel, std::size_t depth) {
  if (depth == 0) throw InvalidArgument("window depth must be at least 1");
  const std::vector<double> pi = stationary_law(kernel);
  TreeFlowMeasure m;
  m.k = kernel.k;
  m.depth = depth;
  for (const ReducedWord& w : reduced_words(kernel.k, depth)) {
    double mass = pi[w[0].code()];
    for (std::size_t i = 1; i < w.size(); ++i) mass *= kernel.q[w[i - 1].code()][w[i].code()];
    m.masses[w] = mass;
  }
  return m;
}

double validate_flow_prediction(const TreeFlowMeasure& prediction, const TreeFlowMeasure& oracle,
                                double sigmas) {
  if (prediction.depth != oracle.depth || prediction.k != oracle.k) {
    throw ChartMismatch("flow measures of different depth or rank");
  }
  double worst = 0.0;
  for (const ReducedWord& w : reduced_words(prediction.k, prediction.depth)) {
    const double se = std::max(oracle.std_error(w), 1e-12);
    const double z = std::abs(prediction.mass(w) - oracle.mass(w)) / se;
    worst = std::max(worst, z);
    if (z > sigmas) {
      std::ostringstream msg;
      msg << "window [" << w.str() << "]: predicted " << prediction.mass(w) << ", ray oracle "
          << oracle.mass(w) << " (" << z << " standard errors)";
      throw ValidationFailed(msg.str());
    }
  }
  return worst;
}

ClosedGeodesicMeasure loxo_occupation_h2(const MobiusMap& g, const SchottkyGroup& group, const Chart& chart,
                                         double step) {
  check_step(step);
  if (classify(g) != IsometryClass::Loxodromic) throw NotLoxodromic("element " + g.str() + " is not loxodromic");
  const double l = translation_length_h(g);
  const MobiusMap inv = frame_of(axis_h(g)).inverse();
  const auto count = static_cast<std::size_t>(std::ceil(l / step));
  BinAccumulator acc(chart, count);
  for (std::size_t i = 0; i < count; ++i) {
    const HPoint w{0.0, std::exp(l * static_cast<double>(i) / static_cast<double>(count))};
    const TangentH v{inv.apply(w), std::numbers::pi / 2.0 + inv.rotation_at(w)};
    const Reduction r = group.reduce(v);
    acc.add({r.point, r.angle});
  }
  return {acc.finish(), l, g.str()};
}

ClosedGeodesicMeasure loxo_occupation_h2(const ReducedWord& g, const SchottkyGroup& group, const Chart& chart,
                                         double step) {
  check_step(step);
  const CyclicWord core = cyclic_reduce(g).core;
  if (core.empty()) throw NotLoxodromic("identity has no closed geodesic");
  const CyclicWord root = core.primitive_root().canonical();
  const std::vector<GeodesicPiece> pieces = closed_geodesic_pieces(group, root);
  std::vector<double> starts;
  double period = 0.0;
  for (const GeodesicPiece& p : pieces) {
    starts.push_back(period);
    period += p.length();
  }
  const auto count = static_cast<std::size_t>(std::ceil(period / step));
  BinAccumulator acc(chart, count);
  std::size_t j = 0;
  for (std::size_t i = 0; i < count; ++i) {
    const double t = period * static_cast<double>(i) / static_cast<double>(count);
    while (j + 1 < pieces.size() && starts[j + 1] <= t) ++j;
    acc.add(pieces[j].at(std::min(pieces[j].s_end, pieces[j].s_begin + (t - starts[j]))));
  }
  const double multiplicity = static_cast<double>(core.size() / root.size());
  return {acc.finish(), period * multiplicity, g.str()};
}

BinnedMeasure ray_oracle_h2(const SamplePath& path, const HalfplaneModel& model, double horizon,
                            const Chart& chart, double step) {
  check_step(step);
  const BoundaryEstimate xi = boundary_estimate(path, Model(model));
  SymbolicRay ray(model.group, model.basepoint, xi.prefix.letters);
  const double available = ray.available_length();
  if (!(horizon <= available)) {
    throw TooShort("ray horizon " + std::to_string(horizon) + " exceeds the " + std::to_string(available) +
                   " determined by the path");
  }
  const auto count = static_cast<std::size_t>(std::floor(horizon / step)) + 1;
  BinAccumulator acc(chart, count);
  for (std::size_t i = 0; i < count; ++i) acc.add(ray.point_at(static_cast<double>(i) * step));
  return acc.finish();
}

double tv_distance(const TreeFlowMeasure& a, const TreeFlowMeasure& b) {
  if (a.depth != b.depth || a.k != b.k) throw ChartMismatch("flow measures of different depth or rank");
  std::set<ReducedWord> keys;
  for (const auto& [w, m] : a.masses) keys.insert(w);
  for (const auto& [w, m] : b.masses) keys.insert(w);
  double sum = 0.0;
  for (const ReducedWord& w : keys) sum += std::abs(a.mass(w) - b.mass(w));
  return 0.5 * sum;
}

double tv_distance(const BinnedMeasure& a, const BinnedMeasure& b) {
  if (!(a.chart == b.chart)) throw ChartMismatch(a.chart.str() + " vs " + b.chart.str());
  double sum = std::abs(a.overflow - b.overflow);
  for (std::size_t i = 0; i < a.masses.size(); ++i) sum += std::abs(a.masses[i] - b.masses[i]);
  return 0.5 * sum;
}

std::vector<BinSet> sliding_windows(const Chart& chart, int width) {
  std::vector<BinSet> family;
  for (int ix = 0; ix + width <= chart.nx; ++ix) {
    for (int iy = 0; iy + width <= chart.ny; ++iy) {
      for (int ia = 0; ia < chart.na; ++ia) {
        BinSet set;
        for (int dx = 0; dx < width; ++dx) {
          for (int dy = 0; dy < width; ++dy) {
            for (int da = 0; da < width; ++da) set.push_back(chart.index(ix + dx, iy + dy, (ia + da) % chart.na));
          }
        }
        std::sort(set.begin(), set.end());
        family.push_back(std::move(set));
      }
    }
  }
  return family;
}

namespace {

template <class Visit>
void for_neighbors(const Chart& chart, std::size_t bin, int r, Visit visit) {
  const auto [ix, iy, ia] = chart.coordinates(bin);
  for (int dx = -r; dx <= r; ++dx) {
    for (int dy = -r; dy <= r; ++dy) {
      for (int da = -r; da <= r; ++da) {
        const int x = std::clamp(ix + dx, 0, chart.nx - 1);
        const int y = std::clamp(iy + dy, 0, chart.ny - 1);
        const int a = ((ia + da) % chart.na + chart.na) % chart.na;
        visit(chart.index(x, y, a));
      }
    }
  }
}

}  // namespace

BinSet dilate(const Chart& chart, const BinSet& set, int r) {
  std::set<std::size_t> out;
  for (std::size_t b : set) for_neighbors(chart, b, r, [&](std::size_t n) { out.insert(n); });
  return {out.begin(), out.end()};
}

BinSet erode(const Chart& chart, const BinSet& set, int r) {
  const std::set<std::size_t> members(set.begin(), set.end());
  BinSet out;
  for (std::size_t b = 0; b < chart.bins(); ++b) {
    bool inside = true;
    for_neighbors(chart, b, r, [&](std::size_t n) { inside = inside && members.count(n) > 0; });
    if (inside) out.push_back(b);
  }
  return out;
}

double bin_set_mass(const BinnedMeasure& m, const BinSet& set) {
  double t = 0.0;
  for (std::size_t b : set) t += m.masses.at(b);
  return t;
}

namespace {

SandwichResult summarize(std::vector<SandwichRow> rows) {
  SandwichResult out;
  out.rows = std::move(rows);
  for (std::size_t i = 0; i < out.rows.size(); ++i) {
    SandwichRow& row = out.rows[i];
    row.margin = std::min(row.value - (row.lower - row.slack), (row.upper + row.slack) - row.value);
    if (i == 0 || row.margin < out.worst_margin) {
      out.worst_margin = row.margin;
      out.worst_set = i;
    }
  }
  out.pass = out.rows.empty() || out.worst_margin >= 0.0;
  return out;
}

double slack_for(const std::vector<double>& slack, std::size_t i) {
  if (slack.empty()) return 0.0;
  return slack.size() == 1 ? slack[0] : slack.at(i);
}

}  // namespace

SandwichResult portmanteau_sandwich(const BinnedMeasure& loxo, const BinnedMeasure& oracle, int r,
                                    const std::vector<BinSet>& family, const std::vector<double>& slack) {
  if (!(loxo.chart == oracle.chart)) throw ChartMismatch(loxo.chart.str() + " vs " + oracle.chart.str());
  std::vector<SandwichRow> rows;
  for (std::size_t i = 0; i < family.size(); ++i) {
    SandwichRow row;
    row.value = bin_set_mass(loxo, family[i]);
    row.lower = bin_set_mass(oracle, erode(oracle.chart, family[i], r));
    row.upper = bin_set_mass(oracle, dilate(oracle.chart, family[i], r));
    row.slack = slack_for(slack, i);
    rows.push_back(row);
  }
  return summarize(std::move(rows));
}

SandwichResult portmanteau_sandwich(const TreeFlowMeasure& loxo, const TreeFlowMeasure& oracle, int r,
                                    const std::vector<CylinderSet>& family, const std::vector<double>& slack) {
  if (loxo.depth != oracle.depth || loxo.k != oracle.k) throw ChartMismatch("flow measures of different depth or rank");
  const std::size_t keep = loxo.depth - std::min<std::size_t>(loxo.depth, static_cast<std::size_t>(std::max(r, 0)));
  std::vector<SandwichRow> rows;
  for (std::size_t i = 0; i < family.size(); ++i) {
    SandwichRow row;
    std::set<ReducedWord> heads;
    for (const ReducedWord& w : family[i]) {
      row.value += loxo.mass(w);
      row.lower += oracle.mass(w);
      heads.insert(w.prefix(keep));
    }
    for (const auto& [w, m] : oracle.masses) {
      if (heads.count(w.prefix(keep))) row.upper += m;
    }
    row.slack = slack_for(slack, i);
    rows.push_back(row);
  }
  return summarize(std::move(rows));
}

}  // namespace hyperwalk
