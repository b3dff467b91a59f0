#include "hyperwalk/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hyperwalk/errors.hpp"
#include "hyperwalk/parallel.hpp"
#include "hyperwalk/stats.hpp"
#include "hyperwalk/symbolic.hpp"

namespace hyperwalk {

namespace {

const HalfplaneModel& halfplane(const Model& m) { return std::get<HalfplaneModel>(m); }

std::size_t window_start(std::size_t steps) { return steps - steps / 4; }

// Tree distance from v to the ray from x toward the boundary point with
// prefix xi. The ray is [x, p] followed by xi beyond p = xi[0..j).
std::size_t tree_ray_distance(const ReducedWord& v, const ReducedWord& x, const ReducedWord& xi) {
  if (xi.size() < v.size()) {
    throw PrefixTooShallow("boundary prefix of depth " + std::to_string(xi.size()) +
                           " cannot resolve a vertex at distance " + std::to_string(v.size()));
  }
  const std::size_t j = common_prefix_length(x.letters(), xi.letters());
  const std::size_t l = common_prefix_length(v.letters(), xi.letters());
  const std::size_t to_p = v.size() + j - 2 * std::min(l, j);
  const std::size_t to_tail = l >= j ? v.size() - l : to_p;
  const std::size_t to_x = tree_distance(v, x);
  const std::size_t x_to_p = x.size() - j;
  const std::size_t to_segment = (to_x + to_p - x_to_p) / 2;
  return std::min(to_tail, to_segment);
}

// Length of the common prefix of w with the periodic word period^infinity.
std::size_t periodic_lcp(std::span<const Letter> w, std::span<const Letter> period) {
  std::size_t i = 0;
  const std::size_t l = period.size();
  while (i < w.size() && w[i] == period[i % l]) ++i;
  return i;
}

AxisCheck tree_axis_check(const SamplePath& path, std::size_t n, const TreeModel& tree,
                          const BoundaryEstimate& xi, double lo, double hi, double c) {
  const ReducedWord g = path.prefix(n);
  if (g.empty()) throw NotLoxodromic("omega_n is the identity");
  const TreeAxis axis = axis_tree(g);
  const ReducedWord& o = tree.basepoint;
  const ReducedWord& e = xi.prefix.letters;
  const std::size_t j = common_prefix_length(o.letters(), e.letters());
  const std::size_t o_to_p = o.size() - j;

  const ReducedWord& cw = axis.conjugator;
  const std::size_t kappa = common_prefix_length(cw.letters(), e.letters());
  // Y = conjugator^{-1} xi reduced, i.e. (cw[kappa..])^{-1} xi[kappa..]; the
  // word conjugator^{-1} xi[0..tau) is a prefix of Y once tau >= kappa.
  ReducedWord y_full;
  {
    const ReducedWord rest = ReducedWord(std::span<const Letter>(cw.letters().begin() + static_cast<std::ptrdiff_t>(kappa), cw.letters().end())).inverse();
    std::vector<Letter> all(rest.letters().begin(), rest.letters().end());
    all.insert(all.end(), e.letters().begin() + static_cast<std::ptrdiff_t>(kappa), e.letters().end());
    y_full = ReducedWord(all);
  }
  const ReducedWord period_inv = axis.period.inverse();
  const std::size_t lp = periodic_lcp(y_full.letters(), axis.period.letters());
  const std::size_t lm = periodic_lcp(y_full.letters(), period_inv.letters());

  AxisCheck out;
  out.pass = true;
  const auto t0 = static_cast<std::size_t>(std::ceil(lo));
  const auto t1 = static_cast<std::size_t>(std::floor(hi));
  for (std::size_t t = t0; t <= t1 && hi >= lo; ++t) {
    double offset = 0.0;
    if (t <= o_to_p) {
      offset = static_cast<double>(axis.distance_to(o.prefix(o.size() - t)));
    } else {
      const std::size_t tau = j + (t - o_to_p);
      if (tau > e.size()) {
        throw PrefixTooShallow("ray time " + std::to_string(t) + " beyond boundary prefix depth " +
                               std::to_string(e.size()));
      }
      if (tau < kappa) {
        offset = static_cast<double>(axis.distance_to(e.prefix(tau)));
      } else {
        const std::size_t len = cw.size() - kappa + tau - kappa;
        const std::size_t best = std::max(std::min(len, lp), std::min(len, lm));
        offset = static_cast<double>(len - best);
      }
    }
    out.worst_offset = std::max(out.worst_offset, offset);
    ++out.samples;
  }
  out.pass = out.worst_offset <= c;
  return out;
}

AxisCheck halfplane_axis_check(const SamplePath& path, std::size_t n, const HalfplaneModel& h,
                               const BoundaryEstimate& xi, double lo, double hi, double c) {
  const ReducedWord g = path.prefix(n);
  if (!is_loxodromic(Model(h), g)) throw NotLoxodromic("omega_n is not loxodromic");
  const CyclicReduction red = cyclic_reduce(g);
  const ReducedWord core = red.core.as_word();
  const ReducedWord core_inv = core.inverse();
  const std::size_t l = core.size();
  // Chart i sends the axis of the i-th rotation of the core, which is
  // core[0..i)^{-1} times the axis of the core, to the imaginary axis.
  const std::vector<GeodesicPiece> frames = closed_geodesic_pieces(*h.group, red.core);
  const ReducedWord& e = xi.prefix.letters;
  const ReducedWord& cw = red.conjugator;
  const std::size_t kappa = common_prefix_length(cw.letters(), e.letters());
  // z_m = conjugator^{-1} xi[0..m) is a prefix of y once m >= kappa.
  std::vector<Letter> y_letters;
  {
    const ReducedWord rest = ReducedWord(cw.letters().subspan(kappa)).inverse();
    y_letters.assign(rest.letters().begin(), rest.letters().end());
    y_letters.insert(y_letters.end(), e.letters().begin() + static_cast<std::ptrdiff_t>(kappa), e.letters().end());
  }
  SymbolicRay ray(h.group, h.basepoint, e);

  AxisCheck out;
  std::size_t cached = static_cast<std::size_t>(-1);
  ScaledMatrix pull;
  for (double t = std::ceil(lo); t <= hi; t += 1.0) {
    const std::size_t m = ray.piece_at(t);
    if (m != cached) {
      const ReducedWord z = m >= kappa
                                ? ReducedWord(std::span<const Letter>(y_letters).first(cw.size() - 2 * kappa + m))
                                : cw.inverse() * e.prefix(m);
      // Nearest axis vertex to z: the longer of the two periodic prefixes.
      const std::size_t up = periodic_lcp(z.letters(), core.letters());
      const std::size_t down = periodic_lcp(z.letters(), core_inv.letters());
      const std::size_t j = std::max(up, down);
      const std::size_t rotation = up >= down ? j % l : (l - j % l) % l;
      const ReducedWord tail(z.letters().subspan(j));
      pull = frames[rotation].chart * h.group->evaluate_scaled(tail);
      cached = m;
    }
    const double offset = pull.offset_from_imaginary_axis(ray.point_at(t).point);
    out.worst_offset = std::max(out.worst_offset, offset);
    ++out.samples;
  }
  out.pass = out.worst_offset <= c;
  return out;
}

}  // namespace

double drift_sample(const Model& model, const SamplePath& path, std::size_t n) {
  if (n == 0 || n > path.steps()) throw InvalidArgument("drift index out of range");
  return displacement(model, path.prefix(n)) / static_cast<double>(n);
}

DriftEstimate drift_estimate(const Model& model, const StepDistribution& mu, std::size_t n,
                             std::size_t paths, std::uint64_t seed, unsigned jobs) {
  if (n == 0 || paths == 0) throw InvalidArgument("drift needs n >= 1 and paths >= 1");
  const auto samples = parallel_map(paths, jobs, [&](std::size_t i) {
    return drift_sample(model, sample_path(mu, n, seed, i), n);
  });
  Moments m;
  for (double s : samples) m.add(s);
  return {m.mean(), m.std_error(), n, paths};
}

BoundaryEstimate boundary_estimate(const SamplePath& path, const Model& model, double width) {
  const std::size_t n = path.steps();
  BoundaryEstimate est;
  est.prefix.letters = path.stable_prefix(window_start(n), n);
  if (est.prefix.depth() == 0) {
    throw Unstable("boundary estimate did not settle over the final quarter of " + std::to_string(n) +
                   " steps");
  }
  if (is_tree(model)) return est;

  const SchottkyGroup& group = *halfplane(model).group;
  const ReducedWord& p = est.prefix.letters;
  est.point = group.limit_point([&](std::size_t i) { return p[i]; }, p.size());
  // All final-quarter points lie in the translate of the last letter's disk.
  const GeodesicH edge = group.target_disk(p.back()).edge();
  const auto head = p.letters().first(p.size() - 1);
  est.spread = boundary_distance(group.apply_word(head, edge.from), group.apply_word(head, edge.to));
  if (est.spread > width) {
    throw Unstable("final-quarter boundary estimates spread " + std::to_string(est.spread) +
                   " exceeds width " + std::to_string(width));
  }
  return est;
}

double tracking_stat(const SamplePath& path, std::size_t n, const Model& model,
                     const BoundaryEstimate& xi) {
  if (n == 0 || n > path.steps()) throw InvalidArgument("tracking index out of range");
  const ReducedWord w = path.prefix(n);
  if (const auto* tree = std::get_if<TreeModel>(&model)) {
    const ReducedWord v = w * tree->basepoint;
    return static_cast<double>(tree_ray_distance(v, tree->basepoint, xi.prefix.letters)) /
           static_cast<double>(n);
  }
  const HalfplaneModel& h = halfplane(model);
  const ReducedWord& e = xi.prefix.letters;
  // Pull everything back to the frame where the ray leaves the common prefix.
  const std::size_t j = common_prefix_length(w.letters(), e.letters());
  SymbolicRay ray(h.group, h.basepoint, e);
  if (j >= ray.piece_count()) {
    throw PrefixTooShallow("boundary prefix too short to resolve omega_" + std::to_string(n));
  }
  const ReducedWord rest(w.letters().subspan(j));
  const ScaledMatrix g = ray.piece(j).chart * h.group->evaluate_scaled(rest);
  return g.offset_from_imaginary_axis(h.basepoint) / static_cast<double>(n);
}

LengthLawSample length_law_stat(const SamplePath& path, std::size_t n, const Model& model) {
  if (n == 0 || n > path.steps()) throw InvalidArgument("length-law index out of range");
  LengthLawSample out;
  out.ratio = translation_length(model, path.prefix(n)) / static_cast<double>(n);
  std::size_t last = 0;
  for (std::size_t m = 1; m <= n; ++m) {
    if (path.length(m) == 0) last = m;
  }
  out.onset = last + 1;
  if (out.onset > n) {
    out.never_lost = false;
    return out;
  }
  constexpr std::size_t kChecks = 16;
  for (std::size_t i = 0; i < kChecks; ++i) {
    const std::size_t m = out.onset + (n - out.onset) * i / (kChecks - 1);
    if (!is_loxodromic(model, path.prefix(m))) out.never_lost = false;
  }
  return out;
}

AxisCheck axis_tracking_check(const SamplePath& path, std::size_t n, const Model& model,
                              const BoundaryEstimate& xi, double eps, double c, double drift) {
  if (n == 0 || n > path.steps()) throw InvalidArgument("axis-check index out of range");
  const double span = drift * static_cast<double>(n);
  const double lo = eps * span, hi = (1.0 - eps) * span;
  if (const auto* tree = std::get_if<TreeModel>(&model)) {
    return tree_axis_check(path, n, *tree, xi, lo, hi, c);
  }
  return halfplane_axis_check(path, n, halfplane(model), xi, lo, hi, c);
}

}  // namespace hyperwalk
