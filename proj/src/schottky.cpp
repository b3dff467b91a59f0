#include "hyperwalk/schottky.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "hyperwalk/errors.hpp"

namespace hyperwalk {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kMapTolerance = 1e-9;

// Angle of x on the Cayley circle, increasing with x, in (0, 2pi); infinity is 0.
double circle_angle(double x) { return 2.0 * std::atan2(1.0, -x); }

double wrap(double t) {
  t = std::fmod(t, kTwoPi);
  return t < 0.0 ? t + kTwoPi : t;
}

bool arcs_overlap(std::pair<double, double> p, std::pair<double, double> q) {
  const double eps = 1e-12;
  return wrap(q.first - p.first) <= p.second + eps || wrap(p.first - q.first) <= q.second + eps;
}

std::string point_str(const HPoint& z) {
  std::ostringstream out;
  out.precision(12);
  out << "(" << z.x << ", " << z.y << ")";
  return out.str();
}

// A point just outside the disk, in its complement.
HPoint exterior_witness(const BoundaryDisk& d) {
  switch (d.kind) {
    case BoundaryDisk::Kind::Inside: return {d.center, 1.5 * d.radius};
    case BoundaryDisk::Kind::Outside: return {d.center, d.radius / 1.5};
    case BoundaryDisk::Kind::Left: return {d.center + 1.0, 1.0};
    case BoundaryDisk::Kind::Right: return {d.center - 1.0, 1.0};
  }
  return {0.0, 1.0};
}

}  // namespace

double BoundaryDisk::margin(const HPoint& z) const {
  switch (kind) {
    case Kind::Inside: return radius - std::hypot(z.x - center, z.y);
    case Kind::Outside: return std::hypot(z.x - center, z.y) - radius;
    case Kind::Left: return center - z.x;
    case Kind::Right: return z.x - center;
  }
  return 0.0;
}

bool BoundaryDisk::contains(const BoundaryPointH& p) const {
  if (p.is_infinite()) return kind != Kind::Inside;
  const double x = p.value();
  switch (kind) {
    case Kind::Inside: return std::abs(x - center) <= radius;
    case Kind::Outside: return std::abs(x - center) >= radius;
    case Kind::Left: return x <= center;
    case Kind::Right: return x >= center;
  }
  return false;
}

GeodesicH BoundaryDisk::edge() const {
  switch (kind) {
    case Kind::Inside:
    case Kind::Outside:
      return {BoundaryPointH::finite(center - radius), BoundaryPointH::finite(center + radius)};
    case Kind::Left:
    case Kind::Right: return {BoundaryPointH::finite(center), BoundaryPointH::infinity()};
  }
  return {};
}

std::pair<double, double> BoundaryDisk::arc() const {
  switch (kind) {
    case Kind::Inside: {
      const double lo = circle_angle(center - radius);
      return {lo, circle_angle(center + radius) - lo};
    }
    case Kind::Outside: {
      const double hi = circle_angle(center + radius);
      return {hi, kTwoPi - (hi - circle_angle(center - radius))};
    }
    case Kind::Left: return {0.0, circle_angle(center)};
    case Kind::Right: {
      const double a = circle_angle(center);
      return {a, kTwoPi - a};
    }
  }
  return {0.0, 0.0};
}

HPoint BoundaryDisk::boundary_sample(double s) const {
  switch (kind) {
    case Kind::Inside:
    case Kind::Outside: {
      const double t = std::numbers::pi * s;
      return {center + radius * std::cos(t), radius * std::sin(t)};
    }
    case Kind::Left:
    case Kind::Right: return {center, std::tan(std::numbers::pi * s / 2.0)};
  }
  return {0.0, 1.0};
}

std::string BoundaryDisk::str() const {
  std::ostringstream out;
  out.precision(17);
  switch (kind) {
    case Kind::Inside: out << "disk " << center << " " << radius; break;
    case Kind::Outside: out << "outside " << center << " " << radius; break;
    case Kind::Left: out << "halfplane " << center << " left"; break;
    case Kind::Right: out << "halfplane " << center << " right"; break;
  }
  return out.str();
}

CertificationResult schottky_certify(std::span<const SchottkyGenerator> generators, int samples) {
  CertificationResult result;
  if (generators.empty()) throw InvalidArgument("no generators to certify");
  std::vector<const BoundaryDisk*> disks;
  for (const auto& g : generators) {
    disks.push_back(&g.repelling);
    disks.push_back(&g.attracting);
  }
  for (std::size_t i = 0; i < disks.size(); ++i) {
    for (std::size_t j = i + 1; j < disks.size(); ++j) {
      if (arcs_overlap(disks[i]->arc(), disks[j]->arc())) {
        throw DisksOverlap("disks " + std::to_string(i) + " (" + disks[i]->str() + ") and " +
                           std::to_string(j) + " (" + disks[j]->str() + ")");
      }
    }
  }
  for (std::size_t k = 0; k < generators.size(); ++k) {
    const auto& g = generators[k];
    for (int s = 0; s < samples; ++s) {
      const HPoint p = g.repelling.boundary_sample((s + 0.5) / samples);
      const HPoint q = g.map.apply(p);
      const double scale = std::max(1.0, std::hypot(q.x, q.y));
      if (g.attracting.margin(q) < -kMapTolerance * scale) {
        throw MappingViolation("generator " + std::to_string(k) + " maps boundary point " +
                               point_str(p) + " to " + point_str(q) + " outside " +
                               g.attracting.str());
      }
    }
    const HPoint w = exterior_witness(g.repelling);
    if (!g.attracting.contains(g.map.apply(w))) {
      throw MappingViolation("generator " + std::to_string(k) + " maps exterior point " +
                             point_str(w) + " outside " + g.attracting.str());
    }
  }
  result.certified = true;
  result.elementary = generators.size() < 2;
  if (result.elementary) result.notes.push_back("single generator: cyclic, elementary group");
  return result;
}

SchottkyGroup::SchottkyGroup(std::vector<SchottkyGenerator> generators, int samples)
    : generators_(std::move(generators)) {
  if (static_cast<int>(generators_.size()) > kMaxGenerators) {
    throw InvalidArgument("too many generators");
  }
  certification_ = schottky_certify(generators_, samples);
  for (const auto& g : generators_) {
    letter_maps_.push_back(g.map);
    letter_maps_.push_back(g.map.inverse());
  }

  // Widest gap between the disk arcs on the Cayley circle.
  std::vector<std::pair<double, double>> arcs;
  for (const auto& g : generators_) {
    arcs.push_back(g.repelling.arc());
    arcs.push_back(g.attracting.arc());
  }
  std::sort(arcs.begin(), arcs.end());
  double best_gap = -1.0, best_mid = 0.0;
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    const auto& cur = arcs[i];
    const auto& next = arcs[(i + 1) % arcs.size()];
    const double end = cur.first + cur.second;
    double gap = wrap(next.first - end);
    if (arcs.size() == 1) gap = kTwoPi - cur.second;
    if (gap > best_gap) {
      best_gap = gap;
      best_mid = wrap(end + gap / 2.0);
    }
  }
  const double half = best_mid / 2.0;
  free_point_ = std::abs(std::sin(half)) < 1e-300
                    ? BoundaryPointH::infinity()
                    : BoundaryPointH::finite(-std::cos(half) / std::sin(half));

  // Interior point with the largest clearance among a few candidates.
  double best = -std::numeric_limits<double>::infinity();
  for (double y : {1.0, 0.5, 2.0, 0.25, 4.0}) {
    for (int ix = -40; ix <= 40; ++ix) {
      const HPoint z{ix * 0.25, y};
      double clearance = std::numeric_limits<double>::infinity();
      for (const auto& g : generators_) {
        clearance = std::min({clearance, -g.repelling.margin(z) / y, -g.attracting.margin(z) / y});
      }
      if (clearance > best + 1e-12) {
        best = clearance;
        interior_point_ = z;
      }
    }
  }
  if (!(best > 0.0)) throw InvalidArgument("could not find an interior point of the fundamental domain");
}

const MobiusMap& SchottkyGroup::matrix(Letter x) const {
  if (x.generator() >= rank()) throw InvalidArgument("letter beyond Schottky rank");
  return letter_maps_[x.code()];
}

const BoundaryDisk& SchottkyGroup::target_disk(Letter x) const {
  const auto& g = generators_.at(static_cast<std::size_t>(x.generator()));
  return x.sign() > 0 ? g.attracting : g.repelling;
}

MobiusMap SchottkyGroup::evaluate(const ReducedWord& w) const {
  MobiusMap m;
  for (Letter x : w.letters()) m = m * matrix(x);
  return m;
}

ScaledMatrix SchottkyGroup::evaluate_scaled(const ReducedWord& w) const {
  ScaledMatrix m;
  for (Letter x : w.letters()) m *= matrix(x);
  return m;
}

bool SchottkyGroup::in_fundamental_domain(const HPoint& z, double tol) const {
  for (const auto& g : generators_) {
    if (g.repelling.contains(z, tol) || g.attracting.contains(z, tol)) return false;
  }
  return true;
}

Reduction SchottkyGroup::reduce(const TangentH& v, int max_steps) const {
  Reduction r;
  r.point = v.point;
  r.angle = v.angle;
  std::vector<Letter> applied;
  for (int step = 0;; ++step) {
    std::optional<Letter> move;
    for (int k = 0; k < rank() && !move; ++k) {
      const auto& g = generators_[static_cast<std::size_t>(k)];
      if (g.attracting.contains(r.point, 1e-12)) {
        move = Letter::make(k, -1);
      } else if (g.repelling.contains(r.point, 1e-12)) {
        move = Letter::make(k, 1);
      }
    }
    if (!move) break;
    if (step >= max_steps) {
      throw IterationLimit("no exit after " + std::to_string(max_steps) + " steps from " +
                           point_str(v.point));
    }
    const MobiusMap& h = matrix(*move);
    r.angle += h.rotation_at(r.point);
    r.point = h.apply(r.point);
    r.map = h * r.map;
    applied.push_back(*move);
  }
  std::reverse(applied.begin(), applied.end());
  r.word = ReducedWord(applied);
  return r;
}

Reduction SchottkyGroup::reduce(const HPoint& z, int max_steps) const {
  return reduce(TangentH{z, 0.0}, max_steps);
}

std::optional<ReducedWord> SchottkyGroup::decompose(const MobiusMap& g, double tol) const {
  const HPoint p = interior_point_;
  Reduction r = reduce(g.apply(p));
  if (hyp_distance(r.point, p) > tol) return std::nullopt;
  ReducedWord w = r.word.inverse();
  if (!evaluate(w).projectively_equal(g, tol)) return std::nullopt;
  return w;
}

BoundaryPointH SchottkyGroup::apply_letters(std::span<const Letter> letters) const {
  return apply_word(letters, free_point_);
}

BoundaryPointH SchottkyGroup::apply_word(std::span<const Letter> letters,
                                         const BoundaryPointH& start) const {
  auto [u, v] = start.homogeneous();
  for (auto it = letters.rbegin(); it != letters.rend(); ++it) {
    const MobiusMap& m = matrix(*it);
    const double nu = m.a() * u + m.b() * v;
    const double nv = m.c() * u + m.d() * v;
    const double n = std::hypot(nu, nv);
    u = nu / n;
    v = nv / n;
  }
  return BoundaryPointH::from_homogeneous(u, v);
}

BoundaryPointH SchottkyGroup::limit_point(const ReducedWord& head, const ReducedWord& period) const {
  if (period.empty()) return apply_letters(head.letters());
  const std::size_t h = head.size(), l = period.size();
  return limit_point([&](std::size_t i) { return i < h ? head[i] : period[(i - h) % l]; },
                     std::numeric_limits<std::size_t>::max());
}

}  // namespace hyperwalk
