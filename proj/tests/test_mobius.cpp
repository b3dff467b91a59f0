#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fixtures.hpp"
#include "hyperwalk/errors.hpp"
#include "hyperwalk/mobius.hpp"

using namespace hyperwalk;
using doctest::Approx;

namespace {

const HPoint I{0.0, 1.0};

// Length of a curve t -> c(t), t in [0, 1], in the metric |dz| / y.
template <class Curve>
double curve_length(Curve c, int steps = 20000) {
  double total = 0.0;
  HPoint prev = c(0.0);
  for (int i = 1; i <= steps; ++i) {
    const HPoint cur = c(static_cast<double>(i) / steps);
    const double mid_y = 0.5 * (prev.y + cur.y);
    total += std::hypot(cur.x - prev.x, cur.y - prev.y) / mid_y;
    prev = cur;
  }
  return total;
}

bool same_boundary(const BoundaryPointH& p, const BoundaryPointH& q, double tol) {
  return boundary_distance(p, q) <= tol;
}

}  // namespace

TEST_CASE("action examples") {
  const HPoint a = mobius_apply({1, 1, 0, 1}, I);
  CHECK(a.x == Approx(1.0));
  CHECK(a.y == Approx(1.0));
  const HPoint b = mobius_apply({2, 0, 0, 0.5}, I);
  CHECK(b.x == Approx(0.0));
  CHECK(b.y == Approx(4.0));
  const HPoint c = mobius_apply({0, 1, -1, 0}, {0.0, 2.0});
  CHECK(c.x == Approx(0.0));
  CHECK(c.y == Approx(0.5));
  CHECK_THROWS_AS(MobiusMap(1, 0, 0, -1), InvalidArgument);
}

TEST_CASE("distance against integrated arclength") {
  const double vertical = curve_length([](double t) { return HPoint{0.0, 1.0 + t}; });
  CHECK(hyp_distance(I, {0.0, 2.0}) == Approx(vertical).epsilon(1e-8));
  CHECK(hyp_distance(I, {0.0, 2.0}) == Approx(std::numbers::ln2).epsilon(1e-14));
  CHECK(hyp_distance(I, I) == 0.0);
  // Geodesic from i to 1 + i: arc of the circle centered 1/2 with radius sqrt(5)/2.
  const double r = std::sqrt(5.0) / 2.0;
  const double t0 = std::atan2(1.0, -0.5), t1 = std::atan2(1.0, 0.5);
  const double arc = curve_length([&](double s) {
    const double t = t0 + (t1 - t0) * s;
    return HPoint{0.5 + r * std::cos(t), r * std::sin(t)};
  });
  CHECK(hyp_distance(I, {1.0, 1.0}) == Approx(arc).epsilon(1e-8));
  CHECK(hyp_distance(I, {1.0, 1.0}) == Approx(std::acosh(1.5)).epsilon(1e-14));
}

TEST_CASE("distance is a metric invariant under the action") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> ux(-3, 3), uy(0.1, 3);
  const MobiusMap g = fixtures::boost53() * fixtures::dilation3().inverse() * MobiusMap(1, 0.3, 0, 1);
  for (int i = 0; i < 1000; ++i) {
    const HPoint z{ux(rng), uy(rng)}, w{ux(rng), uy(rng)}, v{ux(rng), uy(rng)};
    CHECK(hyp_distance(z, w) == Approx(hyp_distance(w, z)));
    CHECK(hyp_distance(z, v) <= hyp_distance(z, w) + hyp_distance(w, v) + 1e-12);
    CHECK(std::abs(hyp_distance(g.apply(z), g.apply(w)) - hyp_distance(z, w)) <= 1e-9);
  }
}

TEST_CASE("classification") {
  CHECK(classify({1, 1, 0, 1}) == IsometryClass::Parabolic);
  CHECK(classify({2, 0, 0, 0.5}) == IsometryClass::Loxodromic);
  CHECK(classify({0, 1, -1, 0}) == IsometryClass::Elliptic);
  CHECK(classify({-1, 0, 0, -1}) == IsometryClass::Identity);
  CHECK(translation_length_h({2, 0, 0, 0.5}) == Approx(2.0 * std::numbers::ln2).epsilon(1e-14));
  CHECK(translation_length_h({2, 0, 0, 0.5}) == Approx(hyp_distance(I, {0.0, 4.0})));
  CHECK(translation_length_h({1, 1, 0, 1}) == 0.0);
  CHECK(translation_length_h({4, 0, 0, 0.25}) == Approx(4.0 * std::numbers::ln2));
}

TEST_CASE("axes") {
  const GeodesicH d = axis_h({2, 0, 0, 0.5});
  CHECK(d.from.value() == Approx(0.0));
  CHECK(d.to.is_infinite());
  const GeodesicH b = axis_h(fixtures::boost53());
  CHECK(b.from.value() == Approx(1.0));
  CHECK(b.to.value() == Approx(-1.0));
  const GeodesicH inv = axis_h({0.5, 0, 0, 2});
  CHECK(inv.from.is_infinite());
  CHECK(inv.to.value() == Approx(0.0));
  CHECK_THROWS_AS(axis_h({1, 1, 0, 1}), NotLoxodromic);
}

TEST_CASE("distance to a geodesic") {
  const GeodesicH vertical{BoundaryPointH::finite(0.0), BoundaryPointH::infinity()};
  CHECK(dist_to_geodesic(I, vertical) == Approx(0.0));
  CHECK(dist_to_geodesic({1.0, 1.0}, vertical) == Approx(std::acosh(std::sqrt(2.0))));
  CHECK(dist_to_geodesic({1.0, 1.0}, vertical) == Approx(std::asinh(1.0)));
  // (-1, 1) is the unit semicircle; z -> (1 + z)/(1 - z) sends it to (0, inf).
  const GeodesicH unit{BoundaryPointH::finite(-1.0), BoundaryPointH::finite(1.0)};
  const MobiusMap cayley(1 / std::sqrt(2.0), 1 / std::sqrt(2.0), -1 / std::sqrt(2.0), 1 / std::sqrt(2.0));
  const HPoint z{0.0, 2.0};
  CHECK(dist_to_geodesic(z, unit) == Approx(dist_to_geodesic(cayley.apply(z), vertical)));
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> ux(-2, 2), uy(0.2, 2);
  const MobiusMap g = fixtures::boost53() * MobiusMap(1, 0.7, 0, 1);
  for (int i = 0; i < 500; ++i) {
    const HPoint p{ux(rng), uy(rng)};
    const GeodesicH moved{g.apply(unit.from), g.apply(unit.to)};
    CHECK(dist_to_geodesic(g.apply(p), moved) == Approx(dist_to_geodesic(p, unit)).epsilon(1e-9));
  }
}

TEST_CASE("unit-speed parametrization") {
  const GeodesicH vertical{BoundaryPointH::finite(0.0), BoundaryPointH::infinity()};
  const HPoint p = geodesic_point(vertical, I, std::numbers::ln2);
  CHECK(p.x == Approx(0.0));
  CHECK(p.y == Approx(2.0));
  CHECK(geodesic_point(vertical, I, 0.0).y == Approx(1.0));
  CHECK(geodesic_point(vertical, I, -std::numbers::ln2).y == Approx(0.5));
  CHECK_THROWS_AS(geodesic_point(vertical, {1.0, 1.0}, 0.5), BaseNotOnGeodesic);
  const GeodesicH unit{BoundaryPointH::finite(-1.0), BoundaryPointH::finite(1.0)};
  for (double s : {-2.0, -0.3, 0.0, 1.1}) {
    for (double t : {-1.0, 0.4, 2.5}) {
      CHECK(hyp_distance(geodesic_point(unit, I, s), geodesic_point(unit, I, t)) ==
            Approx(std::abs(s - t)).epsilon(1e-9));
    }
  }
  // Moving toward +1 from i.
  CHECK(geodesic_point(unit, I, 1.0).x > 0.0);
}

TEST_CASE("translation length is the minimal displacement") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> ux(-4, 4), uy(0.05, 4), ut(-3, 3);
  const auto group = fixtures::schottky_pair();
  for (int i = 0; i < 40; ++i) {
    const ReducedWord w = fixtures::random_word(rng, 2, 4);
    const MobiusMap g = group->evaluate(w);
    const double l = translation_length_h(g);
    if (w.empty()) continue;
    REQUIRE(classify(g) == IsometryClass::Loxodromic);
    const GeodesicH axis = axis_h(g);
    const MobiusMap inv = frame_of(axis).inverse();
    for (int j = 0; j < 20; ++j) {
      const HPoint p = inv.apply(HPoint{0.0, std::exp(ut(rng))});
      CHECK(std::abs(hyp_distance(p, g.apply(p)) - l) <= 1e-8);
    }
    for (int j = 0; j < 1000; ++j) {
      const HPoint z{ux(rng), uy(rng)};
      CHECK(hyp_distance(z, g.apply(z)) >= l - 1e-8);
    }
  }
}

TEST_CASE("classification agrees with translation length on generator words") {
  std::mt19937_64 rng(24);
  const auto group = fixtures::schottky_pair();
  for (int i = 0; i < 500; ++i) {
    const ReducedWord w = fixtures::random_word(rng, 2, 30);
    const MobiusMap g = group->evaluate(w);
    CHECK((classify(g) == IsometryClass::Loxodromic) == (translation_length_h(g) > kClassifyTolerance));
    CHECK((classify(g) == IsometryClass::Loxodromic) == !w.empty());
  }
}

TEST_CASE("axes are conjugation equivariant") {
  std::mt19937_64 rng(25);
  const auto group = fixtures::schottky_pair();
  for (int i = 0; i < 300; ++i) {
    ReducedWord w;
    while (w.empty()) w = fixtures::random_word(rng, 2, 4);
    const ReducedWord h = fixtures::random_word(rng, 2, 3);
    const MobiusMap g = group->evaluate(w), hm = group->evaluate(h);
    const GeodesicH a = axis_h(hm * g * hm.inverse());
    const GeodesicH b = axis_h(g);
    CHECK(same_boundary(a.from, hm.apply(b.from), 1e-8));
    CHECK(same_boundary(a.to, hm.apply(b.to), 1e-8));
  }
}

TEST_CASE("projective comparison") {
  const MobiusMap g(2, 1, 3, 2);
  const MobiusMap h(-2, -1, -3, -2);
  CHECK(g.projectively_equal(h, 1e-12));
  CHECK(g.sign_normalized().a() > 0);
  CHECK(std::abs(g.det() - 1.0) <= 1e-9);
}

TEST_CASE("scaled products") {
  const MobiusMap d(2, 0, 0, 0.5);
  ScaledMatrix m;
  for (int i = 0; i < 3000; ++i) m *= d;
  CHECK(m.displacement(I) == Approx(3000 * std::log(4.0)).epsilon(1e-12));
  CHECK(m.translation_length() == Approx(3000 * std::log(4.0)).epsilon(1e-12));
  CHECK(!m.fits_double());
  const auto group = fixtures::schottky_pair();
  std::mt19937_64 rng(26);
  for (int i = 0; i < 200; ++i) {
    const ReducedWord w = fixtures::random_word(rng, 2, 12);
    const MobiusMap g = group->evaluate(w);
    const ScaledMatrix s = group->evaluate_scaled(w);
    const HPoint base{0.3, 0.8};
    // Both sides round differently once entries reach e^10 or so.
    CHECK(s.displacement(base) == Approx(hyp_distance(base, g.apply(base))).epsilon(1e-6));
    CHECK(s.translation_length() == Approx(translation_length_h(g)).epsilon(1e-6));
    CHECK(s.offset_from_imaginary_axis(base) ==
          Approx(dist_to_geodesic(g.apply(base), {BoundaryPointH::finite(0.0), BoundaryPointH::infinity()}))
              .epsilon(1e-7));
  }
}

TEST_CASE("boundary points") {
  CHECK(BoundaryPointH::from_homogeneous(1.0, 0.0).is_infinite());
  CHECK(same_boundary(BoundaryPointH::finite(1e300), BoundaryPointH::infinity(), 1e-12));
  CHECK(boundary_distance(BoundaryPointH::finite(0.0), BoundaryPointH::infinity()) == Approx(2.0));
  CHECK(MobiusMap(0, 1, -1, 0).apply(BoundaryPointH::finite(0.0)).is_infinite());
}
