#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fixtures.hpp"
#include "hyperwalk/errors.hpp"
#include "hyperwalk/schottky.hpp"
#include "hyperwalk/symbolic.hpp"

using namespace hyperwalk;
using doctest::Approx;

namespace {
ReducedWord W(const char* s) { return ReducedWord::parse(s); }
}

TEST_CASE("certification of the example pair") {
  const auto gens = fixtures::pair_generators();
  const CertificationResult r = schottky_certify(gens);
  CHECK(r.certified);
  CHECK(!r.elementary);
  // Each boundary circle lands on the opposite circle.
  for (const auto& g : gens) {
    for (int s = 1; s < 100; ++s) {
      const HPoint q = g.map.apply(g.repelling.boundary_sample(s / 100.0));
      CHECK(std::abs(g.attracting.margin(q)) <= 1e-9 * std::max(1.0, std::hypot(q.x, q.y)));
    }
  }
}

TEST_CASE("certification failures") {
  auto gens = fixtures::pair_generators();
  std::vector<SchottkyGenerator> twice{gens[0], gens[0]};
  CHECK_THROWS_AS(schottky_certify(twice), DisksOverlap);
  const std::vector<SchottkyGenerator> single{gens[0]};
  const auto r = schottky_certify(single);
  CHECK(r.certified);
  CHECK(r.elementary);
  // Swapping the roles of the two g2 disks breaks the mapping condition.
  std::swap(gens[1].repelling, gens[1].attracting);
  CHECK_THROWS_AS(schottky_certify(gens), MappingViolation);
  // Closed half-planes all contain infinity, so two of them always touch.
  const std::vector<SchottkyGenerator> shift{
      {MobiusMap(1, 4, 0, 1), BoundaryDisk::left_of(-2.0), BoundaryDisk::right_of(2.0)}};
  CHECK_THROWS_AS(schottky_certify(shift), DisksOverlap);
  // z -> -1/(z - 2) - 2 sends the outside of the unit disk at 2 into the disk at -2.
  const MobiusMap flip = MobiusMap(1, -2, 0, 1) * MobiusMap(0, -1, 1, 0) * MobiusMap(1, -2, 0, 1);
  const std::vector<SchottkyGenerator> mixed{
      {flip, BoundaryDisk::inside(2.0, 1.0), BoundaryDisk::inside(-2.0, 1.0)}};
  CHECK(schottky_certify(mixed).certified);
}

TEST_CASE("disks") {
  const BoundaryDisk out = BoundaryDisk::outside(0.0, 3.0);
  CHECK(out.contains(BoundaryPointH::infinity()));
  CHECK(out.contains(HPoint{0.0, 4.0}));
  CHECK(!out.contains(HPoint{0.0, 2.0}));
  CHECK(BoundaryDisk::left_of(1.0).contains(HPoint{0.0, 5.0}));
  CHECK(BoundaryDisk::inside(1.25, 0.75).contains(BoundaryPointH::finite(2.0)));
}

TEST_CASE("fundamental domain reduction") {
  const auto group = fixtures::schottky_pair();
  const HPoint w = group->interior_point();
  REQUIRE(group->in_fundamental_domain(w));
  const Reduction same = group->reduce(w);
  CHECK(same.word.empty());
  CHECK(same.point.x == w.x);

  const Reduction one = group->reduce(fixtures::dilation3().apply(w));
  CHECK(one.word.str() == "A");
  CHECK(hyp_distance(one.point, w) <= 1e-12);

  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> ux(-2.9, 2.9), uy(0.01, 2.9);
  const ReducedWord deep = W("aba");
  int tried = 0;
  while (tried < 200) {
    const HPoint z{ux(rng), uy(rng)};
    if (!group->in_fundamental_domain(z)) continue;
    ++tried;
    const Reduction r = group->reduce(group->evaluate(deep).apply(z));
    CHECK(r.word == deep.inverse());
    CHECK(hyp_distance(r.point, z) <= 1e-9);
    // Reducing again is the identity.
    CHECK(group->reduce(r.point).word.empty());
  }
  for (int i = 0; i < 300; ++i) {
    const ReducedWord g = fixtures::random_word(rng, 2, 6);
    const auto back = group->decompose(group->evaluate(g));
    REQUIRE(back.has_value());
    CHECK(*back == g);
  }
}

TEST_CASE("reduction tracks tangent directions") {
  const auto group = fixtures::schottky_pair();
  const TangentH v{group->interior_point(), 0.7};
  const MobiusMap g = group->evaluate(W("bA"));
  const Reduction r = group->reduce(g.apply(v));
  CHECK(std::remainder(r.angle - v.angle, 2.0 * std::numbers::pi) == Approx(0.0).epsilon(1e-9));
}

TEST_CASE("limit points") {
  const auto group = fixtures::schottky_pair();
  const BoundaryPointH up = group->limit_point(ReducedWord(), W("a"));
  CHECK(boundary_distance(up, BoundaryPointH::infinity()) <= 1e-12);
  const BoundaryPointH down = group->limit_point(ReducedWord(), W("A"));
  CHECK(std::abs(down.value()) <= 1e-12);
  const BoundaryPointH minus = group->limit_point(ReducedWord(), W("b"));
  CHECK(minus.value() == Approx(-1.0));
  // b a^infinity = g2(infinity) = -5/4 / 1 ... = a/c.
  const BoundaryPointH mixed = group->limit_point(W("b"), W("a"));
  CHECK(mixed.value() == Approx((5.0 / 3.0) / (-4.0 / 3.0)));
}

TEST_CASE("closed geodesic pieces add up to the translation length") {
  const auto group = fixtures::schottky_pair();
  const auto a = W("a");
  const auto pa = closed_geodesic_pieces(*group, CyclicWord(std::vector<Letter>(a.letters().begin(), a.letters().end())));
  REQUIRE(pa.size() == 1);
  CHECK(pa[0].s_begin == Approx(-std::log(3.0)));
  CHECK(pa[0].s_end == Approx(std::log(3.0)));
  std::mt19937_64 rng(32);
  for (int i = 0; i < 200; ++i) {
    const ReducedWord w = fixtures::random_word(rng, 2, 40);
    const CyclicReduction red = cyclic_reduce(w);
    if (red.core.empty()) continue;
    double total = 0.0;
    for (const auto& p : closed_geodesic_pieces(*group, red.core)) {
      CHECK(p.length() > 0.0);
      CHECK(group->in_fundamental_domain(p.at(0.5 * (p.s_begin + p.s_end)).point, 1e-9));
      total += p.length();
    }
    CHECK(total == Approx(group->evaluate_scaled(red.core.as_word()).translation_length()).epsilon(1e-9));
  }
}

TEST_CASE("symbolic rays") {
  const auto group = fixtures::schottky_pair();
  ReducedWord ups;
  for (int i = 0; i < 100; ++i) ups.append(Letter::from_char('a'));
  SymbolicRay ray(group, {0.0, 1.0}, ups);
  CHECK(boundary_distance(ray.endpoint(), BoundaryPointH::infinity()) <= 1e-12);
  CHECK(ray.piece(0).length() == Approx(std::log(3.0)));
  CHECK(ray.piece(1).length() == Approx(2.0 * std::log(3.0)));
  CHECK(ray.piece_start(3) == Approx(5.0 * std::log(3.0)));
  const TangentH v = ray.point_at(0.5);
  CHECK(v.point.x == Approx(0.0));
  CHECK(v.point.y == Approx(std::exp(0.5)));
  CHECK(v.angle == Approx(std::numbers::pi / 2.0));
  CHECK_THROWS_AS(ray.point_at(1000.0), TooShort);

  // Ray along a random word: consecutive pieces join up in the group.
  std::mt19937_64 rng(33);
  ReducedWord w;
  while (w.size() < 200) w = fixtures::random_word(rng, 2, 400);
  SymbolicRay r2(group, group->interior_point(), w);
  for (std::size_t m = 1; m + 1 < r2.piece_count(); ++m) {
    const GeodesicPiece& prev = r2.piece(m - 1);
    const GeodesicPiece& cur = r2.piece(m);
    const MobiusMap step = group->matrix(w[m - 1]);
    const HPoint end_prev = prev.at(prev.s_end).point;
    const HPoint start_cur = step.apply(cur.at(cur.s_begin).point);
    CHECK(hyp_distance(end_prev, start_cur) <= 1e-7);
  }
}
