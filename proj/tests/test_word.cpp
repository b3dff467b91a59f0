#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "hyperwalk/errors.hpp"
#include "hyperwalk/word.hpp"

using namespace hyperwalk;

namespace {
ReducedWord W(const char* s) { return ReducedWord::parse(s); }
CyclicWord cyc(const char* s) {
  const auto w = W(s);
  return CyclicWord(std::vector<Letter>(w.letters().begin(), w.letters().end()));
}
}  // namespace

TEST_CASE("letters and parsing") {
  const Letter a = Letter::from_char('a');
  CHECK(a.inverse().inverse() == a);
  CHECK(a.inverse().generator() == a.generator());
  CHECK(a.inverse().sign() == -1);
  CHECK(W("abA").str() == "abA");
  CHECK(W("1").empty());
  CHECK_THROWS_AS(W(""), InvalidArgument);
  CHECK(W("aAb").str() == "b");
  CHECK_THROWS_AS(W("a1"), InvalidArgument);
  CHECK_THROWS_AS(ReducedWord::parse("ac", 2), InvalidArgument);
}

TEST_CASE("multiply_reduce") {
  CHECK((W("ab") * W("Ba")).str() == "aa");
  CHECK((W("a") * W("A")).empty());
  CHECK((W("ab") * W("cd")).str() == "abcd");
  std::mt19937_64 rng(11);
  for (int i = 0; i < 2000; ++i) {
    const auto u = fixtures::random_word(rng, 3, 8), v = fixtures::random_word(rng, 3, 8),
               w = fixtures::random_word(rng, 3, 8);
    CHECK((u * v) * w == u * (v * w));
    CHECK(u * ReducedWord() == u);
    CHECK((u * u.inverse()).empty());
  }
}

TEST_CASE("tree distance examples") {
  CHECK(tree_distance(W("1"), W("ab")) == 2);
  CHECK(tree_distance(W("ab"), W("ab")) == 0);
  CHECK(tree_distance(W("a"), W("b")) == 2);
}

TEST_CASE("tree distance is a left-invariant metric") {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 10000; ++i) {
    const auto u = fixtures::random_word(rng, 2, 10), v = fixtures::random_word(rng, 2, 10),
               w = fixtures::random_word(rng, 2, 10), g = fixtures::random_word(rng, 2, 10);
    const auto duv = tree_distance(u, v);
    REQUIRE(duv == tree_distance(v, u));
    REQUIRE((duv == 0) == (u == v));
    REQUIRE(tree_distance(u, w) <= duv + tree_distance(v, w));
    REQUIRE(tree_distance(g * u, g * v) == duv);
  }
}

TEST_CASE("cyclic reduction") {
  const auto r = cyclic_reduce(W("abaBA"));
  CHECK(r.core.str() == "a");
  CHECK(r.conjugator.str() == "ab");
  CHECK(cyclic_reduce(W("abab")).core.str() == "abab");
  CHECK(cyclic_reduce(W("abab")).conjugator.empty());
  CHECK(cyclic_reduce(W("1")).core.empty());
  std::mt19937_64 rng(13);
  for (int i = 0; i < 3000; ++i) {
    const auto g = fixtures::random_word(rng, 3, 14);
    const auto red = cyclic_reduce(g);
    CHECK(red.conjugator * red.core.as_word() * red.conjugator.inverse() == g);
    if (red.core.size() > 1) CHECK(red.core[0] != red.core[red.core.size() - 1].inverse());
  }
}

TEST_CASE("cyclic words") {
  CHECK(cyc("baab").canonical().str() == "aabb");
  CHECK(cyc("baab") == cyc("abba"));
  CHECK(!(cyc("ab") == cyc("aB")));
  CHECK(cyc("abab").primitive_root().str() == "ab");
  CHECK(cyc("abAB").primitive_root().str() == "abAB");
  CHECK_THROWS_AS(cyc("abA"), InvalidArgument);
}

TEST_CASE("translation length") {
  CHECK(translation_length_tree(W("abaBA")) == 1);
  CHECK(translation_length_tree(W("abab")) == 4);
  CHECK(translation_length_tree(W("abab")) == 2 * translation_length_tree(W("ab")));
  CHECK(translation_length_tree(W("1")) == 0);
  std::mt19937_64 rng(14);
  for (int i = 0; i < 2000; ++i) {
    const auto g = fixtures::random_word(rng, 2, 10), h = fixtures::random_word(rng, 2, 10);
    CHECK(translation_length_tree(h * g * h.inverse()) == translation_length_tree(g));
    const auto l = translation_length_tree(g);
    if (l > 0) {
      for (int m = 1; m <= 20; m += 3) CHECK(translation_length_tree(power(g, m)) == m * l);
    }
  }
}

TEST_CASE("translation length is the minimal displacement, attained on the axis") {
  // All vertices within radius 6 of e.
  std::vector<ReducedWord> ball{ReducedWord()};
  for (std::size_t start = 0; start < ball.size(); ++start) {
    const ReducedWord v = ball[start];
    if (v.size() == 6) continue;
    for (char c : std::string("aAbB")) {
      const Letter x = Letter::from_char(c);
      if (!v.empty() && v.back() == x.inverse()) continue;
      ReducedWord u = v;
      u.append(x);
      ball.push_back(u);
    }
  }
  std::mt19937_64 rng(15);
  for (int i = 0; i < 40; ++i) {
    ReducedWord g;
    while (g.empty()) g = fixtures::random_word(rng, 2, 6);
    const std::size_t l = translation_length_tree(g);
    const TreeAxis axis = axis_tree(g);
    std::size_t best = SIZE_MAX;
    for (const auto& x : ball) {
      const std::size_t d = tree_distance(x, g * x);
      best = std::min(best, d);
      CHECK(d >= l);
      if (axis.distance_to(x) == 0) CHECK(d == l);
      // Displacement grows by two per unit of distance from the axis.
      CHECK(d == l + 2 * axis.distance_to(x));
    }
    CHECK(best == l);
    for (long j = -3; j <= 3; ++j) CHECK(tree_distance(axis.vertex(j), g * axis.vertex(j)) == l);
  }
}

TEST_CASE("axes") {
  const TreeAxis ab = axis_tree(W("ab"));
  CHECK(ab.distance_to(W("1")) == 0);
  CHECK(ab.distance_to(W("ababa")) == 0);
  CHECK(ab.distance_to(W("BA")) == 0);
  const TreeAxis conj = axis_tree(W("abaBA"));
  CHECK(conj.conjugator.str() == "ab");
  CHECK(conj.period.str() == "a");
  CHECK(conj.distance_to(W("abaaa")) == 0);
  CHECK(conj.distance_to(W("a")) == 1);
  const TreeAxis down = axis_tree(W("A"));
  CHECK(down.vertex(1).str() == "A");
  CHECK(down.vertex(-2).str() == "aa");
  CHECK_THROWS_AS(axis_tree(W("1")), NotLoxodromic);
}

TEST_CASE("distance to a ray") {
  CHECK(distance_to_ray(W("ab"), {W("accc")}) == 1);
  CHECK(distance_to_ray(W("aa"), {W("aaab")}) == 0);
  CHECK(distance_to_ray(W("B"), {W("aa")}) == 1);
  CHECK_THROWS_AS(distance_to_ray(W("abab"), {W("ab")}), PrefixTooShallow);
}

TEST_CASE("least rotation") {
  const auto w = W("bab");
  CHECK(least_rotation_offset(W("bba").letters()) == 2);
  CHECK(least_rotation_offset(w.letters()) == 1);
  CHECK(least_rotation_offset(W("aaa").letters()) == 0);
}
