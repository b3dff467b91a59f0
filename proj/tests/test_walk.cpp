#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "hyperwalk/errors.hpp"
#include "hyperwalk/parallel.hpp"
#include "hyperwalk/random.hpp"
#include "hyperwalk/walk.hpp"

using namespace hyperwalk;

namespace {
ReducedWord W(const char* s) { return ReducedWord::parse(s); }
}

TEST_CASE("step distributions validate their atoms") {
  CHECK_THROWS_AS(StepDistribution({{W("a"), 0.5}, {W("b"), 0.4}}), InvalidArgument);
  CHECK_THROWS_AS(StepDistribution({{W("a"), 1.5}, {W("b"), -0.5}}), InvalidArgument);
  CHECK_NOTHROW(StepDistribution({{W("a"), 0.5}, {W("b"), 0.5 + 5e-13}}));
  const auto mu = StepDistribution::uniform_nearest_neighbor(2);
  CHECK(mu.size() == 4);
  CHECK(mu.nearest_neighbor());
  CHECK(!StepDistribution::point_mass(W("ab")).nearest_neighbor());
  CHECK(mu.sample(0.0) == 0);
  CHECK(mu.sample(0.9999999) == 3);
}

TEST_CASE("reflected measure") {
  const auto mu = StepDistribution::uniform_nearest_neighbor(2);
  const auto r = reflected(mu);
  for (const auto& a : mu.atoms()) CHECK(r.probability_of(a.element) == doctest::Approx(a.probability));
  const auto b = fixtures::biased();
  const auto rb = reflected(b);
  CHECK(rb.probability_of(W("A")) == doctest::Approx(0.4));
  CHECK(rb.probability_of(W("a")) == doctest::Approx(0.1));
  CHECK(rb.probability_of(W("b")) == doctest::Approx(0.25));
  const auto rr = reflected(rb);
  for (const auto& a : b.atoms()) CHECK(rr.probability_of(a.element) == a.probability);
}

TEST_CASE("sample paths") {
  const auto pm = sample_path(StepDistribution::point_mass(W("a")), 3, 1, 0);
  CHECK(pm.prefix(1).str() == "a");
  CHECK(pm.prefix(2).str() == "aa");
  CHECK(pm.prefix(3).str() == "aaa");
  CHECK(pm.prefix(0).empty());

  const auto mu = StepDistribution::uniform_nearest_neighbor(2);
  const auto p1 = sample_path(mu, 5000, 7, 0), p2 = sample_path(mu, 5000, 7, 0);
  const auto p3 = sample_path(mu, 5000, 7, 1);
  bool differ = false;
  for (std::size_t m = 1; m <= 5000; ++m) {
    REQUIRE(p1.increment_index(m) == p2.increment_index(m));
    differ = differ || p1.increment_index(m) != p3.increment_index(m);
  }
  CHECK(p1.prefix(5000) == p2.prefix(5000));
  CHECK(differ);
}

TEST_CASE("prefix products satisfy omega_m = omega_{m-1} h_m") {
  const auto mu = StepDistribution({{W("ab"), 0.3}, {W("Ba"), 0.2}, {W("b"), 0.25}, {W("AB"), 0.25}});
  std::mt19937_64 rng(41);
  for (std::uint64_t path = 0; path < 5; ++path) {
    const auto p = sample_path(mu, 20000, 99, path);
    std::uniform_int_distribution<std::size_t> idx(1, p.steps());
    for (int i = 0; i < 100; ++i) {
      const std::size_t m = idx(rng);
      CHECK(p.prefix(m - 1) * p.increment(m) == p.prefix(m));
      CHECK(p.length(m) == p.prefix(m).size());
    }
  }
}

TEST_CASE("stable prefixes agree with brute force") {
  const auto mu = StepDistribution::uniform_nearest_neighbor(2);
  for (std::uint64_t path = 0; path < 20; ++path) {
    const auto p = sample_path(mu, 400, 5, path);
    for (std::size_t from : {1ul, 100ul, 300ul}) {
      ReducedWord common = p.prefix(from);
      for (std::size_t m = from; m <= 400; ++m) {
        common.truncate(common_prefix_length(common.letters(), p.prefix(m).letters()));
      }
      CHECK(p.stable_prefix(from, 400) == common);
      CHECK(p.stable_depth(from, 400) == common.size());
    }
    std::size_t last = 0;
    for (std::size_t m = 1; m <= 400; ++m) {
      if (p.prefix(m).empty()) last = m;
    }
    CHECK(p.last_identity_visit() == last);
  }
}

TEST_CASE("increment frequencies match the atoms") {
  const auto mu = fixtures::biased();
  const std::size_t n = 1000000;
  const auto p = sample_path(mu, n, 2024, 0);
  std::vector<double> counts(mu.size(), 0.0);
  for (std::size_t m = 1; m <= n; ++m) counts[p.increment_index(m)] += 1.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const double q = mu.atoms()[i].probability;
    const double se = std::sqrt(q * (1 - q) / static_cast<double>(n));
    CHECK(std::abs(counts[i] / static_cast<double>(n) - q) <= 3 * se);
  }
}

TEST_CASE("counter streams are schedule independent") {
  const CounterStream s(7, 3);
  CHECK(s.bits(10) == CounterStream(7, 3).bits(10));
  CHECK(s.bits(10) != CounterStream(7, 4).bits(10));
  CHECK(s.uniform(5) >= 0.0);
  CHECK(s.uniform(5) < 1.0);
  const auto serial = parallel_map(1000, 1, [](std::size_t i) { return CounterStream(1, i).bits(i); });
  const auto threaded = parallel_map(1000, 8, [](std::size_t i) { return CounterStream(1, i).bits(i); });
  CHECK(serial == threaded);
  CHECK_THROWS_AS(parallel_map(100, 4,
                               [](std::size_t i) -> int {
                                 if (i % 10 == 3) throw InvalidArgument(std::to_string(i));
                                 return 0;
                               }),
                  InvalidArgument);
}

TEST_CASE("generation check") {
  const auto nn = generation_check(StepDistribution::uniform_nearest_neighbor(2), 3, 2);
  CHECK(nn.nonelementary);
  CHECK(nn.generates);
  const auto pm = generation_check(StepDistribution::point_mass(W("a")), 3, 2);
  CHECK(!pm.nonelementary);
  CHECK(!pm.warnings.empty());
  const auto line = generation_check(StepDistribution({{W("a"), 0.5}, {W("A"), 0.5}}), 4, 2);
  CHECK(!line.nonelementary);
  const auto group = fixtures::schottky_pair();
  const auto sch = generation_check(StepDistribution::uniform_nearest_neighbor(2), 2, 2, group.get());
  CHECK(sch.nonelementary);
  CHECK(sch.witness_first == "a");
  CHECK(sch.witness_second == "b");
}
