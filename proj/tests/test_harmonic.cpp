#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <thread>

#include "fixtures.hpp"
#include "hyperwalk/errors.hpp"
#include "hyperwalk/harmonic.hpp"

using namespace hyperwalk;
using doctest::Approx;

namespace {

ReducedWord W(const char* s) { return ReducedWord::parse(s); }

unsigned jobs() { return std::max(1u, std::thread::hardware_concurrency()); }

// nu[w] = (1/4)(1/3)^{|w|-1}, written out independently of the kernel.
CylinderMeasure exact_uniform(std::size_t depth) {
  CylinderMeasure m;
  m.k = 2;
  m.depth = depth;
  for (std::size_t len = 1; len <= depth; ++len)
    for (const auto& w : reduced_words(2, len)) m.masses[w] = 0.25 * std::pow(1.0 / 3.0, double(len - 1));
  return m;
}

}  // namespace

TEST_CASE("first passage closed form on uniform walks") {
  for (int k : {2, 3, 5}) {
    const auto F = first_passage_solve(StepDistribution::uniform_nearest_neighbor(k), k);
    CHECK(F.residual <= 1e-12);
    for (double f : F.F) CHECK(std::abs(f - 1.0 / (2 * k - 1)) <= 1e-10);
  }
}

TEST_CASE("first passage rejects steps that are not single letters") {
  CHECK_THROWS_AS(first_passage_solve(StepDistribution::point_mass(W("ab")), 2), InvalidArgument);
}

TEST_CASE("truncated iteration stays below the fixed point") {
  const auto mu = fixtures::biased();
  const auto full = first_passage_solve(mu, 2);
  // Fewer iterations cannot converge, but the partial values are monotone.
  CHECK_THROWS_AS(first_passage_solve(mu, 2, 5), NonConvergence);
  for (std::size_t cap : {std::size_t(50), std::size_t(500)}) {
    try {
      const auto part = first_passage_solve(mu, 2, cap, 1.0);
      for (std::size_t i = 0; i < part.F.size(); ++i) CHECK(part.F[i] <= full.F[i] + full.residual);
    } catch (const NonConvergence&) {
    }
  }
}

TEST_CASE("biased first passage agrees with hit frequencies") {
  const auto mu = fixtures::biased();
  const auto F = first_passage_solve(mu, 2);
  CHECK(F.residual <= 1e-12);
  // a is favored, so reaching a is likelier than reaching A.
  CHECK(F[Letter::from_code(0)] > F[Letter::from_code(1)]);
  const auto mc = first_passage_mc(mu, 2, 1000000, 11, jobs());
  for (std::size_t i = 0; i < F.F.size(); ++i) {
    INFO("letter code " << i);
    CHECK(std::abs(mc.frequency[i] - F.F[i]) <= 3.0 * mc.std_error[i]);
  }
}

TEST_CASE("Monte Carlo cylinder measures") {
  const auto mu = StepDistribution::uniform_nearest_neighbor(2);
  const auto m = harmonic_cylinder_mc(mu, 2, 2, 100000, 5, jobs());
  double tv = 0.0;
  for (const auto& w : reduced_words(2, 1)) CHECK(std::abs(m.mass(w) - 0.25) <= 3.0 * m.std_error(w));
  for (const auto& w : reduced_words(2, 2)) {
    CHECK(std::abs(m.mass(w) - 1.0 / 12) <= 3.0 * m.std_error(w));
    tv += 0.5 * std::abs(m.mass(w) - 1.0 / 12);
  }
  CHECK(tv <= 0.01);
  // Depth-1 masses are the sums of their depth-2 children.
  for (const auto& w : reduced_words(2, 1)) {
    double children = 0.0;
    for (const auto& c : reduced_words(2, 2))
      if (c.prefix(1) == w) children += m.mass(c);
    CHECK(children == Approx(m.mass(w)).epsilon(1e-12));
  }

  const auto pm = harmonic_cylinder_mc(StepDistribution::point_mass(W("ab")), 2, 2, 1000, 5, jobs());
  CHECK(pm.mass(W("ab")) == 1.0);
  CHECK(pm.mass(W("a")) == 1.0);
  CHECK(pm.mass(W("ba")) == 0.0);
}

TEST_CASE("cylinder measures do not depend on the thread count") {
  const auto mu = fixtures::biased();
  const auto one = harmonic_cylinder_mc(mu, 2, 3, 5000, 9, 1);
  const auto many = harmonic_cylinder_mc(mu, 2, 3, 5000, 9, 8);
  CHECK(one.masses == many.masses);
}

TEST_CASE("uniform kernel") {
  const auto mu = StepDistribution::uniform_nearest_neighbor(2);
  const auto kernel = harmonic_kernel(first_passage_solve(mu, 2), mu);
  for (int s = 0; s < 4; ++s) {
    CHECK(kernel.entry[s] == Approx(0.25).epsilon(1e-12));
    for (int t = 0; t < 4; ++t) {
      if (Letter::from_code(std::uint8_t(t)) == Letter::from_code(std::uint8_t(s)).inverse())
        CHECK(kernel.q[s][t] == 0.0);
      else
        CHECK(kernel.q[s][t] == Approx(1.0 / 3).epsilon(1e-12));
    }
  }
  CHECK(kernel.cylinder(W("abA")) == Approx(0.25 / 9).epsilon(1e-12));
  const auto empirical = harmonic_cylinder_mc(mu, 2, 3, 100000, 21, jobs());
  const auto v = validate_kernel(kernel, empirical, mu);
  CHECK(v.worst_sigma <= 3.0);
  CHECK(v.stationarity <= 1e-12);
}

TEST_CASE("biased kernel passes both gates") {
  const auto mu = fixtures::biased();
  const auto kernel = harmonic_kernel(first_passage_solve(mu, 2), mu);
  double total = 0.0;
  for (double e : kernel.entry) total += e;
  CHECK(total == Approx(1.0).epsilon(1e-12));
  for (int t = 0; t < 4; ++t) {
    double row = 0.0;
    for (double q : kernel.q[t]) row += q;
    CHECK(row == Approx(1.0).epsilon(1e-12));
  }
  // Kernel predictions are exactly consistent: nu[w] = sum_s nu[ws].
  const auto pred = kernel.predict(4);
  for (std::size_t len = 1; len < 4; ++len)
    for (const auto& w : reduced_words(2, len)) {
      double children = 0.0;
      for (const auto& c : reduced_words(2, len + 1))
        if (c.prefix(len) == w) children += pred.mass(c);
      CHECK(children == Approx(pred.mass(w)).epsilon(1e-12));
    }
  const auto empirical = harmonic_cylinder_mc(mu, 2, 3, 200000, 22, jobs());
  const auto v = validate_kernel(kernel, empirical, mu);
  CHECK(v.worst_sigma <= 3.0);
  CHECK(v.stationarity <= 1e-12);
}

TEST_CASE("point mass has no kernel") {
  const auto mu = StepDistribution::point_mass(W("ab"));
  CHECK_THROWS_AS(harmonic_kernel(first_passage_solve(mu, 2), mu), InvalidArgument);
}

TEST_CASE("stationarity residual") {
  const auto mu = StepDistribution::uniform_nearest_neighbor(2);
  CHECK(stationarity_residual(exact_uniform(3), mu).residual <= 1e-12);
  CHECK(stationarity_residual(exact_uniform(5), mu).residual <= 1e-12);
  CHECK_THROWS_AS(stationarity_residual(exact_uniform(1), mu), DepthInsufficient);

  auto bumped = exact_uniform(3);
  bumped.masses[W("a")] += 0.05;
  CHECK(stationarity_residual(bumped, mu).residual >= 0.01);

  const auto mc = harmonic_cylinder_mc(mu, 2, 2, 1000000, 31, jobs());
  const auto r = stationarity_residual(mc, mu);
  CHECK(r.max_std_error > 0.0);
  CHECK(r.residual <= 2.0 * r.std_error_at_worst);
}
