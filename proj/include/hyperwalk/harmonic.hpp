#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hyperwalk/walk.hpp"
#include "hyperwalk/word.hpp"

namespace hyperwalk {

// First-passage probabilities F(s): the chance that the walk from e ever
// visits the neighbor s. Indexed by Letter::code().
struct FirstPassageVector {
  int k = 0;
  std::vector<double> F;
  double residual = 0.0;
  std::size_t iterations = 0;

  double operator[](Letter s) const { return F[s.code()]; }
};

// Minimal nonnegative solution of F(s) = p(s) + F(s) sum_{t != s} p(t) F(t^-1),
// iterated from zero. Requires a nearest-neighbor step distribution.
FirstPassageVector first_passage_solve(const StepDistribution& mu, int k,
                                       std::size_t max_iterations = 1000000,
                                       double tolerance = 1e-12);

struct FirstPassageSample {
  std::vector<double> frequency;  // by letter code
  std::vector<double> std_error;
  std::size_t paths = 0;
};

// Monte Carlo hit frequencies; each walk runs until it reaches distance
// `escape` from e, recording which neighbors it visited on the way.
FirstPassageSample first_passage_mc(const StepDistribution& mu, int k, std::size_t paths,
                                    std::uint64_t seed, unsigned jobs, std::size_t escape = 100);

// Masses of boundary cylinders [w] for 1 <= |w| <= depth. Monte Carlo
// measures keep their sample count; exact ones have samples = 0.
struct CylinderMeasure {
  int k = 2;
  std::size_t depth = 0;
  std::map<ReducedWord, double> masses;
  std::size_t samples = 0;

  double mass(const ReducedWord& w) const;
  // Binomial standard error of an empirical mass (0 for exact measures).
  double std_error(const ReducedWord& w) const;
  std::vector<ReducedWord> words(std::size_t length) const;
};

// All reduced words of the given length over k generators, in Letter order.
std::vector<ReducedWord> reduced_words(int k, std::size_t length);

// Empirical law of the limit point, truncated to depth D, over `samples`
// independent paths of `steps` steps (0 selects 64 D + 256). Paths whose
// boundary estimate is shallower than D are dropped, up to 1%.
CylinderMeasure harmonic_cylinder_mc(const StepDistribution& mu, int k, std::size_t depth,
                                     std::size_t samples, std::uint64_t seed, unsigned jobs,
                                     std::size_t steps = 0);

// Markov description of the exit law: nu[w] = entry[w1] * prod q(w_i -> w_{i+1}).
struct HarmonicKernel {
  int k = 2;
  std::vector<double> entry;           // by letter code
  std::vector<std::vector<double>> q;  // q[t][s], zero when s = t^-1

  double cylinder(const ReducedWord& w) const;
  CylinderMeasure predict(std::size_t depth) const;
};

// Renewal construction: nu[x1..xm] = F(x1)...F(x_{m-1}) nu[xm] with
// nu[s] = F(s)(1 - F(s^-1)) / (1 - F(s)F(s^-1)).
HarmonicKernel harmonic_kernel(const FirstPassageVector& F, const StepDistribution& mu);

struct StationarityResult {
  double residual = 0.0;
  ReducedWord worst;
  double std_error_at_worst = 0.0;
  double max_std_error = 0.0;
};

// max over |w| < depth of |nu[w] - sum_s mu(s) nu(s^-1 [w])|.
StationarityResult stationarity_residual(const CylinderMeasure& nu, const StepDistribution& mu);

struct KernelValidation {
  double worst_sigma = 0.0;  // largest |predicted - empirical| / s.e.
  ReducedWord worst;
  double stationarity = 0.0;
};

// Gate (i): agreement with the Monte Carlo measure within `sigmas` standard
// errors at every depth it carries; gate (ii): stationarity of the
// prediction below `stationarity_gate`. Throws ValidationFailed.
KernelValidation validate_kernel(const HarmonicKernel& kernel, const CylinderMeasure& empirical,
                                 const StepDistribution& mu, double sigmas = 3.0,
                                 double stationarity_gate = 1e-12);

}  // namespace hyperwalk
