#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "hyperwalk/mobius.hpp"
#include "hyperwalk/model.hpp"
#include "hyperwalk/walk.hpp"
#include "hyperwalk/word.hpp"

namespace hyperwalk {

struct DriftEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t n = 0;
  std::size_t paths = 0;
};

// d(x0, omega_n x0) / n for one path.
double drift_sample(const Model& model, const SamplePath& path, std::size_t n);
DriftEstimate drift_estimate(const Model& model, const StepDistribution& mu, std::size_t n,
                             std::size_t paths, std::uint64_t seed, unsigned jobs);

// Limit point of a path. `prefix` is the part of the reduced expansion shared
// by every omega_m in the final quarter; half-plane models also carry the
// boundary point itself and the diameter (chordal) of the cylinder holding
// all final-quarter estimates.
struct BoundaryEstimate {
  TreeBoundaryPrefix prefix;
  std::optional<BoundaryPointH> point;
  double spread = 0.0;
};

inline constexpr double kDefaultBoundaryWidth = 1e-9;

// Window: omega_m for steps() - floor(steps()/4) <= m <= steps().
BoundaryEstimate boundary_estimate(const SamplePath& path, const Model& model,
                                   double width = kDefaultBoundaryWidth);

// d(omega_n x, geodesic from x to the boundary point) / n, x the model basepoint.
double tracking_stat(const SamplePath& path, std::size_t n, const Model& model,
                     const BoundaryEstimate& xi);

struct LengthLawSample {
  double ratio = 0.0;        // l(omega_n) / n
  std::size_t onset = 0;     // first index after which every omega_m is loxodromic
  bool never_lost = true;    // spot checks after the onset all loxodromic
};
LengthLawSample length_law_stat(const SamplePath& path, std::size_t n, const Model& model);

struct AxisCheck {
  bool pass = false;
  double worst_offset = 0.0;
  std::size_t samples = 0;
};

// Samples the ray from the basepoint toward xi at unit steps over
// [eps L n, (1 - eps) L n] and measures the distance to the axis of omega_n.
AxisCheck axis_tracking_check(const SamplePath& path, std::size_t n, const Model& model,
                              const BoundaryEstimate& xi, double eps, double c, double drift);

}  // namespace hyperwalk
